//! Spectral sequence pages, differentials and page turning.

mod dump;
mod engine;
mod rule;
mod schedule;
mod window;

pub use dump::{dump_page, dump_pages};
pub use engine::{DegreeGroup, Page, SpectralSequence, Summand};
pub use rule::{Exclusion, RuleAssignment, RulePattern};
pub use schedule::{leibniz_extend, DifferentialSchedule};
pub use window::Window;
