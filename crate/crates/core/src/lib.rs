//! Exact-arithmetic engine for effective slice spectral sequences.

pub mod algebra;
pub mod chart;
pub mod cell;
pub mod degree;
pub mod error;
pub mod eta;
pub mod fiber;
pub mod homotopy;
pub mod linalg;
pub mod objects;
pub mod ss;

pub use degree::{EtaDegree, TriDegree};
pub use error::{EngineError, Result};
pub mod verify;
