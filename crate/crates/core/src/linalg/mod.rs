//! Exact linear algebra over the integers.

mod group;
mod homology;
mod matrix;
mod scalar;
mod snf;

pub use group::{format_order, FgAbGroup};
pub use homology::{homology, reduce, Morphism, Subquotient};
pub use matrix::{IntMatrix, Matrix};
pub use scalar::Scalar;
pub use snf::{smith_normal_form, smith_normal_form_in, SmithForm, Transforms};
