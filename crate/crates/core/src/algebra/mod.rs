//! Tri-graded commutative monomial algebras with torsion and rewrite rules.

mod element;
pub mod enumerate;
pub mod file;
mod monomial;
mod presentation;

pub use element::Element;
pub use monomial::Monomial;
pub use presentation::{
    split_coefficient, BasisPiece, DifferentialFamily, GeneratorSpec, Presentation, RewriteRule, Style,
};
