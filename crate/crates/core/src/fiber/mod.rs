//! The fiber sequence `L -> ko -> ko` of `psi3 - 1` on E1 pages.

mod model;
mod psi;
pub mod valuation;

pub use model::{D1Row, D1Term, FiberFile, FiberModel, LFamily, LGenerator, Parity};
pub use psi::{psi3_minus_1_matrix, psi_split, PsiSplit};
pub use valuation::{iota_order, three_pow_minus_one, v2, v2_big, val_3n_minus_1};
