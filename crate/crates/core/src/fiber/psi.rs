//! The Adams operation `psi3` on E1 pages and its kernel and cokernel.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{BasisPiece, Monomial, Presentation};
use crate::degree::TriDegree;
use crate::error::{EngineError, Result};
use crate::linalg::{homology, IntMatrix, Morphism};

/// Matrix of `psi3 - 1` on `basis_at(p, d)` in the monomial basis
/// (column `j` is the image of the `j`-th monomial).
pub fn psi3_minus_1_matrix(p: &Presentation, d: TriDegree) -> Result<(BasisPiece, IntMatrix)> {
    let basis = p.basis_at(d);
    let n = basis.len();
    let mut m = IntMatrix::zeros(n, n);
    for (j, mono) in basis.monomials.iter().enumerate() {
        for (t, c) in p.psi3_monomial(mono)? {
            let i = basis.monomials.iter().position(|x| *x == t).ok_or_else(|| {
                EngineError::Consistency(format!("psi3 leaves the basis of {} in degree {d}", p.name()))
            })?;
            m[(i, j)] += c;
        }
        m[(j, j)] -= BigInt::one();
    }
    Ok((basis, m))
}

/// Kernel and (2-local) cokernel of `psi3 - 1` in one degree, as monomials
/// with orders.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PsiSplit {
    pub kernel: Vec<(Monomial, u64)>,
    pub cokernel: Vec<(Monomial, u64)>,
}

fn single_monomial(basis: &BasisPiece, lift: &[BigInt]) -> Option<Monomial> {
    let nonzero: Vec<usize> = (0..lift.len()).filter(|&i| !lift[i].is_zero()).collect();
    match nonzero[..] {
        // An odd multiple of a monomial generates the same 2-local summand.
        [i] if lift[i].is_one() || num_integer::Integer::is_odd(&lift[i]) => Some(basis.monomials[i].clone()),
        _ => None,
    }
}

fn is_diagonal(m: &IntMatrix) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| i == j || m[(i, j)].is_zero()))
}

/// The split when `psi3 - 1` is diagonal in the monomial basis, or `None`
/// if some kernel generator would be a proper multiple of a monomial.
fn diagonal_split(basis: &BasisPiece, m: &IntMatrix) -> Option<PsiSplit> {
    let mut split = PsiSplit::default();
    for (j, (mono, &order)) in basis.monomials.iter().zip(&basis.orders).enumerate() {
        let c = &m[(j, j)];
        let v = if c.is_zero() { None } else { Some(c.trailing_zeros().unwrap_or(0)) };
        match (order, v) {
            (0, None) => {
                split.kernel.push((mono.clone(), 0));
                split.cokernel.push((mono.clone(), 0));
            }
            (0, Some(v)) => {
                if v > 0 {
                    split.cokernel.push((mono.clone(), 1u64.checked_shl(v as u32)?));
                }
            }
            (o, v) => {
                let k = o.trailing_zeros() as u64;
                let v = v.map_or(k, |v| v.min(k));
                if v < k {
                    return None;
                }
                split.kernel.push((mono.clone(), o));
                if v > 0 {
                    split.cokernel.push((mono.clone(), 1u64 << v));
                }
            }
        }
    }
    split.kernel.sort();
    split.cokernel.sort();
    Some(split)
}

pub fn psi_split(p: &Presentation, d: TriDegree) -> Result<PsiSplit> {
    let (basis, m) = psi3_minus_1_matrix(p, d)?;
    if basis.is_empty() {
        return Ok(PsiSplit::default());
    }
    if is_diagonal(&m) {
        if let Some(split) = diagonal_split(&basis, &m) {
            return Ok(split);
        }
    }
    general_split(&basis, m, d)
}

fn general_split(basis: &BasisPiece, m: IntMatrix, d: TriDegree) -> Result<PsiSplit> {
    let map = Morphism { source_orders: basis.orders.clone(), target_orders: basis.orders.clone(), matrix: m };
    let ker = homology(&basis.orders, None, Some(&map))?;
    let coker = homology(&basis.orders, Some(&map), None)?;
    let collect = |sq: &crate::linalg::Subquotient, what: &str| -> Result<Vec<(Monomial, u64)>> {
        sq.lifts
            .iter()
            .zip(&sq.orders)
            .map(|(l, &o)| {
                single_monomial(basis, l).map(|m| (m, o)).ok_or_else(|| {
                    EngineError::Construction(format!(
                        "{what} of psi3 - 1 in degree {d} is not spanned by monomials; unsupported"
                    ))
                })
            })
            .collect()
    };
    let mut split = PsiSplit { kernel: collect(&ker, "kernel")?, cokernel: collect(&coker, "cokernel")? };
    split.kernel.sort();
    split.cokernel.sort();
    Ok(split)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objects::Catalog;

    #[test]
    fn diagonal_path_agrees_with_homology() {
        let p = Catalog::global().presentation("ko").unwrap();
        for s in -2..12 {
            for f in 0..8 {
                for w in -6..8 {
                    let d = TriDegree::new(s, f, w);
                    let (basis, m) = psi3_minus_1_matrix(&p, d).unwrap();
                    if basis.is_empty() {
                        continue;
                    }
                    let fast = diagonal_split(&basis, &m).unwrap();
                    assert_eq!(fast, general_split(&basis, m, d).unwrap(), "{d}");
                }
            }
        }
    }
}
