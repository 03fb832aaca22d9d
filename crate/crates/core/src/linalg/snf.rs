//! Smith normal form over the integers with transformation matrices.

use num_bigint::BigInt;

use super::matrix::Matrix;
use super::scalar::Scalar;
use super::IntMatrix;

/// `u * a * v = d`, with `d` diagonal, nonnegative and `d[i] | d[i+1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm<T = BigInt> {
    pub d: Matrix<T>,
    pub u: Matrix<T>,
    pub v: Matrix<T>,
    pub u_inv: Matrix<T>,
    pub v_inv: Matrix<T>,
}

impl<T: Scalar> SmithForm<T> {
    /// Nonzero diagonal entries, in order.
    pub fn invariants(&self) -> Vec<T> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).take_while(|x| !x.is_nil()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariants().len()
    }
}

/// Which transformation matrices to track.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transforms {
    pub rows: bool,
    pub columns: bool,
}

impl Transforms {
    pub const ALL: Transforms = Transforms { rows: true, columns: true };
    pub const ROWS: Transforms = Transforms { rows: true, columns: false };
    pub const COLUMNS: Transforms = Transforms { rows: false, columns: true };
}

struct Work<T> {
    a: Matrix<T>,
    u: Matrix<T>,
    u_inv: Matrix<T>,
    v: Matrix<T>,
    v_inv: Matrix<T>,
    track: Transforms,
}

impl<T: Scalar> Work<T> {
    fn row_add(&mut self, target: usize, source: usize, k: &T) -> Option<()> {
        self.a.add_row_multiple(target, source, k)?;
        if self.track.rows {
            self.u.add_row_multiple(target, source, k)?;
            self.u_inv.add_col_multiple(source, target, &k.negated()?)?;
        }
        Some(())
    }

    fn col_add(&mut self, target: usize, source: usize, k: &T) -> Option<()> {
        self.a.add_col_multiple(target, source, k)?;
        if self.track.columns {
            self.v.add_col_multiple(target, source, k)?;
            self.v_inv.add_row_multiple(source, target, &k.negated()?)?;
        }
        Some(())
    }

    fn row_swap(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        if self.track.rows {
            self.u.swap_rows(x, y);
            self.u_inv.swap_cols(x, y);
        }
    }

    fn col_swap(&mut self, x: usize, y: usize) {
        self.a.swap_cols(x, y);
        if self.track.columns {
            self.v.swap_cols(x, y);
            self.v_inv.swap_rows(x, y);
        }
    }

    fn row_negate(&mut self, i: usize) -> Option<()> {
        self.a.negate_row(i)?;
        if self.track.rows {
            self.u.negate_row(i)?;
            self.u_inv.negate_col(i)?;
        }
        Some(())
    }

    /// Smallest nonzero entry (by absolute value, then row-major position) in
    /// the lower-right block starting at `t`.
    fn pivot(&self, t: usize) -> Option<Option<(usize, usize)>> {
        let mut best: Option<((usize, usize), T)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_nil() {
                    continue;
                }
                let m = x.magnitude()?;
                if best.as_ref().is_none_or(|(_, b)| m < *b) {
                    best = Some(((i, j), m));
                }
            }
        }
        Some(best.map(|(p, _)| p))
    }
}

/// Smith form over the scalar type `T`, or `None` if `T` overflowed.
///
/// Transformation matrices that are not tracked are left as empty matrices.
pub fn smith_normal_form_in<T: Scalar>(a: &Matrix<T>, track: Transforms) -> Option<SmithForm<T>> {
    let (m, n) = (a.rows(), a.cols());
    let (um, vn) = (if track.rows { m } else { 0 }, if track.columns { n } else { 0 });
    let mut w = Work {
        a: a.clone(),
        u: Matrix::identity(um),
        u_inv: Matrix::identity(um),
        v: Matrix::identity(vn),
        v_inv: Matrix::identity(vn),
        track,
    };
    for t in 0..m.min(n) {
        let Some((pi, pj)) = w.pivot(t)? else { break };
        w.row_swap(t, pi);
        w.col_swap(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if w.a[(i, t)].is_nil() {
                    continue;
                }
                let q = w.a[(i, t)].floor_div(&w.a[(t, t)])?;
                w.row_add(i, t, &q.negated()?)?;
                if !w.a[(i, t)].is_nil() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if w.a[(t, j)].is_nil() {
                    continue;
                }
                let q = w.a[(t, j)].floor_div(&w.a[(t, t)])?;
                w.col_add(j, t, &q.negated()?)?;
                if !w.a[(t, j)].is_nil() {
                    dirty = true;
                }
            }
            if dirty {
                // A remainder smaller than the pivot appeared; move it into place.
                let (pi, pj) = smallest_in_cross(&w.a, t)?;
                w.row_swap(t, pi);
                w.col_swap(t, pj);
                continue;
            }
            let pivot = w.a[(t, t)].magnitude()?;
            let offending = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !w.a[(i, j)].floor_mod(&pivot).is_nil());
            match offending {
                Some((i, _)) => w.row_add(t, i, &T::unit())?,
                None => break,
            }
        }
        if w.a[(t, t)].is_neg() {
            w.row_negate(t)?;
        }
    }
    Some(SmithForm { d: w.a, u: w.u, v: w.v, u_inv: w.u_inv, v_inv: w.v_inv })
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    smith_normal_form_in(a, Transforms::ALL).expect("big integers do not overflow")
}

fn smallest_in_cross<T: Scalar>(a: &Matrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut best = (t, t);
    let mut best_abs = a[best].magnitude()?;
    let cells = (t..a.rows()).map(|i| (i, t)).chain((t..a.cols()).map(|j| (t, j)));
    for (i, j) in cells {
        let x = &a[(i, j)];
        if x.is_nil() {
            continue;
        }
        let m = x.magnitude()?;
        if best_abs.is_nil() || m < best_abs {
            best = (i, j);
            best_abs = m;
        }
    }
    Some(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn check(a: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(a.rows()));
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(a.cols()));
        assert_eq!(s.u_inv.mul(&s.d).mul(&s.v_inv), *a);
        let inv = s.invariants();
        for pair in inv.windows(2) {
            assert!((&pair[1] % &pair[0]).is_zero());
        }
        s
    }

    #[test]
    fn identity_and_diagonal() {
        assert_eq!(check(&IntMatrix::identity(2)).d, IntMatrix::identity(2));
        assert_eq!(check(&IntMatrix::diagonal(&[2, 0])).d, IntMatrix::diagonal(&[2, 0]));
    }

    #[test]
    fn divisibility_is_enforced() {
        let s = check(&IntMatrix::diagonal(&[4, 6]));
        assert_eq!(s.invariants(), vec![BigInt::from(2), BigInt::from(12)]);
    }

    #[test]
    fn rectangular_and_empty() {
        check(&IntMatrix::from_rows(&[vec![3, 5, 7], vec![0, 0, 0]]));
        check(&IntMatrix::zeros(0, 3));
        check(&IntMatrix::zeros(2, 0));
    }
}
