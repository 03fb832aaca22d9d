//! Subquotients `ker(d_out) / im(d_in)` of direct sums of cyclic groups.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::matrix::Matrix;
use super::scalar::Scalar;
use super::snf::{smith_normal_form_in, Transforms};
use super::IntMatrix;
use crate::error::{EngineError, Result};

/// A homomorphism between direct sums of cyclic groups, given on generators.
///
/// Column `j` of `matrix` is the image of the `j`-th source generator.
#[derive(Clone, Debug)]
pub struct Morphism {
    pub source_orders: Vec<u64>,
    pub target_orders: Vec<u64>,
    pub matrix: IntMatrix,
}

impl Morphism {
    pub fn zero(source_orders: Vec<u64>, target_orders: Vec<u64>) -> Self {
        let matrix = IntMatrix::zeros(target_orders.len(), source_orders.len());
        Morphism { source_orders, target_orders, matrix }
    }

    /// Checks that relations in the source map to relations in the target.
    pub fn check_well_defined(&self) -> Result<()> {
        well_defined(&self.matrix, &self.source_orders, &self.target_orders).expect("big integers do not overflow")
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.rows()).all(|i| {
            let t = self.target_orders[i];
            self.matrix.row(i).iter().all(|v| reduce(v, t).is_zero())
        })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Morphism) -> Morphism {
        Morphism {
            source_orders: other.source_orders.clone(),
            target_orders: self.target_orders.clone(),
            matrix: self.matrix.mul(&other.matrix),
        }
    }
}

fn well_defined<T: Scalar>(m: &Matrix<T>, source: &[u64], target: &[u64]) -> Option<Result<()>> {
    for (j, &o) in source.iter().enumerate() {
        if o == 0 {
            continue;
        }
        let o_t = T::from_u64(o)?;
        for (i, &t) in target.iter().enumerate() {
            let v = m[(i, j)].times(&o_t)?;
            if !reduce_in(&v, t)?.is_nil() {
                return Some(Err(EngineError::Consistency(format!(
                    "morphism not well defined: generator {j} of order {o} maps to {} in a summand of order {t}",
                    m[(i, j)]
                ))));
            }
        }
    }
    Some(Ok(()))
}

/// Reduces `v` into `[0, order)`, or leaves it alone for `order == 0`.
pub fn reduce(v: &BigInt, order: u64) -> BigInt {
    if order == 0 {
        v.clone()
    } else {
        v.mod_floor(&BigInt::from(order))
    }
}

fn reduce_in<T: Scalar>(v: &T, order: u64) -> Option<T> {
    if order == 0 {
        Some(v.clone())
    } else {
        Some(v.floor_mod(&T::from_u64(order)?))
    }
}

/// Splits `n > 0` as `2^a * u` with `u` odd.
fn split_two<T: Scalar>(n: &T) -> Option<(u32, T)> {
    let two = T::from_u64(2)?;
    let mut a = 0;
    let mut u = n.clone();
    while u.floor_mod(&two).is_nil() {
        u = u.floor_div(&two)?;
        a += 1;
    }
    Some((a, u))
}

/// Inverse of an odd `u` modulo `2^a`, by Newton iteration.
fn inverse_mod_power_of_two<T: Scalar>(u: &T, modulus: &T) -> Option<T> {
    let two = T::from_u64(2)?;
    let u = u.floor_mod(modulus);
    let mut x = u.clone();
    // x is correct modulo 8; each step doubles the number of correct bits.
    for _ in 0..7 {
        let ux = u.times(&x)?.floor_mod(modulus);
        x = x.times(&two.minus(&ux)?)?.floor_mod(modulus);
    }
    Some(x)
}

/// Hermite basis of the lattice spanned by `generators` in `Z^dim`.
///
/// Rows are in echelon form with positive pivots and the entries above each
/// pivot reduced, so the basis depends only on the lattice.
#[derive(Clone, Debug)]
struct LatticeBasis<T> {
    basis: Vec<Vec<T>>,
    pivots: Vec<usize>,
}

fn sub_multiple<T: Scalar>(row: &mut [T], q: &T, pivot_row: &[T]) -> Option<()> {
    for (x, y) in row.iter_mut().zip(pivot_row) {
        *x = x.minus(&q.times(y)?)?;
    }
    Some(())
}

impl<T: Scalar> LatticeBasis<T> {
    fn new(dim: usize, generators: &[Vec<T>]) -> Option<Self> {
        let mut rows: Vec<Vec<T>> = generators.iter().filter(|g| g.iter().any(|x| !x.is_nil())).cloned().collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..dim {
            loop {
                let mut best: Option<(usize, T)> = None;
                for i in r..rows.len() {
                    if rows[i][c].is_nil() {
                        continue;
                    }
                    let m = rows[i][c].magnitude()?;
                    if best.as_ref().is_none_or(|(_, b)| m < *b) {
                        best = Some((i, m));
                    }
                }
                let Some((best, _)) = best else { break };
                rows.swap(r, best);
                let mut done = true;
                let pivot_row = rows[r].clone();
                for row in rows.iter_mut().skip(r + 1) {
                    if row[c].is_nil() {
                        continue;
                    }
                    let q = row[c].floor_div(&pivot_row[c])?;
                    sub_multiple(row, &q, &pivot_row)?;
                    if !row[c].is_nil() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if r < rows.len() && !rows[r][c].is_nil() {
                if rows[r][c].is_neg() {
                    for x in rows[r].iter_mut() {
                        *x = x.negated()?;
                    }
                }
                let pivot_row = rows[r].clone();
                for row in rows.iter_mut().take(r) {
                    let q = row[c].floor_div(&pivot_row[c])?;
                    if !q.is_nil() {
                        sub_multiple(row, &q, &pivot_row)?;
                    }
                }
                pivots.push(c);
                r += 1;
            }
        }
        rows.truncate(r);
        Some(LatticeBasis { basis: rows, pivots })
    }

    /// Coordinates of `x` in the basis (`Some(None)` if `x` is not in the
    /// lattice, `None` on overflow).
    fn coordinates(&self, x: &[T]) -> Option<Option<Vec<T>>> {
        let mut rest = x.to_vec();
        let mut out = Vec::with_capacity(self.basis.len());
        for (row, &c) in self.basis.iter().zip(&self.pivots) {
            let q = rest[c].floor_div(&row[c])?;
            if !rest[c].minus(&q.times(&row[c])?)?.is_nil() {
                return Some(None);
            }
            sub_multiple(&mut rest, &q, row)?;
            out.push(q);
        }
        Some(rest.iter().all(T::is_nil).then_some(out))
    }

    fn to_big(&self) -> LatticeBasis<BigInt> {
        LatticeBasis {
            basis: self.basis.iter().map(|r| r.iter().map(T::to_big).collect()).collect(),
            pivots: self.pivots.clone(),
        }
    }
}

/// A kept summand of a subquotient.
#[derive(Clone, Debug)]
struct Kept<T> {
    index: usize,
    /// `None` for a free summand.
    modulus: Option<T>,
    multiplier: T,
}

/// `ker(d_out) / im(d_in)`, 2-localized, with chosen lifts and the data to
/// compute coordinates of cycles.
#[derive(Clone, Debug)]
pub struct Subquotient {
    /// 0 for `Z`, otherwise a power of 2 (never 1).
    pub orders: Vec<u64>,
    /// Lift of each summand generator, in ambient coordinates.
    pub lifts: Vec<Vec<BigInt>>,
    ambient_orders: Vec<u64>,
    cycles: LatticeBasis<BigInt>,
    relation_u: IntMatrix,
    kept: Vec<Kept<BigInt>>,
}

impl Subquotient {
    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    /// Coordinates of the class of an ambient cycle `x`.
    pub fn coordinates(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let y = self
            .cycles
            .coordinates(x)
            .expect("big integers do not overflow")
            .ok_or_else(|| EngineError::Consistency("element is not a cycle".into()))?;
        let w = self.relation_u.mul_vec(&y);
        Ok(self
            .kept
            .iter()
            .map(|k| {
                let c = &w[k.index] * &k.multiplier;
                match &k.modulus {
                    Some(m) => c.mod_floor(m),
                    None => c,
                }
            })
            .collect())
    }

    /// Whether `x` (an ambient cycle) represents zero.
    pub fn is_boundary(&self, x: &[BigInt]) -> Result<bool> {
        Ok(self.coordinates(x)?.iter().all(Zero::is_zero))
    }

    pub fn ambient_orders(&self) -> &[u64] {
        &self.ambient_orders
    }
}

/// Computes `ker(d_out) / im(d_in)` for `G` with summand orders `orders`.
///
/// `d_in` maps into `G`, `d_out` maps out of `G`. Odd torsion is discarded
/// (the result is the 2-localization), which is exact for the 2-groups and
/// free groups that occur here.
pub fn homology(orders: &[u64], d_in: Option<&Morphism>, d_out: Option<&Morphism>) -> Result<Subquotient> {
    if d_in.is_some_and(|d| d.target_orders != orders) {
        return Err(EngineError::Consistency("incoming differential has the wrong target".into()));
    }
    if d_out.is_some_and(|d| d.source_orders != orders) {
        return Err(EngineError::Consistency("outgoing differential has the wrong source".into()));
    }
    let small = || -> Option<Result<Subquotient>> {
        let a = d_in.map(|d| d.matrix.convert::<i64>()).map_or(Some(None), |m| m.map(Some))?;
        let b = d_out.map(|d| d.matrix.convert::<i64>()).map_or(Some(None), |m| m.map(Some))?;
        homology_in(orders, d_in.zip(a.as_ref()), d_out.zip(b.as_ref()))
    };
    if let Some(result) = small() {
        return result;
    }
    homology_in(orders, d_in.map(|d| (d, &d.matrix)), d_out.map(|d| (d, &d.matrix)))
        .expect("big integers do not overflow")
}

type Side<'a, T> = Option<(&'a Morphism, &'a Matrix<T>)>;

fn homology_in<T: Scalar>(orders: &[u64], d_in: Side<T>, d_out: Side<T>) -> Option<Result<Subquotient>> {
    let p = orders.len();
    for (d, m) in d_in.iter().chain(d_out.iter()) {
        if let Err(e) = well_defined(m, &d.source_orders, &d.target_orders)? {
            return Some(Err(e));
        }
    }
    if let (Some((_, ma)), Some((b, mb))) = (d_in, d_out) {
        let c = mb.checked_mul(ma)?;
        for i in 0..c.rows() {
            for v in c.row(i) {
                if !reduce_in(v, b.target_orders[i])?.is_nil() {
                    return Some(Err(EngineError::Consistency(
                        "composite of consecutive differentials is nonzero".into(),
                    )));
                }
            }
        }
    }

    // Cycles: x with d_out(x) in the target relation lattice.
    let cycle_gens: Vec<Vec<T>> = match d_out {
        None => (0..p).map(|j| unit(p, j)).collect(),
        Some((d, m)) => {
            let t = d.target_orders.len();
            let mut rel_cols = Vec::new();
            for (i, &o) in d.target_orders.iter().enumerate() {
                if o != 0 {
                    let mut v = vec![T::nil(); t];
                    v[i] = T::from_u64(o)?;
                    rel_cols.push(v);
                }
            }
            let full = m.hcat(&Matrix::from_columns(t, &rel_cols));
            let s = smith_normal_form_in(&full, Transforms::COLUMNS)?;
            let rank = s.rank();
            (rank..full.cols()).map(|j| s.v.column(j)[..p].to_vec()).collect()
        }
    };
    let cycles = LatticeBasis::new(p, &cycle_gens)?;
    let k = cycles.basis.len();

    // Boundaries: image of d_in plus the ambient relations.
    let mut boundary_gens: Vec<Vec<T>> = Vec::new();
    if let Some((_, m)) = d_in {
        boundary_gens.extend((0..m.cols()).map(|j| m.column(j)));
    }
    for (j, &o) in orders.iter().enumerate() {
        if o != 0 {
            let mut v = vec![T::nil(); p];
            v[j] = T::from_u64(o)?;
            boundary_gens.push(v);
        }
    }
    let mut rel_cols = Vec::with_capacity(boundary_gens.len());
    for b in &boundary_gens {
        match cycles.coordinates(b)? {
            Some(c) => rel_cols.push(c),
            None => return Some(Err(EngineError::Consistency("boundary is not a cycle".into()))),
        }
    }
    let rel = Matrix::from_columns(k, &rel_cols);
    let s = smith_normal_form_in(&rel, Transforms::ROWS)?;
    let inv = s.invariants();

    let mut out_orders = Vec::new();
    let mut lifts: Vec<Vec<T>> = Vec::new();
    let mut kept = Vec::new();
    for i in 0..k {
        let d = inv.get(i).cloned().unwrap_or_else(T::nil);
        // Generator i of Z^k / rel is column i of u_inv, in cycle-basis coordinates.
        let coords = s.u_inv.column(i);
        let mut lift = vec![T::nil(); p];
        for (c, b) in coords.iter().zip(&cycles.basis) {
            for (l, x) in lift.iter_mut().zip(b) {
                *l = l.plus(&c.times(x)?)?;
            }
        }
        let (order, modulus, mut multiplier, scale) = if d.is_nil() {
            (0u64, None, T::unit(), T::unit())
        } else {
            let (a, u) = split_two(&d)?;
            if a == 0 {
                continue;
            }
            let order = 1u64.checked_shl(a)?;
            let m = T::from_u64(order)?;
            let u_inv = inverse_mod_power_of_two(&u, &m)?;
            (order, Some(m), u_inv, u)
        };
        for (l, &o) in lift.iter_mut().zip(orders) {
            *l = reduce_in(&l.times(&scale)?, o)?;
        }
        if lift.iter().find(|x| !x.is_nil()).is_some_and(|x| x.is_neg()) {
            for l in lift.iter_mut() {
                *l = l.negated()?;
            }
            multiplier = multiplier.negated()?;
        }
        out_orders.push(order);
        lifts.push(lift);
        kept.push(Kept { index: i, modulus, multiplier });
    }
    let mut perm: Vec<usize> = (0..lifts.len()).collect();
    perm.sort_by_key(|&i| (lifts[i].iter().position(|x| !x.is_nil()), out_orders[i]));
    Some(Ok(Subquotient {
        orders: perm.iter().map(|&i| out_orders[i]).collect(),
        lifts: perm.iter().map(|&i| lifts[i].iter().map(T::to_big).collect()).collect(),
        ambient_orders: orders.to_vec(),
        cycles: cycles.to_big(),
        relation_u: s.u.convert()?,
        kept: perm
            .iter()
            .map(|&i| {
                let k = &kept[i];
                Kept { index: k.index, modulus: k.modulus.as_ref().map(T::to_big), multiplier: k.multiplier.to_big() }
            })
            .collect(),
    }))
}

fn unit<T: Scalar>(p: usize, j: usize) -> Vec<T> {
    let mut v = vec![T::nil(); p];
    v[j] = T::unit();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn free_generator_mapping_onto_z2() {
        let d_out = Morphism { source_orders: vec![0], target_orders: vec![2], matrix: IntMatrix::from_rows(&[vec![1]]) };
        let h = homology(&[0], None, Some(&d_out)).unwrap();
        assert_eq!(h.orders, vec![0]);
        assert_eq!(h.lifts, vec![big(&[2])]);
        assert_eq!(h.coordinates(&big(&[6])).unwrap(), big(&[3]));
        assert!(h.coordinates(&big(&[1])).is_err());
    }

    #[test]
    fn no_differentials_gives_the_group() {
        let h = homology(&[0, 4, 2], None, None).unwrap();
        assert_eq!(h.orders, vec![0, 4, 2]);
    }

    #[test]
    fn quotient_of_z8_by_4() {
        let d_in = Morphism { source_orders: vec![0], target_orders: vec![8], matrix: IntMatrix::from_rows(&[vec![4]]) };
        let h = homology(&[8], Some(&d_in), None).unwrap();
        assert_eq!(h.orders, vec![4]);
        assert_eq!(h.coordinates(&big(&[5])).unwrap(), big(&[1]));
    }

    #[test]
    fn odd_torsion_is_discarded() {
        let d_in = Morphism { source_orders: vec![0], target_orders: vec![0], matrix: IntMatrix::from_rows(&[vec![24]]) };
        let h = homology(&[0], Some(&d_in), None).unwrap();
        assert_eq!(h.orders, vec![8]);
        assert_eq!(h.lifts, vec![big(&[3])]);
        assert_eq!(h.coordinates(&big(&[3])).unwrap(), big(&[1]));
        assert_eq!(h.coordinates(&big(&[1])).unwrap()[0].clone() * 3 % 8, BigInt::from(1));
    }

    #[test]
    fn big_and_small_scalars_agree() {
        let d_in = Morphism {
            source_orders: vec![0, 0],
            target_orders: vec![0, 8, 2],
            matrix: IntMatrix::from_rows(&[vec![6, 0], vec![2, 4], vec![0, 1]]),
        };
        let small = homology(&[0, 8, 2], Some(&d_in), None).unwrap();
        let wide = homology_in(&[0, 8, 2], Some((&d_in, &d_in.matrix)), None).unwrap().unwrap();
        assert_eq!(small.orders, wide.orders);
        assert_eq!(small.lifts, wide.lifts);
        let x = big(&[3, 5, 1]);
        assert_eq!(small.coordinates(&x).unwrap(), wide.coordinates(&x).unwrap());
    }

    #[test]
    fn inverse_modulo_powers_of_two() {
        for a in 1..60u32 {
            let m = 1i128 << a;
            for u in [1i128, 3, 5, 7, 9, 80_000_001, 12_345_679] {
                let x = inverse_mod_power_of_two(&u, &m).unwrap();
                assert_eq!((u * x).rem_euclid(m), 1 % m);
            }
        }
    }

    #[test]
    fn nonzero_composite_is_rejected() {
        let d_in = Morphism { source_orders: vec![0], target_orders: vec![0], matrix: IntMatrix::from_rows(&[vec![1]]) };
        let d_out = Morphism { source_orders: vec![0], target_orders: vec![0], matrix: IntMatrix::from_rows(&[vec![1]]) };
        assert!(homology(&[0], Some(&d_in), Some(&d_out)).is_err());
    }
}
