use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use effseq_core::linalg::{homology, smith_normal_form, IntMatrix, Morphism};

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n).flat_map(|last| subsets(last, k - 1).into_iter().map(move |mut s| {
        s.push(last);
        s
    })).collect()
}

/// Invariant factors as quotients of successive gcds of k-by-k minors.
fn determinantal_invariants(a: &[Vec<i64>]) -> Vec<i128> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut divisors = vec![1i128];
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for r in subsets(rows, k) {
            for c in subsets(cols, k) {
                let minor: Vec<Vec<i128>> = r.iter().map(|&i| c.iter().map(|&j| a[i][j] as i128).collect()).collect();
                g = g.gcd(&det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| w[1] / w[0]).collect()
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-24i64..=24, c), r))
}

proptest! {
    #[test]
    fn smith_invariants_are_determinantal(a in matrix()) {
        let m = IntMatrix::from_rows(&a);
        let snf = smith_normal_form(&m);
        let got: Vec<i128> = snf.invariants().iter().map(|x| x.to_i128().unwrap()).collect();
        prop_assert_eq!(got, determinantal_invariants(&a));
        prop_assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d.clone());
        prop_assert_eq!(snf.u.mul(&snf.u_inv), IntMatrix::identity(a.len()));
        prop_assert_eq!(snf.v.mul(&snf.v_inv), IntMatrix::identity(a[0].len()));
    }
}

#[test]
fn worked_example() {
    let snf = smith_normal_form(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
    assert_eq!(snf.invariants(), vec![BigInt::from(2), BigInt::from(4)]);
}

/// Elements of a finite group `prod Z/o_i`.
fn elements(orders: &[u64]) -> Vec<Vec<i64>> {
    orders.iter().fold(vec![vec![]], |acc, &o| {
        acc.into_iter().flat_map(|v| (0..o as i64).map(move |x| {
            let mut w = v.clone();
            w.push(x);
            w
        })).collect()
    })
}

fn apply(m: &Morphism, x: &[i64]) -> Vec<i64> {
    let v: Vec<BigInt> = x.iter().map(|&k| BigInt::from(k)).collect();
    m.matrix.mul_vec(&v).iter().zip(&m.target_orders).map(|(y, &o)| y.mod_floor(&BigInt::from(o)).to_i64().unwrap()).collect()
}

fn element_order(x: &[i64], orders: &[u64]) -> u64 {
    x.iter().zip(orders).map(|(&k, &o)| o / (k as u64).gcd(&o)).fold(1, |a, b| a.lcm(&b))
}

/// A complex `A -> B -> C` of finite abelian 2-groups with `d_out d_in = 0`.
#[derive(Debug, Clone)]
struct Complex {
    middle: Vec<u64>,
    d_in: Morphism,
    d_out: Morphism,
}

fn order() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 4, 8])
}

fn complex() -> impl Strategy<Value = Complex> {
    (prop::collection::vec(order(), 1..=3), prop::collection::vec(order(), 0..=2), 0usize..=2, any::<u64>()).prop_map(
        |(middle, outer, sources, seed)| {
            let mut state = seed | 1;
            let mut next = move || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                state
            };
            let mut d_out = Morphism::zero(middle.clone(), outer.clone());
            for (j, &s) in middle.iter().enumerate() {
                for (i, &t) in outer.iter().enumerate() {
                    let step = t / s.gcd(&t);
                    d_out.matrix[(i, j)] = BigInt::from((next() % t) / step * step);
                }
            }
            let kernel: Vec<Vec<i64>> = elements(&middle).into_iter().filter(|x| apply(&d_out, x).iter().all(|y| *y == 0)).collect();
            let chosen: Vec<Vec<i64>> = (0..sources).map(|_| kernel[(next() % kernel.len() as u64) as usize].clone()).collect();
            let source_orders: Vec<u64> = chosen.iter().map(|x| element_order(x, &middle).max(2)).collect();
            let columns: Vec<Vec<BigInt>> = chosen.iter().map(|x| x.iter().map(|&k| BigInt::from(k)).collect()).collect();
            let d_in = Morphism { source_orders, target_orders: middle.clone(), matrix: IntMatrix::from_columns(middle.len(), &columns) };
            Complex { middle, d_in, d_out }
        },
    )
}

proptest! {
    #[test]
    fn homology_matches_brute_force(c in complex()) {
        let h = homology(&c.middle, Some(&c.d_in), Some(&c.d_out)).unwrap();
        let all = elements(&c.middle);
        let cycles: Vec<&Vec<i64>> = all.iter().filter(|x| apply(&c.d_out, x).iter().all(|y| *y == 0)).collect();
        let boundaries: std::collections::BTreeSet<Vec<i64>> = elements(&c.d_in.source_orders).iter().map(|x| apply(&c.d_in, x)).collect();
        for k in 0..4u32 {
            let killed = cycles
                .iter()
                .filter(|x| {
                    let y: Vec<i64> = x.iter().zip(&c.middle).map(|(&v, &o)| (v << k).rem_euclid(o as i64)).collect();
                    boundaries.contains(&y)
                })
                .count();
            let expected: u64 = h.orders.iter().map(|&o| o.min(1 << k)).product();
            prop_assert_eq!(killed as u64, expected * boundaries.len() as u64, "2^{} torsion", k);
        }
        for (lift, &o) in h.lifts.iter().zip(&h.orders) {
            let x: Vec<i64> = lift.iter().map(|v| v.to_i64().unwrap()).collect();
            prop_assert!(apply(&c.d_out, &x).iter().all(|y| *y == 0));
            prop_assert!(o >= 2);
        }
    }
}

#[test]
fn quotient_of_cyclic_group() {
    let d_in = Morphism { source_orders: vec![0], target_orders: vec![8], matrix: IntMatrix::from_rows(&[vec![4]]) };
    let h = homology(&[8], Some(&d_in), None).unwrap();
    assert_eq!(h.orders, vec![4]);
    let free = homology(&[0], None, None).unwrap();
    assert_eq!(free.orders, vec![0]);
    assert!(free.lifts[0][0].abs().is_positive() && !free.lifts[0][0].is_zero());
}
