//! Enumeration of exponent vectors of a prescribed multidegree.
//!
//! Generators carry integer degree vectors of a fixed dimension. A choice of
//! as many linearly independent "pivot" generators as the dimension lets us
//! loop over the remaining exponents and solve for the pivots exactly, which
//! keeps per-degree enumeration polynomial in the window size.

use crate::error::{EngineError, Result};

#[derive(Clone, Debug)]
pub struct ExponentSolver {
    degrees: Vec<Vec<i64>>,
    caps: Vec<Option<u32>>,
    pivots: Vec<usize>,
    det: i64,
    adjugate: Vec<Vec<i64>>,
    functional: Vec<i64>,
    loop_order: Vec<usize>,
    slack: i64,
}

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, &v)| v).collect()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn adjugate(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![1]];
    }
    let mut adj = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = m
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, &v)| v).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = sign * det(&minor);
        }
    }
    adj
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl ExponentSolver {
    pub fn new(degrees: Vec<Vec<i64>>, caps: Vec<Option<u32>>) -> Result<Self> {
        let n = degrees.len();
        let dims = degrees.first().map_or(0, Vec::len);
        if degrees.iter().any(|d| d.len() != dims) {
            return Err(EngineError::Presentation("generator degrees of mixed dimension".into()));
        }
        for (i, d) in degrees.iter().enumerate() {
            if d.iter().all(|&x| x == 0) && caps[i].is_none() {
                return Err(EngineError::Presentation(format!(
                    "generator {i} has degree zero and no cap; enumeration would not terminate"
                )));
            }
        }
        let functional = Self::find_functional(&degrees, &caps, dims).ok_or_else(|| {
            EngineError::Presentation("no grading functional is positive on all uncapped generators".into())
        })?;

        let mut chosen: Option<Vec<usize>> = None;
        if n >= dims {
            let combos = combinations(n, dims);
            let matrix_of = |c: &Vec<usize>| -> Vec<Vec<i64>> {
                (0..dims).map(|row| c.iter().map(|&g| degrees[g][row]).collect()).collect()
            };
            chosen = combos
                .iter()
                .filter(|c| c.iter().all(|&g| caps[g].is_none()))
                .find(|c| det(&matrix_of(c)) != 0)
                .or_else(|| combos.iter().find(|c| det(&matrix_of(c)) != 0))
                .cloned();
        }
        let pivots = chosen.unwrap_or_default();
        let (det_value, adj) = if pivots.is_empty() {
            (1, Vec::new())
        } else {
            let m: Vec<Vec<i64>> = (0..dims).map(|row| pivots.iter().map(|&g| degrees[g][row]).collect()).collect();
            (det(&m), adjugate(&m))
        };
        let mut loop_order: Vec<usize> = (0..n).filter(|g| !pivots.contains(g) && caps[*g].is_some()).collect();
        loop_order.extend((0..n).filter(|g| !pivots.contains(g) && caps[*g].is_none()));
        let slack = pivots
            .iter()
            .filter_map(|&g| {
                let phi = dot(&functional, &degrees[g]);
                caps[g].filter(|_| phi < 0).map(|c| c as i64 * -phi)
            })
            .sum();
        Ok(ExponentSolver { degrees, caps, pivots, det: det_value, adjugate: adj, functional, loop_order, slack })
    }

    fn find_functional(degrees: &[Vec<i64>], caps: &[Option<u32>], dims: usize) -> Option<Vec<i64>> {
        let range: Vec<i64> = (-4..=4).collect();
        let mut candidate = vec![0i64; dims];
        fn rec(
            pos: usize,
            candidate: &mut Vec<i64>,
            range: &[i64],
            degrees: &[Vec<i64>],
            caps: &[Option<u32>],
        ) -> bool {
            if pos == candidate.len() {
                return degrees.iter().zip(caps).all(|(d, c)| c.is_some() || dot(candidate, d) > 0);
            }
            for &v in range {
                candidate[pos] = v;
                if rec(pos + 1, candidate, range, degrees, caps) {
                    return true;
                }
            }
            false
        }
        rec(0, &mut candidate, &range, degrees, caps).then_some(candidate)
    }

    /// All exponent vectors (respecting caps) whose degree equals `target`,
    /// in increasing lexicographic order.
    pub fn solve(&self, target: &[i64]) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.degrees.len()];
        self.descend(0, target.to_vec(), &mut exps, &mut out);
        out.sort();
        out
    }

    fn descend(&self, depth: usize, remaining: Vec<i64>, exps: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if depth == self.loop_order.len() {
            self.finish(&remaining, exps, out);
            return;
        }
        let g = self.loop_order[depth];
        let deg = &self.degrees[g];
        let max = match self.caps[g] {
            Some(c) => c as i64,
            None => {
                let phi_g = dot(&self.functional, deg);
                let budget = dot(&self.functional, &remaining) + self.slack;
                if budget < 0 {
                    return;
                }
                budget / phi_g
            }
        };
        for e in 0..=max {
            exps[g] = e as u32;
            let rem: Vec<i64> = remaining.iter().zip(deg).map(|(r, d)| r - e * d).collect();
            self.descend(depth + 1, rem, exps, out);
        }
        exps[g] = 0;
    }

    fn finish(&self, remaining: &[i64], exps: &mut [u32], out: &mut Vec<Vec<u32>>) {
        if self.pivots.is_empty() {
            if remaining.iter().all(|&r| r == 0) {
                out.push(exps.to_vec());
            }
            return;
        }
        let mut solution = Vec::with_capacity(self.pivots.len());
        for row in &self.adjugate {
            let num = dot(row, remaining);
            if num % self.det != 0 {
                return;
            }
            let x = num / self.det;
            if x < 0 {
                return;
            }
            solution.push(x);
        }
        for (&g, &x) in self.pivots.iter().zip(&solution) {
            if let Some(c) = self.caps[g] {
                if x > c as i64 {
                    return;
                }
            }
        }
        let mut v = exps.to_vec();
        for (&g, &x) in self.pivots.iter().zip(&solution) {
            v[g] = x as u32;
        }
        out.push(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_and_adjugate() {
        let m = vec![vec![2, 1, 0], vec![0, 1, 3], vec![1, 0, 1]];
        let d = det(&m);
        let adj = adjugate(&m);
        for i in 0..3 {
            for j in 0..3 {
                let v: i64 = (0..3).map(|k| adj[i][k] * m[k][j]).sum();
                assert_eq!(v, if i == j { d } else { 0 });
            }
        }
    }

    #[test]
    fn rejects_zero_degree_generator() {
        assert!(ExponentSolver::new(vec![vec![0, 0]], vec![None]).is_err());
    }

    #[test]
    fn capped_generator_bounds_an_indefinite_grading() {
        // tau (1,0), rho (0,2), v (2,-4), iota (-1,2) capped at 1.
        let s = ExponentSolver::new(
            vec![vec![1, 0], vec![0, 2], vec![2, -4], vec![-1, 2]],
            vec![None, None, None, Some(1)],
        )
        .unwrap();
        let sols = s.solve(&[1, 0]);
        assert!(sols.contains(&vec![1, 0, 0, 0]));
        assert!(sols.contains(&vec![0, 1, 1, 1]));
        assert_eq!(sols.len(), 2);
    }
}
