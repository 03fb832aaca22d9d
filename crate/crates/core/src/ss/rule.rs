//! The coweight rule for higher differentials in the fiber.
//!
//! On `E_r`, `r >= 2`, a kernel-side class in coweight `c > 0` with
//! `c ≡ 2^{r-1} (mod 2^r)` supports a `d_r` whose value is the only nonzero
//! element of the target degree it could hit. Cokernel-side classes are
//! permanent cycles.

use num_bigint::BigInt;

use crate::algebra::Presentation;
use crate::cell::{Chain, Part};
use crate::degree::TriDegree;
use crate::error::{EngineError, Result};
use crate::linalg::{IntMatrix, Morphism};

/// Classes that never support a rule differential.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exclusion {
    /// Integer multiples of the unit.
    UnitMultiples,
    /// Even multiples of `tau^{4k}`.
    TwoTauPowers,
    /// Monomials `rho^a h1^b`.
    RhoH1Monomials,
}

impl Exclusion {
    pub fn name(self) -> &'static str {
        match self {
            Exclusion::UnitMultiples => "unit-multiples",
            Exclusion::TwoTauPowers => "two-tau-powers",
            Exclusion::RhoH1Monomials => "rho-h1-monomials",
        }
    }

    fn applies(self, lift: &Chain, base: &Presentation) -> bool {
        let Some((cell, coeff)) = lift.leading() else { return true };
        if lift.len() != 1 || cell.iota {
            return false;
        }
        let gens = base.generators();
        let only = |allowed: &[&str]| cell.mono.support().all(|g| allowed.contains(&gens[g].name.as_str()));
        match self {
            Exclusion::UnitMultiples => cell.mono.is_one(),
            Exclusion::TwoTauPowers => {
                coeff % 2 == 0
                    && only(&["tau2", "tau"])
                    && cell.mono.support().all(|g| (cell.mono.exponent(g) * gens[g].scale).is_multiple_of(4))
            }
            Exclusion::RhoH1Monomials => only(&["rho", "h1"]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RulePattern {
    pub exclusions: Vec<Exclusion>,
}

/// A differential assigned by the rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleAssignment {
    pub page: u32,
    pub source: TriDegree,
    pub source_index: usize,
    /// Coefficients on the summands of the target degree.
    pub value: Vec<i64>,
}

impl RulePattern {
    pub fn from_names(names: &[String]) -> Result<Self> {
        let all = [Exclusion::UnitMultiples, Exclusion::TwoTauPowers, Exclusion::RhoH1Monomials];
        let exclusions = names
            .iter()
            .map(|n| {
                all.iter()
                    .copied()
                    .find(|e| e.name() == n)
                    .ok_or_else(|| EngineError::Presentation(format!("unknown exclusion {n:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RulePattern { exclusions })
    }

    /// Whether sources in this coweight can support a `d_r`.
    pub fn eligible(r: u32, coweight: i64) -> bool {
        if !(2..=62).contains(&r) || coweight <= 0 || coweight % 4 != 0 {
            return false;
        }
        let m = 1i64 << r;
        coweight.rem_euclid(m) == m / 2
    }

    /// The page on which sources in this coweight fire, if any.
    pub fn page_for(coweight: i64) -> Option<u32> {
        (coweight > 0 && coweight % 4 == 0).then(|| coweight.trailing_zeros() + 1)
    }

    pub fn is_excluded(&self, lift: &Chain, base: &Presentation) -> bool {
        self.exclusions.iter().any(|e| e.applies(lift, base))
    }

    /// Builds `d_r` out of one degree.
    ///
    /// `sources` and `targets` are `(order, part, lift)` for the summands of
    /// `E_r` in the source and target degrees.
    pub fn differential(
        &self,
        r: u32,
        source: TriDegree,
        sources: &[(u64, Part, Chain)],
        targets: &[u64],
        base: &Presentation,
    ) -> Result<(Morphism, Vec<RuleAssignment>)> {
        let mut matrix = IntMatrix::zeros(targets.len(), sources.len());
        let mut assigned = Vec::new();
        if !Self::eligible(r, source.coweight()) {
            let m = Morphism { source_orders: sources.iter().map(|s| s.0).collect(), target_orders: targets.to_vec(), matrix };
            return Ok((m, assigned));
        }
        for (j, (order, part, lift)) in sources.iter().enumerate() {
            if *part != Part::Kernel || self.is_excluded(lift, base) {
                continue;
            }
            let value = unique_candidate(*order, targets).ok_or_else(|| EngineError::Ambiguity {
                label: lift.format(base, crate::algebra::Style::Ascii),
                degree: source,
                candidates: candidate_count(*order, targets),
            })?;
            for (i, v) in value.iter().enumerate() {
                matrix[(i, j)] = BigInt::from(*v);
            }
            assigned.push(RuleAssignment { page: r, source, source_index: j, value });
        }
        let m = Morphism { source_orders: sources.iter().map(|s| s.0).collect(), target_orders: targets.to_vec(), matrix };
        if !m.matrix.is_zero() {
            m.check_well_defined()?;
        }
        Ok((m, assigned))
    }
}

fn gcd_order(source: u64, target: u64) -> u64 {
    match (source, target) {
        (_, 0) => 0,
        (0, t) => t,
        (s, t) => num_integer::gcd(s, t),
    }
}

/// Number of nonzero elements `y` with `order * y = 0` (saturating; free
/// target summands make it infinite, reported as `usize::MAX`).
fn candidate_count(order: u64, targets: &[u64]) -> usize {
    let mut n: u128 = 1;
    for &t in targets {
        match gcd_order(order, t) {
            0 if order == 0 => return usize::MAX,
            0 => {}
            g => n = n.saturating_mul(g as u128),
        }
    }
    (n - 1).min(usize::MAX as u128) as usize
}

/// The unique nonzero element killed by `order` (any element for a free
/// source), as coefficients on the target summands.
fn unique_candidate(order: u64, targets: &[u64]) -> Option<Vec<i64>> {
    if candidate_count(order, targets) != 1 {
        return None;
    }
    let i = targets.iter().position(|&t| gcd_order(order, t) == 2)?;
    let mut v = vec![0; targets.len()];
    v[i] = (targets[i] / 2) as i64;
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eligibility() {
        assert!(RulePattern::eligible(3, 4));
        assert!(RulePattern::eligible(3, 20));
        assert!(!RulePattern::eligible(3, 8));
        assert!(RulePattern::eligible(4, 8));
        assert!(RulePattern::eligible(6, 32));
        assert!(!RulePattern::eligible(2, 2));
        assert!(!RulePattern::eligible(3, 0));
        assert_eq!(RulePattern::page_for(20), Some(3));
        assert_eq!(RulePattern::page_for(64), Some(7));
        assert_eq!(RulePattern::page_for(6), None);
    }

    #[test]
    fn candidates() {
        assert_eq!(unique_candidate(2, &[8]), Some(vec![4]));
        assert_eq!(unique_candidate(2, &[2, 0]), Some(vec![1, 0]));
        assert_eq!(unique_candidate(0, &[2]), Some(vec![1]));
        assert_eq!(unique_candidate(0, &[2, 0]), None);
        assert_eq!(unique_candidate(2, &[2, 2]), None);
        assert_eq!(unique_candidate(2, &[]), None);
        assert_eq!(candidate_count(2, &[2, 2]), 3);
        assert_eq!(candidate_count(4, &[8]), 3);
    }
}
