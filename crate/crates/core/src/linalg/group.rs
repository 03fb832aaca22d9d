use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

/// A finitely generated abelian group given as a direct sum of cyclic groups.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FgAbGroup {
    /// `(label, order)`, order 0 meaning `Z`.
    pub summands: Vec<(String, u64)>,
}

impl FgAbGroup {
    pub fn new(summands: Vec<(String, u64)>) -> Self {
        FgAbGroup { summands }
    }

    pub fn cyclic(label: impl Into<String>, order: u64) -> Self {
        FgAbGroup { summands: vec![(label.into(), order)] }
    }

    pub fn is_trivial(&self) -> bool {
        self.summands.iter().all(|(_, o)| *o == 1)
    }

    pub fn free_rank(&self) -> usize {
        self.summands.iter().filter(|(_, o)| *o == 0).count()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.summands.iter().filter(|(_, o)| *o > 0).fold(BigInt::one(), |acc, (_, o)| acc * BigInt::from(*o))
    }

    /// Sorted list of orders, the isomorphism invariant.
    pub fn invariants(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.summands.iter().map(|(_, o)| *o).filter(|&o| o != 1).collect();
        v.sort_unstable();
        v
    }

    pub fn is_isomorphic(&self, other: &FgAbGroup) -> bool {
        self.invariants() == other.invariants()
    }
}

/// `Z`, `Z/8`, ... with `0` for the trivial group.
pub fn format_order(order: u64) -> String {
    match order {
        0 => "Z".to_string(),
        o => format!("Z/{o}"),
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.summands.iter().filter(|(_, o)| *o != 1).map(|(_, o)| format_order(*o)).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
