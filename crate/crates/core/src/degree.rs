//! Tri-gradings and the bigrading used after inverting `h1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A tri-degree `(s, f, w)`: stem, filtration and motivic weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(from = "[i64; 3]", into = "[i64; 3]")]
pub struct TriDegree {
    pub s: i64,
    pub f: i64,
    pub w: i64,
}

impl TriDegree {
    pub const ZERO: TriDegree = TriDegree { s: 0, f: 0, w: 0 };

    pub const fn new(s: i64, f: i64, w: i64) -> Self {
        TriDegree { s, f, w }
    }

    /// Stem minus weight.
    pub const fn coweight(self) -> i64 {
        self.s - self.w
    }

    /// The degree shift of `d_r`.
    ///
    /// Every differential in the shipped tables raises filtration by `2r + 1`
    /// (for instance `d1(v1^2) = tau h1^3` goes from `(4,0,2)` to `(3,3,2)`).
    pub const fn differential_shift(r: u32) -> Self {
        TriDegree { s: -1, f: 2 * r as i64 + 1, w: 0 }
    }

    /// Image of this degree in the bigrading `(coweight, f - s)` that survives
    /// inverting `h1` (which has degree `(1,1,1)`).
    pub const fn eta_degree(self) -> EtaDegree {
        EtaDegree { coweight: self.s - self.w, level: self.f - self.s }
    }
}

impl From<[i64; 3]> for TriDegree {
    fn from(v: [i64; 3]) -> Self {
        TriDegree::new(v[0], v[1], v[2])
    }
}

impl From<TriDegree> for [i64; 3] {
    fn from(d: TriDegree) -> Self {
        [d.s, d.f, d.w]
    }
}

impl Add for TriDegree {
    type Output = TriDegree;
    fn add(self, o: TriDegree) -> TriDegree {
        TriDegree::new(self.s + o.s, self.f + o.f, self.w + o.w)
    }
}

impl Sub for TriDegree {
    type Output = TriDegree;
    fn sub(self, o: TriDegree) -> TriDegree {
        TriDegree::new(self.s - o.s, self.f - o.f, self.w - o.w)
    }
}

impl Neg for TriDegree {
    type Output = TriDegree;
    fn neg(self) -> TriDegree {
        TriDegree::new(-self.s, -self.f, -self.w)
    }
}

impl Mul<i64> for TriDegree {
    type Output = TriDegree;
    fn mul(self, k: i64) -> TriDegree {
        TriDegree::new(self.s * k, self.f * k, self.w * k)
    }
}

impl fmt::Display for TriDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.s, self.f, self.w)
    }
}

/// Bidegree `(coweight, f - s)` for `h1`-periodic objects.
///
/// Powers of `h1` shift `(s, f, w)` by `(1, 1, 1)`, which fixes both
/// coordinates, so this is the finest grading that survives localization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct EtaDegree {
    pub coweight: i64,
    pub level: i64,
}

impl EtaDegree {
    /// The tri-degree `(c, c + l, 0)` with this coweight and level.
    pub const fn representative(self) -> TriDegree {
        TriDegree::new(self.coweight, self.coweight + self.level, 0)
    }

    pub const fn new(coweight: i64, level: i64) -> Self {
        EtaDegree { coweight, level }
    }

    /// Shift of `d_r` in this bigrading.
    pub const fn differential_shift(r: u32) -> Self {
        let t = TriDegree::differential_shift(r);
        EtaDegree { coweight: t.s - t.w, level: t.f - t.s }
    }
}

impl Add for EtaDegree {
    type Output = EtaDegree;
    fn add(self, o: EtaDegree) -> EtaDegree {
        EtaDegree::new(self.coweight + o.coweight, self.level + o.level)
    }
}

impl Sub for EtaDegree {
    type Output = EtaDegree;
    fn sub(self, o: EtaDegree) -> EtaDegree {
        EtaDegree::new(self.coweight - o.coweight, self.level - o.level)
    }
}

impl fmt::Display for EtaDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.coweight, self.level)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coweight_is_additive() {
        let a = TriDegree::new(5, 1, 3);
        let b = TriDegree::new(-1, 1, -1);
        assert_eq!((a + b).coweight(), a.coweight() + b.coweight());
    }

    #[test]
    fn shifts() {
        assert_eq!(TriDegree::differential_shift(1), TriDegree::new(-1, 3, 0));
        assert_eq!(EtaDegree::differential_shift(1), EtaDegree::new(-1, 4));
        assert_eq!(EtaDegree::differential_shift(3), EtaDegree::new(-1, 8));
    }

    #[test]
    fn serde_as_triple() {
        let d: TriDegree = serde_json::from_str("[4,0,2]").unwrap();
        assert_eq!(d, TriDegree::new(4, 0, 2));
        assert_eq!(serde_json::to_string(&d).unwrap(), "[4,0,2]");
    }
}
