use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::error::{EngineError, Result};

use super::Monomial;

/// A finite integer combination of monomials.
///
/// Reduction modulo torsion and rewriting into normal form require a
/// presentation; see [`crate::algebra::Presentation::normal_form`].
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Element {
    terms: BTreeMap<Monomial, i64>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn monomial(m: Monomial) -> Self {
        Element::term(1, m)
    }

    pub fn term(coeff: i64, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(m, coeff);
        }
        Element { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff * m` without any reduction.
    pub(crate) fn add_raw(&mut self, coeff: i64, m: Monomial) -> Result<()> {
        if coeff == 0 {
            return Ok(());
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().checked_add(coeff).ok_or(EngineError::Overflow("adding coefficients"))?;
                if sum == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub(crate) fn from_map(terms: BTreeMap<Monomial, i64>) -> Self {
        Element { terms: terms.into_iter().filter(|(_, c)| *c != 0).collect() }
    }

    /// The smallest monomial in the support.
    pub fn leading(&self) -> Option<&Monomial> {
        self.terms.keys().next()
    }
}

impl FromIterator<(Monomial, i64)> for Element {
    fn from_iter<T: IntoIterator<Item = (Monomial, i64)>>(iter: T) -> Self {
        let mut map = BTreeMap::new();
        for (m, c) in iter {
            *map.entry(m).or_insert(0) += c;
        }
        Element::from_map(map)
    }
}
