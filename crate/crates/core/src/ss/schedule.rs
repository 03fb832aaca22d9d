//! Generator differentials and their Leibniz extension.

use std::collections::BTreeMap;

use super::rule::RulePattern;
use crate::algebra::{Element, Monomial, Presentation};
use crate::degree::TriDegree;
use crate::error::{EngineError, Result};

/// Values of `d_r` on generators, page by page, plus an optional rule for
/// differentials that are not given by formulas.
#[derive(Clone, Debug, Default)]
pub struct DifferentialSchedule {
    pub pages: BTreeMap<u32, BTreeMap<usize, Element>>,
    pub rule: Option<RulePattern>,
}

impl DifferentialSchedule {
    /// The schedule recorded in a presentation file.
    pub fn from_presentation(p: &Presentation) -> Self {
        let mut pages = BTreeMap::new();
        for r in p.differential_pages() {
            let table: BTreeMap<usize, Element> = (0..p.generators().len())
                .filter_map(|g| p.generator_differential(r, g).map(|e| (g, e.clone())))
                .collect();
            pages.insert(r, table);
        }
        DifferentialSchedule { pages, rule: None }
    }

    pub fn value(&self, r: u32, generator: usize) -> Option<&Element> {
        self.pages.get(&r)?.get(&generator)
    }

    /// Checks that every listed value sits in the degree `d_r` should land in.
    pub fn check_degrees(&self, p: &Presentation) -> Result<()> {
        for (&r, table) in &self.pages {
            for (&g, value) in table {
                let source = p.degree_of(&Monomial::generator(p.generators().len(), g, 1));
                let expected = source + TriDegree::differential_shift(r);
                for (m, _) in value.terms() {
                    if !p.same_degree(p.degree_of(m), expected) {
                        return Err(EngineError::Presentation(format!(
                            "d{r}({}) has a term in {} instead of {expected}",
                            p.generators()[g].name,
                            p.degree_of(m)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `d_r` on each monomial, extended from the generators by the Leibniz rule.
pub fn leibniz_extend(
    p: &Presentation,
    schedule: &DifferentialSchedule,
    r: u32,
    monomials: &[Monomial],
) -> Result<BTreeMap<Monomial, Element>> {
    schedule.check_degrees(p)?;
    let mut out = BTreeMap::new();
    for m in monomials {
        let mut acc = Element::zero();
        for g in m.support() {
            let Some(dg) = schedule.value(r, g) else { continue };
            let e = i64::from(m.exponent(g));
            let rest = Element::monomial(m.with_exponent(g, m.exponent(g) - 1));
            let term = p.scale(&p.multiply(dg, &rest)?, e)?;
            acc = p.add(&acc, &term)?;
        }
        out.insert(m.clone(), acc);
    }
    Ok(out)
}
