//! Inverting eta: localization of E1 chains and comparison of pages.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::algebra::{Element, Presentation, Style};
use crate::cell::{Cell, Chain};
use crate::degree::{EtaDegree, TriDegree};
use crate::error::{EngineError, Result};
use crate::objects::{Catalog, SpectralObject};
use crate::ss::SpectralSequence;

/// A rectangle of eta-periodic bidegrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EtaWindow {
    pub coweights: (i64, i64),
    pub levels: (i64, i64),
}

impl EtaWindow {
    pub fn degrees(&self) -> Vec<TriDegree> {
        let mut out = Vec::new();
        for c in self.coweights.0..=self.coweights.1 {
            for l in self.levels.0..=self.levels.1 {
                out.push(EtaDegree::new(c, l).representative());
            }
        }
        out
    }
}

/// Where a tri-degree lands after inverting eta, as an engine degree.
pub fn eta_position(d: TriDegree) -> TriDegree {
    d.eta_degree().representative()
}

/// Sends E1 cells of a ring or fiber object to the eta-periodic ring.
#[derive(Clone, Debug)]
pub struct Localizer {
    source: Arc<Presentation>,
    target: Arc<Presentation>,
    images: Vec<Element>,
    iota: Option<Element>,
    cache: Arc<RwLock<HashMap<Cell, Element>>>,
}

impl Localizer {
    pub fn new(source: Arc<Presentation>, target: Arc<Presentation>) -> Result<Self> {
        let images = (0..source.generators().len())
            .map(|g| {
                let terms = source.eta_image_terms(g).ok_or_else(|| {
                    EngineError::Presentation(format!(
                        "{} has no eta image for {}",
                        source.name(),
                        source.generators()[g].name
                    ))
                })?;
                target.element_from_terms(terms)
            })
            .collect::<Result<Vec<_>>>()?;
        let iota = target.index_of("iota").ok().map(|_| Element::monomial(target.gen("iota").expect("present")));
        Ok(Localizer { source, target, images, iota, cache: Arc::default() })
    }

    /// The localizer for an object, targeting its recorded eta-periodic ring.
    pub fn for_object(object: &SpectralObject) -> Result<Self> {
        let name = object
            .eta_target()
            .ok_or_else(|| EngineError::Usage(format!("{} has no eta-periodic counterpart", object.name())))?;
        Localizer::new(object.base().clone(), Catalog::global().presentation(name)?)
    }

    pub fn target(&self) -> &Arc<Presentation> {
        &self.target
    }

    pub fn cell(&self, c: &Cell) -> Result<Element> {
        if let Some(hit) = self.cache.read().expect("cache poisoned").get(c) {
            return Ok(hit.clone());
        }
        let mut acc = Element::monomial(self.target.one());
        for g in c.mono.support() {
            for _ in 0..c.mono.exponent(g) {
                acc = self.target.multiply(&acc, &self.images[g])?;
            }
        }
        if c.iota {
            let iota = self.iota.as_ref().ok_or_else(|| {
                EngineError::Presentation(format!("{} has no iota generator", self.target.name()))
            })?;
            acc = self.target.multiply(&acc, iota)?;
        }
        self.cache.write().expect("cache poisoned").insert(c.clone(), acc.clone());
        Ok(acc)
    }

    pub fn element(&self, e: &Element) -> Result<Element> {
        self.chain(&e.terms().map(|(m, k)| (Cell::plain(m.clone()), k)).collect())
            .map(|c| c.terms().map(|(c, k)| (c.mono.clone(), k)).collect())
    }

    pub fn chain(&self, chain: &Chain) -> Result<Chain> {
        let mut out = Chain::zero();
        for (c, k) in chain.terms() {
            for (m, j) in self.cell(c)?.terms() {
                out.add_term(j * k, Cell::plain(m.clone()));
            }
        }
        Ok(out.reduce(|c| self.target.torsion_of(&c.mono)))
    }

    pub fn source(&self) -> &Arc<Presentation> {
        &self.source
    }
}

/// Result of checking that localization commutes with differentials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Comparison {
    pub pages: u32,
    /// Summands checked.
    pub checked: usize,
    /// Checks where at least one side was nonzero.
    pub nontrivial: usize,
    /// Summands on pages `r >= 2` in degrees where neither side has a
    /// differential, so both sides vanish without computation.
    pub skipped: usize,
    pub mismatches: Vec<String>,
}

impl Comparison {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Eta-periodic degrees needed to compare pages `1..=max_page` of `ss`.
pub fn comparison_targets(ss: &SpectralSequence, max_page: u32) -> Vec<TriDegree> {
    let mut out = BTreeSet::new();
    for &d in &ss.targets {
        let e = eta_position(d);
        out.insert(e);
        for r in 1..=max_page {
            out.insert(e + TriDegree::differential_shift(r));
        }
    }
    out.into_iter().collect()
}

fn mod2(v: &[BigInt]) -> Vec<bool> {
    v.iter().map(|x| x.is_odd()).collect()
}

/// Checks `class(loc(d_r x)) = d_r(class(loc x))` for every summand `x` of
/// `E_r` on the target degrees of `ss`, for `r <= max_page`.
pub fn compare(ss: &SpectralSequence, eta: &SpectralSequence, max_page: u32) -> Result<Comparison> {
    let loc = Localizer::for_object(&ss.object)?;
    if loc.target().name() != eta.object.name() {
        return Err(EngineError::Usage(format!(
            "{} localizes to {}, not {}",
            ss.object.name(),
            loc.target().name(),
            eta.object.name()
        )));
    }
    let base = ss.object.base().clone();
    let last = max_page.min(ss.pages.len() as u32);
    let mut report = Comparison { pages: last, ..Comparison::default() };
    for r in 1..=last {
        let page = ss.page(r).expect("page exists");
        let shift = TriDegree::differential_shift(r);
        for &d in &ss.targets {
            let Some(group) = page.group(d) else { continue };
            let e = eta_position(d);
            let eta_map = eta.page(r).and_then(|p| p.differentials.get(&e)).filter(|m| !m.is_zero());
            if r >= 2 && eta_map.is_none() && page.differentials.get(&d).is_none_or(|m| m.is_zero()) {
                report.skipped += group.summands.len();
                continue;
            }
            for (j, x) in group.summands.iter().enumerate() {
                report.checked += 1;
                let describe = |what: &str| {
                    format!("E{r} {} at {d}: {what}", x.lift.format(&base, Style::Ascii))
                };
                let lx = loc.chain(&x.lift)?;
                let cx = match eta.class_coordinates(r, e, &lx) {
                    Ok(v) => v,
                    Err(err) => {
                        report.mismatches.push(describe(&format!("localization is not a class ({err})")));
                        continue;
                    }
                };
                let eta_side: Vec<bool> = match eta_map {
                    Some(m) => {
                        let v = m.matrix.mul_vec(&cx);
                        mod2(&v)
                    }
                    None => vec![false; eta.group(r.min(eta.pages.len() as u32), e + shift).map_or(0, |g| g.summands.len())],
                };
                let dx = page.differential_of(d, j);
                let mut value = Chain::zero();
                if let Some(col) = &dx {
                    let target = page.group(d + shift).expect("targets of computed differentials exist");
                    for (k, t) in col.iter().zip(&target.summands) {
                        if !k.is_zero() {
                            let k = (k % 2u32).try_into().unwrap_or(1i64);
                            value.add(&t.lift.scaled(k));
                        }
                    }
                }
                let lv = loc.chain(&value)?;
                let l_side = if lv.is_zero() {
                    vec![false; eta_side.len()]
                } else {
                    match eta.class_coordinates(r, e + shift, &lv) {
                        Ok(v) => mod2(&v),
                        Err(err) => {
                            report.mismatches.push(describe(&format!("localized d{r} is not a class ({err})")));
                            continue;
                        }
                    }
                };
                if l_side.iter().any(|b| *b) || eta_side.iter().any(|b| *b) {
                    report.nontrivial += 1;
                }
                if l_side != eta_side {
                    report.mismatches.push(describe(&format!(
                        "localized d{r} gives {:?} but the eta-periodic d{r} gives {:?}",
                        l_side, eta_side
                    )));
                }
            }
        }
    }
    Ok(report)
}
