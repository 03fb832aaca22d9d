//! Page turning over a window of tri-degrees.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::rule::{RuleAssignment, RulePattern};
use super::window::Window;
use crate::algebra::Style;
use crate::cell::{Cell, Chain, Part};
use crate::degree::TriDegree;
use crate::error::{EngineError, Result};
use crate::linalg::{homology, FgAbGroup, IntMatrix, Morphism, Subquotient};
use crate::objects::SpectralObject;

/// One cyclic summand of a page, with a chain on E1 representing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    /// 0 for `Z`.
    pub order: u64,
    pub lift: Chain,
    pub part: Part,
    pub label: String,
}

/// The group of a page in one tri-degree.
#[derive(Clone, Debug)]
pub struct DegreeGroup {
    pub degree: TriDegree,
    pub summands: Vec<Summand>,
    /// How coordinates on the previous page become coordinates here;
    /// `None` when the group carried over unchanged.
    reduction: Option<Subquotient>,
}

impl DegreeGroup {
    pub fn orders(&self) -> Vec<u64> {
        self.summands.iter().map(|s| s.order).collect()
    }

    pub fn group(&self) -> FgAbGroup {
        FgAbGroup::new(self.summands.iter().map(|s| (s.label.clone(), s.order)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }
}

/// The page `E_r` over the degrees the engine needed.
#[derive(Clone, Debug)]
pub struct Page {
    pub r: u32,
    pub groups: BTreeMap<TriDegree, DegreeGroup>,
    /// `d_r` out of each degree where it was computed; the target is
    /// `source + TriDegree::differential_shift(r)`.
    pub differentials: BTreeMap<TriDegree, Morphism>,
    pub assignments: Vec<RuleAssignment>,
}

impl Page {
    pub fn group(&self, d: TriDegree) -> Option<&DegreeGroup> {
        self.groups.get(&d)
    }

    /// `d_r` on summand `j` of degree `d`, as coefficients on the target summands.
    pub fn differential_of(&self, d: TriDegree, j: usize) -> Option<Vec<BigInt>> {
        self.differentials.get(&d).map(|m| m.matrix.column(j))
    }
}

/// The computed spectral sequence of an object over a window.
#[derive(Clone, Debug)]
pub struct SpectralSequence {
    pub object: SpectralObject,
    pub window: Option<Window>,
    /// Degrees on which the last page is reported.
    pub targets: BTreeSet<TriDegree>,
    /// `pages[i]` is `E_{i+1}`; the last page is `E_infinity` on the window
    /// when `converged` is set.
    pub pages: Vec<Page>,
    pub converged: bool,
    cells: BTreeMap<TriDegree, Arc<Vec<(Cell, u64)>>>,
}

fn has_outgoing(object: &SpectralObject, r: u32, d: TriDegree) -> bool {
    match r {
        1 => true,
        _ if object.rule().is_some() => RulePattern::eligible(r, d.coweight()),
        _ => object.has_family_on_page(r),
    }
}

/// Last page on which a differential touching the targets can occur.
fn last_page(object: &SpectralObject, degrees: &[TriDegree]) -> Result<u32> {
    if object.rule().is_some() {
        let coweights: BTreeSet<i64> = degrees.iter().flat_map(|d| [d.coweight(), d.coweight() + 1]).collect();
        return Ok(coweights.into_iter().filter_map(RulePattern::page_for).max().unwrap_or(1).max(1));
    }
    match degrees.iter().map(|d| d.coweight()).max() {
        Some(c) => object.last_family_page(c),
        None => Ok(1),
    }
}

impl SpectralSequence {
    /// Runs the spectral sequence until it has converged on `window`, or up
    /// to `E_{max_page+1}` if a bound is given.
    pub fn run(object: SpectralObject, window: Window, max_page: Option<u32>) -> Result<Self> {
        let targets = window.degrees()?;
        Self::run_on(object, targets, Some(window), max_page)
    }

    /// Runs the spectral sequence on an explicit set of target degrees.
    pub fn run_on(
        object: SpectralObject,
        targets: Vec<TriDegree>,
        window: Option<Window>,
        max_page: Option<u32>,
    ) -> Result<Self> {
        let targets: Vec<TriDegree> = targets.into_iter().filter(|&d| object.admits(d)).collect();
        let natural = last_page(&object, &targets)?;
        let r_max = max_page.map_or(natural, |m| m.min(natural));
        let converged = r_max == natural;

        // needed[r] holds the degrees where E_r must be known.
        let mut needed: Vec<BTreeSet<TriDegree>> = vec![BTreeSet::new(); r_max as usize + 2];
        needed[r_max as usize + 1] = targets.iter().copied().collect();
        for r in (1..=r_max).rev() {
            let shift = TriDegree::differential_shift(r);
            let mut set = needed[r as usize + 1].clone();
            for &d in &needed[r as usize + 1] {
                if has_outgoing(&object, r, d) {
                    set.insert(d + shift);
                }
                if has_outgoing(&object, r, d - shift) {
                    set.insert(d - shift);
                }
            }
            set.retain(|&d| object.admits(d));
            needed[r as usize] = set;
        }

        let first: Vec<TriDegree> = needed[1].iter().copied().collect();
        let cell_list = first
            .par_iter()
            .map(|&d| Ok((d, object.cells_at(d)?)))
            .collect::<Result<Vec<_>>>()?;
        let cells: BTreeMap<TriDegree, Arc<Vec<(Cell, u64)>>> = cell_list.into_iter().collect();
        let base = object.base().clone();
        let e1_groups = cells
            .iter()
            .map(|(&d, cs)| {
                let summands = cs
                    .iter()
                    .map(|(c, o)| {
                        let lift = Chain::cell(c.clone());
                        Summand { order: *o, part: c.part(), label: lift.format(&base, Style::Ascii), lift }
                    })
                    .collect();
                (d, DegreeGroup { degree: d, summands, reduction: None })
            })
            .collect();
        let mut ss = SpectralSequence {
            object,
            window,
            targets: targets.iter().copied().collect(),
            pages: vec![Page { r: 1, groups: e1_groups, differentials: BTreeMap::new(), assignments: Vec::new() }],
            converged,
            cells,
        };

        for r in 1..=r_max {
            ss.compute_differentials(r, &needed[r as usize])?;
            let next = ss.turn_page(r, &needed[r as usize + 1])?;
            ss.pages.push(next);
        }
        Ok(ss)
    }

    fn compute_differentials(&mut self, r: u32, degrees: &BTreeSet<TriDegree>) -> Result<()> {
        let shift = TriDegree::differential_shift(r);
        let page = &self.pages[r as usize - 1];
        let sources: Vec<TriDegree> = degrees
            .iter()
            .copied()
            .filter(|&d| has_outgoing(&self.object, r, d) && degrees.contains(&(d + shift)))
            .collect();
        let results = sources
            .par_iter()
            .map(|&d| -> Result<Option<(TriDegree, Morphism, Vec<RuleAssignment>)>> {
                let src = &page.groups[&d];
                let tgt = &page.groups[&(d + shift)];
                if src.is_zero() || tgt.is_zero() {
                    return Ok(None);
                }
                if r == 1 {
                    Ok(Some((d, self.d1_morphism(d, d + shift)?, Vec::new())))
                } else if let Some(rule) = self.object.rule() {
                    let sources: Vec<(u64, Part, Chain)> =
                        src.summands.iter().map(|s| (s.order, s.part, s.lift.clone())).collect();
                    let (m, a) = rule.differential(r, d, &sources, &tgt.orders(), self.object.base())?;
                    Ok(Some((d, m, a)))
                } else {
                    Ok(Some((d, self.formula_morphism(r, d, src, tgt)?, Vec::new())))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let page = &mut self.pages[r as usize - 1];
        for (d, m, a) in results.into_iter().flatten() {
            page.assignments.extend(a);
            page.differentials.insert(d, m);
        }
        page.assignments.sort_by_key(|a| (a.source, a.source_index));
        Ok(())
    }

    fn d1_morphism(&self, source: TriDegree, target: TriDegree) -> Result<Morphism> {
        let src = &self.cells[&source];
        let tgt = &self.cells[&target];
        let index: HashMap<&Cell, usize> = tgt.iter().enumerate().map(|(i, (c, _))| (c, i)).collect();
        let mut matrix = IntMatrix::zeros(tgt.len(), src.len());
        for (j, (c, _)) in src.iter().enumerate() {
            for (t, k) in self.object.d1(c)?.terms() {
                let i = *index.get(t).ok_or_else(|| {
                    EngineError::Consistency(format!(
                        "d1 of {} leaves the E1 basis",
                        c.format(self.object.base(), Style::Ascii)
                    ))
                })?;
                matrix[(i, j)] += BigInt::from(k);
            }
        }
        Ok(Morphism {
            source_orders: src.iter().map(|(_, o)| *o).collect(),
            target_orders: tgt.iter().map(|(_, o)| *o).collect(),
            matrix,
        })
    }

    fn formula_morphism(&self, r: u32, d: TriDegree, src: &DegreeGroup, tgt: &DegreeGroup) -> Result<Morphism> {
        let target = d + TriDegree::differential_shift(r);
        let mut matrix = IntMatrix::zeros(tgt.summands.len(), src.summands.len());
        for (j, s) in src.summands.iter().enumerate() {
            let Some(value) = self.object.formula_differential(r, &s.lift)? else { continue };
            for (i, k) in self.class_coordinates(r, target, &value)?.into_iter().enumerate() {
                matrix[(i, j)] = k;
            }
        }
        Ok(Morphism { source_orders: src.orders(), target_orders: tgt.orders(), matrix })
    }

    fn turn_page(&self, r: u32, degrees: &BTreeSet<TriDegree>) -> Result<Page> {
        let shift = TriDegree::differential_shift(r);
        let page = &self.pages[r as usize - 1];
        let base = self.object.base().clone();
        let list: Vec<TriDegree> = degrees.iter().copied().collect();
        let groups = list
            .par_iter()
            .map(|&d| -> Result<(TriDegree, DegreeGroup)> {
                let old = &page.groups[&d];
                let d_in = page.differentials.get(&(d - shift)).filter(|m| !m.is_zero());
                let d_out = page.differentials.get(&d).filter(|m| !m.is_zero());
                if d_in.is_none() && d_out.is_none() {
                    return Ok((d, DegreeGroup { degree: d, summands: old.summands.clone(), reduction: None }));
                }
                let sq = homology(&old.orders(), d_in, d_out).map_err(|e| match e {
                    EngineError::Consistency(msg) => {
                        EngineError::Consistency(format!("{} E{r} at {d}: {msg}", self.object.name()))
                    }
                    other => other,
                })?;
                let cell_orders: HashMap<&Cell, u64> = self.cells[&d].iter().map(|(c, o)| (c, *o)).collect();
                let summands = sq
                    .lifts
                    .iter()
                    .zip(&sq.orders)
                    .map(|(coeffs, &order)| {
                        let mut lift = Chain::zero();
                        for (k, s) in coeffs.iter().zip(&old.summands) {
                            if k.is_zero() {
                                continue;
                            }
                            let k = k.to_i64().ok_or(EngineError::Overflow("building lifts"))?;
                            lift.add(&s.lift.scaled(k));
                        }
                        let lift = lift.reduce(|c| cell_orders.get(c).copied().unwrap_or(0));
                        Ok(Summand { order, part: lift.part(), label: lift.format(&base, Style::Ascii), lift })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((d, DegreeGroup { degree: d, summands, reduction: Some(sq) }))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(Page { r: r + 1, groups, differentials: BTreeMap::new(), assignments: Vec::new() })
    }

    pub fn page(&self, r: u32) -> Option<&Page> {
        self.pages.get(r.checked_sub(1)? as usize)
    }

    /// The last computed page (`E_infinity` when converged).
    pub fn last(&self) -> &Page {
        self.pages.last().expect("at least E1")
    }

    pub fn infinity(&self) -> Result<&Page> {
        if !self.converged {
            return Err(EngineError::Usage("spectral sequence was stopped before convergence".into()));
        }
        Ok(self.last())
    }

    /// Group of `E_r` at `d`, if computed.
    pub fn group(&self, r: u32, d: TriDegree) -> Option<&DegreeGroup> {
        self.page(r)?.groups.get(&d)
    }

    /// E1 cells in a degree the engine visited.
    pub fn cells(&self, d: TriDegree) -> Option<&[(Cell, u64)]> {
        self.cells.get(&d).map(|v| v.as_slice())
    }

    /// Coordinates on the summands of `E_r(d)` of the class of an E1 cycle.
    pub fn class_coordinates(&self, r: u32, d: TriDegree, chain: &Chain) -> Result<Vec<BigInt>> {
        let cells = self
            .cells
            .get(&d)
            .ok_or_else(|| EngineError::Usage(format!("degree {d} was not computed")))?;
        let mut v = vec![BigInt::zero(); cells.len()];
        for (c, k) in chain.terms() {
            let i = cells.iter().position(|(x, _)| x == c).ok_or_else(|| {
                EngineError::Usage(format!("{} is not an E1 cell in {d}", c.format(self.object.base(), Style::Ascii)))
            })?;
            v[i] += BigInt::from(k);
        }
        for p in 2..=r.min(self.pages.len() as u32) {
            let group = self
                .group(p, d)
                .ok_or_else(|| EngineError::Usage(format!("E{p} at {d} was not computed")))?;
            if let Some(sq) = &group.reduction {
                v = sq.coordinates(&v)?;
            }
        }
        Ok(v)
    }

    /// Whether an E1 chain is a cycle for `d_1, ..., d_{r-1}` and so defines
    /// a class on `E_r`.
    pub fn survives_to(&self, r: u32, d: TriDegree, chain: &Chain) -> bool {
        self.class_coordinates(r, d, chain).is_ok()
    }
}
