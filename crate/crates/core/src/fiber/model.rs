//! E1 of the fiber of `psi3 - 1`: kernel cells plus `iota`-shifted cokernel cells.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use super::psi::psi_split;
use crate::algebra::file::TermFile;
use crate::algebra::{Monomial, Presentation, Style};
use crate::cell::{Cell, Chain, Part};
use crate::degree::TriDegree;
use crate::error::{EngineError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Any,
    Even,
    Odd,
}

impl Parity {
    fn matches(self, k: u32) -> bool {
        match self {
            Parity::Any => true,
            Parity::Even => k.is_multiple_of(2),
            Parity::Odd => k % 2 == 1,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FamilyFile {
    pub name: String,
    pub part: Part,
    pub base: BTreeMap<String, u32>,
    pub periodic: bool,
    #[serde(rename = "etaImage")]
    pub eta_image: Vec<TermFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct D1TermFile {
    pub coeff: i64,
    pub prefix: BTreeMap<String, u32>,
    pub family: String,
    pub shift: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct D1RowFile {
    pub source: String,
    pub parity: Parity,
    pub value: Vec<D1TermFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FiberFile {
    pub name: String,
    pub base: String,
    #[serde(rename = "etaTarget", default, skip_serializing_if = "Option::is_none")]
    pub eta_target: Option<String>,
    #[serde(rename = "iotaShift")]
    pub iota_shift: [i64; 3],
    #[serde(rename = "periodicGenerator", default = "default_periodic")]
    pub periodic_generator: String,
    pub families: Vec<FamilyFile>,
    pub d1: Vec<D1RowFile>,
    /// Permanent-cycle exclusions for the coweight rule, if higher
    /// differentials follow it.
    #[serde(rename = "higherDifferentials", default, skip_serializing_if = "Option::is_none")]
    pub higher_differentials: Option<Vec<String>>,
}

fn default_periodic() -> String {
    "v1_2".to_string()
}

/// A family of multiplicative generators `x v1^{2k}` (or a single generator).
#[derive(Clone, Debug)]
pub struct LFamily {
    pub name: String,
    pub part: Part,
    pub base: Monomial,
    pub periodic: bool,
    pub eta_image: Vec<TermFile>,
}

/// One instance of a generator family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LGenerator {
    pub family: String,
    pub k: u32,
    pub name: String,
    pub degree: TriDegree,
    pub order: u64,
    pub part: Part,
    pub cell: Cell,
}

#[derive(Clone, Debug)]
pub struct D1Term {
    pub coeff: i64,
    pub prefix: Monomial,
    pub family: usize,
    pub shift: i64,
}

#[derive(Clone, Debug)]
pub struct D1Row {
    pub family: usize,
    pub parity: Parity,
    pub value: Vec<D1Term>,
}

type CellList = Arc<Vec<(Cell, u64)>>;

/// Additive and multiplicative model of `E1` of the fiber.
#[derive(Debug)]
pub struct FiberModel {
    name: String,
    base: Arc<Presentation>,
    iota_shift: TriDegree,
    periodic: usize,
    families: Vec<LFamily>,
    rows: Vec<D1Row>,
    eta_target: Option<String>,
    file: FiberFile,
    cache: RwLock<HashMap<TriDegree, CellList>>,
}

impl FiberModel {
    pub fn from_json(text: &str, base: Arc<Presentation>) -> Result<Self> {
        let file: FiberFile = serde_json::from_str(text)?;
        Self::from_file(file, base)
    }

    pub fn from_file(file: FiberFile, base: Arc<Presentation>) -> Result<Self> {
        if file.base != base.name() {
            return Err(EngineError::Presentation(format!(
                "{} expects base {}, got {}",
                file.name,
                file.base,
                base.name()
            )));
        }
        if !base.has_psi3() {
            return Err(EngineError::Presentation(format!("base {} carries no psi3 data", base.name())));
        }
        let periodic = base.index_of(&file.periodic_generator)?;
        let families = file
            .families
            .iter()
            .map(|f| {
                Ok(LFamily {
                    name: f.name.clone(),
                    part: f.part,
                    base: base.monomial_from_map(&f.base)?,
                    periodic: f.periodic,
                    eta_image: f.eta_image.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let family_index = |name: &str| {
            families
                .iter()
                .position(|f| f.name == name)
                .ok_or_else(|| EngineError::Presentation(format!("unknown generator family {name}")))
        };
        let mut rows = Vec::new();
        for r in &file.d1 {
            let family = family_index(&r.source)?;
            let value = r
                .value
                .iter()
                .map(|t| {
                    Ok(D1Term {
                        coeff: t.coeff,
                        prefix: base.monomial_from_map(&t.prefix)?,
                        family: family_index(&t.family)?,
                        shift: t.shift,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(D1Row { family, parity: r.parity, value });
        }
        let model = FiberModel {
            name: file.name.clone(),
            base,
            iota_shift: TriDegree::from(file.iota_shift),
            periodic,
            families,
            rows,
            eta_target: file.eta_target.clone(),
            file,
            cache: RwLock::new(HashMap::new()),
        };
        model.check_rows()?;
        Ok(model)
    }

    /// Every tabulated `d1` value must have the degree of a `d1`.
    fn check_rows(&self) -> Result<()> {
        for row in &self.rows {
            for k in 0..4u32 {
                let k = 2 * k + if row.parity == Parity::Odd { 1 } else { 0 };
                let Some(src) = self.family_cell(row.family, k) else { continue };
                let expected = self.degree(&src) + TriDegree::differential_shift(1);
                for t in &row.value {
                    let kk = k as i64 + t.shift;
                    let target = self
                        .family_cell(t.family, kk.max(0) as u32)
                        .filter(|_| kk >= 0)
                        .ok_or_else(|| EngineError::Presentation("d1 table refers to a negative index".into()))?;
                    let d = self.base.degree_of(&t.prefix) + self.degree(&target);
                    if d != expected {
                        return Err(EngineError::Presentation(format!(
                            "d1 table row for {} has a term of degree {d}, expected {expected}",
                            self.families[row.family].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &Arc<Presentation> {
        &self.base
    }

    pub fn iota_shift(&self) -> TriDegree {
        self.iota_shift
    }

    pub fn eta_target(&self) -> Option<&str> {
        self.eta_target.as_deref()
    }

    pub fn higher_differentials(&self) -> Option<&[String]> {
        self.file.higher_differentials.as_deref()
    }

    pub fn file(&self) -> &FiberFile {
        &self.file
    }

    pub fn families(&self) -> &[LFamily] {
        &self.families
    }

    pub fn d1_rows(&self) -> &[D1Row] {
        &self.rows
    }

    pub fn degree(&self, c: &Cell) -> TriDegree {
        let d = self.base.degree_of(&c.mono);
        if c.iota {
            d + self.iota_shift
        } else {
            d
        }
    }

    /// Cells (with orders) in degree `d`, kernel cells first.
    pub fn cells_at(&self, d: TriDegree) -> Result<Arc<Vec<(Cell, u64)>>> {
        if let Some(hit) = self.cache.read().expect("cache poisoned").get(&d) {
            return Ok(hit.clone());
        }
        let mut cells: Vec<(Cell, u64)> = Vec::new();
        if d.f >= 0 {
            let here = psi_split(&self.base, d)?;
            cells.extend(here.kernel.into_iter().map(|(m, o)| (Cell::plain(m), o)));
            let below = psi_split(&self.base, d - self.iota_shift)?;
            cells.extend(below.cokernel.into_iter().map(|(m, o)| (Cell::iota(m), o)));
        }
        let cells = Arc::new(cells);
        self.cache.write().expect("cache poisoned").insert(d, cells.clone());
        Ok(cells)
    }

    /// Order of a cell, or `None` if it is not a basis cell.
    pub fn order_of(&self, c: &Cell) -> Result<Option<u64>> {
        Ok(self.cells_at(self.degree(c))?.iter().find(|(x, _)| x == c).map(|(_, o)| *o))
    }

    fn reduce(&self, chain: &Chain) -> Result<Chain> {
        let mut out = Chain::zero();
        for (c, k) in chain.terms() {
            let o = self.order_of(c)?.ok_or_else(|| {
                EngineError::Consistency(format!(
                    "{} is not a basis cell of {}",
                    c.format(&self.base, Style::Ascii),
                    self.name
                ))
            })?;
            out.add_term(if o == 0 { k } else { k.rem_euclid(o as i64) }, c.clone());
        }
        Ok(out)
    }

    fn lift_element(&self, e: &crate::algebra::Element, iota: bool) -> Result<Chain> {
        let chain: Chain = e.terms().map(|(m, k)| (Cell { iota, mono: m.clone() }, k)).collect();
        self.reduce(&chain)
    }

    /// `d1` computed from the base ring's Leibniz rule.
    pub fn d1(&self, c: &Cell) -> Result<Chain> {
        let value = self.base.leibniz(1, &c.mono)?;
        self.lift_element(&value, c.iota)
    }

    /// Product in E1; `iota * iota = 0`.
    pub fn multiply(&self, a: &Chain, b: &Chain) -> Result<Chain> {
        let mut out = Chain::zero();
        for (ca, ka) in a.terms() {
            for (cb, kb) in b.terms() {
                if ca.iota && cb.iota {
                    continue;
                }
                let prod = self.base.multiply_monomials(&ca.mono, &cb.mono)?;
                let iota = ca.iota || cb.iota;
                for (m, k) in prod.terms() {
                    out.add_term(k * ka * kb, Cell { iota, mono: m.clone() });
                }
            }
        }
        self.reduce(&out)
    }

    /// The cell of family member `k`, if the family has one.
    pub fn family_cell(&self, family: usize, k: u32) -> Option<Cell> {
        let f = &self.families[family];
        if !f.periodic && k > 0 {
            return None;
        }
        let mono = f.base.mul(&Monomial::generator(f.base.len(), self.periodic, k));
        Some(Cell { iota: f.part == Part::Cokernel, mono })
    }

    pub fn family_index(&self, name: &str) -> Option<usize> {
        self.families.iter().position(|f| f.name == name)
    }

    /// Display name of family member `k`, such as `tauh1.v1^6`.
    pub fn generator_name(&self, family: usize, k: u32) -> String {
        match self.family_cell(family, k) {
            Some(c) => Chain::cell(c).format(&self.base, Style::Ascii),
            None => format!("{}[{k}]", self.families[family].name),
        }
    }

    /// All family members with `k <= k_max`, with degrees and orders.
    pub fn generators(&self, k_max: u32) -> Result<Vec<LGenerator>> {
        let mut out = Vec::new();
        for (i, f) in self.families.iter().enumerate() {
            let top = if f.periodic { k_max } else { 0 };
            for k in 0..=top {
                let cell = self.family_cell(i, k).expect("k in range");
                let order = self.order_of(&cell)?.ok_or_else(|| {
                    EngineError::Construction(format!("family member {} is not a basis cell", self.generator_name(i, k)))
                })?;
                out.push(LGenerator {
                    family: f.name.clone(),
                    k,
                    name: self.generator_name(i, k),
                    degree: self.degree(&cell),
                    order,
                    part: f.part,
                    cell,
                });
            }
        }
        Ok(out)
    }

    /// Writes a cell as a product of family members: one member carrying the
    /// whole periodic exponent, times members with `k = 0`.
    pub fn decompose(&self, c: &Cell) -> Result<Vec<(usize, u32)>> {
        let k = c.mono.exponent(self.periodic);
        let rest = c.mono.with_exponent(self.periodic, 0);
        let carrier = if c.iota {
            self.families.iter().position(|f| f.part == Part::Cokernel && f.periodic)
        } else if k == 0 {
            None
        } else {
            self.families
                .iter()
                .position(|f| f.periodic && f.part == Part::Kernel && rest.div(&f.base).is_some())
        };
        let mut factors = Vec::new();
        let mut remainder = rest;
        match carrier {
            Some(i) => {
                remainder = remainder.div(&self.families[i].base).ok_or_else(|| self.undecomposable(c))?;
                factors.push((i, k));
            }
            None if k > 0 || c.iota => return Err(self.undecomposable(c)),
            None => {}
        }
        for g in 0..remainder.len() {
            for _ in 0..remainder.exponent(g) {
                let unit = Monomial::generator(remainder.len(), g, 1);
                let i = self
                    .families
                    .iter()
                    .position(|f| f.part == Part::Kernel && f.base == unit)
                    .ok_or_else(|| self.undecomposable(c))?;
                factors.push((i, 0));
            }
        }
        Ok(factors)
    }

    fn undecomposable(&self, c: &Cell) -> EngineError {
        EngineError::Construction(format!(
            "{} does not factor through the generator families of {}",
            c.format(&self.base, Style::Ascii),
            self.name
        ))
    }

    /// `d1` of a family member, read off the tabulated rows.
    pub fn d1_of_generator(&self, family: usize, k: u32) -> Result<Chain> {
        let Some(row) = self.rows.iter().find(|r| r.family == family && r.parity.matches(k)) else {
            return Ok(Chain::zero());
        };
        let mut out = Chain::zero();
        for t in &row.value {
            let kk = k as i64 + t.shift;
            if kk < 0 {
                return Err(EngineError::Consistency("d1 table used below its range".into()));
            }
            let cell = self
                .family_cell(t.family, kk as u32)
                .ok_or_else(|| EngineError::Consistency("d1 table names a missing family member".into()))?;
            let prefix = Chain::cell(Cell::plain(t.prefix.clone()));
            let prod = self.multiply(&prefix, &Chain::cell(cell))?;
            out.add(&prod.scaled(t.coeff));
        }
        self.reduce(&out)
    }

    /// `d1` computed from the tabulated generator values, the Leibniz rule
    /// and the product on E1. This is independent of the base ring's
    /// differential and serves as a cross-check.
    pub fn d1_via_table(&self, c: &Cell) -> Result<Chain> {
        let factors = self.decompose(c)?;
        let cells: Vec<Chain> =
            factors.iter().map(|&(f, k)| Chain::cell(self.family_cell(f, k).expect("decomposed"))).collect();
        let mut total = Chain::zero();
        for i in 0..factors.len() {
            let mut term = self.d1_of_generator(factors[i].0, factors[i].1)?;
            for (j, x) in cells.iter().enumerate() {
                if j != i {
                    term = self.multiply(&term, x)?;
                }
            }
            total.add(&term);
        }
        self.reduce(&total)
    }
}
