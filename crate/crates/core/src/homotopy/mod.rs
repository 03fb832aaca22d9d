//! Homotopy groups from `E_infinity` columns and hidden extensions.

mod assemble;
mod ledger;

pub use assemble::{order_pattern_check, ActionRecord, ActionValue, Assembler, ColumnGenerator, HomotopyGroup,
    OrderPatternReport, OrderPatternRow, Provenance, Relation};
pub use ledger::{expand_ledger, Anchor, Excluded, ExpandedLedger, ExtensionKind, HiddenExtension, Ledger, LedgerRow,
    Periodicity, ResolvedExtension, LEDGER_FILES};
pub(crate) use ledger::power_of;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::{Monomial, Style};
use crate::cell::{Cell, Chain};
use crate::degree::TriDegree;
use crate::error::{EngineError, Result};
use crate::objects::SpectralObject;
use crate::ss::SpectralSequence;

/// What an E1 chain is on the last page.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Class {
    /// Coordinates on the summands, reduced modulo their orders.
    Nonzero(Vec<BigInt>),
    Boundary,
    NotPermanent,
    /// The chain is not made of E1 cells of the object.
    NotInE1,
}

impl Class {
    pub fn describe(&self) -> String {
        match self {
            Class::Nonzero(_) => "a nonzero class".to_string(),
            Class::Boundary => "zero in E_infinity".to_string(),
            Class::NotPermanent => "not a permanent cycle".to_string(),
            Class::NotInE1 => "not an E1 class".to_string(),
        }
    }
}

/// Parses a label such as `i4v1^2`, `tauh1^3` or `i.rho.h1.tauh1` into a
/// chain of E1 cells; monomials are put in normal form first.
pub fn parse_label(object: &SpectralObject, text: &str) -> Result<Chain> {
    let base = object.base();
    let mut out = Chain::zero();
    for term in text.split('+').map(str::trim) {
        if term.is_empty() {
            return Err(EngineError::Parse(format!("empty term in label {text:?}")));
        }
        let (iota, body) = match term.strip_prefix('i') {
            Some(rest) => (true, rest),
            None => (false, term),
        };
        if iota && object.fiber_model().is_none() {
            return Err(EngineError::Parse(format!("{} has no iota classes: {text:?}", object.name())));
        }
        for (m, k) in base.parse_element(body)?.terms() {
            out.add_term(k, Cell { iota, mono: m.clone() });
        }
    }
    reduce_on_cells(object, None, &out)
}

/// Multiplies every cell of `chain` by a monomial of the base ring and
/// reduces modulo the orders of the resulting E1 cells.
pub fn times_monomial(ss: &SpectralSequence, chain: &Chain, m: &Monomial) -> Result<Chain> {
    let object = &ss.object;
    let base = object.base();
    let mut out = Chain::zero();
    for (c, k) in chain.terms() {
        for (p, j) in base.multiply_monomials(&c.mono, m)?.terms() {
            out.add_term(k * j, Cell { iota: c.iota, mono: p.clone() });
        }
    }
    reduce_on_cells(object, Some(ss), &out)
}

/// Reduces a chain modulo the orders of its E1 cells, failing on anything
/// that is not an E1 cell.
fn reduce_on_cells(object: &SpectralObject, ss: Option<&SpectralSequence>, chain: &Chain) -> Result<Chain> {
    if chain.is_zero() {
        return Ok(chain.clone());
    }
    let d = chain_degree(object, chain)?;
    let cached = ss.and_then(|ss| ss.cells(d));
    let computed;
    let cells = match cached {
        Some(c) => c,
        None => {
            computed = object.cells_at(d)?;
            computed.as_slice()
        }
    };
    let mut missing = None;
    let reduced = chain.reduce(|c| match cells.iter().find(|(x, _)| x == c) {
        Some((_, o)) => *o,
        None => {
            missing = Some(c.clone());
            0
        }
    });
    match missing {
        Some(c) => Err(EngineError::Consistency(format!(
            "{} is not an E1 cell of {}",
            c.format(object.base(), Style::Ascii),
            object.name()
        ))),
        None => Ok(reduced),
    }
}

/// The common degree of the cells of a nonzero chain.
pub fn chain_degree(object: &SpectralObject, chain: &Chain) -> Result<TriDegree> {
    let mut degrees = chain.terms().map(|(c, _)| object.degree(c));
    let first = degrees.next().ok_or_else(|| EngineError::Usage("the zero chain has no degree".into()))?;
    if degrees.any(|d| d != first) {
        return Err(EngineError::Usage("chain is not homogeneous".into()));
    }
    Ok(first)
}

/// Identifies an E1 chain of degree `d` on the last page of `ss`.
pub fn einf_class(ss: &SpectralSequence, d: TriDegree, chain: &Chain) -> Result<Class> {
    page_class(ss, ss.pages.len() as u32, d, chain)
}

/// Identifies an E1 chain of degree `d` on `E_r`.
pub fn page_class(ss: &SpectralSequence, r: u32, d: TriDegree, chain: &Chain) -> Result<Class> {
    let cells = ss
        .cells(d)
        .ok_or_else(|| EngineError::Usage(format!("degree {d} lies outside the computed window")))?;
    let reduced = chain.reduce(|c| cells.iter().find(|(x, _)| x == c).map_or(0, |(_, o)| *o));
    if reduced.is_zero() {
        return Ok(Class::Boundary);
    }
    let coords = match ss.class_coordinates(r, d, &reduced) {
        Ok(v) => v,
        Err(EngineError::Consistency(_)) => return Ok(Class::NotPermanent),
        Err(e) => return Err(e),
    };
    let orders = ss.group(r, d).map(|g| g.orders()).unwrap_or_default();
    let v: Vec<BigInt> = coords
        .iter()
        .zip(&orders)
        .map(|(x, &o)| if o == 0 { x.clone() } else { x.mod_floor(&BigInt::from(o)) })
        .collect();
    if v.iter().all(Zero::is_zero) {
        Ok(Class::Boundary)
    } else {
        Ok(Class::Nonzero(v))
    }
}

/// Additive order of a class in degree `d`, 0 when infinite.
pub fn class_order(ss: &SpectralSequence, d: TriDegree, class: &[BigInt]) -> Result<u64> {
    let orders = ss.last().group(d).map(|g| g.orders()).unwrap_or_default();
    let mut total: u64 = 1;
    for (x, &o) in class.iter().zip(&orders) {
        if x.is_zero() {
            continue;
        }
        if o == 0 {
            return Ok(0);
        }
        let g = x.gcd(&BigInt::from(o)).to_u64().ok_or(EngineError::Overflow("computing an order"))?;
        total = total.lcm(&(o / g));
    }
    Ok(total)
}

/// Degrees of the column `(s, w)` reported by `ss`, by filtration, after
/// checking that the column ends inside the window.
pub fn column_degrees(ss: &SpectralSequence, s: i64, w: i64) -> Result<Vec<TriDegree>> {
    let degrees: Vec<TriDegree> = ss.targets.iter().copied().filter(|d| d.s == s && d.w == w).collect();
    if degrees.is_empty() {
        return Err(EngineError::Usage(format!("column (s={s}, w={w}) lies outside the computed window")));
    }
    let page = ss.last();
    let top: Vec<&TriDegree> = degrees.iter().rev().take(2).collect();
    if top.len() < 2 || top.iter().any(|d| page.group(**d).is_some_and(|g| !g.is_zero())) {
        return Err(EngineError::Usage(format!(
            "column (s={s}, w={w}) reaches the filtration bound of the window"
        )));
    }
    Ok(degrees)
}

/// The single summand of highest filtration in column `(s, w)`.
pub fn top_class(ss: &SpectralSequence, s: i64, w: i64) -> Result<Option<(TriDegree, Chain)>> {
    let page = ss.last();
    for d in column_degrees(ss, s, w)?.into_iter().rev() {
        let Some(g) = page.group(d).filter(|g| !g.is_zero()) else { continue };
        if g.summands.len() > 1 {
            return Err(EngineError::Ledger(format!("the top of column (s={s}, w={w}) has several summands")));
        }
        return Ok(Some((d, g.summands[0].lift.clone())));
    }
    Ok(None)
}
