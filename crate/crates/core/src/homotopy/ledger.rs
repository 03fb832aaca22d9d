//! Declarative hidden-extension tables and their periodic expansion.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;

use super::{chain_degree, class_order, einf_class, parse_label, times_monomial, top_class, Class};
use crate::algebra::{Monomial, Style};
use crate::cell::Chain;
use crate::degree::TriDegree;
use crate::error::{EngineError, Result};
use crate::objects::SpectralObject;
use crate::ss::SpectralSequence;

/// Checked-in ledgers, by object name.
pub const LEDGER_FILES: &[(&str, &str)] = &[
    ("ko", include_str!("../../data/hidden/ko.tsv")),
    ("L", include_str!("../../data/hidden/L.tsv")),
    ("L_C", include_str!("../../data/hidden/L_C.tsv")),
];

/// Multiplication recorded by a hidden extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtensionKind {
    Rho,
    H,
    Eta,
}

impl ExtensionKind {
    pub const ALL: [ExtensionKind; 3] = [ExtensionKind::Rho, ExtensionKind::H, ExtensionKind::Eta];

    /// Change in `(s, w)` caused by the multiplication.
    pub fn shift(self) -> (i64, i64) {
        match self {
            ExtensionKind::Rho => (-1, -1),
            ExtensionKind::H => (0, 0),
            ExtensionKind::Eta => (1, 1),
        }
    }

    /// Filtration of the class detecting the multiplier on E1; a hidden
    /// extension lands strictly above this.
    pub fn page_filtration(self) -> i64 {
        match self {
            ExtensionKind::Rho | ExtensionKind::Eta => 1,
            ExtensionKind::H => 0,
        }
    }

    /// Base generator detecting the multiplier on the page, if any.
    pub fn detector(self) -> Option<&'static str> {
        match self {
            ExtensionKind::Rho => Some("rho"),
            ExtensionKind::Eta => Some("h1"),
            ExtensionKind::H => None,
        }
    }
}

impl fmt::Display for ExtensionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtensionKind::Rho => "rho",
            ExtensionKind::H => "h",
            ExtensionKind::Eta => "eta",
        })
    }
}

impl FromStr for ExtensionKind {
    type Err = EngineError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rho" | "ρ" => Ok(ExtensionKind::Rho),
            "h" => Ok(ExtensionKind::H),
            "eta" | "η" => Ok(ExtensionKind::Eta),
            _ => Err(EngineError::Parse(format!("unknown extension kind {s:?}"))),
        }
    }
}

/// Which endpoint the degree column of a ledger row refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Anchor {
    Source,
    Target,
}

/// Periodicity flags of a ledger row.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Periodicity {
    pub tau4: bool,
    pub v1_4: bool,
    /// Expanded sources are the order-two multiple of the unit source.
    pub order_two_multiple: bool,
    /// Expanded targets are the top class of their column.
    pub highest_filtration: bool,
}

impl Periodicity {
    pub fn is_special(&self) -> bool {
        self.order_two_multiple || self.highest_filtration || !self.v1_4 || !self.tau4
    }
}

impl FromStr for Periodicity {
    type Err = EngineError;
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Periodicity::default();
        for flag in s.split(',').map(str::trim).filter(|f| !f.is_empty() && *f != "-") {
            match flag {
                "tau4" => p.tau4 = true,
                "v1_4" => p.v1_4 = true,
                "order-two-multiple" => p.order_two_multiple = true,
                "highest-filtration" => p.highest_filtration = true,
                _ => return Err(EngineError::Parse(format!("unknown periodicity flag {flag:?}"))),
            }
        }
        Ok(p)
    }
}

impl fmt::Display for Periodicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut flags = Vec::new();
        if self.tau4 {
            flags.push("tau4");
        }
        if self.v1_4 {
            flags.push("v1_4");
        }
        if self.highest_filtration {
            flags.push("highest-filtration");
        }
        if self.order_two_multiple {
            flags.push("order-two-multiple");
        }
        if flags.is_empty() {
            f.write_str("-")
        } else {
            f.write_str(&flags.join(","))
        }
    }
}

/// One line of a ledger file, before its labels are resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerRow {
    pub line: usize,
    pub coweight: i64,
    pub source: String,
    pub kind: ExtensionKind,
    pub target: String,
    pub degree: TriDegree,
    pub anchor: Anchor,
    pub proof: String,
    pub periodicity: Periodicity,
}

/// The hidden-extension table of one object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ledger {
    pub object: String,
    pub rows: Vec<LedgerRow>,
}

impl Ledger {
    /// Parses the tab-separated format: coweight, source, kind, target,
    /// `s,f,w`, anchor, proof, flags. Lines starting with `#` are comments.
    pub fn parse(object: &str, text: &str) -> Result<Ledger> {
        let mut rows = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw.split('\t').map(str::trim).collect();
            if fields.len() != 8 {
                return Err(EngineError::Parse(format!("ledger {object} line {line}: expected 8 fields, got {}", fields.len())));
            }
            let bad = |what: &str| EngineError::Parse(format!("ledger {object} line {line}: bad {what}"));
            let coweight = fields[0].parse().map_err(|_| bad("coweight"))?;
            let degree: Vec<i64> =
                fields[4].split(',').map(|x| x.trim().parse()).collect::<std::result::Result<_, _>>().map_err(|_| bad("degree"))?;
            if degree.len() != 3 {
                return Err(bad("degree"));
            }
            let anchor = match fields[5] {
                "source" => Anchor::Source,
                "target" => Anchor::Target,
                _ => return Err(bad("anchor")),
            };
            rows.push(LedgerRow {
                line,
                coweight,
                source: fields[1].to_string(),
                kind: fields[2].parse()?,
                target: fields[3].to_string(),
                degree: TriDegree::new(degree[0], degree[1], degree[2]),
                anchor,
                proof: fields[6].to_string(),
                periodicity: fields[7].parse()?,
            });
        }
        Ok(Ledger { object: object.to_string(), rows })
    }

    /// The shipped ledger of an object, if it has one.
    pub fn shipped(object: &str) -> Result<Option<Ledger>> {
        LEDGER_FILES.iter().find(|(n, _)| *n == object).map(|(n, t)| Ledger::parse(n, t)).transpose()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# coweight\tsource\tkind\ttarget\tdegree\tanchor\tproof\tflags\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{},{},{}\t{}\t{}\t{}\n",
                r.coweight,
                r.source,
                r.kind,
                r.target,
                r.degree.s,
                r.degree.f,
                r.degree.w,
                match r.anchor {
                    Anchor::Source => "source",
                    Anchor::Target => "target",
                },
                r.proof,
                r.periodicity
            ));
        }
        out
    }

    /// Resolves every row against the E1 page of `object` and checks its
    /// degree arithmetic.
    pub fn resolve(&self, object: &SpectralObject) -> Result<Vec<HiddenExtension>> {
        self.rows.iter().map(|row| HiddenExtension::from_row(object, row)).collect()
    }
}

/// A hidden extension between two E1 chains, possibly a periodic translate
/// of a ledger row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HiddenExtension {
    pub kind: ExtensionKind,
    pub source: Chain,
    pub target: Chain,
    pub source_degree: TriDegree,
    pub target_degree: TriDegree,
    pub label: String,
    pub target_label: String,
    pub provenance: String,
    pub periodicity: Periodicity,
    /// Powers `(a, b)` of `tau^4` and `v1^4` applied to the ledger row.
    pub multiple: (u32, u32),
}

impl HiddenExtension {
    fn from_row(object: &SpectralObject, row: &LedgerRow) -> Result<Self> {
        let err = |msg: String| EngineError::Ledger(format!("{} line {}: {msg}", object.name(), row.line));
        let source = parse_label(object, &row.source)?;
        let target = parse_label(object, &row.target)?;
        let source_degree = chain_degree(object, &source).map_err(|e| err(e.to_string()))?;
        let target_degree = chain_degree(object, &target).map_err(|e| err(e.to_string()))?;
        let anchored = match row.anchor {
            Anchor::Source => source_degree,
            Anchor::Target => target_degree,
        };
        if anchored != row.degree {
            return Err(err(format!("listed degree {} but the label has degree {anchored}", row.degree)));
        }
        if source_degree.coweight() != row.coweight {
            return Err(err(format!("listed coweight {} but the source has coweight {}", row.coweight, source_degree.coweight())));
        }
        let ext = HiddenExtension {
            kind: row.kind,
            source,
            target,
            source_degree,
            target_degree,
            label: row.source.clone(),
            target_label: row.target.clone(),
            provenance: row.proof.clone(),
            periodicity: row.periodicity,
            multiple: (0, 0),
        };
        ext.check_degrees().map_err(|e| err(e.to_string()))?;
        Ok(ext)
    }

    /// Checks that the endpoints differ by the degree of the multiplier and
    /// that the target lies strictly above the product on the page.
    pub fn check_degrees(&self) -> Result<()> {
        let (ds, dw) = self.kind.shift();
        let delta = self.target_degree - self.source_degree;
        if (delta.s, delta.w) != (ds, dw) {
            return Err(EngineError::Ledger(format!(
                "{} extension from {} to {} changes (s, w) by ({}, {})",
                self.kind, self.label, self.target_label, delta.s, delta.w
            )));
        }
        if delta.f <= self.kind.page_filtration() {
            return Err(EngineError::Ledger(format!(
                "{} extension from {} to {} does not raise filtration past the page product",
                self.kind, self.label, self.target_label
            )));
        }
        Ok(())
    }
}

/// A periodic translate that the ledger says is not an extension, with the
/// reason it is absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Excluded {
    pub row: String,
    pub multiple: (u32, u32),
    pub degree: TriDegree,
    pub reason: String,
}

/// Hidden extensions in force over a computed window.
#[derive(Clone, Debug, Default)]
pub struct ExpandedLedger {
    pub extensions: Vec<ResolvedExtension>,
    pub excluded: Vec<Excluded>,
}

/// An expanded extension with both endpoints identified in `E_infinity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedExtension {
    pub extension: HiddenExtension,
    pub source_class: Vec<BigInt>,
    pub target_class: Vec<BigInt>,
}

impl ExpandedLedger {
    /// Extensions of `kind` whose source is the class `class` in degree `d`.
    pub fn lookup(&self, kind: ExtensionKind, d: TriDegree, class: &[BigInt]) -> Vec<&ResolvedExtension> {
        self.extensions
            .iter()
            .filter(|e| e.extension.kind == kind && e.extension.source_degree == d && e.source_class == class)
            .collect()
    }
}

fn periodic_factor(object: &SpectralObject, a: u32, b: u32) -> Result<Monomial> {
    Ok(power_of(object, "tau", 4 * a)?.mul(&power_of(object, "v1", 4 * b)?))
}

/// The monomial written `symbol^power`, honoring the scale of its generator.
pub(crate) fn power_of(object: &SpectralObject, symbol: &str, power: u32) -> Result<Monomial> {
    let p = object.base();
    if power == 0 {
        return Ok(p.one());
    }
    let g = p.index_of(symbol_of(object, symbol)?)?;
    let scale = p.generators()[g].scale;
    if !power.is_multiple_of(scale) {
        return Err(EngineError::Ledger(format!("{symbol}^{power} is not a monomial of {}", p.name())));
    }
    Ok(Monomial::generator(p.generators().len(), g, power / scale))
}

/// Name of the generator written with `symbol`.
fn symbol_of<'a>(object: &'a SpectralObject, symbol: &str) -> Result<&'a str> {
    object
        .base()
        .generators()
        .iter()
        .find(|g| g.symbol == symbol)
        .map(|g| g.name.as_str())
        .ok_or_else(|| EngineError::Ledger(format!("{} has no generator {symbol}", object.base().name())))
}

fn primitive(chain: &Chain) -> (i64, Chain) {
    let g = chain.terms().fold(0i64, |g, (_, k)| g.gcd(&k));
    if g == 0 {
        return (0, chain.clone());
    }
    (g, chain.terms().map(|(c, k)| (c.clone(), k / g)).collect())
}

/// The least power of two `m` for which `m * unit` is a nonzero permanent
/// cycle, with its class.
fn surviving_multiple(ss: &SpectralSequence, d: TriDegree, unit: &Chain) -> Result<(i64, Vec<BigInt>)> {
    let mut m = 1i64;
    for _ in 0..62 {
        match einf_class(ss, d, &unit.scaled(m))? {
            Class::Nonzero(c) => return Ok((m, c)),
            Class::NotPermanent => m *= 2,
            other => return Err(EngineError::Ledger(format!("multiples of the unit source are {}", other.describe()))),
        }
    }
    Err(EngineError::Ledger("no multiple of the unit source is a permanent cycle".into()))
}

/// Translates each base row by `tau^4` and `v1^4` as its flags allow, over
/// the degrees reported by `ss`, and identifies both endpoints in
/// `E_infinity`.
///
/// An endpoint missing from `E_infinity` is a ledger error, except for
/// `v1^4`-translates of rows that are not `v1^4`-periodic, whose sources
/// must then fail to be permanent cycles; those are listed as excluded.
pub fn expand_ledger(base: &[HiddenExtension], ss: &SpectralSequence) -> Result<ExpandedLedger> {
    let object = &ss.object;
    let targets: &BTreeSet<TriDegree> = &ss.targets;
    let max_cw = targets.iter().map(|d| d.coweight()).max().unwrap_or(0);
    let mut out = ExpandedLedger::default();
    for row in base {
        let tau4 = object.base().degree_of(&periodic_factor(object, 1, 0)?);
        let v1_4 = object.base().degree_of(&periodic_factor(object, 0, 1)?);
        let a_max = if row.periodicity.tau4 && tau4.coweight() > 0 {
            ((max_cw - row.source_degree.coweight()).max(0) / tau4.coweight()) as u32
        } else {
            0
        };
        let b_max = ((max_cw - row.source_degree.coweight()).max(0) / v1_4.coweight().max(1)) as u32;
        for a in 0..=a_max {
            for b in 0..=b_max {
                let shift = tau4 * i64::from(a) + v1_4 * i64::from(b);
                let source_degree = row.source_degree + shift;
                if !targets.contains(&source_degree) {
                    continue;
                }
                let factor = periodic_factor(object, a, b)?;
                let name = format!("{} x tau^{} v1^{}", row.label, 4 * a, 4 * b);
                if b > 0 && !row.periodicity.v1_4 {
                    let status = match times_monomial(ss, &row.source, &factor) {
                        Ok(source) => einf_class(ss, source_degree, &source)?,
                        Err(EngineError::Consistency(_)) => Class::NotInE1,
                        Err(e) => return Err(e),
                    };
                    match status {
                        Class::Nonzero(_) => {
                            return Err(EngineError::Ledger(format!(
                                "{name} survives although the row is not v1^4-periodic"
                            )))
                        }
                        other => out.excluded.push(Excluded {
                            row: row.label.clone(),
                            multiple: (a, b),
                            degree: source_degree,
                            reason: other.describe(),
                        }),
                    }
                    continue;
                }
                let mut source = times_monomial(ss, &row.source, &factor)?;
                if row.periodicity.order_two_multiple {
                    let (k, unit) = primitive(&row.source);
                    let unit = times_monomial(ss, &unit, &factor)?;
                    let (m, class) = surviving_multiple(ss, source_degree, &unit)
                        .map_err(|e| EngineError::Ledger(format!("{name}: {e}")))?;
                    let order = class_order(ss, source_degree, &class)?;
                    if order == 0 || order % 2 != 0 {
                        return Err(EngineError::Ledger(format!("{name}: unit source has order {order}")));
                    }
                    let half = i64::try_from(order / 2)
                        .ok()
                        .and_then(|h| h.checked_mul(m))
                        .ok_or(EngineError::Overflow("scaling a source"))?;
                    if (a, b) == (0, 0) && half != k {
                        return Err(EngineError::Ledger(format!(
                            "{}: listed multiple {k} but the order-two multiple is {half}",
                            row.label
                        )));
                    }
                    source = unit.scaled(half);
                }
                let (target, target_degree) = if row.periodicity.highest_filtration {
                    let listed = row.target_degree + shift;
                    match top_class(ss, listed.s, listed.w) {
                        Err(EngineError::Usage(reason)) => {
                            out.excluded.push(Excluded { row: row.label.clone(), multiple: (a, b), degree: listed, reason });
                            continue;
                        }
                        Err(e) => return Err(e),
                        Ok(Some((d, chain))) => (chain, d),
                        Ok(None) => {
                            return Err(EngineError::Ledger(format!(
                                "{name}: column ({}, {}) has no classes",
                                listed.s, listed.w
                            )))
                        }
                    }
                } else {
                    (times_monomial(ss, &row.target, &factor)?, row.target_degree + shift)
                };
                if !targets.contains(&target_degree) {
                    continue;
                }
                let source_class = match einf_class(ss, source_degree, &source)? {
                    Class::Nonzero(c) => c,
                    other => {
                        return Err(EngineError::Ledger(format!("{name}: source at {source_degree} is {}", other.describe())))
                    }
                };
                let target_class = match einf_class(ss, target_degree, &target)? {
                    Class::Nonzero(c) => c,
                    other => {
                        return Err(EngineError::Ledger(format!("{name}: target at {target_degree} is {}", other.describe())))
                    }
                };
                if (a, b) == (0, 0) && row.periodicity.highest_filtration {
                    let listed = match einf_class(ss, row.target_degree, &row.target)? {
                        Class::Nonzero(c) => c,
                        other => {
                            return Err(EngineError::Ledger(format!("{}: listed target is {}", row.label, other.describe())))
                        }
                    };
                    if row.target_degree != target_degree || listed != target_class {
                        return Err(EngineError::Ledger(format!(
                            "{}: listed target is not the top class of its column",
                            row.label
                        )));
                    }
                }
                let base_presentation = object.base();
                let extension = HiddenExtension {
                    kind: row.kind,
                    label: if (a, b) == (0, 0) { row.label.clone() } else { source.format(base_presentation, Style::Ascii) },
                    target_label: if (a, b) == (0, 0) && !row.periodicity.highest_filtration {
                        row.target_label.clone()
                    } else {
                        target.format(base_presentation, Style::Ascii)
                    },
                    source,
                    target,
                    source_degree,
                    target_degree,
                    provenance: if (a, b) == (0, 0) {
                        row.provenance.clone()
                    } else {
                        format!("{} (periodic translate)", row.provenance)
                    },
                    periodicity: row.periodicity,
                    multiple: (a, b),
                };
                extension.check_degrees()?;
                out.extensions.push(ResolvedExtension { extension, source_class, target_class });
            }
        }
    }
    Ok(out)
}
