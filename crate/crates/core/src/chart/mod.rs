//! Chart data for a page: glyphs, colors and lines per summand, with a
//! tab-separated sidecar format and an SVG renderer.

mod svg;

pub use svg::{emit_svg, Layout, LAYOUT};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::cell::{Chain, Part};
use crate::degree::TriDegree;
use crate::error::{EngineError, Result};
use crate::homotopy::{page_class, power_of, times_monomial, Class, ExpandedLedger, ExtensionKind};
use crate::objects::SpectralObject;
use crate::ss::{SpectralSequence, Window};

/// What to draw and where.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartSpec {
    pub object: String,
    /// `None` for `E_infinity`.
    pub page: Option<u32>,
    pub residue: i64,
    pub modulus: i64,
    /// Coweights considered, before the residue filter.
    pub coweights: (i64, i64),
    pub stems: (i64, i64),
    pub max_filtration: i64,
    /// Power of `tau` identifying periodic copies; derived from the object
    /// and the modulus when absent.
    pub period: Option<u32>,
    pub differentials: bool,
    pub hidden: bool,
    pub products: bool,
}

impl ChartSpec {
    pub fn new(object: &str, page: Option<u32>, stems: (i64, i64), max_filtration: i64, coweights: (i64, i64)) -> Self {
        ChartSpec {
            object: object.to_string(),
            page,
            residue: 0,
            modulus: 1,
            coweights,
            stems,
            max_filtration,
            period: None,
            differentials: true,
            hidden: true,
            products: true,
        }
    }

    pub fn with_residue(mut self, residue: i64, modulus: i64) -> Self {
        self.residue = residue;
        self.modulus = modulus;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.modulus < 1 || (self.modulus & (self.modulus - 1)) != 0 {
            return Err(EngineError::Usage(format!("modulus {} is not a power of 2", self.modulus)));
        }
        if !(0..self.modulus).contains(&self.residue) {
            return Err(EngineError::Usage(format!("residue {} is not below the modulus {}", self.residue, self.modulus)));
        }
        if self.page == Some(0) {
            return Err(EngineError::Usage("pages start at 1".into()));
        }
        Ok(())
    }

    /// The `tau` exponent of the periodicity used for this chart.
    pub fn period_for(&self, object: &SpectralObject) -> u32 {
        self.period.unwrap_or_else(|| {
            let base = if object.base().generators().iter().any(|g| g.symbol == "rho") { 4 } else { 1 };
            base.max(self.modulus as u32)
        })
    }

    /// The window the spectral sequence must be computed on: the chart's
    /// degrees plus two periods of coweight above them.
    pub fn window(&self, object: &SpectralObject) -> Window {
        let p = i64::from(self.period_for(object));
        Window::new(self.stems, (0, self.max_filtration)).with_coweights(self.coweights.0, self.coweights.1 + 2 * p)
    }

    pub fn includes(&self, d: TriDegree) -> bool {
        let c = d.coweight();
        (self.stems.0..=self.stems.1).contains(&d.s)
            && (0..=self.max_filtration).contains(&d.f)
            && (self.coweights.0..=self.coweights.1).contains(&c)
            && c.mod_floor(&self.modulus) == self.residue
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Glyph {
    /// `Z/2`.
    Circle,
    /// `Z`.
    OpenBox,
    /// `Z/2^n` with `n >= 2`.
    NumberedBox(u32),
}

impl Glyph {
    pub fn for_order(order: u64) -> Result<Glyph> {
        match order {
            0 => Ok(Glyph::OpenBox),
            2 => Ok(Glyph::Circle),
            n if n.is_power_of_two() && n > 2 => Ok(Glyph::NumberedBox(n.trailing_zeros())),
            n => Err(EngineError::Usage(format!("no glyph for a summand of order {n}"))),
        }
    }
}

impl fmt::Display for Glyph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Glyph::Circle => f.write_str("circle"),
            Glyph::OpenBox => f.write_str("box"),
            Glyph::NumberedBox(n) => write!(f, "box{n}"),
        }
    }
}

impl FromStr for Glyph {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Glyph> {
        match s {
            "circle" => Ok(Glyph::Circle),
            "box" => Ok(Glyph::OpenBox),
            _ => s
                .strip_prefix("box")
                .and_then(|n| n.parse().ok())
                .filter(|&n| n >= 2)
                .map(Glyph::NumberedBox)
                .ok_or_else(|| EngineError::Parse(format!("unknown glyph {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ColorClass {
    /// Classes in the image of the iota part, drawn green.
    Image,
    /// Everything else, drawn black.
    Kernel,
    /// Copies of `Z` that are not periodic, drawn red.
    NonPeriodic,
}

impl fmt::Display for ColorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ColorClass::Image => "green",
            ColorClass::Kernel => "black",
            ColorClass::NonPeriodic => "red",
        })
    }
}

impl FromStr for ColorClass {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<ColorClass> {
        match s {
            "green" => Ok(ColorClass::Image),
            "black" => Ok(ColorClass::Kernel),
            "red" => Ok(ColorClass::NonPeriodic),
            _ => Err(EngineError::Parse(format!("unknown color {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LineKind {
    H1,
    Rho,
    Differential(u32),
    Hidden(ExtensionKind),
}

impl fmt::Display for LineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineKind::H1 => f.write_str("h1"),
            LineKind::Rho => f.write_str("rho"),
            LineKind::Differential(r) => write!(f, "d{r}"),
            LineKind::Hidden(k) => write!(f, "hidden-{k}"),
        }
    }
}

impl FromStr for LineKind {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<LineKind> {
        if let Some(k) = s.strip_prefix("hidden-") {
            return k.parse().map(LineKind::Hidden);
        }
        match s {
            "h1" => Ok(LineKind::H1),
            "rho" => Ok(LineKind::Rho),
            _ => s
                .strip_prefix('d')
                .and_then(|r| r.parse().ok())
                .filter(|&r| r >= 1)
                .map(LineKind::Differential)
                .ok_or_else(|| EngineError::Parse(format!("unknown line kind {s:?}"))),
        }
    }
}

/// A line from a datum to the datum at `(s, f)` labelled `label`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ChartLine {
    pub kind: LineKind,
    /// The value is a multiple of a positive power of `tau`.
    pub dashed: bool,
    pub s: i64,
    pub f: i64,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartDatum {
    pub s: i64,
    pub f: i64,
    pub glyph: Glyph,
    pub color: ColorClass,
    pub label: String,
    /// The summand recurs under two successive periods.
    pub arrow: bool,
    pub lines: Vec<ChartLine>,
}

impl ChartDatum {
    fn lines_field(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        if self.arrow {
            parts.push("arrow".into());
        }
        for l in &self.lines {
            let dash = if l.dashed { "~" } else { "" };
            parts.push(format!("{}{dash}>{},{}@{}", l.kind, l.s, l.f, l.label));
        }
        if parts.is_empty() {
            "-".into()
        } else {
            parts.join(";")
        }
    }
}

/// One line per datum: `s, f, glyph, color, label, lines`.
pub fn to_text(data: &[ChartDatum]) -> String {
    let mut out = String::from("# s\tf\tglyph\tcolor\tlabel\tlines\n");
    for d in data {
        out.push_str(&format!("{}\t{}\t{}\t{}\t{}\t{}\n", d.s, d.f, d.glyph, d.color, d.label, d.lines_field()));
    }
    out
}

fn parse_line(entry: &str) -> Result<ChartLine> {
    let bad = || EngineError::Parse(format!("malformed chart line {entry:?}"));
    let (head, rest) = entry.split_once('>').ok_or_else(bad)?;
    let (kind, dashed) = match head.strip_suffix('~') {
        Some(k) => (k, true),
        None => (head, false),
    };
    let (pos, label) = rest.split_once('@').ok_or_else(bad)?;
    let (s, f) = pos.split_once(',').ok_or_else(bad)?;
    Ok(ChartLine {
        kind: kind.parse()?,
        dashed,
        s: s.parse().map_err(|_| bad())?,
        f: f.parse().map_err(|_| bad())?,
        label: label.to_string(),
    })
}

/// Parses the output of [`to_text`].
pub fn parse_text(text: &str) -> Result<Vec<ChartDatum>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 6 {
            return Err(EngineError::Parse(format!("line {}: expected 6 fields, found {}", n + 1, fields.len())));
        }
        let int = |x: &str| x.parse::<i64>().map_err(|_| EngineError::Parse(format!("line {}: bad integer {x:?}", n + 1)));
        let mut arrow = false;
        let mut lines = Vec::new();
        if fields[5] != "-" {
            for entry in fields[5].split(';') {
                if entry == "arrow" {
                    arrow = true;
                } else {
                    lines.push(parse_line(entry)?);
                }
            }
        }
        out.push(ChartDatum {
            s: int(fields[0])?,
            f: int(fields[1])?,
            glyph: fields[2].parse()?,
            color: fields[3].parse()?,
            label: fields[4].to_string(),
            arrow,
            lines,
        });
    }
    Ok(out)
}

type Key = (TriDegree, usize);

/// Summands of the page with the copies that are `tau^p` translates of a
/// lower summand resolved to that summand.
struct Periodicity<'a> {
    ss: &'a SpectralSequence,
    r: u32,
    shift: TriDegree,
    factor: crate::algebra::Monomial,
    representative: BTreeMap<Key, Key>,
}

impl<'a> Periodicity<'a> {
    fn new(ss: &'a SpectralSequence, r: u32, period: u32) -> Result<Self> {
        let factor = power_of(&ss.object, "tau", period)?;
        let shift = ss.object.base().degree_of(&factor);
        let mut me = Periodicity { ss, r, shift, factor, representative: BTreeMap::new() };
        let page = ss.page(r).ok_or_else(|| EngineError::Usage(format!("page {r} was not computed")))?;
        let mut degrees: Vec<TriDegree> = ss.targets.iter().copied().collect();
        degrees.sort_by_key(|d| (d.coweight(), *d));
        for d in degrees {
            let Some(group) = page.group(d) else { continue };
            for j in 0..group.summands.len() {
                let Some(next) = me.translate(d, &group.summands[j].lift)? else { continue };
                if let Some(k) = unit_index(&next.1, &page.group(next.0).expect("translate degree computed").orders()) {
                    let root = me.representative.get(&(d, j)).copied().unwrap_or((d, j));
                    me.representative.entry((next.0, k)).or_insert(root);
                }
            }
        }
        Ok(me)
    }

    /// The class of `tau^p * lift` when its degree was computed.
    fn translate(&self, d: TriDegree, lift: &Chain) -> Result<Option<(TriDegree, Vec<BigInt>)>> {
        let e = d + self.shift;
        if !self.ss.targets.contains(&e) {
            return Ok(None);
        }
        let chain = times_monomial(self.ss, lift, &self.factor)?;
        Ok(match page_class(self.ss, self.r, e, &chain)? {
            Class::Nonzero(v) => Some((e, v)),
            _ => None,
        })
    }

    fn root(&self, key: Key) -> Key {
        self.representative.get(&key).copied().unwrap_or(key)
    }

    fn recurs_twice(&self, d: TriDegree, lift: &Chain) -> Result<bool> {
        let Some((e, _)) = self.translate(d, lift)? else { return Ok(false) };
        let once = times_monomial(self.ss, lift, &self.factor)?;
        Ok(self.translate(e, &once)?.is_some())
    }
}

/// Index of the single summand a class generates, if it is one.
fn unit_index(class: &[BigInt], orders: &[u64]) -> Option<usize> {
    let nonzero: Vec<usize> = (0..class.len()).filter(|&i| !class[i].is_zero()).collect();
    match nonzero.as_slice() {
        [i] if (orders[*i] == 0 && class[*i].abs() == BigInt::from(1)) || (orders[*i] != 0 && class[*i].is_odd()) => {
            Some(*i)
        }
        _ => None,
    }
}

/// Builds the chart of `ss` on page `spec.page`, or the last page.
pub fn chart_data(ss: &SpectralSequence, spec: &ChartSpec, ledger: Option<&ExpandedLedger>) -> Result<Vec<ChartDatum>> {
    spec.validate()?;
    let r = match spec.page {
        Some(r) if r as usize <= ss.pages.len() => r,
        Some(r) => return Err(EngineError::Usage(format!("page {r} was not computed"))),
        None => ss.pages.len() as u32,
    };
    let page = ss.page(r).expect("page exists");
    let object = &ss.object;
    let period = Periodicity::new(ss, r, spec.period_for(object))?;
    let tau = object.base().generators().iter().position(|g| g.symbol == "tau");

    let endpoint = |key: Key| -> Option<(i64, i64, String)> {
        let (d, j) = period.root(key);
        spec.includes(d).then(|| (d.s, d.f, page.group(d).expect("computed").summands[j].label.clone()))
    };
    // A value is a tau multiple when it is a periodic copy or equals the
    // class of an E1 cell divisible by tau.
    let is_tau_multiple = |d: TriDegree, class: &[BigInt], key: Key| -> Result<bool> {
        if period.root(key) != key {
            return Ok(true);
        }
        let Some(t) = tau else { return Ok(false) };
        for (cell, _) in ss.cells(d).unwrap_or_default() {
            if cell.mono.exponent(t) == 0 {
                continue;
            }
            if let Class::Nonzero(v) = page_class(ss, r, d, &Chain::cell(cell.clone()))? {
                if v == class || v.iter().map(|x| -x).collect::<Vec<_>>() == class {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    };
    let lines_to = |kind: LineKind, d: TriDegree, class: &[BigInt], out: &mut Vec<ChartLine>| -> Result<()> {
        for (k, x) in class.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            if let Some((s, f, label)) = endpoint((d, k)) {
                let dashed = is_tau_multiple(d, class, (d, k))?;
                out.push(ChartLine { kind, dashed, s, f, label });
            }
        }
        Ok(())
    };

    let mut data = Vec::new();
    for (&d, group) in &page.groups {
        if !spec.includes(d) {
            continue;
        }
        for (j, x) in group.summands.iter().enumerate() {
            if period.root((d, j)) != (d, j) {
                continue;
            }
            let arrow = period.recurs_twice(d, &x.lift)?;
            let color = match (x.order, arrow, x.part) {
                (0, false, _) => ColorClass::NonPeriodic,
                (_, _, Part::Cokernel) => ColorClass::Image,
                _ => ColorClass::Kernel,
            };
            let mut lines = Vec::new();
            if spec.products {
                for (symbol, kind) in [("h1", LineKind::H1), ("rho", LineKind::Rho)] {
                    let Ok(m) = power_of(object, symbol, 1) else { continue };
                    let e = d + object.base().degree_of(&m);
                    if !spec.includes(e) {
                        continue;
                    }
                    let value = times_monomial(ss, &x.lift, &m)?;
                    if let Class::Nonzero(v) = page_class(ss, r, e, &value)? {
                        lines_to(kind, e, &v, &mut lines)?;
                    }
                }
            }
            if spec.differentials {
                if let Some(col) = page.differential_of(d, j) {
                    let e = d + TriDegree::differential_shift(r);
                    if spec.includes(e) && col.iter().any(|k| !k.is_zero()) {
                        lines_to(LineKind::Differential(r), e, &col, &mut lines)?;
                    }
                }
            }
            if spec.hidden && spec.page.is_none() {
                for ext in ledger.map(|l| l.extensions.as_slice()).unwrap_or_default() {
                    let hx = &ext.extension;
                    if hx.source_degree != d || ext.source_class.iter().position(|k| !k.is_zero()) != Some(j) {
                        continue;
                    }
                    let Some(k) = ext.target_class.iter().position(|k| !k.is_zero()) else { continue };
                    let e = hx.target_degree;
                    if let Some((s, f, label)) = endpoint((e, k)) {
                        let dashed = is_tau_multiple(e, &ext.target_class, (e, k))?;
                        lines.push(ChartLine { kind: LineKind::Hidden(hx.kind), dashed, s, f, label });
                    }
                }
            }
            lines.sort();
            lines.dedup();
            data.push(ChartDatum {
                s: d.s,
                f: d.f,
                glyph: Glyph::for_order(x.order)?,
                color,
                label: x.label.clone(),
                arrow,
                lines,
            });
        }
    }
    data.sort_by_key(|a| (a.s, a.f));
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn glyphs_follow_orders() {
        assert_eq!(Glyph::for_order(2).unwrap(), Glyph::Circle);
        assert_eq!(Glyph::for_order(8).unwrap(), Glyph::NumberedBox(3));
        assert_eq!(Glyph::for_order(0).unwrap(), Glyph::OpenBox);
        assert!(Glyph::for_order(6).is_err());
        for g in [Glyph::Circle, Glyph::OpenBox, Glyph::NumberedBox(5)] {
            assert_eq!(g.to_string().parse::<Glyph>().unwrap(), g);
        }
    }

    #[test]
    fn spec_validation() {
        let spec = ChartSpec::new("L", None, (0, 4), 4, (0, 8));
        assert!(spec.clone().with_residue(3, 8).validate().is_ok());
        assert!(spec.clone().with_residue(3, 6).validate().is_err());
        assert!(spec.with_residue(8, 8).validate().is_err());
    }

    #[test]
    fn sidecar_round_trip() {
        let data = vec![
            ChartDatum {
                s: 3,
                f: 1,
                glyph: Glyph::NumberedBox(3),
                color: ColorClass::Image,
                label: "i2v1^2".into(),
                arrow: true,
                lines: vec![ChartLine {
                    kind: LineKind::Hidden(ExtensionKind::H),
                    dashed: true,
                    s: 3,
                    f: 3,
                    label: "tau.h1^3 + rho.h1".into(),
                }],
            },
            ChartDatum { s: 0, f: 0, glyph: Glyph::OpenBox, color: ColorClass::NonPeriodic, label: "1".into(), arrow: false, lines: vec![] },
        ];
        assert_eq!(parse_text(&to_text(&data)).unwrap(), data);
        assert!(parse_text("1\t2\tcircle\n").is_err());
    }
}
