//! Filtration assembly of a column `(s, w)` of `E_infinity`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ledger::{expand_ledger, ExpandedLedger, ExtensionKind, Ledger};
use super::{column_degrees, einf_class, times_monomial, Class};
use crate::algebra::Style;
use crate::cell::Chain;
use crate::degree::TriDegree;
use crate::error::{EngineError, Result};
use crate::fiber::v2;
use crate::linalg::{smith_normal_form, FgAbGroup, IntMatrix};
use crate::ss::SpectralSequence;

/// Whether the hidden extensions behind a group are stated for its coweight
/// or extrapolated from the periodic pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Certified,
    Extrapolated,
}

impl Provenance {
    /// Coweights `2^(n-1) - 1 mod 2^n` with `n >= 6` are extrapolated.
    pub fn for_coweight(c: i64) -> Provenance {
        if c >= 31 && (c + 1) % 32 == 0 {
            Provenance::Extrapolated
        } else {
            Provenance::Certified
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Certified => "certified",
            Provenance::Extrapolated => "extrapolated",
        })
    }
}

/// One `E_infinity` summand of the column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnGenerator {
    pub degree: TriDegree,
    pub label: String,
    pub order: u64,
    pub lift: Chain,
}

/// A class in some degree, as produced by a multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionValue {
    pub degree: TriDegree,
    pub class: Vec<BigInt>,
    pub chain: Chain,
    pub label: String,
    /// Whether the value comes from the ledger rather than the page product.
    pub hidden: bool,
}

/// `kind * generator`, or `None` when the product is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionRecord {
    pub kind: ExtensionKind,
    pub generator: usize,
    pub value: Option<ActionValue>,
}

/// `multiple * generator = value`, where `value` is the leading term of
/// `h y + rho (eta y)` for `y` the order-two multiple of the generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub generator: usize,
    pub multiple: u64,
    pub h_part: Option<ActionValue>,
    pub rho_eta_part: Option<ActionValue>,
    /// Coefficients on the generators of the column.
    pub value: Vec<(usize, BigInt)>,
}

/// The assembled group `pi_{s,w}` with its multiplicative data.
#[derive(Clone, Debug)]
pub struct HomotopyGroup {
    pub s: i64,
    pub w: i64,
    pub generators: Vec<ColumnGenerator>,
    pub relations: Vec<Relation>,
    pub group: FgAbGroup,
    pub actions: Vec<ActionRecord>,
    pub provenance: Provenance,
}

impl HomotopyGroup {
    pub fn invariants(&self) -> Vec<u64> {
        self.group.invariants()
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariants().len() <= 1
    }

    /// Checks `2 = rho eta + h` on every recorded relation: the recorded
    /// value is the leading term of the recorded `h` and `rho eta` parts.
    pub fn two_relation_holds(&self) -> bool {
        self.relations.iter().all(|r| {
            let expected = leading_sum(self, r.h_part.as_ref(), r.rho_eta_part.as_ref());
            expected == r.value
        })
    }

    pub fn describe(&self) -> String {
        let mut out = format!("pi_({},{}) = {}", self.s, self.w, self.group);
        if self.is_cyclic() && !self.generators.is_empty() {
            out.push_str(&format!(", generator {}", self.generators[0].label));
        }
        out.push_str(&format!(" [{}]", self.provenance));
        out
    }
}

impl fmt::Display for HomotopyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.describe())?;
        for (i, g) in self.generators.iter().enumerate() {
            writeln!(f, "  g{i} {} at {} order {}", g.label, g.degree, crate::linalg::format_order(g.order))?;
        }
        for r in &self.relations {
            let rhs: Vec<String> = r.value.iter().map(|(j, k)| format!("{k} g{j}")).collect();
            let rhs = if rhs.is_empty() { "0".to_string() } else { rhs.join(" + ") };
            writeln!(f, "  {} g{} = {rhs}", r.multiple, r.generator)?;
        }
        for a in &self.actions {
            let v = match &a.value {
                Some(v) => format!("{} at {}{}", v.label, v.degree, if v.hidden { " (hidden)" } else { "" }),
                None => "0".to_string(),
            };
            writeln!(f, "  {} * g{} = {v}", a.kind, a.generator)?;
        }
        Ok(())
    }
}

fn leading_sum(group: &HomotopyGroup, a: Option<&ActionValue>, b: Option<&ActionValue>) -> Vec<(usize, BigInt)> {
    let lead = match (a, b) {
        (None, None) => return Vec::new(),
        (Some(x), None) | (None, Some(x)) => (x.degree, x.class.clone()),
        (Some(x), Some(y)) if x.degree.f < y.degree.f => (x.degree, x.class.clone()),
        (Some(x), Some(y)) if y.degree.f < x.degree.f => (y.degree, y.class.clone()),
        (Some(x), Some(y)) => (x.degree, x.class.iter().zip(&y.class).map(|(p, q)| p + q).collect()),
    };
    coefficients(group, lead.0, &lead.1)
}

fn coefficients(group: &HomotopyGroup, d: TriDegree, class: &[BigInt]) -> Vec<(usize, BigInt)> {
    let idx: Vec<usize> = (0..group.generators.len()).filter(|&i| group.generators[i].degree == d).collect();
    idx.iter()
        .zip(class)
        .filter_map(|(&i, k)| {
            let o = group.generators[i].order;
            let k = if o == 0 { k.clone() } else { k.mod_floor(&BigInt::from(o)) };
            (!k.is_zero()).then_some((i, k))
        })
        .collect()
}

/// Reads homotopy groups off a computed spectral sequence and its ledger.
pub struct Assembler<'a> {
    ss: &'a SpectralSequence,
    ledger: ExpandedLedger,
}

impl<'a> Assembler<'a> {
    /// Expands `ledger` (if any) over the window of `ss`.
    pub fn new(ss: &'a SpectralSequence, ledger: Option<&Ledger>) -> Result<Self> {
        let ledger = match ledger {
            Some(l) => expand_ledger(&l.resolve(&ss.object)?, ss)?,
            None => ExpandedLedger::default(),
        };
        Ok(Assembler { ss, ledger })
    }

    /// Uses the shipped ledger of the object, if there is one.
    pub fn with_shipped_ledger(ss: &'a SpectralSequence) -> Result<Self> {
        let ledger = Ledger::shipped(ss.object.name())?;
        Self::new(ss, ledger.as_ref())
    }

    pub fn ledger(&self) -> &ExpandedLedger {
        &self.ledger
    }

    fn value(&self, d: TriDegree, chain: Chain, hidden: bool) -> Result<Option<ActionValue>> {
        match einf_class(self.ss, d, &chain)? {
            Class::Nonzero(class) => {
                let label = chain.format(self.ss.object.base(), Style::Ascii);
                Ok(Some(ActionValue { degree: d, class, chain, label, hidden }))
            }
            Class::Boundary => Ok(None),
            Class::NotPermanent | Class::NotInE1 => Err(EngineError::Consistency(format!(
                "the product {} at {d} is not a permanent cycle",
                chain.format(self.ss.object.base(), Style::Ascii)
            ))),
        }
    }

    /// `kind * x` for the class `class` of the chain `x` in degree `d`:
    /// the page product when it is nonzero, otherwise a ledger extension.
    pub fn act(&self, kind: ExtensionKind, d: TriDegree, x: &Chain, class: &[BigInt]) -> Result<Option<ActionValue>> {
        let object = &self.ss.object;
        // Over C there is no rho, so its page product vanishes.
        let detector = kind.detector().map(|name| object.base().gen(name).ok());
        let page = match detector {
            Some(None) => None,
            Some(Some(g)) => {
                let product = times_monomial(self.ss, x, &g)?;
                let (ds, dw) = kind.shift();
                if product.is_zero() {
                    None
                } else {
                    self.value(d + TriDegree::new(ds, 1, dw), product, false)?
                }
            }
            None => {
                let doubled = x.scaled(2);
                if doubled.is_zero() {
                    None
                } else {
                    self.value(d, doubled, false)?
                }
            }
        };
        let rows = self.ledger.lookup(kind, d, class);
        let (s, w) = (d.s, d.w);
        if page.is_some() {
            if let Some(row) = rows.first() {
                return Err(EngineError::CrossingExtension {
                    s,
                    w,
                    detail: format!(
                        "{} * {} is nonzero on the page but the ledger records a hidden extension to {}",
                        kind, row.extension.label, row.extension.target_label
                    ),
                });
            }
            return Ok(page);
        }
        match rows.as_slice() {
            [] => Ok(None),
            [row, rest @ ..] => {
                if rest.iter().any(|o| o.target_class != row.target_class || o.extension.target_degree != row.extension.target_degree) {
                    return Err(EngineError::CrossingExtension {
                        s,
                        w,
                        detail: format!("{} * {} has several recorded targets", kind, row.extension.label),
                    });
                }
                Ok(Some(ActionValue {
                    degree: row.extension.target_degree,
                    class: row.target_class.clone(),
                    chain: row.extension.target.clone(),
                    label: row.extension.target_label.clone(),
                    hidden: true,
                }))
            }
        }
    }

    /// Assembles `pi_{s,w}` from the column `(s, w)` of `E_infinity`.
    pub fn assemble(&self, s: i64, w: i64) -> Result<HomotopyGroup> {
        let page = self.ss.last();
        let mut generators = Vec::new();
        for d in column_degrees(self.ss, s, w)? {
            if let Some(g) = page.group(d) {
                for x in &g.summands {
                    generators.push(ColumnGenerator { degree: d, label: x.label.clone(), order: x.order, lift: x.lift.clone() });
                }
            }
        }
        let mut out = HomotopyGroup {
            s,
            w,
            generators,
            relations: Vec::new(),
            group: FgAbGroup::default(),
            actions: Vec::new(),
            provenance: Provenance::for_coweight(s - w),
        };
        for i in 0..out.generators.len() {
            let g = out.generators[i].clone();
            let class = self.unit_class(&out, i);
            for kind in ExtensionKind::ALL {
                let value = self.act(kind, g.degree, &g.lift, &class)?;
                out.actions.push(ActionRecord { kind, generator: i, value });
            }
            if g.order == 0 {
                continue;
            }
            let half = i64::try_from(g.order / 2).map_err(|_| EngineError::Overflow("halving an order"))?;
            let y = g.lift.scaled(half);
            let mut y_class = class.clone();
            let k = out.generators.iter().take(i).filter(|x| x.degree == g.degree).count();
            y_class[k] = BigInt::from(half);
            let h_part = self.act(ExtensionKind::H, g.degree, &y, &y_class)?;
            let eta = self.act(ExtensionKind::Eta, g.degree, &y, &y_class)?;
            let rho_eta_part = match &eta {
                Some(v) => self.act(ExtensionKind::Rho, v.degree, &v.chain, &v.class)?,
                None => None,
            };
            for part in [&h_part, &rho_eta_part].into_iter().flatten() {
                if (part.degree.s, part.degree.w) != (s, w) || part.degree.f <= g.degree.f {
                    return Err(EngineError::Consistency(format!(
                        "2-extension of {} lands at {}, outside the column above it",
                        g.label, part.degree
                    )));
                }
            }
            let value = leading_sum(&out, h_part.as_ref(), rho_eta_part.as_ref());
            out.relations.push(Relation { generator: i, multiple: g.order, h_part, rho_eta_part, value });
        }
        out.group = presented_group(&out)?;
        Ok(out)
    }

    fn unit_class(&self, group: &HomotopyGroup, i: usize) -> Vec<BigInt> {
        let d = group.generators[i].degree;
        let n = group.generators.iter().filter(|x| x.degree == d).count();
        let k = group.generators.iter().take(i).filter(|x| x.degree == d).count();
        let mut v = vec![BigInt::zero(); n];
        v[k] = BigInt::one();
        v
    }
}

/// Invariant factors of the group generated by the column with the
/// recorded relations.
fn presented_group(group: &HomotopyGroup) -> Result<FgAbGroup> {
    let n = group.generators.len();
    if n == 0 {
        return Ok(FgAbGroup::default());
    }
    let rows: Vec<Vec<BigInt>> = group
        .relations
        .iter()
        .map(|r| {
            let mut row = vec![BigInt::zero(); n];
            row[r.generator] += BigInt::from(r.multiple);
            for (j, k) in &r.value {
                row[*j] -= k;
            }
            row
        })
        .collect();
    let mut invariants: Vec<u64> = Vec::new();
    let mut rank = 0;
    if !rows.is_empty() {
        let snf = smith_normal_form(&IntMatrix::from_rows(&rows));
        for x in snf.invariants() {
            rank += 1;
            let x = x.abs();
            if !x.is_one() {
                invariants.push(x.to_u64().ok_or(EngineError::Overflow("reading an invariant factor"))?);
            }
        }
    }
    invariants.extend(std::iter::repeat_n(0, n - rank));
    let cyclic = invariants.len() == 1;
    Ok(FgAbGroup::new(
        invariants
            .into_iter()
            .map(|o| (if cyclic { group.generators[0].label.clone() } else { String::new() }, o))
            .collect(),
    ))
}

/// One stem of an order-pattern report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderPatternRow {
    pub stem: i64,
    /// Stems `s >= 0` with `s` not `3 mod 4`.
    pub generic: bool,
    pub invariants: Vec<u64>,
    pub matches: bool,
}

/// Assembled orders along coweight `4j - 1` against `2^(v(j) + 3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderPatternReport {
    pub coweight: i64,
    pub expected: u64,
    pub rows: Vec<OrderPatternRow>,
}

impl OrderPatternReport {
    /// Every generic stem is cyclic of the expected order.
    pub fn passed(&self) -> bool {
        self.rows.iter().filter(|r| r.generic).all(|r| r.matches)
    }

    /// Exceptional stems `4i - 1` whose group differs from the generic one.
    pub fn exceptional(&self) -> Vec<&OrderPatternRow> {
        self.rows.iter().filter(|r| !r.generic && !r.matches).collect()
    }
}

/// Assembles every stem in `stems` of coweight `coweight = 4j - 1` and
/// compares with the cyclic order `2^(v(j) + 3)`.
pub fn order_pattern_check(assembler: &Assembler<'_>, coweight: i64, stems: (i64, i64)) -> Result<OrderPatternReport> {
    if coweight < 3 || (coweight + 1) % 4 != 0 {
        return Err(EngineError::Usage(format!("coweight {coweight} is not of the form 4j - 1")));
    }
    let j = (coweight + 1) / 4;
    let expected = 1u64 << (v2(j)? + 3);
    let mut rows = Vec::new();
    for stem in stems.0..=stems.1 {
        let g = assembler.assemble(stem, stem - coweight)?;
        let invariants = g.invariants();
        rows.push(OrderPatternRow {
            stem,
            generic: stem >= 0 && stem.rem_euclid(4) != 3,
            matches: invariants == [expected],
            invariants,
        });
    }
    Ok(OrderPatternReport { coweight, expected, rows })
}
