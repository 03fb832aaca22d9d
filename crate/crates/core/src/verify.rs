//! The acceptance suite: twelve numbered checks, each comparing the engine
//! with an independent computation.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{Element, Monomial, Presentation, Style};
use crate::cell::{Cell, Chain, Part};
use crate::chart::{chart_data, to_text, ChartSpec};
use crate::degree::TriDegree;
use crate::error::{EngineError, Result};
use crate::eta::{compare, comparison_targets};
use crate::fiber::val_3n_minus_1;
use crate::homotopy::{
    chain_degree, class_order, einf_class, order_pattern_check, parse_label, Assembler, Class, ExtensionKind,
    Ledger,
};
use crate::objects::{Catalog, SpectralObject};
use crate::ss::{RulePattern, SpectralSequence, Window};

/// Outcome of one criterion.
#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub number: u8,
    pub suite: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl std::fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "criterion {:>2} [{}] {}: {} ({:.2} s)",
            self.number,
            self.suite,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

type Check = fn() -> Result<String>;

/// Suite names in criterion order.
pub const SUITES: [(&str, Check); 12] = [
    ("valuation", valuation),
    ("e1", e1_pages),
    ("leibniz", leibniz),
    ("ko-c", ko_c_einfty),
    ("ko", ko_einfty),
    ("les", les),
    ("l-differentials", l_differentials),
    ("l-structure", l_structure),
    ("eta", eta_commutation),
    ("ledger", ledger),
    ("classical", classical),
    ("charts", charts),
];

/// Wall-clock limits for the criteria that state one.
fn time_limit(number: u8) -> Option<Duration> {
    match number {
        1 => Some(Duration::from_secs(10)),
        2 => Some(Duration::from_secs(5)),
        6 => Some(Duration::from_secs(30)),
        _ => None,
    }
}

fn fail(msg: impl Into<String>) -> EngineError {
    EngineError::Mismatch(msg.into())
}

pub fn suite_names() -> impl Iterator<Item = &'static str> {
    SUITES.iter().map(|(n, _)| *n)
}

/// Runs one criterion by suite name or number.
pub fn run_suite(name: &str) -> Result<CriterionReport> {
    let index = SUITES
        .iter()
        .position(|(n, _)| *n == name)
        .or_else(|| name.parse::<usize>().ok().filter(|n| (1..=SUITES.len()).contains(n)).map(|n| n - 1))
        .ok_or_else(|| EngineError::Usage(format!("unknown suite {name:?}")))?;
    Ok(run_index(index))
}

fn run_index(index: usize) -> CriterionReport {
    let (suite, check) = SUITES[index];
    let number = index as u8 + 1;
    let start = Instant::now();
    let outcome = check();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match outcome {
        Ok(d) => (true, d),
        Err(e) => (false, e.to_string()),
    };
    if let Some(limit) = time_limit(number) {
        if elapsed > limit {
            passed = false;
            detail = format!("{detail}; exceeded the {} s limit", limit.as_secs());
        }
    }
    CriterionReport { number, suite, passed, detail, elapsed }
}

/// Runs every criterion in order.
pub fn run_all() -> Vec<CriterionReport> {
    (0..SUITES.len()).map(run_index).collect()
}

fn object(name: &str) -> Result<SpectralObject> {
    Catalog::global().object(name)
}

fn presentation(name: &str) -> Result<std::sync::Arc<Presentation>> {
    Catalog::global().presentation(name)
}

fn two_adic(n: &BigInt) -> u64 {
    n.trailing_zeros().unwrap_or(0)
}

fn valuation() -> Result<String> {
    let mut power = BigInt::one();
    for n in 1..=(1i64 << 16) {
        power *= 3;
        let brute = two_adic(&(&power - 1u32));
        let closed = val_3n_minus_1(n)?;
        if u64::from(closed) != brute {
            return Err(fail(format!("v2(3^{n} - 1): closed form {closed}, brute force {brute}")));
        }
    }
    Ok("v2(3^n - 1) agrees with brute force for 1 <= n <= 65536".into())
}

/// Monomials of the E1 page enumerated from the closed form, by degree.
type Enumeration = BTreeMap<TriDegree, Vec<(Monomial, u64)>>;

fn insert(p: &Presentation, out: &mut Enumeration, exps: &[(&str, u32)], order: u64) -> Result<()> {
    let map: BTreeMap<String, u32> = exps.iter().filter(|(_, e)| *e > 0).map(|(n, e)| (n.to_string(), *e)).collect();
    let d = p.degree_of_named(&map)?;
    out.entry(d).or_default().push((p.monomial_from_map(&map)?, order));
    Ok(())
}

struct Box3 {
    stems: (i64, i64),
    fmax: i64,
    weights: (i64, i64),
}

impl Box3 {
    fn contains(&self, d: TriDegree) -> bool {
        (self.stems.0..=self.stems.1).contains(&d.s) && (0..=self.fmax).contains(&d.f) && (self.weights.0..=self.weights.1).contains(&d.w)
    }

    fn degrees(&self) -> impl Iterator<Item = TriDegree> + '_ {
        (self.stems.0..=self.stems.1).flat_map(move |s| {
            (0..=self.fmax).flat_map(move |f| (self.weights.0..=self.weights.1).map(move |w| TriDegree::new(s, f, w)))
        })
    }
}

/// `Z[tau, h1, v1^2] / 2h1`: one monomial `tau^a h1^b v1^{2c}` per degree.
fn ko_c_e1_oracle(p: &Presentation, range: &Box3) -> Result<Enumeration> {
    let mut out = Enumeration::new();
    for b in 0..=range.fmax {
        for c in 0.. {
            let s = b + 4 * c;
            if s > range.stems.1 {
                break;
            }
            for a in 0.. {
                let w = -a + b + 2 * c;
                if w < range.weights.0 {
                    break;
                }
                if range.contains(TriDegree::new(s, b, w)) {
                    let order = if b == 0 { 0 } else { 2 };
                    insert(p, &mut out, &[("tau", a as u32), ("h1", b as u32), ("v1_2", c as u32)], order)?;
                }
            }
        }
    }
    Ok(out)
}

/// `Z[rho, tau^2, h1, tau h1, v1^2]` modulo `2rho, 2h1, 2 tau h1` and the
/// rewriting of `(tau h1)^2`, so `tau h1` appears at most once.
fn ko_e1_oracle(p: &Presentation, range: &Box3) -> Result<Enumeration> {
    let mut out = Enumeration::new();
    for a in 0..=range.fmax {
        for c in 0..=range.fmax - a {
            for e in 0..=1.min(range.fmax - a - c) {
                for g in 0.. {
                    let s = -a + c + e + 4 * g;
                    if s > range.stems.1 {
                        break;
                    }
                    for b in 0.. {
                        let w = -a - 2 * b + c + 2 * g;
                        if w < range.weights.0 {
                            break;
                        }
                        if range.contains(TriDegree::new(s, a + c + e, w)) {
                            let order = if a + c + e == 0 { 0 } else { 2 };
                            let exps = [("rho", a), ("tau2", b), ("h1", c), ("tauh1", e), ("v1_2", g)];
                            insert(p, &mut out, &exps.map(|(n, x)| (n, x as u32)), order)?;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn e1_pages() -> Result<String> {
    let range = Box3 { stems: (-4, 40), fmax: 20, weights: (-20, 24) };
    let mut checked = 0;
    for name in ["ko_C", "ko"] {
        let p = presentation(name)?;
        let oracle = if name == "ko" { ko_e1_oracle(&p, &range)? } else { ko_c_e1_oracle(&p, &range)? };
        for d in range.degrees() {
            let piece = p.basis_at(d);
            let mut engine: Vec<(Monomial, u64)> = piece.monomials.into_iter().zip(piece.orders).collect();
            let mut expected = oracle.get(&d).cloned().unwrap_or_default();
            engine.sort();
            expected.sort();
            if engine != expected {
                return Err(fail(format!(
                    "E1({name}) at {d}: engine has {} summands, the closed form {}",
                    engine.len(),
                    expected.len()
                )));
            }
            checked += 1;
        }
    }
    Ok(format!("E1(ko_C) and E1(ko) match the closed forms on {checked} tri-degrees"))
}

/// Reduces coefficients modulo the additive order of each monomial.
fn reduced(p: &Presentation, e: &Element) -> Result<Element> {
    let e = p.normal_form(e)?;
    Ok(e
        .terms()
        .filter_map(|(m, k)| {
            let o = p.torsion_of(m) as i64;
            let k = if o == 0 { k } else { k.rem_euclid(o) };
            (k != 0).then(|| (m.clone(), k))
        })
        .collect())
}

fn leibniz() -> Result<String> {
    let p = presentation("ko")?;
    let source = p.parse_monomial("tau^2.tauh1.v1^2")?;
    let value = reduced(&p, &p.leibniz(1, &source)?)?;
    let expected = reduced(&p, &p.parse_element("tau^4.h1^4 + rho^4.v1^4")?)?;
    if value != expected {
        return Err(fail(format!(
            "d1(tau^2.tauh1.v1^2) = {}, expected tau^4.h1^4 + rho^4.v1^4",
            p.format_element(&value, Style::Ascii)
        )));
    }
    let mut squares = 0;
    for name in ["ko_C", "ko"] {
        let p = presentation(name)?;
        let range = Box3 { stems: (-4, 24), fmax: 10, weights: (-12, 14) };
        for d in range.degrees() {
            for m in p.basis_at(d).monomials {
                let once = reduced(&p, &p.leibniz(1, &m)?)?;
                let twice = reduced(&p, &p.leibniz_element(1, &once)?)?;
                if !twice.is_zero() {
                    return Err(fail(format!("d1 d1 of {} in {name} is nonzero", p.format_monomial(&m, Style::Ascii))));
                }
                squares += 1;
            }
        }
    }
    let l = object("L")?;
    for d in (Box3 { stems: (-4, 24), fmax: 8, weights: (-12, 14) }).degrees() {
        for (c, _) in l.cells_at(d)?.iter() {
            let once = l.d1(c)?;
            let mut twice = Chain::zero();
            for (x, k) in once.terms() {
                twice.add(&l.d1(x)?.scaled(k));
            }
            let twice = twice.reduce(|x| l.cells_at(l.degree(x)).ok().and_then(|cs| cs.iter().find(|(y, _)| y == x).map(|(_, o)| *o)).unwrap_or(0));
            if !twice.is_zero() {
                return Err(fail(format!("d1 d1 of {} in L is nonzero", c.format(l.base(), Style::Ascii))));
            }
            squares += 1;
        }
    }
    Ok(format!("d1(tau^2.tauh1.v1^2) = tau^4.h1^4 + rho^4.v1^4; d1 squares to zero on {squares} cells"))
}

fn ko_c_einfty() -> Result<String> {
    let obj = object("ko_C")?;
    let p = obj.base().clone();
    let window = Window::new((0, 24), (0, 24)).with_coweights(0, 24);
    let ss = SpectralSequence::run(obj, window, None)?;
    let page = ss.infinity()?;
    // Z[tau, h1, 2v1^2, v1^4] / (2h1, tau h1^3, (2v1^2)^2 = 4 v1^4): basis
    // tau^a h1^b v1^{4c} (2v1^2)^e with e <= 1, e = 0 when b > 0, a = 0 when b >= 3.
    let mut expected: BTreeMap<TriDegree, Vec<(String, u64)>> = BTreeMap::new();
    for b in 0..=24u32 {
        for c in 0..=3u32 {
            for e in 0..=1u32 {
                if e == 1 && b > 0 {
                    continue;
                }
                for a in 0..=24u32 {
                    if a > 0 && b >= 3 {
                        break;
                    }
                    let map: BTreeMap<String, u32> = [("tau", a), ("h1", b), ("v1_2", 2 * c + e)]
                        .into_iter()
                        .filter(|(_, x)| *x > 0)
                        .map(|(n, x)| (n.to_string(), x))
                        .collect();
                    let d = p.degree_of_named(&map)?;
                    if !window.contains(d) {
                        continue;
                    }
                    let mono = p.format_monomial(&p.monomial_from_map(&map)?, Style::Ascii);
                    let label = if e == 1 { format!("2{mono}") } else { mono };
                    expected.entry(d).or_default().push((label, if b == 0 { 0 } else { 2 }));
                }
            }
        }
    }
    let mut count = 0;
    for &d in &ss.targets {
        let mut engine: Vec<(String, u64)> = page
            .group(d)
            .map(|g| g.summands.iter().map(|s| (s.label.clone(), s.order)).collect())
            .unwrap_or_default();
        let mut want = expected.remove(&d).unwrap_or_default();
        engine.sort();
        want.sort();
        if engine != want {
            return Err(fail(format!("E_infinity(ko_C) at {d}: engine {engine:?}, closed form {want:?}")));
        }
        count += engine.len();
    }
    if let Some((d, v)) = expected.into_iter().next() {
        return Err(fail(format!("closed form has {v:?} at {d}, outside the computed degrees")));
    }
    for (label, d) in [("2v1^2", TriDegree::new(4, 0, 2)), ("v1^4", TriDegree::new(8, 0, 4))] {
        let g = page.group(d).ok_or_else(|| fail(format!("no group at {d}")))?;
        if g.summands.len() != 1 || g.summands[0].label != label || g.summands[0].order != 0 {
            return Err(fail(format!("generator at {d} is not a free summand labelled {label}")));
        }
    }
    Ok(format!("{count} summands over stems 0..24 match the closed form, with generators 2v1^2 and v1^4"))
}

fn ko_einfty() -> Result<String> {
    let obj = object("ko")?;
    let window = Window::new((-4, 40), (0, 24)).with_coweights(0, 40);
    let ss = SpectralSequence::run(obj.clone(), window, None)?;
    let last = ss.infinity()?;
    let e2 = ss.page(2).ok_or_else(|| fail("E2 was not computed"))?;
    for &d in &ss.targets {
        let a = e2.group(d).map(|g| g.orders()).unwrap_or_default();
        let b = last.group(d).map(|g| g.orders()).unwrap_or_default();
        if a != b {
            return Err(fail(format!("E2(ko) and E_infinity(ko) differ at {d}")));
        }
        if d.coweight().rem_euclid(4) == 3 && !b.is_empty() {
            return Err(fail(format!("E_infinity(ko) is nonzero at {d}, coweight {}", d.coweight())));
        }
    }
    let d = TriDegree::new(4, 4, 0);
    let left = einf_class(&ss, d, &parse_label(&obj, "tau^4.h1^4")?)?;
    let right = einf_class(&ss, d, &parse_label(&obj, "rho^4.v1^4")?)?;
    if !matches!(left, Class::Nonzero(_)) || left != right {
        return Err(fail(format!("tau^4.h1^4 is {} and rho^4.v1^4 is {}", left.describe(), right.describe())));
    }
    let zero_degrees = ss.targets.iter().filter(|d| d.coweight().rem_euclid(4) == 3).count();
    Ok(format!(
        "E2 = E_infinity on {} degrees; tau^4.h1^4 = rho^4.v1^4; zero in {zero_degrees} degrees of coweight 3 mod 4",
        ss.targets.len()
    ))
}

/// Kernel and cokernel of `psi3 - 1` from the closed form: `psi3` scales a
/// monomial with `v1^{2g}` by `9^g`.
fn les_oracle(p: &Presentation, e1: &Enumeration, d: TriDegree, shift: TriDegree) -> Vec<u64> {
    let mut out = Vec::new();
    for (m, order) in e1.get(&d).into_iter().flatten() {
        let g = m.exponent(p.index_of("v1_2").expect("v1_2"));
        if *order != 0 || g == 0 {
            out.push(*order);
        }
    }
    for (m, order) in e1.get(&(d - shift)).into_iter().flatten() {
        let g = m.exponent(p.index_of("v1_2").expect("v1_2"));
        match (*order, g) {
            (0, 0) => out.push(0),
            (0, g) => out.push(1u64 << two_adic(&(BigInt::from(9).pow(g) - 1u32))),
            (o, _) => out.push(o),
        }
    }
    out.sort();
    out
}

fn les() -> Result<String> {
    let range = Box3 { stems: (-4, 40), fmax: 20, weights: (-20, 24) };
    let wide = Box3 { stems: (-4, 41), fmax: 20, weights: (-20, 24) };
    let mut checked = 0;
    for (fiber, base) in [("L", "ko"), ("L_C", "ko_C")] {
        let obj = object(fiber)?;
        let model = obj.fiber_model().ok_or_else(|| fail(format!("{fiber} is not a fiber")))?.clone();
        let p = presentation(base)?;
        let e1 = if base == "ko" { ko_e1_oracle(&p, &wide)? } else { ko_c_e1_oracle(&p, &wide)? };
        let shift = model.iota_shift();
        for d in range.degrees() {
            let mut engine: Vec<u64> = obj.cells_at(d)?.iter().map(|(_, o)| *o).collect();
            engine.sort();
            let expected = les_oracle(&p, &e1, d, shift);
            if engine != expected {
                return Err(fail(format!("E1({fiber}) at {d}: orders {engine:?}, kernel and cokernel give {expected:?}")));
            }
            checked += 1;
        }
        let families = model.generators(20)?;
        for g in &families {
            let k = i64::from(g.k);
            let (degree, order) = match g.family.as_str() {
                "tau2" => (TriDegree::new(0, 0, -2), 0),
                "tauh1_v1" => (TriDegree::new(4 * k + 1, 1, 2 * k), 2),
                "rho_v1" if k > 0 => (TriDegree::new(4 * k - 1, 1, 2 * k - 1), 2),
                "h1_v1" => (TriDegree::new(4 * k + 1, 1, 2 * k + 1), 2),
                "iota_v1" if k > 0 => (TriDegree::new(4 * k - 1, 1, 2 * k), 1u64 << (two_adic(&BigInt::from(2 * k)) + 2)),
                "iota_v1" => (TriDegree::new(-1, 1, 0), 0),
                _ => continue,
            };
            if fiber == "L" && (g.degree != degree || g.order != order) {
                return Err(fail(format!(
                    "generator {} sits at {} with order {}, expected {degree} with order {order}",
                    g.name, g.degree, g.order
                )));
            }
            if g.family == "iota_v1" && g.order != order {
                return Err(fail(format!("{} in {fiber} has order {}, expected {order}", g.name, g.order)));
            }
        }
    }
    Ok(format!("order identity holds on {checked} tri-degrees of L and L_C; generator families match"))
}

fn power_label(p: i64) -> String {
    match p {
        0 => String::new(),
        p => format!(".v1^{p}"),
    }
}

/// Rows of the d1 table for `L`, as `(source, value)` labels for family index `k`.
fn d1_table_rows(k: i64) -> Vec<(String, String)> {
    let v = |e: i64| power_label(e);
    let iv = |e: i64| if e == 0 { "i1".to_string() } else { format!("iv1^{e}") };
    let mut rows = vec![
        (format!("rho{}", v(4 * k)), String::new()),
        (format!("rho{}", v(4 * k + 2)), format!("rho.h1^2.tauh1{}", v(4 * k))),
        (format!("h1{}", v(4 * k)), String::new()),
        (format!("h1{}", v(4 * k + 2)), format!("h1^3.tauh1{}", v(4 * k))),
        (format!("tauh1{}", v(4 * k + 2)), format!("tau^2.h1^3.h1{} + rho^2.h1.h1{}", v(4 * k), v(4 * k + 2))),
        (format!("tauh1{}", v(4 * k)), String::new()),
        (iv(4 * k + 2), format!("itauh1.h1^2{}", v(4 * k))),
        (iv(4 * k), String::new()),
    ];
    if k == 0 {
        rows.push(("tau^2".into(), "rho^2.tauh1".into()));
        rows.retain(|(s, _)| s != "rho");
    }
    rows
}

fn l_differentials() -> Result<String> {
    let obj = object("L")?;
    let mut rows = 0;
    for k in 0..=6 {
        for (source, value) in d1_table_rows(k) {
            let chain = parse_label(&obj, &source)?;
            if chain_degree(&obj, &chain)?.s > 48 {
                continue;
            }
            let (cell, _) = chain.leading().ok_or_else(|| fail(format!("{source} is zero in E1(L)")))?;
            let d1 = obj.d1(cell)?;
            let expected = if value.is_empty() { Chain::zero() } else { parse_label(&obj, &value)? };
            if d1 != expected {
                return Err(fail(format!(
                    "d1({source}) = {}, table gives {}",
                    d1.format(obj.base(), Style::Ascii),
                    if value.is_empty() { "0" } else { &value }
                )));
            }
            rows += 1;
        }
    }
    let rule = obj.rule().cloned().ok_or_else(|| fail("L has no rule pattern"))?;
    let targets: Vec<TriDegree> = Window::new((-2, 48), (0, 16))
        .with_coweights(4, 48)
        .degrees()?
        .into_iter()
        .filter(|d| d.coweight() % 4 == 0)
        .collect();
    let ss = SpectralSequence::run_on(obj.clone(), targets, None, None)?;
    let (eligible, assigned) = rule_coverage(&ss, &rule)?;
    if eligible != assigned {
        return Err(fail(format!("{eligible} classes should support a rule differential, {assigned} were assigned")));
    }
    Ok(format!("{rows} d1 table rows reproduced; {assigned} rule differentials assigned with no ambiguity"))
}

/// Counts the non-excluded kernel-part summands on eligible pages and the
/// differentials the rule assigned to them.
fn rule_coverage(ss: &SpectralSequence, rule: &RulePattern) -> Result<(usize, usize)> {
    let base = ss.object.base();
    let (mut eligible, mut assigned) = (0, 0);
    for page in ss.pages.iter().skip(1) {
        let r = page.r;
        let sources: BTreeSet<(TriDegree, usize)> = page.assignments.iter().map(|a| (a.source, a.source_index)).collect();
        assigned += sources.len();
        for d in page.differentials.keys() {
            if !RulePattern::eligible(r, d.coweight()) {
                continue;
            }
            let group = page.group(*d).expect("source group");
            let targets = page.group(*d + TriDegree::differential_shift(r)).map_or(0, |g| g.summands.len());
            if targets == 0 {
                continue;
            }
            for (j, s) in group.summands.iter().enumerate() {
                if s.part == Part::Kernel && !rule.is_excluded(&s.lift, base) {
                    eligible += 1;
                    if !sources.contains(&(*d, j)) {
                        return Err(fail(format!("{} at {d} has no d{r}", s.label)));
                    }
                }
            }
        }
    }
    Ok((eligible, assigned))
}

fn l_structure() -> Result<String> {
    let obj = object("L")?;
    let targets: Vec<TriDegree> = Window::new((-2, 40), (0, 24))
        .with_coweights(1, 42)
        .degrees()?
        .into_iter()
        .filter(|d| matches!(d.coweight().rem_euclid(4), 1 | 2))
        .collect();
    let ss = SpectralSequence::run_on(obj.clone(), targets, None, None)?;
    let e2 = ss.page(2).ok_or_else(|| fail("E2(L) was not computed"))?;
    let last = ss.infinity()?;
    for &d in &ss.targets {
        let a = e2.group(d).map(|g| g.orders()).unwrap_or_default();
        let b = last.group(d).map(|g| g.orders()).unwrap_or_default();
        if a != b {
            return Err(fail(format!("E2(L) and E_infinity(L) differ at {d}: {a:?} vs {b:?}")));
        }
    }
    let mut stems = 0;
    for j in [1i64, 2, 3, 4, 6, 8] {
        let cw = 4 * j - 1;
        let window = Window::new((-3, 41), (0, 40)).with_coweights(cw, cw);
        let ss = SpectralSequence::run(obj.clone(), window, None)?;
        let assembler = Assembler::with_shipped_ledger(&ss)?;
        let report = order_pattern_check(&assembler, cw, (-2, 40))?;
        let expected = 1u64 << (two_adic(&BigInt::from(j)) + 3);
        if report.expected != expected {
            return Err(fail(format!("coweight {cw}: pattern order {} but 2^(v(j)+3) = {expected}", report.expected)));
        }
        if let Some(row) = report.rows.iter().find(|r| r.generic && !r.matches) {
            return Err(fail(format!(
                "coweight {cw}, stem {}: assembled {:?}, expected Z/{expected}",
                row.stem, row.invariants
            )));
        }
        stems += report.rows.iter().filter(|r| r.generic).count();
    }
    Ok(format!(
        "E2 = E_infinity on {} degrees of coweight 1, 2 mod 4; {stems} generic stems have order 2^(v(j)+3)",
        ss.targets.len()
    ))
}

fn eta_commutation() -> Result<String> {
    let obj = object("L")?;
    let window = Window::new((-2, 48), (0, 24)).with_coweights(0, 48);
    let ss = SpectralSequence::run(obj.clone(), window, Some(6))?;
    let eta_name = obj.eta_target().ok_or_else(|| fail("L has no eta-periodic counterpart"))?.to_string();
    let eta_obj = object(&eta_name)?;
    let eta = SpectralSequence::run_on(eta_obj.clone(), comparison_targets(&ss, 6), None, Some(6))?;
    let report = compare(&ss, &eta, 6)?;
    if !report.passed() {
        return Err(fail(format!("{} mismatches, first: {}", report.mismatches.len(), report.mismatches[0])));
    }
    let families = eta_family(&eta_obj)?;
    Ok(format!(
        "{} summands on pages <= {} commute with localization ({} nontrivial); {families}",
        report.checked + report.skipped,
        report.pages,
        report.nontrivial
    ))
}

/// Checks `d_{n+1}(v1^{2^n}) = rho^{n+1} iota v1^{2^n}` in the eta-periodic
/// fiber for `2 <= n <= 5`.
fn eta_family(eta_obj: &SpectralObject) -> Result<String> {
    let base = eta_obj.base().clone();
    let chain = |text: &str| -> Result<Chain> {
        Ok(base.parse_element(text)?.terms().map(|(m, k)| (Cell::plain(m.clone()), k)).collect())
    };
    let mut targets = Vec::new();
    let mut cases = Vec::new();
    for n in 2..=5u32 {
        let power = 1i64 << n;
        let source = chain(&format!("v1^{power}"))?;
        let value = chain(&format!("rho^{}.iota.v1^{power}", n + 1))?;
        let d = chain_degree(eta_obj, &source)?;
        let e = chain_degree(eta_obj, &value)?;
        if e != d + TriDegree::differential_shift(n + 1) {
            return Err(fail(format!("rho^{}.iota.v1^{power} is not in the degree of d{} of v1^{power}", n + 1, n + 1)));
        }
        targets.extend([d, e]);
        cases.push((n, d, e, source, value));
    }
    let ss = SpectralSequence::run_on(eta_obj.clone(), targets, None, None)?;
    for (n, d, e, source, value) in cases {
        let r = n + 1;
        let x = ss.class_coordinates(r, d, &source)?;
        let map = ss
            .page(r)
            .and_then(|p| p.differentials.get(&d))
            .ok_or_else(|| fail(format!("no d{r} out of v1^{}", 1 << n)))?;
        let image = map.matrix.mul_vec(&x);
        let want = ss.class_coordinates(r, e, &value)?;
        let orders = ss.group(r, e).map(|g| g.orders()).unwrap_or_default();
        let same = image.iter().zip(&want).zip(&orders).all(|((a, b), &o)| {
            let diff = a - b;
            if o == 0 {
                diff.is_zero()
            } else {
                (diff % BigInt::from(o)).is_zero()
            }
        });
        if !same || want.iter().all(Zero::is_zero) {
            return Err(fail(format!("d{r}(v1^{}) is not rho^{r}.iota.v1^{}", 1 << n, 1 << n)));
        }
    }
    Ok("d_{n+1}(v1^{2^n}) = rho^{n+1}.iota.v1^{2^n} for 2 <= n <= 5".into())
}

fn ledger() -> Result<String> {
    let mut rows = 0;
    for name in ["ko", "L", "L_C"] {
        let ledger = Ledger::shipped(name)?.ok_or_else(|| fail(format!("no ledger for {name}")))?;
        let obj = object(name)?;
        for ext in ledger.resolve(&obj)? {
            ext.check_degrees()?;
            rows += 1;
        }
        let reparsed = Ledger::parse(name, &ledger.to_text())?;
        if reparsed.rows != ledger.rows {
            return Err(fail(format!("the {name} ledger does not survive a round trip")));
        }
    }
    let ko = Ledger::shipped("ko")?.expect("checked above");
    let wanted = ("2v1^2", ExtensionKind::Rho, "tauh1^2.h1", TriDegree::new(3, 3, 1));
    if !ko.rows.iter().any(|r| (r.source.as_str(), r.kind, r.target.as_str(), r.degree) == wanted) {
        return Err(fail("the ko ledger lacks the rho extension from 2v1^2 at (3,3,1)"));
    }

    let obj = object("L")?;
    let window = Window::new((-2, 33), (0, 24)).with_coweights(-1, 16);
    let ss = SpectralSequence::run(obj.clone(), window, None)?;
    let assembler = Assembler::with_shipped_ledger(&ss)?;
    let expanded = assembler.ledger();
    for r in &expanded.extensions {
        let x = &r.extension;
        for (what, d, chain) in [("source", x.source_degree, &x.source), ("target", x.target_degree, &x.target)] {
            if !matches!(einf_class(&ss, d, chain)?, Class::Nonzero(_)) {
                return Err(fail(format!("{what} of {} at {d} is not a nonzero E_infinity class", x.label)));
            }
        }
    }
    let two_tau: Vec<_> = expanded.excluded.iter().filter(|e| e.row == "2tau^2").collect();
    if two_tau.is_empty() || two_tau.iter().any(|e| e.multiple.1 == 0) {
        return Err(fail("the 2tau^2 row should lose exactly its v1^4 translates"));
    }
    if !expanded.extensions.iter().any(|r| r.extension.label == "2tau^2" && r.extension.multiple == (0, 0)) {
        return Err(fail("the 2tau^2 extension itself did not resolve"));
    }
    let sixteen = expanded
        .extensions
        .iter()
        .find(|r| r.extension.kind == ExtensionKind::H && r.extension.multiple == (0, 1) && r.extension.periodicity.order_two_multiple)
        .ok_or_else(|| fail("no v1^8 translate of the 8tau^2 extension"))?;
    let source = parse_label(&obj, "i16tau^2.v1^8")?;
    let target = parse_label(&obj, "rho^2.tauh1.v1^8")?;
    if sixteen.extension.source != source
        || einf_class(&ss, sixteen.extension.target_degree, &target)? != Class::Nonzero(sixteen.target_class.clone())
    {
        return Err(fail(format!(
            "the v1^8 translate runs from {} to {}",
            sixteen.extension.label, sixteen.extension.target_label
        )));
    }
    let top = expanded
        .extensions
        .iter()
        .find(|r| r.extension.periodicity.highest_filtration && r.extension.multiple == (1, 0))
        .ok_or_else(|| fail("no tau^4 translate of the (tauh1)^3 extension"))?;
    let d = TriDegree::new(3, 11, -4);
    let want = einf_class(&ss, d, &parse_label(&obj, "i.tau^8.rho^3.h1^7")?)?;
    if top.extension.target_degree != d || want != Class::Nonzero(top.target_class.clone()) {
        return Err(fail(format!("the tau^4 translate of (tauh1)^3 hits {}", top.extension.target_label)));
    }
    Ok(format!(
        "{rows} rows load with consistent degrees; {} expanded extensions have E_infinity endpoints, {} translates excluded",
        expanded.extensions.len(),
        expanded.excluded.len()
    ))
}

fn classical() -> Result<String> {
    let obj = object("L_C")?;
    let mut cases = Vec::new();
    for k in 1..=64i64 {
        let m = 2 * k;
        let chain = parse_label(&obj, &format!("iv1^{}", 2 * m))?;
        let d = chain_degree(&obj, &chain)?;
        if d.s != 8 * k - 1 {
            return Err(fail(format!("iv1^{} sits in stem {}, not {}", 2 * m, d.s, 8 * k - 1)));
        }
        cases.push((k, m, d, chain));
    }
    let ss = SpectralSequence::run_on(obj, cases.iter().map(|c| c.2).collect(), None, None)?;
    for (k, m, d, chain) in cases {
        let Class::Nonzero(class) = einf_class(&ss, d, &chain)? else {
            return Err(fail(format!("iv1^{} is zero in E_infinity", 2 * m)));
        };
        let order = class_order(&ss, d, &class)?;
        let brute = 1u64 << two_adic(&(BigInt::from(9).pow(m as u32) - 1u32));
        let formula = 1u64 << (two_adic(&BigInt::from(2 * m)) + 2);
        if order != brute || brute != formula {
            return Err(fail(format!("stem {}: order {order}, 9^{m} - 1 gives {brute}, formula {formula}", 8 * k - 1)));
        }
    }
    Ok("iv1^{4k} has order 2^(v(4k)+2) = 2-part of 9^{2k} - 1 in stem 8k-1 for k <= 64".into())
}

/// A chart checked against a stored sidecar.
pub struct GoldenChart {
    pub name: &'static str,
    pub spec: ChartSpec,
    pub text: &'static str,
}

pub fn golden_charts() -> Vec<GoldenChart> {
    vec![
        GoldenChart {
            name: "ko_C-einfty",
            spec: ChartSpec::new("ko_C", None, (0, 24), 12, (0, 8)),
            text: include_str!("../data/golden/ko_C-einfty.tsv"),
        },
        GoldenChart {
            name: "L-einfty-1mod4",
            spec: ChartSpec::new("L", None, (-2, 32), 16, (1, 17)).with_residue(1, 4),
            text: include_str!("../data/golden/L-einfty-1mod4.tsv"),
        },
        GoldenChart {
            name: "L-einfty-3mod8",
            spec: ChartSpec::new("L", None, (-2, 32), 16, (3, 19)).with_residue(3, 8),
            text: include_str!("../data/golden/L-einfty-3mod8.tsv"),
        },
    ]
}

/// Computes the chart-data text for a spec, with the shipped ledger.
pub fn render_chart_text(spec: &ChartSpec) -> Result<String> {
    let obj = object(&spec.object)?;
    let ss = SpectralSequence::run(obj.clone(), spec.window(&obj), spec.page)?;
    let assembler = Assembler::with_shipped_ledger(&ss)?;
    Ok(to_text(&chart_data(&ss, spec, Some(assembler.ledger()))?))
}

fn charts() -> Result<String> {
    let mut lines = 0;
    for g in golden_charts() {
        let text = render_chart_text(&g.spec)?;
        if text != g.text {
            let at = text.lines().zip(g.text.lines()).position(|(a, b)| a != b).unwrap_or(text.lines().count().min(g.text.lines().count()));
            return Err(fail(format!("{} differs from its golden file at line {}", g.name, at + 1)));
        }
        lines += text.lines().count() - 1;
    }
    Ok(format!("three charts match their golden files ({lines} data lines)"))
}
