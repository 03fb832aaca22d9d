use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use super::enumerate::ExponentSolver;
use super::file::{DifferentialFamilyFile, GeneratorFile, PresentationFile, RuleFile, TermFile};
use super::{Element, Monomial};
use crate::degree::TriDegree;
use crate::error::{EngineError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: TriDegree,
    /// 0 for integer coefficients, otherwise the (2-power) additive order.
    pub torsion: u64,
    pub cap: Option<u32>,
    pub symbol: String,
    pub unicode: String,
    pub scale: u32,
}

/// `g^(cap+1) -> rhs` for a capped generator `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub generator: usize,
    pub lhs: Monomial,
    pub rhs: Element,
}

/// `d_{page(n)}(g^{2^{log2(n)}}) = factor(n) * g^{2^{log2(n)}}` for `n >= min_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialFamily {
    pub generator: usize,
    pub min_n: u32,
    page: [i64; 2],
    source_log2: [i64; 2],
    factor: Vec<(usize, [i64; 2])>,
}

fn affine(a: [i64; 2], n: u32) -> i64 {
    a[0] * n as i64 + a[1]
}

impl DifferentialFamily {
    pub fn page(&self, n: u32) -> u32 {
        affine(self.page, n) as u32
    }

    /// Exponent of the generator carried by the source.
    pub fn source_exponent(&self, n: u32) -> u32 {
        1 << affine(self.source_log2, n)
    }

    pub fn factor(&self, n: u32, generators: usize) -> Monomial {
        let mut e = vec![0; generators];
        for &(g, a) in &self.factor {
            e[g] += affine(a, n) as u32;
        }
        Monomial::from_exponents(e)
    }

    /// The member of the family living on page `r`, if any.
    pub fn member_on_page(&self, r: u32) -> Option<u32> {
        let n = (r as i64 - self.page[1]).checked_div(self.page[0])?;
        (n >= self.min_n as i64 && affine(self.page, n as u32) == r as i64).then_some(n as u32)
    }
}

/// Printing style for monomials and elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Ascii,
    Unicode,
}

/// A tri-graded commutative ring presented by monomial generators, torsion,
/// single-cap rewrite rules and optional structure maps.
#[derive(Clone, Debug)]
pub struct Presentation {
    name: String,
    generators: Vec<GeneratorSpec>,
    rules: Vec<RewriteRule>,
    global_torsion: Option<u64>,
    differentials: BTreeMap<u32, Vec<Option<Element>>>,
    psi3: Option<Vec<Element>>,
    families: Vec<DifferentialFamily>,
    eta_image: BTreeMap<usize, Vec<TermFile>>,
    eta_target: Option<String>,
    eta_graded: bool,
    solver: ExponentSolver,
    source: PresentationFile,
}

fn superscript(n: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

impl Presentation {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: PresentationFile = serde_json::from_str(text)?;
        Self::from_file(file)
    }

    pub fn from_file(file: PresentationFile) -> Result<Self> {
        let mut generators = Vec::with_capacity(file.generators.len());
        for g in &file.generators {
            if generators.iter().any(|x: &GeneratorSpec| x.name == g.name) {
                return Err(EngineError::Presentation(format!("duplicate generator {}", g.name)));
            }
            if g.torsion != 0 && !g.torsion.is_power_of_two() {
                return Err(EngineError::Presentation(format!("torsion of {} is not a power of 2", g.name)));
            }
            let symbol = g.symbol.clone().unwrap_or_else(|| g.name.clone());
            generators.push(GeneratorSpec {
                name: g.name.clone(),
                degree: TriDegree::from(g.degree),
                torsion: g.torsion,
                cap: g.cap,
                unicode: g.unicode.clone().unwrap_or_else(|| symbol.clone()),
                symbol,
                scale: g.scale.unwrap_or(1).max(1),
            });
        }
        if let Some(t) = file.global_torsion {
            if t == 0 || !t.is_power_of_two() {
                return Err(EngineError::Presentation("global torsion must be a positive power of 2".into()));
            }
        }
        let eta_graded = match file.grading.as_deref() {
            None | Some("tri") => false,
            Some("eta") => true,
            Some(other) => return Err(EngineError::Presentation(format!("unknown grading {other:?}"))),
        };
        let solver = ExponentSolver::new(
            generators
                .iter()
                .map(|g| {
                    if eta_graded {
                        let e = g.degree.eta_degree();
                        vec![e.coweight, e.level]
                    } else {
                        vec![g.degree.s, g.degree.f, g.degree.w]
                    }
                })
                .collect(),
            generators.iter().map(|g| g.cap).collect(),
        )?;
        let mut p = Presentation {
            name: file.name.clone(),
            generators,
            rules: Vec::new(),
            global_torsion: file.global_torsion,
            differentials: BTreeMap::new(),
            psi3: None,
            families: Vec::new(),
            eta_image: BTreeMap::new(),
            eta_target: file.eta_target.clone(),
            eta_graded,
            solver,
            source: file.clone(),
        };
        for rule in &file.rules {
            let r = p.load_rule(rule)?;
            p.rules.push(r);
        }
        for (g, spec) in p.generators.iter().enumerate() {
            if spec.cap.is_some() && !p.rules.iter().any(|r| r.generator == g) {
                return Err(EngineError::Presentation(format!("capped generator {} has no rewrite rule", spec.name)));
            }
        }
        for (page, values) in &file.differentials {
            let r: u32 = page
                .parse()
                .map_err(|_| EngineError::Presentation(format!("differential page {page:?} is not a number")))?;
            if r == 0 {
                return Err(EngineError::Presentation("differential pages start at 1".into()));
            }
            let mut table = vec![None; p.generators.len()];
            for (gen, terms) in values {
                let g = p.index_of(gen)?;
                let value = p.element_from_terms(terms)?;
                let expected = p.generators[g].degree + TriDegree::differential_shift(r);
                for (m, _) in value.terms() {
                    let d = p.degree_of(m);
                    if !p.same_degree(d, expected) {
                        return Err(EngineError::Presentation(format!(
                            "d{r}({gen}) has a term of degree {d}, expected {expected}"
                        )));
                    }
                }
                table[g] = Some(value);
            }
            p.differentials.insert(r, table);
        }
        if !file.psi3.is_empty() {
            let mut table = Vec::with_capacity(p.generators.len());
            for g in 0..p.generators.len() {
                let name = &p.generators[g].name;
                let value = match file.psi3.get(name) {
                    Some(terms) => p.element_from_terms(terms)?,
                    None => return Err(EngineError::Presentation(format!("psi3 missing on generator {name}"))),
                };
                for (m, _) in value.terms() {
                    if !p.same_degree(p.degree_of(m), p.generators[g].degree) {
                        return Err(EngineError::Presentation(format!("psi3({name}) is not homogeneous")));
                    }
                }
                table.push(value);
            }
            p.psi3 = Some(table);
        }
        for fam in &file.differential_families {
            let f = p.load_family(fam)?;
            p.families.push(f);
        }
        for (gen, terms) in &file.eta_image {
            let g = p.index_of(gen)?;
            p.eta_image.insert(g, terms.clone());
        }
        Ok(p)
    }

    fn load_rule(&self, rule: &RuleFile) -> Result<RewriteRule> {
        let lhs = self.monomial_from_map(&rule.lhs)?;
        let support: Vec<usize> = lhs.support().collect();
        let [g] = support[..] else {
            return Err(EngineError::Presentation("rule lhs must be a power of one generator".into()));
        };
        let cap = self.generators[g].cap.ok_or_else(|| {
            EngineError::Presentation(format!("rule lhs generator {} is not capped", self.generators[g].name))
        })?;
        if lhs.exponent(g) != cap + 1 {
            return Err(EngineError::Presentation(format!(
                "rule lhs for {} must have exponent cap+1 = {}",
                self.generators[g].name,
                cap + 1
            )));
        }
        let rhs = self.element_from_terms(&rule.rhs)?;
        let d = self.degree_of(&lhs);
        for (m, _) in rhs.terms() {
            if !self.same_degree(self.degree_of(m), d) {
                return Err(EngineError::Presentation(format!("rule for {} is not homogeneous", self.generators[g].name)));
            }
            if m.exponent(g) > cap {
                return Err(EngineError::Presentation(format!(
                    "rule for {} does not lower its exponent",
                    self.generators[g].name
                )));
            }
            for (h, spec) in self.generators.iter().enumerate() {
                if h != g && spec.cap.is_some_and(|c| m.exponent(h) > c) {
                    return Err(EngineError::Presentation(format!(
                        "rule for {} introduces {} beyond its cap",
                        self.generators[g].name, spec.name
                    )));
                }
            }
        }
        Ok(RewriteRule { generator: g, lhs, rhs })
    }

    /// Degree equality in this presentation's grading.
    pub fn same_degree(&self, a: TriDegree, b: TriDegree) -> bool {
        if self.eta_graded {
            a.eta_degree() == b.eta_degree()
        } else {
            a == b
        }
    }

    pub fn is_eta_graded(&self) -> bool {
        self.eta_graded
    }

    fn load_family(&self, fam: &DifferentialFamilyFile) -> Result<DifferentialFamily> {
        let generator = self.index_of(&fam.generator)?;
        let factor = fam
            .factor
            .iter()
            .map(|(name, a)| Ok((self.index_of(name)?, *a)))
            .collect::<Result<Vec<_>>>()?;
        if fam.page[0] <= 0 || fam.source_log2[0] < 0 {
            return Err(EngineError::Presentation("differential family must move to later pages".into()));
        }
        let family = DifferentialFamily { generator, min_n: fam.min_n, page: fam.page, source_log2: fam.source_log2, factor };
        for n in fam.min_n..fam.min_n + 4 {
            let r = family.page(n);
            let f = self.degree_of(&family.factor(n, self.generators.len()));
            if !self.same_degree(f, TriDegree::differential_shift(r)) {
                return Err(EngineError::Presentation(format!(
                    "differential family on {} has the wrong degree for n = {n}",
                    fam.generator
                )));
            }
            if affine(fam.source_log2, n) < 0 {
                return Err(EngineError::Presentation("negative source exponent in differential family".into()));
            }
        }
        Ok(family)
    }

    pub fn differential_families(&self) -> &[DifferentialFamily] {
        &self.families
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn global_torsion(&self) -> Option<u64> {
        self.global_torsion
    }

    pub fn eta_target(&self) -> Option<&str> {
        self.eta_target.as_deref()
    }

    pub fn eta_image_terms(&self, generator: usize) -> Option<&[TermFile]> {
        self.eta_image.get(&generator).map(Vec::as_slice)
    }

    pub fn file(&self) -> &PresentationFile {
        &self.source
    }

    /// Normalized JSON form (generators in presentation order, maps sorted).
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.source)?)
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| EngineError::Presentation(format!("unknown generator {name} in {}", self.name)))
    }

    pub fn one(&self) -> Monomial {
        Monomial::one(self.generators.len())
    }

    pub fn gen(&self, name: &str) -> Result<Monomial> {
        Ok(Monomial::generator(self.generators.len(), self.index_of(name)?, 1))
    }

    pub fn monomial_from_map(&self, map: &BTreeMap<String, u32>) -> Result<Monomial> {
        let mut e = vec![0; self.generators.len()];
        for (name, &x) in map {
            e[self.index_of(name)?] += x;
        }
        Ok(Monomial::from_exponents(e))
    }

    pub fn monomial_to_map(&self, m: &Monomial) -> BTreeMap<String, u32> {
        m.support().map(|g| (self.generators[g].name.clone(), m.exponent(g))).collect()
    }

    /// Builds a normalized element from file terms.
    pub fn element_from_terms(&self, terms: &[TermFile]) -> Result<Element> {
        let mut raw = Element::zero();
        for (c, map) in terms {
            raw.add_raw(*c, self.monomial_from_map(map)?)?;
        }
        self.normal_form(&raw)
    }

    pub fn degree_of(&self, m: &Monomial) -> TriDegree {
        m.support().fold(TriDegree::ZERO, |acc, g| acc + self.generators[g].degree * m.exponent(g) as i64)
    }

    /// Degree of a monomial given by name, failing on unknown generators.
    pub fn degree_of_named(&self, map: &BTreeMap<String, u32>) -> Result<TriDegree> {
        Ok(self.degree_of(&self.monomial_from_map(map)?))
    }

    /// Additive order of a normal-form monomial: 0 for `Z`.
    pub fn torsion_of(&self, m: &Monomial) -> u64 {
        let local = m.support().map(|g| self.generators[g].torsion).filter(|&t| t != 0).min();
        match (local, self.global_torsion) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, b) => b.unwrap_or(0),
        }
    }

    pub fn is_normal(&self, m: &Monomial) -> bool {
        self.generators.iter().enumerate().all(|(g, spec)| spec.cap.is_none_or(|c| m.exponent(g) <= c))
    }

    fn reduce_coefficient(&self, c: i64, m: &Monomial) -> i64 {
        match self.torsion_of(m) {
            0 => c,
            t => c.rem_euclid(t as i64),
        }
    }

    /// Rewrites a single monomial into normal form.
    fn normalize_monomial(&self, m: &Monomial, coeff: i64, out: &mut Element) -> Result<()> {
        let over = self
            .generators
            .iter()
            .enumerate()
            .find(|(g, spec)| spec.cap.is_some_and(|c| m.exponent(*g) > c));
        match over {
            None => out.add_raw(coeff, m.clone()),
            Some((g, _)) => {
                let rule = self.rules.iter().find(|r| r.generator == g).expect("capped generators have rules");
                let rest = m.div(&rule.lhs).expect("exponent exceeds cap");
                for (t, c) in rule.rhs.terms() {
                    let c = c.checked_mul(coeff).ok_or(EngineError::Overflow("rewriting"))?;
                    self.normalize_monomial(&t.mul(&rest), c, out)?;
                }
                Ok(())
            }
        }
    }

    /// Applies all rewrite rules and reduces coefficients modulo torsion.
    pub fn normal_form(&self, e: &Element) -> Result<Element> {
        let mut raw = Element::zero();
        for (m, c) in e.terms() {
            self.normalize_monomial(m, c, &mut raw)?;
        }
        Ok(raw.terms().map(|(m, c)| (m.clone(), self.reduce_coefficient(c, m))).collect())
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        let mut raw = a.clone();
        for (m, c) in b.terms() {
            raw.add_raw(c, m.clone())?;
        }
        self.normal_form(&raw)
    }

    pub fn scale(&self, a: &Element, k: i64) -> Result<Element> {
        let mut raw = Element::zero();
        for (m, c) in a.terms() {
            raw.add_raw(c.checked_mul(k).ok_or(EngineError::Overflow("scaling"))?, m.clone())?;
        }
        self.normal_form(&raw)
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        let mut raw = Element::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let c = ca.checked_mul(cb).ok_or(EngineError::Overflow("multiplying"))?;
                self.normalize_monomial(&ma.mul(mb), c, &mut raw)?;
            }
        }
        Ok(raw.terms().map(|(m, c)| (m.clone(), self.reduce_coefficient(c, m))).collect())
    }

    pub fn multiply_monomials(&self, a: &Monomial, b: &Monomial) -> Result<Element> {
        self.normal_form(&Element::monomial(a.mul(b)))
    }

    /// Normal-form monomials of degree `d` with their additive orders.
    ///
    /// For an eta-graded presentation only the bidegree of `d` matters.
    pub fn basis_at(&self, d: TriDegree) -> BasisPiece {
        let target = if self.eta_graded {
            let e = d.eta_degree();
            vec![e.coweight, e.level]
        } else {
            vec![d.s, d.f, d.w]
        };
        let monomials: Vec<Monomial> = self
            .solver
            .solve(&target)
            .into_iter()
            .map(Monomial::from_exponents)
            .filter(|m| self.is_normal(m))
            .collect();
        let orders = monomials.iter().map(|m| self.torsion_of(m)).collect();
        BasisPiece { degree: d, monomials, orders }
    }

    /// Pages on which generator differentials are listed.
    pub fn differential_pages(&self) -> impl Iterator<Item = u32> + '_ {
        self.differentials.keys().copied()
    }

    pub fn generator_pages_contain(&self, r: u32) -> bool {
        self.differentials.contains_key(&r)
    }

    /// Smallest coweight a monomial can have beyond what its positive
    /// generators contribute.
    pub fn most_negative_coweight(&self) -> Result<i64> {
        let mut total = 0;
        for spec in &self.generators {
            let c = spec.degree.coweight();
            if c < 0 {
                let cap = spec.cap.ok_or_else(|| {
                    EngineError::Presentation(format!("generator {} has negative coweight and no cap", spec.name))
                })?;
                total += c * i64::from(cap);
            }
        }
        Ok(total)
    }

    pub fn generator_differential(&self, r: u32, g: usize) -> Option<&Element> {
        self.differentials.get(&r).and_then(|t| t[g].as_ref())
    }

    /// Extends the listed `d_r` values on generators to a monomial by the
    /// Leibniz rule.
    pub fn leibniz(&self, r: u32, m: &Monomial) -> Result<Element> {
        let Some(table) = self.differentials.get(&r) else {
            return Ok(Element::zero());
        };
        let mut raw = Element::zero();
        for g in m.support() {
            let Some(dg) = &table[g] else { continue };
            let e = m.exponent(g) as i64;
            let rest = m.with_exponent(g, m.exponent(g) - 1);
            for (t, c) in dg.terms() {
                let c = c.checked_mul(e).ok_or(EngineError::Overflow("Leibniz rule"))?;
                self.normalize_monomial(&t.mul(&rest), c, &mut raw)?;
            }
        }
        Ok(raw.terms().map(|(m, c)| (m.clone(), self.reduce_coefficient(c, m))).collect())
    }

    pub fn leibniz_element(&self, r: u32, e: &Element) -> Result<Element> {
        let mut acc = Element::zero();
        for (m, c) in e.terms() {
            let d = self.scale(&self.leibniz(r, m)?, c)?;
            acc = self.add(&acc, &d)?;
        }
        Ok(acc)
    }

    pub fn has_psi3(&self) -> bool {
        self.psi3.is_some()
    }

    /// If every generator is an eigenvector of `psi3`, its eigenvalue.
    fn psi3_eigenvalues(&self) -> Option<Vec<i64>> {
        let table = self.psi3.as_ref()?;
        table
            .iter()
            .enumerate()
            .map(|(g, e)| {
                let m = Monomial::generator(self.generators.len(), g, 1);
                match e.len() {
                    0 => Some(0),
                    1 if e.coefficient(&m) != 0 => Some(e.coefficient(&m)),
                    _ => None,
                }
            })
            .collect()
    }

    /// `psi3(m)` as a list of (monomial, big integer coefficient), unreduced.
    pub fn psi3_monomial(&self, m: &Monomial) -> Result<Vec<(Monomial, BigInt)>> {
        let table = self
            .psi3
            .as_ref()
            .ok_or_else(|| EngineError::Presentation(format!("{} carries no psi3 data", self.name)))?;
        if let Some(eigen) = self.psi3_eigenvalues() {
            let mut c = BigInt::one();
            for g in m.support() {
                c *= BigInt::from(eigen[g]).pow(m.exponent(g));
            }
            return Ok(vec![(m.clone(), c)]);
        }
        let mut acc = Element::monomial(self.one());
        for g in m.support() {
            for _ in 0..m.exponent(g) {
                acc = self.multiply(&acc, &table[g])?;
            }
        }
        Ok(acc.terms().map(|(m, c)| (m.clone(), BigInt::from(c))).collect())
    }

    /// `psi3` on an element, with coefficients small enough for machine integers.
    pub fn psi3(&self, e: &Element) -> Result<Element> {
        let mut raw = Element::zero();
        for (m, c) in e.terms() {
            for (t, k) in self.psi3_monomial(m)? {
                let t_order = self.torsion_of(&t);
                let k = if t_order == 0 { k } else { k % BigInt::from(t_order) };
                let k = k.to_i64().ok_or(EngineError::Overflow("applying psi3"))?;
                raw.add_raw(k.checked_mul(c).ok_or(EngineError::Overflow("applying psi3"))?, t)?;
            }
        }
        self.normal_form(&raw)
    }

    pub fn format_monomial(&self, m: &Monomial, style: Style) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        let parts: Vec<String> = m
            .support()
            .map(|g| {
                let spec = &self.generators[g];
                let total = m.exponent(g) * spec.scale;
                match style {
                    Style::Ascii if total == 1 => spec.symbol.clone(),
                    Style::Ascii => format!("{}^{}", spec.symbol, total),
                    Style::Unicode if total == 1 => spec.unicode.clone(),
                    Style::Unicode => format!("{}{}", spec.unicode, superscript(total)),
                }
            })
            .collect();
        match style {
            Style::Ascii => parts.join("."),
            Style::Unicode => parts.join("·"),
        }
    }

    pub fn format_element(&self, e: &Element, style: Style) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in e.terms().enumerate() {
            if i > 0 {
                out.push_str(if c < 0 { " - " } else { " + " });
            } else if c < 0 {
                out.push('-');
            }
            let a = c.unsigned_abs();
            if a != 1 {
                out.push_str(&a.to_string());
            }
            if !(m.is_one() && a != 1) {
                out.push_str(&self.format_monomial(m, style));
            }
        }
        out
    }

    /// Parses the plain-text monomial syntax produced by [`Self::format_monomial`].
    pub fn parse_monomial(&self, text: &str) -> Result<Monomial> {
        let text = text.trim();
        let mut e = vec![0u32; self.generators.len()];
        if text == "1" || text.is_empty() {
            return Ok(Monomial::from_exponents(e));
        }
        for token in text.split(['.', ' ', '*', '·']).filter(|t| !t.is_empty()) {
            let (sym, power) = match token.split_once('^') {
                Some((s, p)) => (
                    s,
                    p.trim_matches(['{', '}'])
                        .parse::<u32>()
                        .map_err(|_| EngineError::Parse(format!("bad exponent in {token:?}")))?,
                ),
                None => (token, 1),
            };
            let g = self
                .generators
                .iter()
                .position(|g| g.symbol == sym || g.name == sym || g.unicode == sym)
                .ok_or_else(|| EngineError::Parse(format!("unknown symbol {sym:?} in {}", self.name)))?;
            let scale = if self.generators[g].name == sym && self.generators[g].symbol != sym {
                1
            } else {
                self.generators[g].scale
            };
            if power % scale != 0 {
                return Err(EngineError::Parse(format!("{token:?}: exponent must be a multiple of {scale}")));
            }
            e[g] += power / scale;
        }
        Ok(Monomial::from_exponents(e))
    }

    /// Parses `c1 m1 + c2 m2 ...`, where each coefficient is an optional
    /// leading integer.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let mut raw = Element::zero();
        for term in text.split('+').map(str::trim).filter(|t| !t.is_empty()) {
            let (coeff, rest) = split_coefficient(term);
            raw.add_raw(coeff, self.parse_monomial(rest)?)?;
        }
        self.normal_form(&raw)
    }
}

/// Splits a leading integer coefficient (default 1) off a term.
pub fn split_coefficient(term: &str) -> (i64, &str) {
    let digits = term.chars().take_while(|c| c.is_ascii_digit()).count();
    if digits == 0 {
        return (1, term);
    }
    let rest = term[digits..].trim_start_matches(['*', ' ']);
    let c = term[..digits].parse().unwrap_or(1);
    if rest.is_empty() {
        (c, "1")
    } else {
        (c, rest)
    }
}

/// The normal-form monomials in one tri-degree together with their orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisPiece {
    pub degree: TriDegree,
    pub monomials: Vec<Monomial>,
    /// 0 marks a `Z` summand.
    pub orders: Vec<u64>,
}

impl BasisPiece {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn free_rank(&self) -> usize {
        self.orders.iter().filter(|&&o| o == 0).count()
    }
}

impl GeneratorFile {
    pub fn degree(&self) -> TriDegree {
        TriDegree::from(self.degree)
    }
}
