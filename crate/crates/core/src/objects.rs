//! The shipped presentations and a uniform view of the objects they define.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use crate::algebra::{Element, Monomial, Presentation, Style};
use crate::cell::{Cell, Chain};
use crate::degree::TriDegree;
use crate::error::{EngineError, Result};
use crate::fiber::FiberModel;
use crate::ss::RulePattern;

/// Checked-in presentation files, by name.
pub const PRESENTATION_FILES: &[(&str, &str)] = &[
    ("ko_C", include_str!("../data/presentations/ko_C.json")),
    ("ko", include_str!("../data/presentations/ko.json")),
    ("ko_eta", include_str!("../data/presentations/ko_eta.json")),
    ("ko_C_eta", include_str!("../data/presentations/ko_C_eta.json")),
    ("L_eta", include_str!("../data/presentations/L_eta.json")),
    ("L_C_eta", include_str!("../data/presentations/L_C_eta.json")),
];

/// Checked-in fiber descriptions, by name.
pub const FIBER_FILES: &[(&str, &str)] = &[
    ("L_C", include_str!("../data/presentations/L_C.json")),
    ("L", include_str!("../data/presentations/L.json")),
];

/// Names accepted wherever an object is expected.
pub const OBJECT_NAMES: &[&str] = &["ko_C", "L_C", "ko", "L", "ko_eta", "ko_C_eta", "L_eta", "L_C_eta"];

pub struct Catalog {
    presentations: BTreeMap<String, Arc<Presentation>>,
    fibers: BTreeMap<String, Arc<FiberModel>>,
}

impl Catalog {
    /// Loads and validates every shipped file.
    pub fn load() -> Result<Catalog> {
        let mut presentations = BTreeMap::new();
        for (name, text) in PRESENTATION_FILES {
            let p = Presentation::from_json(text)?;
            if p.name() != *name {
                return Err(EngineError::Presentation(format!("file for {name} declares name {}", p.name())));
            }
            presentations.insert(name.to_string(), Arc::new(p));
        }
        let mut fibers = BTreeMap::new();
        for (name, text) in FIBER_FILES {
            let file: crate::fiber::FiberFile = serde_json::from_str(text)?;
            let base = presentations
                .get(&file.base)
                .cloned()
                .ok_or_else(|| EngineError::Presentation(format!("unknown base {}", file.base)))?;
            fibers.insert(name.to_string(), Arc::new(FiberModel::from_file(file, base)?));
        }
        Ok(Catalog { presentations, fibers })
    }

    /// The process-wide catalog of shipped objects.
    pub fn global() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| Catalog::load().expect("shipped presentation files are valid"))
    }

    pub fn presentation(&self, name: &str) -> Result<Arc<Presentation>> {
        self.presentations
            .get(name)
            .cloned()
            .ok_or_else(|| EngineError::Usage(format!("unknown presentation {name:?}")))
    }

    pub fn fiber(&self, name: &str) -> Result<Arc<FiberModel>> {
        self.fibers.get(name).cloned().ok_or_else(|| EngineError::Usage(format!("unknown fiber object {name:?}")))
    }

    /// An object whose spectral sequence the engine can run.
    pub fn object(&self, name: &str) -> Result<SpectralObject> {
        if let Some(f) = self.fibers.get(name) {
            return SpectralObject::fiber(f.clone());
        }
        match self.presentations.get(name) {
            Some(p) if p.is_eta_graded() => Ok(SpectralObject::Eta(p.clone())),
            Some(p) => Ok(SpectralObject::Ring(p.clone())),
            None => Err(EngineError::Usage(format!(
                "unknown object {name:?}; expected one of {}",
                OBJECT_NAMES.join(", ")
            ))),
        }
    }

    /// Normalized JSON of any shipped file.
    pub fn dump(&self, name: &str) -> Result<String> {
        if let Some(f) = self.fibers.get(name) {
            return Ok(serde_json::to_string_pretty(f.file())?);
        }
        self.presentation(name)?.to_json()
    }
}

/// A ring given by a presentation, the fiber of `psi3 - 1` on one, or an
/// eta-periodic ring graded by coweight and level.
///
/// Eta-periodic degrees are encoded as tri-degrees `(c, c + l, 0)`, which
/// have coweight `c` and level `l` and move correctly under `d_r`.
#[derive(Clone, Debug)]
pub enum SpectralObject {
    Ring(Arc<Presentation>),
    Fiber(Arc<FiberModel>, Option<RulePattern>),
    Eta(Arc<Presentation>),
}

impl SpectralObject {
    pub fn fiber(model: Arc<FiberModel>) -> Result<Self> {
        let rule = model.higher_differentials().map(RulePattern::from_names).transpose()?;
        Ok(SpectralObject::Fiber(model, rule))
    }

    pub fn name(&self) -> &str {
        match self {
            SpectralObject::Ring(p) | SpectralObject::Eta(p) => p.name(),
            SpectralObject::Fiber(f, _) => f.name(),
        }
    }

    /// The ring whose monomials name the cells.
    pub fn base(&self) -> &Arc<Presentation> {
        match self {
            SpectralObject::Ring(p) | SpectralObject::Eta(p) => p,
            SpectralObject::Fiber(f, _) => f.base(),
        }
    }

    pub fn rule(&self) -> Option<&RulePattern> {
        match self {
            SpectralObject::Ring(_) | SpectralObject::Eta(_) => None,
            SpectralObject::Fiber(_, r) => r.as_ref(),
        }
    }

    pub fn fiber_model(&self) -> Option<&Arc<FiberModel>> {
        match self {
            SpectralObject::Ring(_) | SpectralObject::Eta(_) => None,
            SpectralObject::Fiber(f, _) => Some(f),
        }
    }

    pub fn eta_target(&self) -> Option<&str> {
        match self {
            SpectralObject::Ring(p) => p.eta_target(),
            SpectralObject::Fiber(f, _) => f.eta_target(),
            SpectralObject::Eta(_) => None,
        }
    }

    pub fn degree(&self, c: &Cell) -> TriDegree {
        match self {
            SpectralObject::Ring(p) => p.degree_of(&c.mono),
            SpectralObject::Fiber(f, _) => f.degree(c),
            SpectralObject::Eta(p) => p.degree_of(&c.mono).eta_degree().representative(),
        }
    }

    /// E1 basis cells in degree `d` with their orders.
    pub fn cells_at(&self, d: TriDegree) -> Result<Arc<Vec<(Cell, u64)>>> {
        match self {
            SpectralObject::Ring(p) => {
                if d.f < 0 {
                    return Ok(Arc::new(Vec::new()));
                }
                let b = p.basis_at(d);
                Ok(Arc::new(b.monomials.into_iter().map(Cell::plain).zip(b.orders).collect()))
            }
            SpectralObject::Fiber(f, _) => f.cells_at(d),
            SpectralObject::Eta(p) => {
                let b = p.basis_at(d);
                Ok(Arc::new(b.monomials.into_iter().map(Cell::plain).zip(b.orders).collect()))
            }
        }
    }

    pub fn d1(&self, c: &Cell) -> Result<Chain> {
        match self {
            SpectralObject::Ring(p) | SpectralObject::Eta(p) => {
                Ok(p.leibniz(1, &c.mono)?.terms().map(|(m, k)| (Cell::plain(m.clone()), k)).collect())
            }
            SpectralObject::Fiber(f, _) => f.d1(c),
        }
    }

    pub fn multiply(&self, a: &Chain, b: &Chain) -> Result<Chain> {
        match self {
            SpectralObject::Ring(p) | SpectralObject::Eta(p) => {
                let mut out = Chain::zero();
                for (ca, ka) in a.terms() {
                    for (cb, kb) in b.terms() {
                        for (m, k) in p.multiply_monomials(&ca.mono, &cb.mono)?.terms() {
                            out.add_term(k * ka * kb, Cell::plain(m.clone()));
                        }
                    }
                }
                Ok(out.reduce(|c| p.torsion_of(&c.mono)))
            }
            SpectralObject::Fiber(f, _) => f.multiply(a, b),
        }
    }

    /// Whether degree `d` can carry classes at all.
    pub fn admits(&self, d: TriDegree) -> bool {
        match self {
            SpectralObject::Ring(_) | SpectralObject::Fiber(..) => d.f >= 0,
            SpectralObject::Eta(_) => d.w == 0,
        }
    }

    /// Whether some formula-driven differential lives on page `r >= 2`.
    pub fn has_family_on_page(&self, r: u32) -> bool {
        match self {
            SpectralObject::Eta(p) | SpectralObject::Ring(p) => {
                p.differential_families().iter().any(|f| f.member_on_page(r).is_some()) || p.generator_pages_contain(r)
            }
            SpectralObject::Fiber(..) => false,
        }
    }

    /// The last page on which a formula-driven differential can touch a
    /// degree of coweight at most `max_coweight`.
    pub fn last_family_page(&self, max_coweight: i64) -> Result<u32> {
        let p = match self {
            SpectralObject::Eta(p) | SpectralObject::Ring(p) => p,
            SpectralObject::Fiber(..) => return Ok(1),
        };
        let mut last = p.differential_pages().max().unwrap_or(1);
        let offset = p.most_negative_coweight()?;
        for fam in p.differential_families() {
            let g = p.degree_of(&Monomial::generator(p.generators().len(), fam.generator, 1)).coweight();
            if g <= 0 {
                return Err(EngineError::Presentation("differential families need a generator of positive coweight".into()));
            }
            let mut n = fam.min_n;
            while i64::from(fam.source_exponent(n)) * g + offset <= max_coweight + 1 {
                last = last.max(fam.page(n));
                n += 1;
            }
        }
        Ok(last)
    }

    /// `d_r` on a chain of cells, for pages given by generator differentials
    /// or differential families; `None` when nothing is recorded on page `r`.
    pub fn formula_differential(&self, r: u32, chain: &Chain) -> Result<Option<Chain>> {
        let p = match self {
            SpectralObject::Eta(p) | SpectralObject::Ring(p) => p,
            SpectralObject::Fiber(..) => return Ok(None),
        };
        if r == 1 {
            let mut out = Chain::zero();
            for (c, k) in chain.terms() {
                out.add(&self.d1(c)?.scaled(k));
            }
            return Ok(Some(out.reduce(|c| p.torsion_of(&c.mono))));
        }
        if p.generator_pages_contain(r) {
            let mut out = Chain::zero();
            for (c, k) in chain.terms() {
                for (m, j) in p.leibniz(r, &c.mono)?.terms() {
                    out.add_term(j * k, Cell::plain(m.clone()));
                }
            }
            return Ok(Some(out.reduce(|c| p.torsion_of(&c.mono))));
        }
        let Some((fam, n)) =
            p.differential_families().iter().find_map(|f| f.member_on_page(r).map(|n| (f, n)))
        else {
            return Ok(None);
        };
        let step = fam.source_exponent(n);
        let factor = Element::monomial(fam.factor(n, p.generators().len()));
        let mut out = Chain::zero();
        for (c, k) in chain.terms() {
            let e = c.mono.exponent(fam.generator);
            if e % step != 0 {
                return Err(EngineError::Consistency(format!(
                    "{} is not a cycle for the earlier pages of {}",
                    c.format(p, Style::Ascii),
                    p.name()
                )));
            }
            let q = i64::from(e / step);
            let value = p.multiply(&factor, &Element::monomial(c.mono.clone()))?;
            for (m, j) in value.terms() {
                out.add_term(q * j * k, Cell::plain(m.clone()));
            }
        }
        Ok(Some(out.reduce(|c| p.torsion_of(&c.mono))))
    }
}
