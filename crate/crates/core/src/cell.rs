//! Basis cells of E1 pages and integer chains on them.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Monomial, Presentation, Style};
use crate::error::{EngineError, Result};

/// Which side of the fiber sequence a class comes from.
///
/// `Kernel` classes map nontrivially to the base (they come from
/// `ker(psi3 - 1)`); `Cokernel` classes are in the image of the boundary map
/// `iota`. Every cell of a plain ring object is `Kernel`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Kernel,
    Cokernel,
    Mixed,
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Part::Kernel => "kernel",
            Part::Cokernel => "cokernel",
            Part::Mixed => "mixed",
        })
    }
}

/// A monomial of the base ring, optionally multiplied by `iota`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Cell {
    pub iota: bool,
    pub mono: Monomial,
}

impl Cell {
    pub fn plain(mono: Monomial) -> Self {
        Cell { iota: false, mono }
    }

    pub fn iota(mono: Monomial) -> Self {
        Cell { iota: true, mono }
    }

    pub fn part(&self) -> Part {
        if self.iota {
            Part::Cokernel
        } else {
            Part::Kernel
        }
    }

    pub fn format(&self, p: &Presentation, style: Style) -> String {
        let m = p.format_monomial(&self.mono, style);
        match (self.iota, style) {
            (false, _) => m,
            (true, Style::Ascii) if self.mono.is_one() => "i".to_string(),
            (true, Style::Unicode) if self.mono.is_one() => "ι".to_string(),
            (true, Style::Ascii) => format!("i{m}"),
            (true, Style::Unicode) => format!("ι{m}"),
        }
    }

    /// Inverse of [`Cell::format`] in the plain-text style. Base rings have
    /// no generator whose symbol starts with `i`, so a leading `i` is `iota`.
    pub fn parse(p: &Presentation, text: &str) -> Result<Self> {
        let t = text.trim();
        match t.strip_prefix('i') {
            Some(rest) => Ok(Cell::iota(p.parse_monomial(rest)?)),
            None => Ok(Cell::plain(p.parse_monomial(t)?)),
        }
    }
}

/// A finite integer combination of cells.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Chain {
    terms: BTreeMap<Cell, i64>,
}

impl Chain {
    pub fn zero() -> Self {
        Chain::default()
    }

    pub fn cell(c: Cell) -> Self {
        Chain::term(1, c)
    }

    pub fn term(coeff: i64, c: Cell) -> Self {
        let mut chain = Chain::zero();
        chain.add_term(coeff, c);
        chain
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Cell, i64)> {
        self.terms.iter().map(|(c, &k)| (c, k))
    }

    pub fn coefficient(&self, c: &Cell) -> i64 {
        self.terms.get(c).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, coeff: i64, c: Cell) {
        if coeff == 0 {
            return;
        }
        match self.terms.entry(c) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&mut self, other: &Chain) {
        for (c, k) in other.terms() {
            self.add_term(k, c.clone());
        }
    }

    pub fn scaled(&self, k: i64) -> Chain {
        let mut out = Chain::zero();
        for (c, x) in self.terms() {
            out.add_term(x * k, c.clone());
        }
        out
    }

    /// Reduces each coefficient modulo the order returned by `order_of`
    /// (0 meaning no reduction).
    pub fn reduce(&self, mut order_of: impl FnMut(&Cell) -> u64) -> Chain {
        let mut out = Chain::zero();
        for (c, x) in self.terms() {
            let o = order_of(c);
            out.add_term(if o == 0 { x } else { x.rem_euclid(o as i64) }, c.clone());
        }
        out
    }

    pub fn part(&self) -> Part {
        let iota = self.terms.keys().filter(|c| c.iota).count();
        match iota {
            0 => Part::Kernel,
            n if n == self.terms.len() => Part::Cokernel,
            _ => Part::Mixed,
        }
    }

    /// Smallest cell in the support.
    pub fn leading(&self) -> Option<(&Cell, i64)> {
        self.terms.iter().next().map(|(c, &k)| (c, k))
    }

    pub fn format(&self, p: &Presentation, style: Style) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (c, k)) in self.terms().enumerate() {
            if i > 0 {
                out.push_str(if k < 0 { " - " } else { " + " });
            } else if k < 0 {
                out.push('-');
            }
            let a = k.unsigned_abs();
            let body = c.format(p, style);
            if a == 1 {
                out.push_str(&body);
            } else if c.mono.is_one() && !c.iota {
                out.push_str(&a.to_string());
            } else if c.iota {
                // Coefficients of iota cells go after the iota: "i4v1^2".
                let rest = body.trim_start_matches(['i', 'ι']);
                let prefix = &body[..body.len() - rest.len()];
                let rest = if rest.is_empty() { "1".to_string() } else { rest.to_string() };
                if rest == "1" {
                    out.push_str(&format!("{prefix}{a}"));
                } else {
                    out.push_str(&format!("{prefix}{a}{rest}"));
                }
            } else {
                out.push_str(&format!("{a}{body}"));
            }
        }
        out
    }

    /// Parses the plain-text form produced by [`Chain::format`].
    pub fn parse(p: &Presentation, text: &str) -> Result<Chain> {
        let mut out = Chain::zero();
        let text = text.trim();
        if text == "0" {
            return Ok(out);
        }
        for term in text.split('+').map(str::trim) {
            if term.is_empty() {
                return Err(EngineError::Parse(format!("empty term in {text:?}")));
            }
            let (iota, body) = match term.strip_prefix('i') {
                Some(rest) => (true, rest),
                None => (false, term),
            };
            let (k, mono_text) = crate::algebra::split_coefficient(body);
            let mono = p.parse_monomial(mono_text)?;
            out.add_term(k, Cell { iota, mono });
        }
        Ok(out)
    }
}

impl FromIterator<(Cell, i64)> for Chain {
    fn from_iter<T: IntoIterator<Item = (Cell, i64)>>(iter: T) -> Self {
        let mut out = Chain::zero();
        for (c, k) in iter {
            out.add_term(k, c);
        }
        out
    }
}
