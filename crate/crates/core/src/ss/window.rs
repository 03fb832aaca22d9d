use crate::degree::TriDegree;
use crate::error::{EngineError, Result};

/// A box of tri-degrees: stems and filtrations always bounded, plus bounds
/// on the weight, the coweight, or both.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub stems: (i64, i64),
    pub filtrations: (i64, i64),
    pub weights: Option<(i64, i64)>,
    pub coweights: Option<(i64, i64)>,
}

impl Window {
    pub fn new(stems: (i64, i64), filtrations: (i64, i64)) -> Self {
        Window { stems, filtrations, weights: None, coweights: None }
    }

    pub fn with_weights(mut self, lo: i64, hi: i64) -> Self {
        self.weights = Some((lo, hi));
        self
    }

    pub fn with_coweights(mut self, lo: i64, hi: i64) -> Self {
        self.coweights = Some((lo, hi));
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.weights.is_none() && self.coweights.is_none() {
            return Err(EngineError::Usage("a window needs a weight or coweight range".into()));
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.stems.0 > self.stems.1
            || self.filtrations.0 > self.filtrations.1
            || self.weights.is_some_and(|(a, b)| a > b)
            || self.coweights.is_some_and(|(a, b)| a > b)
    }

    pub fn contains(&self, d: TriDegree) -> bool {
        let inside = |x: i64, (a, b): (i64, i64)| a <= x && x <= b;
        inside(d.s, self.stems)
            && inside(d.f, self.filtrations)
            && self.weights.is_none_or(|r| inside(d.w, r))
            && self.coweights.is_none_or(|r| inside(d.coweight(), r))
    }

    /// Every degree of the window with nonnegative filtration, sorted.
    pub fn degrees(&self) -> Result<Vec<TriDegree>> {
        self.validate()?;
        let mut out = Vec::new();
        if self.is_empty() {
            return Ok(out);
        }
        for s in self.stems.0..=self.stems.1 {
            let (mut lo, mut hi) = self.weights.unwrap_or((i64::MIN, i64::MAX));
            if let Some((a, b)) = self.coweights {
                lo = lo.max(s - b);
                hi = hi.min(s - a);
            }
            for f in self.filtrations.0.max(0)..=self.filtrations.1 {
                for w in lo..=hi {
                    out.push(TriDegree::new(s, f, w));
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// The coweights present in the window.
    pub fn coweight_range(&self) -> (i64, i64) {
        let from_weights = self.weights.map(|(a, b)| (self.stems.0 - b, self.stems.1 - a));
        match (from_weights, self.coweights) {
            (Some((a, b)), Some((c, d))) => (a.max(c), b.min(d)),
            (Some(r), None) | (None, Some(r)) => r,
            (None, None) => (0, -1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coweight_window() {
        let w = Window::new((0, 2), (0, 1)).with_coweights(1, 1);
        let d = w.degrees().unwrap();
        assert_eq!(d.len(), 6);
        assert!(d.iter().all(|x| x.coweight() == 1));
        assert!(Window::new((0, 1), (0, 1)).degrees().is_err());
        assert!(Window::new((1, 0), (0, 1)).with_weights(0, 0).degrees().unwrap().is_empty());
    }
}
