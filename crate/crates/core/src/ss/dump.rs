//! Line-oriented text dump of pages.

use std::fmt::Write;

use num_traits::{One, Zero};

use super::engine::SpectralSequence;
use crate::degree::TriDegree;

fn format_targets(ss: &SpectralSequence, r: u32, d: TriDegree, j: usize) -> String {
    let page = ss.page(r).expect("page exists");
    let Some(col) = page.differential_of(d, j) else {
        return String::new();
    };
    let target = &page.groups[&(d + TriDegree::differential_shift(r))];
    col.iter()
        .zip(&target.summands)
        .filter(|(k, _)| !k.is_zero())
        .map(|(k, s)| if k.is_one() { s.label.clone() } else { format!("{}*{}", k, s.label) })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// One line per summand of `E_r` inside the window.
pub fn dump_page(ss: &SpectralSequence, r: u32) -> String {
    let mut out = String::new();
    let Some(page) = ss.page(r) else { return out };
    for (d, group) in &page.groups {
        if !ss.targets.contains(d) {
            continue;
        }
        for (j, s) in group.summands.iter().enumerate() {
            let order = if s.order == 0 { "Z".to_string() } else { format!("Z/{}", s.order) };
            let _ = writeln!(
                out,
                "page {r} | {} {} {} | {order} | {} | d_{r} -> ({})",
                d.s,
                d.f,
                d.w,
                s.label,
                format_targets(ss, r, *d, j)
            );
        }
    }
    out
}

/// Dumps of pages `from..=to`, clipped to what was computed.
pub fn dump_pages(ss: &SpectralSequence, from: u32, to: u32) -> String {
    let last = ss.pages.len() as u32;
    (from.max(1)..=to.min(last)).map(|r| dump_page(ss, r)).collect()
}
