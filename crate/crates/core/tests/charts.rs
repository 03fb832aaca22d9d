use std::collections::BTreeSet;

use effseq_core::chart::{chart_data, emit_svg, parse_text, to_text, ChartDatum, ChartSpec, ColorClass, Glyph, LineKind};
use effseq_core::homotopy::{Assembler, ExtensionKind};
use effseq_core::objects::Catalog;
use effseq_core::ss::SpectralSequence;
use effseq_core::verify::golden_charts;

fn render(spec: &ChartSpec) -> (SpectralSequence, Vec<ChartDatum>) {
    let obj = Catalog::global().object(&spec.object).unwrap();
    let ss = SpectralSequence::run(obj.clone(), spec.window(&obj), spec.page).unwrap();
    let data = {
        let assembler = Assembler::with_shipped_ledger(&ss).unwrap();
        chart_data(&ss, spec, Some(assembler.ledger())).unwrap()
    };
    (ss, data)
}

fn datum<'a>(data: &'a [ChartDatum], s: i64, f: i64, label: &str) -> &'a ChartDatum {
    data.iter().find(|d| (d.s, d.f, d.label.as_str()) == (s, f, label)).unwrap_or_else(|| panic!("no {label} at ({s},{f})"))
}

#[test]
fn glyphs_follow_the_legend() {
    assert_eq!(Glyph::for_order(2).unwrap(), Glyph::Circle);
    assert_eq!(Glyph::for_order(0).unwrap(), Glyph::OpenBox);
    assert_eq!(Glyph::for_order(8).unwrap(), Glyph::NumberedBox(3));
    assert!(Glyph::for_order(6).is_err());
    assert!(Glyph::for_order(1).is_err());
}

#[test]
fn d1_on_v1_squared_is_a_dashed_line_to_a_tau_multiple() {
    let (_, data) = render(&ChartSpec::new("ko_C", Some(1), (0, 8), 8, (0, 4)));
    let v = datum(&data, 4, 0, "v1^2");
    let line = v.lines.iter().find(|l| l.kind == LineKind::Differential(1)).unwrap();
    assert!(line.dashed);
    assert_eq!((line.s, line.f), (3, 3));
    assert_eq!(v.glyph, Glyph::OpenBox);
}

#[test]
fn hidden_h_from_iota_four_v1_squared_is_dashed() {
    let (_, data) = render(&ChartSpec::new("L_C", None, (0, 8), 8, (0, 4)));
    let source = datum(&data, 3, 1, "i2v1^2");
    assert_eq!(source.color, ColorClass::Image);
    assert_eq!(source.glyph, Glyph::NumberedBox(2));
    let line = source.lines.iter().find(|l| l.kind == LineKind::Hidden(ExtensionKind::H)).unwrap();
    assert!(line.dashed);
    assert_eq!((line.s, line.f), (3, 3));
}

#[test]
fn empty_residue_class_gives_no_data() {
    let (_, data) = render(&ChartSpec::new("ko", None, (-4, 16), 12, (0, 16)).with_residue(3, 4));
    assert!(data.is_empty());
}

#[test]
fn every_summand_and_line_is_drawn() {
    let spec = ChartSpec::new("L", None, (-2, 24), 12, (1, 13)).with_residue(1, 4);
    let (ss, data) = render(&spec);
    let positions: BTreeSet<(i64, i64, &str)> = data.iter().map(|d| (d.s, d.f, d.label.as_str())).collect();
    assert_eq!(positions.len(), data.len(), "a datum is drawn twice");
    let occupied: BTreeSet<(i64, i64)> = data.iter().map(|d| (d.s, d.f)).collect();
    let last = ss.infinity().unwrap();
    for d in ss.targets.iter().filter(|d| spec.includes(**d)) {
        if last.group(*d).is_some_and(|g| !g.is_zero()) {
            assert!(occupied.contains(&(d.s, d.f)), "E_infinity is nonzero at {d} but nothing is drawn");
        }
    }
    for d in &data {
        let mut seen = BTreeSet::new();
        for l in &d.lines {
            assert!(seen.insert((l.kind, l.s, l.f, l.label.clone())), "duplicate line from {}", d.label);
            let inside = (spec.stems.0..=spec.stems.1).contains(&l.s) && l.f <= spec.max_filtration;
            if inside {
                assert!(positions.contains(&(l.s, l.f, l.label.as_str())), "line from {} to missing {}", d.label, l.label);
            }
        }
    }
    let hidden = data.iter().flat_map(|d| &d.lines).filter(|l| matches!(l.kind, LineKind::Hidden(_))).count();
    assert!(hidden > 0);
}

#[test]
fn toggles_remove_decorations() {
    let mut spec = ChartSpec::new("L", None, (-2, 16), 10, (1, 9)).with_residue(1, 4);
    spec.products = false;
    spec.hidden = false;
    spec.differentials = false;
    let (_, data) = render(&spec);
    assert!(!data.is_empty());
    assert!(data.iter().all(|d| d.lines.is_empty()));
}

#[test]
fn output_is_deterministic_and_round_trips() {
    let spec = ChartSpec::new("L", None, (-2, 20), 12, (3, 11)).with_residue(3, 8);
    let (_, a) = render(&spec);
    let (_, b) = render(&spec);
    assert_eq!(emit_svg(&a, &spec), emit_svg(&b, &spec));
    assert_eq!(parse_text(&to_text(&a)).unwrap(), a);
    for g in golden_charts() {
        assert_eq!(to_text(&parse_text(g.text).unwrap()), g.text, "{}", g.name);
    }
}

#[test]
fn invalid_specs_are_rejected() {
    assert!(ChartSpec::new("L", None, (0, 4), 4, (0, 4)).with_residue(1, 3).validate().is_err());
    assert!(ChartSpec::new("L", None, (0, 4), 4, (0, 4)).with_residue(8, 8).validate().is_err());
    assert!(ChartSpec::new("L", Some(0), (0, 4), 4, (0, 4)).validate().is_err());
}
