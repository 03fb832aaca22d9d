use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

use effseq_core::homotopy::{ActionValue, Assembler, ExtensionKind, HomotopyGroup, Ledger};
use effseq_core::objects::Catalog;
use effseq_core::ss::{SpectralSequence, Window};
use effseq_core::{EngineError, TriDegree};

fn l_window() -> SpectralSequence {
    let obj = Catalog::global().object("L").unwrap();
    SpectralSequence::run(obj, Window::new((-2, 20), (0, 24)).with_coweights(0, 12), None).unwrap()
}

fn columns(ss: &SpectralSequence) -> Vec<(i64, i64)> {
    let mut out: Vec<(i64, i64)> = ss.targets.iter().map(|d| (d.s, d.w)).collect();
    out.sort();
    out.dedup();
    out
}

/// Coordinates of `value` on the column generators.
fn coordinates(group: &HomotopyGroup, value: &ActionValue) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); group.generators.len()];
    let slots: Vec<usize> = (0..group.generators.len()).filter(|&i| group.generators[i].degree == value.degree).collect();
    for (&i, k) in slots.iter().zip(&value.class) {
        out[i] += k;
    }
    out
}

/// Reduces each coordinate below its order, pushing the overflow up the
/// column through the recorded relations.
fn normal_form(group: &HomotopyGroup, mut v: Vec<BigInt>) -> Vec<BigInt> {
    let mut order: Vec<usize> = (0..group.generators.len()).collect();
    order.sort_by_key(|&i| group.generators[i].degree.f);
    for i in order {
        let o = group.generators[i].order;
        if o == 0 {
            continue;
        }
        let (q, r) = v[i].div_mod_floor(&BigInt::from(o));
        v[i] = r;
        if let Some(rel) = group.relations.iter().find(|r| r.generator == i) {
            for (j, k) in &rel.value {
                v[*j] += &q * k;
            }
        }
    }
    v
}

/// The nonzero coordinates of lowest filtration.
fn leading(group: &HomotopyGroup, v: &[BigInt]) -> Option<(i64, Vec<(usize, BigInt)>)> {
    let f = (0..v.len()).filter(|&i| !v[i].is_zero()).map(|i| group.generators[i].degree.f).min()?;
    Some((f, (0..v.len()).filter(|&i| !v[i].is_zero() && group.generators[i].degree.f == f).map(|i| (i, v[i].clone())).collect()))
}

fn action(group: &HomotopyGroup, kind: ExtensionKind, i: usize) -> Option<&ActionValue> {
    group.actions.iter().find(|a| a.kind == kind && a.generator == i).and_then(|a| a.value.as_ref())
}

#[test]
fn two_equals_rho_eta_plus_h_on_every_generator() {
    let ss = l_window();
    let assembler = Assembler::with_shipped_ledger(&ss).unwrap();
    let mut checked = 0;
    for (s, w) in columns(&ss) {
        let group = match assembler.assemble(s, w) {
            Ok(g) => g,
            Err(EngineError::Usage(_)) => continue,
            Err(e) => panic!("({s},{w}): {e}"),
        };
        assert!(group.two_relation_holds());
        for i in 0..group.generators.len() {
            let mut twice = vec![BigInt::zero(); group.generators.len()];
            twice[i] = BigInt::from(2);
            let twice = normal_form(&group, twice);
            let mut sum = vec![BigInt::zero(); group.generators.len()];
            if let Some(h) = action(&group, ExtensionKind::H, i) {
                sum = coordinates(&group, h);
            }
            if let Some(eta) = action(&group, ExtensionKind::Eta, i) {
                if let Some(rho_eta) = assembler.act(ExtensionKind::Rho, eta.degree, &eta.chain, &eta.class).unwrap() {
                    if (rho_eta.degree.s, rho_eta.degree.w) == (s, w) {
                        for (a, b) in sum.iter_mut().zip(coordinates(&group, &rho_eta)) {
                            *a += b;
                        }
                    }
                }
            }
            let sum = normal_form(&group, sum);
            let (lt, ls) = (leading(&group, &twice), leading(&group, &sum));
            match (lt, ls) {
                (Some(a), Some(b)) if a.0 == b.0 => assert_eq!(a.1, b.1, "({s},{w}) generator {}", group.generators[i].label),
                (Some(a), Some(b)) => panic!("({s},{w}) {}: 2g leads in f={} but h g + rho eta g in f={}", group.generators[i].label, a.0, b.0),
                (None, None) => {}
                (a, b) => panic!("({s},{w}) {}: 2g = {a:?}, h g + rho eta g = {b:?}", group.generators[i].label),
            }
            checked += 1;
        }
    }
    assert!(checked > 100, "only {checked} generators");
}

#[test]
fn hidden_h_from_iota_four_v1_squared() {
    let ss = l_window();
    let assembler = Assembler::with_shipped_ledger(&ss).unwrap();
    let group = assembler.assemble(3, 2).unwrap();
    assert_eq!(group.invariants(), vec![8]);
    let labels: Vec<&str> = group.generators.iter().map(|g| g.label.as_str()).collect();
    assert_eq!(labels, ["i2v1^2", "h1^2.tauh1"]);
    let rel = group.relations.iter().find(|r| r.generator == 0).unwrap();
    assert_eq!(rel.multiple, 4);
    assert_eq!(rel.value, vec![(1, BigInt::from(1))]);
    assert_eq!(rel.h_part.as_ref().unwrap().degree, TriDegree::new(3, 3, 2));
}

#[test]
fn image_of_j_in_stem_seven() {
    let obj = Catalog::global().object("L_C").unwrap();
    let ss = SpectralSequence::run(obj, Window::new((6, 8), (0, 16)).with_weights(3, 5), None).unwrap();
    let group = Assembler::with_shipped_ledger(&ss).unwrap().assemble(7, 4).unwrap();
    assert!(group.describe().starts_with("pi_(7,4) = Z/16, generator iv1^4"));
}

#[test]
fn expanded_extensions_raise_filtration() {
    let ss = l_window();
    let assembler = Assembler::with_shipped_ledger(&ss).unwrap();
    let ledger = assembler.ledger();
    assert!(!ledger.extensions.is_empty());
    for r in &ledger.extensions {
        let x = &r.extension;
        x.check_degrees().unwrap();
        let (ds, dw) = x.kind.shift();
        assert_eq!((x.target_degree.s, x.target_degree.w), (x.source_degree.s + ds, x.source_degree.w + dw));
        assert!(x.target_degree.f > x.source_degree.f + x.kind.page_filtration(), "{}", x.label);
    }
}

#[test]
fn ko_ledger_has_the_rho_extension_on_two_v1_squared() {
    let ledger = Ledger::shipped("ko").unwrap().unwrap();
    let row = ledger.rows.iter().find(|r| r.source == "2v1^2" && r.kind == ExtensionKind::Rho).unwrap();
    assert_eq!(row.target, "tauh1^2.h1");
    assert_eq!(row.degree, TriDegree::new(3, 3, 1));
    for name in ["ko", "L", "L_C"] {
        let ledger = Ledger::shipped(name).unwrap().unwrap();
        assert_eq!(Ledger::parse(name, &ledger.to_text()).unwrap().rows, ledger.rows);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// A finite column has as many elements as its E_infinity summands together.
    #[test]
    fn finite_columns_have_the_order_of_their_associated_graded(s in 1i64..=20, c in 1i64..=10) {
        let obj = Catalog::global().object("L_C").unwrap();
        let w = s - c;
        let ss = SpectralSequence::run(obj, Window::new((s - 1, s + 1), (0, 24)).with_weights(w - 1, w + 1), None).unwrap();
        let group = match Assembler::with_shipped_ledger(&ss).unwrap().assemble(s, w) {
            Ok(g) => g,
            Err(EngineError::Usage(_)) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let graded: BTreeMap<usize, u64> = group.generators.iter().enumerate().map(|(i, g)| (i, g.order)).collect();
        if graded.values().all(|&o| o != 0) {
            let product: u64 = graded.values().product();
            prop_assert_eq!(group.group.torsion_order().to_u64().unwrap(), product);
            prop_assert_eq!(group.group.free_rank(), 0);
        } else {
            prop_assert_eq!(group.group.free_rank(), graded.values().filter(|&&o| o == 0).count());
        }
    }
}
