use effseq_core::eta::{compare, comparison_targets, eta_position, Localizer};
use effseq_core::homotopy::{chain_degree, parse_label};
use effseq_core::objects::Catalog;
use effseq_core::ss::{SpectralSequence, Window};
use effseq_core::{EtaDegree, TriDegree};

fn commutes(name: &str, stems: (i64, i64), pages: u32) -> usize {
    let obj = Catalog::global().object(name).unwrap();
    let ss = SpectralSequence::run(obj.clone(), Window::new(stems, (0, 12)).with_coweights(0, 16), Some(pages)).unwrap();
    let target = Catalog::global().object(obj.eta_target().unwrap()).unwrap();
    let eta = SpectralSequence::run_on(target, comparison_targets(&ss, pages), None, Some(pages)).unwrap();
    let report = compare(&ss, &eta, pages).unwrap();
    assert!(report.passed(), "{name}: {:?}", report.mismatches.first());
    assert!(report.nontrivial > 0);
    report.checked
}

#[test]
fn localization_commutes_with_differentials() {
    for name in ["ko_C", "ko", "L_C", "L"] {
        assert!(commutes(name, (-2, 16), 4) > 0, "{name}");
    }
}

#[test]
fn eta_degrees_record_coweight_and_level() {
    let d = TriDegree::new(5, 3, 2);
    let e = eta_position(d);
    assert_eq!(e.coweight(), d.coweight());
    assert_eq!(e, EtaDegree::new(3, e.f - 3).representative());
    let h1 = TriDegree::new(1, 1, 1);
    assert_eq!(eta_position(d + h1), eta_position(d), "h1 is a unit after inverting eta");
}

#[test]
fn localizer_preserves_eta_degree() {
    let obj = Catalog::global().object("L").unwrap();
    let loc = Localizer::for_object(&obj).unwrap();
    let target = Catalog::global().object(obj.eta_target().unwrap()).unwrap();
    for label in ["tauh1", "rho.v1^2", "i2v1^2", "h1^2.tauh1", "iv1^4"] {
        let chain = parse_label(&obj, label).unwrap();
        let image = loc.chain(&chain).unwrap();
        if image.is_zero() {
            continue;
        }
        let d = chain_degree(&obj, &chain).unwrap();
        assert_eq!(chain_degree(&target, &image).unwrap(), eta_position(d), "{label}");
    }
}
