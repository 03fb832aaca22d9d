use num_traits::Zero;

use effseq_core::homotopy::{chain_degree, einf_class, parse_label, Class};
use effseq_core::linalg::reduce;
use effseq_core::objects::Catalog;
use effseq_core::ss::{dump_pages, SpectralSequence, Window};
use effseq_core::TriDegree;

fn run(name: &str, window: Window) -> SpectralSequence {
    SpectralSequence::run(Catalog::global().object(name).unwrap(), window, None).unwrap()
}

fn assert_squares_vanish(ss: &SpectralSequence) -> usize {
    let mut composed = 0;
    for page in &ss.pages {
        let shift = TriDegree::differential_shift(page.r);
        for (d, first) in &page.differentials {
            first.check_well_defined().unwrap();
            let Some(second) = page.differentials.get(&(*d + shift)) else { continue };
            let both = second.compose(first);
            for i in 0..both.matrix.rows() {
                for &v in both.matrix.row(i).iter().collect::<Vec<_>>().iter() {
                    assert!(reduce(v, both.target_orders[i]).is_zero(), "d{} d{} != 0 out of {d}", page.r, page.r);
                }
            }
            composed += 1;
        }
    }
    composed
}

#[test]
fn differentials_square_to_zero() {
    let ko = run("ko", Window::new((-4, 24), (0, 16)).with_coweights(0, 24));
    let l = run("L", Window::new((-2, 24), (0, 16)).with_coweights(0, 24));
    assert!(assert_squares_vanish(&ko) > 0);
    assert!(assert_squares_vanish(&l) > 0);
}

#[test]
fn differentials_move_by_the_shift() {
    assert_eq!(TriDegree::differential_shift(1), TriDegree::new(-1, 3, 0));
    assert_eq!(TriDegree::differential_shift(3), TriDegree::new(-1, 7, 0));
    let l = run("L", Window::new((-2, 16), (0, 12)).with_coweights(0, 16));
    for page in &l.pages {
        for (d, m) in &page.differentials {
            let target = *d + TriDegree::differential_shift(page.r);
            assert_eq!(m.target_orders, page.group(target).map(|g| g.orders()).unwrap_or_default(), "d{} out of {d}", page.r);
            assert_eq!((target.w, target.coweight()), (d.w, d.coweight() - 1));
        }
    }
}

#[test]
fn ko_c_has_no_differentials_past_d1() {
    let ss = run("ko_C", Window::new((0, 24), (0, 16)).with_coweights(0, 16));
    assert_eq!(ss.pages.len(), 2);
    let last = ss.infinity().unwrap();
    let g = last.group(TriDegree::new(8, 0, 4)).unwrap();
    assert_eq!((g.summands[0].label.as_str(), g.summands[0].order), ("v1^4", 0));
    assert_eq!(last.group(TriDegree::new(4, 4, 4)).unwrap().summands[0].label, "h1^4");
    assert!(last.group(TriDegree::new(3, 3, 2)).is_none_or(|g| g.is_zero()));
}

#[test]
fn iota_v1_four_in_l_c_is_cyclic_of_order_sixteen() {
    let obj = Catalog::global().object("L_C").unwrap();
    let chain = parse_label(&obj, "iv1^4").unwrap();
    let d = chain_degree(&obj, &chain).unwrap();
    assert_eq!(d, TriDegree::new(7, 1, 4));
    let ss = SpectralSequence::run_on(obj, vec![d], None, None).unwrap();
    assert!(matches!(einf_class(&ss, d, &chain).unwrap(), Class::Nonzero(_)));
    assert_eq!(ss.infinity().unwrap().group(d).unwrap().orders(), vec![16]);
}

#[test]
fn runs_are_deterministic() {
    let w = Window::new((-2, 20), (0, 12)).with_coweights(0, 12);
    let a = dump_pages(&run("L", w), 1, 10);
    let b = dump_pages(&run("L", w), 1, 10);
    assert_eq!(a, b);
    assert!(!a.is_empty());
}

#[test]
fn windows_need_a_weight_bound() {
    let obj = Catalog::global().object("ko").unwrap();
    assert!(SpectralSequence::run(obj, Window::new((0, 4), (0, 4)), None).is_err());
}
