use std::collections::BTreeMap;

use proptest::prelude::*;

use effseq_core::algebra::{Element, Monomial, Style};
use effseq_core::objects::Catalog;
use effseq_core::TriDegree;

fn monomial(p: &effseq_core::algebra::Presentation, exps: &[u32]) -> Monomial {
    let map: BTreeMap<String, u32> = p
        .generators()
        .iter()
        .zip(exps)
        .filter(|(_, e)| **e > 0)
        .map(|(g, e)| (g.name.clone(), *e))
        .collect();
    p.monomial_from_map(&map).unwrap()
}

fn exps() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..4, 5)
}

proptest! {
    #[test]
    fn ko_multiplication_is_a_graded_commutative_ring(a in exps(), b in exps(), c in exps()) {
        let p = Catalog::global().presentation("ko").unwrap();
        let (x, y, z) = (monomial(&p, &a), monomial(&p, &b), monomial(&p, &c));
        let (ex, ey, ez) = (Element::monomial(x.clone()), Element::monomial(y.clone()), Element::monomial(z.clone()));
        let xy = p.multiply(&ex, &ey).unwrap();
        prop_assert_eq!(&xy, &p.multiply(&ey, &ex).unwrap());
        prop_assert_eq!(p.multiply(&xy, &ez).unwrap(), p.multiply(&ex, &p.multiply(&ey, &ez).unwrap()).unwrap());
        let sum = p.degree_of(&x) + p.degree_of(&y);
        for (m, _) in xy.terms() {
            prop_assert_eq!(p.degree_of(m), sum);
            prop_assert!(p.is_normal(m));
        }
    }

    #[test]
    fn formatting_round_trips(a in exps()) {
        let p = Catalog::global().presentation("ko").unwrap();
        let e = p.normal_form(&Element::monomial(monomial(&p, &a))).unwrap();
        let text = p.format_element(&e, Style::Ascii);
        prop_assert_eq!(p.parse_element(&text).unwrap(), e);
    }

    #[test]
    fn d1_is_a_derivation(a in exps(), b in exps()) {
        let p = Catalog::global().presentation("ko").unwrap();
        let (x, y) = (monomial(&p, &a), monomial(&p, &b));
        let left = p.leibniz_element(1, &p.multiply_monomials(&x, &y).unwrap()).unwrap();
        let dx = p.multiply(&p.leibniz(1, &x).unwrap(), &Element::monomial(y.clone())).unwrap();
        let dy = p.multiply(&Element::monomial(x.clone()), &p.leibniz(1, &y).unwrap()).unwrap();
        let right = p.add(&dx, &dy).unwrap();
        let reduce = |e: &Element| -> Vec<(Monomial, i64)> {
            e.terms()
                .filter_map(|(m, k)| {
                    let o = p.torsion_of(m) as i64;
                    let k = if o == 0 { k } else { k.rem_euclid(o) };
                    (k != 0).then(|| (m.clone(), k))
                })
                .collect()
        };
        prop_assert_eq!(reduce(&left), reduce(&right));
    }
}

#[test]
fn ko_c_relations() {
    let p = Catalog::global().presentation("ko_C").unwrap();
    let h1 = p.parse_monomial("h1").unwrap();
    assert_eq!(p.torsion_of(&h1), 2);
    assert_eq!(p.torsion_of(&p.parse_monomial("tau^3.v1^4").unwrap()), 0);
    let d1 = p.leibniz(1, &p.parse_monomial("v1^2").unwrap()).unwrap();
    assert_eq!(p.format_element(&d1, Style::Ascii), "tau.h1^3");
    assert_eq!(p.degree_of(&p.parse_monomial("v1^2").unwrap()), TriDegree::new(4, 0, 2));
}

#[test]
fn ko_tau_h1_squared_rewrites() {
    let p = Catalog::global().presentation("ko").unwrap();
    let square = p.parse_element("tauh1^2").unwrap();
    let normal = p.normal_form(&square).unwrap();
    assert_eq!(normal, p.parse_element("tau^2.h1^2 + rho^2.v1^2").unwrap());
    let piece = p.basis_at(TriDegree::new(2, 2, 0));
    let labels: Vec<String> = piece.monomials.iter().map(|m| p.format_monomial(m, Style::Ascii)).collect();
    assert!(!labels.contains(&"tauh1^2".to_string()));
}

#[test]
fn basis_orders_are_powers_of_two_or_free() {
    let p = Catalog::global().presentation("ko").unwrap();
    for s in -4..=12 {
        for f in 0..=8 {
            for w in -8..=8 {
                let piece = p.basis_at(TriDegree::new(s, f, w));
                assert!(piece.orders.iter().all(|&o| o == 0 || o == 2));
                assert_eq!(piece.free_rank() > 0, f == 0 && !piece.is_empty());
            }
        }
    }
}
