use num_bigint::BigInt;

use effseq_core::algebra::Style;
use effseq_core::cell::Part;
use effseq_core::fiber::{iota_order, psi_split, v2, val_3n_minus_1};
use effseq_core::objects::Catalog;
use effseq_core::TriDegree;

fn brute_v2_3n_minus_1(n: u32) -> u32 {
    let x = BigInt::from(3).pow(n) - 1u32;
    x.trailing_zeros().unwrap() as u32
}

#[test]
fn valuation_closed_form() {
    for n in 1..=200i64 {
        let expected = if n % 2 == 1 { 1 } else { v2(n).unwrap() + 2 };
        assert_eq!(val_3n_minus_1(n).unwrap(), expected);
        assert_eq!(expected, brute_v2_3n_minus_1(n as u32));
    }
    assert!(val_3n_minus_1(0).is_err());
    assert!(v2(0).is_err());
}

#[test]
fn iota_orders() {
    assert_eq!(iota_order(0).unwrap(), 0);
    for (k, order) in [(1, 8), (2, 16), (3, 8), (4, 32), (6, 16), (8, 64)] {
        assert_eq!(iota_order(k).unwrap(), order);
        assert_eq!(1u64 << brute_v2_3n_minus_1(2 * k), order);
    }
}

#[test]
fn psi_three_is_diagonal_with_eigenvalue_nine_to_the_g() {
    let p = Catalog::global().presentation("ko").unwrap();
    let v = p.index_of("v1_2").unwrap();
    for s in -4..=20 {
        for f in 0..=6 {
            for w in -8..=12 {
                for m in p.basis_at(TriDegree::new(s, f, w)).monomials {
                    let image = p.psi3_monomial(&m).unwrap();
                    assert_eq!(image.len(), 1);
                    assert_eq!(image[0].0, m);
                    assert_eq!(image[0].1, BigInt::from(9).pow(m.exponent(v)));
                }
            }
        }
    }
}

#[test]
fn kernel_and_cokernel_of_psi_minus_one() {
    let p = Catalog::global().presentation("ko_C").unwrap();
    let at_zero = psi_split(&p, TriDegree::new(0, 0, 0)).unwrap();
    assert_eq!(at_zero.kernel.iter().map(|x| x.1).collect::<Vec<_>>(), vec![0]);
    assert_eq!(at_zero.cokernel.iter().map(|x| x.1).collect::<Vec<_>>(), vec![0]);
    let v1_4 = psi_split(&p, TriDegree::new(8, 0, 4)).unwrap();
    assert!(v1_4.kernel.is_empty());
    assert_eq!(v1_4.cokernel.iter().map(|x| x.1).collect::<Vec<_>>(), vec![16]);
    let h1 = psi_split(&p, TriDegree::new(1, 1, 1)).unwrap();
    assert_eq!((h1.kernel.len(), h1.cokernel.len()), (1, 1));
}

#[test]
fn table_d1_agrees_with_the_direct_formula() {
    for name in ["L", "L_C"] {
        let obj = Catalog::global().object(name).unwrap();
        let model = obj.fiber_model().unwrap().clone();
        let mut checked = 0;
        for s in -3..=28 {
            for f in 0..=10 {
                for w in -10..=16 {
                    for (c, _) in model.cells_at(TriDegree::new(s, f, w)).unwrap().iter() {
                        let direct = model.d1(c).unwrap();
                        let table = model.d1_via_table(c).unwrap();
                        assert_eq!(direct, table, "d1 of {} in {name}", c.format(model.base(), Style::Ascii));
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 1000, "{name}: only {checked} cells");
    }
}

#[test]
fn iota_generators_sit_in_the_image_part() {
    let obj = Catalog::global().object("L").unwrap();
    let model = obj.fiber_model().unwrap().clone();
    for g in model.generators(8).unwrap() {
        assert_eq!(g.part == Part::Cokernel, g.family == "iota_v1", "{}", g.name);
        assert_eq!(model.degree(&g.cell), g.degree);
        if g.family == "iota_v1" && g.k > 0 {
            assert_eq!(g.order, iota_order(g.k).unwrap());
        }
    }
}
