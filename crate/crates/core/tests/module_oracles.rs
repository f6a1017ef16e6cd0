//! Module-level quantities checked against raw enumeration.

mod common;

use std::sync::Arc;

use common::*;
use hallforge_core::element::integer;
use hallforge_core::rep::{aut_order, ext1_dim, hom_dim, subrepresentations};
use hallforge_core::*;

fn a2() -> Arc<Quiver> {
    Arc::new(Quiver::linear(2))
}

fn kronecker() -> Arc<Quiver> {
    Arc::new(Quiver::new(["1", "2"], [("a", "1", "2"), ("b", "1", "2")]).unwrap())
}

fn all_reps(q: &Arc<Quiver>, p: u32, max: &[u32]) -> Vec<Representation> {
    let f = field(p);
    DimVector(max.to_vec())
        .below()
        .iter()
        .flat_map(|d| Representation::enumerate_all(&f, q.clone(), d, &Budget::default()).unwrap())
        .collect()
}

#[test]
fn hom_dims_match_intertwiner_enumeration() {
    for (q, p, max) in [(a2(), 2, vec![2, 1]), (a2(), 3, vec![1, 1]), (kronecker(), 2, vec![1, 1])] {
        let reps = all_reps(&q, p, &max);
        for m in &reps {
            for n in &reps {
                let count = brute_hom_count(m, n);
                assert_eq!(hom_dim(m, n).unwrap(), log_q(count, p));
            }
        }
    }
}

#[test]
fn ext_dims_match_extension_enumeration() {
    for (q, p, max) in [(a2(), 2, vec![1, 1]), (a2(), 3, vec![1, 1]), (kronecker(), 2, vec![1, 1])] {
        let reps = all_reps(&q, p, &max);
        for m in &reps {
            for n in &reps {
                let classes = brute_ext_classes(m, n);
                assert_eq!(ext1_dim(m, n).unwrap(), log_q(classes, p), "{m:?} {n:?}");
            }
        }
    }
}

#[test]
fn worked_hom_and_ext_values() {
    let f = field(2);
    let s1 = Representation::simple(&f, a2(), 0);
    let s2 = Representation::simple(&f, a2(), 1);
    let cat = catalog(Quiver::linear(2), 2, &[1, 1]);
    let p = cat.representative(&cat.parse_label("(1,1)").unwrap()).unwrap();
    assert_eq!(log_q(brute_hom_count(&s1, &s2), 2), 0);
    // P has top S1 and socle S2
    assert_eq!(log_q(brute_hom_count(&p, &s2), 2), 0);
    assert_eq!(log_q(brute_hom_count(&p, &s1), 2), 1);
    assert_eq!(log_q(brute_hom_count(&s2, &p), 2), 1);
    assert_eq!(hom_dim(&p, &s2).unwrap(), 0);
    assert_eq!(hom_dim(&p, &s1).unwrap(), 1);
    assert_eq!(hom_dim(&s2, &p).unwrap(), 1);
    assert_eq!(log_q(brute_ext_classes(&s1, &s2), 2), 1);
    assert_eq!(log_q(brute_ext_classes(&s2, &s1), 2), 0);
    let euler = a2()
        .euler_form(&DimVector(vec![1, 0]).to_k0(), &DimVector(vec![0, 1]).to_k0())
        .unwrap();
    assert_eq!(euler, -1);
}

#[test]
fn aut_orders_match_unit_counts() {
    for (q, p, max) in [(a2(), 2, vec![2, 2]), (a2(), 3, vec![1, 1])] {
        for m in all_reps(&q, p, &max) {
            assert_eq!(aut_order(&m, &Budget::default()).unwrap(), brute_aut_count(&m) as u128);
        }
    }
    let a1 = Arc::new(Quiver::linear(1));
    let k2 = Representation::with_zero_maps(&field(2), a1, DimVector(vec![2]));
    assert_eq!(brute_aut_count(&k2), 6);
    for p in [2, 3, 5] {
        let s = Representation::simple(&field(p), a2(), 0);
        assert_eq!(aut_order(&s, &Budget::default()).unwrap(), (p - 1) as u128);
    }
}

#[test]
fn subrepresentation_counts_match_span_scan() {
    let cat = catalog(Quiver::linear(2), 2, &[2, 2]);
    for label in cat.all_classes() {
        let r = cat.representative(&label).unwrap();
        for d in label.dims.below() {
            let lib = subrepresentations(&r, &d, &Budget::default()).unwrap().len();
            assert_eq!(lib, brute_subrep_count(&r, &d), "{} {d:?}", cat.render(&label));
        }
    }
    let p = cat.representative(&cat.parse_label("(1,1)").unwrap()).unwrap();
    assert_eq!(brute_subrep_count(&p, &DimVector(vec![0, 1])), 1);
    assert_eq!(brute_subrep_count(&p, &DimVector(vec![1, 0])), 0);
}

/// `Σ_{M,N} g^R_{M,N}` over `dim N = e` counts all subrepresentations of dimension `e`.
#[test]
fn hall_numbers_partition_subrepresentations() {
    for p in [2, 3] {
        let cat = catalog(Quiver::linear(2), p, &[2, 1]);
        let h = HallAlgebra::new(cat.clone());
        let labels = cat.all_classes();
        for r in &labels {
            let rep = cat.representative(r).unwrap();
            for e in r.dims.below() {
                let mut total = 0u128;
                for m in &labels {
                    for n in labels.iter().filter(|n| n.dims == e) {
                        total += h.hall_number_subcount(r, m, n).unwrap();
                    }
                }
                assert_eq!(total, brute_subrep_count(&rep, &e) as u128);
            }
        }
    }
}

#[test]
fn catalog_counts() {
    let a2c = catalog(Quiver::linear(2), 2, &[1, 1]);
    assert_eq!(a2c.members().len(), 3);
    let per_dim: Vec<usize> = DimVector(vec![1, 1])
        .below()
        .iter()
        .map(|d| a2c.classes_of_dim(d).unwrap().len())
        .collect();
    let mut sorted = per_dim.clone();
    sorted.sort();
    assert_eq!(sorted, vec![1, 1, 1, 2]);
    assert_eq!(a2c.classes_of_dim(&DimVector(vec![1, 1])).unwrap().len(), 2);
    assert_eq!(catalog(Quiver::linear(3), 2, &[1, 1, 1]).members().len(), 6);
    let a1 = catalog(Quiver::linear(1), 2, &[2]);
    assert_eq!(a1.all_classes().len(), 3);
    let p = a2c.representative(&a2c.parse_label("(1,1)").unwrap()).unwrap();
    let split = a2c.representative(&a2c.parse_label("(1,0)+(0,1)").unwrap()).unwrap();
    assert!(!a2c.is_isomorphic(&p, &split).unwrap());
}

#[test]
fn worked_hall_numbers() {
    let a1 = catalog(Quiver::linear(1), 2, &[3]);
    let h1 = HallAlgebra::new(a1.clone());
    let k = a1.parse_label("(1)").unwrap();
    let k2 = a1.parse_label("2(1)").unwrap();
    let k3 = a1.parse_label("3(1)").unwrap();
    // lines in F_2^2
    assert_eq!(h1.hall_number_subcount(&k2, &k, &k).unwrap(), 3);
    assert_eq!(h1.hall_number_extcount(&k2, &k, &k).unwrap(), 3);
    assert_eq!(h1.product_basis(&k, &k).unwrap(), HallElement::from_terms(2, h1.digest(), [(k2.clone(), integer(3))]));
    // complete flags in F_2^3: (q^2+q+1)(q+1)
    let flags = h1.multi_product_filtration(&[k.clone(), k.clone(), k.clone()]).unwrap();
    assert_eq!(flags, HallElement::from_terms(2, h1.digest(), [(k3, integer(7 * 3))]));

    let a2c = catalog(Quiver::linear(2), 2, &[1, 1]);
    let h2 = HallAlgebra::new(a2c.clone());
    let l = |s: &str| a2c.parse_label(s).unwrap();
    assert_eq!(h2.hall_number_subcount(&l("(1,1)"), &l("(1,0)"), &l("(0,1)")).unwrap(), 1);
    assert_eq!(h2.hall_number_extcount(&l("(1,0)+(0,1)"), &l("(0,1)"), &l("(1,0)")).unwrap(), 1);
    let s1s2 = h2.product_basis(&l("(1,0)"), &l("(0,1)")).unwrap();
    assert_eq!(s1s2, h2.basis(&l("(1,1)")).add(&h2.basis(&l("(1,0)+(0,1)"))).unwrap());
    assert_eq!(h2.product_basis(&l("(0,1)"), &l("(1,0)")).unwrap(), h2.basis(&l("(1,0)+(0,1)")));
    assert_eq!(
        h2.multi_product_filtration(&[l("(1,0)"), l("(0,1)")]).unwrap(),
        s1s2
    );
}

#[test]
fn structure_table_rows() {
    let cat = catalog(Quiver::linear(2), 2, &[1, 1]);
    let h = HallAlgebra::new(cat);
    let rows = h.structure_table(&DimVector(vec![1, 1])).unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows.iter().map(|r| r.g).sum::<u128>(), 3);
}
