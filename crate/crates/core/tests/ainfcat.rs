use std::collections::BTreeMap;

use ainf_core::ainfcat::*;
use ainf_core::fixtures::{end_dg, fix_2obj, fix_p, zero_mu};
use ainf_core::grlin::{Field, GradedVectorSpace, SparseVec};
use proptest::prelude::*;

const Q: Field = Field::Rational;

fn unit(i: usize) -> SparseVec {
    SparseVec::unit(i, Q)
}

fn integral(n: usize) -> PairingIntegral {
    PairingIntegral {
        object: 0,
        degree: 2 * n as i64,
        reference: unit(n),
        value: Q.one(),
    }
}

#[test]
fn fix_p_satisfies_relations() {
    for n in 1..=3 {
        let r = check_ainf_relations(&fix_p(n, Q));
        assert!(r.passed(), "{:?}", r.failures);
        assert!(r.checked > 0);
    }
}

#[test]
fn zero_category_satisfies_relations() {
    let v = GradedVectorSpace::from_pairs([("x", 0), ("y", 3)]).unwrap();
    let cat = zero_mu(Q, vec!["A".into()], vec![vec![v]]);
    assert!(check_ainf_relations(&cat).passed());
}

#[test]
fn corrupted_product_fails_in_arity_three() {
    let mut cat = fix_p(2, Q);
    // degree check forbids h·h = e, so build the corrupted table by hand in degree 0
    let homs = vec![vec![cat.hom(0, 0).clone()]];
    assert!(cat.set_mu_named(&["V", "V", "V"], &["h", "h"], &[("e", 1)]).is_err());
    let mut bad = AInfCategory::new(Q, vec!["V".into()], homs, 2).unwrap();
    for (key, v) in cat.entries() {
        bad.set_mu(&key[..3], &key[3..], v.clone()).unwrap();
    }
    bad.set_mu_unchecked(&[0, 0, 0], &[1, 1], unit(0));
    let r = check_ainf_relations(&bad);
    let hit = r
        .failures
        .iter()
        .find(|f| f.arity == 3 && f.inputs == ["h2", "h", "h"])
        .expect("failure on (h², h, h)");
    assert_eq!(hit.residual, vec![("1".to_string(), "h2".to_string())]);
}

#[test]
fn opposite_is_involution() {
    let c = fix_p(1, Q);
    assert!(c.opposite().opposite().same_table(&c));
    let z = zero_mu(Q, vec!["A".into()], vec![vec![GradedVectorSpace::from_pairs([("x", 1)]).unwrap()]]);
    assert!(z.opposite().entries().next().is_none());
}

#[test]
fn opposite_products_on_fix_p2() {
    let op = fix_p(2, Q).opposite();
    assert!(check_ainf_relations(&op).passed());
    let h = Morphism::new(0, 0, unit(1));
    let h2 = Morphism::new(0, 0, unit(2));
    assert!(op.mu_apply(&[h.clone(), h2]).unwrap().vec.is_zero());
    assert_eq!(op.mu_apply(&[h.clone(), h]).unwrap().vec, unit(2));
}

#[test]
fn mu_apply_examples() {
    let c = fix_p(2, Q);
    let h = Morphism::new(0, 0, unit(1));
    assert_eq!(c.mu_apply(&[h.clone(), h.clone()]).unwrap().vec, unit(2));
    assert!(c.mu_apply(&[h.clone()]).unwrap().vec.is_zero());
    assert!(c.mu_apply(&[h.clone(), h.clone(), h]).unwrap().vec.is_zero());
    let d = fix_2obj(1, Q);
    let a = Morphism::new(0, 0, unit(1));
    let b = Morphism::new(1, 1, unit(0));
    assert!(d.mu_apply(&[b, a]).is_err());
}

#[test]
fn cohomology_ring_of_fix_p() {
    for n in 1..=3 {
        let c = fix_p(n, Q);
        let hc = cohomology_category(&c);
        let expected: BTreeMap<i64, usize> = (0..=n as i64).map(|k| (2 * k, 1)).collect();
        assert_eq!(hc.dims(0, 0), expected);
        assert!(hc.is_associative());
        assert_eq!(hc.unit(0), Some(&unit(0)));
    }
    let hc = cohomology_category(&fix_p(1, Q));
    assert!(hc.compose(0, 0, 0, &unit(1), &unit(1)).is_zero());
}

#[test]
fn acyclic_hom_has_zero_cohomology() {
    let v = GradedVectorSpace::from_pairs([("a", 0), ("b", 1)]).unwrap();
    let mut c = AInfCategory::new(Q, vec!["A".into()], vec![vec![v]], 2).unwrap();
    c.set_mu(&[0, 0], &[0], unit(1)).unwrap();
    assert!(cohomology_category(&c).dims(0, 0).is_empty());
}

#[test]
fn unitality() {
    for n in 1..=3 {
        assert!(check_strict_unital(&fix_p(n, Q)).unwrap().passed());
        assert!(check_c_unital(&fix_p(n, Q)).passed());
    }
    assert!(check_strict_unital(&fix_2obj(1, Q)).unwrap().passed());
    let z = zero_mu(Q, vec!["A".into()], vec![vec![GradedVectorSpace::from_pairs([("x", 0)]).unwrap()]]);
    assert!(!check_c_unital(&z).passed());
    assert!(check_strict_unital(&z).is_err());
    let mut bad = fix_p(1, Q);
    bad.set_strict_units_unchecked(vec![1]);
    let r = check_strict_unital(&bad).unwrap();
    assert!(r.violations.iter().any(|v| v == "μ²(e, e_V) ≠ e"));
}

#[test]
fn cp_classification() {
    for n in 1..=3 {
        let c = fix_p(n, Q);
        let v = classify_cp_object(&c, 0, &unit(1), n, &integral(n));
        assert!(v.holds, "{:?}", v.failures);
    }
    let c = fix_p(1, Q);
    let mut zero = integral(1);
    zero.value = Q.zero();
    let v = classify_cp_object(&c, 0, &unit(1), 1, &zero);
    assert!(v.failed("c") && !v.failed("a") && !v.failed("b"));
    let c2 = fix_p(2, Q);
    let v = classify_cp_object(&c2, 0, &unit(1), 1, &integral(1));
    assert!(v.failed("b"));
}

#[test]
fn cp_classification_with_orthogonal_object() {
    let c = fix_2obj(2, Q);
    let v = classify_cp_object(&c, 0, &unit(1), 2, &integral(2));
    assert!(v.holds, "{:?}", v.failures);
}

#[test]
fn spherical_classification() {
    let c = fix_p(1, Q);
    let i = PairingIntegral::candidates(&c, 0, 2).pop().unwrap();
    assert!(classify_spherical(&c, 0, 2, &i).holds);
    let c2 = fix_p(2, Q);
    assert!(!classify_spherical(&c2, 0, 2, &integral(1)).holds);
    let e_only = fix_p(0, Q);
    assert!(PairingIntegral::candidates(&e_only, 0, 2).is_empty());
    let i0 = PairingIntegral {
        object: 0,
        degree: 2,
        reference: SparseVec::new(),
        value: Q.one(),
    };
    assert!(!classify_spherical(&e_only, 0, 2, &i0).holds);
}

#[test]
fn end_algebra_is_an_ainf_algebra() {
    let c = end_dg(Q);
    let r = check_ainf_relations(&c);
    assert!(r.passed(), "{:?}", r.failures);
    let hc = cohomology_category(&c);
    assert_eq!(hc.dims(0, 0), BTreeMap::from([(0, 1)]));
    assert!(hc.unit(0).is_some());
}

proptest! {
    #[test]
    fn composition_ignores_coboundaries(b1 in proptest::collection::vec(-3i64..4, 9),
                                        b2 in proptest::collection::vec(-3i64..4, 9)) {
        let c = end_dg(Q);
        let deg: Vec<i64> = (0..9).map(|k| c.hom(0, 0).degree(k)).collect();
        let hc = cohomology_category(&c);
        let rep = hc.hom(0, 0).basis[0].1.clone();
        let perturb = |coeffs: &[i64]| {
            // add μ¹ of a random degree −1 element
            let b = SparseVec::from_entries(
                (0..9).filter(|&k| deg[k] == -1).map(|k| (k, Q.from_i64(coeffs[k]))),
            );
            let mut a = rep.clone();
            a.add(&c.mu(&[0, 0], &[&b]));
            a
        };
        let (a1, a2) = (perturb(&b1), perturb(&b2));
        let prod = c.mu(&[0, 0, 0], &[&a2, &a1]);
        let cls = hc.class_of(0, 0, &prod).unwrap();
        let base = hc.class_of(0, 0, &rep).unwrap();
        prop_assert_eq!(cls, hc.compose(0, 0, 0, &base, &base));
    }
}
