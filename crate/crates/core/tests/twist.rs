use std::collections::BTreeMap;
use std::sync::Arc;

use ainf_core::ainfcat::AInfCategory;
use ainf_core::amod::*;
use ainf_core::error::Error;
use ainf_core::fixtures::*;
use ainf_core::grlin::{Field, SparseVec};
use ainf_core::twcx::{tw_mu, tw_to_module, TwMorphism, TwistedComplex};
use ainf_core::twist::*;
use proptest::prelude::*;

const Q: Field = Field::Rational;

fn dims(m: &AInfModule) -> Vec<BTreeMap<i64, usize>> {
    (0..m.category().num_objects())
        .map(|x| module_cohomology(m, x).nonzero_dims())
        .collect()
}

fn one(pairs: &[(i64, usize)]) -> BTreeMap<i64, usize> {
    pairs.iter().copied().collect()
}

fn setup(cat: AInfCategory, n: usize) -> (Arc<AInfCategory>, CpTwistData) {
    let cat = Arc::new(cat);
    let d = CpTwistData::fixture(&cat, n).unwrap();
    (cat, d)
}

/// Yoneda modules of every object followed by `Cone(h)`.
fn test_modules(cat: &Arc<AInfCategory>) -> Vec<Arc<AInfModule>> {
    let mut out: Vec<_> = (0..cat.num_objects()).map(|x| Arc::new(yoneda_module(cat, x))).collect();
    out.push(Arc::new(tw_to_module(&w_h(cat))));
    out
}

fn test_complexes(cat: &Arc<AInfCategory>) -> Vec<Arc<TwistedComplex>> {
    let mut out: Vec<_> = (0..cat.num_objects())
        .map(|x| Arc::new(TwistedComplex::object(cat, x)))
        .collect();
    out.push(Arc::new(w_h(cat)));
    out
}

fn combo(basis: &[PreModuleHom], coeffs: &[i64], src: &Arc<AInfModule>, tgt: &Arc<AInfModule>, r: i64) -> PreModuleHom {
    let mut t = PreModuleHom::zero(src.clone(), tgt.clone(), r);
    for (b, &c) in basis.iter().zip(coeffs.iter().cycle()) {
        t = t.add(&b.scaled(&Q.from_i64(c))).unwrap();
    }
    t
}

#[test]
fn h_on_unit_tensor_unit() {
    let (cat, d) = setup(fix_p(1, Q), 1);
    let y = Arc::new(yoneda_module(&cat, 0));
    let h = build_h(&d, &y).unwrap();
    // h⊗e − e⊗h in the basis y·dim + v
    let expected = SparseVec::from_entries([(2, Q.from_i64(1)), (1, Q.from_i64(-1))]);
    assert_eq!(h.component(&[0], &[0]), expected);
}

#[test]
fn zero_h_gives_zero_map() {
    let (cat, d) = setup(fix_p(1, Q), 1);
    let raw = CpTwistData::raw(cat.clone(), 0, SparseVec::new(), 1, d.integral.clone());
    let y = Arc::new(yoneda_module(&cat, 0));
    assert!(build_h(&raw, &y).unwrap().is_zero());
}

#[test]
fn checked_constructor_rejects_zero_h() {
    let (cat, d) = setup(fix_p(1, Q), 1);
    let r = CpTwistData::new(cat, 0, SparseVec::new(), 1, d.integral);
    assert!(matches!(r, Err(Error::InvalidTwistData(_))));
}

#[test]
fn h_and_g_are_closed_everywhere() {
    for (cat, n) in [(fix_p(1, Q), 1), (fix_p(2, Q), 2), (fix_2obj(1, Q), 1)] {
        let (cat, d) = setup(cat, n);
        for y in test_modules(&cat) {
            let h = build_h(&d, &y).unwrap();
            assert_eq!(mu1_q_exhaustive(&h).describe_nonzero(), None);
            let hc = cone(&h).unwrap();
            let g = build_g(&d, &y, &hc.module).unwrap();
            assert_eq!(mu1_q_exhaustive(&g).describe_nonzero(), None);
        }
    }
}

#[test]
fn phi_module_is_a_module_and_matches_block_form() {
    for (cat, n) in [(fix_p(1, Q), 1), (fix_2obj(1, Q), 1)] {
        let (cat, d) = setup(cat, n);
        for y in test_modules(&cat) {
            let p = phi_module(&d, &y).unwrap();
            assert!(check_module_relations(&p.object).passed());
            let ex = explicit_phi_module(&d, &y, &p.object).unwrap();
            assert!(ex == *p.object);
        }
    }
}

#[test]
fn phi_module_cohomology() {
    let (cat, d) = setup(fix_p(1, Q), 1);
    let [yv, wh] = [Arc::new(yoneda_module(&cat, 0)), Arc::new(tw_to_module(&w_h(&cat)))];
    assert_eq!(dims(&phi_module(&d, &yv).unwrap().object), vec![one(&[(2, 1), (4, 1)])]);
    assert_eq!(dims(&phi_module(&d, &wh).unwrap().object), vec![one(&[(2, 1), (5, 1)])]);

    let (cat, d) = setup(fix_p(2, Q), 2);
    let yv = Arc::new(yoneda_module(&cat, 0));
    assert_eq!(dims(&phi_module(&d, &yv).unwrap().object), vec![one(&[(4, 1), (6, 1), (8, 1)])]);

    let (cat, d) = setup(fix_2obj(1, Q), 1);
    let yw = Arc::new(yoneda_module(&cat, 1));
    assert_eq!(dims(&phi_module(&d, &yw).unwrap().object), dims(&yw));
}

#[test]
fn phi_of_zero_module_is_zero() {
    let (cat, d) = setup(fix_p(1, Q), 1);
    let z = Arc::new(AInfModule::zero(cat.clone()));
    let p = phi_module(&d, &z).unwrap();
    assert!(p.object.spaces().iter().all(|s| s.dim() == 0));
}

#[test]
fn zero_morphism_maps_to_zero() {
    let (cat, d) = setup(fix_p(1, Q), 1);
    let y = Arc::new(yoneda_module(&cat, 0));
    let p = phi_module(&d, &y).unwrap();
    let t = PreModuleHom::zero(y.clone(), y.clone(), 1);
    assert!(phi_on_morphism(&d, &t, &p, &p).unwrap().is_zero());
    let s = spherical_twist_module(0, &d.integral, &y).unwrap();
    assert!(spherical_twist_morphism(&t, &s, &s).unwrap().is_zero());
}

#[test]
fn closed_quasi_iso_maps_to_closed_quasi_iso() {
    let (cat, d) = setup(fix_p(1, Q), 1);
    let wh = Arc::new(tw_to_module(&w_h(&cat)));
    let p = phi_module(&d, &wh).unwrap();
    let mut found = 0;
    for t in normalized_closed_homs(&wh, &wh, 0).unwrap() {
        if quasi_iso_check(&t).unwrap().is_quasi_iso {
            found += 1;
            let th = phi_on_morphism(&d, &t, &p, &p).unwrap();
            assert!(mu1_q_exhaustive(&th).is_zero());
            assert!(quasi_iso_check(&th).unwrap().is_quasi_iso);
        }
    }
    assert!(found > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn both_twists_are_dg_functors(i in 0usize..3, j in 0usize..3, k in 0usize..3,
                                   r1 in -3i64..4, r2 in -3i64..4,
                                   c1 in proptest::collection::vec(-2i64..3, 1..10),
                                   c2 in proptest::collection::vec(-2i64..3, 1..10)) {
        let (cat, d) = setup(fix_2obj(1, Q), 1);
        let mods = test_modules(&cat);
        let phis: Vec<_> = mods.iter().map(|m| phi_module(&d, m).unwrap()).collect();
        let ts: Vec<_> = mods.iter().map(|m| spherical_twist_module(0, &d.integral, m).unwrap()).collect();
        let t1 = combo(&hom_basis(&mods[i], &mods[j], r1, 3), &c1, &mods[i], &mods[j], r1);
        let t2 = combo(&hom_basis(&mods[j], &mods[k], r2, 3), &c2, &mods[j], &mods[k], r2);

        let phi = |t: &PreModuleHom, a: usize, b: usize| phi_on_morphism(&d, t, &phis[a], &phis[b]).unwrap();
        prop_assert!(mu1_q(&phi(&t1, i, j)).sub(&phi(&mu1_q(&t1), i, j)).unwrap().is_zero());
        let lhs = mu2_q(&phi(&t2, j, k), &phi(&t1, i, j)).unwrap();
        prop_assert!(lhs.sub(&phi(&mu2_q(&t2, &t1).unwrap(), i, k)).unwrap().is_zero());

        let sph = |t: &PreModuleHom, a: usize, b: usize| spherical_twist_morphism(t, &ts[a], &ts[b]).unwrap();
        prop_assert!(mu1_q(&sph(&t1, i, j)).sub(&sph(&mu1_q(&t1), i, j)).unwrap().is_zero());
        let lhs = mu2_q(&sph(&t2, j, k), &sph(&t1, i, j)).unwrap();
        prop_assert!(lhs.sub(&sph(&mu2_q(&t2, &t1).unwrap(), i, k)).unwrap().is_zero());
    }
}

#[test]
fn spherical_twist_of_yoneda_v() {
    let (cat, d) = setup(fix_p(1, Q), 1);
    let y = Arc::new(yoneda_module(&cat, 0));
    let t = spherical_twist_module(0, &d.integral, &y).unwrap();
    assert!(check_module_relations(&t.object).passed());
    assert_eq!(dims(&t.object), vec![one(&[(1, 1), (3, 1)])]);
}

#[test]
fn spherical_twist_fixes_invisible_module() {
    let (cat, d) = setup(fix_2obj(1, Q), 1);
    let yw = Arc::new(yoneda_module(&cat, 1));
    let t = spherical_twist_module(0, &d.integral, &yw).unwrap();
    assert_eq!(dims(&t.object), dims(&yw));
}

#[test]
fn t_squared_matches_twice_applied() {
    let (cat, d) = setup(fix_2obj(1, Q), 1);
    for y in test_modules(&cat) {
        let sq = t_squared_module(0, &d.integral, &y).unwrap();
        assert!(check_module_relations(&sq).passed());
        let once = spherical_twist_module(0, &d.integral, &y).unwrap();
        let twice = spherical_twist_module(0, &d.integral, &once.object).unwrap();
        assert!(same_up_to_relabeling(&sq, &twice.object));
        assert!(same_up_to_relabeling(&explicit_t_squared(0, &y).unwrap(), &twice.object));
    }
}

#[test]
fn alpha_is_a_natural_quasi_iso() {
    let (cat, d) = setup(fix_2obj(1, Q), 1);
    let mods = test_modules(&cat);
    let als: Vec<_> = mods.iter().map(|m| alpha_map(&d, m).unwrap()).collect();
    for a in &als {
        assert_eq!(mu1_q_exhaustive(&a.alpha).describe_nonzero(), None);
        assert!(quasi_iso_check(&a.alpha).unwrap().is_quasi_iso);
    }
    let mut checked = 0;
    for i in 0..mods.len() {
        for j in 0..mods.len() {
            for r in -2..=2 {
                for t in normalized_closed_homs(&mods[i], &mods[j], r).unwrap() {
                    let tt = spherical_twist_morphism(&t, &als[i].once, &als[j].once).unwrap();
                    let ttt = spherical_twist_morphism(&tt, &als[i].twice, &als[j].twice).unwrap();
                    let th = phi_on_morphism(&d, &t, &als[i].phi, &als[j].phi).unwrap();
                    let lhs = mu2_q(&als[j].alpha, &ttt).unwrap().scaled(&Q.sign(ttt.degree));
                    let rhs = mu2_q(&th, &als[i].alpha).unwrap().scaled(&Q.sign(als[i].alpha.degree));
                    assert!(lhs.sub(&rhs).unwrap().is_zero());
                    checked += 1;
                }
            }
        }
    }
    assert!(checked >= 20);
}

#[test]
fn alpha_needs_two_dimensional_endomorphisms() {
    let (cat, d) = setup(fix_p(2, Q), 2);
    let y = Arc::new(yoneda_module(&cat, 0));
    assert!(matches!(alpha_map(&d, &y), Err(Error::NotMinimal(_))));
}

#[test]
fn phi_tw_agrees_with_module_twist() {
    for (cat, n) in [(fix_p(1, Q), 1), (fix_p(2, Q), 2), (fix_2obj(1, Q), 1)] {
        let (cat, d) = setup(cat, n);
        for y in test_complexes(&cat) {
            let r = phi_tw(&d, &y).unwrap();
            assert!(r.object.validate().passed());
            let via_tw = tw_to_module(&r.object);
            let via_mod = phi_module(&d, &Arc::new(tw_to_module(&y))).unwrap().object;
            assert_eq!(dims(&via_tw), dims(&via_mod));
        }
    }
}

#[test]
fn phi_tw_of_cone_h() {
    let (cat, d) = setup(fix_p(1, Q), 1);
    let r = phi_tw(&d, &Arc::new(w_h(&cat))).unwrap();
    assert_eq!(dims(&tw_to_module(&r.object)), vec![one(&[(2, 1), (5, 1)])]);
}

#[test]
fn invisible_complex_gains_only_zero_summands() {
    let (cat, d) = setup(fix_2obj(1, Q), 1);
    let w = Arc::new(TwistedComplex::object(&cat, 1));
    assert_eq!(phi_tw(&d, &w).unwrap().object.sum().len(), 1);
    assert_eq!(phi_adjoint_tw(&d, &w).unwrap().object.sum().len(), 1);
}

#[test]
fn phi_tw_morphism_commutes_with_differential() {
    let (cat, d) = setup(fix_2obj(1, Q), 1);
    let ys = test_complexes(&cat);
    let phis: Vec<_> = ys.iter().map(|y| phi_tw(&d, y).unwrap()).collect();
    for i in 0..ys.len() {
        for j in 0..ys.len() {
            let sp = ainf_core::twcx::SumHom::new(&cat, ys[i].sum(), ys[j].sum());
            for k in 0..sp.dim() {
                let t = TwMorphism::new(ys[i].clone(), ys[j].clone(), sp.space.degree(k), SparseVec::unit(k, Q)).unwrap();
                let th = phi_tw_morphism(&d, &t, &phis[i], &phis[j]).unwrap();
                let dt = tw_mu(&[&t]).unwrap();
                let rhs = phi_tw_morphism(&d, &dt, &phis[i], &phis[j]).unwrap();
                assert_eq!(tw_mu(&[&th]).unwrap().vec, rhs.vec);
            }
            let z = TwMorphism::zero(ys[i].clone(), ys[j].clone(), 0);
            assert!(phi_tw_morphism(&d, &z, &phis[i], &phis[j]).unwrap().is_zero());
        }
    }
}

#[test]
fn adjoint_rank_identities() {
    for (cat, n) in [(fix_p(1, Q), 1), (fix_2obj(1, Q), 1)] {
        let (cat, d) = setup(cat, n);
        let ys = test_complexes(&cat);
        let phi: Vec<_> = ys.iter().map(|y| phi_tw(&d, y).unwrap().object).collect();
        let adj: Vec<_> = ys.iter().map(|y| phi_adjoint_tw(&d, y).unwrap().object).collect();
        for a in adj.iter() {
            assert!(a.validate().passed());
        }
        for i in 0..ys.len() {
            for j in 0..ys.len() {
                assert_eq!(tw_hom_dims(&adj[i], &ys[j]), tw_hom_dims(&ys[i], &phi[j]));
                assert_eq!(tw_hom_dims(&phi[i], &ys[j]), tw_hom_dims(&ys[i], &adj[j]));
            }
        }
    }
}

#[test]
fn phi_tw_is_fully_faithful_on_fixtures() {
    for (cat, n) in [(fix_p(1, Q), 1), (fix_p(2, Q), 2), (fix_2obj(1, Q), 1)] {
        let (cat, d) = setup(cat, n);
        let ys = test_complexes(&cat);
        let phi: Vec<_> = ys.iter().map(|y| phi_tw(&d, y).unwrap().object).collect();
        for i in 0..ys.len() {
            for j in 0..ys.len() {
                assert_eq!(tw_hom_dims(&phi[i], &phi[j]), tw_hom_dims(&ys[i], &ys[j]));
            }
        }
    }
}

#[test]
fn shift_certificate_p1() {
    let (_, d) = setup(fix_p(1, Q), 1);
    let r = verify_shift(&d).unwrap();
    assert!(r.passed(), "{:?} {:?}", r.failure, r.stages);
    assert_eq!(r.dims_phi, vec![one(&[(2, 1), (4, 1)])]);
    assert_eq!(r.stages.len(), 2);
    assert_eq!(r.survivor.as_deref(), Some("h[-2]𝒱"));
}

#[test]
fn shift_certificate_p2() {
    let (_, d) = setup(fix_p(2, Q), 2);
    let r = verify_shift(&d).unwrap();
    assert!(r.passed(), "{:?} {:?}", r.failure, r.stages);
    assert_eq!(r.dims_phi, vec![one(&[(4, 1), (6, 1), (8, 1)])]);
    assert_eq!(r.survivor, Some(format!("{}[-4]𝒱", power_name(2))));
}

#[test]
fn shift_certificate_two_objects() {
    let (_, d) = setup(fix_2obj(1, Q), 1);
    let r = verify_shift(&d).unwrap();
    assert!(r.passed(), "{:?} {:?}", r.failure, r.stages);
    assert_eq!(r.invisible.len(), 1);
    assert!(r.invisible[0].passed());
}

#[test]
fn spanning_class_audit_examples() {
    let cat = Arc::new(fix_2obj(1, Q));
    let yv = ("V".to_string(), Arc::new(yoneda_module(&cat, 0)));
    let yw = ("W".to_string(), Arc::new(yoneda_module(&cat, 1)));
    let catalog = vec![yv.clone(), yw.clone()];

    let r = spanning_class_audit(&[yv.clone(), yw], &catalog).unwrap();
    assert!(r.passed() && !r.degenerate);

    let r = spanning_class_audit(&[], &catalog).unwrap();
    assert!(r.degenerate && r.passed());

    let r = spanning_class_audit(&[yv], &catalog).unwrap();
    assert!(r.failures.contains(&SpanningFailure { module: "W".into(), clause: 1 }));
}
