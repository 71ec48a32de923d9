use std::sync::Arc;

use ainf_core::ainfcat::{check_ainf_relations, AInfCategory};
use ainf_core::amod::{
    check_module_relations, cone, evaluation, module_cohomology, tensor_module, yoneda_module, AInfModule,
};
use ainf_core::fixtures::{end_dg, end_dg_unital, fix_2obj, fix_p, w_h};
use ainf_core::grlin::{ChainComplex, Field, GradedLinearMap, GradedVectorSpace, SparseVec};
use ainf_core::twcx::*;
use ainf_core::Error;
use proptest::prelude::*;
use std::collections::BTreeMap;

fn part(src: usize, p: usize, tgt: usize, q: usize, x: usize) -> Part {
    Part { src, p, tgt, q, x }
}

fn obj(cat: &Arc<AInfCategory>, x: usize) -> Arc<TwistedComplex> {
    Arc::new(TwistedComplex::object(cat, x))
}

/// `𝕂⟨g⟩ ⊗ X` with zero differential.
fn gen_at(cat: &Arc<AInfCategory>, x: usize, g: i64) -> Arc<TwistedComplex> {
    let sum = SumObject::new(vec![Summand {
        mult: GradedVectorSpace::from_pairs([("g", g)]).unwrap(),
        object: x,
    }]);
    Arc::new(TwistedComplex::new(cat.clone(), format!("g{g}"), sum, SparseVec::new(), vec![0]).unwrap())
}

fn sorted(m: &AInfModule) -> Vec<(Vec<usize>, SparseVec)> {
    m.table().sorted().into_iter().map(|(k, v)| (k.clone(), v.clone())).collect()
}

fn acyclic_pair(f: Field) -> ChainComplex {
    let z = GradedVectorSpace::from_pairs([("a", 0), ("b", 1)]).unwrap();
    let d = GradedLinearMap::new(z.clone(), z, 1, vec![SparseVec::unit(1, f), SparseVec::new()]).unwrap();
    ChainComplex::new(d).unwrap()
}

/// Closed degree 0 maps over the unital dg fixture: `E01: V → V` and `E20: S^{−1}V → V`.
fn dg_maps(cat: &Arc<AInfCategory>) -> Vec<TwMorphism> {
    let f = cat.field();
    let v = obj(cat, 0);
    let sv = Arc::new(shift_tw(-1, &v).unwrap());
    vec![
        TwMorphism::from_parts(v.clone(), v.clone(), 0, &[(part(0, 0, 0, 0, 1), f.one())]).unwrap(),
        TwMorphism::from_parts(sv, v, 0, &[(part(0, 0, 0, 0, 6), f.one())]).unwrap(),
    ]
}

#[test]
fn sigma_mu_on_single_summands_is_mu() {
    let f = Field::Rational;
    let cat = Arc::new(fix_p(2, f));
    let v = obj(&cat, 0);
    let h = TwMorphism::new(v.clone(), v.clone(), 2, SparseVec::unit(1, f)).unwrap();
    let out = sigma_mu(&[&h, &h]).unwrap();
    assert_eq!(out.vec, SparseVec::unit(2, f));
    assert_eq!(out.degree, 4);
    assert_eq!(out.space.space.name(2), "0.1<0.1|h2");
}

#[test]
fn triangle_sign_on_two_inputs() {
    // |α₁| = 1 and |x₂| = 2, so ◁ = 1·(2 − 1) flips the product
    let f = Field::Rational;
    let cat = Arc::new(fix_p(1, f));
    let x0 = gen_at(&cat, 0, 0);
    let x1 = gen_at(&cat, 0, 1);
    let a1 = TwMorphism::from_parts(x0.clone(), x1.clone(), 1, &[(part(0, 0, 0, 0, 0), f.one())]).unwrap();
    let a2 = TwMorphism::from_parts(x1.clone(), x1.clone(), 2, &[(part(0, 0, 0, 0, 1), f.one())]).unwrap();
    let out = sigma_mu(&[&a2, &a1]).unwrap();
    assert_eq!(out.entries(), vec![(part(0, 0, 0, 0, 1), f.from_i64(-1))]);
    // with |α₁| = 0 there is no sign
    let b1 = TwMorphism::from_parts(x1.clone(), x1.clone(), 0, &[(part(0, 0, 0, 0, 0), f.one())]).unwrap();
    let out = sigma_mu(&[&a2, &b1]).unwrap();
    assert_eq!(out.entries(), vec![(part(0, 0, 0, 0, 1), f.one())]);
}

#[test]
fn non_composable_rejected() {
    let f = Field::Rational;
    let cat = Arc::new(fix_2obj(1, f));
    let v = obj(&cat, 0);
    let w = obj(&cat, 1);
    let a = TwMorphism::zero(v.clone(), v.clone(), 0);
    let b = TwMorphism::zero(w.clone(), w, 0);
    assert!(matches!(tw_mu(&[&b, &a]), Err(Error::NotComposable(_))));
}

#[test]
fn validation_of_fixture_complexes() {
    let f = Field::Rational;
    let cat = Arc::new(fix_p(1, f));
    assert!(TwistedComplex::object(&cat, 0).validate().passed());
    let c = w_h(&cat);
    assert!(c.validate().passed());
    assert_eq!(c.sum().mult(0).degree(0), 1);
    assert_eq!(c.sum().mult(1).degree(0), 0);
    assert_eq!(c.delta_entries(), vec![(part(0, 0, 1, 0, 1), f.from_i64(-1))]);
    // same δ against the reversed filtration is upper-triangular
    let up = TwistedComplex::new(cat.clone(), "up", c.sum().clone(), c.delta().clone(), vec![1, 0]).unwrap();
    let report = up.validate();
    assert!(!report.triangular.is_empty());
    assert!(report.maurer_cartan.is_empty());
}

#[test]
fn maurer_cartan_failure_reports_first_term() {
    // δ = h from the first copy of V to the second, with μ¹ ≠ 0 on the dg fixture:
    // μ¹(E10) ≠ 0, so δ = E10 between two copies fails the Maurer–Cartan equation
    let f = Field::Rational;
    let cat = Arc::new(end_dg_unital(f));
    let sum = SumObject::new(vec![
        Summand { mult: GradedVectorSpace::from_pairs([("a", -1)]).unwrap(), object: 0 },
        Summand { mult: GradedVectorSpace::from_pairs([("b", 0)]).unwrap(), object: 0 },
    ]);
    let x = TwistedComplex::from_parts(cat.clone(), "bad", sum, &[(part(0, 0, 1, 0, 3), f.one())], vec![0, 1]).unwrap();
    let report = x.validate();
    assert!(report.triangular.is_empty());
    assert!(!report.passed());
    let msg = report.first_failure().unwrap();
    assert!(msg.contains("Maurer–Cartan"), "{msg}");
}

#[test]
fn tw_mu_with_zero_differentials_is_sigma_mu() {
    let f = Field::Rational;
    let cat = Arc::new(end_dg_unital(f));
    let v = obj(&cat, 0);
    for k in 0..9 {
        for l in 0..9 {
            let a = TwMorphism::new(v.clone(), v.clone(), cat.hom(0, 0).degree(k), SparseVec::unit(k, f)).unwrap();
            let b = TwMorphism::new(v.clone(), v.clone(), cat.hom(0, 0).degree(l), SparseVec::unit(l, f)).unwrap();
            assert_eq!(tw_mu(&[&a, &b]).unwrap().vec, sigma_mu(&[&a, &b]).unwrap().vec);
            let direct = cat.mu(&[0, 0, 0], &[&SparseVec::unit(k, f), &SparseVec::unit(l, f)]);
            assert_eq!(tw_mu(&[&a, &b]).unwrap().vec, direct);
        }
    }
}

#[test]
fn mu1_into_cone_picks_up_one_insertion() {
    let f = Field::Rational;
    let cat = Arc::new(fix_p(1, f));
    let c = Arc::new(w_h(&cat));
    let v = obj(&cat, 0);
    // t = generator of V into the degree 1 summand, along e
    let t = TwMorphism::from_parts(v, c.clone(), 1, &[(part(0, 0, 0, 0, 0), f.one())]).unwrap();
    let delta = TwMorphism::new(c.clone(), c.clone(), 1, c.delta().clone()).unwrap();
    let expected = sigma_mu(&[&delta, &t]).unwrap();
    let got = tw_mu(&[&t]).unwrap();
    assert!(!got.is_zero());
    assert_eq!(got.vec, expected.vec);
    // ◁ = |α_t|·(|h| − 1) = 1, so μ²(−h, e) enters with a second minus sign
    assert_eq!(got.entries(), vec![(part(0, 0, 1, 0, 1), f.one())]);
}

#[test]
fn inclusion_into_cone_of_zero_is_closed() {
    let f = Field::Rational;
    let cat = Arc::new(fix_p(1, f));
    let v = obj(&cat, 0);
    let zero = TwMorphism::zero(v.clone(), v.clone(), 0);
    let c = Arc::new(cone_tw(&zero).unwrap());
    assert!(c.delta().is_zero());
    assert!(c.validate().passed());
    let inc = TwMorphism::from_parts(v, c, 0, &[(part(0, 0, 1, 0, 0), f.one())]).unwrap();
    assert!(tw_mu(&[&inc]).unwrap().is_zero());
}

#[test]
fn cone_h_matches_module_cone() {
    let f = Field::Rational;
    let cat = Arc::new(fix_p(1, f));
    let c = w_h(&cat);
    let m = tw_to_module(&c);
    assert!(check_module_relations(&m).passed());
    assert_eq!(module_cohomology(&m, 0).nonzero_dims(), BTreeMap::from([(0, 1), (3, 1)]));
}

#[test]
fn cone_agrees_with_module_cone_exactly() {
    let f = Field::Rational;
    let pcat = Arc::new(fix_p(1, f));
    let v = obj(&pcat, 0);
    let s = Arc::new(shift_tw(-2, &v).unwrap());
    let mut maps = vec![TwMorphism::from_parts(s, v, 0, &[(part(0, 0, 0, 0, 1), f.one())]).unwrap()];
    maps.extend(dg_maps(&Arc::new(end_dg_unital(f))));
    for t in maps {
        let c = cone_tw(&t).unwrap();
        assert!(c.validate().passed());
        let mx = Arc::new(tw_to_module(&t.source));
        let my = Arc::new(tw_to_module(&t.target));
        let lt = tw_to_module_mor(&t, &mx, &my).unwrap();
        let mc = cone(&lt).unwrap().module;
        let tm = tw_to_module(&c);
        assert_eq!(tm.spaces().len(), mc.spaces().len());
        for (a, b) in tm.spaces().iter().zip(mc.spaces()) {
            assert_eq!(a.dims_by_degree(), b.dims_by_degree());
        }
        assert_eq!(sorted(&tm), sorted(&mc));
    }
}

#[test]
fn cone_of_identity_is_acyclic() {
    let f = Field::Rational;
    let cat = Arc::new(end_dg_unital(f));
    let v = obj(&cat, 0);
    let id = TwMorphism::from_parts(v.clone(), v, 0, &[(part(0, 0, 0, 0, 0), f.one())]).unwrap();
    let c = cone_tw(&id).unwrap();
    assert!(c.validate().passed());
    assert_eq!(module_cohomology(&tw_to_module(&c), 0).total_dim(), 0);
}

#[test]
fn cone_rejects_non_closed_and_wrong_degree() {
    let f = Field::Rational;
    let cat = Arc::new(end_dg_unital(f));
    let v = obj(&cat, 0);
    // μ¹(E10) = E20 ≠ 0
    let t = TwMorphism::from_parts(v.clone(), v.clone(), 0, &[(part(0, 0, 0, 0, 3), f.one())]).unwrap();
    assert!(matches!(cone_tw(&t), Err(Error::NotClosed(_))));
    let u = TwMorphism::from_parts(v.clone(), v, 1, &[(part(0, 0, 0, 0, 6), f.one())]).unwrap();
    assert!(matches!(cone_tw(&u), Err(Error::Degree(_))));
}

#[test]
fn tensor_with_ground_field_is_unchanged() {
    let f = Field::Rational;
    let cat = Arc::new(fix_p(1, f));
    let c = w_h(&cat);
    let k = ChainComplex::with_zero_differential(GradedVectorSpace::from_pairs([("1", 0)]).unwrap());
    let t = tensor_tw(&k, &c).unwrap();
    assert!(t.validate().passed());
    assert_eq!(t.delta(), c.delta());
    assert_eq!(sorted(&tw_to_module(&t)), sorted(&tw_to_module(&c)));
}

#[test]
fn shift_places_generator_in_degree_2n() {
    let f = Field::Rational;
    for n in 1..=3 {
        let cat = Arc::new(fix_p(n, f));
        let v = TwistedComplex::object(&cat, 0);
        let s = shift_tw(-2 * n as i64, &v).unwrap();
        assert_eq!(s.sum().mult(0).degree(0), 2 * n as i64);
        let m = tw_to_module(&s);
        let base = module_cohomology(&tw_to_module(&v), 0).nonzero_dims();
        let shifted: BTreeMap<i64, usize> = base.iter().map(|(k, d)| (k + 2 * n as i64, *d)).collect();
        assert_eq!(module_cohomology(&m, 0).nonzero_dims(), shifted);
    }
}

#[test]
fn tensor_with_acyclic_complex_is_acyclic() {
    let f = Field::Rational;
    let pcat = Arc::new(fix_p(1, f));
    let dcat = Arc::new(end_dg_unital(f));
    for x in [w_h(&pcat), cone_tw(&dg_maps(&dcat)[1]).unwrap()] {
        let t = tensor_tw(&acyclic_pair(f), &x).unwrap();
        assert!(t.validate().passed());
        let m = tw_to_module(&t);
        assert!(check_module_relations(&m).passed());
        assert_eq!(module_cohomology(&m, 0).total_dim(), 0);
    }
}

#[test]
fn tensor_matches_module_tensor_on_single_summands() {
    let f = Field::Rational;
    let cat = Arc::new(end_dg_unital(f));
    let v = TwistedComplex::object(&cat, 0);
    let z = acyclic_pair(f);
    let t = tensor_tw(&z, &v).unwrap();
    let ym = yoneda_module(&cat, 0);
    assert_eq!(sorted(&tw_to_module(&t)), sorted(&tensor_module(&z, &ym)));
}

#[test]
fn constructions_need_strict_units() {
    let f = Field::Rational;
    let cat = Arc::new(end_dg(f));
    let v = Arc::new(TwistedComplex::object(&cat, 0));
    assert!(matches!(shift_tw(1, &v), Err(Error::NotStrictlyUnital(_))));
    assert!(matches!(tensor_tw(&acyclic_pair(f), &v), Err(Error::NotStrictlyUnital(_))));
    assert!(matches!(ev_tw(0, &v), Err(Error::NotStrictlyUnital(_))));
}

#[test]
fn yoneda_object_gives_yoneda_module() {
    let f = Field::Rational;
    for cat in [fix_p(2, f), end_dg_unital(f), fix_2obj(1, f)] {
        let cat = Arc::new(cat);
        for x in 0..cat.num_objects() {
            let m = tw_to_module(&TwistedComplex::object(&cat, x));
            assert_eq!(sorted(&m), sorted(&yoneda_module(&cat, x)));
        }
    }
}

#[test]
fn zero_differential_sum_is_direct_sum() {
    let f = Field::Rational;
    let cat = Arc::new(fix_2obj(1, f));
    let one = || GradedVectorSpace::from_pairs([("1", 0)]).unwrap();
    let sum = SumObject::new(vec![Summand { mult: one(), object: 0 }, Summand { mult: one(), object: 1 }]);
    let x = TwistedComplex::new(cat.clone(), "V+W", sum, SparseVec::new(), vec![0, 0]).unwrap();
    assert!(x.validate().passed());
    let m = tw_to_module(&x);
    for w in 0..2 {
        let expect = module_cohomology(&yoneda_module(&cat, 0), w).total_dim()
            + module_cohomology(&yoneda_module(&cat, 1), w).total_dim();
        assert_eq!(module_cohomology(&m, w).total_dim(), expect);
    }
}

#[test]
fn evaluation_on_v_has_two_terms() {
    let f = Field::Rational;
    let cat = Arc::new(fix_p(1, f));
    let v = obj(&cat, 0);
    let ev = ev_tw(0, &v).unwrap();
    assert_eq!(ev.entries().len(), 2);
    assert!(tw_mu(&[&ev]).unwrap().is_zero());
}

#[test]
fn evaluation_with_zero_hom_is_zero() {
    let f = Field::Rational;
    let cat = Arc::new(fix_2obj(1, f));
    let w = obj(&cat, 1);
    let ev = ev_tw(0, &w).unwrap();
    assert!(ev.is_zero());
    assert!(ev.source.sum().is_empty());
}

#[test]
fn evaluation_matches_module_evaluation() {
    let f = Field::Rational;
    let pcat = Arc::new(fix_p(1, f));
    let dcat = Arc::new(end_dg_unital(f));
    let mut ys = vec![(pcat.clone(), w_h(&pcat)), (pcat.clone(), TwistedComplex::object(&pcat, 0))];
    for t in dg_maps(&dcat) {
        ys.push((dcat.clone(), cone_tw(&t).unwrap()));
    }
    for (cat, y) in ys {
        let y = Arc::new(y);
        let ev = ev_tw(0, &y).unwrap();
        assert!(ev.source.validate().passed());
        assert!(tw_mu(&[&ev]).unwrap().is_zero());
        let ym = Arc::new(tw_to_module(&y));
        let module_ev = evaluation(0, &ym, &yoneda_module(&cat, 0));
        let src = Arc::new(tw_to_module(&ev.source));
        assert_eq!(sorted(&src), sorted(&module_ev.source));
        let lt = tw_to_module_mor(&ev, &src, &ym).unwrap();
        let a: Vec<_> = lt.table().sorted();
        let b: Vec<_> = module_ev.table().sorted();
        assert_eq!(a, b);
    }
}

#[test]
fn dual_evaluation_is_closed() {
    let f = Field::Rational;
    let pcat = Arc::new(fix_p(1, f));
    let dcat = Arc::new(end_dg_unital(f));
    let mut ys = vec![w_h(&pcat), TwistedComplex::object(&pcat, 0)];
    for t in dg_maps(&dcat) {
        ys.push(cone_tw(&t).unwrap());
    }
    for y in ys {
        let y = Arc::new(y);
        let evd = ev_dual_tw(&y, 0).unwrap();
        assert!(evd.target.validate().passed());
        assert!(tw_mu(&[&evd]).unwrap().is_zero());
    }
}

#[test]
fn materialized_subcategories_satisfy_relations() {
    let f = Field::Rational;
    let pcat = Arc::new(fix_p(1, f));
    let objs = vec![obj(&pcat, 0), Arc::new(w_h(&pcat))];
    let m = materialize(&objs).unwrap();
    let report = check_ainf_relations(&m);
    assert!(report.checked > 0);
    assert!(report.passed(), "{:?}", report.failures.first());
    let dcat = Arc::new(end_dg_unital(f));
    let mut objs = vec![obj(&dcat, 0)];
    for t in dg_maps(&dcat) {
        objs.push(Arc::new(cone_tw(&t).unwrap().renamed(format!("C{}", objs.len()))));
    }
    let m = materialize(&objs).unwrap();
    assert!(check_ainf_relations(&m).passed());
}

#[test]
fn two_insertions_of_a_two_step_differential_vanish() {
    let f = Field::Rational;
    let cat = Arc::new(fix_p(1, f));
    let c = Arc::new(w_h(&cat));
    let delta = TwMorphism::new(c.clone(), c, 1, c_delta(&cat)).unwrap();
    assert!(sigma_mu(&[&delta, &delta]).unwrap().is_zero());
}

fn c_delta(cat: &Arc<AInfCategory>) -> SparseVec {
    w_h(cat).delta().clone()
}

/// Change of basis `b_i = c_i · e_{π(i)}` plus a multiple of another same-degree element.
fn scrambled_basis(space: &SumHom, f: Field, seed: &[i64]) -> Vec<SparseVec> {
    let n = space.dim();
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = seed[i % seed.len()].unsigned_abs() as usize % (i + 1);
        perm.swap(i, j);
    }
    let mut out: Vec<SparseVec> = perm
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let c = seed[(i + 1) % seed.len()];
            SparseVec::unit(k, f).scaled(&f.from_i64(if c == 0 { 1 } else { c }))
        })
        .collect();
    // shear within a degree keeps the basis homogeneous and invertible
    for i in 0..n {
        for j in 0..i {
            let (a, b) = (out[i].first_index().unwrap(), out[j].first_index().unwrap());
            if space.space.degree(a) == space.space.degree(b) {
                let s = f.from_i64(seed[(i * 7 + j) % seed.len()]);
                let add = out[j].scaled(&s);
                out[i].add(&add);
                break;
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn evaluation_is_basis_independent(seed in proptest::collection::vec(-3i64..4, 1..12), which in 0usize..3) {
        let f = Field::Rational;
        let pcat = Arc::new(fix_p(1, f));
        let dcat = Arc::new(end_dg_unital(f));
        let y = Arc::new(match which {
            0 => w_h(&pcat),
            k => cone_tw(&dg_maps(&dcat)[k - 1]).unwrap(),
        });
        let cat = y.category().clone();
        let space = SumHom::new(&cat, &SumObject::single(0), y.sum());
        let basis = scrambled_basis(&space, f, &seed);
        let ev_new = ev_tw_in_basis(0, &y, &basis).unwrap();
        let ev_old = ev_tw(0, &y).unwrap();
        prop_assert!(tw_mu(&[&ev_new]).unwrap().is_zero());
        let ym = Arc::new(tw_to_module(&y));
        let src_new = Arc::new(tw_to_module(&ev_new.source));
        let src_old = Arc::new(tw_to_module(&ev_old.source));
        let l_new = tw_to_module_mor(&ev_new, &src_new, &ym).unwrap();
        let l_old = tw_to_module_mor(&ev_old, &src_old, &ym).unwrap();
        // ℓ̃(ev_new) = ℓ̃(ev_old) ∘ (φ ⊗ id) with φ(b_i) = Σ_k c_ik e_k
        for d in 1..cat.arity_bound() {
            for (objs, inputs) in src_new.basis_inputs(d) {
                let dim_w = cat.hom(objs[d - 1], 0).dim();
                let (i, w) = (inputs[0] / dim_w, inputs[0] % dim_w);
                let mut first = SparseVec::new();
                for (k, c) in basis[i].iter() {
                    first.add_term(k * dim_w + w, c.clone());
                }
                let rest: Vec<SparseVec> = inputs[1..].iter().map(|&a| SparseVec::unit(a, f)).collect();
                let mut all = vec![&first];
                all.extend(rest.iter());
                prop_assert_eq!(l_old.eval(&objs, &all), l_new.component(&objs, &inputs));
            }
        }
        prop_assert!(l_new.support() > 0);
    }
}
