//! Verification suites over categories, run in parallel and reported in a fixed order.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::fixture::FixtureName;
use super::report::{Check, VerifyReport};
use crate::ainfcat::{
    check_ainf_relations, check_c_unital, check_strict_unital, classify_spherical, cohomology_category,
    AInfCategory, PairingIntegral,
};
use crate::amod::{
    check_module_relations, cone, evaluation, hom_basis, module_cohomology, mu1_q, mu1_q_exhaustive, mu2_q,
    normalized_closed_homs, quasi_iso_check, yoneda_module, AInfModule, PreModuleHom,
};
use crate::error::{Error, Result};
use crate::fixtures::cone_of_h;
use crate::grlin::{GradedVectorSpace, SparseVec};
use crate::twcx::{ev_tw, tw_to_module, tw_to_module_mor, TwistedComplex};
use crate::twist::{
    alpha_map, build_g, build_h, phi_adjoint_tw, phi_module, phi_on_morphism, phi_tw, spanning_class_audit,
    spherical_twist_module, spherical_twist_morphism, tw_hom_dims, verify_shift, CpTwistData,
};

/// Random pre-module homs drawn by the functor suite.
pub const FUNCTOR_SAMPLES: usize = 100;
/// Random closed morphisms drawn by the naturality check of `α`.
pub const NATURALITY_SAMPLES: usize = 24;
const SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Relations,
    Unitality,
    Classify,
    Shift,
    Functor,
    Alpha,
    Adjoint,
    Spanning,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Relations,
        Suite::Unitality,
        Suite::Classify,
        Suite::Shift,
        Suite::Functor,
        Suite::Alpha,
        Suite::Adjoint,
        Suite::Spanning,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Relations => "relations",
            Suite::Unitality => "unitality",
            Suite::Classify => "classify",
            Suite::Shift => "shift",
            Suite::Functor => "functor",
            Suite::Alpha => "alpha",
            Suite::Adjoint => "adjoint",
            Suite::Spanning => "spanning",
            Suite::All => "all",
        }
    }

    fn parts(self) -> Vec<Suite> {
        if self == Suite::All {
            Suite::EACH.to_vec()
        } else {
            vec![self]
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::EACH
            .iter()
            .chain([Suite::All].iter())
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// A category under test, optionally with a chosen integration functional.
#[derive(Clone)]
pub struct Input {
    pub label: String,
    pub cat: Arc<AInfCategory>,
    pub integral: Option<PairingIntegral>,
}

impl Input {
    pub fn new(label: impl Into<String>, cat: AInfCategory) -> Self {
        Input {
            label: label.into(),
            cat: Arc::new(cat),
            integral: None,
        }
    }

    /// A named fixture such as `P(1)` or `CORRUPT_P(2)`.
    pub fn fixture(name: &str) -> Result<Self> {
        let fx = FixtureName::parse(name).ok_or_else(|| Error::UnknownFixture(name.into()))?;
        Ok(Input::new(fx.label(), fx.category()))
    }
}

/// Runs `suite` over every input. Work is spread across threads; the order of checks
/// depends only on the suite and the inputs.
pub fn run_suite(suite: Suite, inputs: &[Input]) -> VerifyReport {
    let jobs: Vec<(Suite, &Input)> = suite
        .parts()
        .into_iter()
        .flat_map(|s| inputs.iter().map(move |i| (s, i)))
        .collect();
    let checks: Vec<Check> = jobs
        .par_iter()
        .map(|(s, i)| run_one(*s, i))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let labels = inputs.iter().map(|i| i.label.clone()).collect();
    VerifyReport::new(suite.name(), labels, checks)
}

fn run_one(suite: Suite, input: &Input) -> Vec<Check> {
    let label = &input.label;
    let plain = match suite {
        Suite::Relations => Some(relations(input)),
        Suite::Unitality => Some(unitality(input)),
        _ => None,
    };
    if let Some(checks) = plain {
        return checks;
    }
    let datum = match detect_datum(&input.cat, input.integral.clone()) {
        Ok(d) => d,
        Err(e) => return vec![Check::new(label, &format!("{}/datum", suite.name()), false, json!(e.to_string()))],
    };
    let r = match suite {
        Suite::Classify => classify(label, &datum),
        Suite::Shift => shift(label, &datum),
        Suite::Functor => functor(label, &datum),
        Suite::Alpha => alpha(label, &datum),
        Suite::Adjoint => adjoint(label, &datum),
        Suite::Spanning => spanning(label, &datum),
        _ => unreachable!("handled above"),
    };
    r.unwrap_or_else(|e| vec![Check::new(label, &format!("{}/error", suite.name()), false, json!(e.to_string()))])
}

/// `(coefficient, basis name)` pairs.
fn named(space: &GradedVectorSpace, v: &SparseVec) -> Vec<(String, String)> {
    v.iter().map(|(k, c)| (c.to_string(), space.name(k).to_string())).collect()
}

fn module_dims(m: &AInfModule) -> Vec<BTreeMap<i64, usize>> {
    (0..m.category().num_objects())
        .map(|x| module_cohomology(m, x).nonzero_dims())
        .collect()
}

/// Picks the twist datum of a category: the object named `V` (else the first object),
/// `n` from the top cohomological degree of its endomorphisms, `h` a representative of
/// the degree 2 class and, unless given, the first admissible integral.
pub fn detect_datum(cat: &Arc<AInfCategory>, integral: Option<PairingIntegral>) -> Result<CpTwistData> {
    if cat.num_objects() == 0 {
        return Err(Error::InvalidTwistData("category has no objects".into()));
    }
    detect_datum_at(cat, cat.object_index("V").unwrap_or(0), integral)
}

/// [`detect_datum`] with the object fixed.
pub fn detect_datum_at(cat: &Arc<AInfCategory>, v: usize, integral: Option<PairingIntegral>) -> Result<CpTwistData> {
    let hc = cohomology_category(cat);
    let top = hc.dims(v, v).keys().max().copied().unwrap_or(0);
    if top < 2 || top % 2 != 0 {
        return Err(Error::InvalidTwistData(format!("top degree {top} of H(hom(V,V)) is not 2n with n ≥ 1")));
    }
    let n = (top / 2) as usize;
    let hv = hc.hom(v, v);
    let idx = hv
        .indices_in_degree(2)
        .next()
        .ok_or_else(|| Error::InvalidTwistData("H²(hom(V,V)) vanishes".into()))?;
    let h = hv.section(&SparseVec::unit(idx, cat.field()));
    let integral = match integral {
        Some(i) => i,
        None => PairingIntegral::candidates(cat, v, top)
            .into_iter()
            .next()
            .ok_or_else(|| Error::InvalidTwistData("no integral on the top degree".into()))?,
    };
    CpTwistData::new(cat.clone(), v, h, n, integral)
}

/// Objects of `Tw`: every object of the category, then `Cone(h)`.
fn complexes(d: &CpTwistData) -> Result<Vec<Arc<TwistedComplex>>> {
    let mut out: Vec<_> = (0..d.cat.num_objects())
        .map(|x| Arc::new(TwistedComplex::object(&d.cat, x)))
        .collect();
    out.push(Arc::new(cone_of_h(&d.cat, d.v, &d.h)?));
    Ok(out)
}

/// Yoneda modules of `complexes(d)`, labelled.
fn modules(d: &CpTwistData) -> Result<Vec<(String, Arc<AInfModule>)>> {
    let mut out: Vec<_> = (0..d.cat.num_objects())
        .map(|x| (d.cat.objects()[x].clone(), Arc::new(yoneda_module(&d.cat, x))))
        .collect();
    out.push(("W_h".into(), Arc::new(tw_to_module(&cone_of_h(&d.cat, d.v, &d.h)?))));
    Ok(out)
}

fn relations(input: &Input) -> Vec<Check> {
    let l = &input.label;
    let r = check_ainf_relations(&input.cat);
    let mut out = vec![Check::new(l, "relations/ainf", r.passed(), json!(r))];
    if r.passed() {
        for x in 0..input.cat.num_objects() {
            let m = check_module_relations(&yoneda_module(&input.cat, x));
            let name = format!("relations/yoneda {}", input.cat.objects()[x]);
            out.push(Check::new(l, &name, m.passed(), json!(m)));
        }
    }
    out
}

fn unitality(input: &Input) -> Vec<Check> {
    let l = &input.label;
    let c = check_c_unital(&input.cat);
    let mut out = vec![Check::new(l, "unitality/c_unital", c.passed(), json!(c))];
    if input.cat.strict_units().is_some() {
        match check_strict_unital(&input.cat) {
            Ok(s) => out.push(Check::new(l, "unitality/strict", s.passed(), json!(s))),
            Err(e) => out.push(Check::new(l, "unitality/strict", false, json!(e.to_string()))),
        }
    } else {
        out.push(Check::skip(l, "unitality/strict", "no strict units declared"));
    }
    out
}

fn classify(l: &str, d: &CpTwistData) -> Result<Vec<Check>> {
    let space = d.cat.hom(d.v, d.v);
    let v = d.classify();
    let detail = json!({
        "object": d.cat.objects()[d.v],
        "n": d.n,
        "h": named(space, &d.h),
        "integral": {"degree": d.integral.degree, "reference": named(space, &d.integral.reference), "value": d.integral.value.to_string()},
        "verdict": v,
    });
    let mut out = vec![Check::new(l, "classify/cp", v.holds, detail)];
    if d.n == 1 {
        let s = classify_spherical(&d.cat, d.v, 2, &d.integral);
        out.push(Check::new(l, "classify/spherical 2", s.holds, json!(s)));
    } else {
        out.push(Check::skip(l, "classify/spherical", "spherical only when n = 1"));
    }
    Ok(out)
}

fn shift(l: &str, d: &CpTwistData) -> Result<Vec<Check>> {
    let r = verify_shift(d)?;
    let mut out = vec![Check::new(l, "shift/certificate", r.passed(), json!(r))];

    let mut rows = Vec::new();
    let mut ok = true;
    for y in complexes(d)? {
        let tw = module_dims(&tw_to_module(&phi_tw(d, &y)?.object));
        let md = module_dims(&phi_module(d, &Arc::new(tw_to_module(&y)))?.object);
        ok &= tw == md;
        rows.push(json!({"complex": y.name(), "tw": tw, "module": md}));
    }
    out.push(Check::new(l, "shift/cross_level", ok, json!(rows)));

    let mut rows = Vec::new();
    let mut ok = true;
    for y in complexes(d)? {
        let ev = ev_tw(d.v, &y)?;
        let ym = Arc::new(tw_to_module(&y));
        let module_ev = evaluation(d.v, &ym, &yoneda_module(&d.cat, d.v));
        let src = Arc::new(tw_to_module(&ev.source));
        let lt = tw_to_module_mor(&ev, &src, &ym)?;
        let same = src.table().sorted() == module_ev.source.table().sorted()
            && lt.table().sorted() == module_ev.table().sorted();
        ok &= same;
        rows.push(json!({"complex": y.name(), "entries": lt.table().sorted().len(), "agree": same}));
    }
    out.push(Check::new(l, "shift/ev_agreement", ok, json!(rows)));
    Ok(out)
}

/// A random combination of a hom basis with coefficients in `-2..=2`.
fn random_hom(
    rng: &mut ChaCha8Rng,
    basis: &[PreModuleHom],
    src: &Arc<AInfModule>,
    tgt: &Arc<AInfModule>,
    r: i64,
) -> Result<PreModuleHom> {
    let f = src.field();
    let mut t = PreModuleHom::zero(src.clone(), tgt.clone(), r);
    for b in basis {
        let c: i64 = rng.gen_range(-2..=2);
        if c != 0 {
            t = t.add(&b.scaled(&f.from_i64(c)))?;
        }
    }
    Ok(t)
}

fn functor(l: &str, d: &CpTwistData) -> Result<Vec<Check>> {
    let mods = modules(d)?;
    let mut out = Vec::new();

    let mut open = Vec::new();
    for (name, y) in &mods {
        let h = build_h(d, y)?;
        if let Some(w) = mu1_q_exhaustive(&h).describe_nonzero() {
            open.push(json!({"module": name, "map": "H", "residual": w}));
        }
        let g = build_g(d, y, &cone(&h)?.module)?;
        if let Some(w) = mu1_q_exhaustive(&g).describe_nonzero() {
            open.push(json!({"module": name, "map": "g", "residual": w}));
        }
    }
    let detail = json!({"modules": mods.iter().map(|m| &m.0).collect::<Vec<_>>(), "failures": open});
    out.push(Check::new(l, "functor/h_g_closed", open.is_empty(), detail));

    let ms: Vec<_> = mods.iter().map(|m| m.1.clone()).collect();
    let phis = ms.iter().map(|m| phi_module(d, m)).collect::<Result<Vec<_>>>()?;
    // T_V needs V spherical, which among ℂPⁿ-objects means n = 1
    let ts = if d.n == 1 {
        Some(
            ms.iter()
                .map(|m| spherical_twist_module(d.v, &d.integral, m))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut phi_bad, mut t_bad) = (Vec::new(), Vec::new());
    let mut nonzero = 0;
    let k = ms.len();
    for s in 0..FUNCTOR_SAMPLES {
        let (i, j, m) = (rng.gen_range(0..k), rng.gen_range(0..k), rng.gen_range(0..k));
        let (r1, r2) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        let t1 = random_hom(&mut rng, &hom_basis(&ms[i], &ms[j], r1, 3), &ms[i], &ms[j], r1)?;
        let t2 = random_hom(&mut rng, &hom_basis(&ms[j], &ms[m], r2, 3), &ms[j], &ms[m], r2)?;
        nonzero += usize::from(!t1.is_zero()) + usize::from(!t2.is_zero());

        let phi = |t: &PreModuleHom, a: usize, b: usize| phi_on_morphism(d, t, &phis[a], &phis[b]);
        let diff = mu1_q(&phi(&t1, i, j)?).sub(&phi(&mu1_q(&t1), i, j)?)?;
        let comp = mu2_q(&phi(&t2, j, m)?, &phi(&t1, i, j)?)?.sub(&phi(&mu2_q(&t2, &t1)?, i, m)?)?;
        if !diff.is_zero() || !comp.is_zero() {
            phi_bad.push(json!({"sample": s, "differential": diff.describe_nonzero(), "composition": comp.describe_nonzero()}));
        }

        let Some(ts) = &ts else { continue };
        let sph = |t: &PreModuleHom, a: usize, b: usize| spherical_twist_morphism(t, &ts[a], &ts[b]);
        let diff = mu1_q(&sph(&t1, i, j)?).sub(&sph(&mu1_q(&t1), i, j)?)?;
        let comp = mu2_q(&sph(&t2, j, m)?, &sph(&t1, i, j)?)?.sub(&sph(&mu2_q(&t2, &t1)?, i, m)?)?;
        if !diff.is_zero() || !comp.is_zero() {
            t_bad.push(json!({"sample": s, "differential": diff.describe_nonzero(), "composition": comp.describe_nonzero()}));
        }
    }
    let stats = |bad: &Vec<Value>| json!({"samples": FUNCTOR_SAMPLES, "homs": 2 * FUNCTOR_SAMPLES, "nonzero_homs": nonzero, "seed": SEED, "failures": bad});
    out.push(Check::new(l, "functor/phi", phi_bad.is_empty(), stats(&phi_bad)));
    if ts.is_some() {
        out.push(Check::new(l, "functor/spherical", t_bad.is_empty(), stats(&t_bad)));
    } else {
        out.push(Check::skip(l, "functor/spherical", "V is spherical only when n = 1"));
    }
    Ok(out)
}

fn alpha(l: &str, d: &CpTwistData) -> Result<Vec<Check>> {
    if d.n != 1 {
        return Ok(vec![Check::skip(l, "alpha", "α is defined when hom(V,V) has basis {e, h}, i.e. n = 1")]);
    }
    let mods = modules(d)?;
    let mut out = Vec::new();
    let als = mods.iter().map(|(_, m)| alpha_map(d, m)).collect::<Result<Vec<_>>>()?;
    for ((name, _), a) in mods.iter().zip(&als) {
        let closed = mu1_q_exhaustive(&a.alpha).describe_nonzero();
        let qi = quasi_iso_check(&a.alpha)?;
        let ok = closed.is_none() && qi.is_quasi_iso;
        out.push(Check::new(l, &format!("alpha/{name}"), ok, json!({"residual": closed, "quasi_iso": qi})));
    }

    // pools of closed morphisms between test modules, sampled with random coefficients
    let mut pools = Vec::new();
    for i in 0..mods.len() {
        for j in 0..mods.len() {
            for r in -2..=2 {
                let basis = normalized_closed_homs(&mods[i].1, &mods[j].1, r)?;
                if !basis.is_empty() {
                    pools.push((i, j, r, basis));
                }
            }
        }
    }
    let f = d.cat.field();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut bad = Vec::new();
    let mut checked = 0;
    for s in 0..NATURALITY_SAMPLES {
        if pools.is_empty() {
            break;
        }
        let (i, j, r, basis) = &pools[rng.gen_range(0..pools.len())];
        let mut t = random_hom(&mut rng, basis, &mods[*i].1, &mods[*j].1, *r)?;
        if t.is_zero() {
            t = basis[rng.gen_range(0..basis.len())].clone();
        }
        let (ai, aj) = (&als[*i], &als[*j]);
        let tt = spherical_twist_morphism(&t, &ai.once, &aj.once)?;
        let ttt = spherical_twist_morphism(&tt, &ai.twice, &aj.twice)?;
        let th = phi_on_morphism(d, &t, &ai.phi, &aj.phi)?;
        let lhs = mu2_q(&aj.alpha, &ttt)?.scaled(&f.sign(ttt.degree));
        let rhs = mu2_q(&th, &ai.alpha)?.scaled(&f.sign(ai.alpha.degree));
        let res = lhs.sub(&rhs)?;
        checked += 1;
        if !res.is_zero() {
            bad.push(json!({"sample": s, "source": mods[*i].0, "target": mods[*j].0, "degree": r, "residual": res.describe_nonzero()}));
        }
    }
    let ok = bad.is_empty() && checked >= 20;
    out.push(Check::new(l, "alpha/naturality", ok, json!({"checked": checked, "seed": SEED + 1, "failures": bad})));
    Ok(out)
}

fn adjoint(l: &str, d: &CpTwistData) -> Result<Vec<Check>> {
    let ys = complexes(d)?;
    let phi = ys.iter().map(|y| Ok(phi_tw(d, y)?.object)).collect::<Result<Vec<_>>>()?;
    let adj = ys.iter().map(|y| Ok(phi_adjoint_tw(d, y)?.object)).collect::<Result<Vec<_>>>()?;
    let mut left = Vec::new();
    let mut right = Vec::new();
    for i in 0..ys.len() {
        for j in 0..ys.len() {
            let (a, b) = (tw_hom_dims(&adj[i], &ys[j]), tw_hom_dims(&ys[i], &phi[j]));
            left.push(json!({"y": ys[i].name(), "z": ys[j].name(), "adjoint_first": a, "phi_second": b, "equal": a == b}));
            let (a, b) = (tw_hom_dims(&phi[i], &ys[j]), tw_hom_dims(&ys[i], &adj[j]));
            right.push(json!({"y": ys[i].name(), "z": ys[j].name(), "phi_first": a, "adjoint_second": b, "equal": a == b}));
        }
    }
    let all_eq = |rows: &Vec<Value>| rows.iter().all(|r| r["equal"] == json!(true));
    Ok(vec![
        Check::new(l, "adjoint/left", all_eq(&left), json!(left)),
        Check::new(l, "adjoint/right", all_eq(&right), json!(right)),
    ])
}

fn spanning(l: &str, d: &CpTwistData) -> Result<Vec<Check>> {
    let ys = complexes(d)?;
    let phi = ys.iter().map(|y| Ok(phi_tw(d, y)?.object)).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut ok = true;
    for i in 0..ys.len() {
        for j in 0..ys.len() {
            let (a, b) = (tw_hom_dims(&phi[i], &phi[j]), tw_hom_dims(&ys[i], &ys[j]));
            ok &= a == b;
            rows.push(json!({"a": ys[i].name(), "b": ys[j].name(), "phi": a, "plain": b}));
        }
    }
    let mut out = vec![Check::new(l, "spanning/fully_faithful", ok, json!(rows))];

    // {V} together with the objects Y with hom_H(V, Y) = 0
    let hc = cohomology_category(&d.cat);
    let catalog = modules(d)?;
    let candidates: Vec<_> = (0..d.cat.num_objects())
        .filter(|&x| x == d.v || hc.dims(d.v, x).is_empty())
        .map(|x| catalog[x].clone())
        .collect();
    let r = spanning_class_audit(&candidates, &catalog)?;
    let names: Vec<_> = candidates.iter().map(|c| &c.0).collect();
    out.push(Check::new(l, "spanning/class", r.passed(), json!({"candidates": names, "report": r})));
    Ok(out)
}
