use std::sync::Arc;

use super::module::{args, chain, offset, tensor_left, tensor_right, units, ModuleTwist};
use super::{CpTwistData, Provenance, TwistResult};
use crate::ainfcat::{classify_spherical, AInfCategory, PairingIntegral};
use crate::amod::{cone, evaluation, yoneda_module, AInfModule, PreModuleHom};
use crate::error::{Error, Result};
use crate::grlin::{BasisElement, GradedVectorSpace, SparseVec};

/// `T_V𝒴 = Cone(ev: 𝒴(V) ⊗ 𝒱 → 𝒴)`, after checking that `V` is spherical of dimension `integral.degree`.
pub fn spherical_twist_module(v: usize, integral: &PairingIntegral, y: &Arc<AInfModule>) -> Result<ModuleTwist> {
    let cat = y.category();
    let verdict = classify_spherical(cat, v, integral.degree, integral);
    if !verdict.holds {
        return Err(Error::InvalidTwistData(format!(
            "{} is not spherical of dimension {}",
            cat.objects()[v],
            integral.degree
        )));
    }
    Ok(spherical_unchecked(v, y))
}

fn spherical_unchecked(v: usize, y: &Arc<AInfModule>) -> ModuleTwist {
    let yv = yoneda_module(y.category(), v);
    let ev = evaluation(v, y, &yv);
    let c = cone(&ev).expect("evaluation is closed of degree 0");
    TwistResult {
        object: c.module,
        h: None,
        g: None,
        ev,
        iota: None,
        pi: Some(c.pi),
        provenance: Provenance::SphericalModule,
    }
}

/// `t̃ = T_V(t)`: `t̃¹(y₁⊗v, y₂) = ((−1)^{|v|−1} t¹(y₁)⊗v, t¹(y₂) + t²(y₁,v))` and
/// `t̃^d((y₁⊗v, y₂), a…) = (0, t^d(y₂,a…) + t^{d+1}(y₁,v,a…))`.
pub fn spherical_twist_morphism(t: &PreModuleHom, ty: &ModuleTwist, tz: &ModuleTwist) -> Result<PreModuleHom> {
    let y = &t.source;
    let z = &t.target;
    if *ty.ev.target != **y || *tz.ev.target != **z {
        return Err(Error::Mismatch("twists do not match the ends of t".into()));
    }
    let cat = y.category().clone();
    let f = cat.field();
    let v = twist_object(ty)?;
    let (ydim, zdim) = (y.space(v).dim(), z.space(v).dim());
    let max = t.support().max(1);
    Ok(PreModuleHom::from_fn(ty.object.clone(), tz.object.clone(), t.degree, max, |objs, inputs| {
        let arity = objs.len();
        let last = objs[arity - 1];
        let dm = cat.hom(last, v).dim();
        let d0 = cat.hom(objs[0], v).dim();
        let a = units(&inputs[1..], f);
        let b = inputs[0];
        let mut res = SparseVec::new();
        if b < ydim * dm {
            let (yi, vi) = (b / dm, b % dm);
            let yu = SparseVec::unit(yi, f);
            let vu = SparseVec::unit(vi, f);
            if arity == 1 {
                let ty1 = t.eval(&[v], &[&yu]);
                res.add_signed(&tensor_left(&ty1, vi, d0), cat.hom(last, v).degree(vi) - 1);
            }
            let w = t.eval(&chain(objs, &[v]), &args(&[&yu, &vu], &a));
            res.add(&offset(&w, zdim * d0));
        } else {
            let yu = SparseVec::unit(b - ydim * dm, f);
            res.add(&offset(&t.eval(objs, &args(&[&yu], &a)), zdim * d0));
        }
        res
    }))
}

/// The object `V` a twist was taken along, read off its evaluation map.
fn twist_object(tw: &ModuleTwist) -> Result<usize> {
    let cat = tw.ev.source.category();
    (0..cat.num_objects())
        .find(|&v| {
            let ydim = tw.ev.target.space(v).dim();
            (0..cat.num_objects()).all(|x| tw.ev.source.space(x).dim() == ydim * cat.hom(x, v).dim())
        })
        .ok_or_else(|| Error::Mismatch("cannot recover the twisting object".into()))
}

/// Index layout of `T_V²𝒴` at one object: `(𝒴(V)⊗𝒱(V)[2]⊗𝒱) ⊕ (𝒴(V)[1]⊗𝒱)² ⊕ 𝒴`.
#[derive(Clone, Copy)]
struct T2Layout {
    zdim: usize,
    qd: usize,
    dm: usize,
}

enum T2Row {
    Triple(usize, usize, usize),
    Second(usize, usize),
    Third(usize, usize),
    Base(usize),
}

impl T2Layout {
    fn at(cat: &AInfCategory, y: &AInfModule, v: usize, x: usize) -> Self {
        T2Layout {
            zdim: y.space(v).dim(),
            qd: cat.hom(v, v).dim(),
            dm: cat.hom(x, v).dim(),
        }
    }

    fn r1(&self) -> usize {
        self.zdim * self.qd * self.dm
    }

    fn r2(&self) -> usize {
        self.r1() + self.zdim * self.dm
    }

    fn r3(&self) -> usize {
        self.r2() + self.zdim * self.dm
    }

    fn split(&self, b: usize) -> T2Row {
        let dm = self.dm;
        if b < self.r1() {
            let (yq, vi) = (b / dm, b % dm);
            T2Row::Triple(yq / self.qd, yq % self.qd, vi)
        } else if b < self.r2() {
            let l = b - self.r1();
            T2Row::Second(l / dm, l % dm)
        } else if b < self.r3() {
            let l = b - self.r2();
            T2Row::Third(l / dm, l % dm)
        } else {
            T2Row::Base(b - self.r3())
        }
    }
}

/// `T_V²𝒴` written directly from its block formulas, with its own basis names.
pub fn explicit_t_squared(v: usize, y: &Arc<AInfModule>) -> Result<AInfModule> {
    let cat = y.category().clone();
    let f = cat.field();
    let zs = y.space(v).clone();
    let qs = cat.hom(v, v).clone();
    let spaces: Vec<GradedVectorSpace> = (0..cat.num_objects())
        .map(|x| {
            let vs = cat.hom(x, v);
            let mut basis = Vec::new();
            for a in zs.basis() {
                for q in qs.basis() {
                    for b in vs.basis() {
                        let name = format!("1.{}⊗{}⊗{}", a.name, q.name, b.name);
                        basis.push(BasisElement::new(name, a.degree + q.degree + b.degree - 2));
                    }
                }
            }
            for tag in ["2", "3"] {
                for a in zs.basis() {
                    for b in vs.basis() {
                        basis.push(BasisElement::new(format!("{tag}.{}⊗{}", a.name, b.name), a.degree + b.degree - 1));
                    }
                }
            }
            basis.extend(y.space(x).basis().iter().map(|b| BasisElement::new(format!("4.{}", b.name), b.degree)));
            GradedVectorSpace::new(basis).expect("tagged names are unique")
        })
        .collect();
    let bound = y.arity_bound().max(cat.arity_bound());
    let mut out = AInfModule::new(cat.clone(), spaces, bound)?;
    let empty = out.clone();
    for arity in 1..=bound {
        for (objs, inputs) in empty.basis_inputs(arity) {
            let last = objs[arity - 1];
            let src = T2Layout::at(&cat, y, v, last);
            let tgt = T2Layout::at(&cat, y, v, objs[0]);
            let a = units(&inputs[1..], f);
            let first = arity == 1;
            let mut res = SparseVec::new();
            // z ⊗ μ(v, a…) and, in arity 1, (−1)^{|v|−1} ∂z ⊗ v
            let tensor_part = |dz: Option<SparseVec>, zi: usize, vi: usize| {
                let vu = SparseVec::unit(vi, f);
                let mv = cat.mu(&chain(&objs, &[v]), &args(&[&vu], &a));
                let mut w = tensor_right(zi, &mv, tgt.dm);
                if let Some(dz) = dz {
                    w.add_signed(&tensor_left(&dz, vi, tgt.dm), cat.hom(last, v).degree(vi) - 1);
                }
                w
            };
            match src.split(inputs[0]) {
                T2Row::Triple(yi, qi, vi) => {
                    let yu = SparseVec::unit(yi, f);
                    let qu = SparseVec::unit(qi, f);
                    let vu = SparseVec::unit(vi, f);
                    let vdeg = cat.hom(last, v).degree(vi);
                    let zi = yi * tgt.qd + qi;
                    // ∂(y⊗q) = (−1)^{|q|−1} μ¹y ⊗ q + y ⊗ μ¹q
                    let dz = first.then(|| {
                        let mut dz = SparseVec::new();
                        let dy = y.mu(&[v], &[&yu]);
                        dz.add_signed(&tensor_left(&dy, qi, tgt.qd), qs.degree(qi) - 1);
                        dz.add(&tensor_right(yi, &cat.mu(&[v, v], &[&qu]), tgt.qd));
                        dz
                    });
                    res.add(&tensor_part(dz, zi, vi));
                    if first {
                        let yq = y.mu(&[v, v], &[&yu, &qu]);
                        res.add_signed(&offset(&tensor_left(&yq, vi, tgt.dm), tgt.r1()), vdeg - 1);
                    }
                    let qv = cat.mu(&chain(&objs, &[v, v]), &args(&[&qu, &vu], &a));
                    res.add(&offset(&tensor_right(yi, &qv, tgt.dm), tgt.r2()));
                    let yqv = y.mu(&chain(&objs, &[v, v]), &args(&[&yu, &qu, &vu], &a));
                    res.add(&offset(&yqv, tgt.r3()));
                }
                T2Row::Second(yi, vi) | T2Row::Third(yi, vi) => {
                    let base = if matches!(src.split(inputs[0]), T2Row::Second(..)) {
                        tgt.r1()
                    } else {
                        tgt.r2()
                    };
                    let yu = SparseVec::unit(yi, f);
                    let vu = SparseVec::unit(vi, f);
                    let dz = first.then(|| y.mu(&[v], &[&yu]));
                    res.add(&offset(&tensor_part(dz, yi, vi), base));
                    let yv = y.mu(&chain(&objs, &[v]), &args(&[&yu, &vu], &a));
                    res.add(&offset(&yv, tgt.r3()));
                }
                T2Row::Base(j) => {
                    let yu = SparseVec::unit(j, f);
                    res.add(&offset(&y.mu(&objs, &args(&[&yu], &a)), tgt.r3()));
                }
            }
            if !res.is_zero() {
                out.set_mu(&objs, &inputs, res)?;
            }
        }
    }
    Ok(out)
}

/// `T_V²𝒴` from the four-summand formulas, after checking that `V` is spherical.
pub fn t_squared_module(v: usize, integral: &PairingIntegral, y: &Arc<AInfModule>) -> Result<AInfModule> {
    let verdict = classify_spherical(y.category(), v, integral.degree, integral);
    if !verdict.holds {
        return Err(Error::InvalidTwistData("object is not spherical".into()));
    }
    explicit_t_squared(v, y)
}

/// Equal degrees index by index and equal structure tables: equality after renaming basis elements.
pub fn same_up_to_relabeling(a: &AInfModule, b: &AInfModule) -> bool {
    let degs = |m: &AInfModule| -> Vec<Vec<i64>> {
        m.spaces().iter().map(|s| (0..s.dim()).map(|i| s.degree(i)).collect()).collect()
    };
    degs(a) == degs(b) && a.table() == b.table()
}

/// `α_𝒴: T_V²𝒴 → Φ_V𝒴` together with the modules it connects.
#[derive(Clone, Debug)]
pub struct AlphaMap {
    pub once: ModuleTwist,
    pub twice: ModuleTwist,
    pub phi: ModuleTwist,
    pub alpha: PreModuleHom,
}

/// `α¹(y₁⊗q⊗v₁, y₂⊗v₂, y₃⊗v₃, y₄) = ((−1)^{|v₁|} π_h(y₁⊗q)⊗v₁, (−1)^{|y₂|+|v₂|} y₂⊗v₂ + (−1)^{|y₃|+|v₃|} y₃⊗v₃, (−1)^{|y₄|−1} y₄)`
/// with no higher components.
///
/// Requires `hom(V, V)` to be minimal with basis `{e_V, h}` up to scaling `h`.
pub fn alpha_map(d: &CpTwistData, y: &Arc<AInfModule>) -> Result<AlphaMap> {
    let cat = &d.cat;
    let f = cat.field();
    let v = d.v;
    let qs = cat.hom(v, v);
    let minimal = (0..qs.dim()).all(|i| cat.mu(&[v, v], &[&SparseVec::unit(i, f)]).is_zero());
    let unit = cat.strict_units().map(|u| u[v]);
    let hterm = d.h.iter().next().filter(|_| d.h.len() == 1).map(|(j, c)| (j, c.clone()));
    let (hj, hc) = match (minimal, qs.dim(), unit, hterm) {
        (true, 2, Some(e), Some((j, c))) if j != e => (j, c),
        _ => {
            return Err(Error::NotMinimal(
                "α needs hom(V,V) with zero differential and basis {e_V, h}".into(),
            ))
        }
    };
    let hinv = hc.inv().expect("nonzero coefficient");
    let once = spherical_twist_module(v, &d.integral, y)?;
    let twice = spherical_twist_module(v, &d.integral, &once.object)?;
    let phi = super::phi_module(d, y)?;
    let zs = y.space(v).clone();
    let alpha = PreModuleHom::from_fn(twice.object.clone(), phi.object.clone(), 0, 1, |objs, inputs| {
        let x = objs[0];
        let lay = T2Layout::at(cat, y, v, x);
        let dm = lay.dm;
        let a = lay.zdim * dm;
        let vdeg = |vi: usize| cat.hom(x, v).degree(vi);
        match lay.split(inputs[0]) {
            T2Row::Triple(yi, qi, vi) if qi == hj => {
                SparseVec::unit(yi * dm + vi, f).scaled(&(&hinv * &f.sign(vdeg(vi))))
            }
            T2Row::Triple(..) => SparseVec::new(),
            T2Row::Second(yi, vi) | T2Row::Third(yi, vi) => {
                SparseVec::unit(a + yi * dm + vi, f).scaled(&f.sign(zs.degree(yi) + vdeg(vi)))
            }
            T2Row::Base(j) => SparseVec::unit(2 * a + j, f).scaled(&f.sign(y.space(x).degree(j) - 1)),
        }
    });
    Ok(AlphaMap {
        once,
        twice,
        phi,
        alpha,
    })
}
