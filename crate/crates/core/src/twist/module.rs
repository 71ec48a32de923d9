use std::sync::Arc;

use super::{CpTwistData, Provenance, TwistResult};
use crate::amod::{cone, evaluation, tensor_module, yoneda_module, AInfModule, PreModuleHom};
use crate::error::{Error, Result};
use crate::grlin::{Field, SparseVec};

pub type ModuleTwist = TwistResult<Arc<AInfModule>, PreModuleHom>;

pub(crate) fn units(inputs: &[usize], f: Field) -> Vec<SparseVec> {
    inputs.iter().map(|&i| SparseVec::unit(i, f)).collect()
}

/// `objs` followed by `extra`.
pub(crate) fn chain(objs: &[usize], extra: &[usize]) -> Vec<usize> {
    objs.iter().chain(extra).copied().collect()
}

/// `first` followed by `rest`, as an argument list.
pub(crate) fn args<'a>(first: &[&'a SparseVec], rest: &'a [SparseVec]) -> Vec<&'a SparseVec> {
    first.iter().copied().chain(rest.iter()).collect()
}

/// `y ⊗ v` in `𝒴(V) ⊗ hom(X, V)`, written in the index layout `y·dim + v`.
pub(crate) fn tensor_left(y: &SparseVec, v: usize, dim: usize) -> SparseVec {
    y.remap(|i| Some(i * dim + v))
}

pub(crate) fn tensor_right(y: usize, v: &SparseVec, dim: usize) -> SparseVec {
    v.remap(|j| Some(y * dim + j))
}

pub(crate) fn offset(v: &SparseVec, off: usize) -> SparseVec {
    v.remap(|i| Some(i + off))
}

fn check_data(d: &CpTwistData, y: &AInfModule) -> Result<()> {
    if !Arc::ptr_eq(&d.cat, y.category()) && !d.cat.same_table(y.category()) {
        return Err(Error::Mismatch("module lives over a different category".into()));
    }
    if d.v >= d.cat.num_objects() || d.cat.hom(d.v, d.v).degree_of(&d.h).is_some_and(|k| k != 2) {
        return Err(Error::InvalidTwistData("h must be a degree 2 element of hom(V,V)".into()));
    }
    Ok(())
}

/// `H: 𝒴(V)[−2] ⊗ 𝒱 → 𝒴(V) ⊗ 𝒱`, where `𝒱` is the Yoneda module of `V` and `𝒴(V)` carries `μ¹_𝒴`.
///
/// `H¹(y⊗v) = (−1)^{|y|+|v|} μ²_𝒴(y,h)⊗v + (−1)^{|y|−1} y⊗μ²(h,v)` and
/// `H^d(y⊗v, a…) = (−1)^{|y|−1} y⊗μ^{d+1}(h,v,a…)`, with `|y|` the degree in `𝒴(V)`.
pub fn build_h(d: &CpTwistData, y: &Arc<AInfModule>) -> Result<PreModuleHom> {
    check_data(d, y)?;
    let cat = &d.cat;
    let f = cat.field();
    let v = d.v;
    let yv = yoneda_module(cat, v);
    let zc = y.complex(v);
    let source = Arc::new(tensor_module(&zc.shift(-2), &yv));
    let target = Arc::new(tensor_module(&zc, &yv));
    let max = cat.arity_bound().saturating_sub(1).max(1);
    let h = &d.h;
    Ok(PreModuleHom::from_fn(source, target, 0, max, |objs, inputs| {
        let last = objs[objs.len() - 1];
        let dm = cat.hom(last, v).dim();
        let d0 = cat.hom(objs[0], v).dim();
        let (yi, vi) = (inputs[0] / dm, inputs[0] % dm);
        let ydeg = zc.space.degree(yi);
        let vdeg = cat.hom(last, v).degree(vi);
        let yu = SparseVec::unit(yi, f);
        let vu = SparseVec::unit(vi, f);
        let a = units(&inputs[1..], f);
        let mut out = SparseVec::new();
        if objs.len() == 1 {
            let yh = y.mu(&[v, v], &[&yu, h]);
            out.add_signed(&tensor_left(&yh, vi, dm), ydeg + vdeg);
        }
        let hv = cat.mu(&chain(objs, &[v, v]), &args(&[h, &vu], &a));
        out.add_signed(&tensor_right(yi, &hv, d0), ydeg - 1);
        out
    }))
}

/// `g: 𝓗_𝒴 = Cone(H) → 𝒴` with
/// `g^d((y₁⊗v₁, y₂⊗v₂), a…) = μ^{d+1}_𝒴(y₂,v₂,a…) + (−1)^{|y₁|−1} μ^{d+2}_𝒴(y₁,h,v₁,a…)`.
pub fn build_g(d: &CpTwistData, y: &Arc<AInfModule>, hcal: &Arc<AInfModule>) -> Result<PreModuleHom> {
    check_data(d, y)?;
    let cat = &d.cat;
    let f = cat.field();
    let v = d.v;
    let zspace = y.space(v).clone();
    let zdim = zspace.dim();
    let max = y.arity_bound().saturating_sub(1).max(1);
    let h = &d.h;
    Ok(PreModuleHom::from_fn(hcal.clone(), y.clone(), 0, max, |objs, inputs| {
        let last = objs[objs.len() - 1];
        let dm = cat.hom(last, v).dim();
        let off = zdim * dm;
        let b = inputs[0];
        let (first, local) = if b < off { (true, b) } else { (false, b - off) };
        let (yi, vi) = (local / dm, local % dm);
        let yu = SparseVec::unit(yi, f);
        let vu = SparseVec::unit(vi, f);
        let a = units(&inputs[1..], f);
        if first {
            y.mu(&chain(objs, &[v, v]), &args(&[&yu, h, &vu], &a))
                .scaled(&f.sign(zspace.degree(yi) - 1))
        } else {
            y.mu(&chain(objs, &[v]), &args(&[&yu, &vu], &a))
        }
    }))
}

/// `Φ_V 𝒴 = Cone(g)` with its connecting maps. `g` is checked closed by the cone construction.
pub fn phi_module(d: &CpTwistData, y: &Arc<AInfModule>) -> Result<ModuleTwist> {
    let hmap = build_h(d, y)?;
    let hcone = cone(&hmap)?;
    let g = build_g(d, y, &hcone.module)?;
    let gcone = cone(&g)?;
    let yv = yoneda_module(&d.cat, d.v);
    let ev = evaluation(d.v, y, &yv);
    Ok(TwistResult {
        object: gcone.module,
        h: Some(hmap),
        g: Some(g),
        ev,
        iota: Some(hcone.iota),
        pi: Some(gcone.pi),
        provenance: Provenance::ProjectiveModule,
    })
}

/// Sizes of the three summands `𝒴(V)⊗𝒱 ⊕ 𝒴(V)[1]⊗𝒱 ⊕ 𝒴` of `Φ_V𝒴` at one object.
#[derive(Clone, Copy)]
struct PhiLayout {
    dm: usize,
    a: usize,
}

impl PhiLayout {
    fn at(d: &CpTwistData, y: &AInfModule, x: usize) -> Self {
        let dm = d.cat.hom(x, d.v).dim();
        PhiLayout {
            dm,
            a: y.space(d.v).dim() * dm,
        }
    }

    /// `(row, y index, v index)`; row 2 puts the `𝒴(X)` index in the second slot.
    fn split(&self, b: usize) -> (usize, usize, usize) {
        if b < self.a {
            (0, b / self.dm, b % self.dm)
        } else if b < 2 * self.a {
            let l = b - self.a;
            (1, l / self.dm, l % self.dm)
        } else {
            (2, b - 2 * self.a, 0)
        }
    }
}

/// `Φ_V𝒴` written directly from the block formulas for `μ¹` and `μ^d`, on the
/// spaces of `phi`. Used to cross-check the double-cone construction.
pub fn explicit_phi_module(d: &CpTwistData, y: &Arc<AInfModule>, phi: &AInfModule) -> Result<AInfModule> {
    check_data(d, y)?;
    let cat = &d.cat;
    let f = cat.field();
    let v = d.v;
    let h = &d.h;
    let zspace = y.space(v).clone();
    let mut out = AInfModule::new(cat.clone(), phi.spaces().to_vec(), phi.arity_bound())?;
    let empty = out.clone();
    for arity in 1..=phi.arity_bound() {
        for (objs, inputs) in empty.basis_inputs(arity) {
            let x0 = objs[0];
            let last = objs[arity - 1];
            let src = PhiLayout::at(d, y, last);
            let tgt = PhiLayout::at(d, y, x0);
            let (row, yi, vi) = src.split(inputs[0]);
            let a = units(&inputs[1..], f);
            let yu = SparseVec::unit(yi, f);
            let vu = SparseVec::unit(vi, f);
            let mut res = SparseVec::new();
            let row1 = |w: &SparseVec| offset(w, 0);
            let row2 = |w: &SparseVec| offset(w, tgt.a);
            let row3 = |w: &SparseVec| offset(w, 2 * tgt.a);
            match row {
                0 | 1 => {
                    let ydeg = zspace.degree(yi);
                    let vdeg = cat.hom(last, v).degree(vi);
                    let place = |w: &SparseVec| if row == 0 { row1(w) } else { row2(w) };
                    // 𝒴(V) ⊗ 𝒱 part, same row
                    if arity == 1 {
                        let dy = y.mu(&[v], &[&yu]);
                        res.add_signed(&place(&tensor_left(&dy, vi, tgt.dm)), vdeg - 1);
                    }
                    let mv = cat.mu(&chain(&objs, &[v]), &args(&[&vu], &a));
                    res.add(&place(&tensor_right(yi, &mv, tgt.dm)));
                    if row == 0 {
                        if arity == 1 {
                            let yh = y.mu(&[v, v], &[&yu, h]);
                            res.add_signed(&row2(&tensor_left(&yh, vi, tgt.dm)), ydeg + vdeg);
                        }
                        let hv = cat.mu(&chain(&objs, &[v, v]), &args(&[h, &vu], &a));
                        res.add_signed(&row2(&tensor_right(yi, &hv, tgt.dm)), ydeg - 1);
                        let yhv = y.mu(&chain(&objs, &[v, v]), &args(&[&yu, h, &vu], &a));
                        res.add_signed(&row3(&yhv), ydeg - 1);
                    } else {
                        res.add(&row3(&y.mu(&chain(&objs, &[v]), &args(&[&yu, &vu], &a))));
                    }
                }
                _ => {
                    res.add(&row3(&y.mu(&objs, &args(&[&yu], &a))));
                }
            }
            if !res.is_zero() {
                out.set_mu(&objs, &inputs, res)?;
            }
        }
    }
    Ok(out)
}

/// `t̂ = Φ_V(t)` for `t: 𝒴 → 𝒵`, given the twists of both ends. Only first-order
/// in the functor sense; its components follow the displayed block formulas.
pub fn phi_on_morphism(
    d: &CpTwistData,
    t: &PreModuleHom,
    phi_y: &ModuleTwist,
    phi_z: &ModuleTwist,
) -> Result<PreModuleHom> {
    let y = &t.source;
    let z = &t.target;
    check_data(d, y)?;
    check_data(d, z)?;
    let cat = &d.cat;
    let f = cat.field();
    let v = d.v;
    let h = &d.h;
    let zspace = y.space(v).clone();
    let max = t.support().max(1);
    let tdeg = t.degree;
    Ok(PreModuleHom::from_fn(
        phi_y.object.clone(),
        phi_z.object.clone(),
        tdeg,
        max,
        |objs, inputs| {
            let arity = objs.len();
            let x0 = objs[0];
            let last = objs[arity - 1];
            let src = PhiLayout::at(d, y, last);
            let tgt = PhiLayout::at(d, z, x0);
            let (row, yi, vi) = src.split(inputs[0]);
            let a = units(&inputs[1..], f);
            let yu = SparseVec::unit(yi, f);
            let vu = SparseVec::unit(vi, f);
            let mut res = SparseVec::new();
            match row {
                0 | 1 => {
                    let ydeg = zspace.degree(yi);
                    let vdeg = cat.hom(last, v).degree(vi);
                    if arity == 1 {
                        let ty = t.eval(&[v], &[&yu]);
                        let w = tensor_left(&ty, vi, tgt.dm);
                        if row == 0 {
                            res.add_signed(&w, vdeg + tdeg);
                            let tyh = t.eval(&[v, v], &[&yu, h]);
                            res.add_signed(&offset(&tensor_left(&tyh, vi, tgt.dm), tgt.a), ydeg + vdeg);
                        } else {
                            res.add_signed(&offset(&w, tgt.a), vdeg - 1);
                        }
                    }
                    let last_row = if row == 0 {
                        t.eval(&chain(&objs, &[v, v]), &args(&[&yu, h, &vu], &a))
                            .scaled(&f.sign(ydeg - 1))
                    } else {
                        t.eval(&chain(&objs, &[v]), &args(&[&yu, &vu], &a))
                    };
                    res.add(&offset(&last_row, 2 * tgt.a));
                }
                _ => {
                    res.add(&offset(&t.eval(&objs, &args(&[&yu], &a)), 2 * tgt.a));
                }
            }
            res
        },
    ))
}
