use std::sync::Arc;

use super::{mu1_q, AInfModule, MultiTable, PreModuleHom};
use crate::ainfcat::AInfCategory;
use crate::error::{Error, Result};
use crate::grlin::{ChainComplex, GradedVectorSpace, SparseVec};

/// The Yoneda module `X ↦ hom(X, Y)` with the structure maps of the category.
pub fn yoneda_module(cat: &Arc<AInfCategory>, y: usize) -> AInfModule {
    let spaces = (0..cat.num_objects()).map(|x| cat.hom(x, y).clone()).collect();
    let mut m = AInfModule::new(cat.clone(), spaces, cat.arity_bound()).expect("sizes match");
    for (k, v) in cat.entries() {
        let d = (k.len() - 1) / 2;
        if k[d] == y {
            let mut mk = k[..d].to_vec();
            mk.extend_from_slice(&k[d + 1..]);
            m.mu.insert(mk, v.clone());
        }
    }
    m
}

/// `(ℓ¹ t)^d(b, a_{d-1}, ..., a_1) = μ^{d+1}(t, b, a_{d-1}, ..., a_1)` for homogeneous `t ∈ hom(Y, Z)`.
pub fn yoneda_first_order(
    ym: &Arc<AInfModule>,
    zm: &Arc<AInfModule>,
    y: usize,
    z: usize,
    t: &SparseVec,
) -> Result<PreModuleHom> {
    let cat = ym.category();
    let degree = cat
        .hom(y, z)
        .degree_of(t)
        .ok_or_else(|| Error::Degree("ℓ¹ needs a nonzero homogeneous morphism".into()))?;
    let mut table = MultiTable::new();
    for (k, v) in cat.entries() {
        let arity = (k.len() - 1) / 2;
        if arity < 2 || k[arity - 1] != y || k[arity] != z {
            continue;
        }
        if let Some(c) = t.get(k[arity + 1]) {
            let d = arity - 1;
            let mut mk = k[..d].to_vec();
            mk.extend_from_slice(&k[arity + 2..]);
            table.add_to(mk, v, c);
        }
    }
    let mut out = PreModuleHom::zero(ym.clone(), zm.clone(), degree);
    for (k, v) in table.iter() {
        let d = k.len() / 2;
        out.set_component(&k[..d], &k[d..], v.clone())?;
    }
    Ok(out)
}

/// `Z ⊗ M`: `μ¹(z⊗b) = (−1)^{|b|−1} ∂z⊗b + z⊗μ¹b`, `μ^d(z⊗b, …) = z⊗μ^d(b, …)` for `d ≥ 2`.
pub fn tensor_module(z: &ChainComplex, m: &AInfModule) -> AInfModule {
    let f = m.field();
    let zs = &z.space;
    let spaces: Vec<GradedVectorSpace> = m.spaces().iter().map(|s| zs.tensor(s)).collect();
    let mut out = AInfModule::new(m.category().clone(), spaces, m.arity_bound()).expect("sizes match");
    for (k, v) in m.table().iter() {
        let d = k.len() / 2;
        let dim_out = m.space(k[0]).dim();
        let dim_in = m.space(k[d - 1]).dim();
        for zi in 0..zs.dim() {
            let mut nk = k.clone();
            nk[d] = zi * dim_in + k[d];
            out.mu.add_to(nk, &v.remap(|i| Some(zi * dim_out + i)), &f.one());
        }
    }
    for x in 0..m.category().num_objects() {
        let s = m.space(x);
        for zi in 0..zs.dim() {
            let dz = z.differential.column(zi);
            if dz.is_zero() {
                continue;
            }
            for b in 0..s.dim() {
                let v = dz.remap(|j| Some(j * s.dim() + b));
                out.mu.add_to(vec![x, zi * s.dim() + b], &v, &f.sign(s.degree(b) - 1));
            }
        }
    }
    out
}

/// `S^σ M`: same basis names with degrees lowered by `σ`, identical structure maps.
pub fn shift_module(sigma: i64, m: &AInfModule) -> AInfModule {
    let mut out = m.clone();
    out.spaces = m.spaces().iter().map(|s| s.shift(sigma)).collect();
    out
}

/// A mapping cone with its structure maps `ι: M_1 → C` and `π: C → M_0` (degree 1).
#[derive(Clone, Debug)]
pub struct ModuleCone {
    pub module: Arc<AInfModule>,
    pub iota: PreModuleHom,
    pub pi: PreModuleHom,
}

/// `C(X) = M_0(X)[1] ⊕ M_1(X)` with `μ_C((b_0,b_1), …) = (μ_{M_0}(b_0, …), μ_{M_1}(b_1, …) + t(b_0, …))`.
pub fn cone(t: &PreModuleHom) -> Result<ModuleCone> {
    if t.degree != 0 {
        return Err(Error::Degree("cone needs a degree 0 morphism".into()));
    }
    if let Some(msg) = mu1_q(t).describe_nonzero() {
        return Err(Error::NotClosed(msg));
    }
    let m0 = &t.source;
    let m1 = &t.target;
    let f = t.field();
    let spaces: Vec<GradedVectorSpace> = m0
        .spaces()
        .iter()
        .zip(m1.spaces())
        .map(|(a, b)| a.shift(1).direct_sum(b))
        .collect();
    let bound = m0.arity_bound().max(m1.arity_bound()).max(t.support());
    let mut c = AInfModule::new(m0.category().clone(), spaces, bound)?;
    let off = |x: usize| m0.space(x).dim();
    for (k, v) in m0.table().iter() {
        c.mu.add_to(k.clone(), v, &f.one());
    }
    for (k, v) in m1.table().iter() {
        let d = k.len() / 2;
        let mut nk = k.clone();
        nk[d] += off(k[d - 1]);
        let o = off(k[0]);
        c.mu.add_to(nk, &v.remap(|i| Some(i + o)), &f.one());
    }
    for (k, v) in t.table().iter() {
        let o = off(k[0]);
        c.mu.add_to(k.clone(), &v.remap(|i| Some(i + o)), &f.one());
    }
    let c = Arc::new(c);
    let iota = PreModuleHom::from_fn(m1.clone(), c.clone(), 0, 1, |objs, inputs| {
        let x = objs[0];
        SparseVec::unit(inputs[0] + off(x), f).scaled(&f.sign(m1.space(x).degree(inputs[0])))
    });
    let pi = PreModuleHom::from_fn(c.clone(), m0.clone(), 1, 1, |objs, inputs| {
        let x = objs[0];
        let b = inputs[0];
        if b < off(x) {
            SparseVec::unit(b, f).scaled(&f.sign(c.space(x).degree(b)))
        } else {
            SparseVec::new()
        }
    });
    Ok(ModuleCone {
        module: c,
        iota,
        pi,
    })
}

/// `ev: 𝒴(V) ⊗ 𝒱 → 𝒴`, `ev^d(y⊗v, a_{d-1}, ..., a_1) = μ^{d+1}_𝒴(y, v, a_{d-1}, ..., a_1)`.
///
/// `𝒴(V)` carries the differential `μ¹_𝒴`; `yoneda_v` must be the Yoneda module of `v`.
pub fn evaluation(v: usize, ym: &Arc<AInfModule>, yoneda_v: &AInfModule) -> PreModuleHom {
    let source = Arc::new(tensor_module(&ym.complex(v), yoneda_v));
    let cat = ym.category();
    let mut table = MultiTable::new();
    for (k, val) in ym.table().iter() {
        let big = k.len() / 2;
        if big < 2 || k[big - 1] != v {
            continue;
        }
        let d = big - 1;
        let dim_v = cat.hom(k[d - 1], v).dim();
        let mut nk = k[..d].to_vec();
        nk.push(k[big] * dim_v + k[big + 1]);
        nk.extend_from_slice(&k[big + 2..]);
        table.add_to(nk, val, &ym.field().one());
    }
    let mut out = PreModuleHom::zero(source, ym.clone(), 0);
    for (k, val) in table.iter() {
        let d = k.len() / 2;
        out.set_component(&k[..d], &k[d..], val.clone())
            .expect("evaluation has degree 0");
    }
    out
}

/// The comparison `H(Z) ⊗ M → Z ⊗ M` built from cocycle representatives.
pub fn minimize_tensor(z: &ChainComplex, m: &AInfModule) -> PreModuleHom {
    let f = m.field();
    let h = z.cohomology(f);
    let mut reps: Vec<(i64, SparseVec)> = Vec::new();
    for (&k, rs) in &h.representatives {
        reps.extend(rs.iter().map(|r| (k, r.clone())));
    }
    let hspace = GradedVectorSpace::from_pairs(
        reps.iter().enumerate().map(|(i, (k, _))| (format!("[c{i}]"), *k)),
    )
    .expect("distinct names");
    let hz = ChainComplex::with_zero_differential(hspace);
    let source = Arc::new(tensor_module(&hz, m));
    let target = Arc::new(tensor_module(z, m));
    PreModuleHom::from_fn(source, target, 0, 1, |objs, inputs| {
        let s = m.space(objs[0]);
        let (c, b) = (inputs[0] / s.dim(), inputs[0] % s.dim());
        let (deg, rep) = &reps[c];
        rep.remap(|j| Some(j * s.dim() + b)).scaled(&f.sign(deg + s.degree(b)))
    })
}

