//! The projective twist and its adjoint on twisted complexes.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{CpTwistData, Provenance, TwistResult};
use crate::error::{Error, Result};
use crate::grlin::{ChainComplex, Scalar, SparseVec};
use crate::twcx::{
    cone_tw, dual_complex, ev_dual_tw, ev_tw, hom_complex, shifted, tensor_named, tw_mu, Part, TwMorphism, TwistedComplex,
};

pub type TwTwist = TwistResult<Arc<TwistedComplex>, TwMorphism>;

/// Sign pattern `(−1)^{c0 + c1·|z|}`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Sgn(pub i64, pub i64);

impl Sgn {
    fn at(self, deg: i64) -> i64 {
        self.0 + self.1 * deg
    }
}

pub(crate) const H_BAR: Sgn = Sgn(0, 0);
pub(crate) const ID_H: Sgn = Sgn(1, 0);
pub(crate) const G_EV: Sgn = Sgn(0, 0);

fn units(d: &CpTwistData) -> Result<Vec<usize>> {
    d.cat
        .strict_units()
        .map(<[usize]>::to_vec)
        .ok_or_else(|| Error::NotStrictlyUnital("twist on twisted complexes needs strict units".into()))
}

fn h_morphism(d: &CpTwistData, vt: &Arc<TwistedComplex>) -> Result<TwMorphism> {
    let hdeg = d.cat.hom(d.v, d.v).degree_of(&d.h).unwrap_or(2 * d.n as i64);
    let entries: Vec<(Part, Scalar)> = d
        .h
        .iter()
        .map(|(k, c)| (Part { src: 0, p: 0, tgt: 0, q: 0, x: k }, c.clone()))
        .collect();
    TwMorphism::from_parts(vt.clone(), vt.clone(), hdeg, &entries)
}

/// `H: Z[−|h|] ⊗ V → Z ⊗ V`, `H = h̄ ⊗ e − id ⊗ h` with `h̄(z) = μ²(z, h)`.
pub(crate) fn build_h_tw_signed(
    d: &CpTwistData,
    y: &Arc<TwistedComplex>,
    target: &Arc<TwistedComplex>,
    s_bar: Sgn,
    s_id: Sgn,
) -> Result<TwMorphism> {
    let f = d.cat.field();
    let units = units(d)?;
    let vt = Arc::new(TwistedComplex::object(&d.cat, d.v));
    let hm = h_morphism(d, &vt)?;
    let (space, z) = hom_complex(&vt, y);
    let src = Arc::new(tensor_named(
        &z.shift(-hm.degree),
        &vt,
        &units,
        format!("Z[-{}]⊗{}", hm.degree, vt.name()),
    ));
    let mut entries = Vec::new();
    for a in 0..space.dim() {
        let za_deg = space.space.degree(a);
        let za = TwMorphism::new(vt.clone(), y.clone(), za_deg, SparseVec::unit(a, f))?;
        let prod = tw_mu(&[&za, &hm])?;
        for (b, c) in prod.vec.iter() {
            let part = Part { src: a, p: 0, tgt: b, q: 0, x: units[d.v] };
            entries.push((part, c * &f.sign(s_bar.at(za_deg))));
        }
        for (k, c) in d.h.iter() {
            let part = Part { src: a, p: 0, tgt: a, q: 0, x: k };
            entries.push((part, c * &f.sign(s_id.at(za_deg))));
        }
    }
    TwMorphism::from_parts(src, target.clone(), 0, &entries)
}

/// `g = (0, ev): Cone(H) → Y`.
pub(crate) fn build_g_tw_signed(
    ev: &TwMorphism,
    hcal: &Arc<TwistedComplex>,
    n_first: usize,
    s: Sgn,
) -> Result<TwMorphism> {
    let f = ev.target.category().field();
    let entries: Vec<(Part, Scalar)> = ev
        .entries()
        .into_iter()
        .map(|(p, c)| {
            let deg = ev.source.sum().mult(p.src).degree(p.p);
            (Part { src: p.src + n_first, ..p }, &c * &f.sign(s.at(deg)))
        })
        .collect();
    TwMorphism::from_parts(hcal.clone(), ev.target.clone(), 0, &entries)
}

/// `Φ_V Y` for a twisted complex `Y`, built as `Cone(g)` with `g: Cone(H) → Y`.
pub fn phi_tw(d: &CpTwistData, y: &Arc<TwistedComplex>) -> Result<TwTwist> {
    let ev = ev_tw(d.v, y)?;
    let hmap = build_h_tw_signed(d, y, &ev.source, H_BAR, ID_H)?;
    let hcal = Arc::new(cone_tw(&hmap)?);
    let g = build_g_tw_signed(&ev, &hcal, hmap.source.sum().len(), G_EV)?;
    let phi = Arc::new(cone_tw(&g)?.renamed(format!("Φ({})", y.name())));
    Ok(TwistResult {
        object: phi,
        h: Some(hmap),
        g: Some(g),
        ev,
        iota: None,
        pi: None,
        provenance: Provenance::ProjectiveTw,
    })
}

/// Sign pattern `(−1)^{c0 + c1·|t| + c2·|a|}` for one block of `t̂`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Sgn3(pub i64, pub i64, pub i64);

impl Sgn3 {
    fn at(self, t: i64, a: i64) -> i64 {
        self.0 + self.1 * t + self.2 * a
    }
}

pub(crate) const T_TOP: Sgn3 = Sgn3(0, 1, 1);
pub(crate) const T_MID: Sgn3 = Sgn3(1, 0, 0);
pub(crate) const T_LOW: Sgn3 = Sgn3(0, 0, 1);
pub(crate) const T_Y: Sgn3 = Sgn3(0, 0, 0);

/// `t̂: Φ_V Y → Φ_V Z` for `t ∈ hom_{Tw}(Y, Z)`, block lower-triangular with
/// diagonal `(t̄ ⊗ e, t̄ ⊗ e, t)` and `t△ ⊗ e` below, where `t̄(a) = μ²(t, a)`, `t△(a) = μ³(t, a, h)`.
pub fn phi_tw_morphism(d: &CpTwistData, t: &TwMorphism, phi_y: &TwTwist, phi_z: &TwTwist) -> Result<TwMorphism> {
    phi_tw_morphism_signed(d, t, phi_y, phi_z, [T_TOP, T_MID, T_LOW, T_Y])
}

pub(crate) fn phi_tw_morphism_signed(
    d: &CpTwistData,
    t: &TwMorphism,
    phi_y: &TwTwist,
    phi_z: &TwTwist,
    s: [Sgn3; 4],
) -> Result<TwMorphism> {
    let f = d.cat.field();
    let units = units(d)?;
    if !(*t.source == *phi_y.ev.target && *t.target == *phi_z.ev.target) {
        return Err(Error::NotComposable("t must run between the twisted objects".into()));
    }
    let vt = Arc::new(TwistedComplex::object(&d.cat, d.v));
    let hm = h_morphism(d, &vt)?;
    let ys = phi_y.ev.target.clone();
    let na_y = phi_y.ev.source.sum().len();
    let na_z = phi_z.ev.source.sum().len();
    let sp_y = hom_complex(&vt, &ys).0;
    let mut entries = Vec::new();
    let e = units[d.v];
    for a in 0..na_y {
        let adeg = sp_y.space.degree(a);
        let am = TwMorphism::new(vt.clone(), ys.clone(), adeg, SparseVec::unit(a, f))?;
        let bar = tw_mu(&[t, &am])?;
        for (b, c) in bar.vec.iter() {
            let top = Part { src: a, p: 0, tgt: b, q: 0, x: e };
            entries.push((top, c * &f.sign(s[0].at(t.degree, adeg))));
            let low = Part { src: na_y + a, p: 0, tgt: na_z + b, q: 0, x: e };
            entries.push((low, c * &f.sign(s[2].at(t.degree, adeg))));
        }
        let tri = tw_mu(&[t, &am, &hm])?;
        for (b, c) in tri.vec.iter() {
            let mid = Part { src: a, p: 0, tgt: na_z + b, q: 0, x: e };
            entries.push((mid, c * &f.sign(s[1].at(t.degree, adeg))));
        }
    }
    for (p, c) in t.entries() {
        let q = Part { src: p.src + 2 * na_y, tgt: p.tgt + 2 * na_z, ..p };
        entries.push((q, &c * &f.sign(s[3].at(t.degree, 0))));
    }
    TwMorphism::from_parts(phi_y.object.clone(), phi_z.object.clone(), t.degree, &entries)
}

/// `H^∨ = h^∨ ⊗ e − id ⊗ h: D ⊗ V → D[|h|] ⊗ V` with `D = hom_{Tw}(Y, V)^∨` and
/// `h^∨(η)(a) = η(μ²(h, a))`.
pub(crate) fn build_h_dual_signed(
    d: &CpTwistData,
    y: &Arc<TwistedComplex>,
    source: &Arc<TwistedComplex>,
    s_bar: Sgn,
    s_id: Sgn,
) -> Result<TwMorphism> {
    let f = d.cat.field();
    let units = units(d)?;
    let vt = Arc::new(TwistedComplex::object(&d.cat, d.v));
    let hm = h_morphism(d, &vt)?;
    let (space, z) = hom_complex(y, &vt);
    let dual = dual_complex(&z, f);
    let tgt = Arc::new(tensor_named(
        &dual.shift(hm.degree),
        &vt,
        &units,
        format!("D[{}]⊗{}", hm.degree, vt.name()),
    ));
    let mut entries = Vec::new();
    for a in 0..space.dim() {
        let adeg = space.space.degree(a);
        let am = TwMorphism::new(y.clone(), vt.clone(), adeg, SparseVec::unit(a, f))?;
        let prod = tw_mu(&[&hm, &am])?;
        // γ_j ↦ Σ_a [μ²(h, c_a)]_j γ_a
        for (j, c) in prod.vec.iter() {
            let jdeg = dual.space.degree(j);
            let part = Part { src: j, p: 0, tgt: a, q: 0, x: units[d.v] };
            entries.push((part, c * &f.sign(s_bar.at(jdeg))));
        }
    }
    for j in 0..space.dim() {
        let jdeg = dual.space.degree(j);
        for (k, c) in d.h.iter() {
            let part = Part { src: j, p: 0, tgt: j, q: 0, x: k };
            entries.push((part, c * &f.sign(s_id.at(jdeg))));
        }
    }
    TwMorphism::from_parts(source.clone(), tgt, 0, &entries)
}

pub(crate) const HD_BAR: Sgn = Sgn(0, 1);
pub(crate) const HD_ID: Sgn = Sgn(1, 0);
pub(crate) const EVD: Sgn = Sgn(0, 0);

/// `ev^∨` followed by the inclusion of `D ⊗ V` as the first summand of `S^{−1}Cone(H^∨)`.
pub(crate) fn build_ev_dual_into(ev: &TwMorphism, hcal: &Arc<TwistedComplex>, s: Sgn) -> Result<TwMorphism> {
    let f = ev.source.category().field();
    let entries: Vec<(Part, Scalar)> = ev
        .entries()
        .into_iter()
        .map(|(p, c)| {
            let deg = ev.target.sum().mult(p.tgt).degree(p.q);
            (p, &c * &f.sign(s.at(deg)))
        })
        .collect();
    TwMorphism::from_parts(ev.source.clone(), hcal.clone(), 0, &entries)
}

pub(crate) fn phi_adjoint_signed(d: &CpTwistData, y: &Arc<TwistedComplex>, s: [Sgn; 3]) -> Result<TwTwist> {
    let ev = ev_dual_tw(y, d.v)?;
    let hmap = build_h_dual_signed(d, y, &ev.target, s[0], s[1])?;
    let hc = cone_tw(&hmap)?;
    let hcal = Arc::new(shifted(&hc, -1, format!("S^-1{}", hc.name())));
    let g = build_ev_dual_into(&ev, &hcal, s[2])?;
    let c = cone_tw(&g)?;
    let phi = Arc::new(shifted(&c, -1, format!("Φ^∨({})", y.name())));
    Ok(TwistResult {
        object: phi,
        h: Some(hmap),
        g: Some(g),
        ev,
        iota: None,
        pi: None,
        provenance: Provenance::AdjointTw,
    })
}

/// `Φ^∨_V Y = S^{−1}Cone(Y → S^{−1}Cone(H^∨))`, the right adjoint of `Φ_V` on twisted complexes.
pub fn phi_adjoint_tw(d: &CpTwistData, y: &Arc<TwistedComplex>) -> Result<TwTwist> {
    phi_adjoint_signed(d, y, [HD_BAR, HD_ID, EVD])
}

/// Cohomology dimensions of `hom_{Tw}(X, Y)` under `μ¹_{Tw}`, zero entries dropped.
pub fn tw_hom_dims(x: &Arc<TwistedComplex>, y: &Arc<TwistedComplex>) -> BTreeMap<i64, usize> {
    let (_, z): (_, ChainComplex) = hom_complex(x, y);
    z.cohomology(x.category().field()).nonzero_dims()
}
