use std::sync::Arc;

use super::expand::{expand, Outgoing, Stage};
use super::tw::{tw_mu, TwMorphism, TwistedComplex};
use super::{Part, SumHom, SumObject, Summand};
use crate::ainfcat::AInfCategory;
use crate::amod::{AInfModule, PreModuleHom};
use crate::error::{Error, Result};
use crate::grlin::{
    rank_of, solve, BasisElement, ChainComplex, GradedLinearMap, GradedVectorSpace, Scalar, SparseVec,
};

fn alpha_degree(src: &SumObject, tgt: &SumObject, part: &Part) -> i64 {
    tgt.mult(part.tgt).degree(part.q) - src.mult(part.src).degree(part.p)
}

fn require_units(cat: &AInfCategory, what: &str) -> Result<Vec<usize>> {
    cat.strict_units()
        .map(<[usize]>::to_vec)
        .ok_or_else(|| Error::NotStrictlyUnital(format!("{what} needs strict units")))
}

/// `𝕂[σ] ⊗ X`; components of `δ` pick up `(−1)^{σ|α|}`.
pub(crate) fn shifted(x: &TwistedComplex, sigma: i64, name: String) -> TwistedComplex {
    let f = x.category().field();
    let sum = SumObject::new(
        x.sum()
            .summands
            .iter()
            .map(|s| Summand {
                mult: s.mult.shift(sigma),
                object: s.object,
            })
            .collect(),
    );
    let entries: Vec<(Part, Scalar)> = x
        .delta_entries()
        .into_iter()
        .map(|(p, c)| {
            let a = alpha_degree(x.sum(), x.sum(), &p);
            (p, &c * &f.sign(sigma * a))
        })
        .collect();
    TwistedComplex::from_parts(x.category().clone(), name, sum, &entries, x.order().to_vec())
        .expect("shifting keeps every entry")
}

/// `S^σ X = 𝕂[σ] ⊗ X`, with multiplicity degrees lowered by `σ`.
pub fn shift_tw(sigma: i64, x: &TwistedComplex) -> Result<TwistedComplex> {
    require_units(x.category(), "shift of a twisted complex")?;
    Ok(shifted(x, sigma, format!("S^{sigma}{}", x.name())))
}

/// `Cone(t) = (SX ⊕ Y, [[Sδ_X, 0], [−S t, δ_Y]])` for a closed degree 0 morphism `t: X → Y`.
pub fn cone_tw(t: &TwMorphism) -> Result<TwistedComplex> {
    if t.degree != 0 {
        return Err(Error::Degree("cone needs a degree 0 morphism".into()));
    }
    let dt = tw_mu(&[t])?;
    if let Some((k, c)) = dt.vec.iter().next() {
        return Err(Error::NotClosed(format!(
            "μ¹(t) has term {c}·{}",
            dt.space.space.name(k)
        )));
    }
    let (x, y) = (&t.source, &t.target);
    let f = x.category().field();
    let sx = shifted(x, 1, String::new());
    let nx = x.sum().len();
    let mut summands = sx.sum().summands.clone();
    summands.extend(y.sum().summands.iter().cloned());
    let mut entries = sx.delta_entries();
    for (p, c) in y.delta_entries() {
        let q = Part {
            src: p.src + nx,
            tgt: p.tgt + nx,
            ..p
        };
        entries.push((q, c));
    }
    for (p, c) in t.entries() {
        let a = alpha_degree(x.sum(), y.sum(), &p);
        let q = Part {
            tgt: p.tgt + nx,
            ..p
        };
        entries.push((q, -(&c * &f.sign(a))));
    }
    let top = x.order().iter().max().map_or(0, |m| m + 1);
    let mut order = x.order().to_vec();
    order.extend(y.order().iter().map(|o| o + top));
    TwistedComplex::from_parts(
        x.category().clone(),
        format!("Cone({}→{})", x.name(), y.name()),
        SumObject::new(summands),
        &entries,
        order,
    )
}

/// `(Z ⊗ X, id ⊗ δ_X + ∂̃ ⊗ e_X)` with `∂̃(z) = (−1)^{|z|−1} ∂z`.
///
/// Each basis vector of `Z` contributes its own copy of the summands of `X`;
/// filtration ranks follow the degree of `z` so that `∂̃` is strictly lower-triangular.
pub fn tensor_tw(z: &ChainComplex, x: &TwistedComplex) -> Result<TwistedComplex> {
    let units = require_units(x.category(), "tensor product with a twisted complex")?;
    Ok(tensor_named(z, x, &units, format!("Z⊗{}", x.name())))
}

pub(crate) fn tensor_named(z: &ChainComplex, x: &TwistedComplex, units: &[usize], name: String) -> TwistedComplex {
    let f = x.category().field();
    let zs = &z.space;
    let n = x.sum().len();
    let min_deg = (0..zs.dim()).map(|a| zs.degree(a)).min().unwrap_or(0);
    let top = x.order().iter().max().map_or(0, |m| m + 1);
    let mut summands = Vec::with_capacity(zs.dim() * n);
    let mut order = Vec::with_capacity(zs.dim() * n);
    for a in 0..zs.dim() {
        for (i, s) in x.sum().summands.iter().enumerate() {
            let basis = s
                .mult
                .basis()
                .iter()
                .map(|b| BasisElement::new(format!("{}⊗{}", zs.name(a), b.name), zs.degree(a) + b.degree))
                .collect();
            summands.push(Summand {
                mult: GradedVectorSpace::new(basis).expect("names stay distinct"),
                object: s.object,
            });
            order.push((zs.degree(a) - min_deg) as usize * top + x.order()[i]);
        }
    }
    let mut entries = Vec::new();
    for a in 0..zs.dim() {
        let za = zs.degree(a);
        for (p, c) in x.delta_entries() {
            let al = alpha_degree(x.sum(), x.sum(), &p);
            let q = Part {
                src: a * n + p.src,
                tgt: a * n + p.tgt,
                ..p
            };
            entries.push((q, &c * &f.sign(al * za)));
        }
        for (b, c) in z.differential.column(a).iter() {
            let c = c * &f.sign(za - 1);
            for (i, s) in x.sum().summands.iter().enumerate() {
                for p in 0..s.mult.dim() {
                    let q = Part {
                        src: a * n + i,
                        p,
                        tgt: b * n + i,
                        q: p,
                        x: units[s.object],
                    };
                    entries.push((q, c.clone()));
                }
            }
        }
    }
    TwistedComplex::from_parts(x.category().clone(), name, SumObject::new(summands), &entries, order)
        .expect("tensor entries lie in the endomorphism space")
}

/// `hom_{Tw𝒜}(X, Y)` as a chain complex under `μ¹_{Tw}`, on the elementary basis.
pub(crate) fn hom_complex(x: &Arc<TwistedComplex>, y: &Arc<TwistedComplex>) -> (Arc<SumHom>, ChainComplex) {
    let space = Arc::new(SumHom::new(x.category(), x.sum(), y.sum()));
    let f = x.category().field();
    let cols = (0..space.dim())
        .map(|k| {
            let m = TwMorphism::in_space(
                x.clone(),
                y.clone(),
                space.clone(),
                space.space.degree(k),
                SparseVec::unit(k, f),
            )
            .expect("basis element is homogeneous");
            tw_mu(&[&m]).expect("single input").vec
        })
        .collect();
    let d = GradedLinearMap::new(space.space.clone(), space.space.clone(), 1, cols)
        .expect("μ¹ has degree 1");
    (space, ChainComplex::new(d).expect("μ¹ squares to zero on a valid twisted complex"))
}

/// `ev: hom_{Tw}(V, Y) ⊗ V → Y`, `ev = Σ β_i ⊗ b_i` over the elementary basis of `hom_{Tw}(V, Y)`.
pub fn ev_tw(v: usize, y: &Arc<TwistedComplex>) -> Result<TwMorphism> {
    let f = y.category().field();
    let vt = Arc::new(TwistedComplex::object(y.category(), v));
    let dim = SumHom::new(y.category(), vt.sum(), y.sum()).dim();
    let basis: Vec<SparseVec> = (0..dim).map(|k| SparseVec::unit(k, f)).collect();
    ev_tw_in_basis(v, y, &basis)
}

/// `ev` built from a chosen homogeneous basis `{b_i}` of `hom_{Tw}(V, Y)`, given in elementary coordinates.
///
/// The multiplicity complex is `hom_{Tw}(V, Y)` written in that basis, under the unsigned `μ¹_{Tw}`.
pub fn ev_tw_in_basis(v: usize, y: &Arc<TwistedComplex>, basis: &[SparseVec]) -> Result<TwMorphism> {
    let cat = y.category();
    let units = require_units(cat, "evaluation")?;
    let vt = Arc::new(TwistedComplex::object(cat, v));
    let (space, z) = hom_complex(&vt, y);
    let f = cat.field();
    let z = rebase(&z, basis, f)?;
    let src = Arc::new(tensor_named(
        &z,
        &vt,
        &units,
        format!("hom({},{})⊗{}", vt.name(), y.name(), vt.name()),
    ));
    let mut entries = Vec::new();
    for (i, b) in basis.iter().enumerate() {
        let bdeg = z.space.degree(i);
        for (k, c) in b.iter() {
            let p = space.part(k);
            let q = Part { src: i, p: 0, ..p };
            // matches ℓ̃(ev) with the module evaluation term by term
            entries.push((q, c * &f.sign(bdeg * (space.x_degree(k) - 1))));
        }
    }
    TwMorphism::from_parts(src, y.clone(), 0, &entries)
}

/// The complex `z` rewritten in the homogeneous basis `basis` (coordinates in the old basis).
fn rebase(z: &ChainComplex, basis: &[SparseVec], f: crate::grlin::Field) -> Result<ChainComplex> {
    let zs = &z.space;
    if basis.len() != zs.dim() {
        return Err(Error::Mismatch("basis has the wrong size".into()));
    }
    let mut elems = Vec::with_capacity(basis.len());
    for (i, b) in basis.iter().enumerate() {
        let d = zs
            .degree_of(b)
            .ok_or_else(|| Error::Degree("basis vectors must be nonzero and homogeneous".into()))?;
        elems.push(BasisElement::new(format!("b{i}"), d));
    }
    let space = GradedVectorSpace::new(elems)?;
    let mut cols = Vec::with_capacity(basis.len());
    for b in basis {
        let image = z.differential.apply(b);
        let coords = solve(f, basis, &image)
            .ok_or_else(|| Error::Mismatch("vectors do not form a basis".into()))?;
        cols.push(SparseVec::from_entries(coords.into_iter().enumerate()));
    }
    if rank_of(f, basis) != basis.len() {
        return Err(Error::Mismatch("vectors do not form a basis".into()));
    }
    ChainComplex::new(GradedLinearMap::new(space.clone(), space, 1, cols)?)
}

/// `ev^∨: Y → hom_{Tw}(Y, V)^∨ ⊗ V`, `ev^∨ = Σ γ_j ⊗ c_j` over the elementary basis of `hom_{Tw}(Y, V)`.
pub fn ev_dual_tw(y: &Arc<TwistedComplex>, v: usize) -> Result<TwMorphism> {
    let cat = y.category();
    let units = require_units(cat, "dual evaluation")?;
    let vt = Arc::new(TwistedComplex::object(cat, v));
    let (space, z) = hom_complex(y, &vt);
    let f = cat.field();
    let dual = dual_complex(&z, f);
    let tgt = Arc::new(tensor_named(
        &dual,
        &vt,
        &units,
        format!("hom({},{})^∨⊗{}", y.name(), vt.name(), vt.name()),
    ));
    let mut entries = Vec::new();
    for k in 0..space.dim() {
        let p = space.part(k);
        let q = Part { tgt: k, q: 0, ..p };
        entries.push((q, f.one()));
    }
    TwMorphism::from_parts(y.clone(), tgt, 0, &entries)
}

/// `Z^∨` on the dual basis `γ_j` (degree `−|c_j|`), with `(∂^∨γ)(c) = (−1)^{|γ|} γ(∂c)`.
pub(crate) fn dual_complex(z: &ChainComplex, f: crate::grlin::Field) -> ChainComplex {
    let zs = &z.space;
    let space = GradedVectorSpace::new(
        zs.basis()
            .iter()
            .map(|b| BasisElement::new(format!("{}^∨", b.name), -b.degree))
            .collect(),
    )
    .expect("names stay distinct");
    let mut cols = vec![SparseVec::new(); zs.dim()];
    for i in 0..zs.dim() {
        for (j, c) in z.differential.column(i).iter() {
            // ∂c_i = Σ_j c·c_j, so γ_j ↦ ±c·γ_i
            let s = f.sign(space.degree(j));
            cols[j].add_term(i, c * &s);
        }
    }
    let d = GradedLinearMap::new(space.clone(), space, 1, cols).expect("dual differential has degree 1");
    ChainComplex::new(d).expect("dual of a differential squares to zero")
}

/// The module `W ↦ hom_{Tw𝒜}(𝕂 ⊗ W, X)` pulled back along `𝒜 ⊂ Tw𝒜`.
pub fn tw_to_module(x: &TwistedComplex) -> AInfModule {
    let cat = x.category().clone();
    let f = cat.field();
    let n = cat.num_objects();
    let singles: Vec<SumObject> = (0..n).map(SumObject::single).collect();
    let spaces: Vec<SumHom> = singles.iter().map(|s| SumHom::new(&cat, s, x.sum())).collect();
    let cat_homs: Vec<Vec<SumHom>> = singles
        .iter()
        .map(|a| singles.iter().map(|b| SumHom::new(&cat, a, b)).collect())
        .collect();
    let mut m = AInfModule::new(
        cat.clone(),
        spaces.iter().map(|s| s.space.clone()).collect(),
        cat.arity_bound(),
    )
    .expect("one space per object");
    let delta = x.outgoing();
    for d in 1..=cat.arity_bound() {
        for objs in cat.chains(d - 1) {
            let w = objs[d - 1];
            let mut stages: Vec<Stage> = objs
                .iter()
                .map(|&o| Stage {
                    obj: &singles[o],
                    delta: None,
                })
                .collect();
            stages.push(Stage {
                obj: x.sum(),
                delta: Some(&delta),
            });
            let target = &spaces[objs[0]];
            let mut slot_dims = vec![spaces[w].dim()];
            slot_dims.extend((1..d).map(|j| cat.hom(objs[d - j - 1], objs[d - j]).dim()));
            for tuple in crate::grlin::index_tuples(&slot_dims) {
                let mut outs: Vec<Outgoing> = (1..d)
                    .rev()
                    .map(|j| {
                        let h = &cat_homs[objs[d - j - 1]][objs[d - j]];
                        Outgoing::new(h, &SparseVec::unit(tuple[j], f))
                    })
                    .collect();
                outs.push(Outgoing::new(&spaces[w], &SparseVec::unit(tuple[0], f)));
                let refs: Vec<&Outgoing> = outs.iter().collect();
                let v = expand(&cat, &stages, &refs, target, 1);
                if !v.is_zero() {
                    m.set_mu_unchecked(&objs, &tuple, v);
                }
            }
        }
    }
    m
}

/// First-order part of `ℓ̃(t)`: `(ℓ̃ t)^d(b, a_{d-1}, …, a_1) = μ^{d+1}_{Tw}(t, b, a_{d-1}, …, a_1)`.
pub fn tw_to_module_mor(t: &TwMorphism, mx: &Arc<AInfModule>, my: &Arc<AInfModule>) -> Result<PreModuleHom> {
    let x = &t.source;
    let y = &t.target;
    let cat = x.category().clone();
    let f = cat.field();
    let n = cat.num_objects();
    let singles: Vec<SumObject> = (0..n).map(SumObject::single).collect();
    let xs: Vec<SumHom> = singles.iter().map(|s| SumHom::new(&cat, s, x.sum())).collect();
    let ys: Vec<SumHom> = singles.iter().map(|s| SumHom::new(&cat, s, y.sum())).collect();
    let cat_homs: Vec<Vec<SumHom>> = singles
        .iter()
        .map(|a| singles.iter().map(|b| SumHom::new(&cat, a, b)).collect())
        .collect();
    let (dx, dy) = (x.outgoing(), y.outgoing());
    let tout = t.outgoing();
    let mut out = PreModuleHom::zero(mx.clone(), my.clone(), t.degree);
    for d in 1..cat.arity_bound() {
        for objs in cat.chains(d - 1) {
            let w = objs[d - 1];
            let mut stages: Vec<Stage> = objs
                .iter()
                .map(|&o| Stage {
                    obj: &singles[o],
                    delta: None,
                })
                .collect();
            stages.push(Stage {
                obj: x.sum(),
                delta: Some(&dx),
            });
            stages.push(Stage {
                obj: y.sum(),
                delta: Some(&dy),
            });
            let mut slot_dims = vec![xs[w].dim()];
            slot_dims.extend((1..d).map(|j| cat.hom(objs[d - j - 1], objs[d - j]).dim()));
            for tuple in crate::grlin::index_tuples(&slot_dims) {
                let mut outs: Vec<Outgoing> = (1..d)
                    .rev()
                    .map(|j| {
                        let h = &cat_homs[objs[d - j - 1]][objs[d - j]];
                        Outgoing::new(h, &SparseVec::unit(tuple[j], f))
                    })
                    .collect();
                outs.push(Outgoing::new(&xs[w], &SparseVec::unit(tuple[0], f)));
                let mut refs: Vec<&Outgoing> = outs.iter().collect();
                refs.push(&tout);
                let v = expand(&cat, &stages, &refs, &ys[objs[0]], 1);
                if !v.is_zero() {
                    out.set_component(&objs, &tuple, v)?;
                }
            }
        }
    }
    Ok(out)
}
