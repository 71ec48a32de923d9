//! Small named categories used throughout the tests and the command line.

use std::sync::Arc;

use crate::ainfcat::AInfCategory;
use crate::twcx::{cone_tw, shift_tw, Part, TwMorphism, TwistedComplex};
use crate::error::Result;
use crate::grlin::{Field, GradedVectorSpace, Scalar, SparseVec};

/// Basis name of `h^k` in the truncated polynomial fixtures.
pub fn power_name(k: usize) -> String {
    match k {
        0 => "e".into(),
        1 => "h".into(),
        _ => format!("h{k}"),
    }
}

fn truncated_polynomial(n: usize) -> GradedVectorSpace {
    GradedVectorSpace::from_pairs((0..=n).map(|k| (power_name(k), 2 * k as i64)))
        .expect("distinct names")
}

/// One object `V` with `hom(V,V) = 𝕂[h]/h^{n+1}`, `|h| = 2`, only `μ²` nonzero, strict unit `e`.
pub fn fix_p(n: usize, field: Field) -> AInfCategory {
    let mut cat = AInfCategory::new(field, vec!["V".into()], vec![vec![truncated_polynomial(n)]], 2)
        .expect("well-formed");
    for i in 0..=n {
        for j in 0..=n - i {
            cat.set_mu(&[0, 0, 0], &[i, j], SparseVec::unit(i + j, field))
                .expect("degrees add");
        }
    }
    cat.set_strict_units(vec![0]).expect("e has degree 0");
    cat
}

/// `FIX-P(n)` plus an object `W` with `hom(W,W) = 𝕂 e_W` orthogonal to `V`.
pub fn fix_2obj(n: usize, field: Field) -> AInfCategory {
    let single = GradedVectorSpace::from_pairs([("e_W", 0)]).expect("one element");
    let homs = vec![
        vec![truncated_polynomial(n), GradedVectorSpace::zero()],
        vec![GradedVectorSpace::zero(), single],
    ];
    let mut cat =
        AInfCategory::new(field, vec!["V".into(), "W".into()], homs, 2).expect("well-formed");
    for i in 0..=n {
        for j in 0..=n - i {
            cat.set_mu(&[0, 0, 0], &[i, j], SparseVec::unit(i + j, field))
                .expect("degrees add");
        }
    }
    cat.set_mu(&[1, 1, 1], &[0, 0], SparseVec::unit(0, field))
        .expect("degrees add");
    cat.set_strict_units(vec![0, 0]).expect("degree 0 units");
    cat
}

/// A category with the given homs and every structure constant zero.
pub fn zero_mu(field: Field, objects: Vec<String>, homs: Vec<Vec<GradedVectorSpace>>) -> AInfCategory {
    AInfCategory::new(field, objects, homs, 2).expect("well-formed")
}

/// The endomorphism dg algebra of the complex `u, x → y` (`∂x = y`, `|y| = 1`) on basis `E_ij`,
/// with `μ¹(a) = (−1)^{|a|} ∂a` and `μ²(a₂, a₁) = (−1)^{|a₁|} a₂a₁`. Its cohomology is `𝕂` in degree 0.
pub fn end_dg(field: Field) -> AInfCategory {
    let degs = [0i64, 0, 1];
    let dc = |j: usize| if j == 1 { Some(2) } else { None };
    let mut pairs = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            pairs.push((format!("E{i}{j}"), degs[i] - degs[j]));
        }
    }
    let space = GradedVectorSpace::from_pairs(pairs).expect("distinct names");
    let deg: Vec<i64> = (0..9).map(|k| space.degree(k)).collect();
    let mut c = AInfCategory::new(field, vec!["A".into()], vec![vec![space]], 2).expect("well-formed");
    for i in 0..3 {
        for j in 0..3 {
            let k = 3 * i + j;
            // ∂E_ij = ∂ ∘ E_ij − (−1)^{|E_ij|} E_ij ∘ ∂
            let mut d = SparseVec::new();
            if let Some(t) = dc(i) {
                d.add_term(3 * t + j, field.one());
            }
            for s in 0..3 {
                if dc(s) == Some(j) {
                    d.add_signed(&SparseVec::unit(3 * i + s, field), deg[k] + 1);
                }
            }
            c.set_mu(&[0, 0], &[k], d.scaled(&field.sign(deg[k]))).expect("degree 1");
            for l in 0..3 {
                let k2 = 3 * j + l;
                let prod = SparseVec::unit(3 * i + l, field).scaled(&field.sign(deg[k2]));
                c.set_mu(&[0, 0, 0], &[k, k2], prod).expect("degrees add");
            }
        }
    }
    c
}

/// `end_dg` on the basis with `E00` replaced by the identity `I = E00 + E11 + E22`,
/// which makes `I` a strict unit.
pub fn end_dg_unital(field: Field) -> AInfCategory {
    let old = end_dg(field);
    let space = old.hom(0, 0);
    let n = space.dim();
    let identity = SparseVec::from_entries([0, 4, 8].map(|k| (k, field.one())));
    let to_old = |k: usize| if k == 0 { identity.clone() } else { SparseVec::unit(k, field) };
    // E00 = I − E11 − E22
    let to_new = |v: &SparseVec| {
        let mut out = SparseVec::new();
        for (k, c) in v.iter() {
            if k == 0 {
                out.add_term(0, c.clone());
                out.add_term(4, -c);
                out.add_term(8, -c);
            } else {
                out.add_term(k, c.clone());
            }
        }
        out
    };
    let mut pairs = vec![("I".to_string(), 0)];
    pairs.extend((1..n).map(|k| (space.name(k).to_string(), space.degree(k))));
    let new_space = GradedVectorSpace::from_pairs(pairs).expect("distinct names");
    let mut c = AInfCategory::new(field, vec!["A".into()], vec![vec![new_space]], 2).expect("well-formed");
    for k in 0..n {
        let a = to_old(k);
        c.set_mu(&[0, 0], &[k], to_new(&old.mu(&[0, 0], &[&a]))).expect("degree 1");
        for k2 in 0..n {
            let b = to_old(k2);
            c.set_mu(&[0, 0, 0], &[k, k2], to_new(&old.mu(&[0, 0, 0], &[&a, &b])))
                .expect("degrees add");
        }
    }
    c.set_strict_units(vec![0]).expect("I has degree 0");
    c
}

/// `W_h = Cone(h: S^{−2}V → V)` over a fixture whose object 0 has `h` at basis index 1 in degree 2.
pub fn w_h(cat: &Arc<AInfCategory>) -> TwistedComplex {
    cone_of_h(cat, 0, &SparseVec::unit(1, cat.field())).expect("fixture h is closed of degree 2")
}

/// `Cone(h: S^{−2}V → V)` for a closed degree 2 element `h` of `hom(V,V)`, named `W_h`.
pub fn cone_of_h(cat: &Arc<AInfCategory>, v: usize, h: &SparseVec) -> Result<TwistedComplex> {
    let x = Arc::new(TwistedComplex::object(cat, v));
    let s = Arc::new(shift_tw(-2, &x)?);
    let parts: Vec<(Part, Scalar)> = h
        .iter()
        .map(|(k, c)| {
            let part = Part {
                src: 0,
                p: 0,
                tgt: 0,
                q: 0,
                x: k,
            };
            (part, c.clone())
        })
        .collect();
    let t = TwMorphism::from_parts(s, x, 0, &parts)?;
    Ok(cone_tw(&t)?.renamed("W_h"))
}

/// `FIX-P(2)` with the single corrupted entry `μ²(h, h) = e`.
///
/// The entry violates the degree rule, so it is written past the checked setter. The
/// result fails the arity three relation on `(h², h, h)` with residual `h²`.
pub fn corrupt_p2(field: Field) -> AInfCategory {
    let good = fix_p(2, field);
    let mut bad = AInfCategory::new(field, good.objects().to_vec(), vec![vec![good.hom(0, 0).clone()]], 2)
        .expect("well-formed");
    for (key, v) in good.entries() {
        bad.set_mu(&key[..3], &key[3..], v.clone()).expect("copied from a valid table");
    }
    bad.set_mu_unchecked(&[0, 0, 0], &[1, 1], SparseVec::unit(0, field));
    bad.set_strict_units_unchecked(vec![0]);
    bad
}
