use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{input_spaces, key, module_chains, mu1_q, AInfModule, PreModuleHom};
use crate::error::{Error, Result};
use crate::grlin::{index_tuples, kernel_image, SparseVec};

/// Degree-`r` normalized pre-module homs: components vanish whenever an algebra
/// input is a strict unit. Each basis element is one `(key, target index)` entry.
///
/// The space is finite because every non-unit morphism has degree at least 2,
/// which bounds the arity for fixed `r`.
pub fn normalized_basis(m0: &AInfModule, m1: &AInfModule, r: i64) -> Result<Vec<(Vec<usize>, usize)>> {
    let cat = m0.category();
    let units = cat
        .strict_units()
        .ok_or_else(|| Error::NotStrictlyUnital("normalized homs need strict units".into()))?;
    let n = cat.num_objects();
    let mut g: Option<i64> = None;
    for x in 0..n {
        for y in 0..n {
            let h = cat.hom(x, y);
            for i in 0..h.dim() {
                if !(x == y && i == units[x]) {
                    g = Some(g.map_or(h.degree(i), |v| v.min(h.degree(i))));
                }
            }
        }
    }
    let degs = |m: &AInfModule| -> Option<(i64, i64)> {
        let ks: Vec<i64> = m.spaces().iter().flat_map(|s| s.degree_support()).collect();
        Some((*ks.iter().min()?, *ks.iter().max()?))
    };
    let (Some((min_m, _)), Some((_, max_n))) = (degs(m0), degs(m1)) else {
        return Ok(Vec::new());
    };
    let slack = max_n - min_m - r;
    if slack < 0 {
        return Ok(Vec::new());
    }
    let max_arity = match g {
        None => 1,
        Some(g) if g <= 1 => {
            return Err(Error::Degree(
                "non-unit morphisms of degree ≤ 1 make normalized homs unbounded".into(),
            ))
        }
        Some(g) => 1 + (slack / (g - 1)) as usize,
    };
    let mut out = Vec::new();
    for d in 1..=max_arity {
        for objs in module_chains(cat, m0.spaces(), d) {
            let spaces = input_spaces(cat, m0.spaces(), &objs);
            // algebra input at position j is a_{d-j} ∈ hom(X_{d-j-1}, X_{d-j})
            let choices: Vec<Vec<usize>> = spaces
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    (0..s.dim())
                        .filter(|&i| {
                            j == 0 || {
                                let (a, b) = (objs[d - j - 1], objs[d - j]);
                                !(a == b && i == units[a])
                            }
                        })
                        .collect()
                })
                .collect();
            let sizes: Vec<usize> = choices.iter().map(Vec::len).collect();
            let tgt = m1.space(objs[0]);
            for t in index_tuples(&sizes) {
                let inputs: Vec<usize> = t.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
                let deg: i64 = spaces.iter().zip(&inputs).map(|(s, &i)| s.degree(i)).sum::<i64>()
                    + r
                    + 1
                    - d as i64;
                for k in tgt.indices_in_degree(deg) {
                    out.push((key(&objs, &inputs), k));
                }
            }
        }
    }
    Ok(out)
}

fn single(m0: &Arc<AInfModule>, m1: &Arc<AInfModule>, r: i64, k: &[usize], i: usize) -> PreModuleHom {
    let mut t = PreModuleHom::zero(m0.clone(), m1.clone(), r);
    let d = k.len() / 2;
    t.set_component(&k[..d], &k[d..], SparseVec::unit(i, m0.field()))
        .expect("basis entries have the right degree");
    t
}

/// Matrix of `μ¹_Q` from degree `r` to degree `r + 1` normalized homs, column per basis element.
fn differential(
    m0: &Arc<AInfModule>,
    m1: &Arc<AInfModule>,
    r: i64,
) -> Result<(Vec<(Vec<usize>, usize)>, Vec<SparseVec>)> {
    let src = normalized_basis(m0, m1, r)?;
    let tgt = normalized_basis(m0, m1, r + 1)?;
    let pos: HashMap<(Vec<usize>, usize), usize> =
        tgt.into_iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut cols = Vec::with_capacity(src.len());
    for (k, i) in &src {
        let img = mu1_q(&single(m0, m1, r, k, *i));
        let mut col = SparseVec::new();
        for (ik, v) in img.table().iter() {
            for (j, c) in v.iter() {
                let p = pos.get(&(ik.clone(), j)).ok_or_else(|| {
                    Error::NotStrictlyUnital("normalized homs are not closed under μ¹_Q".into())
                })?;
                col.add_term(*p, c.clone());
            }
        }
        cols.push(col);
    }
    Ok((src, cols))
}

/// `dim Hom^r_{H(Q)}(M_0, M_1)`.
pub fn hom_h_dim(m0: &Arc<AInfModule>, m1: &Arc<AInfModule>, r: i64) -> Result<usize> {
    let f = m0.field();
    let (src, cols) = differential(m0, m1, r)?;
    let (_, img) = kernel_image(f, &cols);
    let (_, cols_prev) = differential(m0, m1, r - 1)?;
    let (_, img_prev) = kernel_image(f, &cols_prev);
    Ok(src.len() - img.len() - img_prev.len())
}

/// Nonzero `dim Hom^r_{H(Q)}` for `r` in `lo..=hi`.
pub fn hom_h_dims(
    m0: &Arc<AInfModule>,
    m1: &Arc<AInfModule>,
    lo: i64,
    hi: i64,
) -> Result<BTreeMap<i64, usize>> {
    let mut out = BTreeMap::new();
    for r in lo..=hi {
        let d = hom_h_dim(m0, m1, r)?;
        if d > 0 {
            out.insert(r, d);
        }
    }
    Ok(out)
}

/// A basis of the closed normalized homs of degree `r`.
pub fn normalized_closed_homs(m0: &Arc<AInfModule>, m1: &Arc<AInfModule>, r: i64) -> Result<Vec<PreModuleHom>> {
    let (src, cols) = differential(m0, m1, r)?;
    let (ker, _) = kernel_image(m0.field(), &cols);
    Ok(ker
        .iter()
        .map(|z| {
            let mut t = PreModuleHom::zero(m0.clone(), m1.clone(), r);
            for (j, c) in z.iter() {
                let (k, i) = &src[j];
                t = t.add(&single(m0, m1, r, k, *i).scaled(c)).expect("same space");
            }
            t
        })
        .collect())
}
