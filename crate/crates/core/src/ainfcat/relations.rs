use rayon::prelude::*;
use serde::Serialize;

use super::AInfCategory;
use crate::grlin::{index_tuples, SparseVec};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RelationFailure {
    pub arity: usize,
    pub objects: Vec<String>,
    /// Basis names of `a_d, ..., a_1`.
    pub inputs: Vec<String>,
    /// Nonzero residual as `(coefficient, basis name)` pairs.
    pub residual: Vec<(String, String)>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationReport {
    pub checked: usize,
    pub failures: Vec<RelationFailure>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Left-hand side of the A∞-relation on one basis chain.
pub fn relation_residual(cat: &AInfCategory, objs: &[usize], inputs: &[usize]) -> SparseVec {
    let d = inputs.len();
    let f = cat.field();
    let spaces = cat.chain_spaces(objs);
    let deg = |i: usize| spaces[d - i].degree(inputs[d - i]);
    let units: Vec<SparseVec> = inputs.iter().map(|&b| SparseVec::unit(b, f)).collect();
    let mut out = SparseVec::new();
    let dmax = cat.arity_bound();
    let mut sign_n = 0i64;
    for n in 0..d {
        if n > 0 {
            sign_n += deg(n) - 1;
        }
        for m in 1..=(d - n).min(dmax) {
            if d - m + 1 > dmax {
                continue;
            }
            // a_{n+1}..a_{n+m} sit at positions d-n-m .. d-n-1
            let lo = d - n - m;
            let hi = d - n;
            let inner_in: Vec<&SparseVec> = units[lo..hi].iter().collect();
            let inner = cat.mu(&objs[n..=n + m], &inner_in);
            if inner.is_zero() {
                continue;
            }
            let mut outer_in: Vec<&SparseVec> = units[..lo].iter().collect();
            outer_in.push(&inner);
            outer_in.extend(units[hi..].iter());
            let mut outer_objs: Vec<usize> = objs[..=n].to_vec();
            outer_objs.extend_from_slice(&objs[n + m..]);
            out.add_signed(&cat.mu(&outer_objs, &outer_in), sign_n);
        }
    }
    out
}

/// Checks the A∞-relations for every arity up to `2·D_max − 1`.
pub fn check_ainf_relations(cat: &AInfCategory) -> RelationReport {
    let top = (2 * cat.arity_bound()).saturating_sub(1);
    let mut jobs = Vec::new();
    for d in 1..=top {
        for objs in cat.chains(d) {
            let sizes: Vec<usize> = cat.chain_spaces(&objs).iter().map(|s| s.dim()).collect();
            for t in index_tuples(&sizes) {
                jobs.push((objs.clone(), t));
            }
        }
    }
    let failures: Vec<RelationFailure> = jobs
        .par_iter()
        .filter_map(|(objs, t)| {
            let r = relation_residual(cat, objs, t);
            if r.is_zero() {
                return None;
            }
            let spaces = cat.chain_spaces(objs);
            let target = cat.hom(objs[0], *objs.last().unwrap());
            Some(RelationFailure {
                arity: t.len(),
                objects: objs.iter().map(|&o| cat.objects()[o].clone()).collect(),
                inputs: t
                    .iter()
                    .zip(&spaces)
                    .map(|(&b, s)| s.name(b).to_string())
                    .collect(),
                residual: r
                    .iter()
                    .map(|(k, c)| (c.to_string(), target.name(k).to_string()))
                    .collect(),
            })
        })
        .collect();
    RelationReport {
        checked: jobs.len(),
        failures,
    }
}
