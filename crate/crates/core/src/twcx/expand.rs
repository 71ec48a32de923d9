use std::collections::HashMap;

use super::{Part, SumHom, SumObject};
use crate::ainfcat::AInfCategory;
use crate::grlin::{Scalar, SparseVec};

#[derive(Clone, Debug)]
pub(crate) struct Step {
    tgt: usize,
    q: usize,
    x: usize,
    alpha: i64,
    xdeg: i64,
    coef: Scalar,
}

/// Entries of a `Σ𝒜` morphism grouped by their source `(summand, basis)`.
#[derive(Clone, Debug, Default)]
pub(crate) struct Outgoing(HashMap<(usize, usize), Vec<Step>>);

impl Outgoing {
    pub(crate) fn new(hom: &SumHom, v: &SparseVec) -> Self {
        let mut map: HashMap<(usize, usize), Vec<Step>> = HashMap::new();
        for (k, c) in v.iter() {
            let p = hom.part(k);
            map.entry((p.src, p.p)).or_default().push(Step {
                tgt: p.tgt,
                q: p.q,
                x: p.x,
                alpha: hom.alpha_degree(k),
                xdeg: hom.x_degree(k),
                coef: c.clone(),
            });
        }
        Outgoing(map)
    }

    fn from(&self, i: usize, p: usize) -> &[Step] {
        self.0.get(&(i, p)).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// One object in the chain together with the differential that may be inserted there.
pub(crate) struct Stage<'a> {
    pub obj: &'a SumObject,
    pub delta: Option<&'a Outgoing>,
}

struct Ctx<'a> {
    cat: &'a AInfCategory,
    stages: &'a [Stage<'a>],
    inputs: &'a [&'a Outgoing],
    out: &'a SumHom,
    min_len: usize,
    bound: usize,
    start: (usize, usize),
    xs: Vec<usize>,
    objs: Vec<usize>,
    acc: SparseVec,
}

/// `Σ μ_{Σ𝒜}(δ_d^{i_d}, a_d, …, a_1, δ_0^{i_0})` over every insertion pattern.
///
/// `inputs` are listed `a_1, …, a_d`. Stages without a differential take no
/// insertions, which gives plain `μ_{Σ𝒜}`. Each term carries the sign
/// `◁ = Σ_{p<q} |α_p|(|x_q| − 1)`.
pub(crate) fn expand(
    cat: &AInfCategory,
    stages: &[Stage<'_>],
    inputs: &[&Outgoing],
    out: &SumHom,
    min_len: usize,
) -> SparseVec {
    debug_assert_eq!(stages.len(), inputs.len() + 1);
    let mut ctx = Ctx {
        cat,
        stages,
        inputs,
        out,
        min_len: min_len.max(1),
        bound: cat.arity_bound(),
        start: (0, 0),
        xs: Vec::new(),
        objs: Vec::new(),
        acc: SparseVec::new(),
    };
    let first = stages[0].obj;
    for i in 0..first.len() {
        for p in 0..first.mult(i).dim() {
            ctx.start = (i, p);
            ctx.objs.clear();
            ctx.objs.push(first.object(i));
            ctx.walk(0, i, p, 0, 0, cat.field().one());
        }
    }
    ctx.acc
}

impl Ctx<'_> {
    fn walk(&mut self, k: usize, i: usize, p: usize, tri: i64, alpha_sum: i64, coef: Scalar) {
        let d = self.inputs.len();
        if k == d && self.xs.len() >= self.min_len {
            self.emit(i, p, tri, &coef);
        }
        if self.xs.len() >= self.bound {
            return;
        }
        let stages = self.stages;
        let inputs = self.inputs;
        if let Some(delta) = stages[k].delta {
            for s in delta.from(i, p) {
                self.push(k, stages[k].obj, s, tri, alpha_sum, &coef);
            }
        }
        if k < d {
            for s in inputs[k].from(i, p) {
                self.push(k + 1, stages[k + 1].obj, s, tri, alpha_sum, &coef);
            }
        }
    }

    fn push(&mut self, k: usize, obj: &SumObject, s: &Step, tri: i64, alpha_sum: i64, coef: &Scalar) {
        self.xs.push(s.x);
        self.objs.push(obj.object(s.tgt));
        self.walk(
            k,
            s.tgt,
            s.q,
            tri + alpha_sum * (s.xdeg - 1),
            alpha_sum + s.alpha,
            coef * &s.coef,
        );
        self.xs.pop();
        self.objs.pop();
    }

    fn emit(&mut self, i: usize, p: usize, tri: i64, coef: &Scalar) {
        let rev: Vec<usize> = self.xs.iter().rev().copied().collect();
        let Some(v) = self.cat.mu_basis(&self.objs, &rev) else {
            return;
        };
        let c = coef * &self.cat.field().sign(tri);
        let (i0, p0) = self.start;
        for (xo, m) in v.iter() {
            let part = Part {
                src: i0,
                p: p0,
                tgt: i,
                q: p,
                x: xo,
            };
            let idx = self.out.index_of(&part).expect("output lies in the chain's hom space");
            self.acc.add_term(idx, &c * m);
        }
    }
}
