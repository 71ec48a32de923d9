use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::ainfcat::AInfCategory;
use super::{check_output, input_spaces, key, module_chains, AInfModule, MultiTable};
use crate::error::{Error, Result};
use crate::grlin::{index_tuples, kernel_image, Field, Scalar, SparseVec};

/// A pre-module homomorphism of degree `r`, stored as a finitely supported table.
///
/// `t^d(b, a_{d-1}, ..., a_1)` lands in `M_1(X_0)` in degree `|b| + Σ|a_i| + r − d + 1`.
#[derive(Clone, Debug)]
pub struct PreModuleHom {
    pub source: Arc<AInfModule>,
    pub target: Arc<AInfModule>,
    pub degree: i64,
    table: MultiTable,
}

impl PartialEq for PreModuleHom {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.table == other.table
            && *self.source == *other.source
            && *self.target == *other.target
    }
}

impl PreModuleHom {
    pub fn zero(source: Arc<AInfModule>, target: Arc<AInfModule>, degree: i64) -> Self {
        PreModuleHom {
            source,
            target,
            degree,
            table: MultiTable::new(),
        }
    }

    /// Builds the table by evaluating `f` on every basis input up to `max_arity`.
    pub fn from_fn(
        source: Arc<AInfModule>,
        target: Arc<AInfModule>,
        degree: i64,
        max_arity: usize,
        mut f: impl FnMut(&[usize], &[usize]) -> SparseVec,
    ) -> Self {
        let mut t = PreModuleHom::zero(source, target, degree);
        for d in 1..=max_arity {
            for (objs, inputs) in t.source.basis_inputs(d) {
                let v = f(&objs, &inputs);
                debug_assert!(
                    check_output(
                        t.source.category(),
                        t.source.spaces(),
                        t.target.spaces(),
                        &objs,
                        &inputs,
                        &v,
                        degree + 1 - d as i64
                    )
                    .is_ok(),
                    "component of wrong degree"
                );
                t.table.insert(key(&objs, &inputs), v);
            }
        }
        t
    }

    pub fn field(&self) -> Field {
        self.source.field()
    }

    pub fn table(&self) -> &MultiTable {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    /// Largest arity with a nonzero component.
    pub fn support(&self) -> usize {
        self.table.max_arity(|len| len / 2)
    }

    pub fn set_component(&mut self, objs: &[usize], inputs: &[usize], out: SparseVec) -> Result<()> {
        let d = inputs.len();
        if d == 0 || objs.len() != d {
            return Err(Error::NotComposable("chain length mismatch".into()));
        }
        check_output(
            self.source.category(),
            self.source.spaces(),
            self.target.spaces(),
            objs,
            inputs,
            &out,
            self.degree + 1 - d as i64,
        )?;
        self.table.insert(key(objs, inputs), out);
        Ok(())
    }

    pub fn component(&self, objs: &[usize], inputs: &[usize]) -> SparseVec {
        self.table.get(&key(objs, inputs)).cloned().unwrap_or_default()
    }

    /// `t^d` on vectors.
    pub fn eval(&self, objs: &[usize], inputs: &[&SparseVec]) -> SparseVec {
        self.table.eval(self.field(), objs, inputs)
    }

    fn same_ends(&self, other: &PreModuleHom) -> Result<()> {
        if self.degree != other.degree || *self.source != *other.source || *self.target != *other.target {
            return Err(Error::Mismatch("homomorphisms live in different spaces".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &PreModuleHom) -> Result<PreModuleHom> {
        self.same_ends(other)?;
        Ok(self.combine(other, &self.field().one()))
    }

    pub fn sub(&self, other: &PreModuleHom) -> Result<PreModuleHom> {
        self.same_ends(other)?;
        Ok(self.combine(other, &self.field().from_i64(-1)))
    }

    fn combine(&self, other: &PreModuleHom, c: &Scalar) -> PreModuleHom {
        let mut out = self.clone();
        for (k, v) in other.table.iter() {
            out.table.add_to(k.clone(), v, c);
        }
        out
    }

    pub fn scaled(&self, c: &Scalar) -> PreModuleHom {
        let mut out = PreModuleHom::zero(self.source.clone(), self.target.clone(), self.degree);
        for (k, v) in self.table.iter() {
            out.table.insert(k.clone(), v.scaled(c));
        }
        out
    }

    /// Describes the first nonzero component, for error messages.
    pub fn describe_nonzero(&self) -> Option<String> {
        let (k, v) = self.table.sorted().into_iter().next()?;
        let d = k.len() / 2;
        let objs = &k[..d];
        let spaces = input_spaces(self.source.category(), self.source.spaces(), objs);
        let names: Vec<&str> = k[d..].iter().zip(&spaces).map(|(&i, s)| s.name(i)).collect();
        let tgt = self.target.space(objs[0]);
        let out: Vec<String> = v.iter().map(|(i, c)| format!("{c}·{}", tgt.name(i))).collect();
        Some(format!("arity {d} on ({}) = {}", names.join(", "), out.join(" + ")))
    }
}

/// Sign exponent `|a_{n+1}| + ... + |a_{d-1}| + |b| − d + n + 1` for a basis input.
fn dagger(degs: &[i64], n: usize) -> i64 {
    // degs[0] = |b|, degs[j] = |a_{d-j}|; a_i with i > n sit at positions < d - n
    let d = degs.len();
    degs[..d - n].iter().sum::<i64>() - d as i64 + n as i64 + 1
}

/// `(μ¹_Q t)^d` on one basis input.
fn mu1_entry(t: &PreModuleHom, objs: &[usize], inputs: &[usize]) -> SparseVec {
    let m0 = &t.source;
    let m1 = &t.target;
    let cat = m0.category();
    let f = t.field();
    let d = inputs.len();
    let spaces = m0.input_spaces(objs);
    let degs: Vec<i64> = spaces.iter().zip(inputs).map(|(s, &i)| s.degree(i)).collect();
    let units: Vec<SparseVec> = inputs.iter().map(|&i| SparseVec::unit(i, f)).collect();
    let mut out = SparseVec::new();
    for n in 0..d {
        let sign = dagger(&degs, n);
        let head: Vec<&SparseVec> = units[..d - n].iter().collect();
        let tail = &units[d - n..];
        // μ_{M1}^{n+1}(t^{d-n}(b, ..., a_{n+1}), a_n, ..., a_1)
        let inner = t.eval(&objs[n..], &head);
        if !inner.is_zero() {
            let mut args = vec![&inner];
            args.extend(tail.iter());
            out.add_signed(&m1.mu(&objs[..=n], &args), sign);
        }
        // t^{n+1}(μ_{M0}^{d-n}(b, ..., a_{n+1}), a_n, ..., a_1)
        let inner = m0.mu(&objs[n..], &head);
        if !inner.is_zero() {
            let mut args = vec![&inner];
            args.extend(tail.iter());
            out.add_signed(&t.eval(&objs[..=n], &args), sign);
        }
        // t^{d-m+1}(b, ..., μ_A^m(a_{n+m}, ..., a_{n+1}), a_n, ..., a_1)
        for m in 1..d - n {
            let lo = d - n - m;
            let hi = d - n;
            let a_in: Vec<&SparseVec> = units[lo..hi].iter().collect();
            let prod = cat.mu(&objs[n..=n + m], &a_in);
            if prod.is_zero() {
                continue;
            }
            let mut args: Vec<&SparseVec> = units[..lo].iter().collect();
            args.push(&prod);
            args.extend(units[hi..].iter());
            let mut o = objs[..=n].to_vec();
            o.extend_from_slice(&objs[n + m..]);
            out.add_signed(&t.eval(&o, &args), sign);
        }
    }
    out
}

/// Basis inputs on which `μ¹_Q t` can be nonzero, derived from the support of `t`.
fn mu1_candidates(t: &PreModuleHom) -> BTreeSet<Vec<usize>> {
    let m0 = &t.source;
    let m1 = &t.target;
    let cat = m0.category();
    let mut out = BTreeSet::new();
    let m0_index = output_index(m0.table());
    let cat_index = category_index(cat);
    let tails_max = m1.arity_bound().saturating_sub(1);
    for (k, _) in t.table.iter() {
        let a = k.len() / 2;
        let (objs, ins) = k.split_at(a);
        out.insert(k.clone());
        // μ_{M1}(t(...), tail)
        for (tobjs, tins) in tails(cat, objs[0], tails_max) {
            let mut o = tobjs;
            o.extend_from_slice(objs);
            let mut i = ins.to_vec();
            i.extend(tins);
            out.insert(key(&o, &i));
        }
        // t(μ_{M0}(...), tail)
        for (mk, _) in m0_index.get(&(objs[a - 1], ins[0])).into_iter().flatten() {
            let j = mk.len() / 2;
            let mut o = objs[..a - 1].to_vec();
            o.extend_from_slice(&mk[..j]);
            let mut i = mk[j..].to_vec();
            i.extend_from_slice(&ins[1..]);
            out.insert(key(&o, &i));
        }
        // t(..., μ_A(run), ...)
        for p in 1..a {
            let (s, e) = (objs[a - p - 1], objs[a - p]);
            for ck in cat_index.get(&(s, e, ins[p])).into_iter().flatten() {
                let m = (ck.len() - 1) / 2;
                let mut o = objs[..a - p].to_vec();
                o.extend_from_slice(&ck[1..m]);
                o.extend_from_slice(&objs[a - p..]);
                let mut i = ins[..p].to_vec();
                i.extend_from_slice(&ck[m + 1..]);
                i.extend_from_slice(&ins[p + 1..]);
                out.insert(key(&o, &i));
            }
        }
    }
    out
}

type OutputIndex<'a> = HashMap<(usize, usize), Vec<(&'a Vec<usize>, &'a SparseVec)>>;

/// Module-shaped table entries grouped by `(first object, output basis index)`.
fn output_index(table: &MultiTable) -> OutputIndex<'_> {
    let mut idx: OutputIndex = HashMap::new();
    for (k, v) in table.iter() {
        for i in v.keys() {
            idx.entry((k[0], i)).or_default().push((k, v));
        }
    }
    idx
}

/// Category entries grouped by `(X_0, X_d, output basis index)`.
fn category_index(cat: &AInfCategory) -> HashMap<(usize, usize, usize), Vec<&Vec<usize>>> {
    let mut idx: HashMap<_, Vec<_>> = HashMap::new();
    for (k, v) in cat.entries() {
        let d = (k.len() - 1) / 2;
        for i in v.keys() {
            idx.entry((k[0], k[d], i)).or_default().push(k);
        }
    }
    idx
}

/// Chains `X_0..X_{n-1}` with basis inputs `a_n, ..., a_1` ending at `end`, for `1 ≤ n ≤ max`.
fn tails(cat: &AInfCategory, end: usize, max: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    let mut frontier = vec![(vec![end], Vec::new())];
    for _ in 0..max {
        let mut next = Vec::new();
        for (objs, ins) in &frontier {
            let first = objs[0];
            for x in 0..cat.num_objects() {
                for b in 0..cat.hom(x, first).dim() {
                    let mut o = vec![x];
                    o.extend_from_slice(objs);
                    let mut i: Vec<usize> = ins.clone();
                    i.push(b);
                    next.push((o, i));
                }
            }
        }
        for (o, i) in &next {
            out.push((o[..o.len() - 1].to_vec(), i.clone()));
        }
        frontier = next;
    }
    out
}

/// The differential of the module category.
pub fn mu1_q(t: &PreModuleHom) -> PreModuleHom {
    let mut out = PreModuleHom::zero(t.source.clone(), t.target.clone(), t.degree + 1);
    for k in mu1_candidates(t) {
        let d = k.len() / 2;
        let v = mu1_entry(t, &k[..d], &k[d..]);
        out.table.insert(k, v);
    }
    out
}

/// Reference evaluation of `μ¹_Q t` over every basis input up to the support bound.
pub fn mu1_q_exhaustive(t: &PreModuleHom) -> PreModuleHom {
    let bound = t.support()
        + t.source
            .arity_bound()
            .max(t.target.arity_bound())
            .max(t.source.category().arity_bound())
        - 1;
    let mut out = PreModuleHom::zero(t.source.clone(), t.target.clone(), t.degree + 1);
    if t.is_zero() {
        return out;
    }
    for d in 1..=bound {
        for (objs, inputs) in t.source.basis_inputs(d) {
            let v = mu1_entry(t, &objs, &inputs);
            out.table.insert(key(&objs, &inputs), v);
        }
    }
    out
}

fn mu2_entry(t2: &PreModuleHom, t1: &PreModuleHom, objs: &[usize], inputs: &[usize]) -> SparseVec {
    let f = t1.field();
    let d = inputs.len();
    let spaces = t1.source.input_spaces(objs);
    let degs: Vec<i64> = spaces.iter().zip(inputs).map(|(s, &i)| s.degree(i)).collect();
    let units: Vec<SparseVec> = inputs.iter().map(|&i| SparseVec::unit(i, f)).collect();
    let mut v = SparseVec::new();
    for n in 0..d {
        let head: Vec<&SparseVec> = units[..d - n].iter().collect();
        let inner = t1.eval(&objs[n..], &head);
        if inner.is_zero() {
            continue;
        }
        let mut args = vec![&inner];
        args.extend(units[d - n..].iter());
        v.add_signed(&t2.eval(&objs[..=n], &args), dagger(&degs, n));
    }
    v
}

/// The composition `μ²_Q(t₂, t₁)` for `t₁: M_0 → M_1`, `t₂: M_1 → M_2`.
pub fn mu2_q(t2: &PreModuleHom, t1: &PreModuleHom) -> Result<PreModuleHom> {
    if *t1.target != *t2.source {
        return Err(Error::NotComposable("target of t1 differs from source of t2".into()));
    }
    let mut out = PreModuleHom::zero(t1.source.clone(), t2.target.clone(), t1.degree + t2.degree);
    let idx = output_index(&t1.table);
    let mut cands = BTreeSet::new();
    for (k2, _) in t2.table.iter() {
        let a = k2.len() / 2;
        for (k1, _) in idx.get(&(k2[a - 1], k2[a])).into_iter().flatten() {
            let j = k1.len() / 2;
            let mut o = k2[..a - 1].to_vec();
            o.extend_from_slice(&k1[..j]);
            let mut i = k1[j..].to_vec();
            i.extend_from_slice(&k2[a + 1..]);
            cands.insert(key(&o, &i));
        }
    }
    for k in cands {
        let d = k.len() / 2;
        let v = mu2_entry(t2, t1, &k[..d], &k[d..]);
        out.table.insert(k, v);
    }
    Ok(out)
}

/// Reference evaluation of `μ²_Q` over every basis input up to the support bound.
pub fn mu2_q_exhaustive(t2: &PreModuleHom, t1: &PreModuleHom) -> Result<PreModuleHom> {
    if *t1.target != *t2.source {
        return Err(Error::NotComposable("target of t1 differs from source of t2".into()));
    }
    let mut out = PreModuleHom::zero(t1.source.clone(), t2.target.clone(), t1.degree + t2.degree);
    if t1.is_zero() || t2.is_zero() {
        return Ok(out);
    }
    for d in 1..t1.support() + t2.support() {
        for (objs, inputs) in t1.source.basis_inputs(d) {
            let v = mu2_entry(t2, t1, &objs, &inputs);
            out.table.insert(key(&objs, &inputs), v);
        }
    }
    Ok(out)
}

/// Every single-entry homomorphism of degree `r` in arities `≤ max_arity`; together a basis.
pub fn hom_basis(
    m0: &Arc<AInfModule>,
    m1: &Arc<AInfModule>,
    r: i64,
    max_arity: usize,
) -> Vec<PreModuleHom> {
    let f = m0.field();
    let cat = m0.category();
    let mut basis = Vec::new();
    for d in 1..=max_arity {
        for objs in module_chains(cat, m0.spaces(), d) {
            let spaces = input_spaces(cat, m0.spaces(), &objs);
            let sizes: Vec<usize> = spaces.iter().map(|s| s.dim()).collect();
            let tgt = m1.space(objs[0]);
            for inputs in index_tuples(&sizes) {
                let deg: i64 = spaces.iter().zip(&inputs).map(|(s, &i)| s.degree(i)).sum::<i64>()
                    + r
                    + 1
                    - d as i64;
                for k in tgt.indices_in_degree(deg) {
                    let mut t = PreModuleHom::zero(m0.clone(), m1.clone(), r);
                    t.table.insert(key(&objs, &inputs), SparseVec::unit(k, f));
                    basis.push(t);
                }
            }
        }
    }
    basis
}

/// A basis of the `μ¹_Q`-closed homomorphisms of degree `r` supported in arities `≤ max_arity`.
pub fn closed_homs(
    m0: &Arc<AInfModule>,
    m1: &Arc<AInfModule>,
    r: i64,
    max_arity: usize,
) -> Vec<PreModuleHom> {
    let f = m0.field();
    let basis = hom_basis(m0, m1, r, max_arity);
    // flatten μ¹_Q of every basis element into one coordinate space
    let mut index: HashMap<(Vec<usize>, usize), usize> = HashMap::new();
    let cols: Vec<SparseVec> = basis
        .iter()
        .map(|t| {
            let img = mu1_q(t);
            let mut col = SparseVec::new();
            for (k, v) in img.table.iter() {
                for (i, c) in v.iter() {
                    let n = index.len();
                    let pos = *index.entry((k.clone(), i)).or_insert(n);
                    col.add_term(pos, c.clone());
                }
            }
            col
        })
        .collect();
    let (kernel, _) = kernel_image(f, &cols);
    kernel
        .iter()
        .map(|z| {
            let mut t = PreModuleHom::zero(m0.clone(), m1.clone(), r);
            for (j, c) in z.iter() {
                for (k, v) in basis[j].table.iter() {
                    t.table.add_to(k.clone(), v, c);
                }
            }
            t
        })
        .collect()
}
