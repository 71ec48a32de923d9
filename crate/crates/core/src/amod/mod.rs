//! Right A∞-modules, pre-module homomorphisms and the dg category they form.

mod constructions;
mod hom;
mod homh;
mod quasi;
mod table;

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

pub use constructions::{
    cone, evaluation, minimize_tensor, shift_module, tensor_module, yoneda_first_order,
    yoneda_module, ModuleCone,
};
pub use hom::{
    closed_homs, hom_basis, mu1_q, mu1_q_exhaustive, mu2_q, mu2_q_exhaustive, PreModuleHom,
};
pub use homh::{hom_h_dim, hom_h_dims, normalized_basis, normalized_closed_homs};
pub use quasi::{h_of_t, module_cohomology, quasi_iso_check, InducedMap, QuasiIsoVerdict};
pub use table::MultiTable;

use crate::ainfcat::AInfCategory;
use crate::error::{Error, Result};
use crate::grlin::{index_tuples, ChainComplex, Field, GradedLinearMap, GradedVectorSpace, SparseVec};

/// A module over `cat`. Structure maps are keyed by `X_0..X_{d-1}` followed by
/// the basis indices of `b ∈ M(X_{d-1})` and `a_{d-1}, ..., a_1`.
#[derive(Clone, Debug)]
pub struct AInfModule {
    cat: Arc<AInfCategory>,
    spaces: Vec<GradedVectorSpace>,
    mu: MultiTable,
    arity_bound: usize,
}

impl PartialEq for AInfModule {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.cat, &other.cat) || self.cat.same_table(&other.cat))
            && self.spaces == other.spaces
            && self.mu == other.mu
    }
}

impl AInfModule {
    pub fn new(cat: Arc<AInfCategory>, spaces: Vec<GradedVectorSpace>, arity_bound: usize) -> Result<Self> {
        if spaces.len() != cat.num_objects() {
            return Err(Error::Mismatch("one space per object required".into()));
        }
        Ok(AInfModule {
            cat,
            spaces,
            mu: MultiTable::new(),
            arity_bound,
        })
    }

    pub fn zero(cat: Arc<AInfCategory>) -> Self {
        let n = cat.num_objects();
        AInfModule::new(cat, vec![GradedVectorSpace::zero(); n], 1).expect("sizes match")
    }

    pub fn category(&self) -> &Arc<AInfCategory> {
        &self.cat
    }

    pub fn field(&self) -> Field {
        self.cat.field()
    }

    pub fn space(&self, x: usize) -> &GradedVectorSpace {
        &self.spaces[x]
    }

    pub fn spaces(&self) -> &[GradedVectorSpace] {
        &self.spaces
    }

    pub fn arity_bound(&self) -> usize {
        self.arity_bound
    }

    pub fn table(&self) -> &MultiTable {
        &self.mu
    }

    /// Spaces of the inputs `b, a_{d-1}, ..., a_1` along `X_0..X_{d-1}`.
    pub fn input_spaces<'a>(&'a self, objs: &[usize]) -> Vec<&'a GradedVectorSpace> {
        input_spaces(&self.cat, &self.spaces, objs)
    }

    /// Total degree of a basis input tuple.
    pub fn input_degree(&self, objs: &[usize], inputs: &[usize]) -> i64 {
        self.input_spaces(objs)
            .iter()
            .zip(inputs)
            .map(|(s, &i)| s.degree(i))
            .sum()
    }

    pub fn set_mu(&mut self, objs: &[usize], inputs: &[usize], out: SparseVec) -> Result<()> {
        let d = inputs.len();
        if d == 0 || objs.len() != d {
            return Err(Error::NotComposable("chain length mismatch".into()));
        }
        if d > self.arity_bound {
            return Err(Error::Arity {
                arity: d,
                bound: self.arity_bound,
            });
        }
        check_output(&self.cat, &self.spaces, &self.spaces, objs, inputs, &out, 2 - d as i64)?;
        self.mu.insert(key(objs, inputs), out);
        Ok(())
    }

    /// Stores an entry without validation, for mutation tests.
    pub fn set_mu_unchecked(&mut self, objs: &[usize], inputs: &[usize], out: SparseVec) {
        self.mu.insert(key(objs, inputs), out);
    }

    /// `μ^d_M(b, a_{d-1}, ..., a_1)` along `X_0..X_{d-1}`.
    pub fn mu(&self, objs: &[usize], inputs: &[&SparseVec]) -> SparseVec {
        if inputs.len() > self.arity_bound {
            return SparseVec::new();
        }
        self.mu.eval(self.field(), objs, inputs)
    }

    /// `M(x)` with differential `μ¹_M`.
    pub fn complex(&self, x: usize) -> ChainComplex {
        let space = self.spaces[x].clone();
        let f = self.field();
        let cols = (0..space.dim())
            .map(|i| self.mu(&[x], &[&SparseVec::unit(i, f)]))
            .collect();
        let d = GradedLinearMap::new(space.clone(), space, 1, cols).expect("μ¹ has degree 1");
        ChainComplex::new(d).expect("μ¹ squares to zero")
    }

    /// Object chains `X_0..X_{d-1}` with `M(X_{d-1})` and every hom along the chain nonzero.
    pub fn chains(&self, d: usize) -> Vec<Vec<usize>> {
        module_chains(&self.cat, &self.spaces, d)
    }

    /// Every basis input `(objs, indices)` of arity `d`.
    pub fn basis_inputs(&self, d: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut out = Vec::new();
        for objs in self.chains(d) {
            let sizes: Vec<usize> = self.input_spaces(&objs).iter().map(|s| s.dim()).collect();
            for t in index_tuples(&sizes) {
                out.push((objs.clone(), t));
            }
        }
        out
    }
}

pub(crate) fn key(objs: &[usize], inputs: &[usize]) -> Vec<usize> {
    objs.iter().chain(inputs).copied().collect()
}

pub(crate) fn input_spaces<'a>(
    cat: &'a AInfCategory,
    spaces: &'a [GradedVectorSpace],
    objs: &[usize],
) -> Vec<&'a GradedVectorSpace> {
    let d = objs.len();
    let mut out = vec![&spaces[objs[d - 1]]];
    for j in 1..d {
        // a_{d-j} ∈ hom(X_{d-j-1}, X_{d-j})
        out.push(cat.hom(objs[d - j - 1], objs[d - j]));
    }
    out
}

pub(crate) fn module_chains(cat: &AInfCategory, spaces: &[GradedVectorSpace], d: usize) -> Vec<Vec<usize>> {
    let n = cat.num_objects();
    let mut out: Vec<Vec<usize>> = (0..n).map(|x| vec![x]).collect();
    for _ in 1..d {
        let mut next = Vec::new();
        for c in &out {
            let last = *c.last().unwrap();
            for y in 0..n {
                if !cat.hom(last, y).is_zero() {
                    let mut c2 = c.clone();
                    c2.push(y);
                    next.push(c2);
                }
            }
        }
        out = next;
    }
    out.retain(|c| !spaces[*c.last().unwrap()].is_zero());
    out
}

/// Validates that `out ∈ target(X_0)` has degree `|inputs| + shift`.
pub(crate) fn check_output(
    cat: &AInfCategory,
    source: &[GradedVectorSpace],
    target: &[GradedVectorSpace],
    objs: &[usize],
    inputs: &[usize],
    out: &SparseVec,
    shift: i64,
) -> Result<()> {
    if objs.iter().any(|&o| o >= cat.num_objects()) {
        return Err(Error::UnknownObject(format!("{objs:?}")));
    }
    let spaces = input_spaces(cat, source, objs);
    let mut deg = shift;
    for (s, &i) in spaces.iter().zip(inputs) {
        if i >= s.dim() {
            return Err(Error::UnknownBasis(format!("index {i}")));
        }
        deg += s.degree(i);
    }
    let t = &target[objs[0]];
    for k in out.keys() {
        if k >= t.dim() || t.degree(k) != deg {
            return Err(Error::Degree(format!(
                "output of arity {} must have degree {deg}",
                inputs.len()
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ModuleFailure {
    pub arity: usize,
    pub objects: Vec<String>,
    pub inputs: Vec<String>,
    pub residual: Vec<(String, String)>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ModuleReport {
    pub checked: usize,
    pub failures: Vec<ModuleFailure>,
}

impl ModuleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Left-hand side of the module relation on one basis input.
pub fn module_residual(m: &AInfModule, objs: &[usize], inputs: &[usize]) -> SparseVec {
    let cat = &m.cat;
    let f = m.field();
    let d = inputs.len();
    let spaces = m.input_spaces(objs);
    let units: Vec<SparseVec> = inputs.iter().map(|&i| SparseVec::unit(i, f)).collect();
    // a_i sits at position d - i
    let deg_a = |i: usize| spaces[d - i].degree(inputs[d - i]);
    let mut out = SparseVec::new();
    let mut kreuz = 0i64;
    for n in 0..d {
        if n > 0 {
            kreuz += deg_a(n) - 1;
        }
        let inner_in: Vec<&SparseVec> = units[..d - n].iter().collect();
        let inner = m.mu(&objs[n..], &inner_in);
        if !inner.is_zero() {
            let mut outer_in = vec![&inner];
            outer_in.extend(units[d - n..].iter());
            out.add_signed(&m.mu(&objs[..=n], &outer_in), kreuz);
        }
        for mm in 1..d - n {
            let lo = d - n - mm;
            let hi = d - n;
            let a_in: Vec<&SparseVec> = units[lo..hi].iter().collect();
            let prod = cat.mu(&objs[n..=n + mm], &a_in);
            if prod.is_zero() {
                continue;
            }
            let mut outer_in: Vec<&SparseVec> = units[..lo].iter().collect();
            outer_in.push(&prod);
            outer_in.extend(units[hi..].iter());
            let mut outer_objs = objs[..=n].to_vec();
            outer_objs.extend_from_slice(&objs[n + mm..]);
            out.add_signed(&m.mu(&outer_objs, &outer_in), kreuz);
        }
    }
    out
}

/// Checks the module relations in every arity where a term can be nonzero.
pub fn check_module_relations(m: &AInfModule) -> ModuleReport {
    let dm = m.arity_bound();
    let da = m.cat.arity_bound();
    let top = (2 * dm).max(dm + da).saturating_sub(1);
    let jobs: Vec<(Vec<usize>, Vec<usize>)> = (1..=top).flat_map(|d| m.basis_inputs(d)).collect();
    let failures = jobs
        .par_iter()
        .filter_map(|(objs, t)| {
            let r = module_residual(m, objs, t);
            if r.is_zero() {
                return None;
            }
            let spaces = m.input_spaces(objs);
            let target = m.space(objs[0]);
            Some(ModuleFailure {
                arity: t.len(),
                objects: objs.iter().map(|&o| m.cat.objects()[o].clone()).collect(),
                inputs: t.iter().zip(&spaces).map(|(&i, s)| s.name(i).to_string()).collect(),
                residual: r
                    .iter()
                    .map(|(k, c)| (c.to_string(), target.name(k).to_string()))
                    .collect(),
            })
        })
        .collect();
    ModuleReport {
        checked: jobs.len(),
        failures,
    }
}
