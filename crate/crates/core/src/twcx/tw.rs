use std::sync::Arc;

use serde::Serialize;

use super::expand::{expand, Outgoing, Stage};
use super::{Part, SumHom, SumObject};
use crate::ainfcat::AInfCategory;
use crate::error::{Error, Result};
use crate::grlin::{index_tuples, Scalar, SparseVec};

/// A sum object with a degree 1 differential and a filtration rank for each summand.
#[derive(Clone, Debug)]
pub struct TwistedComplex {
    name: String,
    cat: Arc<AInfCategory>,
    sum: SumObject,
    end: Arc<SumHom>,
    delta: SparseVec,
    order: Vec<usize>,
}

impl PartialEq for TwistedComplex {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.cat, &other.cat) || self.cat.same_table(&other.cat))
            && self.sum == other.sum
            && self.delta == other.delta
            && self.order == other.order
    }
}

impl TwistedComplex {
    /// `order[i]` is the filtration rank of summand `i`; `delta` lives in `hom_{Σ𝒜}(X, X)`.
    pub fn new(
        cat: Arc<AInfCategory>,
        name: impl Into<String>,
        sum: SumObject,
        delta: SparseVec,
        order: Vec<usize>,
    ) -> Result<Self> {
        if order.len() != sum.len() {
            return Err(Error::Mismatch("one filtration rank per summand required".into()));
        }
        if sum.summands.iter().any(|s| s.object >= cat.num_objects()) {
            return Err(Error::UnknownObject("summand object out of range".into()));
        }
        let end = Arc::new(SumHom::new(&cat, &sum, &sum));
        for (k, _) in delta.iter() {
            if k >= end.dim() || end.space.degree(k) != 1 {
                return Err(Error::InvalidTwisted(
                    "differential must be a degree 1 endomorphism".into(),
                ));
            }
        }
        Ok(TwistedComplex {
            name: name.into(),
            cat,
            sum,
            end,
            delta,
            order,
        })
    }

    /// Builds `δ` from elementary entries.
    pub fn from_parts(
        cat: Arc<AInfCategory>,
        name: impl Into<String>,
        sum: SumObject,
        entries: &[(Part, Scalar)],
        order: Vec<usize>,
    ) -> Result<Self> {
        let end = SumHom::new(&cat, &sum, &sum);
        let mut delta = SparseVec::new();
        for (part, c) in entries {
            let k = end
                .index_of(part)
                .ok_or_else(|| Error::UnknownBasis(format!("{part:?}")))?;
            delta.add_term(k, c.clone());
        }
        Self::new(cat, name, sum, delta, order)
    }

    /// `𝕂 ⊗ X` with zero differential.
    pub fn object(cat: &Arc<AInfCategory>, x: usize) -> Self {
        let name = cat.objects()[x].clone();
        Self::new(cat.clone(), name, SumObject::single(x), SparseVec::new(), vec![0])
            .expect("zero differential")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        let mut out = self.clone();
        out.name = name.into();
        out
    }

    pub fn category(&self) -> &Arc<AInfCategory> {
        &self.cat
    }

    pub fn sum(&self) -> &SumObject {
        &self.sum
    }

    pub fn delta(&self) -> &SparseVec {
        &self.delta
    }

    pub fn end(&self) -> &SumHom {
        &self.end
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn delta_entries(&self) -> Vec<(Part, Scalar)> {
        self.delta
            .iter()
            .map(|(k, c)| (self.end.part(k), c.clone()))
            .collect()
    }

    pub(crate) fn outgoing(&self) -> Outgoing {
        Outgoing::new(&self.end, &self.delta)
    }

    /// Strict lower-triangularity against `order` and the Maurer–Cartan sum `Σ_d μ^d(δ, …, δ)`.
    pub fn validate(&self) -> TwValidation {
        let mut triangular = Vec::new();
        for (part, _) in self.delta_entries() {
            if self.order[part.tgt] <= self.order[part.src] {
                triangular.push(format!(
                    "δ has a component from summand {} to summand {} against the filtration",
                    part.src, part.tgt
                ));
            }
        }
        triangular.dedup();
        let delta = self.outgoing();
        let stages = [Stage {
            obj: &self.sum,
            delta: Some(&delta),
        }];
        let mc = expand(&self.cat, &stages, &[], &self.end, 1);
        let maurer_cartan = mc
            .iter()
            .map(|(k, c)| (c.to_string(), self.end.space.name(k).to_string()))
            .collect();
        TwValidation {
            triangular,
            maurer_cartan,
        }
    }
}

/// Outcome of [`TwistedComplex::validate`]. The Maurer–Cartan residual is listed as `(coefficient, basis)`.
#[derive(Clone, Debug, Default, Serialize)]
pub struct TwValidation {
    pub triangular: Vec<String>,
    pub maurer_cartan: Vec<(String, String)>,
}

impl TwValidation {
    pub fn passed(&self) -> bool {
        self.triangular.is_empty() && self.maurer_cartan.is_empty()
    }

    /// First violated condition, if any.
    pub fn first_failure(&self) -> Option<String> {
        if let Some(t) = self.triangular.first() {
            return Some(t.clone());
        }
        self.maurer_cartan
            .first()
            .map(|(c, n)| format!("Maurer–Cartan sum has term {c}·{n}"))
    }
}

/// An element of `hom_{Tw𝒜}(source, target)`.
#[derive(Clone, Debug)]
pub struct TwMorphism {
    pub source: Arc<TwistedComplex>,
    pub target: Arc<TwistedComplex>,
    pub space: Arc<SumHom>,
    pub degree: i64,
    pub vec: SparseVec,
}

impl TwMorphism {
    pub fn new(
        source: Arc<TwistedComplex>,
        target: Arc<TwistedComplex>,
        degree: i64,
        vec: SparseVec,
    ) -> Result<Self> {
        let space = Arc::new(SumHom::new(source.category(), source.sum(), target.sum()));
        Self::in_space(source, target, space, degree, vec)
    }

    pub(crate) fn in_space(
        source: Arc<TwistedComplex>,
        target: Arc<TwistedComplex>,
        space: Arc<SumHom>,
        degree: i64,
        vec: SparseVec,
    ) -> Result<Self> {
        for (k, _) in vec.iter() {
            if k >= space.dim() || space.space.degree(k) != degree {
                return Err(Error::Degree(format!(
                    "component outside hom^{degree}({}, {})",
                    source.name(),
                    target.name()
                )));
            }
        }
        Ok(TwMorphism {
            source,
            target,
            space,
            degree,
            vec,
        })
    }

    pub fn zero(source: Arc<TwistedComplex>, target: Arc<TwistedComplex>, degree: i64) -> Self {
        Self::new(source, target, degree, SparseVec::new()).expect("zero is homogeneous")
    }

    pub fn from_parts(
        source: Arc<TwistedComplex>,
        target: Arc<TwistedComplex>,
        degree: i64,
        entries: &[(Part, Scalar)],
    ) -> Result<Self> {
        let space = SumHom::new(source.category(), source.sum(), target.sum());
        let mut vec = SparseVec::new();
        for (part, c) in entries {
            let k = space
                .index_of(part)
                .ok_or_else(|| Error::UnknownBasis(format!("{part:?}")))?;
            vec.add_term(k, c.clone());
        }
        Self::in_space(source, target, Arc::new(space), degree, vec)
    }

    pub fn is_zero(&self) -> bool {
        self.vec.is_zero()
    }

    pub fn entries(&self) -> Vec<(Part, Scalar)> {
        self.vec
            .iter()
            .map(|(k, c)| (self.space.part(k), c.clone()))
            .collect()
    }

    pub(crate) fn outgoing(&self) -> Outgoing {
        Outgoing::new(&self.space, &self.vec)
    }
}

fn same_complex(a: &Arc<TwistedComplex>, b: &Arc<TwistedComplex>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn chain_of(inputs: &[&TwMorphism]) -> Result<Vec<Arc<TwistedComplex>>> {
    let d = inputs.len();
    if d == 0 {
        return Err(Error::NotComposable("empty chain".into()));
    }
    for w in inputs.windows(2) {
        if !same_complex(&w[1].target, &w[0].source) {
            return Err(Error::NotComposable(format!(
                "{} -> {} followed by {} -> {}",
                w[1].source.name(),
                w[1].target.name(),
                w[0].source.name(),
                w[0].target.name()
            )));
        }
    }
    let mut chain: Vec<Arc<TwistedComplex>> = vec![inputs[d - 1].source.clone()];
    chain.extend(inputs.iter().rev().map(|m| m.target.clone()));
    Ok(chain)
}

fn compose(inputs: &[&TwMorphism], with_delta: bool) -> Result<TwMorphism> {
    let chain = chain_of(inputs)?;
    let d = inputs.len();
    let cat = chain[0].category().clone();
    let deltas: Vec<Outgoing> = chain.iter().map(|c| c.outgoing()).collect();
    let stages: Vec<Stage> = chain
        .iter()
        .zip(&deltas)
        .map(|(c, o)| Stage {
            obj: c.sum(),
            delta: with_delta.then_some(o),
        })
        .collect();
    let outs: Vec<Outgoing> = inputs.iter().rev().map(|m| m.outgoing()).collect();
    let refs: Vec<&Outgoing> = outs.iter().collect();
    let space = Arc::new(SumHom::new(&cat, chain[0].sum(), chain[d].sum()));
    let vec = expand(&cat, &stages, &refs, &space, 1);
    let degree = inputs.iter().map(|m| m.degree).sum::<i64>() + 2 - d as i64;
    TwMorphism::in_space(chain[0].clone(), chain[d].clone(), space, degree, vec)
}

/// `μ^d_{Σ𝒜}(a_d, …, a_1)`, ignoring the differentials of the complexes involved.
pub fn sigma_mu(inputs: &[&TwMorphism]) -> Result<TwMorphism> {
    compose(inputs, false)
}

/// `μ^d_{Tw𝒜}(a_d, …, a_1)`: all insertions of the differentials between the inputs.
pub fn tw_mu(inputs: &[&TwMorphism]) -> Result<TwMorphism> {
    compose(inputs, true)
}

/// The full subcategory of `Tw𝒜` on finitely many twisted complexes, as a structure-constant table.
pub fn materialize(objects: &[Arc<TwistedComplex>]) -> Result<AInfCategory> {
    let first = objects
        .first()
        .ok_or_else(|| Error::Mismatch("no objects to materialize".into()))?;
    let cat = first.category().clone();
    let n = objects.len();
    let spaces: Vec<Vec<SumHom>> = objects
        .iter()
        .map(|x| objects.iter().map(|y| SumHom::new(&cat, x.sum(), y.sum())).collect())
        .collect();
    let homs = spaces
        .iter()
        .map(|row| row.iter().map(|h| h.space.clone()).collect())
        .collect();
    let names = objects.iter().map(|o| o.name().to_string()).collect();
    let mut out = AInfCategory::new(cat.field(), names, homs, cat.arity_bound())?;
    let deltas: Vec<Outgoing> = objects.iter().map(|o| o.outgoing()).collect();
    let f = cat.field();
    for d in 1..=cat.arity_bound() {
        for objs in out.chains(d) {
            let stages: Vec<Stage> = objs
                .iter()
                .map(|&o| Stage {
                    obj: objects[o].sum(),
                    delta: Some(&deltas[o]),
                })
                .collect();
            // input slot j holds a_{d-j} in hom(X_{d-j-1}, X_{d-j})
            let slot_spaces: Vec<&SumHom> = (0..d)
                .map(|j| &spaces[objs[d - 1 - j]][objs[d - j]])
                .collect();
            let sizes: Vec<usize> = slot_spaces.iter().map(|s| s.dim()).collect();
            let target = &spaces[objs[0]][objs[d]];
            for tuple in index_tuples(&sizes) {
                let outs: Vec<Outgoing> = (0..d)
                    .map(|m| {
                        let j = d - 1 - m;
                        Outgoing::new(slot_spaces[j], &SparseVec::unit(tuple[j], f))
                    })
                    .collect();
                let refs: Vec<&Outgoing> = outs.iter().collect();
                let v = expand(&cat, &stages, &refs, target, 1);
                if !v.is_zero() {
                    out.set_mu_unchecked(&objs, &tuple, v);
                }
            }
        }
    }
    debug_assert_eq!(out.num_objects(), n);
    Ok(out)
}
