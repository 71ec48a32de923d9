use std::collections::BTreeMap;

use serde::Serialize;

use super::{mu1_q, AInfModule, PreModuleHom};
use crate::error::{Error, Result};
use crate::grlin::{rank_of, Cohomology, SparseVec};

/// Cohomology of `M(x)`; the sign twist `∂b = (−1)^{|b|} μ¹b` does not change kernels or images.
pub fn module_cohomology(m: &AInfModule, x: usize) -> Cohomology {
    m.complex(x).cohomology(m.field())
}

/// `H(t)` on one object: columns in representative coordinates, one block per source degree.
#[derive(Clone, Debug)]
pub struct InducedMap {
    pub source_dims: BTreeMap<i64, usize>,
    pub target_dims: BTreeMap<i64, usize>,
    /// `blocks[k][i]` is the image of the `i`-th class in degree `k`.
    pub blocks: BTreeMap<i64, Vec<Vec<crate::grlin::Scalar>>>,
    pub degree: i64,
}

impl InducedMap {
    pub fn rank(&self, k: i64) -> usize {
        let cols: Vec<SparseVec> = self
            .blocks
            .get(&k)
            .map(|b| {
                b.iter()
                    .map(|c| SparseVec::from_entries(c.iter().cloned().enumerate()))
                    .collect()
            })
            .unwrap_or_default();
        let f = match self.blocks.values().flatten().flatten().next() {
            Some(s) => s.field(),
            None => return 0,
        };
        rank_of(f, &cols)
    }

    pub fn is_iso(&self) -> bool {
        let shifted: BTreeMap<i64, usize> = self
            .source_dims
            .iter()
            .filter(|(_, &d)| d > 0)
            .map(|(&k, &d)| (k + self.degree, d))
            .collect();
        let target: BTreeMap<i64, usize> =
            self.target_dims.iter().filter(|(_, &d)| d > 0).map(|(&k, &d)| (k, d)).collect();
        shifted == target && self.source_dims.iter().all(|(&k, &d)| self.rank(k) == d)
    }
}

/// `H(t)[b] = [(−1)^{|b|} t¹(b)]` for every object of the base category.
pub fn h_of_t(t: &PreModuleHom) -> Result<Vec<InducedMap>> {
    if let Some(msg) = mu1_q(t).describe_nonzero() {
        return Err(Error::NotClosed(msg));
    }
    let f = t.field();
    let n = t.source.category().num_objects();
    let mut out = Vec::with_capacity(n);
    for x in 0..n {
        let h0 = module_cohomology(&t.source, x);
        let h1 = module_cohomology(&t.target, x);
        let mut blocks = BTreeMap::new();
        for (&k, reps) in &h0.representatives {
            let cols = reps
                .iter()
                .map(|r| {
                    let img = t.eval(&[x], &[r]).scaled(&f.sign(k));
                    h1.class_of(k + t.degree, &img).expect("closed maps send cocycles to cocycles")
                })
                .collect();
            blocks.insert(k, cols);
        }
        out.push(InducedMap {
            source_dims: h0.dims.clone(),
            target_dims: h1.dims.clone(),
            blocks,
            degree: t.degree,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiIsoVerdict {
    pub is_quasi_iso: bool,
    /// Objects on which `H(t)` fails to be bijective.
    pub failing_objects: Vec<String>,
}

pub fn quasi_iso_check(t: &PreModuleHom) -> Result<QuasiIsoVerdict> {
    let maps = h_of_t(t)?;
    let names = t.source.category().objects();
    let failing_objects: Vec<String> = maps
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_iso())
        .map(|(x, _)| names[x].clone())
        .collect();
    Ok(QuasiIsoVerdict {
        is_quasi_iso: failing_objects.is_empty(),
        failing_objects,
    })
}
