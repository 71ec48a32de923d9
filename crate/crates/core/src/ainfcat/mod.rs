//! A∞-categories given by finite tables of structure constants.

mod classify;
mod cohom;
mod relations;
mod unital;

use std::collections::HashMap;

pub use classify::{classify_cp_object, classify_spherical, PairingIntegral, Verdict};
pub use cohom::{cohomology_category, hom_complex, CohomologyCategory};
pub use relations::{check_ainf_relations, RelationFailure, RelationReport};
pub use unital::{check_c_unital, check_strict_unital, UnitalReport};

use crate::error::{Error, Result};
use crate::grlin::{for_each_product, Field, GradedVectorSpace, SparseVec};

/// An element of `hom(source, target)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub source: usize,
    pub target: usize,
    pub vec: SparseVec,
}

impl Morphism {
    pub fn new(source: usize, target: usize, vec: SparseVec) -> Self {
        Morphism {
            source,
            target,
            vec,
        }
    }
}

/// Structure constants are keyed by the object chain `X_0..X_d` followed by
/// the basis indices of `a_d, ..., a_1`, where `a_i` lies in `hom(X_{i-1}, X_i)`.
#[derive(Clone, Debug)]
pub struct AInfCategory {
    field: Field,
    objects: Vec<String>,
    homs: Vec<Vec<GradedVectorSpace>>,
    mu: HashMap<Vec<usize>, SparseVec>,
    arity_bound: usize,
    strict_units: Option<Vec<usize>>,
}

impl AInfCategory {
    /// `homs[x][y]` is `hom(x, y)`.
    pub fn new(
        field: Field,
        objects: Vec<String>,
        homs: Vec<Vec<GradedVectorSpace>>,
        arity_bound: usize,
    ) -> Result<Self> {
        let n = objects.len();
        if homs.len() != n || homs.iter().any(|r| r.len() != n) {
            return Err(Error::Mismatch("hom table must be square".into()));
        }
        for (i, o) in objects.iter().enumerate() {
            if objects[..i].contains(o) {
                return Err(Error::DuplicateBasis(o.clone()));
            }
        }
        Ok(AInfCategory {
            field,
            objects,
            homs,
            mu: HashMap::new(),
            arity_bound,
            strict_units: None,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn hom(&self, x: usize, y: usize) -> &GradedVectorSpace {
        &self.homs[x][y]
    }

    pub fn arity_bound(&self) -> usize {
        self.arity_bound
    }

    pub fn strict_units(&self) -> Option<&[usize]> {
        self.strict_units.as_deref()
    }

    pub fn set_strict_units(&mut self, units: Vec<usize>) -> Result<()> {
        if units.len() != self.objects.len() {
            return Err(Error::Mismatch("one unit per object required".into()));
        }
        for (x, &u) in units.iter().enumerate() {
            if u >= self.homs[x][x].dim() || self.homs[x][x].degree(u) != 0 {
                return Err(Error::Degree(format!(
                    "unit of {} must be a degree 0 basis element",
                    self.objects[x]
                )));
            }
        }
        self.strict_units = Some(units);
        Ok(())
    }

    /// Raw table entries: `(key, output)`.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &SparseVec)> {
        self.mu.iter()
    }

    /// Stores the structure constant for one basis chain, replacing any previous value.
    pub fn set_mu(&mut self, objs: &[usize], inputs: &[usize], out: SparseVec) -> Result<()> {
        let d = inputs.len();
        if d == 0 || objs.len() != d + 1 {
            return Err(Error::NotComposable("chain length mismatch".into()));
        }
        if d > self.arity_bound {
            return Err(Error::Arity {
                arity: d,
                bound: self.arity_bound,
            });
        }
        if objs.iter().any(|&o| o >= self.objects.len()) {
            return Err(Error::UnknownObject(format!("{objs:?}")));
        }
        let mut deg = 2 - d as i64;
        for (j, &b) in inputs.iter().enumerate() {
            let space = self.hom(objs[d - 1 - j], objs[d - j]);
            if b >= space.dim() {
                return Err(Error::UnknownBasis(format!("index {b}")));
            }
            deg += space.degree(b);
        }
        let target = self.hom(objs[0], objs[d]);
        for k in out.keys() {
            if k >= target.dim() || target.degree(k) != deg {
                return Err(Error::Degree(format!(
                    "output of arity {d} must have degree {deg}"
                )));
            }
        }
        let key: Vec<usize> = objs.iter().chain(inputs).copied().collect();
        if out.is_zero() {
            self.mu.remove(&key);
        } else {
            self.mu.insert(key, out);
        }
        Ok(())
    }

    /// Stores an entry without degree or arity validation, for mutation tests.
    pub fn set_mu_unchecked(&mut self, objs: &[usize], inputs: &[usize], out: SparseVec) {
        let key: Vec<usize> = objs.iter().chain(inputs).copied().collect();
        self.mu.insert(key, out);
    }

    /// Assigns units without checking their degree, for mutation tests.
    pub fn set_strict_units_unchecked(&mut self, units: Vec<usize>) {
        self.strict_units = Some(units);
    }

    /// Name-based variant of [`set_mu`](Self::set_mu).
    pub fn set_mu_named(
        &mut self,
        objs: &[&str],
        inputs: &[&str],
        out: &[(&str, i64)],
    ) -> Result<()> {
        let objs: Vec<usize> = objs
            .iter()
            .map(|o| self.object_index(o))
            .collect::<Result<_>>()?;
        let d = inputs.len();
        if objs.len() != d + 1 {
            return Err(Error::NotComposable("chain length mismatch".into()));
        }
        let mut idx = Vec::with_capacity(d);
        for (j, name) in inputs.iter().enumerate() {
            idx.push(self.hom(objs[d - 1 - j], objs[d - j]).try_index(name)?);
        }
        let target = self.hom(objs[0], objs[d]);
        let mut v = SparseVec::new();
        for (name, c) in out {
            v.add_term(target.try_index(name)?, self.field.from_i64(*c));
        }
        self.set_mu(&objs, &idx, v)
    }

    /// Structure constant on basis elements; `None` means zero.
    pub fn mu_basis(&self, objs: &[usize], inputs: &[usize]) -> Option<&SparseVec> {
        let key: Vec<usize> = objs.iter().chain(inputs).copied().collect();
        self.mu.get(&key)
    }

    /// Multilinear `μ^d` on vectors along a fixed object chain.
    pub fn mu(&self, objs: &[usize], inputs: &[&SparseVec]) -> SparseVec {
        let mut out = SparseVec::new();
        if inputs.len() > self.arity_bound {
            return out;
        }
        let mut key: Vec<usize> = objs.to_vec();
        let base = key.len();
        for_each_product(self.field, inputs, |idx, c| {
            key.truncate(base);
            key.extend_from_slice(idx);
            if let Some(v) = self.mu.get(&key) {
                out.add_scaled(v, c);
            }
        });
        out
    }

    /// Evaluates `μ^d(a_d, ..., a_1)` on morphisms listed in that order.
    pub fn mu_apply(&self, inputs: &[Morphism]) -> Result<Morphism> {
        let d = inputs.len();
        if d == 0 {
            return Err(Error::NotComposable("empty chain".into()));
        }
        for w in inputs.windows(2) {
            if w[1].target != w[0].source {
                return Err(Error::NotComposable(format!(
                    "{} -> {} followed by {} -> {}",
                    self.objects[w[1].source],
                    self.objects[w[1].target],
                    self.objects[w[0].source],
                    self.objects[w[0].target]
                )));
            }
        }
        let mut objs: Vec<usize> = inputs.iter().rev().map(|m| m.source).collect();
        objs.push(inputs[0].target);
        let vecs: Vec<&SparseVec> = inputs.iter().map(|m| &m.vec).collect();
        Ok(Morphism::new(objs[0], objs[d], self.mu(&objs, &vecs)))
    }

    /// Object chains `X_0..X_d` whose consecutive homs are all nonzero.
    pub fn chains(&self, d: usize) -> Vec<Vec<usize>> {
        let n = self.objects.len();
        let mut out: Vec<Vec<usize>> = (0..n).map(|x| vec![x]).collect();
        for _ in 0..d {
            let mut next = Vec::new();
            for c in &out {
                let last = *c.last().unwrap();
                for y in 0..n {
                    if !self.homs[last][y].is_zero() {
                        let mut c2 = c.clone();
                        c2.push(y);
                        next.push(c2);
                    }
                }
            }
            out = next;
        }
        out
    }

    /// Hom spaces of a chain in input order `a_d, ..., a_1`.
    pub fn chain_spaces(&self, objs: &[usize]) -> Vec<&GradedVectorSpace> {
        let d = objs.len() - 1;
        (0..d).map(|j| self.hom(objs[d - 1 - j], objs[d - j])).collect()
    }

    /// The opposite category: `hom_opp(X, Y) = hom(Y, X)`, products reversed with sign `✠_d`.
    pub fn opposite(&self) -> AInfCategory {
        let n = self.objects.len();
        let homs = (0..n)
            .map(|x| (0..n).map(|y| self.homs[y][x].clone()).collect())
            .collect();
        let mut mu = HashMap::with_capacity(self.mu.len());
        for (key, v) in &self.mu {
            let d = (key.len() - 1) / 2;
            let objs = &key[..=d];
            let inputs = &key[d + 1..];
            let spaces = self.chain_spaces(objs);
            let total: i64 = inputs
                .iter()
                .zip(&spaces)
                .map(|(&b, s)| s.degree(b))
                .sum();
            let mut nk: Vec<usize> = objs.iter().rev().copied().collect();
            nk.extend(inputs.iter().rev());
            let mut out = SparseVec::new();
            out.add_signed(v, total - d as i64);
            mu.insert(nk, out);
        }
        AInfCategory {
            field: self.field,
            objects: self.objects.clone(),
            homs,
            mu,
            arity_bound: self.arity_bound,
            strict_units: self.strict_units.clone(),
        }
    }

    /// Whether two categories have the same objects, homs and structure constants.
    pub fn same_table(&self, other: &AInfCategory) -> bool {
        self.objects == other.objects && self.homs == other.homs && self.mu == other.mu
    }
}
