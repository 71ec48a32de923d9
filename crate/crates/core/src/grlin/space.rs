use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::grlin::{Field, Scalar};

/// A finitely supported coefficient vector keyed by basis index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec(BTreeMap<usize, Scalar>);

impl SparseVec {
    pub fn new() -> Self {
        SparseVec(BTreeMap::new())
    }

    pub fn unit(idx: usize, field: Field) -> Self {
        let mut v = SparseVec::new();
        v.add_term(idx, field.one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, idx: usize) -> Option<&Scalar> {
        self.0.get(&idx)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.0.iter().map(|(k, v)| (*k, v))
    }

    pub fn keys(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    pub fn first_index(&self) -> Option<usize> {
        self.0.keys().next().copied()
    }

    pub fn add_term(&mut self, idx: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.0.get_mut(&idx) {
            Some(old) => {
                let s = &*old + &c;
                if s.is_zero() {
                    self.0.remove(&idx);
                } else {
                    *old = s;
                }
            }
            None => {
                self.0.insert(idx, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &SparseVec, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (k, v) in other.iter() {
            self.add_term(k, v * c);
        }
    }

    /// Adds `(-1)^parity * other`.
    pub fn add_signed(&mut self, other: &SparseVec, parity: i64) {
        for (k, v) in other.iter() {
            if parity.rem_euclid(2) == 0 {
                self.add_term(k, v.clone());
            } else {
                self.add_term(k, -v);
            }
        }
    }

    pub fn add(&mut self, other: &SparseVec) {
        self.add_signed(other, 0);
    }

    pub fn scaled(&self, c: &Scalar) -> SparseVec {
        let mut out = SparseVec::new();
        out.add_scaled(self, c);
        out
    }

    pub fn negated(&self) -> SparseVec {
        let mut out = SparseVec::new();
        out.add_signed(self, 1);
        out
    }

    /// Re-indexes every entry through `f`; entries mapped to `None` are dropped.
    pub fn remap(&self, mut f: impl FnMut(usize) -> Option<usize>) -> SparseVec {
        let mut out = SparseVec::new();
        for (k, v) in self.iter() {
            if let Some(j) = f(k) {
                out.add_term(j, v.clone());
            }
        }
        out
    }

    pub fn split_at(&self, bound: usize) -> (SparseVec, SparseVec) {
        let mut lo = SparseVec::new();
        let mut hi = SparseVec::new();
        for (k, v) in self.iter() {
            if k < bound {
                lo.0.insert(k, v.clone());
            } else {
                hi.0.insert(k - bound, v.clone());
            }
        }
        (lo, hi)
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut v = SparseVec::new();
        for (k, c) in entries {
            v.add_term(k, c);
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub name: String,
    pub degree: i64,
}

impl BasisElement {
    pub fn new(name: impl Into<String>, degree: i64) -> Self {
        BasisElement {
            name: name.into(),
            degree,
        }
    }
}

/// A finite-dimensional Z-graded space with a named, ordered basis.
#[derive(Clone, Debug, Default)]
pub struct GradedVectorSpace {
    basis: Vec<BasisElement>,
    index: HashMap<String, usize>,
}

impl PartialEq for GradedVectorSpace {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

impl Eq for GradedVectorSpace {}

impl GradedVectorSpace {
    pub fn new(basis: Vec<BasisElement>) -> Result<Self> {
        let mut index = HashMap::with_capacity(basis.len());
        for (i, b) in basis.iter().enumerate() {
            if index.insert(b.name.clone(), i).is_some() {
                return Err(Error::DuplicateBasis(b.name.clone()));
            }
        }
        Ok(GradedVectorSpace { basis, index })
    }

    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, i64)>) -> Result<Self> {
        Self::new(
            pairs
                .into_iter()
                .map(|(n, d)| BasisElement::new(n, d))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        GradedVectorSpace::default()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].degree
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn try_index(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownBasis(name.to_string()))
    }

    pub fn indices_in_degree(&self, k: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degree(i) == k).collect()
    }

    pub fn dims_by_degree(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for b in &self.basis {
            *out.entry(b.degree).or_insert(0) += 1;
        }
        out
    }

    pub fn degree_support(&self) -> Vec<i64> {
        self.dims_by_degree().into_keys().collect()
    }

    /// Degree of a homogeneous vector, `None` for zero or inhomogeneous vectors.
    pub fn degree_of(&self, v: &SparseVec) -> Option<i64> {
        let mut deg = None;
        for k in v.keys() {
            let d = self.degree(k);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        deg
    }

    /// Ordered pairs `(a_i, b_j)` with index `i * dim(b) + j` and added degrees.
    pub fn tensor(&self, other: &GradedVectorSpace) -> GradedVectorSpace {
        let mut basis = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.basis {
            for b in &other.basis {
                basis.push(BasisElement::new(
                    format!("{}⊗{}", a.name, b.name),
                    a.degree + b.degree,
                ));
            }
        }
        GradedVectorSpace::new(basis).expect("pair names are unique")
    }

    /// `V[k]`: every degree lowered by `k`.
    pub fn shift(&self, k: i64) -> GradedVectorSpace {
        GradedVectorSpace {
            basis: self
                .basis
                .iter()
                .map(|b| BasisElement::new(b.name.clone(), b.degree - k))
                .collect(),
            index: self.index.clone(),
        }
    }

    /// Same basis with every name prefixed by `tag`.
    pub fn tagged(&self, tag: &str) -> GradedVectorSpace {
        GradedVectorSpace::new(
            self.basis
                .iter()
                .map(|b| BasisElement::new(format!("{tag}{}", b.name), b.degree))
                .collect(),
        )
        .expect("tagging preserves uniqueness")
    }

    /// `A ⊕ B` with names tagged `0.` and `1.`; indices of `B` are offset by `dim(A)`.
    pub fn direct_sum(&self, other: &GradedVectorSpace) -> GradedVectorSpace {
        let mut basis = self.tagged("0.").basis;
        basis.extend(other.tagged("1.").basis);
        GradedVectorSpace::new(basis).expect("tagged names are unique")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_lowers_degrees() {
        let v = GradedVectorSpace::from_pairs([("x", 0)]).unwrap();
        assert_eq!(v.shift(1).degree(0), -1);
        assert_eq!(v.shift(0), v);
    }

    #[test]
    fn tensor_dims() {
        let v = GradedVectorSpace::from_pairs([("a", 0), ("b", 2)]).unwrap();
        let t = v.tensor(&v);
        let dims: Vec<_> = t.dims_by_degree().into_iter().collect();
        assert_eq!(dims, vec![(0, 1), (2, 2), (4, 1)]);
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(GradedVectorSpace::from_pairs([("a", 0), ("a", 1)]).is_err());
    }

    #[test]
    fn sparse_cancellation() {
        let f = Field::Rational;
        let mut v = SparseVec::unit(3, f);
        v.add_term(3, f.from_i64(-1));
        assert!(v.is_zero());
    }
}
