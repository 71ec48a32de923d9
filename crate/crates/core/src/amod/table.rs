use std::collections::HashMap;

use crate::grlin::{for_each_product, Field, SparseVec};

/// Sparse multilinear maps keyed by an object chain followed by basis indices.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MultiTable {
    map: HashMap<Vec<usize>, SparseVec>,
}

impl MultiTable {
    pub fn new() -> Self {
        MultiTable::default()
    }

    pub fn insert(&mut self, key: Vec<usize>, v: SparseVec) {
        if v.is_zero() {
            self.map.remove(&key);
        } else {
            self.map.insert(key, v);
        }
    }

    pub fn add_to(&mut self, key: Vec<usize>, v: &SparseVec, c: &crate::grlin::Scalar) {
        let e = self.map.entry(key.clone()).or_default();
        e.add_scaled(v, c);
        if e.is_zero() {
            self.map.remove(&key);
        }
    }

    pub fn get(&self, key: &[usize]) -> Option<&SparseVec> {
        self.map.get(key)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &SparseVec)> {
        self.map.iter()
    }

    /// Entries sorted by key, for deterministic output.
    pub fn sorted(&self) -> Vec<(&Vec<usize>, &SparseVec)> {
        let mut v: Vec<_> = self.map.iter().collect();
        v.sort_by(|a, b| (a.0.len(), a.0).cmp(&(b.0.len(), b.0)));
        v
    }

    /// Multilinear evaluation on a fixed chain.
    pub fn eval(&self, field: Field, objs: &[usize], inputs: &[&SparseVec]) -> SparseVec {
        let mut out = SparseVec::new();
        let mut key: Vec<usize> = objs.to_vec();
        let base = key.len();
        for_each_product(field, inputs, |idx, c| {
            key.truncate(base);
            key.extend_from_slice(idx);
            if let Some(v) = self.map.get(&key) {
                out.add_scaled(v, c);
            }
        });
        out
    }

    /// Largest arity with a nonzero entry, given that keys hold `objs_len(d) + d` indices.
    pub fn max_arity(&self, key_arity: impl Fn(usize) -> usize) -> usize {
        self.map.keys().map(|k| key_arity(k.len())).max().unwrap_or(0)
    }
}
