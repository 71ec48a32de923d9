use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::grlin::linalg::{with_tag, Echelon, TAG_OFFSET};
use crate::grlin::{Field, GradedLinearMap, GradedVectorSpace, Scalar, SparseVec};

#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplex {
    pub space: GradedVectorSpace,
    pub differential: GradedLinearMap,
}

impl ChainComplex {
    pub fn new(differential: GradedLinearMap) -> Result<Self> {
        if differential.degree != 1 || differential.source != differential.target {
            return Err(Error::Degree("differential must be a degree 1 endomorphism".into()));
        }
        if !differential.compose(&differential).is_zero() {
            return Err(Error::Degree("differential does not square to zero".into()));
        }
        Ok(ChainComplex {
            space: differential.source.clone(),
            differential,
        })
    }

    pub fn with_zero_differential(space: GradedVectorSpace) -> Self {
        ChainComplex {
            differential: GradedLinearMap::zero(space.clone(), space.clone(), 1),
            space,
        }
    }

    /// `Z[k]`: degrees lowered by `k`, same differential matrix.
    pub fn shift(&self, k: i64) -> ChainComplex {
        let space = self.space.shift(k);
        ChainComplex {
            differential: GradedLinearMap::new(
                space.clone(),
                space.clone(),
                1,
                self.differential.columns().to_vec(),
            )
            .expect("shift preserves degrees"),
            space,
        }
    }

    pub fn cohomology(&self, field: Field) -> Cohomology {
        cohomology(self, field)
    }
}

/// Cohomology of a complex with chosen cocycle representatives and the
/// projection from cocycles to coordinates in the representative basis.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub dims: BTreeMap<i64, usize>,
    pub representatives: BTreeMap<i64, Vec<SparseVec>>,
    solvers: BTreeMap<i64, Echelon>,
    field: Field,
}

impl Cohomology {
    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn dim(&self, k: i64) -> usize {
        self.dims.get(&k).copied().unwrap_or(0)
    }

    /// Nonzero dims only.
    pub fn nonzero_dims(&self) -> BTreeMap<i64, usize> {
        self.dims
            .iter()
            .filter(|(_, &d)| d > 0)
            .map(|(&k, &d)| (k, d))
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .map(|(&k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    /// Coordinates of the class of a degree-`k` cocycle in the representative basis.
    /// Returns `None` when `v` is not a cocycle-plus-boundary combination.
    pub fn class_of(&self, k: i64, v: &SparseVec) -> Option<Vec<Scalar>> {
        let n = self.dim(k);
        if v.is_zero() {
            return Some(vec![self.field.zero(); n]);
        }
        let solver = self.solvers.get(&k)?;
        let r = solver.reduce(v);
        let (coords, tags) = r.split_at(TAG_OFFSET);
        if !coords.is_zero() {
            return None;
        }
        let mut out = vec![self.field.zero(); n];
        for (i, c) in tags.iter() {
            out[i] = -c;
        }
        Some(out)
    }

    /// Whether a degree-`k` cocycle is exact.
    pub fn is_exact(&self, k: i64, v: &SparseVec) -> bool {
        self.class_of(k, v)
            .map(|c| c.iter().all(Scalar::is_zero))
            .unwrap_or(false)
    }

    /// The section `H -> Z` picking representatives.
    pub fn section(&self, k: i64, coords: &[Scalar]) -> SparseVec {
        let mut out = SparseVec::new();
        if let Some(reps) = self.representatives.get(&k) {
            for (r, c) in reps.iter().zip(coords) {
                out.add_scaled(r, c);
            }
        }
        out
    }
}

pub fn cohomology(cx: &ChainComplex, field: Field) -> Cohomology {
    let d = &cx.differential;
    let rank = d.gauss_rank(field);
    let mut dims = BTreeMap::new();
    let mut representatives = BTreeMap::new();
    let mut solvers = BTreeMap::new();
    let mut cocycles: BTreeMap<i64, Vec<SparseVec>> = BTreeMap::new();
    for z in &rank.kernel {
        let k = cx.space.degree_of(z).expect("kernel vectors are homogeneous");
        cocycles.entry(k).or_default().push(z.clone());
    }
    let mut boundaries: BTreeMap<i64, Vec<SparseVec>> = BTreeMap::new();
    for b in &rank.image {
        let k = cx.space.degree_of(b).expect("image vectors are homogeneous");
        boundaries.entry(k).or_default().push(b.clone());
    }
    for k in cx.space.degree_support() {
        let mut ech = Echelon::new(field);
        for b in boundaries.get(&k).into_iter().flatten() {
            ech.insert_bounded(b, TAG_OFFSET);
        }
        let mut reps = Vec::new();
        for z in cocycles.get(&k).into_iter().flatten() {
            let tagged = with_tag(z, reps.len(), field.one());
            if ech.insert_bounded(&tagged, TAG_OFFSET).is_none() {
                reps.push(z.clone());
            }
        }
        dims.insert(k, reps.len());
        representatives.insert(k, reps);
        solvers.insert(k, ech);
    }
    Cohomology {
        dims,
        representatives,
        solvers,
        field,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn acyclic_two_term() {
        let f = Field::Rational;
        let v = GradedVectorSpace::from_pairs([("a", 0), ("b", 1)]).unwrap();
        let d = GradedLinearMap::new(
            v.clone(),
            v,
            1,
            vec![SparseVec::unit(1, f), SparseVec::new()],
        )
        .unwrap();
        let h = ChainComplex::new(d).unwrap().cohomology(f);
        assert_eq!(h.total_dim(), 0);
    }

    #[test]
    fn zero_differential() {
        let f = Field::Rational;
        let v = GradedVectorSpace::from_pairs([("a", 0), ("b", 2)]).unwrap();
        let h = ChainComplex::with_zero_differential(v).cohomology(f);
        assert_eq!(h.nonzero_dims(), BTreeMap::from([(0, 1), (2, 1)]));
    }

    #[test]
    fn rejects_non_differential() {
        let f = Field::Rational;
        let v = GradedVectorSpace::from_pairs([("a", 0), ("b", 1), ("c", 2)]).unwrap();
        let d = GradedLinearMap::new(
            v.clone(),
            v,
            1,
            vec![SparseVec::unit(1, f), SparseVec::unit(2, f), SparseVec::new()],
        )
        .unwrap();
        assert!(ChainComplex::new(d).is_err());
    }

    /// Random three-term complex with exactly one of the two differentials nonzero.
    fn random_complex(seed: Vec<i64>, n0: usize, n1: usize, n2: usize) -> ChainComplex {
        let f = Field::Prime(5);
        let mut basis = Vec::new();
        for i in 0..n0 {
            basis.push((format!("a{i}"), 0));
        }
        for i in 0..n1 {
            basis.push((format!("b{i}"), 1));
        }
        for i in 0..n2 {
            basis.push((format!("c{i}"), 2));
        }
        let space = GradedVectorSpace::from_pairs(basis).unwrap();
        let mut s = seed.into_iter().cycle();
        let mut cols = vec![SparseVec::new(); n0 + n1 + n2];
        let use_first = s.next().unwrap() % 2 == 0;
        if use_first {
            for j in 0..n0 {
                for i in 0..n1 {
                    cols[j].add_term(n0 + i, f.from_i64(s.next().unwrap()));
                }
            }
        } else {
            for j in 0..n1 {
                for i in 0..n2 {
                    cols[n0 + j].add_term(n0 + n1 + i, f.from_i64(s.next().unwrap()));
                }
            }
        }
        let d = GradedLinearMap::new(space.clone(), space, 1, cols).unwrap();
        ChainComplex::new(d).unwrap()
    }

    proptest! {
        #[test]
        fn dims_match_rank_formula(seed in proptest::collection::vec(-4i64..5, 1..40),
                                   n0 in 0usize..4, n1 in 0usize..4, n2 in 0usize..4) {
            let f = Field::Prime(5);
            let cx = random_complex(seed, n0, n1, n2);
            let h = cx.cohomology(f);
            let r = cx.differential.gauss_rank(f);
            for k in cx.space.degree_support() {
                let (_, ker) = r.by_degree[&k];
                let prev = r.by_degree.get(&(k - 1)).map(|x| x.0).unwrap_or(0);
                prop_assert_eq!(h.dim(k), ker - prev);
            }
            // representatives are cocycles and project to unit coordinates
            for (k, reps) in &h.representatives {
                for (i, z) in reps.iter().enumerate() {
                    prop_assert!(cx.differential.apply(z).is_zero());
                    let c = h.class_of(*k, z).unwrap();
                    for (j, x) in c.iter().enumerate() {
                        prop_assert_eq!(x.is_one(), i == j);
                    }
                }
            }
        }

        #[test]
        fn rank_of_square_bounded(entries in proptest::collection::vec(-3i64..4, 9)) {
            let f = Field::Rational;
            let v = GradedVectorSpace::from_pairs((0..3).map(|i| (format!("x{i}"), 0))).unwrap();
            let cols = (0..3).map(|j| SparseVec::from_entries((0..3).map(|i| (i, f.from_i64(entries[3 * j + i]))))).collect();
            let m = GradedLinearMap::new(v.clone(), v, 0, cols).unwrap();
            prop_assert!(m.compose(&m).gauss_rank(f).rank <= m.gauss_rank(f).rank);
        }

        #[test]
        fn shift_composes(a in -5i64..5, b in -5i64..5) {
            let v = GradedVectorSpace::from_pairs([("x", 0), ("y", 3)]).unwrap();
            prop_assert_eq!(v.shift(b).shift(a), v.shift(a + b));
        }
    }
}
