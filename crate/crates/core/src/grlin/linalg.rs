use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::grlin::{Field, GradedVectorSpace, Scalar, SparseVec};

/// Offset separating coordinates from bookkeeping tags in augmented vectors.
pub const TAG_OFFSET: usize = 1 << 40;

/// Incremental reduced row echelon form over sparse vectors.
///
/// The pivot of each row is its smallest index, so augmenting vectors with
/// tags above [`TAG_OFFSET`] keeps pivots on the coordinate part.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    rows: Vec<SparseVec>,
    pivots: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new(field: Field) -> Self {
        Echelon {
            field,
            rows: Vec::new(),
            pivots: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Eliminates every pivot coordinate from `v`.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let hits: Vec<usize> = v.keys().filter(|k| self.pivots.contains_key(k)).collect();
        for p in hits {
            if let Some(c) = v.get(p).cloned() {
                v.add_scaled(&self.rows[self.pivots[&p]], &-c);
            }
        }
        v
    }

    /// Reduces `v` and stores it as a new row when its coordinate part (below
    /// `bound`) survives. Returns the reduced vector when it does not.
    pub fn insert_bounded(&mut self, v: &SparseVec, bound: usize) -> Option<SparseVec> {
        let r = self.reduce(v);
        match r.first_index() {
            Some(p) if p < bound => {
                let inv = r.get(p).unwrap().inv().unwrap();
                let row = r.scaled(&inv);
                for other in self.rows.iter_mut() {
                    if let Some(c) = other.get(p).cloned() {
                        other.add_scaled(&row, &-c);
                    }
                }
                self.pivots.insert(p, self.rows.len());
                self.rows.push(row);
                None
            }
            _ => Some(r),
        }
    }

    /// Returns true when `v` was independent of the stored rows.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        self.insert_bounded(v, usize::MAX).is_none()
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn field(&self) -> Field {
        self.field
    }
}

/// Tags `v` by appending `e_tag` above [`TAG_OFFSET`].
pub fn with_tag(v: &SparseVec, tag: usize, c: Scalar) -> SparseVec {
    let mut out = v.clone();
    out.add_term(TAG_OFFSET + tag, c);
    out
}

/// Rank together with kernel and image bases, one homogeneous block at a time.
#[derive(Clone, Debug)]
pub struct RankInfo {
    pub rank: usize,
    pub kernel: Vec<SparseVec>,
    pub image: Vec<SparseVec>,
    /// Per source degree: (rank, kernel dimension).
    pub by_degree: BTreeMap<i64, (usize, usize)>,
}

/// Kernel and image of the linear map sending `inputs[i]` to `columns[i]`.
pub fn kernel_image(field: Field, columns: &[SparseVec]) -> (Vec<SparseVec>, Vec<SparseVec>) {
    let mut ech = Echelon::new(field);
    let mut kernel = Vec::new();
    for (i, col) in columns.iter().enumerate() {
        let aug = with_tag(col, i, field.one());
        if let Some(r) = ech.insert_bounded(&aug, TAG_OFFSET) {
            let (_, tags) = r.split_at(TAG_OFFSET);
            kernel.push(tags);
        }
    }
    let image = ech
        .rows()
        .iter()
        .map(|r| r.split_at(TAG_OFFSET).0)
        .collect();
    (kernel, image)
}

/// Solves `Σ x_i columns[i] = rhs`, returning one solution when it exists.
pub fn solve(field: Field, columns: &[SparseVec], rhs: &SparseVec) -> Option<Vec<Scalar>> {
    let mut ech = Echelon::new(field);
    for (i, col) in columns.iter().enumerate() {
        ech.insert_bounded(&with_tag(col, i, field.one()), TAG_OFFSET);
    }
    let (coords, tags) = ech.reduce(rhs).split_at(TAG_OFFSET);
    if !coords.is_zero() {
        return None;
    }
    let mut x = vec![field.zero(); columns.len()];
    for (i, c) in tags.iter() {
        x[i] = -c;
    }
    Some(x)
}

/// Rank of the span of `vectors`.
pub fn rank_of(field: Field, vectors: &[SparseVec]) -> usize {
    let mut ech = Echelon::new(field);
    vectors.iter().filter(|v| ech.insert(v)).count()
}

/// A homogeneous linear map between graded spaces; `columns[j]` is the image of source basis `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedLinearMap {
    pub source: GradedVectorSpace,
    pub target: GradedVectorSpace,
    pub degree: i64,
    columns: Vec<SparseVec>,
}

impl GradedLinearMap {
    pub fn new(
        source: GradedVectorSpace,
        target: GradedVectorSpace,
        degree: i64,
        columns: Vec<SparseVec>,
    ) -> Result<Self> {
        if columns.len() != source.dim() {
            return Err(Error::Degree(format!(
                "{} columns for a {}-dimensional source",
                columns.len(),
                source.dim()
            )));
        }
        for (j, col) in columns.iter().enumerate() {
            for (i, _) in col.iter() {
                if i >= target.dim() || target.degree(i) != source.degree(j) + degree {
                    return Err(Error::Degree(format!(
                        "entry {} -> {} does not have degree {degree}",
                        source.name(j),
                        target.basis().get(i).map(|b| b.name.as_str()).unwrap_or("?")
                    )));
                }
            }
        }
        Ok(GradedLinearMap {
            source,
            target,
            degree,
            columns,
        })
    }

    pub fn zero(source: GradedVectorSpace, target: GradedVectorSpace, degree: i64) -> Self {
        let columns = vec![SparseVec::new(); source.dim()];
        GradedLinearMap {
            source,
            target,
            degree,
            columns,
        }
    }

    pub fn identity(space: GradedVectorSpace, field: Field) -> Self {
        let columns = (0..space.dim()).map(|i| SparseVec::unit(i, field)).collect();
        GradedLinearMap {
            source: space.clone(),
            target: space,
            degree: 0,
            columns,
        }
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, c) in v.iter() {
            out.add_scaled(&self.columns[j], c);
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedLinearMap) -> GradedLinearMap {
        GradedLinearMap {
            source: other.source.clone(),
            target: self.target.clone(),
            degree: self.degree + other.degree,
            columns: other.columns.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(SparseVec::is_zero)
    }

    /// Exact rank plus homogeneous kernel and image bases, computed degree by degree.
    pub fn gauss_rank(&self, field: Field) -> RankInfo {
        let mut kernel = Vec::new();
        let mut image = Vec::new();
        let mut by_degree = BTreeMap::new();
        for k in self.source.degree_support() {
            let idx = self.source.indices_in_degree(k);
            let cols: Vec<SparseVec> = idx.iter().map(|&j| self.columns[j].clone()).collect();
            let (ker, im) = kernel_image(field, &cols);
            by_degree.insert(k, (im.len(), ker.len()));
            kernel.extend(ker.into_iter().map(|v| v.remap(|t| Some(idx[t]))));
            image.extend(im);
        }
        RankInfo {
            rank: image.len(),
            kernel,
            image,
            by_degree,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: usize) -> GradedVectorSpace {
        GradedVectorSpace::from_pairs((0..n).map(|i| (format!("x{i}"), 0))).unwrap()
    }

    #[test]
    fn zero_map_rank() {
        let m = GradedLinearMap::zero(space(3), space(3), 0);
        let r = m.gauss_rank(Field::Rational);
        assert_eq!(r.rank, 0);
        assert_eq!(r.kernel.len(), 3);
    }

    #[test]
    fn identity_rank() {
        let m = GradedLinearMap::identity(space(2), Field::Rational);
        assert_eq!(m.gauss_rank(Field::Rational).rank, 2);
    }

    #[test]
    fn rank_over_f2() {
        // rows (1,1),(1,1): both columns equal (1,1)
        let f = Field::Prime(2);
        let col = SparseVec::from_entries([(0, f.one()), (1, f.one())]);
        let m = GradedLinearMap::new(space(2), space(2), 0, vec![col.clone(), col]).unwrap();
        let r = m.gauss_rank(f);
        assert_eq!(r.rank, 1);
        assert_eq!(r.kernel.len(), 1);
        assert!(m.apply(&r.kernel[0]).is_zero());
    }

    #[test]
    fn solve_finds_combination() {
        let f = Field::Rational;
        let a = SparseVec::from_entries([(0, f.one()), (1, f.one())]);
        let b = SparseVec::unit(1, f);
        let rhs = SparseVec::from_entries([(0, f.from_i64(2)), (1, f.from_i64(5))]);
        let x = solve(f, &[a.clone(), b.clone()], &rhs).unwrap();
        assert_eq!(x, vec![f.from_i64(2), f.from_i64(3)]);
        assert!(solve(f, &[a], &SparseVec::unit(1, f)).is_none());
    }

    #[test]
    fn rejects_wrong_degree_entry() {
        let src = GradedVectorSpace::from_pairs([("a", 0)]).unwrap();
        let tgt = GradedVectorSpace::from_pairs([("b", 0)]).unwrap();
        let col = SparseVec::unit(0, Field::Rational);
        assert!(GradedLinearMap::new(src, tgt, 1, vec![col]).is_err());
    }
}
