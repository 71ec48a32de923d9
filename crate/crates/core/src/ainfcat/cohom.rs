use std::collections::{BTreeMap, HashMap};

use super::AInfCategory;
use crate::grlin::{
    solve, ChainComplex, Cohomology, Field, GradedLinearMap, GradedVectorSpace, SparseVec,
};

/// Cohomology of one hom complex with a flat basis of representative classes.
#[derive(Clone, Debug)]
pub struct HomCohomology {
    pub cohomology: Cohomology,
    /// `(degree, representative cocycle)`, sorted by degree.
    pub basis: Vec<(i64, SparseVec)>,
    offsets: BTreeMap<i64, usize>,
}

impl HomCohomology {
    fn new(cohomology: Cohomology) -> Self {
        let mut basis = Vec::new();
        let mut offsets = BTreeMap::new();
        for (&k, reps) in &cohomology.representatives {
            offsets.insert(k, basis.len());
            basis.extend(reps.iter().map(|r| (k, r.clone())));
        }
        HomCohomology {
            cohomology,
            basis,
            offsets,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Flat basis indices of classes in degree `k`.
    pub fn indices_in_degree(&self, k: i64) -> std::ops::Range<usize> {
        let start = self.offsets.get(&k).copied().unwrap_or(0);
        start..start + self.cohomology.dim(k)
    }

    /// Flat coordinates of the class of a cocycle.
    pub fn class_of(&self, space: &GradedVectorSpace, v: &SparseVec) -> Option<SparseVec> {
        let mut parts: BTreeMap<i64, SparseVec> = BTreeMap::new();
        for (i, c) in v.iter() {
            parts.entry(space.degree(i)).or_default().add_term(i, c.clone());
        }
        let mut out = SparseVec::new();
        for (k, part) in parts {
            let coords = self.cohomology.class_of(k, &part)?;
            let off = self.offsets.get(&k).copied().unwrap_or(0);
            for (j, c) in coords.into_iter().enumerate() {
                out.add_term(off + j, c);
            }
        }
        Some(out)
    }

    /// Cocycle representing flat coordinates.
    pub fn section(&self, coords: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in coords.iter() {
            out.add_scaled(&self.basis[i].1, c);
        }
        out
    }
}

/// The cohomological category with composition `[a₂]·[a₁] = (−1)^{|a₁|}[μ²(a₂,a₁)]`.
#[derive(Clone, Debug)]
pub struct CohomologyCategory {
    field: Field,
    objects: Vec<String>,
    spaces: Vec<Vec<GradedVectorSpace>>,
    homs: Vec<Vec<HomCohomology>>,
    /// `(x, y, z, i, j)` ↦ `[b_j]·[a_i]` with `a_i ∈ H(x,y)`, `b_j ∈ H(y,z)`.
    table: HashMap<(usize, usize, usize, usize, usize), SparseVec>,
    units: Vec<Option<SparseVec>>,
}

/// The differential `μ¹` on `hom(x, y)` as a chain complex.
pub fn hom_complex(cat: &AInfCategory, x: usize, y: usize) -> ChainComplex {
    let space = cat.hom(x, y).clone();
    let f = cat.field();
    let cols = (0..space.dim())
        .map(|i| cat.mu(&[x, y], &[&SparseVec::unit(i, f)]))
        .collect();
    let d = GradedLinearMap::new(space.clone(), space, 1, cols).expect("μ¹ has degree 1");
    ChainComplex::new(d).expect("μ¹ squares to zero")
}

pub fn cohomology_category(cat: &AInfCategory) -> CohomologyCategory {
    let n = cat.num_objects();
    let f = cat.field();
    let homs: Vec<Vec<HomCohomology>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| HomCohomology::new(hom_complex(cat, x, y).cohomology(f)))
                .collect()
        })
        .collect();
    let spaces: Vec<Vec<GradedVectorSpace>> = (0..n)
        .map(|x| (0..n).map(|y| cat.hom(x, y).clone()).collect())
        .collect();
    let mut table = HashMap::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for (i, (da, a)) in homs[x][y].basis.iter().enumerate() {
                    for (j, (_, b)) in homs[y][z].basis.iter().enumerate() {
                        let mut prod = SparseVec::new();
                        prod.add_signed(&cat.mu(&[x, y, z], &[b, a]), *da);
                        let c = homs[x][z]
                            .class_of(&spaces[x][z], &prod)
                            .expect("products of cocycles are cocycles");
                        if !c.is_zero() {
                            table.insert((x, y, z, i, j), c);
                        }
                    }
                }
            }
        }
    }
    let mut hc = CohomologyCategory {
        field: f,
        objects: cat.objects().to_vec(),
        spaces,
        homs,
        table,
        units: Vec::new(),
    };
    hc.units = (0..n).map(|x| hc.find_unit(x)).collect();
    hc
}

impl CohomologyCategory {
    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn hom(&self, x: usize, y: usize) -> &HomCohomology {
        &self.homs[x][y]
    }

    pub fn dims(&self, x: usize, y: usize) -> BTreeMap<i64, usize> {
        self.homs[x][y].cohomology.nonzero_dims()
    }

    pub fn class_of(&self, x: usize, y: usize, v: &SparseVec) -> Option<SparseVec> {
        self.homs[x][y].class_of(&self.spaces[x][y], v)
    }

    /// `b·a` for `a ∈ H(x,y)`, `b ∈ H(y,z)` in flat coordinates.
    pub fn compose(&self, x: usize, y: usize, z: usize, b: &SparseVec, a: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, ca) in a.iter() {
            for (j, cb) in b.iter() {
                if let Some(v) = self.table.get(&(x, y, z, i, j)) {
                    out.add_scaled(v, &(ca * cb));
                }
            }
        }
        out
    }

    pub fn unit(&self, x: usize) -> Option<&SparseVec> {
        self.units[x].as_ref()
    }

    fn find_unit(&self, x: usize) -> Option<SparseVec> {
        let n = self.objects.len();
        let cand: Vec<usize> = self.homs[x][x].indices_in_degree(0).collect();
        let f = self.field;
        let mut cols = vec![SparseVec::new(); cand.len()];
        let mut rhs = SparseVec::new();
        let mut off = 0;
        let mut push = |cols: &mut Vec<SparseVec>, rhs: &mut SparseVec, prods: Vec<SparseVec>, target: usize, dim: usize| {
            for (c, p) in cols.iter_mut().zip(prods) {
                c.add(&p.remap(|i| Some(i + off)));
            }
            rhs.add_term(off + target, f.one());
            off += dim;
        };
        for y in 0..n {
            let dim = self.homs[x][y].dim();
            for a in 0..dim {
                let av = SparseVec::unit(a, f);
                let prods = cand
                    .iter()
                    .map(|&k| self.compose(x, x, y, &av, &SparseVec::unit(k, f)))
                    .collect();
                push(&mut cols, &mut rhs, prods, a, dim);
            }
            let dim = self.homs[y][x].dim();
            for b in 0..dim {
                let bv = SparseVec::unit(b, f);
                let prods = cand
                    .iter()
                    .map(|&k| self.compose(y, x, x, &SparseVec::unit(k, f), &bv))
                    .collect();
                push(&mut cols, &mut rhs, prods, b, dim);
            }
        }
        let x_coords = solve(f, &cols, &rhs)?;
        Some(SparseVec::from_entries(
            cand.iter().zip(x_coords).map(|(&k, c)| (k, c)),
        ))
    }

    /// Exhaustive associativity check on basis classes.
    pub fn is_associative(&self) -> bool {
        let n = self.objects.len();
        let f = self.field;
        for w in 0..n {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        for a in 0..self.homs[w][x].dim() {
                            for b in 0..self.homs[x][y].dim() {
                                for c in 0..self.homs[y][z].dim() {
                                    let (a, b, c) = (
                                        SparseVec::unit(a, f),
                                        SparseVec::unit(b, f),
                                        SparseVec::unit(c, f),
                                    );
                                    let l = self.compose(w, y, z, &c, &self.compose(w, x, y, &b, &a));
                                    let r = self.compose(w, x, z, &self.compose(x, y, z, &c, &b), &a);
                                    if l != r {
                                        return false;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        true
    }
}
