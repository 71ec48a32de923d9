use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{cohomology_category, AInfCategory, CohomologyCategory};
use crate::grlin::{rank_of, Scalar, SparseVec};

/// A functional on the degree-`degree` cohomology of `hom(V, V)`, fixed by its
/// value on the class of one cocycle.
#[derive(Clone, Debug)]
pub struct PairingIntegral {
    pub object: usize,
    pub degree: i64,
    pub reference: SparseVec,
    pub value: Scalar,
}

impl PairingIntegral {
    /// The nonzero functionals up to scale: one when the degree is one-dimensional.
    pub fn candidates(cat: &AInfCategory, object: usize, degree: i64) -> Vec<PairingIntegral> {
        let hc = cohomology_category(cat);
        let h = hc.hom(object, object);
        if h.cohomology.dim(degree) != 1 {
            return Vec::new();
        }
        let rep = h.basis[h.indices_in_degree(degree).start].1.clone();
        vec![PairingIntegral {
            object,
            degree,
            reference: rep,
            value: cat.field().one(),
        }]
    }

    /// Value on a class given in flat coordinates; `None` when the top degree is not one-dimensional.
    fn eval(&self, hc: &CohomologyCategory, class: &SparseVec) -> Option<Scalar> {
        let v = self.object;
        let h = hc.hom(v, v);
        let range = h.indices_in_degree(self.degree);
        if range.len() != 1 {
            return None;
        }
        let r = hc.class_of(v, v, &self.reference)?;
        let rc = r.get(range.start)?;
        let cc = match class.get(range.start) {
            Some(c) => c.clone(),
            None => return Some(self.value.field().zero()),
        };
        Some(&(&cc * &rc.inv()?) * &self.value)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    /// `(clause, detail)` for every failed condition.
    pub failures: Vec<(String, String)>,
}

impl Verdict {
    fn from_failures(failures: Vec<(String, String)>) -> Self {
        Verdict {
            holds: failures.is_empty(),
            failures,
        }
    }

    pub fn failed(&self, clause: &str) -> bool {
        self.failures.iter().any(|(c, _)| c == clause)
    }
}

fn fail(out: &mut Vec<(String, String)>, clause: &str, detail: impl Into<String>) {
    out.push((clause.to_string(), detail.into()));
}

/// Checks full rank of `H^{top−k}(X,V) × H^k(V,X) → 𝕂` for all `X`, `k`.
fn pairing_failures(
    cat: &AInfCategory,
    hc: &CohomologyCategory,
    v: usize,
    top: i64,
    integral: &PairingIntegral,
    out: &mut Vec<(String, String)>,
) {
    let f = cat.field();
    if integral.object != v || integral.degree != top {
        fail(out, "c", "integral is not defined on the top degree of hom(V,V)");
        return;
    }
    for x in 0..cat.num_objects() {
        let to_x = hc.hom(v, x);
        let from_x = hc.hom(x, v);
        let mut degrees: BTreeSet<i64> = to_x.cohomology.nonzero_dims().into_keys().collect();
        degrees.extend(from_x.cohomology.nonzero_dims().into_keys().map(|k| top - k));
        for k in degrees {
            let cols: Vec<usize> = to_x.indices_in_degree(k).collect();
            let rows: Vec<usize> = from_x.indices_in_degree(top - k).collect();
            let mut full = cols.len() == rows.len();
            if full {
                let mut matrix = Vec::with_capacity(cols.len());
                for &j in &cols {
                    let mut col = SparseVec::new();
                    for (r, &i) in rows.iter().enumerate() {
                        let p = hc.compose(v, x, v, &SparseVec::unit(i, f), &SparseVec::unit(j, f));
                        match integral.eval(hc, &p) {
                            Some(val) => col.add_term(r, val),
                            None => {
                                fail(out, "c", "integral undefined: top degree is not one-dimensional");
                                return;
                            }
                        }
                    }
                    matrix.push(col);
                }
                full = rank_of(f, &matrix) == cols.len();
            }
            if !full {
                fail(
                    out,
                    "c",
                    format!("pairing degenerate for X = {} in degree {k}", cat.objects()[x]),
                );
            }
        }
    }
}

/// Decides whether `(V, h)` is a ℂPⁿ-object with the given integral.
pub fn classify_cp_object(
    cat: &AInfCategory,
    v: usize,
    h: &SparseVec,
    n: usize,
    integral: &PairingIntegral,
) -> Verdict {
    let mut out = Vec::new();
    let hc = cohomology_category(cat);
    let space = cat.hom(v, v);
    let closed = cat.mu(&[v, v], &[h]).is_zero();
    if space.degree_of(h) != Some(2) {
        fail(&mut out, "a", "h is not a nonzero degree 2 element");
    } else if !closed {
        fail(&mut out, "a", "μ¹h ≠ 0");
    }
    let expected: BTreeMap<i64, usize> = (0..=n as i64).map(|k| (2 * k, 1)).collect();
    let dims = hc.dims(v, v);
    if dims != expected {
        fail(&mut out, "b", format!("H(hom(V,V)) has dims {dims:?}"));
    } else if hc.unit(v).is_none() {
        fail(&mut out, "b", "H(hom(V,V)) has no unit");
    } else {
        match hc.class_of(v, v, h).filter(|_| closed) {
            None => fail(&mut out, "b", "h is not a cocycle"),
            Some(hcls) => {
                let mut p = hcls.clone();
                for k in 1..=n + 1 {
                    if k > 1 {
                        p = hc.compose(v, v, v, &hcls, &p);
                    }
                    if (k <= n) == p.is_zero() {
                        fail(&mut out, "b", format!("[h]^{k} has the wrong vanishing"));
                    }
                }
            }
        }
    }
    pairing_failures(cat, &hc, v, 2 * n as i64, integral, &mut out);
    Verdict::from_failures(out)
}

/// Decides whether `V` is spherical of dimension `n`.
pub fn classify_spherical(
    cat: &AInfCategory,
    v: usize,
    n: i64,
    integral: &PairingIntegral,
) -> Verdict {
    let mut out = Vec::new();
    let hc = cohomology_category(cat);
    let dims = hc.dims(v, v);
    let expected = BTreeMap::from([(0, 1), (n, 1)]);
    if n < 1 || dims != expected {
        fail(&mut out, "b", format!("H(hom(V,V)) has dims {dims:?}"));
    } else if hc.unit(v).is_none() {
        fail(&mut out, "b", "H(hom(V,V)) has no unit");
    }
    pairing_failures(cat, &hc, v, n, integral, &mut out);
    Verdict::from_failures(out)
}
