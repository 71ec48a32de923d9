//! Twisted complexes: the additive enlargement `Σ𝒜` and `Tw𝒜` built on top of it.

mod constructions;
mod expand;
mod tw;

use std::collections::HashMap;

pub use constructions::{
    cone_tw, ev_dual_tw, ev_tw, ev_tw_in_basis, shift_tw, tensor_tw, tw_to_module, tw_to_module_mor,
};
pub(crate) use constructions::{dual_complex, hom_complex, shifted, tensor_named};
pub use tw::{materialize, sigma_mu, tw_mu, TwMorphism, TwValidation, TwistedComplex};

use crate::ainfcat::AInfCategory;
use crate::grlin::{BasisElement, GradedVectorSpace};

/// One summand `V ⊗ X` of a sum object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub mult: GradedVectorSpace,
    pub object: usize,
}

/// A formal sum `⊕ V_i ⊗ X_i`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SumObject {
    pub summands: Vec<Summand>,
}

impl SumObject {
    pub fn new(summands: Vec<Summand>) -> Self {
        SumObject { summands }
    }

    /// `𝕂 ⊗ X` with the generator `1` in degree 0.
    pub fn single(x: usize) -> Self {
        SumObject::new(vec![Summand {
            mult: GradedVectorSpace::from_pairs([("1", 0)]).expect("one element"),
            object: x,
        }])
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn mult(&self, i: usize) -> &GradedVectorSpace {
        &self.summands[i].mult
    }

    pub fn object(&self, i: usize) -> usize {
        self.summands[i].object
    }
}

/// One basis element `α ⊗ x` of `hom_{Σ𝒜}`: the elementary map sending basis
/// `p` of `V_src` to basis `q` of `W_tgt`, tensored with basis `x` of `hom(X_src, Y_tgt)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Part {
    pub src: usize,
    pub p: usize,
    pub tgt: usize,
    pub q: usize,
    pub x: usize,
}

/// `hom_{Σ𝒜}(X, Y)` with its basis of elementary tensors.
#[derive(Clone, Debug)]
pub struct SumHom {
    pub space: GradedVectorSpace,
    parts: Vec<Part>,
    alpha_degrees: Vec<i64>,
    x_degrees: Vec<i64>,
    index: HashMap<Part, usize>,
}

impl SumHom {
    pub fn new(cat: &AInfCategory, x: &SumObject, y: &SumObject) -> Self {
        let mut basis = Vec::new();
        let mut parts = Vec::new();
        let mut alpha_degrees = Vec::new();
        let mut x_degrees = Vec::new();
        for (i, si) in x.summands.iter().enumerate() {
            for (j, sj) in y.summands.iter().enumerate() {
                let h = cat.hom(si.object, sj.object);
                for p in 0..si.mult.dim() {
                    for q in 0..sj.mult.dim() {
                        let a = sj.mult.degree(q) - si.mult.degree(p);
                        for xi in 0..h.dim() {
                            basis.push(BasisElement::new(
                                format!(
                                    "{j}.{}<{i}.{}|{}",
                                    sj.mult.name(q),
                                    si.mult.name(p),
                                    h.name(xi)
                                ),
                                a + h.degree(xi),
                            ));
                            parts.push(Part {
                                src: i,
                                p,
                                tgt: j,
                                q,
                                x: xi,
                            });
                            alpha_degrees.push(a);
                            x_degrees.push(h.degree(xi));
                        }
                    }
                }
            }
        }
        let index = parts.iter().enumerate().map(|(k, p)| (*p, k)).collect();
        SumHom {
            space: GradedVectorSpace::new(basis).expect("part names are unique"),
            parts,
            alpha_degrees,
            x_degrees,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.parts.len()
    }

    pub fn part(&self, k: usize) -> Part {
        self.parts[k]
    }

    pub fn index_of(&self, part: &Part) -> Option<usize> {
        self.index.get(part).copied()
    }

    /// Degree of the multiplicity-space factor `α` of basis element `k`.
    pub fn alpha_degree(&self, k: usize) -> i64 {
        self.alpha_degrees[k]
    }

    /// Degree of the `𝒜` factor `x` of basis element `k`.
    pub fn x_degree(&self, k: usize) -> i64 {
        self.x_degrees[k]
    }
}
