//! Exact scalars and graded linear algebra.

mod complex;
pub mod linalg;
mod multilinear;
mod scalar;
mod space;

pub use complex::{cohomology, ChainComplex, Cohomology};
pub use linalg::{kernel_image, rank_of, solve, Echelon, GradedLinearMap, RankInfo};
pub use multilinear::{for_each_product, index_tuples};
pub use scalar::{is_prime, Field, Scalar};
pub use space::{BasisElement, GradedVectorSpace, SparseVec};

/// `(-1)^k` as a parity bit.
pub fn parity(k: i64) -> i64 {
    k.rem_euclid(2)
}
