//! Twist functors: the projective twist `Φ_V`, its adjoint, the spherical twist `T_V`
//! and the comparison `α: T_V² → Φ_V`, together with their verifiers.

mod module;
mod spherical;
mod tw;
mod verify;

use std::sync::Arc;

use serde::Serialize;

pub use module::{build_g, build_h, explicit_phi_module, phi_module, phi_on_morphism, ModuleTwist};
pub use tw::{phi_adjoint_tw, phi_tw, phi_tw_morphism, tw_hom_dims, TwTwist};
pub use verify::{spanning_class_audit, verify_shift, Invisible, ShiftReport, ShiftStage, SpanningFailure, SpanningReport};
pub use spherical::{
    alpha_map, explicit_t_squared, AlphaMap, same_up_to_relabeling, spherical_twist_module,
    spherical_twist_morphism, t_squared_module,
};

use crate::ainfcat::{classify_cp_object, AInfCategory, PairingIntegral, Verdict};
use crate::error::{Error, Result};
use crate::grlin::SparseVec;

/// A ℂPⁿ-object `(V, h)` with its integration functional.
#[derive(Clone, Debug)]
pub struct CpTwistData {
    pub cat: Arc<AInfCategory>,
    pub v: usize,
    pub h: SparseVec,
    pub n: usize,
    pub integral: PairingIntegral,
}

impl CpTwistData {
    /// Checked constructor: `(V, h)` must classify as a ℂPⁿ-object.
    pub fn new(
        cat: Arc<AInfCategory>,
        v: usize,
        h: SparseVec,
        n: usize,
        integral: PairingIntegral,
    ) -> Result<Self> {
        let d = CpTwistData::raw(cat, v, h, n, integral);
        let verdict = d.classify();
        if !verdict.holds {
            let msg: Vec<String> = verdict.failures.iter().map(|(c, m)| format!("({c}) {m}")).collect();
            return Err(Error::InvalidTwistData(msg.join("; ")));
        }
        Ok(d)
    }

    /// Unchecked constructor, used for degenerate data such as `h = 0`.
    pub fn raw(cat: Arc<AInfCategory>, v: usize, h: SparseVec, n: usize, integral: PairingIntegral) -> Self {
        CpTwistData {
            cat,
            v,
            h,
            n,
            integral,
        }
    }

    /// Object 0 of a polynomial fixture with `h` at basis index 1.
    pub fn fixture(cat: &Arc<AInfCategory>, n: usize) -> Result<Self> {
        let integral = PairingIntegral::candidates(cat, 0, 2 * n as i64)
            .into_iter()
            .next()
            .ok_or_else(|| Error::InvalidTwistData("top degree of hom(V,V) is not one-dimensional".into()))?;
        CpTwistData::new(cat.clone(), 0, SparseVec::unit(1, cat.field()), n, integral)
    }

    pub fn classify(&self) -> Verdict {
        classify_cp_object(&self.cat, self.v, &self.h, self.n, &self.integral)
    }
}

/// Which construction produced a [`TwistResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    /// `Φ_V` on modules: `Cone(g)` with `g: Cone(H) → 𝒴`.
    ProjectiveModule,
    /// `Φ_V` on twisted complexes.
    ProjectiveTw,
    /// `Φ^∨_V` on twisted complexes.
    AdjointTw,
    /// `T_V` on modules: `Cone(ev)`.
    SphericalModule,
}

/// A twisted object together with the maps it was built from.
///
/// `h` and `g` are absent for the spherical twist. For the adjoint twist they hold
/// `H^∨` and `g^∨`, and `ev` holds `ev^∨`.
#[derive(Clone, Debug)]
pub struct TwistResult<O, M> {
    pub object: O,
    pub h: Option<M>,
    pub g: Option<M>,
    pub ev: M,
    /// Inclusion of the second summand into the first cone.
    pub iota: Option<M>,
    /// Projection of the result onto its first summand.
    pub pi: Option<M>,
    pub provenance: Provenance,
}
