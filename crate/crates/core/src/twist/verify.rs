//! Certificates for `Φ_V𝒱 ≅ S^{−2n}𝒱` and the spanning-class property.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::{phi_module, CpTwistData};
use crate::ainfcat::hom_complex;
use crate::amod::{
    cone, hom_h_dim, module_cohomology, mu1_q_exhaustive, quasi_iso_check, shift_module, yoneda_module,
    AInfModule, PreModuleHom,
};
use crate::error::{Error, Result};
use crate::grlin::{ChainComplex, GradedLinearMap, GradedVectorSpace, SparseVec};

/// One projection `M → M/K` in the chain.
#[derive(Clone, Debug, Serialize)]
pub struct ShiftStage {
    pub index: usize,
    /// Summands of `Φ_V𝒱` spanning `K`.
    pub killed: Vec<String>,
    pub submodule: bool,
    pub kernel_acyclic: bool,
    pub closed: bool,
    pub quasi_iso: bool,
}

impl ShiftStage {
    pub fn passed(&self) -> bool {
        self.submodule && self.kernel_acyclic && self.closed && self.quasi_iso
    }
}

/// Comparison `Φ_V(Yoneda W)` against `Yoneda W` for `W` invisible to `V`.
#[derive(Clone, Debug, Serialize)]
pub struct Invisible {
    pub object: String,
    pub dims_phi: Vec<BTreeMap<i64, usize>>,
    pub dims_yoneda: Vec<BTreeMap<i64, usize>>,
    pub inclusion_quasi_iso: bool,
}

impl Invisible {
    pub fn passed(&self) -> bool {
        self.dims_phi == self.dims_yoneda && self.inclusion_quasi_iso
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftReport {
    pub n: usize,
    /// Per object, nonzero cohomology dims of `Φ_V(Yoneda V)`.
    pub dims_phi: Vec<BTreeMap<i64, usize>>,
    /// Per object, nonzero cohomology dims of `S^{−2n}(Yoneda V)`.
    pub dims_expected: Vec<BTreeMap<i64, usize>>,
    pub stages: Vec<ShiftStage>,
    /// The summand left after the last stage, when exactly one survives.
    pub survivor: Option<String>,
    pub invisible: Vec<Invisible>,
    /// First failing stage, if any.
    pub failure: Option<String>,
}

impl ShiftReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn nonzero_dims(m: &AInfModule) -> Vec<BTreeMap<i64, usize>> {
    (0..m.category().num_objects())
        .map(|x| module_cohomology(m, x).nonzero_dims())
        .collect()
}

/// `y`-indices of `e, h, …, hⁿ` in `hom(V,V)`, which must be minimal and spanned by powers of `h`.
fn powers(d: &CpTwistData) -> Result<Vec<usize>> {
    let cat = &d.cat;
    let f = cat.field();
    let v = d.v;
    let hv = cat.hom(v, v);
    if !hom_complex(cat, v, v).differential.is_zero() || hv.dim() != d.n + 1 {
        return Err(Error::NotMinimal("hom(V,V) must be minimal of dimension n+1".into()));
    }
    let e = cat
        .strict_units()
        .map(|u| u[v])
        .ok_or_else(|| Error::NotStrictlyUnital("shift certificate needs strict units".into()))?;
    let mut out = vec![e];
    let mut p = SparseVec::unit(e, f);
    for _ in 0..d.n {
        p = cat.mu(&[v, v, v], &[&p, &d.h]);
        let mut it = p.iter();
        match (it.next(), it.next()) {
            (Some((j, _)), None) if !out.contains(&j) => out.push(j),
            _ => return Err(Error::NotMinimal("powers of h are not basis vectors".into())),
        }
    }
    Ok(out)
}

/// `M/K` for a set `K` of basis vectors, with the projection `M → M/K`.
struct Quotient {
    module: Arc<AInfModule>,
    proj: PreModuleHom,
    submodule: bool,
    kernel_acyclic: bool,
}

fn quotient(m: &Arc<AInfModule>, kill: &[Vec<bool>]) -> Result<Quotient> {
    let f = m.field();
    let n = m.category().num_objects();
    let mut remap: Vec<Vec<Option<usize>>> = Vec::with_capacity(n);
    let mut spaces = Vec::with_capacity(n);
    for x in 0..n {
        let sp = m.space(x);
        let mut next = 0;
        let mut r = Vec::with_capacity(sp.dim());
        let mut basis = Vec::new();
        for i in 0..sp.dim() {
            if kill[x][i] {
                r.push(None);
            } else {
                r.push(Some(next));
                next += 1;
                basis.push(sp.basis()[i].clone());
            }
        }
        remap.push(r);
        spaces.push(GradedVectorSpace::new(basis)?);
    }
    let mut q = AInfModule::new(m.category().clone(), spaces, m.arity_bound())?;
    let mut submodule = true;
    for (key, out) in m.table().iter() {
        let d = key.len() / 2;
        let (x0, xb) = (key[0], key[d - 1]);
        match remap[xb][key[d]] {
            None => submodule &= out.keys().all(|i| kill[x0][i]),
            Some(b) => {
                let image = out.remap(|i| remap[x0][i]);
                if !image.is_zero() {
                    let mut nk = key[d..].to_vec();
                    nk[0] = b;
                    q.set_mu_unchecked(&key[..d], &nk, image);
                }
            }
        }
    }
    let mut kernel_acyclic = true;
    for x in 0..n {
        let full = m.complex(x);
        let ks: Vec<usize> = (0..m.space(x).dim()).filter(|&i| kill[x][i]).collect();
        let pos: BTreeMap<usize, usize> = ks.iter().enumerate().map(|(j, &i)| (i, j)).collect();
        let space = GradedVectorSpace::new(ks.iter().map(|&i| m.space(x).basis()[i].clone()).collect())?;
        let cols = ks
            .iter()
            .map(|&i| full.differential.column(i).remap(|j| pos.get(&j).copied()))
            .collect();
        let cx = ChainComplex::new(GradedLinearMap::new(space.clone(), space, 1, cols)?)?;
        kernel_acyclic &= cx.cohomology(f).total_dim() == 0;
    }
    let module = Arc::new(q);
    // strict maps carry (−1)^{|b|}, as the cone inclusion does
    let proj = PreModuleHom::from_fn(m.clone(), module.clone(), 0, 1, |objs, inputs| {
        let x = objs[0];
        remap[x][inputs[0]].map_or_else(SparseVec::new, |j| {
            SparseVec::unit(j, f).scaled(&f.sign(m.space(x).degree(inputs[0])))
        })
    });
    Ok(Quotient {
        module,
        proj,
        submodule,
        kernel_acyclic,
    })
}

/// Certifies `Φ_V𝒱 ≅ S^{−2n}𝒱` twice: by cohomology dims, and by the chain of projections
/// whose kernels are acyclic submodules, ending at `hⁿ[−2n]𝒱`. Also checks `Φ_V(Yoneda W) ≅ Yoneda W`
/// for every object `W` with `hom_H(V, W) = 0`.
pub fn verify_shift(d: &CpTwistData) -> Result<ShiftReport> {
    let cat = &d.cat;
    let v = d.v;
    let n = d.n;
    let yv = Arc::new(yoneda_module(cat, v));
    let phi = phi_module(d, &yv)?.object;
    let dims_phi = nonzero_dims(&phi);
    let dims_expected = nonzero_dims(&shift_module(-2 * n as i64, &yv));
    let mut failure = (dims_phi != dims_expected).then(|| "dims of Φ_V𝒱 differ from S^{-2n}𝒱".to_string());

    let pw = powers(d)?;
    let hv = cat.hom(v, v);
    let zdim = hv.dim();
    let nobj = cat.num_objects();
    // (row, y) labels of every basis vector of Φ_V𝒱; row 2 is the 𝒱 summand.
    let label = |x: usize, i: usize| -> (usize, Option<usize>) {
        let dm = cat.hom(x, v).dim();
        let a = zdim * dm;
        if i < 2 * a {
            (i / a, Some((i % a) / dm))
        } else {
            (2, None)
        }
    };
    let row_name = |row: usize, y: Option<usize>| match (row, y) {
        (2, _) => "𝒱".to_string(),
        (0, Some(y)) => format!("{}⊗𝒱", hv.name(y)),
        (_, Some(y)) => format!("{}[1]⊗𝒱", hv.name(y)),
        _ => unreachable!(),
    };
    let mut alive: Vec<Vec<bool>> = (0..nobj).map(|x| vec![true; phi.space(x).dim()]).collect();
    let mut current = phi.clone();
    let mut stages = Vec::new();
    for k in 1..=n + 1 {
        let targets: Vec<(usize, Option<usize>)> = if k == 1 {
            vec![(1, Some(pw[0])), (2, None)]
        } else {
            vec![(0, Some(pw[k - 2])), (1, Some(pw[k - 1]))]
        };
        let mut kill = Vec::with_capacity(nobj);
        for x in 0..nobj {
            let mut kx = Vec::new();
            for i in 0..phi.space(x).dim() {
                if alive[x][i] {
                    let hit = targets.contains(&label(x, i));
                    kx.push(hit);
                    if hit {
                        alive[x][i] = false;
                    }
                }
            }
            kill.push(kx);
        }
        let q = quotient(&current, &kill)?;
        let closed = mu1_q_exhaustive(&q.proj).is_zero();
        let quasi_iso = closed && quasi_iso_check(&q.proj)?.is_quasi_iso;
        let stage = ShiftStage {
            index: k,
            killed: targets.iter().map(|&(r, y)| row_name(r, y)).collect(),
            submodule: q.submodule,
            kernel_acyclic: q.kernel_acyclic,
            closed,
            quasi_iso,
        };
        if failure.is_none() && !stage.passed() {
            failure = Some(format!("stage {k} killing {:?}", stage.killed));
        }
        stages.push(stage);
        current = q.module;
    }
    let mut left: Vec<(usize, Option<usize>)> = Vec::new();
    for (x, ax) in alive.iter().enumerate() {
        for (i, &a) in ax.iter().enumerate() {
            if a && !left.contains(&label(x, i)) {
                left.push(label(x, i));
            }
        }
    }
    let survivor = match left.as_slice() {
        [(0, Some(y))] if *y == pw[n] => Some(format!("{}[-{}]𝒱", hv.name(*y), 2 * n)),
        _ => None,
    };
    if failure.is_none() && survivor.is_none() {
        failure = Some(format!("unexpected survivors {left:?}"));
    }
    if failure.is_none() && nonzero_dims(&current) != dims_expected {
        failure = Some("final quotient has the wrong cohomology".into());
    }

    let mut invisible = Vec::new();
    for w in (0..nobj).filter(|&w| w != v) {
        if hom_complex(cat, v, w).cohomology(cat.field()).total_dim() != 0 {
            continue;
        }
        let yw = Arc::new(yoneda_module(cat, w));
        let r = phi_module(d, &yw)?;
        let g = r.g.as_ref().expect("projective twist keeps g");
        let iota = cone(g)?.iota;
        let inc = mu1_q_exhaustive(&iota).is_zero() && quasi_iso_check(&iota)?.is_quasi_iso;
        let item = Invisible {
            object: cat.objects()[w].clone(),
            dims_phi: nonzero_dims(&r.object),
            dims_yoneda: nonzero_dims(&yw),
            inclusion_quasi_iso: inc,
        };
        if failure.is_none() && !item.passed() {
            failure = Some(format!("Φ_V does not fix Yoneda {}", item.object));
        }
        invisible.push(item);
    }
    Ok(ShiftReport {
        n,
        dims_phi,
        dims_expected,
        stages,
        survivor,
        invisible,
        failure,
    })
}

/// A catalog module on which a vanishing clause fails.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SpanningFailure {
    pub module: String,
    /// 1: `Hom(A, B[i]) = 0` for all `A, i` but `B ≠ 0`; 2: the same with `Hom(B[i], A)`.
    pub clause: u8,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpanningReport {
    /// Empty candidate set: every clause holds vacuously.
    pub degenerate: bool,
    pub failures: Vec<SpanningFailure>,
}

impl SpanningReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn degree_span(m: &AInfModule) -> Option<(i64, i64)> {
    let ds: Vec<i64> = m
        .spaces()
        .iter()
        .flat_map(|s| s.basis().iter().map(|b| b.degree))
        .collect();
    Some((*ds.iter().min()?, *ds.iter().max()?))
}

/// Whether `Hom^r_{H(Q)}(m0, m1)` is nonzero for some `r` in `lo..=hi`. Degrees are
/// tried from the middle outwards, where homs usually live, and the search stops early.
fn any_hom(m0: &Arc<AInfModule>, m1: &Arc<AInfModule>, lo: i64, hi: i64) -> Result<bool> {
    let mid = (lo + hi).div_euclid(2);
    let mut rs: Vec<i64> = (lo..=hi).collect();
    rs.sort_by_key(|r| ((r - mid).abs(), *r));
    for r in rs {
        if hom_h_dim(m0, m1, r)? > 0 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Checks both vanishing implications of a spanning class on every module of `catalog`.
/// Shifts range over all degrees where a nonzero hom can occur.
pub fn spanning_class_audit(
    candidates: &[(String, Arc<AInfModule>)],
    catalog: &[(String, Arc<AInfModule>)],
) -> Result<SpanningReport> {
    let mut failures = Vec::new();
    if candidates.is_empty() {
        return Ok(SpanningReport {
            degenerate: true,
            failures,
        });
    }
    for (name, b) in catalog {
        let nonzero = nonzero_dims(b).iter().any(|m| !m.is_empty());
        if !nonzero {
            continue;
        }
        let mut out_zero = true;
        let mut in_zero = true;
        for (_, a) in candidates {
            let (Some((alo, ahi)), Some((blo, bhi))) = (degree_span(a), degree_span(b)) else {
                continue;
            };
            let cat = a.category();
            let reach = (0..cat.num_objects())
                .flat_map(|x| (0..cat.num_objects()).map(move |y| (x, y)))
                .flat_map(|(x, y)| cat.hom(x, y).basis().iter().map(|e| e.degree.abs()))
                .max()
                .unwrap_or(0)
                * a.arity_bound().max(b.arity_bound()) as i64
                + 2;
            out_zero &= !any_hom(a, b, blo - ahi - reach, bhi - alo + reach)?;
            in_zero &= !any_hom(b, a, alo - bhi - reach, ahi - blo + reach)?;
        }
        if out_zero {
            failures.push(SpanningFailure { module: name.clone(), clause: 1 });
        }
        if in_zero {
            failures.push(SpanningFailure { module: name.clone(), clause: 2 });
        }
    }
    Ok(SpanningReport {
        degenerate: candidates.is_empty(),
        failures,
    })
}
