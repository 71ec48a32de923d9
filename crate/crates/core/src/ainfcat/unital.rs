use serde::Serialize;

use super::{cohomology_category, AInfCategory};
use crate::error::{Error, Result};
use crate::grlin::SparseVec;

#[derive(Clone, Debug, Default, Serialize)]
pub struct UnitalReport {
    pub violations: Vec<String>,
}

impl UnitalReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustive check of `μ¹e = 0`, `(−1)^{|a|}μ²(e,a) = a = μ²(a,e)` and
/// `μ^d(…,e,…) = 0` for `d ≥ 3`.
pub fn check_strict_unital(cat: &AInfCategory) -> Result<UnitalReport> {
    let units = cat
        .strict_units()
        .ok_or_else(|| Error::NotStrictlyUnital("no units assigned".into()))?;
    let f = cat.field();
    let names = cat.objects();
    let mut violations = Vec::new();
    for (x, &e) in units.iter().enumerate() {
        let ev = SparseVec::unit(e, f);
        if !cat.mu(&[x, x], &[&ev]).is_zero() {
            violations.push(format!("μ¹(e_{}) ≠ 0", names[x]));
        }
        for y in 0..cat.num_objects() {
            let out = cat.hom(x, y);
            for a in 0..out.dim() {
                let av = SparseVec::unit(a, f);
                let mut left = SparseVec::new();
                left.add_signed(&cat.mu(&[x, y, y], &[&SparseVec::unit(units[y], f), &av]), out.degree(a));
                if left != av {
                    violations.push(format!(
                        "(−1)^|a| μ²(e_{}, {}) ≠ {}",
                        names[y],
                        out.name(a),
                        out.name(a)
                    ));
                }
                if cat.mu(&[x, x, y], &[&av, &ev]) != av {
                    violations.push(format!(
                        "μ²({}, e_{}) ≠ {}",
                        out.name(a),
                        names[x],
                        out.name(a)
                    ));
                }
            }
        }
    }
    let mut higher: Vec<String> = Vec::new();
    for (key, _) in cat.entries() {
        let d = (key.len() - 1) / 2;
        if d < 3 {
            continue;
        }
        let objs = &key[..=d];
        let inputs = &key[d + 1..];
        let hit = (0..d).any(|j| {
            let (s, t) = (objs[d - 1 - j], objs[d - j]);
            s == t && inputs[j] == units[s]
        });
        if hit {
            let spaces = cat.chain_spaces(objs);
            let names: Vec<&str> = inputs.iter().zip(&spaces).map(|(&b, s)| s.name(b)).collect();
            higher.push(format!("μ^{d}({}) ≠ 0 with a unit input", names.join(", ")));
        }
    }
    higher.sort();
    violations.extend(higher);
    Ok(UnitalReport { violations })
}

/// Every object has a two-sided unit in the cohomological category.
pub fn check_c_unital(cat: &AInfCategory) -> UnitalReport {
    let hc = cohomology_category(cat);
    UnitalReport {
        violations: (0..cat.num_objects())
            .filter(|&x| hc.unit(x).is_none())
            .map(|x| format!("no unit in H(hom({0},{0}))", cat.objects()[x]))
            .collect(),
    }
}
