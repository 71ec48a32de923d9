//! Named fixtures: `P(n)`, `2OBJ(n)`, `CONE_H(n)` and the mutation target `CORRUPT_P(2)`.

use std::sync::Arc;

use super::format::{emit_category, emit_complex, emit_integral};
use crate::ainfcat::{AInfCategory, PairingIntegral};
use crate::error::{Error, Result};
use crate::fixtures::{corrupt_p2, fix_2obj, fix_p, w_h};
use crate::grlin::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureKind {
    P,
    TwoObj,
    ConeH,
    CorruptP,
}

/// A parsed fixture name such as `P(2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixtureName {
    pub kind: FixtureKind,
    pub n: usize,
}

impl FixtureName {
    pub fn parse(s: &str) -> Option<Self> {
        let (head, rest) = s.split_once('(')?;
        let n: usize = rest.strip_suffix(')')?.parse().ok()?;
        let kind = match head {
            "P" => FixtureKind::P,
            "2OBJ" => FixtureKind::TwoObj,
            "CONE_H" => FixtureKind::ConeH,
            "CORRUPT_P" if n == 2 => FixtureKind::CorruptP,
            _ => return None,
        };
        (n >= 1).then_some(FixtureName { kind, n })
    }

    pub fn label(&self) -> String {
        let head = match self.kind {
            FixtureKind::P => "P",
            FixtureKind::TwoObj => "2OBJ",
            FixtureKind::ConeH => "CONE_H",
            FixtureKind::CorruptP => "CORRUPT_P",
        };
        format!("{head}({})", self.n)
    }

    /// File stem used by `fixture --out`, e.g. `cone_h1`.
    pub fn stem(&self) -> String {
        self.label().to_lowercase().replace(['(', ')'], "")
    }

    pub fn category(&self) -> AInfCategory {
        let f = Field::Rational;
        match self.kind {
            FixtureKind::P | FixtureKind::ConeH => fix_p(self.n, f),
            FixtureKind::TwoObj => fix_2obj(self.n, f),
            FixtureKind::CorruptP => corrupt_p2(f),
        }
    }
}

/// The generated files as `(file name, contents)` pairs, category file first.
pub fn make_fixture(name: &str) -> Result<Vec<(String, String)>> {
    let fx = FixtureName::parse(name).ok_or_else(|| Error::UnknownFixture(name.into()))?;
    if fx.kind == FixtureKind::CorruptP {
        // its μ² entry breaks the degree rule, so no file could parse back
        return Err(Error::UnknownFixture(format!("{name} exists only as a `verify` input")));
    }
    let stem = fx.stem();
    let cat = Arc::new(fx.category());
    let mut files = vec![(format!("{stem}.cat"), emit_category(&cat))];
    if let Some(i) = PairingIntegral::candidates(&cat, 0, 2 * fx.n as i64).into_iter().next() {
        files.push((format!("{stem}.integral"), emit_integral(&i, &cat)));
    }
    if fx.kind == FixtureKind::ConeH {
        files.push((format!("{stem}.W_h.tw"), emit_complex(&w_h(&cat))));
    }
    Ok(files)
}
