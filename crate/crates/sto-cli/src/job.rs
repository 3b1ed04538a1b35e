//! Job files: one integral per TOML file.

use std::path::Path;

use serde::Deserialize;
use sto_core::engine::IntegralKind;
use sto_core::orbital::{Center, SlaterOrbital};

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitalRecord {
    pub n: u32,
    pub l: u32,
    pub m: i32,
    pub delta: f64,
    pub center: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    #[serde(rename = "R")]
    pub r: f64,
    pub orbitals: Vec<OrbitalRecord>,
    pub kind: String,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(rename = "muMax", default = "default_mu_max")]
    pub mu_max: u32,
    #[serde(default)]
    pub oracle: bool,
}

fn default_tol() -> f64 {
    1e-10
}

fn default_mu_max() -> u32 {
    40
}

/// A job after validation against the core invariants.
#[derive(Debug, Clone)]
pub struct Job {
    pub r: f64,
    pub orbitals: [SlaterOrbital; 4],
    pub kind: IntegralKind,
    pub tol: f64,
    pub mu_max: u32,
    pub oracle: bool,
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Schema(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Schema(m) => CliError::Schema(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<Job, CliError> {
        let schema = CliError::Schema;
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(schema(format!("field `R`: must be a finite number > 0, got {}", self.r)));
        }
        let kind = IntegralKind::parse(&self.kind).ok_or_else(|| {
            schema(format!("field `kind`: expected exchange, hybrid or coulomb, got `{}`", self.kind))
        })?;
        if self.orbitals.len() != 4 {
            return Err(schema(format!("field `orbitals`: expected exactly 4 records, got {}", self.orbitals.len())));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(schema(format!("field `tol`: must lie in (0, 1), got {}", self.tol)));
        }
        let mut orbs = Vec::with_capacity(4);
        for (i, o) in self.orbitals.iter().enumerate() {
            let center = match o.center.as_str() {
                "A" | "a" => Center::A,
                "B" | "b" => Center::B,
                c => return Err(schema(format!("orbitals[{i}].center: expected A or B, got `{c}`"))),
            };
            let orb = SlaterOrbital::new(o.n, o.l, o.m, o.delta, center)
                .map_err(|e| schema(format!("orbitals[{i}]: {e}")))?;
            orbs.push(orb);
        }
        let orbitals: [SlaterOrbital; 4] = orbs.try_into().expect("length checked above");
        kind.check(&orbitals).map_err(|e| schema(format!("field `orbitals`: {e}")))?;
        Ok(Job { r: self.r, orbitals, kind, tol: self.tol, mu_max: self.mu_max, oracle: self.oracle })
    }
}
