//! Run configuration: one JSON document, CLI flags override fields.
//!
//! Every experiment output embeds the fully resolved configuration so a run
//! can be reproduced from its artifacts alone.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::fit::RatioThresholds;
use crate::moduli::Modulus;

/// Dyadic grid range `j1..j2` (inclusive).
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
pub struct GridRange {
    pub from_j: u32,
    pub to_j: u32,
}

impl GridRange {
    pub fn new(from_j: u32, to_j: u32) -> Result<Self> {
        if from_j > to_j {
            return Err(Error::Config(format!(
                "grid range {from_j}..{to_j} is empty"
            )));
        }
        Ok(Self { from_j, to_j })
    }

    /// Parses `"j1..j2"`.
    pub fn parse(text: &str) -> Result<Self> {
        let (a, b) = text
            .split_once("..")
            .ok_or_else(|| Error::Config(format!("expected j1..j2, got '{text}'")))?;
        let from_j = a
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad grid bound '{a}'")))?;
        let to_j = b
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad grid bound '{b}'")))?;
        Self::new(from_j, to_j)
    }

    /// `ρ_j = 1 - 2^{-j}`.
    pub fn rho_grid(&self) -> Vec<f64> {
        (self.from_j..=self.to_j)
            .map(|j| 1.0 - 2f64.powi(-(j as i32)))
            .collect()
    }

    /// `n_j = 2^j`.
    pub fn n_grid(&self) -> Vec<u32> {
        (self.from_j..=self.to_j).map(|j| 1u32 << j).collect()
    }
}

/// Family selection; `beta` falls back to the smoothness coupling
/// `alpha + 1/p + (order-1)` when not given explicitly.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct FamilyConfig {
    pub name: String,
    pub q: f64,
    pub beta: Option<f64>,
    pub nu0: u32,
    pub base: u32,
    pub d: u32,
}

impl Default for FamilyConfig {
    fn default() -> Self {
        Self {
            name: "y_power".into(),
            q: 0.5,
            beta: None,
            nu0: 4,
            base: 2,
            d: 1,
        }
    }
}

impl FamilyConfig {
    /// `order` is the derivative order of the experiment at hand (`r` or `s`).
    pub fn resolve(&self, p: f64, alpha: f64, order: f64) -> Result<FamilySpec> {
        let beta = self.beta.unwrap_or(alpha + 1.0 / p + (order - 1.0));
        match self.name.as_str() {
            "geometric" => Ok(FamilySpec::Geometric { q: self.q, d: self.d }),
            "power" => Ok(FamilySpec::Power { beta, d: self.d }),
            "single_block" => Ok(FamilySpec::SingleBlock {
                nu0: self.nu0,
                d: self.d,
            }),
            "lacunary" => Ok(FamilySpec::Lacunary {
                base: self.base,
                d: self.d,
            }),
            "y_power" => Ok(FamilySpec::YPower { beta, d: self.d }),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

/// Modulus selection.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct OmegaConfig {
    pub kind: String,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for OmegaConfig {
    fn default() -> Self {
        Self {
            kind: "power".into(),
            alpha: 0.5,
            beta: 0.0,
        }
    }
}

impl OmegaConfig {
    pub fn resolve(&self) -> Result<Modulus> {
        match self.kind.as_str() {
            "power" => Modulus::power(self.alpha),
            "power_log" => Modulus::power_log(self.alpha, self.beta),
            other => Err(Error::Config(format!("unknown modulus kind '{other}'"))),
        }
    }
}

/// Verdict thresholds; defaults are the documented artifact choices.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct ThresholdConfig {
    pub slope_tol: f64,
    pub max_over_median: f64,
    pub equiv_delta: f64,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        Self {
            slope_tol: 0.05,
            max_over_median: 2.0,
            equiv_delta: 0.1,
        }
    }
}

impl ThresholdConfig {
    pub fn ratio(&self) -> RatioThresholds {
        RatioThresholds {
            slope_tol: self.slope_tol,
            max_over_median: self.max_over_median,
        }
    }
}

/// The complete, serializable run configuration.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct RunConfig {
    pub family: FamilyConfig,
    pub p: f64,
    pub r: u32,
    pub s: f64,
    pub omega: OmegaConfig,
    pub cutoff: u32,
    pub rho_grid: GridRange,
    pub n_grid: GridRange,
    pub thresholds: ThresholdConfig,
    pub seed: Option<u64>,
    pub strict: bool,
    pub svg: bool,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            family: FamilyConfig::default(),
            p: 2.0,
            r: 1,
            s: 1.0,
            omega: OmegaConfig::default(),
            cutoff: 100_000,
            rho_grid: GridRange { from_j: 1, to_j: 14 },
            n_grid: GridRange { from_j: 2, to_j: 16 },
            thresholds: ThresholdConfig::default(),
            seed: None,
            strict: false,
            svg: false,
            out: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{path:?}: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p >= 1.0) {
            return Err(Error::Config("p must be >= 1".into()));
        }
        if self.r < 1 {
            return Err(Error::Config("r must be >= 1".into()));
        }
        if !(self.s >= 1.0) {
            return Err(Error::Config("s must be >= 1".into()));
        }
        if self.cutoff < 2 {
            return Err(Error::Config("cutoff must be >= 2".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_range_parse_and_build() {
        let g = GridRange::parse("1..4").unwrap();
        assert_eq!(g.rho_grid(), vec![0.5, 0.75, 0.875, 0.9375]);
        assert_eq!(g.n_grid(), vec![2, 4, 8, 16]);
        assert!(GridRange::parse("5..2").is_err());
        assert!(GridRange::parse("nope").is_err());
    }

    #[test]
    fn beta_coupling_default() {
        let fam = FamilyConfig::default();
        // alpha + 1/p + (order-1) with p=2, alpha=0.5, order=1 → 1.0
        let spec = fam.resolve(2.0, 0.5, 1.0).unwrap();
        assert_eq!(spec, FamilySpec::YPower { beta: 1.0, d: 1 });
        // order 2 shifts the exponent by one
        let spec = fam.resolve(2.0, 0.5, 2.0).unwrap();
        assert_eq!(spec, FamilySpec::YPower { beta: 2.0, d: 1 });
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = RunConfig::default();
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
    }
}
