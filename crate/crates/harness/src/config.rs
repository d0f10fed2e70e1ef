//! Experiment configuration files.

use std::path::{Path, PathBuf};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use tlr_core::algebra::{random_linear_code, rs_code, Field, LinearCode};
use tlr_core::allr::Overrides;
use tlr_core::concat::{thommesen_sample, ConcatCode, GvDecodeParams};
use tlr_core::ldc::{hadamard_ldc, identity_ldc, Ldc, DEFAULT_REPETITIONS};
use tlr_core::listrec::ChannelMode;
use tlr_core::{Error, Radius};

use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    TensorAllr,
    Compose,
    Globalize,
    ConcatGv,
    GvFeasibility,
    DistanceStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    Rs,
    Random,
    Thommesen,
}

/// Base code. `thommesen` means an RS outer code with random binary inners.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CodeSpec {
    pub kind: CodeKind,
    pub q: usize,
    pub n: usize,
    pub k: usize,
    /// Seed of a random code; per-trial codes derive from the master seed instead.
    pub seed: u64,
    pub rho_in: Radius,
}

impl Default for CodeSpec {
    fn default() -> Self {
        CodeSpec {
            kind: CodeKind::Rs,
            q: 4,
            n: 4,
            k: 2,
            seed: 0,
            rho_in: Radius::new(1, 2).expect("valid"),
        }
    }
}

impl CodeSpec {
    pub fn field(&self) -> Result<Field, Error> {
        Field::with_order(self.q as u32)
    }

    /// The base linear code (the outer code for `thommesen`).
    pub fn linear(&self, seed: u64) -> Result<LinearCode, Error> {
        let f = self.field()?;
        match self.kind {
            CodeKind::Rs | CodeKind::Thommesen => rs_code(&f, self.n, self.k),
            CodeKind::Random => random_linear_code(&f, self.n, self.k, seed),
        }
    }

    pub fn concat(&self, seed: u64) -> Result<ConcatCode, Error> {
        let outer = rs_code(&self.field()?, self.n, self.k)?;
        thommesen_sample(&outer, self.rho_in_ratio(), seed)
    }

    pub fn rho_in_ratio(&self) -> Ratio<usize> {
        Ratio::new(self.rho_in.numer() as usize, self.rho_in.denom() as usize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LdcKind {
    Identity,
    Hadamard,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LdcSpec {
    pub kind: LdcKind,
    pub kh: usize,
    pub repetitions: usize,
}

impl Default for LdcSpec {
    fn default() -> Self {
        LdcSpec {
            kind: LdcKind::Hadamard,
            kh: 1,
            repetitions: DEFAULT_REPETITIONS,
        }
    }
}

impl LdcSpec {
    pub fn build(&self, f: &Field) -> Result<std::sync::Arc<dyn Ldc>, Error> {
        Ok(match self.kind {
            LdcKind::Identity => std::sync::Arc::new(identity_ldc(f, self.kh)?),
            LdcKind::Hadamard if self.repetitions == DEFAULT_REPETITIONS => std::sync::Arc::new(hadamard_ldc(f, self.kh)?),
            LdcKind::Hadamard => std::sync::Arc::new(tlr_core::ldc::HadamardLdc::new(f, self.kh, self.repetitions)?),
        })
    }
}

/// Grid for the `gv-feasibility` pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeasibilitySpec {
    pub rho: Vec<f64>,
    pub eps: Vec<f64>,
    pub c: f64,
}

impl Default for FeasibilitySpec {
    fn default() -> Self {
        FeasibilitySpec {
            rho: vec![0.005, 0.01, 0.02, 0.05],
            eps: vec![0.0005, 0.001, 0.005, 0.01],
            c: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub pipeline: Pipeline,
    #[serde(default)]
    pub code: CodeSpec,
    #[serde(default = "default_t")]
    pub t: usize,
    /// Radius the base code is list recoverable at.
    #[serde(default = "default_alpha")]
    pub alpha: Radius,
    /// L for the base code; computed exhaustively when absent.
    #[serde(default)]
    pub list_bound: Option<usize>,
    #[serde(default = "default_ell")]
    pub ell: usize,
    #[serde(default)]
    pub mode: ChannelMode,
    /// Corruption radius of the channel; defaults to the recoverer's radius.
    #[serde(default)]
    pub channel_alpha: Option<Radius>,
    #[serde(default)]
    pub eps_tilde: Option<f64>,
    #[serde(default)]
    pub overrides: Overrides,
    #[serde(default)]
    pub ldc: LdcSpec,
    /// Repetitions per coordinate when measuring composed success frequencies.
    #[serde(default = "default_coord_trials")]
    pub coord_trials: usize,
    /// Globalization repetitions; derived from the list size when absent.
    #[serde(default)]
    pub reps: Option<(usize, usize)>,
    /// Slack subtracted from the GV target in `distance-stats`.
    #[serde(default = "default_gv_eps")]
    pub gv_eps: f64,
    #[serde(default)]
    pub gv_decode: GvDecodeParams,
    #[serde(default)]
    pub feasibility: FeasibilitySpec,
    #[serde(default)]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    /// Report path; the CSV table is written next to it.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_t() -> usize {
    2
}

fn default_alpha() -> Radius {
    Radius::new(1, 4).expect("valid")
}

fn default_ell() -> usize {
    2
}

fn default_coord_trials() -> usize {
    50
}

fn default_gv_eps() -> f64 {
    0.1
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Invalid(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| HarnessError::Invalid(format!("{}: {e}", path.display())))
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| HarnessError::Invalid(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |field: &str, why: String| Err(HarnessError::Invalid(format!("`{field}`: {why}")));
        if self.t == 0 {
            return bad("t", "must be at least 1".into());
        }
        if self.ell == 0 || self.ell > self.code.q {
            return bad("ell", format!("need 1 <= ell <= q = {}", self.code.q));
        }
        if self.coord_trials == 0 {
            return bad("coord_trials", "must be at least 1".into());
        }
        if let Some((l, c)) = self.reps {
            if l == 0 || c % 2 == 0 {
                return bad("reps", format!("({l}, {c}) needs a positive list count and an odd coordinate count"));
            }
        }
        if self.code.rho_in.numer() == 0 {
            return bad("code.rho_in", "must be positive".into());
        }
        match self.pipeline {
            Pipeline::ConcatGv if self.code.kind != CodeKind::Thommesen => {
                bad("code.kind", "concat-gv needs a thommesen code".into())
            }
            Pipeline::DistanceStats if self.code.kind == CodeKind::Random && self.code.q != 2 => {
                bad("code.q", "random distance statistics use binary codes".into())
            }
            Pipeline::GvFeasibility if self.feasibility.rho.is_empty() || self.feasibility.eps.is_empty() => {
                bad("feasibility", "empty grid".into())
            }
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = ExperimentConfig::from_json(r#"{"pipeline": "tensor-allr", "trials": 3}"#).unwrap();
        assert_eq!(cfg.t, 2);
        assert_eq!(cfg.alpha, Radius::new(1, 4).unwrap());
        assert_eq!(cfg.code, CodeSpec::default());
        assert_eq!(cfg.mode, ChannelMode::Filled);
    }

    #[test]
    fn schema_violations_are_rejected() {
        for text in [
            r#"{"pipeline": "tensor-allr", "bogus": 1}"#,
            r#"{"pipeline": "nope"}"#,
            r#"{"pipeline": "tensor-allr", "ell": 9}"#,
            r#"{"pipeline": "tensor-allr", "t": 0}"#,
            r#"{"pipeline": "concat-gv"}"#,
            r#"{"pipeline": "tensor-allr", "alpha": "5/4"}"#,
            r#"{"pipeline": "tensor-allr", "overrides": {"c_x": 1}}"#,
            r#"{"pipeline": "globalize", "reps": [2, 4]}"#,
        ] {
            assert!(ExperimentConfig::from_json(text).is_err(), "{text}");
        }
    }

    #[test]
    fn radii_accept_fractions_and_decimals() {
        let cfg = ExperimentConfig::from_json(r#"{"pipeline": "compose", "alpha": 0.25, "channel_alpha": "1/80"}"#).unwrap();
        assert_eq!(cfg.alpha, Radius::new(1, 4).unwrap());
        assert_eq!(cfg.channel_alpha, Some(Radius::new(1, 80).unwrap()));
    }
}
