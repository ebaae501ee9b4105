//! Run configuration loaded from JSON.

use std::path::{Path, PathBuf};

use koenigs_core::oracle::OracleConfig;
use koenigs_core::spectra::{BranchSigns, QuantumNumbers, SolverConfig, SpecialCase};
use koenigs_core::wavefunctions::Chart;
use koenigs_core::{SpaceKind, SpaceSpec, UnitScalars};
use serde::Deserialize;

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub format: Format,
    pub path: Option<PathBuf>,
}

/// Which levels to work on: a range of `N` (canonical labels) or explicit labels.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Selection {
    /// Inclusive `[first, last]`.
    pub n_range: Option<[u32; 2]>,
    pub labels: Option<Vec<QuantumNumbers>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeltaVConfig {
    pub points: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sampling {
    /// Ray direction from the origin; need not be normalized.
    pub direction: [f64; 3],
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { direction: [1.0, 1.0, 1.0], r_min: 0.01, r_max: 5.0, points: 200 }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaveConfig {
    /// Aggregate `N` (canonical labels); ignored when `labels` is given.
    pub n: Option<u32>,
    pub labels: Option<QuantumNumbers>,
    /// Index among the roots for these labels, lowest energy first.
    pub root: usize,
    pub chart: Option<Chart>,
    pub sampling: Sampling,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub rel_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { rel_tol: 1e-4 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub space: SpaceSpec,
    /// Overrides the units given inside `space`.
    #[serde(default)]
    pub units: Option<UnitScalars>,
    #[serde(default)]
    pub quantum_numbers: Selection,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub special_case: Option<SpecialCase>,
    #[serde(default)]
    pub deltav: DeltaVConfig,
    #[serde(default)]
    pub wavefunction: WaveConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub tol_rel: Option<f64>,
    pub scan_density: Option<f64>,
    pub e_max: Option<f64>,
    pub branch: Option<BranchSigns>,
}

impl RunConfig {
    pub fn load(path: &Path, ov: &Overrides) -> Result<RunConfig, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
        cfg.apply(ov);
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, ov: &Overrides) {
        if let Some(u) = self.units {
            self.space = self.space.with_units(u);
        }
        if let Some(p) = &ov.out {
            self.output.path = Some(p.clone());
        }
        if let Some(f) = ov.format {
            self.output.format = f;
        }
        if let Some(t) = ov.tol_rel {
            self.solver.tol_rel = t;
        }
        if let Some(d) = ov.scan_density {
            self.solver.scan_points_per_decade = d;
        }
        if let Some(e) = ov.e_max {
            self.solver.e_max_abs = e;
            self.oracle.e_max_abs = e;
        }
        if let Some(b) = ov.branch {
            self.solver.branch_signs = b;
            self.oracle.branch_signs = b;
        }
    }

    fn validate(&self) -> Result<(), Failure> {
        self.space.validate()?;
        self.solver.validate()?;
        self.oracle.validate()?;
        if !(self.verify.rel_tol > 0.0) {
            return Err(Failure::config("verify.rel_tol must be positive"));
        }
        let s = &self.wavefunction.sampling;
        if !(s.r_min >= 0.0 && s.r_max > s.r_min && s.points >= 2) {
            return Err(Failure::config("wavefunction.sampling needs 0 <= r_min < r_max and points >= 2"));
        }
        if s.direction.iter().all(|c| *c == 0.0) {
            return Err(Failure::config("wavefunction.sampling.direction must be nonzero"));
        }
        Ok(())
    }

    pub fn kind(&self) -> SpaceKind {
        self.space.kind()
    }

    pub fn units(&self) -> UnitScalars {
        self.space.units()
    }

    /// Quantum numbers selected by the config.
    pub fn selected(&self) -> Result<Vec<QuantumNumbers>, Failure> {
        let sel = &self.quantum_numbers;
        let kind = self.kind();
        match (&sel.n_range, &sel.labels) {
            (Some(_), Some(_)) => Err(Failure::config("quantum_numbers: give either n_range or labels, not both")),
            (None, None) => Err(Failure::config("quantum_numbers: n_range or labels is required")),
            (None, Some(labels)) => {
                for qn in labels {
                    qn.aggregate(kind)?;
                }
                Ok(labels.clone())
            }
            (Some([lo, hi]), None) => {
                if lo > hi {
                    return Err(Failure::config(format!("quantum_numbers.n_range [{lo}, {hi}] is empty")));
                }
                (*lo..=*hi)
                    .map(|n| {
                        QuantumNumbers::canonical(kind, n)
                            .ok_or_else(|| Failure::config(format!("no {kind} labels with N = {n}")))
                    })
                    .collect()
            }
        }
    }
}
