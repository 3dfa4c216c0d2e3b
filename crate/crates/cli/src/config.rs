//! Run configuration: TOML file, then command-line overrides.

use crate::CliError;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use symris::montecarlo::ClassifyConfig;
use symris::phases::BoundaryModel;
use symris::spectra::TAU_PPT;
use symris::{Method, SepConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    pub method: Method,
    pub n_qubits: usize,
    /// Register sizes for `phase-diagram`.
    pub n_list: Vec<usize>,
    /// Ancilla grid, e.g. `"1..40"`, `"10..100:10"` or `"4,8,12"`.
    pub ancilla: String,
    pub trials: u64,
    pub seed: u64,
    /// 0 = available parallelism.
    pub workers: usize,
    pub out: PathBuf,
    pub tau_ppt: f64,
    /// Geometry sample size per ancilla value.
    pub sample: usize,
    /// Which states enter the pairwise and Dicke PDFs: `"be"` or `"all"`.
    pub keep: String,
    /// Ancilla value for the pairwise and Dicke PDFs (default: first grid value).
    pub focus: Option<usize>,
    pub bins: usize,
    /// `classify`: state file; without it the generator spec is used.
    pub state: Option<PathBuf>,
    pub trial: u64,
    /// `phase-diagram`: existing `probabilities.csv` files.
    pub scans: Vec<PathBuf>,
    /// `phase-diagram`: boundary models to fit.
    pub fit_models: Vec<BoundaryModel>,
    pub separability: SepConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: String::new(),
            method: Method::Qubits,
            n_qubits: 4,
            n_list: vec![4, 5, 6],
            ancilla: "1..40".into(),
            trials: 2000,
            seed: 1,
            workers: 0,
            out: PathBuf::from("out"),
            tau_ppt: TAU_PPT,
            sample: 2000,
            keep: "be".into(),
            focus: None,
            bins: 200,
            state: None,
            trial: 0,
            scans: Vec::new(),
            fit_models: vec![BoundaryModel::Linear, BoundaryModel::Quadratic],
            separability: SepConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::usage(format!("invalid config {}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn classify_config(&self) -> ClassifyConfig {
        ClassifyConfig {
            tau_ppt: self.tau_ppt,
            sep: self.separability.clone(),
        }
    }

    pub fn grid(&self) -> Result<Vec<usize>, CliError> {
        parse_grid(&self.ancilla)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.trials == 0 {
            return Err(CliError::usage("trials must be at least 1"));
        }
        if !(self.tau_ppt >= 0.0 && self.tau_ppt.is_finite()) {
            return Err(CliError::usage(
                "tau_ppt must be a finite non-negative number",
            ));
        }
        let s = &self.separability;
        if !(s.eps_sep > 0.0 && s.eps_ent > 0.0 && s.eps_wit > 0.0) {
            return Err(CliError::usage(
                "eps_sep, eps_ent and eps_wit must be positive",
            ));
        }
        if s.budget == 0 {
            return Err(CliError::usage("budget must be at least 1"));
        }
        if self.keep != "be" && self.keep != "all" {
            return Err(CliError::usage(format!(
                "keep must be 'be' or 'all', got '{}'",
                self.keep
            )));
        }
        if self.bins == 0 {
            return Err(CliError::usage("bins must be at least 1"));
        }
        Ok(())
    }
}

/// Comma-separated items, each `a`, `a..b` (inclusive) or `a..b:step`.
pub fn parse_grid(spec: &str) -> Result<Vec<usize>, CliError> {
    let bad = |why: &str| CliError::usage(format!("invalid ancilla grid '{spec}': {why}"));
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let num = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| bad(&format!("'{s}' is not a number")))
        };
        if let Some((lo, rest)) = item.split_once("..") {
            let (hi, step) = match rest.split_once(':') {
                Some((h, s)) => (num(h)?, num(s)?),
                None => (num(rest)?, 1),
            };
            let lo = num(lo)?;
            if step == 0 || hi < lo {
                return Err(bad("empty range"));
            }
            out.extend((lo..=hi).step_by(step));
        } else {
            out.push(num(item)?);
        }
    }
    if out.is_empty() {
        return Err(bad("no values"));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
