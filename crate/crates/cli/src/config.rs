//! Experiment configuration: an optional JSON file overlaid by command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Every setting a subcommand can read. Unset fields take per-subcommand defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subcommand: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(
        default,
        rename = "N",
        alias = "n",
        skip_serializing_if = "Option::is_none"
    )]
    pub n: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_cut: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moments: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scales: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quick: Option<bool>,
}

/// Flags shared by all subcommands.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Catalog symbol: hilbert, min, power, log, sinhratio or sinc.
    #[arg(long)]
    pub symbol: Option<String>,
    /// Symbol parameter (defaults to the catalog default).
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Test function: lambda, square, pow:M, ramp:L0:W or table:x:y;x:y;...
    #[arg(long)]
    pub g: Option<String>,
    /// Comma-separated, strictly increasing matrix sizes.
    #[arg(long = "N", value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Quadrature nodes for T_N and the Gram matrices.
    #[arg(long)]
    pub m_nodes: Option<usize>,
    /// Frequency cutoff R of the Gram matrices.
    #[arg(long)]
    pub r_cut: Option<f64>,
    /// Comma-separated eigenvalue thresholds for `counting`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub lambda: Option<Vec<f64>>,
    /// Comma-separated moment orders for `moments`.
    #[arg(long, value_delimiter = ',')]
    pub moments: Option<Vec<u32>>,
    /// Comma-separated scale factors for `thm3`.
    #[arg(long, value_delimiter = ',')]
    pub scales: Option<Vec<f64>>,
    /// Number of top eigenvalues compared by `thm3`.
    #[arg(long)]
    pub j_max: Option<usize>,
    /// Quadrature tolerance for predicted limits.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
    }

    /// Applies `flags` on top of `self` for subcommand `name`.
    pub fn overlay(mut self, name: &str, flags: Flags, quick: bool) -> Result<Self, CliError> {
        if let Some(file_cmd) = &self.subcommand {
            if file_cmd != name {
                return Err(CliError::Config(format!(
                    "config file is for `{file_cmd}`, but `{name}` was requested"
                )));
            }
        }
        self.subcommand = Some(name.to_string());
        macro_rules! take {
            ($($f:ident),*) => { $( if flags.$f.is_some() { self.$f = flags.$f; } )* };
        }
        take!(
            symbol, alpha, g, n, m_nodes, r_cut, lambda, moments, scales, j_max, tol, output,
            format
        );
        if quick {
            self.quick = Some(true);
        }
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if let Some(ns) = &self.n {
            if ns.is_empty() {
                return bad("--N needs at least one value".into());
            }
            if ns.windows(2).any(|w| w[1] <= w[0]) {
                return bad(format!("--N must be strictly increasing, got {ns:?}"));
            }
        }
        if let Some(a) = self.alpha {
            if !a.is_finite() {
                return bad(format!("--alpha must be finite, got {a}"));
            }
        }
        if let Some(r) = self.r_cut {
            if !(r.is_finite() && r > 0.0) {
                return bad(format!("--r-cut must be positive, got {r}"));
            }
        }
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                return bad(format!("--tol must be positive, got {t}"));
            }
        }
        if let Some(l) = &self.lambda {
            if l.is_empty() || l.iter().any(|x| !x.is_finite() || *x < 0.0) {
                return bad(format!(
                    "--lambda values must be finite and nonnegative, got {l:?}"
                ));
            }
        }
        if let Some(s) = &self.scales {
            if s.is_empty() || s.iter().any(|x| !x.is_finite() || *x < 1.0) {
                return bad(format!("--scales values must be at least 1, got {s:?}"));
            }
        }
        if let Some(m) = &self.moments {
            if m.is_empty() || m.contains(&0) {
                return bad(format!("--moments orders must be at least 1, got {m:?}"));
            }
        }
        Ok(())
    }
}
