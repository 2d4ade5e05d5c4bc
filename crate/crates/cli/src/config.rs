//! Layered solver configuration: built-in defaults, then an optional TOML
//! config file, then command-line flags. The fully resolved configuration
//! is hashed into a digest that rides along in every output record.

use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use qpart::multilevel::{MatchWeightParams, PipelineConfig};
use qpart::qhd::{Backend, QhdSchedule, SolverParams};
use qpart::qubo::PenaltyWeights;

/// Keys accepted in the TOML config file. Every key is optional; flags
/// override file values.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub schedule: Option<String>,
    pub t_final: Option<f64>,
    pub steps: Option<usize>,
    pub batch: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub backend: Option<String>,
    pub theta: Option<usize>,
    pub sweep_cap: Option<usize>,
    pub sa_sweeps: Option<usize>,
    pub restarts: Option<usize>,
    pub w1: Option<f64>,
    pub lambda_a: Option<f64>,
    pub lambda_s: Option<f64>,
    pub w3: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("bad config file {}", path.display()))
    }
}

/// Flag-level overrides shared by the subcommands.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct SolverFlags {
    /// Schedule preset: linear | power
    #[arg(long)]
    pub schedule: Option<String>,
    /// Total evolution time
    #[arg(long)]
    pub t_final: Option<f64>,
    /// Number of integration steps
    #[arg(long)]
    pub steps: Option<usize>,
    /// Mean-field batch size
    #[arg(long)]
    pub batch: Option<usize>,
    /// Measurement samples per evolved state
    #[arg(long)]
    pub samples: Option<usize>,
    /// Master seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Backend: auto | exact | meanfield
    #[arg(long)]
    pub backend: Option<String>,
    /// Coarsening threshold
    #[arg(long)]
    pub theta: Option<usize>,
    /// Refinement sweep cap
    #[arg(long)]
    pub sweep_cap: Option<usize>,
    /// Simulated-annealing sweeps (method sa)
    #[arg(long)]
    pub sa_sweeps: Option<usize>,
    /// Pipeline base-solve restarts (method qhd)
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Modularity weight w1
    #[arg(long)]
    pub w1: Option<f64>,
    /// One-hot penalty coefficient
    #[arg(long)]
    pub lambda_a: Option<f64>,
    /// Balance penalty coefficient
    #[arg(long)]
    pub lambda_s: Option<f64>,
    /// Optional per-edge bonus weight
    #[arg(long)]
    pub w3: Option<f64>,
    /// Match-score neighborhood-overlap weight
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Match-score edge-weight weight
    #[arg(long)]
    pub beta: Option<f64>,
    /// TOML config file; flags override its keys
    #[arg(long)]
    pub config: Option<std::path::PathBuf>,
}

/// Fully resolved settings; serialized (in field order) to form the
/// config digest.
#[derive(Clone, Debug, Serialize)]
pub struct Resolved {
    pub schedule: String,
    pub t_final: f64,
    pub steps: usize,
    pub batch: usize,
    pub samples: usize,
    pub seed: u64,
    pub backend: String,
    pub theta: usize,
    pub sweep_cap: usize,
    pub sa_sweeps: usize,
    pub restarts: usize,
    /// None means per-graph defaults.
    pub w1: Option<f64>,
    pub lambda_a: Option<f64>,
    pub lambda_s: Option<f64>,
    pub w3: Option<f64>,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for Resolved {
    fn default() -> Self {
        let solver = SolverParams::default();
        Resolved {
            schedule: "linear".into(),
            t_final: QhdSchedule::DEFAULT_T_FINAL,
            steps: QhdSchedule::DEFAULT_STEPS,
            batch: solver.batch,
            samples: solver.samples,
            seed: solver.seed,
            backend: "auto".into(),
            theta: 512,
            sweep_cap: 20,
            sa_sweeps: 2000,
            restarts: 8,
            w1: None,
            lambda_a: None,
            lambda_s: None,
            w3: None,
            alpha: 0.5,
            beta: 0.5,
        }
    }
}

impl Resolved {
    pub fn from_layers(flags: &SolverFlags) -> Result<Resolved> {
        let mut r = Resolved::default();
        if let Some(path) = &flags.config {
            let file = FileConfig::load(path)?;
            apply(&mut r.schedule, file.schedule);
            apply(&mut r.t_final, file.t_final);
            apply(&mut r.steps, file.steps);
            apply(&mut r.batch, file.batch);
            apply(&mut r.samples, file.samples);
            apply(&mut r.seed, file.seed);
            apply(&mut r.backend, file.backend);
            apply(&mut r.theta, file.theta);
            apply(&mut r.sweep_cap, file.sweep_cap);
            apply(&mut r.sa_sweeps, file.sa_sweeps);
            apply(&mut r.restarts, file.restarts);
            apply_opt(&mut r.w1, file.w1);
            apply_opt(&mut r.lambda_a, file.lambda_a);
            apply_opt(&mut r.lambda_s, file.lambda_s);
            apply_opt(&mut r.w3, file.w3);
            apply(&mut r.alpha, file.alpha);
            apply(&mut r.beta, file.beta);
        }
        apply(&mut r.schedule, flags.schedule.clone());
        apply(&mut r.t_final, flags.t_final);
        apply(&mut r.steps, flags.steps);
        apply(&mut r.batch, flags.batch);
        apply(&mut r.samples, flags.samples);
        apply(&mut r.seed, flags.seed);
        apply(&mut r.backend, flags.backend.clone());
        apply(&mut r.theta, flags.theta);
        apply(&mut r.sweep_cap, flags.sweep_cap);
        apply(&mut r.sa_sweeps, flags.sa_sweeps);
        apply(&mut r.restarts, flags.restarts);
        apply_opt(&mut r.w1, flags.w1);
        apply_opt(&mut r.lambda_a, flags.lambda_a);
        apply_opt(&mut r.lambda_s, flags.lambda_s);
        apply_opt(&mut r.w3, flags.w3);
        apply(&mut r.alpha, flags.alpha);
        apply(&mut r.beta, flags.beta);
        r.check()?;
        Ok(r)
    }

    fn check(&self) -> Result<()> {
        self.schedule_preset()?;
        self.backend_kind()?;
        Ok(())
    }

    pub fn schedule_preset(&self) -> Result<QhdSchedule> {
        match self.schedule.as_str() {
            "linear" | "linear-ramp" => Ok(QhdSchedule::linear_ramp(self.t_final, self.steps)),
            "power" | "power-law" => Ok(QhdSchedule::power_law(
                self.t_final,
                self.steps,
                QhdSchedule::DEFAULT_POWER_T0,
            )),
            other => anyhow::bail!("unknown schedule preset `{other}` (use linear or power)"),
        }
    }

    pub fn backend_kind(&self) -> Result<Backend> {
        match self.backend.as_str() {
            "auto" => Ok(Backend::Auto),
            "exact" => Ok(Backend::Exact),
            "meanfield" | "mean-field" => Ok(Backend::MeanField),
            other => anyhow::bail!("unknown backend `{other}` (use auto, exact, or meanfield)"),
        }
    }

    pub fn solver_params(&self) -> Result<SolverParams> {
        Ok(SolverParams {
            schedule: self.schedule_preset()?,
            backend: self.backend_kind()?,
            batch: self.batch,
            samples: self.samples,
            seed: self.seed,
            ..SolverParams::default()
        })
    }

    /// Explicit penalty weights, if any were set; completes missing values
    /// from the graph defaults.
    pub fn weights_for(&self, g: &qpart::Graph) -> Option<PenaltyWeights> {
        if self.w1.is_none() && self.lambda_a.is_none() && self.lambda_s.is_none()
            && self.w3.is_none()
        {
            return None;
        }
        let d = PenaltyWeights::defaults_for(g);
        Some(PenaltyWeights {
            w1: self.w1.unwrap_or(d.w1),
            lambda_a: self.lambda_a.unwrap_or(d.lambda_a),
            lambda_s: self.lambda_s.unwrap_or(d.lambda_s),
            w3: self.w3.unwrap_or(d.w3),
        })
    }

    pub fn pipeline_config(&self, g: &qpart::Graph, k: u32) -> Result<PipelineConfig> {
        let mut cfg = PipelineConfig::new(k);
        cfg.theta = self.theta;
        cfg.sweep_cap = self.sweep_cap;
        cfg.solver = self.solver_params()?;
        cfg.weights = self.weights_for(g);
        cfg.match_params = MatchWeightParams {
            alpha: self.alpha,
            beta: self.beta,
        };
        cfg.restarts = self.restarts;
        Ok(cfg)
    }

    /// Stable hex digest over the canonical JSON of the resolved settings.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("resolved config serializes");
        format!("{:016x}", fnv1a(json.as_bytes()))
    }

    /// Same settings under a different seed (per-instance seeds in bench).
    pub fn with_seed(&self, seed: u64) -> Resolved {
        Resolved {
            seed,
            ..self.clone()
        }
    }
}

fn apply<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn apply_opt<T>(slot: &mut Option<T>, value: Option<T>) {
    if value.is_some() {
        *slot = value;
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_deterministic_and_seed_sensitive() {
        let r = Resolved::default();
        assert_eq!(r.digest(), Resolved::default().digest());
        assert_ne!(r.digest(), r.with_seed(1).digest());
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join("qpart-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("solver.toml");
        std::fs::write(&path, "steps = 50\nseed = 9\n").unwrap();
        let flags = SolverFlags {
            config: Some(path),
            steps: Some(75),
            ..SolverFlags::default()
        };
        let r = Resolved::from_layers(&flags).unwrap();
        assert_eq!(r.steps, 75);
        assert_eq!(r.seed, 9);
    }

    #[test]
    fn unknown_schedule_rejected() {
        let flags = SolverFlags {
            schedule: Some("warp".into()),
            ..SolverFlags::default()
        };
        assert!(Resolved::from_layers(&flags).is_err());
    }
}
