use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frechet::BRUTE_FORCE_MAX_N;
use crate::graph::SbmParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Exhaustive Hamming Fréchet mean vs. majority median (n <= 6).
    Theorem1,
    /// Resistance barycenter vs. the block matrix P.
    Theorem2,
    /// Decay of the Fréchet residual with the sample size.
    ZetaScaling,
    /// Second eigenvalue, spectral tail and community sign vector.
    Spectrum,
    /// Adjacency -> resistance -> adjacency on random weighted graphs.
    RoundTrip,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Theorem1 => "theorem1",
            Self::Theorem2 => "theorem2",
            Self::ZetaScaling => "zeta-scaling",
            Self::Spectrum => "spectrum",
            Self::RoundTrip => "round-trip",
        }
    }
}

/// One Monte-Carlo experiment. Loaded from TOML with the same field names.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub params: SbmParams,
    /// Networks per sample `N`.
    pub sample_size: usize,
    /// `zeta-scaling`: sample sizes to sweep (empty means `[sample_size]`).
    #[serde(default)]
    pub sample_size_grid: Vec<usize>,
    /// `theorem2`: vertex counts to sweep (empty means `[params.n]`).
    #[serde(default)]
    pub n_grid: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Named pass/fail thresholds; missing names take the experiment's defaults.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    /// Regularization used when inverting resistances.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// `round-trip`: second regularization checked against `alpha`.
    #[serde(default = "default_alpha_alt")]
    pub alpha_alt: f64,
    /// Record per-trial wall time in `wall_ms`; off keeps reports byte-identical.
    #[serde(default)]
    pub record_timing: bool,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

fn default_alpha() -> f64 {
    1.0
}

fn default_alpha_alt() -> f64 {
    7.0
}

/// Default thresholds for each experiment.
pub fn default_tolerances(kind: ExperimentKind) -> BTreeMap<String, f64> {
    let pairs: &[(&str, f64)] = match kind {
        ExperimentKind::Theorem1 => &[("min_agreement_rate", 0.95), ("min_variance_rate", 0.95)],
        ExperimentKind::Theorem2 => &[
            ("max_abs_err", 0.15),
            ("block_mean_tol", 0.05),
            ("max_round_trip_residual", 1e-6),
        ],
        ExperimentKind::ZetaScaling => &[("min_decay", 0.35), ("max_decay", 0.65)],
        ExperimentKind::Spectrum => &[
            ("lambda2_band_multiplier", 3.0),
            ("min_lambda2_rate", 0.9),
            ("min_tail_rate", 0.9),
            ("min_sign_match", 0.95),
            ("tail_enforce_min_n", 200.0),
        ],
        ExperimentKind::RoundTrip => &[("max_residual", 1e-8), ("max_alpha_disagreement", 1e-8)],
    };
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

impl ExperimentConfig {
    /// Desk-scale defaults for `kind`.
    pub fn default_for(kind: ExperimentKind) -> Self {
        let (params, sample_size, trials, sample_size_grid, n_grid) = match kind {
            ExperimentKind::Theorem1 => ((6, 0.9, 0.1), 201, 100, vec![], vec![]),
            ExperimentKind::Theorem2 => ((200, 0.5, 0.1), 50, 10, vec![], vec![50, 100, 200]),
            ExperimentKind::ZetaScaling => ((8, 0.9, 0.1), 16, 20, vec![16, 64, 256, 1024], vec![]),
            ExperimentKind::Spectrum => ((400, 0.5, 0.1), 1, 50, vec![], vec![]),
            ExperimentKind::RoundTrip => ((50, 0.3, 0.3), 1, 100, vec![], vec![]),
        };
        Self {
            experiment: kind,
            params: SbmParams {
                n: params.0,
                p: params.1,
                q: params.2,
            },
            sample_size,
            sample_size_grid,
            n_grid,
            trials,
            seed: 20240101,
            output_dir: default_output_dir(),
            tolerances: default_tolerances(kind),
            alpha: default_alpha(),
            alpha_alt: default_alpha_alt(),
            record_timing: false,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let mut config: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        for (k, v) in default_tolerances(config.experiment) {
            config.tolerances.entry(k).or_insert(v);
        }
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Looks up a threshold, falling back to the experiment default.
    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances
            .get(name)
            .copied()
            .or_else(|| default_tolerances(self.experiment).get(name).copied())
            .unwrap_or_else(|| panic!("no tolerance named {name:?} for {}", self.experiment.name()))
    }

    pub fn sizes(&self) -> Vec<usize> {
        if self.n_grid.is_empty() {
            vec![self.params.n]
        } else {
            self.n_grid.clone()
        }
    }

    pub fn sample_sizes(&self) -> Vec<usize> {
        if self.sample_size_grid.is_empty() {
            vec![self.sample_size]
        } else {
            self.sample_size_grid.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.experiment != ExperimentKind::RoundTrip {
            self.params.validate()?;
        } else if self.params.n < 2 || !(0.0..=1.0).contains(&self.params.p) {
            return Err(Error::Config(
                "round-trip needs params.n >= 2 and an extra-edge density params.p in [0, 1]"
                    .into(),
            ));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.sample_size == 0 || self.sample_size_grid.contains(&0) {
            return Err(Error::Config("sample sizes must be at least 1".into()));
        }
        if let Some((k, v)) = self
            .tolerances
            .iter()
            .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
        {
            return Err(Error::Config(format!(
                "tolerance {k} = {v} must be positive"
            )));
        }
        if self.alpha == 0.0
            || self.alpha_alt == 0.0
            || !self.alpha.is_finite()
            || !self.alpha_alt.is_finite()
        {
            return Err(Error::Config(
                "alpha values must be finite and nonzero".into(),
            ));
        }
        for &n in &self.n_grid {
            SbmParams { n, ..self.params }.validate()?;
        }
        match self.experiment {
            ExperimentKind::Theorem1 if self.params.n > BRUTE_FORCE_MAX_N => {
                Err(Error::Config(format!(
                    "theorem1 enumerates all graphs; n = {} exceeds {BRUTE_FORCE_MAX_N}",
                    self.params.n
                )))
            }
            ExperimentKind::Theorem2 if self.params.q <= 0.0 => Err(Error::Config(
                "theorem2 needs q > 0 for a connected model".into(),
            )),
            ExperimentKind::ZetaScaling if self.sample_sizes().len() < 2 => Err(Error::Config(
                "zeta-scaling needs at least two sample sizes".into(),
            )),
            _ => Ok(()),
        }
    }
}
