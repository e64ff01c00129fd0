//! TOML pipeline configuration.
//!
//! Every key is optional; omitted keys take the defaults shown by
//! [`PipelineConfig::default`]. Unknown keys are rejected.
//!
//! ```toml
//! seed = 42
//!
//! [audio]
//! sample_rate = 22050
//! n_fft = 2048
//! hop = 512
//!
//! [learn]
//! strategies = [1, 2, 3]
//! models = ["knn", "lr"]
//! objective = "f1"
//!
//! [ties]
//! decimals = 2
//! eps = 0.0
//! ```

use serde::{Deserialize, Serialize};

use crate::audio::{FeatureConfig, StftConfig, DEFAULT_SAMPLE_RATE};
use crate::ensemble::TiePolicy;
use crate::error::{Error, Result};
use crate::learn::{ModelKind, ModelSpec, RunConfig, StrategyConfig};
use crate::metrics::{default_threshold_grid, Metric};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: u64,
    pub audio: AudioSettings,
    pub learn: LearnSettings,
    pub rfecv: RfecvSettings,
    pub ties: TieSettings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AudioSettings {
    pub sample_rate: u32,
    pub n_fft: usize,
    pub hop: usize,
    pub contrast_alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LearnSettings {
    pub strategies: Vec<u8>,
    pub models: Vec<String>,
    pub outer_folds: usize,
    pub inner_folds: usize,
    pub smote_k: usize,
    pub objective: String,
    pub threshold_grid: Vec<f64>,
    pub knn_neighbors: usize,
    pub knn_grid: Vec<usize>,
    pub logreg_l2: f64,
    pub logreg_grid: Vec<f64>,
    pub logreg_max_iter: usize,
    pub logreg_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RfecvSettings {
    pub step: usize,
    pub folds: usize,
}

/// Hard-ensemble tie rule. A negative `decimals` disables rounding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TieSettings {
    pub decimals: i32,
    pub eps: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            audio: AudioSettings::default(),
            learn: LearnSettings::default(),
            rfecv: RfecvSettings::default(),
            ties: TieSettings::default(),
        }
    }
}

impl Default for AudioSettings {
    fn default() -> Self {
        let f = FeatureConfig::default();
        Self {
            sample_rate: DEFAULT_SAMPLE_RATE,
            n_fft: f.stft.n_fft,
            hop: f.stft.hop,
            contrast_alpha: f.contrast_alpha,
        }
    }
}

impl Default for LearnSettings {
    fn default() -> Self {
        let (knn, lr) = (ModelSpec::knn(), ModelSpec::logreg());
        let (
            ModelSpec::Knn { fixed: k, grid: kg },
            ModelSpec::LogReg {
                fixed: l2,
                grid: lg,
                max_iter,
                tol,
            },
        ) = (knn, lr)
        else {
            unreachable!("constructors return their own variants")
        };
        let run = RunConfig::default();
        Self {
            strategies: vec![1, 2, 3],
            models: vec!["knn".into(), "lr".into()],
            outer_folds: run.outer_folds,
            inner_folds: 5,
            smote_k: run.smote_k,
            objective: run.objective.name().into(),
            threshold_grid: default_threshold_grid(),
            knn_neighbors: k,
            knn_grid: kg,
            logreg_l2: l2,
            logreg_grid: lg,
            logreg_max_iter: max_iter,
            logreg_tol: tol,
        }
    }
}

impl Default for RfecvSettings {
    fn default() -> Self {
        Self { step: 1, folds: 5 }
    }
}

impl Default for TieSettings {
    fn default() -> Self {
        let p = TiePolicy::default();
        Self {
            decimals: p.decimals.map_or(-1, |d| d as i32),
            eps: p.eps,
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: PipelineConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).unwrap_or_default()
    }

    /// Checks every setting and every derived object.
    pub fn validate(&self) -> Result<()> {
        if self.audio.sample_rate == 0 {
            return Err(Error::Config("audio.sample_rate must be positive".into()));
        }
        let f = self.feature_config();
        f.stft.validate()?;
        if !(f.contrast_alpha > 0.0 && f.contrast_alpha <= 1.0) {
            return Err(Error::Config(format!(
                "audio.contrast_alpha must lie in (0, 1], got {}",
                f.contrast_alpha
            )));
        }
        let run = self.run_config()?;
        if run.outer_folds < 2 || self.learn.inner_folds < 2 {
            return Err(Error::Config("fold counts must be at least 2".into()));
        }
        if run.smote_k == 0 {
            return Err(Error::Config("learn.smote_k must be positive".into()));
        }
        if run.threshold_grid.is_empty()
            || run.threshold_grid.iter().any(|t| !(*t > 0.0 && *t < 1.0))
        {
            return Err(Error::Config(
                "learn.threshold_grid must be non-empty with values in (0, 1)".into(),
            ));
        }
        self.strategy_configs()?;
        for spec in self.model_specs()? {
            spec.validate()?;
        }
        if self.rfecv.step == 0 || self.rfecv.folds < 2 {
            return Err(Error::Config(
                "rfecv.step must be >= 1 and rfecv.folds >= 2".into(),
            ));
        }
        self.tie_policy().validate()
    }

    pub fn feature_config(&self) -> FeatureConfig {
        FeatureConfig {
            stft: StftConfig {
                n_fft: self.audio.n_fft,
                hop: self.audio.hop,
            },
            contrast_alpha: self.audio.contrast_alpha,
            ..FeatureConfig::default()
        }
    }

    pub fn run_config(&self) -> Result<RunConfig> {
        let objective: Metric = self
            .learn
            .objective
            .parse()
            .map_err(|e: Error| Error::Config(e.to_string()))?;
        Ok(RunConfig {
            outer_folds: self.learn.outer_folds,
            smote_k: self.learn.smote_k,
            threshold_grid: self.learn.threshold_grid.clone(),
            objective,
        })
    }

    pub fn strategy_configs(&self) -> Result<Vec<StrategyConfig>> {
        if self.learn.strategies.is_empty() {
            return Err(Error::Config("learn.strategies is empty".into()));
        }
        let mut out: Vec<StrategyConfig> = Vec::new();
        for &id in &self.learn.strategies {
            if out.iter().any(|s| s.id == id) {
                return Err(Error::Config(format!("strategy {id} listed twice")));
            }
            let mut s = StrategyConfig::strategy(id)?;
            if let crate::learn::HyperparamMode::NestedGrid { inner_folds } = &mut s.hyperparam_mode
            {
                *inner_folds = self.learn.inner_folds;
            }
            out.push(s);
        }
        Ok(out)
    }

    pub fn model_specs(&self) -> Result<Vec<ModelSpec>> {
        let mut out: Vec<ModelSpec> = Vec::new();
        for name in &self.learn.models {
            let kind = ModelKind::parse(name).map_err(|e| Error::Config(e.to_string()))?;
            if out.iter().any(|s| s.kind() == kind) {
                return Err(Error::Config(format!("model {name:?} listed twice")));
            }
            out.push(match kind {
                ModelKind::Knn => ModelSpec::Knn {
                    fixed: self.learn.knn_neighbors,
                    grid: self.learn.knn_grid.clone(),
                },
                ModelKind::LogReg => ModelSpec::LogReg {
                    fixed: self.learn.logreg_l2,
                    grid: self.learn.logreg_grid.clone(),
                    max_iter: self.learn.logreg_max_iter,
                    tol: self.learn.logreg_tol,
                },
            });
        }
        Ok(out)
    }

    /// The logistic estimator used for feature elimination.
    pub fn rfecv_estimator(&self) -> ModelSpec {
        ModelSpec::LogReg {
            fixed: self.learn.logreg_l2,
            grid: self.learn.logreg_grid.clone(),
            max_iter: self.learn.logreg_max_iter,
            tol: self.learn.logreg_tol,
        }
    }

    pub fn tie_policy(&self) -> TiePolicy {
        TiePolicy {
            decimals: u32::try_from(self.ties.decimals).ok(),
            eps: self.ties.eps,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = PipelineConfig::from_toml("").unwrap();
        assert_eq!(cfg, PipelineConfig::default());
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.tie_policy(), TiePolicy::default());
        assert_eq!(cfg.learn.threshold_grid.len(), 99);
        assert_eq!(
            cfg.model_specs().unwrap(),
            vec![ModelSpec::knn(), ModelSpec::logreg()]
        );
    }

    #[test]
    fn overrides_and_round_trip() {
        let cfg = PipelineConfig::from_toml(
            "seed = 7\n[learn]\nstrategies = [2]\nobjective = \"acc\"\n[ties]\ndecimals = -1\neps = 0.001\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.strategy_configs().unwrap().len(), 1);
        assert_eq!(cfg.run_config().unwrap().objective, Metric::Acc);
        assert_eq!(cfg.tie_policy().decimals, None);
        assert_eq!(PipelineConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn invalid_settings_rejected() {
        for text in [
            "sedd = 1",
            "[learn]\nstrategies = [4]",
            "[learn]\nstrategies = [1, 1]",
            "[learn]\nobjective = \"mcc\"",
            "[learn]\nmodels = [\"svm\"]",
            "[learn]\nthreshold_grid = [0.0, 0.5]",
            "[learn]\nknn_grid = []",
            "[audio]\nhop = 0",
            "[audio]\ncontrast_alpha = 0.0",
            "[rfecv]\nstep = 0",
            "[ties]\neps = -1.0",
            "seed = \"x\"",
        ] {
            assert!(PipelineConfig::from_toml(text).is_err(), "{text}");
        }
    }
}
