use std::fmt;

use super::{
    predict_knn, predict_logreg, train_knn, train_logreg, Dataset, KnnModel, LogRegConfig,
    LogRegModel,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Knn,
    LogReg,
}

impl ModelKind {
    /// Name used in prediction files and reports.
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Knn => "k-NN",
            ModelKind::LogReg => "LR",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "knn" | "k-nn" => Ok(ModelKind::Knn),
            "lr" | "logreg" | "logistic" => Ok(ModelKind::LogReg),
            other => Err(Error::InvalidInput(format!(
                "unknown model {other:?} (expected knn or lr)"
            ))),
        }
    }
}

/// One hyper-parameter setting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Hyper {
    Knn { n_neighbors: usize },
    LogReg { l2: f64 },
}

impl fmt::Display for Hyper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hyper::Knn { n_neighbors } => write!(f, "n_neighbors={n_neighbors}"),
            Hyper::LogReg { l2 } => write!(f, "l2={l2}"),
        }
    }
}

/// A classifier family with its fixed setting and its search grid.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Knn {
        fixed: usize,
        grid: Vec<usize>,
    },
    LogReg {
        fixed: f64,
        grid: Vec<f64>,
        max_iter: usize,
        tol: f64,
    },
}

impl ModelSpec {
    pub fn knn() -> Self {
        ModelSpec::Knn {
            fixed: 5,
            grid: (5..=8).collect(),
        }
    }

    pub fn logreg() -> Self {
        let d = LogRegConfig::default();
        ModelSpec::LogReg {
            fixed: d.l2,
            grid: vec![0.01, 0.1, 1.0, 10.0],
            max_iter: d.max_iter,
            tol: d.tol,
        }
    }

    pub fn default_for(kind: ModelKind) -> Self {
        match kind {
            ModelKind::Knn => Self::knn(),
            ModelKind::LogReg => Self::logreg(),
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            ModelSpec::Knn { .. } => ModelKind::Knn,
            ModelSpec::LogReg { .. } => ModelKind::LogReg,
        }
    }

    pub fn name(&self) -> &'static str {
        self.kind().name()
    }

    pub fn fixed(&self) -> Hyper {
        match self {
            ModelSpec::Knn { fixed, .. } => Hyper::Knn {
                n_neighbors: *fixed,
            },
            ModelSpec::LogReg { fixed, .. } => Hyper::LogReg { l2: *fixed },
        }
    }

    pub fn grid(&self) -> Vec<Hyper> {
        match self {
            ModelSpec::Knn { grid, .. } => grid
                .iter()
                .map(|&k| Hyper::Knn { n_neighbors: k })
                .collect(),
            ModelSpec::LogReg { grid, .. } => grid.iter().map(|&l2| Hyper::LogReg { l2 }).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelSpec::Knn { fixed, grid } => {
                if *fixed == 0 || grid.is_empty() || grid.contains(&0) {
                    return Err(Error::Config(
                        "k-NN neighbour counts must be positive and the grid non-empty".into(),
                    ));
                }
            }
            ModelSpec::LogReg {
                fixed, grid, tol, ..
            } => {
                let bad = |v: &f64| !(*v >= 0.0) || !v.is_finite();
                if bad(fixed) || grid.is_empty() || grid.iter().any(bad) || !(*tol > 0.0) {
                    return Err(Error::Config(
                        "logistic l2 strengths must be finite and >= 0, the grid non-empty and tol positive"
                            .into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn fit(&self, train: &Dataset, hyper: &Hyper) -> Result<TrainedModel> {
        match (self, hyper) {
            (ModelSpec::Knn { .. }, Hyper::Knn { n_neighbors }) => {
                Ok(TrainedModel::Knn(train_knn(train, *n_neighbors)?))
            }
            (ModelSpec::LogReg { max_iter, tol, .. }, Hyper::LogReg { l2 }) => {
                let cfg = LogRegConfig {
                    l2: *l2,
                    max_iter: *max_iter,
                    tol: *tol,
                };
                Ok(TrainedModel::LogReg(train_logreg(train, &cfg)?))
            }
            _ => Err(Error::InvalidInput(format!(
                "hyper-parameter {hyper} does not fit model {}",
                self.name()
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrainedModel {
    Knn(KnnModel),
    LogReg(LogRegModel),
}

impl TrainedModel {
    pub fn predict(&self, features: &[Vec<f64>]) -> Vec<f64> {
        match self {
            TrainedModel::Knn(m) => predict_knn(m, features),
            TrainedModel::LogReg(m) => predict_logreg(m, features),
        }
    }

    /// Per-feature importance, when the model defines one.
    pub fn importance(&self) -> Option<Vec<f64>> {
        match self {
            TrainedModel::Knn(_) => None,
            TrainedModel::LogReg(m) => Some(m.importance()),
        }
    }

    /// False when an iterative fit stopped before converging.
    pub fn converged(&self) -> bool {
        match self {
            TrainedModel::Knn(_) => true,
            TrainedModel::LogReg(m) => m.converged,
        }
    }
}
