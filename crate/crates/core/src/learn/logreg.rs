use super::{Dataset, Standardizer};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRegConfig {
    /// L2 penalty strength on the weights (the bias is not penalized).
    pub l2: f64,
    pub max_iter: usize,
    /// Convergence once the largest gradient component falls below this.
    pub tol: f64,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        Self {
            l2: 1.0,
            max_iter: 1000,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogRegModel {
    scaler: Standardizer,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub converged: bool,
    pub iterations: usize,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn linear(row: &[f64], w: &[f64], b: f64) -> f64 {
    row.iter().zip(w).map(|(x, w)| x * w).sum::<f64>() + b
}

/// Mean log-likelihood minus `(l2 / 2) * |w|^2`.
pub fn logreg_objective(x: &[Vec<f64>], y: &[u8], w: &[f64], b: f64, l2: f64) -> f64 {
    let ll: f64 = x
        .iter()
        .zip(y)
        .map(|(row, &yi)| {
            let z = linear(row, w, b);
            yi as f64 * z - softplus(z)
        })
        .sum();
    ll / x.len() as f64 - 0.5 * l2 * w.iter().map(|v| v * v).sum::<f64>()
}

/// Gradient of [`logreg_objective`] with respect to `(w, b)`.
pub fn logreg_gradient(x: &[Vec<f64>], y: &[u8], w: &[f64], b: f64, l2: f64) -> (Vec<f64>, f64) {
    let n = x.len() as f64;
    let mut gw = vec![0.0; w.len()];
    let mut gb = 0.0;
    for (row, &yi) in x.iter().zip(y) {
        let r = yi as f64 - sigmoid(linear(row, w, b));
        for (g, xv) in gw.iter_mut().zip(row) {
            *g += r * xv;
        }
        gb += r;
    }
    for (g, wv) in gw.iter_mut().zip(w) {
        *g = *g / n - l2 * wv;
    }
    (gw, gb / n)
}

/// Fits L2-penalized logistic regression on standardized features by
/// gradient ascent with backtracking line search. A fit that hits
/// `max_iter` is returned with `converged = false`.
pub fn train_logreg(train: &Dataset, cfg: &LogRegConfig) -> Result<LogRegModel> {
    train.require_both_classes()?;
    if !(cfg.l2 >= 0.0) || !cfg.l2.is_finite() {
        return Err(Error::Config(format!(
            "l2 strength must be >= 0, got {}",
            cfg.l2
        )));
    }
    if !(cfg.tol > 0.0) {
        return Err(Error::Config(format!(
            "tolerance must be positive, got {}",
            cfg.tol
        )));
    }
    let scaler = Standardizer::fit(train.features())?;
    let x = scaler.transform(train.features());
    let y = train.labels();
    let d = train.n_features();

    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let mut f = logreg_objective(&x, y, &w, b, cfg.l2);
    let mut step = 1.0;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iter {
        let (gw, gb) = logreg_gradient(&x, y, &w, b, cfg.l2);
        let gmax = gw.iter().fold(gb.abs(), |m, g| m.max(g.abs()));
        if gmax < cfg.tol {
            converged = true;
            break;
        }
        iterations += 1;
        let gnorm2 = gw.iter().map(|g| g * g).sum::<f64>() + gb * gb;
        // Armijo backtracking on the ascent direction
        let mut accepted = false;
        for _ in 0..60 {
            let w_new: Vec<f64> = w.iter().zip(&gw).map(|(wv, g)| wv + step * g).collect();
            let b_new = b + step * gb;
            let f_new = logreg_objective(&x, y, &w_new, b_new, cfg.l2);
            if f_new >= f + 1e-4 * step * gnorm2 {
                w = w_new;
                b = b_new;
                f = f_new;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        step *= 2.0;
    }
    if !converged {
        let (gw, gb) = logreg_gradient(&x, y, &w, b, cfg.l2);
        converged = gw.iter().fold(gb.abs(), |m, g| m.max(g.abs())) < cfg.tol;
    }
    Ok(LogRegModel {
        scaler,
        weights: w,
        bias: b,
        converged,
        iterations,
    })
}

pub fn predict_logreg(model: &LogRegModel, features: &[Vec<f64>]) -> Vec<f64> {
    features
        .iter()
        .map(|row| {
            sigmoid(linear(
                &model.scaler.transform_row(row),
                &model.weights,
                model.bias,
            ))
        })
        .collect()
}

impl LogRegModel {
    /// Absolute standardized coefficients.
    pub fn importance(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w.abs()).collect()
    }
}
