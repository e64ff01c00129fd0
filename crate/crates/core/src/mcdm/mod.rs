//! Entropy criterion weighting and TOPSIS closeness ranking.

mod entropy;
mod topsis;

pub use entropy::{entropy_weights, WeightVector};
pub use topsis::{ideal_solutions, topsis, TopsisResult};
