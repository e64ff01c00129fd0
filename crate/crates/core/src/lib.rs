//! Cough-recording feature extraction, binary classifier evaluation and
//! multi-criteria model selection.
//!
//! The crate is organised along the processing chain:
//!
//! * [`audio`] decodes WAV files and computes the 193-dimensional acoustic
//!   descriptor (MFCC, mel spectrogram, chroma, spectral contrast, tonnetz).
//! * [`learn`] holds the in-repo training machinery: stratified folds, SMOTE,
//!   k-NN, logistic regression, the three training strategies and RFECV.
//! * [`metrics`] turns predictions into the eight evaluation criteria and
//!   assembles decision matrices.
//! * [`mcdm`] computes entropy weights and TOPSIS closeness.
//! * [`ensemble`] fuses per-strategy closeness with soft and hard ensembles.
//! * [`io`] reads and writes the CSV exchange formats.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audio;
pub mod config;
pub mod ensemble;
pub mod error;
pub mod io;
pub mod learn;
pub mod mcdm;
pub mod metrics;
pub mod rank;

pub use error::{Error, Result};
