#![allow(dead_code)]

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use coughrank::io::format_float;

pub const EXTERNAL_MODELS: [&str; 8] = [
    "Extra-Trees",
    "SVM",
    "RF",
    "AdaBoost",
    "MLP",
    "XGBoost",
    "GBoost",
    "HGBoost",
];

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/cambridge")
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Two Gaussian clusters centred at -1.5 and +1.5 on every axis with unit
/// spread on the first two axes and noise elsewhere. Returns
/// `(ids, labels, rows)`.
pub fn two_clusters(
    seed: u64,
    n_pos: usize,
    n_neg: usize,
    dim: usize,
) -> (Vec<String>, Vec<u8>, Vec<Vec<f64>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids = Vec::new();
    let mut labels = Vec::new();
    let mut rows = Vec::new();
    for i in 0..n_pos + n_neg {
        let y = u8::from(i < n_pos);
        let centre = if y == 1 { 1.5 } else { -1.5 };
        let row = (0..dim)
            .map(|j| {
                if j < 2 {
                    centre + 0.4 * gaussian(&mut rng)
                } else {
                    gaussian(&mut rng)
                }
            })
            .collect();
        ids.push(format!("cough_{i:04}"));
        labels.push(y);
        rows.push(row);
    }
    (ids, labels, rows)
}

pub fn features_csv(ids: &[String], labels: &[u8], rows: &[Vec<f64>]) -> String {
    let dim = rows.first().map_or(0, Vec::len);
    let mut s = String::from("sample_id,label");
    for j in 0..dim {
        s.push_str(&format!(",f{j}"));
    }
    s.push('\n');
    for ((id, y), row) in ids.iter().zip(labels).zip(rows) {
        s.push_str(&format!("{id},{y}"));
        for v in row {
            s.push(',');
            s.push_str(&format_float(*v));
        }
        s.push('\n');
    }
    s
}

/// Seeded noisy scorers: each model pushes the logit towards the true class
/// by its own skill.
pub fn external_predictions(
    ids: &[String],
    labels: &[u8],
    models: &[&str],
    strategies: &[&str],
    seed: u64,
) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = String::from("model,strategy,sample_id,true_label,score\n");
    for (mi, model) in models.iter().enumerate() {
        for (si, strategy) in strategies.iter().enumerate() {
            let skill = 0.6 + 0.3 * mi as f64 + 0.2 * si as f64;
            for (id, &y) in ids.iter().zip(labels) {
                let z = skill * (2.0 * y as f64 - 1.0) + gaussian(&mut rng);
                let p = 1.0 / (1.0 + (-z).exp());
                s.push_str(&format!(
                    "{model},{strategy},{id},{y},{}\n",
                    format_float(p)
                ));
            }
        }
    }
    s
}

pub fn write_wav(path: &Path, samples: &[f64], rate: u32) {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: rate,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut w = hound::WavWriter::create(path, spec).unwrap();
    for &x in samples {
        w.write_sample((x.clamp(-1.0, 1.0) * 32767.0) as i16)
            .unwrap();
    }
    w.finalize().unwrap();
}

/// A short decaying noise burst, roughly cough-shaped.
pub fn burst(seed: u64, len: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|i| {
            let env = (-(i as f64) / (len as f64 / 4.0)).exp();
            0.5 * env * (rng.random::<f64>() * 2.0 - 1.0)
        })
        .collect()
}

/// Every file in `dir` with its bytes, sorted by name.
pub fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    out
}
