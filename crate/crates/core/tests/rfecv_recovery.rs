use coughrank::learn::{rfecv, Dataset, ModelSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N_FEATURES: usize = 22;
const INFORMATIVE: [usize; 2] = [3, 14];

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// 22 standard-normal features; the label is the sign of the sum of the two
/// planted ones, with a margin band left empty.
fn planted(seed: u64, n: usize) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    while rows.len() < n {
        let row: Vec<f64> = (0..N_FEATURES).map(|_| gaussian(&mut rng)).collect();
        let s = row[INFORMATIVE[0]] + row[INFORMATIVE[1]];
        if s.abs() < 0.3 {
            continue;
        }
        labels.push(u8::from(s > 0.0));
        rows.push(row);
    }
    Dataset::from_rows(rows, labels).unwrap()
}

#[test]
fn planted_pair_is_recovered_in_most_seeds() {
    let spec = ModelSpec::logreg();
    let mut hits = 0;
    for seed in 0..10u64 {
        let ds = planted(1000 + seed, 200);
        let r = rfecv(&ds, &spec, 1, 5, seed).unwrap();
        let chosen: Vec<usize> = (0..N_FEATURES).filter(|&j| r.mask[j]).collect();
        if chosen == INFORMATIVE {
            hits += 1;
        }
        assert_eq!(r.curve.len(), N_FEATURES);
    }
    assert!(hits >= 9, "recovered in {hits}/10 seeds");
}

#[test]
fn curve_sizes_shrink_by_step() {
    let ds = planted(7, 120);
    let r = rfecv(&ds, &ModelSpec::logreg(), 5, 3, 0).unwrap();
    let sizes: Vec<usize> = r.curve.iter().map(|p| p.0).collect();
    assert_eq!(sizes, vec![22, 17, 12, 7, 2, 1]);
    assert!(r.curve.iter().all(|p| (0.0..=1.0).contains(&p.1)));
}
