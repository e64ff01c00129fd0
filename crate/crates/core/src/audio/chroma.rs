use super::stft::{stft_power, Spectrogram};
use super::{frame_mean, AudioClip, StftConfig, N_CHROMA, N_TONNETZ};
use crate::error::Result;

/// MIDI note number of an FFT bin frequency, A4 = 440 Hz = 69.
fn midi_of(f: f64) -> f64 {
    69.0 + 12.0 * (f / 440.0).log2()
}

/// Per-frame chroma vectors. Each FFT bin above DC splits its power between
/// the two equal-tempered semitones bracketing its (fractional) MIDI pitch,
/// linearly in pitch, and folds them onto pitch classes (index 0 = C).
/// Every frame is then divided by its maximum; silent frames stay zero.
pub(crate) fn chroma_from_power(spec: &Spectrogram) -> Vec<Vec<f64>> {
    let routes: Vec<(usize, usize, f64)> = (1..spec.n_bins())
        .map(|k| {
            let m = midi_of(spec.bin_frequency(k));
            let lo = m.floor();
            let frac = m - lo;
            let lo_class = (lo as i64).rem_euclid(12) as usize;
            (lo_class, (lo_class + 1) % 12, frac)
        })
        .collect();

    spec.frames
        .iter()
        .map(|frame| {
            let mut c = vec![0.0; N_CHROMA];
            for (&(lo, hi, frac), &p) in routes.iter().zip(&frame[1..]) {
                c[lo] += p * (1.0 - frac);
                c[hi] += p * frac;
            }
            let max = c.iter().cloned().fold(0.0, f64::max);
            if max > 0.0 {
                c.iter_mut().for_each(|v| *v /= max);
            }
            c
        })
        .collect()
}

/// Per-frame normalised chroma of a clip.
pub fn chroma_frames(clip: &AudioClip, cfg: &StftConfig) -> Result<Vec<Vec<f64>>> {
    Ok(chroma_from_power(&stft_power(clip, cfg)?))
}

/// Frame-mean chromagram; every entry lies in `[0, 1]`.
pub fn chromagram(clip: &AudioClip, cfg: &StftConfig) -> Result<Vec<f64>> {
    Ok(frame_mean(&chroma_frames(clip, cfg)?, N_CHROMA))
}

/// The 6x12 tonal-centroid projection: circle of fifths (radius 1), minor
/// thirds (radius 1) and major thirds (radius 0.5), each as a (sin, cos) pair.
pub fn tonnetz_matrix() -> [[f64; N_CHROMA]; N_TONNETZ] {
    use std::f64::consts::PI;
    let circles = [
        (7.0 * PI / 6.0, 1.0),
        (3.0 * PI / 2.0, 1.0),
        (2.0 * PI / 3.0, 0.5),
    ];
    let mut phi = [[0.0; N_CHROMA]; N_TONNETZ];
    for (c, &(angle, radius)) in circles.iter().enumerate() {
        let a: [f64; N_CHROMA] = std::array::from_fn(|l| l as f64 * angle);
        phi[2 * c] = a.map(|x| radius * x.sin());
        phi[2 * c + 1] = a.map(|x| radius * x.cos());
    }
    phi
}

/// Tonal centroid of one chroma frame: the projection divided by the
/// frame's L1 norm. A zero frame maps to zero.
pub fn tonnetz_frame(chroma: &[f64]) -> [f64; N_TONNETZ] {
    let norm: f64 = chroma.iter().map(|c| c.abs()).sum();
    let mut out = [0.0; N_TONNETZ];
    if norm == 0.0 {
        return out;
    }
    let phi = tonnetz_matrix();
    for (d, row) in phi.iter().enumerate() {
        out[d] = row.iter().zip(chroma).map(|(p, c)| p * c).sum::<f64>() / norm;
    }
    out
}

/// Frame-mean tonal centroid of a clip.
pub fn tonal_centroid(clip: &AudioClip, cfg: &StftConfig) -> Result<Vec<f64>> {
    let frames: Vec<Vec<f64>> = chroma_frames(clip, cfg)?
        .iter()
        .map(|c| tonnetz_frame(c).to_vec())
        .collect();
    Ok(frame_mean(&frames, N_TONNETZ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tone(f: f64) -> AudioClip {
        let sr = 22050;
        let x = (0..sr as usize)
            .map(|i| (2.0 * std::f64::consts::PI * f * i as f64 / sr as f64).sin())
            .collect();
        AudioClip::new(x, sr).unwrap()
    }

    fn argmax(v: &[f64]) -> usize {
        v.iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0
    }

    #[test]
    fn a440_lands_on_pitch_class_a() {
        let c = chromagram(&tone(440.0), &StftConfig::default()).unwrap();
        assert_eq!(argmax(&c), 9);
        assert!(c.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }

    #[test]
    fn semitone_transposition_shifts_chroma() {
        let cfg = StftConfig::default();
        let a = chromagram(&tone(440.0), &cfg).unwrap();
        let b = chromagram(&tone(440.0 * 2f64.powf(1.0 / 12.0)), &cfg).unwrap();
        for l in 0..12 {
            let shifted = a[(l + 11) % 12];
            assert!(
                (shifted - b[l]).abs() < 0.05,
                "class {l}: {shifted} vs {}",
                b[l]
            );
        }
    }

    #[test]
    fn silent_chroma_is_zero() {
        let clip = AudioClip::new(vec![0.0; 2048], 22050).unwrap();
        assert_eq!(
            chromagram(&clip, &StftConfig::default()).unwrap(),
            vec![0.0; 12]
        );
        assert_eq!(
            tonal_centroid(&clip, &StftConfig::default()).unwrap(),
            vec![0.0; 6]
        );
    }

    #[test]
    fn one_hot_chroma_selects_column() {
        let phi = tonnetz_matrix();
        for l in 0..12 {
            let mut c = [0.0; 12];
            c[l] = 1.0;
            let z = tonnetz_frame(&c);
            for d in 0..6 {
                assert_eq!(z[d], phi[d][l]);
            }
        }
        assert_eq!(tonnetz_frame(&[0.0; 12]), [0.0; 6]);
    }

    proptest! {
        #[test]
        fn tonnetz_circle_norms_are_bounded(c in proptest::collection::vec(0.0f64..1.0, 12)) {
            let z = tonnetz_frame(&c);
            let r = |a: f64, b: f64| (a * a + b * b).sqrt();
            prop_assert!(r(z[0], z[1]) <= 1.0 + 1e-12);
            prop_assert!(r(z[2], z[3]) <= 1.0 + 1e-12);
            prop_assert!(r(z[4], z[5]) <= 0.5 + 1e-12);
        }
    }
}
