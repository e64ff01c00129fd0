use std::f64::consts::PI;

/// Zero crossings of the sinc kernel kept on each side.
const ZERO_CROSSINGS: f64 = 32.0;
/// Passband edge as a fraction of the lower of the two Nyquist rates.
const ROLLOFF: f64 = 0.95;

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// 4-term Blackman-Harris window over `t` in `[-1, 1]`.
fn blackman_harris(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        return 0.0;
    }
    let x = PI * (t + 1.0);
    0.35875 - 0.48829 * x.cos() + 0.14128 * (2.0 * x).cos() - 0.01168 * (3.0 * x).cos()
}

/// Band-limited resampling by windowed-sinc interpolation.
///
/// Identical rates return the input unchanged. The output has
/// `ceil(len * to / from)` samples; output sample `n` sits at input position
/// `n * from / to`. Samples outside the input are treated as zero.
pub fn resample(samples: &[f64], from: u32, to: u32) -> Vec<f64> {
    if from == to || samples.is_empty() {
        return samples.to_vec();
    }
    let (from_f, to_f) = (from as f64, to as f64);
    let ratio = from_f / to_f;
    // cutoff in cycles per input sample, relative to input Nyquist
    let cutoff = (to_f / from_f).min(1.0) * ROLLOFF;
    let half_width = ZERO_CROSSINGS / cutoff;

    let out_len = (samples.len() as u64 * to as u64).div_ceil(from as u64) as usize;
    let last = samples.len() as isize - 1;
    (0..out_len)
        .map(|n| {
            let pos = n as f64 * ratio;
            let lo = ((pos - half_width).ceil() as isize).max(0);
            let hi = ((pos + half_width).floor() as isize).min(last);
            let mut acc = 0.0;
            for k in lo..=hi {
                let d = pos - k as f64;
                acc += samples[k as usize]
                    * cutoff
                    * sinc(cutoff * d)
                    * blackman_harris(d / half_width);
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine(f: f64, sr: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| (2.0 * PI * f * i as f64 / sr).sin())
            .collect()
    }

    #[test]
    fn identity_when_rates_match() {
        let x = vec![0.1, -0.2, 0.3];
        assert_eq!(resample(&x, 22050, 22050), x);
    }

    #[test]
    fn downsampled_sine_matches_direct_synthesis() {
        let x = sine(440.0, 44100.0, 44100);
        let y = resample(&x, 44100, 22050);
        assert_eq!(y.len(), 22050);
        let direct = sine(440.0, 22050.0, 22050);
        let edge = 200;
        let err = y[edge..y.len() - edge]
            .iter()
            .zip(&direct[edge..direct.len() - edge])
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-3, "max error {err}");
    }

    #[test]
    fn downsampled_sine_keeps_its_frequency() {
        let y = resample(&sine(440.0, 44100.0, 44100), 44100, 22050);
        // direct DFT magnitude scan over 400..480 Hz at 1 Hz resolution
        let best = (400..480)
            .max_by(|&a, &b| {
                let mag = |f: i32| {
                    let (mut re, mut im) = (0.0, 0.0);
                    for (i, v) in y.iter().enumerate() {
                        let ang = 2.0 * PI * f as f64 * i as f64 / 22050.0;
                        re += v * ang.cos();
                        im += v * ang.sin();
                    }
                    re * re + im * im
                };
                mag(a).total_cmp(&mag(b))
            })
            .unwrap();
        assert!((best - 440).abs() <= 2);
    }

    #[test]
    fn upsampling_preserves_low_frequency_tone() {
        let x = sine(300.0, 8000.0, 8000);
        let y = resample(&x, 8000, 16000);
        assert_eq!(y.len(), 16000);
        let direct = sine(300.0, 16000.0, 16000);
        let err = y[400..15600]
            .iter()
            .zip(&direct[400..15600])
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-3, "max error {err}");
    }
}
