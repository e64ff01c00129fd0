use rustfft::{num_complex::Complex, FftPlanner};

use super::{AudioClip, StftConfig};
use crate::error::Result;

/// Power spectrogram: `frames[t][k] = |FFT(window * frame_t)[k]|^2` for
/// `k` in `0..=n_fft/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    pub frames: Vec<Vec<f64>>,
    pub n_fft: usize,
    pub sample_rate: u32,
}

impl Spectrogram {
    pub fn n_frames(&self) -> usize {
        self.frames.len()
    }

    pub fn n_bins(&self) -> usize {
        self.n_fft / 2 + 1
    }

    /// Centre frequency of FFT bin `k` in Hz.
    pub fn bin_frequency(&self, k: usize) -> f64 {
        k as f64 * self.sample_rate as f64 / self.n_fft as f64
    }
}

/// Periodic Hann window of length `n`.
pub fn hann_window(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos())
        .collect()
}

/// Maps a position in the centre-padded signal back onto the clip by
/// reflection (edge sample not repeated). Positions past the reflected
/// region are zero.
fn padded_sample(samples: &[f64], pos: isize, pad: usize) -> f64 {
    let len = samples.len() as isize;
    let j = pos - pad as isize;
    if j >= len + pad as isize || j < -(pad as isize) {
        return 0.0;
    }
    if len == 1 {
        return if j == 0 { samples[0] } else { 0.0 };
    }
    let period = 2 * (len - 1);
    let mut r = j.rem_euclid(period);
    if r > len - 1 {
        r = period - r;
    }
    samples[r as usize]
}

/// Centred power STFT with reflection padding of `n_fft/2` on both sides.
/// Produces `1 + ceil(len / hop)` frames; samples needed beyond the
/// reflected padding are zero.
pub fn stft_power(clip: &AudioClip, cfg: &StftConfig) -> Result<Spectrogram> {
    cfg.validate()?;
    let samples = clip.samples();
    let n_fft = cfg.n_fft;
    let pad = n_fft / 2;
    let n_frames = 1 + samples.len().div_ceil(cfg.hop);
    let window = hann_window(n_fft);

    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(n_fft);
    let mut scratch = vec![Complex::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let mut buf = vec![Complex::new(0.0, 0.0); n_fft];

    let mut frames = Vec::with_capacity(n_frames);
    for t in 0..n_frames {
        let start = (t * cfg.hop) as isize;
        for (n, slot) in buf.iter_mut().enumerate() {
            let x = padded_sample(samples, start + n as isize, pad);
            *slot = Complex::new(x * window[n], 0.0);
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        frames.push(buf[..=n_fft / 2].iter().map(|c| c.norm_sqr()).collect());
    }

    Ok(Spectrogram {
        frames,
        n_fft,
        sample_rate: clip.sample_rate(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct O(N^2) DFT power of one windowed frame.
    fn dft_power(frame: &[f64]) -> Vec<f64> {
        let n = frame.len();
        (0..=n / 2)
            .map(|k| {
                let (mut re, mut im) = (0.0, 0.0);
                for (i, x) in frame.iter().enumerate() {
                    let ang = -2.0 * std::f64::consts::PI * (k * i) as f64 / n as f64;
                    re += x * ang.cos();
                    im += x * ang.sin();
                }
                re * re + im * im
            })
            .collect()
    }

    fn cfg(n_fft: usize, hop: usize) -> StftConfig {
        StftConfig { n_fft, hop }
    }

    #[test]
    fn zero_clip_gives_zero_spectrogram() {
        let clip = AudioClip::new(vec![0.0; 3000], 22050).unwrap();
        let s = stft_power(&clip, &StftConfig::default()).unwrap();
        assert!(s.frames.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn frame_count_follows_center_padding() {
        for (len, hop) in [
            (1usize, 512usize),
            (512, 512),
            (513, 512),
            (22050, 512),
            (10, 3),
        ] {
            let clip = AudioClip::new(vec![0.1; len], 22050).unwrap();
            let s = stft_power(&clip, &cfg(2048.max(hop), hop)).unwrap();
            assert_eq!(s.n_frames(), 1 + len.div_ceil(hop), "len={len} hop={hop}");
            assert!(s.frames.iter().all(|f| f.len() == s.n_bins()));
        }
    }

    #[test]
    fn impulse_at_frame_centre_is_flat() {
        // The Hann window equals 1 at n_fft/2, so a unit impulse at a frame
        // centre has |X[k]|^2 = 1 for every k.
        let hop = 64;
        let mut x = vec![0.0; 1024];
        x[5 * hop] = 1.0;
        let clip = AudioClip::new(x, 8000).unwrap();
        let s = stft_power(&clip, &cfg(256, hop)).unwrap();
        for v in &s.frames[5] {
            assert!((v - 1.0).abs() < 1e-12);
        }
        let energy: f64 = s.frames[5].iter().sum();
        assert!((energy - 129.0).abs() < 1e-9);
    }

    #[test]
    fn matches_direct_dft_on_interior_frame() {
        let n_fft = 128;
        let hop = 32;
        let x: Vec<f64> = (0..600)
            .map(|i| ((i * 37 % 101) as f64 / 50.0) - 1.0)
            .collect();
        let clip = AudioClip::new(x.clone(), 8000).unwrap();
        let s = stft_power(&clip, &cfg(n_fft, hop)).unwrap();
        let w = hann_window(n_fft);
        let t = 6;
        let start = t * hop - n_fft / 2;
        let frame: Vec<f64> = (0..n_fft).map(|n| x[start + n] * w[n]).collect();
        for (a, b) in s.frames[t].iter().zip(dft_power(&frame)) {
            assert!((a - b).abs() < 1e-9 * (1.0 + b));
        }
    }

    #[test]
    fn reflection_padding_matches_numpy_reflect() {
        let x = [1.0, 2.0, 3.0, 4.0];
        // numpy.pad([1,2,3,4], 3, mode="reflect") = [4,3,2,1,2,3,4,3,2,1]
        let expected = [4.0, 3.0, 2.0, 1.0, 2.0, 3.0, 4.0, 3.0, 2.0, 1.0];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(padded_sample(&x, i as isize, 3), *e);
        }
    }

    #[test]
    fn bin_exact_sine_peaks_at_its_bin() {
        let sr = 22050u32;
        let n_fft: usize = 2048;
        let k0 = 93;
        let f = k0 as f64 * sr as f64 / n_fft as f64;
        let x: Vec<f64> = (0..sr as usize)
            .map(|i| (2.0 * std::f64::consts::PI * f * i as f64 / sr as f64).sin())
            .collect();
        let clip = AudioClip::new(x, sr).unwrap();
        let s = stft_power(&clip, &StftConfig::default()).unwrap();
        // frames whose window lies entirely inside the clip
        let inner = (n_fft / 2).div_ceil(512)..(s.n_frames() - 1 - (n_fft / 2).div_ceil(512));
        for (t, frame) in s
            .frames
            .iter()
            .enumerate()
            .filter(|(t, _)| inner.contains(t))
        {
            let arg = frame
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .unwrap()
                .0;
            assert_eq!(arg, k0, "frame {t}");
        }
    }
}
