use super::mel::LOG_FLOOR;
use super::stft::{stft_power, Spectrogram};
use super::{frame_mean, AudioClip, StftConfig};
use crate::error::{Error, Result};

/// Band edges in Hz for `n_bands` octave bands starting at `f_min`, preceded
/// by the `[0, f_min)` band. The upper edge of the last band is clipped to
/// Nyquist. Returns `n_bands + 2` edges.
pub fn contrast_band_edges(n_bands: usize, f_min: f64, sample_rate: u32) -> Vec<f64> {
    let nyquist = sample_rate as f64 / 2.0;
    let mut edges = vec![0.0];
    edges.extend((0..=n_bands).map(|b| (f_min * 2f64.powi(b as i32)).min(nyquist)));
    *edges.last_mut().unwrap() = nyquist;
    edges
}

/// Peak minus valley in the log domain for one band's magnitudes:
/// `log(mean of top q) - log(mean of bottom q)` with `q = max(1, ceil(alpha * N))`.
pub fn band_contrast(magnitudes: &[f64], alpha: f64) -> f64 {
    if magnitudes.is_empty() {
        return 0.0;
    }
    let mut sorted = magnitudes.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let n = sorted.len();
    let q = ((alpha * n as f64).ceil() as usize).clamp(1, n);
    let peak = sorted[..q].iter().sum::<f64>() / q as f64;
    let valley = sorted[n - q..].iter().sum::<f64>() / q as f64;
    peak.max(LOG_FLOOR).ln() - valley.max(LOG_FLOOR).ln()
}

/// Assigns each FFT bin to a contrast band. Band `b` covers
/// `[edges[b], edges[b+1])`; the last band also includes Nyquist.
fn band_bins(spec: &Spectrogram, edges: &[f64]) -> Result<Vec<Vec<usize>>> {
    let n_out = edges.len() - 1;
    let mut bands = vec![Vec::new(); n_out];
    for k in 0..spec.n_bins() {
        let f = spec.bin_frequency(k);
        let b = (0..n_out)
            .find(|&b| f >= edges[b] && f < edges[b + 1])
            .unwrap_or(n_out - 1);
        bands[b].push(k);
    }
    if let Some(b) = bands.iter().position(Vec::is_empty) {
        return Err(Error::Config(format!(
            "spectral contrast band {b} ([{:.1}, {:.1}) Hz) contains no FFT bins",
            edges[b],
            edges[b + 1]
        )));
    }
    Ok(bands)
}

pub(crate) fn contrast_from_power(
    spec: &Spectrogram,
    n_bands: usize,
    f_min: f64,
    alpha: f64,
) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&alpha) || alpha == 0.0 {
        return Err(Error::Config(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    if !(f_min > 0.0) {
        return Err(Error::Config(format!(
            "contrast f_min must be positive, got {f_min}"
        )));
    }
    let edges = contrast_band_edges(n_bands, f_min, spec.sample_rate);
    let bands = band_bins(spec, &edges)?;
    let per_frame: Vec<Vec<f64>> = spec
        .frames
        .iter()
        .map(|frame| {
            bands
                .iter()
                .map(|bins| {
                    let mags: Vec<f64> = bins.iter().map(|&k| frame[k].sqrt()).collect();
                    band_contrast(&mags, alpha)
                })
                .collect()
        })
        .collect();
    Ok(frame_mean(&per_frame, n_bands + 1))
}

/// Frame-mean spectral contrast: `n_bands + 1` values, lowest band first.
pub fn spectral_contrast(
    clip: &AudioClip,
    cfg: &StftConfig,
    n_bands: usize,
    alpha: f64,
) -> Result<Vec<f64>> {
    let spec = stft_power(clip, cfg)?;
    contrast_from_power(&spec, n_bands, 200.0, alpha)
}
