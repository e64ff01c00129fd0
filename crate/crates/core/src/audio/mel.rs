use super::stft::{stft_power, Spectrogram};
use super::{frame_mean, AudioClip, StftConfig};
use crate::error::{Error, Result};

/// Floor applied before taking the log of mel energies.
pub const LOG_FLOOR: f64 = 1e-10;

/// HTK mel scale: `2595 * log10(1 + f / 700)`.
pub fn mel_scale(f: f64) -> Result<f64> {
    if !(f >= 0.0) || !f.is_finite() {
        return Err(Error::InvalidInput(format!(
            "frequency must be finite and non-negative, got {f}"
        )));
    }
    Ok(2595.0 * (1.0 + f / 700.0).log10())
}

/// Inverse of [`mel_scale`].
pub fn hz_from_mel(mel: f64) -> f64 {
    700.0 * (10f64.powf(mel / 2595.0) - 1.0)
}

/// Triangular filters whose centres are equally spaced on the mel axis
/// between `f_min` and `f_max`. Each filter rises linearly from its left
/// neighbour's centre to 1 at its own centre and falls back to 0 at the right
/// neighbour's centre. Returned as `n_mels` rows of `n_fft/2 + 1` weights.
pub fn mel_filterbank(
    n_mels: usize,
    n_fft: usize,
    sample_rate: u32,
    f_min: f64,
    f_max: f64,
) -> Result<Vec<Vec<f64>>> {
    let nyquist = sample_rate as f64 / 2.0;
    if n_mels == 0 {
        return Err(Error::Config("n_mels must be at least 1".into()));
    }
    if n_fft < 2 {
        return Err(Error::Config("n_fft must be at least 2".into()));
    }
    if !(f_min >= 0.0 && f_min < f_max && f_max <= nyquist) {
        return Err(Error::Config(format!(
            "invalid mel band edges: need 0 <= f_min < f_max <= {nyquist}, got [{f_min}, {f_max}]"
        )));
    }

    let mel_lo = mel_scale(f_min)?;
    let mel_hi = mel_scale(f_max)?;
    let step = (mel_hi - mel_lo) / (n_mels + 1) as f64;
    let edges: Vec<f64> = (0..n_mels + 2)
        .map(|i| hz_from_mel(mel_lo + step * i as f64))
        .collect();

    let n_bins = n_fft / 2 + 1;
    let bin_hz = sample_rate as f64 / n_fft as f64;
    let bank = (0..n_mels)
        .map(|m| {
            let (left, centre, right) = (edges[m], edges[m + 1], edges[m + 2]);
            (0..n_bins)
                .map(|k| {
                    let f = k as f64 * bin_hz;
                    if f <= left || f >= right {
                        0.0
                    } else if f <= centre {
                        (f - left) / (centre - left)
                    } else {
                        (right - f) / (right - centre)
                    }
                })
                .collect()
        })
        .collect();
    Ok(bank)
}

/// Centre frequencies (Hz) of the filters built by [`mel_filterbank`].
#[cfg(test)]
pub(crate) fn filter_centres(n_mels: usize, f_min: f64, f_max: f64) -> Result<Vec<f64>> {
    let mel_lo = mel_scale(f_min)?;
    let mel_hi = mel_scale(f_max)?;
    let step = (mel_hi - mel_lo) / (n_mels + 1) as f64;
    Ok((1..=n_mels)
        .map(|i| hz_from_mel(mel_lo + step * i as f64))
        .collect())
}

/// Orthonormal DCT-II basis, `n_out` rows by `n_in` columns.
pub fn dct_matrix(n_out: usize, n_in: usize) -> Vec<Vec<f64>> {
    let n = n_in as f64;
    (0..n_out)
        .map(|k| {
            let scale = if k == 0 {
                (1.0 / n).sqrt()
            } else {
                (2.0 / n).sqrt()
            };
            (0..n_in)
                .map(|i| {
                    scale
                        * (std::f64::consts::PI * k as f64 * (2.0 * i as f64 + 1.0) / (2.0 * n))
                            .cos()
                })
                .collect()
        })
        .collect()
}

pub(crate) fn mel_energies(spec: &Spectrogram, bank: &[Vec<f64>]) -> Vec<Vec<f64>> {
    spec.frames
        .iter()
        .map(|frame| {
            bank.iter()
                .map(|filter| filter.iter().zip(frame).map(|(w, p)| w * p).sum())
                .collect()
        })
        .collect()
}

/// Frame-mean of the first `n_mfcc` DCT coefficients of the floored log mel
/// energies.
pub(crate) fn mfcc_from_mel(mel_frames: &[Vec<f64>], n_mfcc: usize) -> Vec<f64> {
    let n_mels = mel_frames.first().map_or(0, Vec::len);
    let dct = dct_matrix(n_mfcc, n_mels);
    let coeffs: Vec<Vec<f64>> = mel_frames
        .iter()
        .map(|frame| {
            let logs: Vec<f64> = frame.iter().map(|e| e.max(LOG_FLOOR).ln()).collect();
            dct.iter()
                .map(|row| row.iter().zip(&logs).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect();
    frame_mean(&coeffs, n_mfcc)
}

/// Mel-frequency cepstral coefficients, averaged over frames.
pub fn mfcc(clip: &AudioClip, cfg: &StftConfig, n_mfcc: usize, n_mels: usize) -> Result<Vec<f64>> {
    if n_mfcc == 0 || n_mfcc > n_mels {
        return Err(Error::Config(format!(
            "need 1 <= n_mfcc <= n_mels, got n_mfcc={n_mfcc} n_mels={n_mels}"
        )));
    }
    let spec = stft_power(clip, cfg)?;
    let bank = mel_filterbank(
        n_mels,
        cfg.n_fft,
        clip.sample_rate(),
        0.0,
        clip.sample_rate() as f64 / 2.0,
    )?;
    Ok(mfcc_from_mel(&mel_energies(&spec, &bank), n_mfcc))
}

/// Mel-filterbank energies of the power spectrogram, averaged over frames.
pub fn mel_spectrogram_features(
    clip: &AudioClip,
    cfg: &StftConfig,
    n_mels: usize,
) -> Result<Vec<f64>> {
    let spec = stft_power(clip, cfg)?;
    let bank = mel_filterbank(
        n_mels,
        cfg.n_fft,
        clip.sample_rate(),
        0.0,
        clip.sample_rate() as f64 / 2.0,
    )?;
    Ok(frame_mean(&mel_energies(&spec, &bank), n_mels))
}
