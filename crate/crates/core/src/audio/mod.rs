//! Acoustic feature extraction.
//!
//! Every extractor works from the same centred, Hann-windowed power STFT and
//! reduces its per-frame output to a single vector by taking the arithmetic
//! mean over frames. [`extract_features`] concatenates the five blocks into
//! the 193-dimensional [`FeatureVector`].

mod chroma;
mod contrast;
mod mel;
mod resample;
mod stft;
mod wav;

pub use chroma::{chroma_frames, chromagram, tonal_centroid, tonnetz_frame, tonnetz_matrix};
pub use contrast::{band_contrast, contrast_band_edges, spectral_contrast};
pub use mel::{
    dct_matrix, hz_from_mel, mel_filterbank, mel_scale, mel_spectrogram_features, mfcc, LOG_FLOOR,
};
pub use resample::resample;
pub use stft::{hann_window, stft_power, Spectrogram};
pub use wav::{decode_wav, load_and_resample, load_wav};

use crate::error::{Error, Result};

/// Default analysis rate in Hz.
pub const DEFAULT_SAMPLE_RATE: u32 = 22_050;

pub const N_MFCC: usize = 40;
pub const N_MELS: usize = 128;
pub const N_CHROMA: usize = 12;
pub const N_CONTRAST: usize = 7;
pub const N_TONNETZ: usize = 6;
pub const FEATURE_DIM: usize = N_MFCC + N_MELS + N_CHROMA + N_CONTRAST + N_TONNETZ;

/// A mono sample buffer with its sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioClip {
    samples: Vec<f64>,
    sample_rate: u32,
}

impl AudioClip {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::InvalidAudio("sample rate must be positive".into()));
        }
        if samples.is_empty() {
            return Err(Error::InvalidAudio("zero-length audio".into()));
        }
        if let Some(pos) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::InvalidAudio(format!(
                "non-finite sample at index {pos}"
            )));
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Multiplies every sample by `gain`.
    pub fn scaled(&self, gain: f64) -> Self {
        Self {
            samples: self.samples.iter().map(|s| s * gain).collect(),
            sample_rate: self.sample_rate,
        }
    }
}

/// Frame length and hop of the short-time Fourier transform. The window is
/// always a periodic Hann window of length `n_fft`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StftConfig {
    pub n_fft: usize,
    pub hop: usize,
}

impl Default for StftConfig {
    fn default() -> Self {
        Self {
            n_fft: 2048,
            hop: 512,
        }
    }
}

impl StftConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_fft < 2 || !self.n_fft.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "n_fft must be an even number >= 2, got {}",
                self.n_fft
            )));
        }
        if self.hop == 0 || self.hop > self.n_fft {
            return Err(Error::Config(format!(
                "hop must satisfy 0 < hop <= n_fft, got hop={} n_fft={}",
                self.hop, self.n_fft
            )));
        }
        Ok(())
    }

    pub fn n_bins(&self) -> usize {
        self.n_fft / 2 + 1
    }
}

/// Knobs for the full 193-feature extraction.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureConfig {
    pub stft: StftConfig,
    pub f_min: f64,
    /// Upper mel edge; `None` means Nyquist.
    pub f_max: Option<f64>,
    pub contrast_alpha: f64,
    pub contrast_fmin: f64,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            stft: StftConfig::default(),
            f_min: 0.0,
            f_max: None,
            contrast_alpha: 0.02,
            contrast_fmin: 200.0,
        }
    }
}

/// The fixed-order 193-dimensional descriptor of one clip.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub mfcc: [f64; N_MFCC],
    pub mel: [f64; N_MELS],
    pub chroma: [f64; N_CHROMA],
    pub contrast: [f64; N_CONTRAST],
    pub tonnetz: [f64; N_TONNETZ],
}

impl FeatureVector {
    /// Concatenation MFCC, mel, chroma, contrast, tonnetz.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(FEATURE_DIM);
        out.extend_from_slice(&self.mfcc);
        out.extend_from_slice(&self.mel);
        out.extend_from_slice(&self.chroma);
        out.extend_from_slice(&self.contrast);
        out.extend_from_slice(&self.tonnetz);
        out
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        if values.len() != FEATURE_DIM {
            return Err(Error::InvalidInput(format!(
                "feature vector needs {FEATURE_DIM} values, got {}",
                values.len()
            )));
        }
        let mut fv = FeatureVector {
            mfcc: [0.0; N_MFCC],
            mel: [0.0; N_MELS],
            chroma: [0.0; N_CHROMA],
            contrast: [0.0; N_CONTRAST],
            tonnetz: [0.0; N_TONNETZ],
        };
        let (a, rest) = values.split_at(N_MFCC);
        let (b, rest) = rest.split_at(N_MELS);
        let (c, rest) = rest.split_at(N_CHROMA);
        let (d, e) = rest.split_at(N_CONTRAST);
        fv.mfcc.copy_from_slice(a);
        fv.mel.copy_from_slice(b);
        fv.chroma.copy_from_slice(c);
        fv.contrast.copy_from_slice(d);
        fv.tonnetz.copy_from_slice(e);
        Ok(fv)
    }

    /// Column names in concatenation order, as used in `features.csv`.
    pub fn column_names() -> Vec<String> {
        let mut names = Vec::with_capacity(FEATURE_DIM);
        names.extend((0..N_MFCC).map(|i| format!("mfcc_{i:02}")));
        names.extend((0..N_MELS).map(|i| format!("mel_{i:03}")));
        names.extend((0..N_CHROMA).map(|i| format!("chroma_{i:02}")));
        names.extend((0..N_CONTRAST).map(|i| format!("contrast_{i}")));
        names.extend((0..N_TONNETZ).map(|i| format!("tonnetz_{i}")));
        names
    }
}

/// Extracts the 193 features with the default configuration.
pub fn extract_features(clip: &AudioClip) -> Result<FeatureVector> {
    extract_features_with(clip, &FeatureConfig::default())
}

pub fn extract_features_with(clip: &AudioClip, cfg: &FeatureConfig) -> Result<FeatureVector> {
    let spec = stft_power(clip, &cfg.stft)?;
    let f_max = cfg.f_max.unwrap_or(clip.sample_rate() as f64 / 2.0);
    let bank = mel_filterbank(N_MELS, cfg.stft.n_fft, clip.sample_rate(), cfg.f_min, f_max)?;

    let mel_frames = mel::mel_energies(&spec, &bank);
    let mfcc_v = mel::mfcc_from_mel(&mel_frames, N_MFCC);
    let mel_v = frame_mean(&mel_frames, N_MELS);
    let chroma_fr = chroma::chroma_from_power(&spec);
    let chroma_v = frame_mean(&chroma_fr, N_CHROMA);
    let tonnetz_fr: Vec<Vec<f64>> = chroma_fr
        .iter()
        .map(|c| tonnetz_frame(c).to_vec())
        .collect();
    let tonnetz_v = frame_mean(&tonnetz_fr, N_TONNETZ);
    let contrast_v = contrast::contrast_from_power(
        &spec,
        N_CONTRAST - 1,
        cfg.contrast_fmin,
        cfg.contrast_alpha,
    )?;

    let mut all = Vec::with_capacity(FEATURE_DIM);
    all.extend(mfcc_v);
    all.extend(mel_v);
    all.extend(chroma_v);
    all.extend(contrast_v);
    all.extend(tonnetz_v);
    FeatureVector::from_slice(&all)
}

/// Column-wise mean of a frames × width matrix. Summation runs in frame
/// order so results do not depend on any scheduling.
pub(crate) fn frame_mean(frames: &[Vec<f64>], width: usize) -> Vec<f64> {
    let mut acc = vec![0.0; width];
    for frame in frames {
        for (a, v) in acc.iter_mut().zip(frame) {
            *a += v;
        }
    }
    let n = frames.len().max(1) as f64;
    acc.iter_mut().for_each(|a| *a /= n);
    acc
}
