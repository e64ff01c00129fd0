use std::io::Cursor;
use std::path::Path;

use hound::{SampleFormat, WavReader};

use super::{resample, AudioClip};
use crate::error::{Error, Result};

/// Decodes an in-memory RIFF/WAV file into a mono clip at its native rate.
///
/// Accepts 8/16/24-bit integer PCM and 32-bit float, one or two channels.
/// Stereo is mixed down by averaging the channels. Integer samples are scaled
/// by `2^(bits-1)`; float samples are clamped to `[-1, 1]`.
pub fn decode_wav(bytes: &[u8]) -> Result<AudioClip> {
    let reader = WavReader::new(Cursor::new(bytes))
        .map_err(|e| Error::UnsupportedAudio(format!("not a readable WAV file: {e}")))?;
    let spec = reader.spec();
    if spec.channels == 0 || spec.channels > 2 {
        return Err(Error::UnsupportedAudio(format!(
            "{} channels (only mono and stereo are supported)",
            spec.channels
        )));
    }
    if spec.sample_rate == 0 {
        return Err(Error::UnsupportedAudio("sample rate of 0 Hz".into()));
    }

    let interleaved: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (SampleFormat::Int, bits @ (8 | 16 | 24)) => {
            let scale = (1i64 << (bits - 1)) as f64;
            reader
                .into_samples::<i32>()
                .map(|s| s.map(|v| v as f64 / scale))
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::InvalidAudio(format!("corrupt sample data: {e}")))?
        }
        (SampleFormat::Float, 32) => {
            let raw: Vec<f32> = reader
                .into_samples::<f32>()
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::InvalidAudio(format!("corrupt sample data: {e}")))?;
            if raw.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidAudio("non-finite float sample".into()));
            }
            raw.into_iter()
                .map(|v| (v as f64).clamp(-1.0, 1.0))
                .collect()
        }
        (fmt, bits) => {
            return Err(Error::UnsupportedAudio(format!(
                "{bits}-bit {fmt:?} encoding (expected 8/16/24-bit int or 32-bit float)"
            )))
        }
    };

    let channels = spec.channels as usize;
    let mono: Vec<f64> = interleaved
        .chunks_exact(channels)
        .map(|frame| frame.iter().sum::<f64>() / channels as f64)
        .collect();
    if mono.is_empty() {
        return Err(Error::InvalidAudio("zero-length audio".into()));
    }
    AudioClip::new(mono, spec.sample_rate)
}

/// Reads a WAV file from disk without resampling.
pub fn load_wav(path: &Path) -> Result<AudioClip> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    decode_wav(&bytes)
}

/// Reads a WAV file, mixes to mono and resamples to `target_rate`.
pub fn load_and_resample(path: &Path, target_rate: u32) -> Result<AudioClip> {
    if target_rate == 0 {
        return Err(Error::Config("target sample rate must be positive".into()));
    }
    let clip = load_wav(path)?;
    if clip.sample_rate() == target_rate {
        return Ok(clip);
    }
    AudioClip::new(
        resample(clip.samples(), clip.sample_rate(), target_rate),
        target_rate,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use hound::{WavSpec, WavWriter};

    fn write_int(bits: u16, channels: u16, rate: u32, samples: &[i32]) -> Vec<u8> {
        let mut buf = Cursor::new(Vec::new());
        {
            let spec = WavSpec {
                channels,
                sample_rate: rate,
                bits_per_sample: bits,
                sample_format: SampleFormat::Int,
            };
            let mut w = WavWriter::new(&mut buf, spec).unwrap();
            for &s in samples {
                w.write_sample(s).unwrap();
            }
            w.finalize().unwrap();
        }
        buf.into_inner()
    }

    #[test]
    fn mono_16_bit_scaled_exactly() {
        let raw = [0, 16384, -32768, 32767, -1];
        let clip = decode_wav(&write_int(16, 1, 22050, &raw)).unwrap();
        assert_eq!(clip.sample_rate(), 22050);
        let expected: Vec<f64> = raw.iter().map(|&v| v as f64 / 32768.0).collect();
        assert_eq!(clip.samples(), expected.as_slice());
    }

    #[test]
    fn antiphase_stereo_mixes_to_silence() {
        let raw: Vec<i32> = (0..100).flat_map(|i| [i * 100, -(i * 100)]).collect();
        let clip = decode_wav(&write_int(16, 2, 44100, &raw)).unwrap();
        assert_eq!(clip.len(), 100);
        assert!(clip.samples().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn eight_and_24_bit_supported() {
        let c8 = decode_wav(&write_int(8, 1, 8000, &[-128, 0, 64])).unwrap();
        assert_eq!(c8.samples(), &[-1.0, 0.0, 0.5]);
        let c24 = decode_wav(&write_int(24, 1, 8000, &[-8_388_608, 4_194_304])).unwrap();
        assert_eq!(c24.samples(), &[-1.0, 0.5]);
    }

    #[test]
    fn float_32_supported() {
        let mut buf = Cursor::new(Vec::new());
        {
            let spec = WavSpec {
                channels: 1,
                sample_rate: 16000,
                bits_per_sample: 32,
                sample_format: SampleFormat::Float,
            };
            let mut w = WavWriter::new(&mut buf, spec).unwrap();
            for s in [0.25f32, -0.5, 1.5] {
                w.write_sample(s).unwrap();
            }
            w.finalize().unwrap();
        }
        let clip = decode_wav(&buf.into_inner()).unwrap();
        assert_eq!(clip.samples(), &[0.25, -0.5, 1.0]);
    }

    #[test]
    fn rejects_garbage_empty_and_32_bit_int() {
        assert!(decode_wav(b"not a wav file at all").is_err());
        assert!(decode_wav(&write_int(16, 1, 8000, &[])).is_err());
        assert!(matches!(
            decode_wav(&write_int(32, 1, 8000, &[1, 2])),
            Err(Error::UnsupportedAudio(_))
        ));
    }

    #[test]
    fn rejects_more_than_two_channels() {
        assert!(matches!(
            decode_wav(&write_int(16, 3, 8000, &[1, 2, 3])),
            Err(Error::UnsupportedAudio(_))
        ));
    }
}
