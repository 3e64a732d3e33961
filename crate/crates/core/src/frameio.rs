//! Raw planar YUV input/output, PSNR and synthetic test content.
//!
//! Raw files hold frames back to back, each frame as its Y, U and V planes.
//! 8-bit samples are single bytes; 10-bit samples are little-endian 16-bit
//! words. Samples are normalized by the peak value (255 or 1023).

use std::f64::consts::PI;
use std::fmt;
use std::fs::File;
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::Path;
use std::str::FromStr;

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::motion::{MotionField, MotionVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitDepth {
    Eight,
    Ten,
}

impl BitDepth {
    pub fn from_bits(bits: u8) -> Result<Self> {
        match bits {
            8 => Ok(BitDepth::Eight),
            10 => Ok(BitDepth::Ten),
            other => Err(Error::config(format!(
                "unsupported bit depth {other} (expected 8 or 10)"
            ))),
        }
    }

    pub fn bits(self) -> u8 {
        match self {
            BitDepth::Eight => 8,
            BitDepth::Ten => 10,
        }
    }

    pub fn peak(self) -> u16 {
        match self {
            BitDepth::Eight => 255,
            BitDepth::Ten => 1023,
        }
    }

    fn bytes_per_sample(self) -> usize {
        match self {
            BitDepth::Eight => 1,
            BitDepth::Ten => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chroma {
    Yuv444,
    Yuv420,
}

impl fmt::Display for Chroma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chroma::Yuv444 => "444",
            Chroma::Yuv420 => "420",
        })
    }
}

impl FromStr for Chroma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "444" | "yuv444" => Ok(Chroma::Yuv444),
            "420" | "yuv420" => Ok(Chroma::Yuv420),
            other => Err(Error::config(format!(
                "unknown chroma format `{other}` (expected 444 or 420)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawVideoSpec {
    pub width: usize,
    pub height: usize,
    pub bit_depth: BitDepth,
    pub chroma: Chroma,
    pub frame_count: usize,
}

impl RawVideoSpec {
    pub fn new(
        width: usize,
        height: usize,
        bit_depth: BitDepth,
        chroma: Chroma,
        frame_count: usize,
    ) -> Result<Self> {
        let spec = RawVideoSpec {
            width,
            height,
            bit_depth,
            chroma,
            frame_count,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::config("video dimensions must be nonzero"));
        }
        if self.chroma == Chroma::Yuv420
            && (!self.width.is_multiple_of(2) || !self.height.is_multiple_of(2))
        {
            return Err(Error::config(format!(
                "4:2:0 needs even dimensions, got {}x{}",
                self.width, self.height
            )));
        }
        Ok(())
    }

    fn chroma_dims(&self) -> (usize, usize) {
        match self.chroma {
            Chroma::Yuv444 => (self.width, self.height),
            Chroma::Yuv420 => (self.width / 2, self.height / 2),
        }
    }

    pub fn frame_bytes(&self) -> usize {
        let (cw, ch) = self.chroma_dims();
        (self.width * self.height + 2 * cw * ch) * self.bit_depth.bytes_per_sample()
    }
}

fn decode_plane(bytes: &[u8], depth: BitDepth, path: &Path, offset: u64) -> Result<Vec<f64>> {
    let peak = depth.peak() as f64;
    match depth {
        BitDepth::Eight => Ok(bytes.iter().map(|&b| b as f64 / peak).collect()),
        BitDepth::Ten => bytes
            .chunks_exact(2)
            .enumerate()
            .map(|(i, w)| {
                let v = u16::from_le_bytes([w[0], w[1]]);
                if v > depth.peak() {
                    Err(Error::format(
                        path,
                        format!(
                            "10-bit sample {v} out of range at byte offset {}",
                            offset + 2 * i as u64
                        ),
                    ))
                } else {
                    Ok(v as f64 / peak)
                }
            })
            .collect(),
    }
}

/// Nearest-neighbour 2x upsampling of a chroma plane.
fn upsample_nearest(plane: &[f64], cw: usize, width: usize, height: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(width * height);
    for r in 0..height {
        for c in 0..width {
            out.push(plane[(r / 2) * cw + c / 2]);
        }
    }
    out
}

/// Reads frame `frame_index` as a three-channel 4:4:4 frame.
pub fn read_yuv(path: impl AsRef<Path>, spec: &RawVideoSpec, frame_index: usize) -> Result<Frame> {
    let path = path.as_ref();
    spec.validate()?;
    if spec.frame_count > 0 && frame_index >= spec.frame_count {
        return Err(Error::config(format!(
            "frame {frame_index} requested but the sequence has {} frames",
            spec.frame_count
        )));
    }
    let frame_bytes = spec.frame_bytes();
    let start = (frame_index * frame_bytes) as u64;
    let mut file = File::open(path).map_err(|e| Error::io(path, e))?;
    let len = file.metadata().map_err(|e| Error::io(path, e))?.len();
    if len < start + frame_bytes as u64 {
        return Err(Error::format(
            path,
            format!(
                "file has {len} bytes, frame {frame_index} needs bytes {start}..{}",
                start + frame_bytes as u64
            ),
        ));
    }
    let mut buf = vec![0u8; frame_bytes];
    file.seek(SeekFrom::Start(start))
        .and_then(|_| file.read_exact(&mut buf))
        .map_err(|e| Error::io(path, e))?;

    let bps = spec.bit_depth.bytes_per_sample();
    let luma_len = spec.width * spec.height * bps;
    let (cw, ch) = spec.chroma_dims();
    let chroma_len = cw * ch * bps;
    let mut planes = Vec::with_capacity(3);
    let mut offset = 0;
    for len in [luma_len, chroma_len, chroma_len] {
        let plane = decode_plane(
            &buf[offset..offset + len],
            spec.bit_depth,
            path,
            start + offset as u64,
        )?;
        offset += len;
        planes.push(if planes.is_empty() || spec.chroma == Chroma::Yuv444 {
            plane
        } else {
            upsample_nearest(&plane, cw, spec.width, spec.height)
        });
    }
    Frame::new(spec.width, spec.height, planes, spec.bit_depth.bits())
}

/// Integer sample for a normalized value, rounding half up and clamping to
/// the representable range.
#[inline]
pub fn quantize_sample(v: f64, depth: BitDepth) -> u16 {
    let peak = depth.peak() as f64;
    (v * peak + 0.5).floor().clamp(0.0, peak) as u16
}

pub fn encode_yuv(frame: &Frame, spec: &RawVideoSpec) -> Result<Vec<u8>> {
    spec.validate()?;
    if spec.chroma != Chroma::Yuv444 {
        return Err(Error::config("only 4:4:4 output is supported"));
    }
    if frame.width() != spec.width || frame.height() != spec.height || frame.channels() != 3 {
        return Err(Error::contract(format!(
            "frame is {}x{} with {} channels, spec expects {}x{} with 3",
            frame.width(),
            frame.height(),
            frame.channels(),
            spec.width,
            spec.height
        )));
    }
    let mut out = Vec::with_capacity(spec.frame_bytes());
    for plane in frame.planes() {
        for &v in plane {
            let q = quantize_sample(v, spec.bit_depth);
            match spec.bit_depth {
                BitDepth::Eight => out.push(q as u8),
                BitDepth::Ten => out.extend_from_slice(&q.to_le_bytes()),
            }
        }
    }
    Ok(out)
}

/// Writes one 4:4:4 frame, replacing `path` atomically.
pub fn write_yuv(frame: &Frame, spec: &RawVideoSpec, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), &encode_yuv(frame, spec)?)
}

/// Writes through a temporary file in the destination directory and renames
/// it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if path.as_os_str().is_empty() {
        return Err(Error::config("empty output path"));
    }
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct QualityResult {
    pub psnr_per_channel: Vec<f64>,
    pub psnr_avg: f64,
    pub mse_per_channel: Vec<f64>,
}

/// PSNR in dB for peak 1, `+inf` for identical signals.
pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (1.0 / mse).log10()
    }
}

/// Per-channel MSE/PSNR and the unweighted mean of the channel PSNRs.
pub fn psnr(a: &Frame, b: &Frame) -> Result<QualityResult> {
    if !a.same_shape(b) {
        return Err(Error::contract(format!(
            "cannot compare {}x{}x{} with {}x{}x{}",
            a.width(),
            a.height(),
            a.channels(),
            b.width(),
            b.height(),
            b.channels()
        )));
    }
    let mse_per_channel: Vec<f64> = a
        .planes()
        .iter()
        .zip(b.planes())
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q) * (p - q)).sum::<f64>() / x.len() as f64)
        .collect();
    let psnr_per_channel: Vec<f64> = mse_per_channel.iter().copied().map(psnr_from_mse).collect();
    let psnr_avg = psnr_per_channel.iter().sum::<f64>() / psnr_per_channel.len() as f64;
    Ok(QualityResult {
        psnr_per_channel,
        psnr_avg,
        mse_per_channel,
    })
}

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
#[inline]
fn unit(rng: &mut SplitMix64) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sinusoid {
    /// Cycles per pixel along columns and rows.
    pub freq: (f64, f64),
    pub phase: f64,
    pub amplitude: f64,
}

/// A continuous 2D signal made of sinusoids whose per-axis frequencies stay
/// below `cutoff` times the Nyquist frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct BandlimitedSignal {
    pub components: Vec<Sinusoid>,
}

impl BandlimitedSignal {
    pub const COMPONENTS: usize = 24;
    /// Total amplitude around the 0.5 mean, keeping values in [0.05, 0.95].
    pub const SWING: f64 = 0.45;

    /// Draws the components from a SplitMix64 stream seeded with `seed`,
    /// five draws per component: column frequency, row frequency, phase,
    /// raw amplitude, one spare.
    pub fn new(cutoff: f64, seed: u64) -> Result<Self> {
        if !(cutoff > 0.0 && cutoff < 1.0) {
            return Err(Error::contract(format!(
                "cutoff {cutoff} must lie in (0, 1)"
            )));
        }
        let fmax = 0.5 * cutoff;
        let mut rng = SplitMix64::seed_from_u64(seed);
        let mut components: Vec<Sinusoid> = (0..Self::COMPONENTS)
            .map(|_| {
                let fc = (2.0 * unit(&mut rng) - 1.0) * fmax;
                let fr = (2.0 * unit(&mut rng) - 1.0) * fmax;
                let phase = 2.0 * PI * unit(&mut rng);
                let amplitude = 0.1 + unit(&mut rng);
                let _ = rng.next_u64();
                Sinusoid {
                    freq: (fc, fr),
                    phase,
                    amplitude,
                }
            })
            .collect();
        let total: f64 = components.iter().map(|c| c.amplitude).sum();
        for c in &mut components {
            c.amplitude *= Self::SWING / total;
        }
        Ok(BandlimitedSignal { components })
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        0.5 + self
            .components
            .iter()
            .map(|c| c.amplitude * (2.0 * PI * (c.freq.0 * x + c.freq.1 * y) + c.phase).cos())
            .sum::<f64>()
    }

    /// Samples at integer pixel positions of the signal displaced by
    /// `shift = (columns, rows)`, i.e. pixel `(c, r)` holds the signal at
    /// `(c - shift.0, r - shift.1)`.
    pub fn render(&self, width: usize, height: usize, shift: (f64, f64)) -> Vec<f64> {
        let mut out = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                out.push(self.eval(c as f64 - shift.0, r as f64 - shift.1));
            }
        }
        out
    }
}

/// Single-channel band-limited frame, see [`BandlimitedSignal`].
pub fn synth_bandlimited(
    width: usize,
    height: usize,
    cutoff: f64,
    seed: u64,
    shift: (f64, f64),
) -> Result<Frame> {
    let signal = BandlimitedSignal::new(cutoff, seed)?;
    Frame::new(width, height, vec![signal.render(width, height, shift)], 10)
}

/// Field of independent uniform displacements in `[-max_abs, max_abs)`,
/// drawn from SplitMix64 (column component first).
pub fn synth_motion_field(
    width: usize,
    height: usize,
    block_size: usize,
    max_abs: f64,
    seed: u64,
) -> Result<MotionField> {
    if block_size == 0 {
        return Err(Error::config("block size must be >= 1"));
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    let n = width.div_ceil(block_size) * height.div_ceil(block_size);
    let vectors = (0..n)
        .map(|_| {
            let dc = (2.0 * unit(&mut rng) - 1.0) * max_abs;
            let dr = (2.0 * unit(&mut rng) - 1.0) * max_abs;
            MotionVector::new(dc, dr)
        })
        .collect();
    MotionField::new(width, height, block_size, vectors)
}
