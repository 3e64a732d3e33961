//! Separable sub-pixel motion compensation.
//!
//! Every output pixel is interpolated from an `N x N` reference window:
//! first `N` horizontal filters (one per neighbouring row), then one
//! vertical filter over those intermediates. Block-based warping shares the
//! horizontal pass between the rows of a block, which is where the savings
//! of block motion come from.
//!
//! Sample indices are clamped to the frame (edge replication). Outputs are
//! clamped to [0, 1] after the vertical pass; intermediates are not.

use std::borrow::Cow;
use std::sync::Arc;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::filter_bank::{build_filter_table, table_fraction, FilterSpec, FilterTable};
use crate::frame::Frame;
use crate::motion::{quantize_index, split_displacement, MotionField, QuantSpec};

/// Multiply-accumulate tally. Only filter tap products are counted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MacCounter {
    pub total_macs: u64,
    pub pixels: u64,
}

impl MacCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// MACs per decoded pixel as an exact rational; zero when nothing was
    /// decoded.
    pub fn per_pixel(&self) -> Ratio<u64> {
        if self.pixels == 0 {
            Ratio::from_integer(0)
        } else {
            Ratio::new(self.total_macs, self.pixels)
        }
    }

    pub fn merge(&mut self, other: MacCounter) {
        self.total_macs += other.total_macs;
        self.pixels += other.pixels;
    }
}

#[derive(Debug, Clone)]
pub struct WarpConfig {
    pub spec: FilterSpec,
    pub table: Option<Arc<FilterTable>>,
    pub quant: QuantSpec,
    pub count_macs: bool,
}

impl WarpConfig {
    /// Config with MAC counting on and, for finite quantization, a
    /// precomputed filter table.
    pub fn new(spec: FilterSpec, quant: QuantSpec) -> Self {
        let table = quant
            .delta()
            .map(|d| Arc::new(build_filter_table(spec, d).expect("delta >= 1")));
        WarpConfig {
            spec,
            table,
            quant,
            count_macs: true,
        }
    }

    pub fn with_table(
        spec: FilterSpec,
        quant: QuantSpec,
        table: Option<Arc<FilterTable>>,
    ) -> Result<Self> {
        let config = WarpConfig {
            spec,
            table,
            quant,
            count_macs: true,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(table) = &self.table {
            if *table.spec() != self.spec {
                return Err(Error::config(
                    "filter table was built for a different filter",
                ));
            }
            match self.quant {
                QuantSpec::Finite(d) if d == table.delta() => {}
                QuantSpec::Finite(d) => {
                    return Err(Error::config(format!(
                        "filter table has delta {} but quantization uses {d}",
                        table.delta()
                    )))
                }
                QuantSpec::Infinite => {
                    return Err(Error::config("filter table given for unquantized motion"))
                }
            }
        }
        Ok(())
    }

    pub fn taps(&self) -> usize {
        self.spec.taps()
    }

    /// Integer offset and filter for one displacement component.
    #[inline]
    fn resolve(&self, d: f64) -> (i64, Cow<'_, [f64]>) {
        let (k, s) = split_displacement(0, d);
        match self.quant {
            QuantSpec::Infinite => (k, Cow::Owned(self.spec.derive(s).coefficients)),
            QuantSpec::Finite(delta) => {
                let (carry, q) = quantize_index(s, delta);
                let taps = match &self.table {
                    Some(t) => Cow::Borrowed(t.taps_for(q)),
                    None => Cow::Owned(self.spec.derive(table_fraction(q, delta)).coefficients),
                };
                (k + carry, taps)
            }
        }
    }

    #[inline]
    fn macs(&self, n: u64) -> u64 {
        if self.count_macs {
            n
        } else {
            0
        }
    }
}

#[inline]
fn dot(taps: &[f64], mut sample: impl FnMut(usize) -> f64) -> f64 {
    let mut acc = 0.0;
    for (i, h) in taps.iter().enumerate() {
        acc += h * sample(i);
    }
    acc
}

#[inline]
fn clamp_index(i: i64, len: usize) -> usize {
    i.clamp(0, len as i64 - 1) as usize
}

/// Interpolates `samples` at a real position. Indices outside the vector
/// are clamped to its ends.
pub fn interp_1d(
    samples: &[f64],
    position: f64,
    config: &WarpConfig,
    counter: &mut MacCounter,
) -> f64 {
    assert!(!samples.is_empty(), "interp_1d on an empty signal");
    let (k, taps) = config.resolve(position);
    let first = k - (taps.len() / 2) as i64 + 1;
    let value = dot(&taps, |i| {
        samples[clamp_index(first + i as i64, samples.len())]
    });
    counter.total_macs += config.macs(taps.len() as u64);
    counter.pixels += 1;
    value
}

fn check_dims(frame: &Frame, field: &MotionField) -> Result<()> {
    if frame.width() != field.width() || frame.height() != field.height() {
        return Err(Error::contract(format!(
            "motion field is {}x{} but frame is {}x{}",
            field.width(),
            field.height(),
            frame.width(),
            frame.height()
        )));
    }
    Ok(())
}

/// Pixel-wise warp: every output pixel runs its own `N` horizontal and one
/// vertical filter, `N^2 + N` MACs per pixel and channel.
pub fn warp_dense(
    frame: &Frame,
    field: &MotionField,
    config: &WarpConfig,
) -> Result<(Frame, MacCounter)> {
    check_dims(frame, field)?;
    config.validate()?;
    if field.block_size() != 1 {
        return Err(Error::contract(format!(
            "dense warp needs a per-pixel field, got block size {}",
            field.block_size()
        )));
    }
    let (w, h, channels) = (frame.width(), frame.height(), frame.channels());
    let n = config.taps();
    let half = (n / 2) as i64;

    let rows: Vec<(Vec<Vec<f64>>, u64)> = (0..h)
        .into_par_iter()
        .map(|r| {
            let mut out = vec![vec![0.0; w]; channels];
            let mut macs = 0;
            for c in 0..w {
                let v = field.at_pixel(c, r);
                let (kc, hc) = config.resolve(v.dc);
                let (kr, hr) = config.resolve(v.dr);
                let col0 = c as i64 + kc - half + 1;
                let row0 = r as i64 + kr - half + 1;
                for (ch, plane_out) in out.iter_mut().enumerate() {
                    let plane = frame.plane(ch);
                    let value = dot(&hr, |j| {
                        let src = &plane[clamp_index(row0 + j as i64, h) * w..][..w];
                        dot(&hc, |i| src[clamp_index(col0 + i as i64, w)])
                    });
                    plane_out[c] = value.clamp(0.0, 1.0);
                    macs += config.macs((n * n + n) as u64);
                }
            }
            (out, macs)
        })
        .collect();

    assemble(frame, rows)
}

/// Block-based warp. Per block of `B x B` pixels the horizontal pass runs
/// once over the `(B + N - 1) x B` window and is reused by all output rows,
/// giving `2N + (N^2 - N) / B` MACs per pixel for full blocks. Produces
/// exactly the samples of [`warp_dense`] on the expanded field.
pub fn warp_block(
    frame: &Frame,
    field: &MotionField,
    config: &WarpConfig,
) -> Result<(Frame, MacCounter)> {
    check_dims(frame, field)?;
    config.validate()?;
    let (w, h, channels) = (frame.width(), frame.height(), frame.channels());
    let b = field.block_size();
    let n = config.taps();
    let half = (n / 2) as i64;

    let bands: Vec<(Vec<Vec<f64>>, u64)> = (0..field.grid_height())
        .into_par_iter()
        .map(|br| {
            let y0 = br * b;
            let bh = b.min(h - y0);
            let mut out = vec![vec![0.0; bh * w]; channels];
            let mut inter = Vec::with_capacity((b + n - 1) * b);
            let mut macs = 0;
            for bc in 0..field.grid_width() {
                let x0 = bc * b;
                let bw = b.min(w - x0);
                let v = field.block(bc, br);
                let (kc, hc) = config.resolve(v.dc);
                let (kr, hr) = config.resolve(v.dr);
                let col0 = x0 as i64 + kc - half + 1;
                let row0 = y0 as i64 + kr - half + 1;
                let rows = bh + n - 1;
                for (ch, band_out) in out.iter_mut().enumerate() {
                    let plane = frame.plane(ch);
                    inter.clear();
                    for t in 0..rows {
                        let src = &plane[clamp_index(row0 + t as i64, h) * w..][..w];
                        for dx in 0..bw {
                            let base = col0 + dx as i64;
                            inter.push(dot(&hc, |i| src[clamp_index(base + i as i64, w)]));
                        }
                    }
                    for dy in 0..bh {
                        for dx in 0..bw {
                            let value = dot(&hr, |j| inter[(dy + j) * bw + dx]);
                            band_out[dy * w + x0 + dx] = value.clamp(0.0, 1.0);
                        }
                    }
                    macs += config.macs((n * bw * (rows + bh)) as u64);
                }
            }
            (out, macs)
        })
        .collect();

    assemble(frame, bands)
}

/// Stitches horizontal bands (in order) into a frame shaped like `like`.
fn assemble(like: &Frame, bands: Vec<(Vec<Vec<f64>>, u64)>) -> Result<(Frame, MacCounter)> {
    let mut planes: Vec<Vec<f64>> = (0..like.channels())
        .map(|_| Vec::with_capacity(like.pixels()))
        .collect();
    let mut counter = MacCounter::new();
    for (band, macs) in bands {
        for (plane, part) in planes.iter_mut().zip(band) {
            plane.extend_from_slice(&part);
        }
        counter.total_macs += macs;
    }
    counter.pixels = like.pixels() as u64;
    let out = Frame::new(like.width(), like.height(), planes, like.bit_depth)?;
    Ok((out, counter))
}

/// Direct tensor-product interpolation over the `N x N` window, without
/// separating the passes. Reference for testing the separable paths.
pub fn warp_brute_force(frame: &Frame, field: &MotionField, config: &WarpConfig) -> Result<Frame> {
    check_dims(frame, field)?;
    config.validate()?;
    let (w, h) = (frame.width(), frame.height());
    let half = (config.taps() / 2) as i64;
    let mut planes = vec![vec![0.0; w * h]; frame.channels()];
    for r in 0..h {
        for c in 0..w {
            let v = field.at_pixel(c, r);
            let (kc, hc) = config.resolve(v.dc);
            let (kr, hr) = config.resolve(v.dr);
            for (ch, plane) in planes.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (j, hj) in hr.iter().enumerate() {
                    for (i, hi) in hc.iter().enumerate() {
                        let col = c as i64 + kc - half + 1 + i as i64;
                        let row = r as i64 + kr - half + 1 + j as i64;
                        acc += hj * hi * frame.get_clamped(ch, col, row);
                    }
                }
                plane[r * w + c] = acc.clamp(0.0, 1.0);
            }
        }
    }
    Frame::new(w, h, planes, frame.bit_depth)
}

/// Per-pixel blend weight for bi-directional prediction.
#[derive(Debug, Clone, PartialEq)]
pub enum BlendWeights {
    Scalar(f64),
    Plane(Vec<f64>),
}

impl BlendWeights {
    fn validate(&self, pixels: usize) -> Result<()> {
        let in_range = |a: &f64| (0.0..=1.0).contains(a);
        match self {
            BlendWeights::Scalar(a) if in_range(a) => Ok(()),
            BlendWeights::Scalar(a) => {
                Err(Error::config(format!("blend weight {a} outside [0, 1]")))
            }
            BlendWeights::Plane(p) if p.len() != pixels => Err(Error::contract(format!(
                "blend weight plane has {} samples, expected {pixels}",
                p.len()
            ))),
            BlendWeights::Plane(p) => match p.iter().position(|a| !in_range(a)) {
                Some(i) => Err(Error::config(format!(
                    "blend weight {} at {i} outside [0, 1]",
                    p[i]
                ))),
                None => Ok(()),
            },
        }
    }

    #[inline]
    fn at(&self, i: usize) -> f64 {
        match self {
            BlendWeights::Scalar(a) => *a,
            BlendWeights::Plane(p) => p[i],
        }
    }
}

/// `alpha * warp(ref0, field0) + (1 - alpha) * warp(ref1, field1)`.
///
/// The counter holds the MACs of both warps over the pixels of one output
/// frame; blend products are not counted.
pub fn predict_bidir(
    ref0: &Frame,
    field0: &MotionField,
    ref1: &Frame,
    field1: &MotionField,
    alpha: &BlendWeights,
    config: &WarpConfig,
) -> Result<(Frame, MacCounter)> {
    if !ref0.same_shape(ref1) {
        return Err(Error::contract(format!(
            "reference frames differ: {}x{}x{} vs {}x{}x{}",
            ref0.width(),
            ref0.height(),
            ref0.channels(),
            ref1.width(),
            ref1.height(),
            ref1.channels()
        )));
    }
    alpha.validate(ref0.pixels())?;
    let (p0, c0) = warp_block(ref0, field0, config)?;
    let (p1, c1) = warp_block(ref1, field1, config)?;
    let planes = p0
        .planes()
        .iter()
        .zip(p1.planes())
        .map(|(a, b)| {
            a.iter()
                .zip(b)
                .enumerate()
                .map(|(i, (x0, x1))| {
                    let w = alpha.at(i);
                    (w * x0 + (1.0 - w) * x1).clamp(0.0, 1.0)
                })
                .collect()
        })
        .collect();
    let out = Frame::new(ref0.width(), ref0.height(), planes, ref0.bit_depth)?;
    let counter = MacCounter {
        total_macs: c0.total_macs + c1.total_macs,
        pixels: ref0.pixels() as u64,
    };
    Ok((out, counter))
}
