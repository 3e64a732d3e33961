//! Closed-form warping cost in MACs per pixel, and the B-frame motion
//! compensation grid built from it.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::filter_bank::FilterSpec;
use crate::frame::Frame;
use crate::motion::{MotionField, MotionVector, QuantSpec};
use crate::warp::{warp_block, MacCounter, WarpConfig};

pub type Rational = Ratio<u64>;

/// Plane warps per B-frame: two references, three channels each.
pub const BFRAME_PLANE_WARPS: u64 = 6;

pub const GRID_BLOCK_SIZES: [usize; 3] = [1, 4, 8];
pub const GRID_TAPS: [usize; 4] = [2, 4, 8, 12];

/// Published B-frame motion compensation costs, rows by block size
/// {1, 4, 8}, columns by filter length {2, 4, 8, 12}.
pub const PUBLISHED_MC: [[u64; 4]; 3] =
    [[36, 120, 432, 936], [27, 66, 180, 342], [26, 57, 138, 243]];

/// Published motion decoder costs for block sizes {1, 4, 8}. These depend
/// on a particular learned motion decoder and are reference data only.
pub const PUBLISHED_MOTION_DECODING: [u64; 3] = [355, 34, 13];

fn check_taps(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::contract("filter length must be >= 1"))
    } else {
        Ok(())
    }
}

/// One 1D filter application: `N`.
pub fn c_1d(n: usize) -> Result<Rational> {
    check_taps(n)?;
    Ok(Rational::from_integer(n as u64))
}

/// Pixel-wise 2D warp: `N + 1` 1D filters, `N^2 + N`.
pub fn c_2d(n: usize) -> Result<Rational> {
    Ok(c_1d(n)? * Rational::from_integer(n as u64 + 1))
}

/// Block-based 2D warp: `(N^2 - N) / B + 2N`.
pub fn c_2d_block(n: usize, b: usize) -> Result<Rational> {
    check_taps(n)?;
    if b == 0 {
        return Err(Error::contract("block size must be >= 1"));
    }
    let n = n as u64;
    Ok(Rational::new(n * n - n, b as u64) + Rational::from_integer(2 * n))
}

/// Rounds half up, as used when printing fractional costs as integers.
pub fn round_half_up(r: Rational) -> u64 {
    (r + Rational::new(1, 2)).floor().to_integer()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityReport {
    pub n_taps: usize,
    pub block_size: usize,
    pub c1d: Rational,
    pub c2d: Rational,
    pub c2d_block: Rational,
    pub mc_total_bframe: Rational,
    pub measured: Option<Rational>,
}

impl ComplexityReport {
    pub fn new(n_taps: usize, block_size: usize) -> Result<Self> {
        let c2d_block = c_2d_block(n_taps, block_size)?;
        Ok(ComplexityReport {
            n_taps,
            block_size,
            c1d: c_1d(n_taps)?,
            c2d: c_2d(n_taps)?,
            c2d_block,
            mc_total_bframe: c2d_block * Rational::from_integer(BFRAME_PLANE_WARPS),
            measured: None,
        })
    }

    pub fn with_measured(mut self, counter: &MacCounter) -> Self {
        self.measured = Some(counter.per_pixel());
        self
    }

    /// B-frame cost as printed in integer tables.
    pub fn mc_total_rounded(&self) -> u64 {
        round_half_up(self.mc_total_bframe)
    }
}

/// Rows by block size (1, 4, 8), columns by filter length (2, 4, 8, 12).
pub fn reference_grid() -> Vec<Vec<ComplexityReport>> {
    GRID_BLOCK_SIZES
        .iter()
        .map(|&b| {
            GRID_TAPS
                .iter()
                .map(|&n| ComplexityReport::new(n, b).expect("grid parameters are valid"))
                .collect()
        })
        .collect()
}

/// True when the measured per-pixel count equals the model exactly.
pub fn reconcile(report: &ComplexityReport, counter: &MacCounter) -> bool {
    counter.pixels > 0 && counter.per_pixel() == report.c2d_block
}

/// Runs an instrumented single-channel `size x size` block warp with a
/// uniform sub-pixel field. `size` should be a multiple of `block_size` for
/// the count to match the closed form.
pub fn measure_block_warp(n_taps: usize, block_size: usize, size: usize) -> Result<MacCounter> {
    let spec = FilterSpec::for_taps(n_taps)?;
    let config = WarpConfig::new(spec, QuantSpec::Finite(64));
    let plane = (0..size * size)
        .map(|i| ((i * 37 % 101) as f64) / 100.0)
        .collect();
    let frame = Frame::new(size, size, vec![plane], 8)?;
    let field = MotionField::uniform(size, size, block_size, MotionVector::new(1.3, -0.6))?;
    let (_, counter) = warp_block(&frame, &field, &config)?;
    Ok(counter)
}
