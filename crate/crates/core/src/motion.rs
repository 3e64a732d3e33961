//! Dense and block-based motion fields and fractional displacement
//! quantization.
//!
//! Warping is backward: the prediction at `(c, r)` samples the reference at
//! `(c + dc, r + dr)`. Positive `dc` points right, positive `dr` points down.

use std::fmt;
use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frameio::write_atomic;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MotionVector {
    pub dc: f64,
    pub dr: f64,
}

impl MotionVector {
    pub const ZERO: MotionVector = MotionVector { dc: 0.0, dr: 0.0 };

    pub fn new(dc: f64, dr: f64) -> Self {
        MotionVector { dc, dr }
    }

    pub fn is_finite(&self) -> bool {
        self.dc.is_finite() && self.dr.is_finite()
    }
}

/// Number of representable fractional positions, or unquantized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuantSpec {
    Finite(u32),
    Infinite,
}

impl QuantSpec {
    pub fn finite(delta: u32) -> Result<Self> {
        if delta == 0 {
            Err(Error::config("quantization delta must be >= 1"))
        } else {
            Ok(QuantSpec::Finite(delta))
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, QuantSpec::Infinite)
    }

    pub fn delta(&self) -> Option<u32> {
        match *self {
            QuantSpec::Finite(d) => Some(d),
            QuantSpec::Infinite => None,
        }
    }
}

impl fmt::Display for QuantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuantSpec::Finite(d) => write!(f, "{d}"),
            QuantSpec::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for QuantSpec {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for QuantSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(QuantSpec::Infinite);
        }
        let d = s.parse::<u32>().map_err(|_| {
            Error::config(format!(
                "invalid delta `{s}` (expected integer >= 1 or `inf`)"
            ))
        })?;
        QuantSpec::finite(d)
    }
}

/// Splits `coord + d` into its integer part `k` and fraction `s` in [0, 1).
pub fn split_displacement(coord: i64, d: f64) -> (i64, f64) {
    let p = coord as f64 + d;
    let k = p.floor();
    let s = p - k;
    // p slightly below an integer can round s up to exactly 1.
    if s >= 1.0 {
        (k as i64 + 1, 0.0)
    } else {
        (k as i64, s)
    }
}

/// Quantizes `s` to the nearest multiple of `1/delta` and returns
/// `(carry, index)` with `s_hat = index / delta`. Ties round away from zero;
/// rounding up to 1 carries into the integer part.
#[inline]
pub fn quantize_index(s: f64, delta: u32) -> (i64, u32) {
    let q = (delta as f64 * s).round() as u32;
    if q >= delta {
        (1, 0)
    } else {
        (0, q)
    }
}

pub fn quantize_fraction(s: f64, quant: QuantSpec) -> (i64, f64) {
    match quant {
        QuantSpec::Infinite => (0, s),
        QuantSpec::Finite(delta) => {
            let (carry, q) = quantize_index(s, delta);
            (carry, q as f64 / delta as f64)
        }
    }
}

/// Quantizes one displacement component: `floor(d) + carry + s_hat`.
pub fn quantize_displacement(d: f64, quant: QuantSpec) -> f64 {
    let (k, s) = split_displacement(0, d);
    let (carry, s_hat) = quantize_fraction(s, quant);
    (k + carry) as f64 + s_hat
}

/// Row-major grid of vectors, one per `block_size x block_size` block.
/// Trailing blocks are cropped when the block size does not divide the
/// frame dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionField {
    width: usize,
    height: usize,
    block_size: usize,
    vectors: Vec<MotionVector>,
}

impl MotionField {
    pub fn new(
        width: usize,
        height: usize,
        block_size: usize,
        vectors: Vec<MotionVector>,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::config("motion field dimensions must be nonzero"));
        }
        if block_size == 0 {
            return Err(Error::config("block size must be >= 1"));
        }
        let expected = width.div_ceil(block_size) * height.div_ceil(block_size);
        if vectors.len() != expected {
            return Err(Error::contract(format!(
                "{width}x{height} field with block size {block_size} needs {expected} vectors, got {}",
                vectors.len()
            )));
        }
        if let Some(i) = vectors.iter().position(|v| !v.is_finite()) {
            return Err(Error::config(format!("motion vector {i} is not finite")));
        }
        Ok(MotionField {
            width,
            height,
            block_size,
            vectors,
        })
    }

    pub fn uniform(
        width: usize,
        height: usize,
        block_size: usize,
        v: MotionVector,
    ) -> Result<Self> {
        let n = width.div_ceil(block_size.max(1)) * height.div_ceil(block_size.max(1));
        Self::new(width, height, block_size, vec![v; n])
    }

    pub fn zeros(width: usize, height: usize, block_size: usize) -> Result<Self> {
        Self::uniform(width, height, block_size, MotionVector::ZERO)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn grid_width(&self) -> usize {
        self.width.div_ceil(self.block_size)
    }

    pub fn grid_height(&self) -> usize {
        self.height.div_ceil(self.block_size)
    }

    pub fn vectors(&self) -> &[MotionVector] {
        &self.vectors
    }

    #[inline]
    pub fn block(&self, block_col: usize, block_row: usize) -> MotionVector {
        self.vectors[block_row * self.grid_width() + block_col]
    }

    /// Vector that applies to pixel `(c, r)`.
    #[inline]
    pub fn at_pixel(&self, c: usize, r: usize) -> MotionVector {
        self.block(c / self.block_size, r / self.block_size)
    }

    pub fn map(&self, mut f: impl FnMut(MotionVector) -> MotionVector) -> MotionField {
        MotionField {
            vectors: self.vectors.iter().map(|&v| f(v)).collect(),
            ..self.clone()
        }
    }
}

pub fn quantize_field(field: &MotionField, quant: QuantSpec) -> MotionField {
    field.map(|v| MotionVector {
        dc: quantize_displacement(v.dc, quant),
        dr: quantize_displacement(v.dr, quant),
    })
}

/// Broadcasts every block vector to its pixels, giving a block size 1 field.
pub fn expand_to_dense(field: &MotionField) -> MotionField {
    let mut vectors = Vec::with_capacity(field.width * field.height);
    for r in 0..field.height {
        for c in 0..field.width {
            vectors.push(field.at_pixel(c, r));
        }
    }
    MotionField {
        width: field.width,
        height: field.height,
        block_size: 1,
        vectors,
    }
}

const MVF_MAGIC: &[u8; 4] = b"MVF1";
const MVF_HEADER_LEN: usize = 16;

/// Serializes to the `.mvf` layout: magic `MVF1`, little-endian u32 width,
/// height and block size, then `(dc, dr)` f32 pairs in grid row-major order.
pub fn encode_mvf(field: &MotionField) -> Vec<u8> {
    let mut out = Vec::with_capacity(MVF_HEADER_LEN + 8 * field.vectors.len());
    out.extend_from_slice(MVF_MAGIC);
    for v in [field.width, field.height, field.block_size] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    for v in &field.vectors {
        out.extend_from_slice(&(v.dc as f32).to_le_bytes());
        out.extend_from_slice(&(v.dr as f32).to_le_bytes());
    }
    out
}

pub fn decode_mvf(bytes: &[u8], path: &Path) -> Result<MotionField> {
    if bytes.len() < MVF_HEADER_LEN {
        return Err(Error::format(
            path,
            format!(
                "truncated header: {} of {MVF_HEADER_LEN} bytes",
                bytes.len()
            ),
        ));
    }
    if &bytes[..4] != MVF_MAGIC {
        return Err(Error::format(path, "bad magic, expected `MVF1`"));
    }
    let word =
        |i: usize| u32::from_le_bytes(bytes[4 + 4 * i..8 + 4 * i].try_into().unwrap()) as usize;
    let (width, height, block_size) = (word(0), word(1), word(2));
    if width == 0 || height == 0 || block_size == 0 {
        return Err(Error::format(
            path,
            format!("invalid header {width}x{height} block {block_size}"),
        ));
    }
    let count = width.div_ceil(block_size) * height.div_ceil(block_size);
    let expected = MVF_HEADER_LEN + 8 * count;
    if bytes.len() != expected {
        return Err(Error::format(
            path,
            format!(
                "expected {expected} bytes for {count} vectors, found {}",
                bytes.len()
            ),
        ));
    }
    let vectors = bytes[MVF_HEADER_LEN..]
        .chunks_exact(8)
        .map(|pair| MotionVector {
            dc: f32::from_le_bytes(pair[..4].try_into().unwrap()) as f64,
            dr: f32::from_le_bytes(pair[4..].try_into().unwrap()) as f64,
        })
        .collect();
    MotionField::new(width, height, block_size, vectors)
        .map_err(|e| Error::format(path, e.to_string()))
}

pub fn read_mvf(path: impl AsRef<Path>) -> Result<MotionField> {
    let path = path.as_ref();
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|f| BufReader::new(f).read_to_end(&mut bytes))
        .map_err(|e| Error::io(path, e))?;
    decode_mvf(&bytes, path)
}

pub fn write_mvf(field: &MotionField, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), &encode_mvf(field))
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    block_col: usize,
    block_row: usize,
    dc: f64,
    dr: f64,
}

/// Writes `block_col,block_row,dc,dr` rows in grid order.
pub fn write_field_csv(field: &MotionField, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_writer(Vec::new());
    for br in 0..field.grid_height() {
        for bc in 0..field.grid_width() {
            let v = field.block(bc, br);
            w.serialize(CsvRow {
                block_col: bc,
                block_row: br,
                dc: v.dc,
                dr: v.dr,
            })
            .map_err(|e| Error::format(path, e.to_string()))?;
        }
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::format(path, e.to_string()))?;
    write_atomic(path, &bytes)
}

/// Reads a CSV field. The CSV carries no frame geometry so it is supplied
/// by the caller; every block must appear exactly once.
pub fn read_field_csv(
    path: impl AsRef<Path>,
    width: usize,
    height: usize,
    block_size: usize,
) -> Result<MotionField> {
    let path = path.as_ref();
    if block_size == 0 {
        return Err(Error::config("block size must be >= 1"));
    }
    let (gw, gh) = (width.div_ceil(block_size), height.div_ceil(block_size));
    let mut slots: Vec<Option<MotionVector>> = vec![None; gw * gh];
    let mut reader =
        csv::Reader::from_path(path).map_err(|e| Error::format(path, e.to_string()))?;
    for (line, row) in reader.deserialize::<CsvRow>().enumerate() {
        let row = row.map_err(|e| Error::format(path, e.to_string()))?;
        if row.block_col >= gw || row.block_row >= gh {
            return Err(Error::format(
                path,
                format!(
                    "row {}: block ({}, {}) outside {gw}x{gh} grid",
                    line + 2,
                    row.block_col,
                    row.block_row
                ),
            ));
        }
        let slot = &mut slots[row.block_row * gw + row.block_col];
        if slot.is_some() {
            return Err(Error::format(
                path,
                format!(
                    "row {}: duplicate block ({}, {})",
                    line + 2,
                    row.block_col,
                    row.block_row
                ),
            ));
        }
        *slot = Some(MotionVector::new(row.dc, row.dr));
    }
    let vectors = slots
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| Error::format(path, format!("missing block ({}, {})", i % gw, i / gw)))
        })
        .collect::<Result<Vec<_>>>()?;
    MotionField::new(width, height, block_size, vectors)
}
