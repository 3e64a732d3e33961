use crate::error::{Error, Result};

/// Planar multi-channel raster with samples normalized to [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    width: usize,
    height: usize,
    planes: Vec<Vec<f64>>,
    /// Bit depth of the integer source, kept for writing back.
    pub bit_depth: u8,
}

impl Frame {
    pub fn new(width: usize, height: usize, planes: Vec<Vec<f64>>, bit_depth: u8) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::config("frame dimensions must be nonzero"));
        }
        if planes.is_empty() {
            return Err(Error::config("frame needs at least one channel"));
        }
        for (c, p) in planes.iter().enumerate() {
            if p.len() != width * height {
                return Err(Error::contract(format!(
                    "plane {c} has {} samples, expected {}x{}",
                    p.len(),
                    width,
                    height
                )));
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::config(format!("plane {c} has non-finite samples")));
            }
        }
        Ok(Frame {
            width,
            height,
            planes,
            bit_depth,
        })
    }

    pub fn filled(width: usize, height: usize, channels: usize, value: f64) -> Result<Self> {
        Self::new(
            width,
            height,
            vec![vec![value; width * height]; channels],
            8,
        )
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.planes.len()
    }

    pub fn pixels(&self) -> usize {
        self.width * self.height
    }

    pub fn plane(&self, c: usize) -> &[f64] {
        &self.planes[c]
    }

    pub fn plane_mut(&mut self, c: usize) -> &mut [f64] {
        &mut self.planes[c]
    }

    pub fn planes(&self) -> &[Vec<f64>] {
        &self.planes
    }

    pub fn into_planes(self) -> Vec<Vec<f64>> {
        self.planes
    }

    #[inline]
    pub fn get(&self, c: usize, col: usize, row: usize) -> f64 {
        self.planes[c][row * self.width + col]
    }

    /// Sample with edge replication for out-of-range coordinates.
    #[inline]
    pub fn get_clamped(&self, c: usize, col: i64, row: i64) -> f64 {
        let col = col.clamp(0, self.width as i64 - 1) as usize;
        let row = row.clamp(0, self.height as i64 - 1) as usize;
        self.get(c, col, row)
    }

    pub fn same_shape(&self, other: &Frame) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.channels() == other.channels()
    }

    /// Copy of the window `[x0, x0 + w) x [y0, y0 + h)`.
    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Result<Frame> {
        if x0 + w > self.width || y0 + h > self.height {
            return Err(Error::contract(format!(
                "crop {w}x{h}+{x0}+{y0} exceeds {}x{}",
                self.width, self.height
            )));
        }
        let planes = self
            .planes
            .iter()
            .map(|p| {
                (y0..y0 + h)
                    .flat_map(|r| {
                        p[r * self.width + x0..r * self.width + x0 + w]
                            .iter()
                            .copied()
                    })
                    .collect()
            })
            .collect();
        Frame::new(w, h, planes, self.bit_depth)
    }
}
