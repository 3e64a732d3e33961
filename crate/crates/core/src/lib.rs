//! Sub-pixel motion compensation for video frames.
//!
//! * [`filter_bank`] derives polynomial and windowed-sinc interpolation
//!   filters and precomputes them for quantized fractions.
//! * [`motion`] holds dense and block-based motion fields and quantizes
//!   their fractional displacements.
//! * [`warp`] applies a field to a frame with separable filtering, pixel-wise
//!   or per block, while counting multiply-accumulates.
//! * [`complexity`] is the closed-form cost model the counts are checked
//!   against.
//! * [`frameio`] reads and writes raw YUV, computes PSNR and synthesizes
//!   band-limited test content.

pub mod cli;
pub mod complexity;
pub mod error;
pub mod filter_bank;
pub mod frame;
pub mod frameio;
pub mod motion;
pub mod warp;

pub use error::{Error, Result};
pub use filter_bank::{Filter, FilterKind, FilterSpec, FilterTable};
pub use frame::Frame;
pub use motion::{MotionField, MotionVector, QuantSpec};
pub use warp::{MacCounter, WarpConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
