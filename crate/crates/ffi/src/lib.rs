//! C ABI over `subpel`.
//!
//! Objects are opaque heap handles created by `sp_*_new` / `sp_*_read_*`
//! functions and released with the matching `sp_*_free`. Every fallible call
//! returns an [`SpStatus`]; on failure a description is available from
//! [`sp_last_error_message`] on the same thread until the next failing call.
//!
//! # Safety
//!
//! Handle arguments must be null or a live pointer returned by this library,
//! and each handle is freed at most once. Buffers passed with a length must
//! be valid for that many elements. Paths are NUL-terminated UTF-8. Enum
//! arguments must hold one of the declared values.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use subpel::complexity::c_2d_block;
use subpel::frameio::{psnr, read_yuv, write_yuv, BitDepth, Chroma, RawVideoSpec};
use subpel::motion::{read_mvf, write_mvf};
use subpel::warp::{predict_bidir, warp_block, warp_dense, BlendWeights};
use subpel::{
    Error, FilterKind, FilterSpec, FilterTable, Frame, MotionField, MotionVector, QuantSpec,
    WarpConfig,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Contract = 3,
    Io = 4,
    Format = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpFilterKind {
    Polynomial = 0,
    WindowedSinc = 1,
}

impl From<SpFilterKind> for FilterKind {
    fn from(k: SpFilterKind) -> Self {
        match k {
            SpFilterKind::Polynomial => FilterKind::Polynomial,
            SpFilterKind::WindowedSinc => FilterKind::WindowedSinc,
        }
    }
}

/// MAC tally of a warp.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SpMacCount {
    pub total_macs: u64,
    pub pixels: u64,
}

pub struct SpFilterTable(FilterTable);
pub struct SpFrame(Frame);
pub struct SpMotionField(MotionField);
pub struct SpWarpConfig(WarpConfig);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(status: SpStatus, msg: impl Into<String>) -> SpStatus {
    set_last_error(msg);
    status
}

fn from_error(e: Error) -> SpStatus {
    let status = match &e {
        Error::Config(_) => SpStatus::InvalidArgument,
        Error::Contract(_) => SpStatus::Contract,
        Error::Io { .. } => SpStatus::Io,
        Error::Format { .. } => SpStatus::Format,
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning panics into [`SpStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), SpStatus>) -> SpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SpStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(SpStatus::Panic, msg)
        }
    }
}

trait IntoStatus<T> {
    fn status(self) -> Result<T, SpStatus>;
}

impl<T> IntoStatus<T> for subpel::Result<T> {
    fn status(self) -> Result<T, SpStatus> {
        self.map_err(from_error)
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, SpStatus> {
    p.as_ref()
        .ok_or_else(|| fail(SpStatus::NullPointer, format!("`{name}` is null")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, SpStatus> {
    p.as_mut()
        .ok_or_else(|| fail(SpStatus::NullPointer, format!("`{name}` is null")))
}

unsafe fn path_arg(p: *const c_char, name: &str) -> Result<PathBuf, SpStatus> {
    if p.is_null() {
        return Err(fail(SpStatus::NullPointer, format!("`{name}` is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(PathBuf::from)
        .map_err(|_| fail(SpStatus::InvalidArgument, format!("`{name}` is not UTF-8")))
}

unsafe fn copy_out(src: &[f64], out: *mut f64, out_len: usize) -> Result<(), SpStatus> {
    if out.is_null() {
        return Err(fail(SpStatus::NullPointer, "`out` is null"));
    }
    if out_len < src.len() {
        return Err(fail(
            SpStatus::BufferTooSmall,
            format!("need {} values, buffer holds {out_len}", src.len()),
        ));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

fn quant(delta: u32) -> QuantSpec {
    if delta == 0 {
        QuantSpec::Infinite
    } else {
        QuantSpec::Finite(delta)
    }
}

/// Message of the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn sp_status_name(status: SpStatus) -> *const c_char {
    let s: &'static CStr = match status {
        SpStatus::Ok => c"ok",
        SpStatus::NullPointer => c"null pointer",
        SpStatus::InvalidArgument => c"invalid argument",
        SpStatus::Contract => c"contract violation",
        SpStatus::Io => c"i/o error",
        SpStatus::Format => c"malformed input",
        SpStatus::BufferTooSmall => c"buffer too small",
        SpStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

#[no_mangle]
pub extern "C" fn sp_version() -> *const c_char {
    static VERSION: &CStr =
        match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
            Ok(v) => v,
            Err(_) => c"",
        };
    VERSION.as_ptr()
}

/// Writes the `taps` coefficients of the filter for fraction `s` into `out`.
#[no_mangle]
pub unsafe extern "C" fn sp_filter_derive(
    kind: SpFilterKind,
    taps: usize,
    normalize: bool,
    s: f64,
    out: *mut f64,
    out_len: usize,
) -> SpStatus {
    guard(|| {
        let spec = FilterSpec::new(kind.into(), taps, normalize).status()?;
        if !(0.0..1.0).contains(&s) {
            return Err(fail(
                SpStatus::InvalidArgument,
                format!("fraction {s} outside [0, 1)"),
            ));
        }
        copy_out(&spec.derive(s).coefficients, out, out_len)
    })
}

#[no_mangle]
pub unsafe extern "C" fn sp_filter_table_new(
    kind: SpFilterKind,
    taps: usize,
    normalize: bool,
    delta: u32,
    out: *mut *mut SpFilterTable,
) -> SpStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let spec = FilterSpec::new(kind.into(), taps, normalize).status()?;
        let table = subpel::filter_bank::build_filter_table(spec, delta).status()?;
        *out = boxed(SpFilterTable(table));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn sp_filter_table_coefficient_count(table: *const SpFilterTable) -> usize {
    table.as_ref().map_or(0, |t| t.0.coefficient_count())
}

/// Copies the taps of entry `q` (fraction `q / delta`).
#[no_mangle]
pub unsafe extern "C" fn sp_filter_table_get(
    table: *const SpFilterTable,
    q: u32,
    out: *mut f64,
    out_len: usize,
) -> SpStatus {
    guard(|| {
        let table = &deref(table, "table")?.0;
        if q >= table.delta() {
            return Err(fail(
                SpStatus::InvalidArgument,
                format!("index {q} outside table of {}", table.delta()),
            ));
        }
        copy_out(table.taps_for(q), out, out_len)
    })
}

#[no_mangle]
pub unsafe extern "C" fn sp_filter_table_free(table: *mut SpFilterTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Builds a frame from `channels` consecutive planes of `width * height`
/// samples each.
#[no_mangle]
pub unsafe extern "C" fn sp_frame_from_planar(
    width: usize,
    height: usize,
    channels: usize,
    data: *const f64,
    len: usize,
    out: *mut *mut SpFrame,
) -> SpStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        if data.is_null() {
            return Err(fail(SpStatus::NullPointer, "`data` is null"));
        }
        let plane_len = width * height;
        if channels == 0 || len != plane_len * channels {
            return Err(fail(
                SpStatus::Contract,
                format!("{len} samples do not form {channels} planes of {width}x{height}"),
            ));
        }
        let data = std::slice::from_raw_parts(data, len);
        let planes = data.chunks_exact(plane_len).map(<[f64]>::to_vec).collect();
        *out = boxed(SpFrame(Frame::new(width, height, planes, 8).status()?));
        Ok(())
    })
}

/// Reads frame `index` of a raw YUV file as a 4:4:4 frame.
#[no_mangle]
pub unsafe extern "C" fn sp_frame_read_yuv(
    path: *const c_char,
    width: usize,
    height: usize,
    bit_depth: u8,
    chroma_420: bool,
    index: usize,
    out: *mut *mut SpFrame,
) -> SpStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let path = path_arg(path, "path")?;
        let chroma = if chroma_420 {
            Chroma::Yuv420
        } else {
            Chroma::Yuv444
        };
        let spec = RawVideoSpec::new(
            width,
            height,
            BitDepth::from_bits(bit_depth).status()?,
            chroma,
            0,
        )
        .status()?;
        *out = boxed(SpFrame(read_yuv(path, &spec, index).status()?));
        Ok(())
    })
}

/// Writes a three-channel frame as one 4:4:4 raw frame.
#[no_mangle]
pub unsafe extern "C" fn sp_frame_write_yuv(
    frame: *const SpFrame,
    path: *const c_char,
    bit_depth: u8,
) -> SpStatus {
    guard(|| {
        let frame = &deref(frame, "frame")?.0;
        let path = path_arg(path, "path")?;
        let spec = RawVideoSpec::new(
            frame.width(),
            frame.height(),
            BitDepth::from_bits(bit_depth).status()?,
            Chroma::Yuv444,
            1,
        )
        .status()?;
        write_yuv(frame, &spec, path).status()
    })
}

#[no_mangle]
pub unsafe extern "C" fn sp_frame_width(frame: *const SpFrame) -> usize {
    frame.as_ref().map_or(0, |f| f.0.width())
}

#[no_mangle]
pub unsafe extern "C" fn sp_frame_height(frame: *const SpFrame) -> usize {
    frame.as_ref().map_or(0, |f| f.0.height())
}

#[no_mangle]
pub unsafe extern "C" fn sp_frame_channels(frame: *const SpFrame) -> usize {
    frame.as_ref().map_or(0, |f| f.0.channels())
}

#[no_mangle]
pub unsafe extern "C" fn sp_frame_copy_plane(
    frame: *const SpFrame,
    channel: usize,
    out: *mut f64,
    out_len: usize,
) -> SpStatus {
    guard(|| {
        let frame = &deref(frame, "frame")?.0;
        if channel >= frame.channels() {
            return Err(fail(
                SpStatus::InvalidArgument,
                format!("channel {channel} of {}", frame.channels()),
            ));
        }
        copy_out(frame.plane(channel), out, out_len)
    })
}

#[no_mangle]
pub unsafe extern "C" fn sp_frame_free(frame: *mut SpFrame) {
    if !frame.is_null() {
        drop(Box::from_raw(frame));
    }
}

/// Builds a field from `count` `(dc, dr)` pairs stored as `2 * count`
/// doubles in block row-major order.
#[no_mangle]
pub unsafe extern "C" fn sp_motion_field_new(
    width: usize,
    height: usize,
    block_size: usize,
    vectors: *const f64,
    count: usize,
    out: *mut *mut SpMotionField,
) -> SpStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        if vectors.is_null() && count > 0 {
            return Err(fail(SpStatus::NullPointer, "`vectors` is null"));
        }
        let pairs = if count == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(vectors, 2 * count)
        };
        let vectors = pairs
            .chunks_exact(2)
            .map(|p| MotionVector::new(p[0], p[1]))
            .collect();
        *out = boxed(SpMotionField(
            MotionField::new(width, height, block_size, vectors).status()?,
        ));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn sp_motion_field_read_mvf(
    path: *const c_char,
    out: *mut *mut SpMotionField,
) -> SpStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let path = path_arg(path, "path")?;
        *out = boxed(SpMotionField(read_mvf(path).status()?));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn sp_motion_field_write_mvf(
    field: *const SpMotionField,
    path: *const c_char,
) -> SpStatus {
    guard(|| {
        let field = &deref(field, "field")?.0;
        write_mvf(field, path_arg(path, "path")?).status()
    })
}

#[no_mangle]
pub unsafe extern "C" fn sp_motion_field_block_size(field: *const SpMotionField) -> usize {
    field.as_ref().map_or(0, |f| f.0.block_size())
}

#[no_mangle]
pub unsafe extern "C" fn sp_motion_field_free(field: *mut SpMotionField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Warp settings. `delta == 0` selects unquantized motion; otherwise a
/// filter table with `delta` entries is precomputed.
#[no_mangle]
pub unsafe extern "C" fn sp_warp_config_new(
    kind: SpFilterKind,
    taps: usize,
    normalize: bool,
    delta: u32,
    out: *mut *mut SpWarpConfig,
) -> SpStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let spec = FilterSpec::new(kind.into(), taps, normalize).status()?;
        *out = boxed(SpWarpConfig(WarpConfig::new(spec, quant(delta))));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn sp_warp_config_free(config: *mut SpWarpConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

unsafe fn finish_warp(
    result: subpel::Result<(Frame, subpel::MacCounter)>,
    out_frame: &mut *mut SpFrame,
    out_macs: *mut SpMacCount,
) -> Result<(), SpStatus> {
    let (frame, counter) = result.status()?;
    if let Some(macs) = out_macs.as_mut() {
        *macs = SpMacCount {
            total_macs: counter.total_macs,
            pixels: counter.pixels,
        };
    }
    *out_frame = boxed(SpFrame(frame));
    Ok(())
}

/// Block-based warp; `out_macs` may be null.
#[no_mangle]
pub unsafe extern "C" fn sp_warp_block(
    frame: *const SpFrame,
    field: *const SpMotionField,
    config: *const SpWarpConfig,
    out_frame: *mut *mut SpFrame,
    out_macs: *mut SpMacCount,
) -> SpStatus {
    guard(|| {
        let out_frame = out_ptr(out_frame, "out_frame")?;
        let (frame, field, config) = (
            deref(frame, "frame")?,
            deref(field, "field")?,
            deref(config, "config")?,
        );
        finish_warp(
            warp_block(&frame.0, &field.0, &config.0),
            out_frame,
            out_macs,
        )
    })
}

/// Pixel-wise warp; the field must have block size 1.
#[no_mangle]
pub unsafe extern "C" fn sp_warp_dense(
    frame: *const SpFrame,
    field: *const SpMotionField,
    config: *const SpWarpConfig,
    out_frame: *mut *mut SpFrame,
    out_macs: *mut SpMacCount,
) -> SpStatus {
    guard(|| {
        let out_frame = out_ptr(out_frame, "out_frame")?;
        let (frame, field, config) = (
            deref(frame, "frame")?,
            deref(field, "field")?,
            deref(config, "config")?,
        );
        finish_warp(
            warp_dense(&frame.0, &field.0, &config.0),
            out_frame,
            out_macs,
        )
    })
}

/// `alpha * warp(ref0) + (1 - alpha) * warp(ref1)`.
#[no_mangle]
pub unsafe extern "C" fn sp_predict_bidir(
    ref0: *const SpFrame,
    field0: *const SpMotionField,
    ref1: *const SpFrame,
    field1: *const SpMotionField,
    alpha: f64,
    config: *const SpWarpConfig,
    out_frame: *mut *mut SpFrame,
    out_macs: *mut SpMacCount,
) -> SpStatus {
    guard(|| {
        let out_frame = out_ptr(out_frame, "out_frame")?;
        let result = predict_bidir(
            &deref(ref0, "ref0")?.0,
            &deref(field0, "field0")?.0,
            &deref(ref1, "ref1")?.0,
            &deref(field1, "field1")?.0,
            &BlendWeights::Scalar(alpha),
            &deref(config, "config")?.0,
        );
        finish_warp(result, out_frame, out_macs)
    })
}

/// Channel-averaged PSNR in dB on the [0, 1] scale; `+inf` when equal.
#[no_mangle]
pub unsafe extern "C" fn sp_psnr(
    a: *const SpFrame,
    b: *const SpFrame,
    out_db: *mut f64,
) -> SpStatus {
    guard(|| {
        let out = out_ptr(out_db, "out_db")?;
        *out = psnr(&deref(a, "a")?.0, &deref(b, "b")?.0)
            .status()?
            .psnr_avg;
        Ok(())
    })
}

/// Block warp cost per pixel as the reduced fraction `num / den`.
#[no_mangle]
pub unsafe extern "C" fn sp_complexity_c2d_block(
    taps: usize,
    block_size: usize,
    out_num: *mut u64,
    out_den: *mut u64,
) -> SpStatus {
    guard(|| {
        let num = out_ptr(out_num, "out_num")?;
        let den = out_ptr(out_den, "out_den")?;
        let r = c_2d_block(taps, block_size).status()?;
        *num = *r.numer();
        *den = *r.denom();
        Ok(())
    })
}
