use std::ffi::{CStr, CString};
use std::ptr;

use subpel_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(sp_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn frame(width: usize, height: usize, data: &[f64]) -> *mut SpFrame {
    let mut out = ptr::null_mut();
    let st = unsafe { sp_frame_from_planar(width, height, 1, data.as_ptr(), data.len(), &mut out) };
    assert_eq!(st, SpStatus::Ok, "{}", last_error());
    out
}

fn field(width: usize, height: usize, block: usize, pairs: &[f64]) -> *mut SpMotionField {
    let mut out = ptr::null_mut();
    let st = unsafe {
        sp_motion_field_new(
            width,
            height,
            block,
            pairs.as_ptr(),
            pairs.len() / 2,
            &mut out,
        )
    };
    assert_eq!(st, SpStatus::Ok, "{}", last_error());
    out
}

fn config(kind: SpFilterKind, taps: usize, delta: u32) -> *mut SpWarpConfig {
    let mut out = ptr::null_mut();
    let st = unsafe { sp_warp_config_new(kind, taps, true, delta, &mut out) };
    assert_eq!(st, SpStatus::Ok, "{}", last_error());
    out
}

fn ramp(width: usize, height: usize) -> Vec<f64> {
    (0..width * height)
        .map(|i| {
            0.2 + 0.6 * ((i % width) as f64 + 0.5 * (i / width) as f64) / (width + height) as f64
        })
        .collect()
}

#[test]
fn derive_cubic_midpoint() {
    let mut buf = [0.0; 4];
    let st = unsafe {
        sp_filter_derive(
            SpFilterKind::Polynomial,
            4,
            true,
            0.5,
            buf.as_mut_ptr(),
            buf.len(),
        )
    };
    assert_eq!(st, SpStatus::Ok);
    let expected = [-0.09375, 0.59375, 0.59375, -0.09375];
    for (a, b) in buf.iter().zip(expected) {
        assert!((a - b).abs() < 1e-15, "{buf:?}");
    }
}

#[test]
fn derive_rejects_unsupported_and_small_buffers() {
    let mut buf = [0.0; 8];
    let st =
        unsafe { sp_filter_derive(SpFilterKind::Polynomial, 8, true, 0.5, buf.as_mut_ptr(), 8) };
    assert_eq!(st, SpStatus::InvalidArgument);
    assert!(!last_error().is_empty());

    let st = unsafe {
        sp_filter_derive(
            SpFilterKind::WindowedSinc,
            8,
            true,
            0.5,
            buf.as_mut_ptr(),
            4,
        )
    };
    assert_eq!(st, SpStatus::BufferTooSmall);

    let st =
        unsafe { sp_filter_derive(SpFilterKind::WindowedSinc, 8, true, 0.5, ptr::null_mut(), 8) };
    assert_eq!(st, SpStatus::NullPointer);
}

#[test]
fn filter_table_round_trip() {
    let mut table = ptr::null_mut();
    let st = unsafe { sp_filter_table_new(SpFilterKind::WindowedSinc, 8, true, 64, &mut table) };
    assert_eq!(st, SpStatus::Ok);
    assert_eq!(unsafe { sp_filter_table_coefficient_count(table) }, 512);

    let mut taps = [0.0; 8];
    assert_eq!(
        unsafe { sp_filter_table_get(table, 0, taps.as_mut_ptr(), 8) },
        SpStatus::Ok
    );
    assert_eq!(taps, [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);

    assert_eq!(
        unsafe { sp_filter_table_get(table, 16, taps.as_mut_ptr(), 8) },
        SpStatus::Ok
    );
    let mut direct = [0.0; 8];
    unsafe {
        sp_filter_derive(
            SpFilterKind::WindowedSinc,
            8,
            true,
            0.25,
            direct.as_mut_ptr(),
            8,
        )
    };
    assert_eq!(taps, direct);

    assert_eq!(
        unsafe { sp_filter_table_get(table, 64, taps.as_mut_ptr(), 8) },
        SpStatus::InvalidArgument
    );
    unsafe { sp_filter_table_free(table) };
}

#[test]
fn zero_motion_warp_is_identity_with_counted_macs() {
    let (w, h) = (12, 8);
    let data = ramp(w, h);
    let src = frame(w, h, &data);
    let mvf = field(w, h, 4, &[0.0; 2 * 3 * 2]);
    let cfg = config(SpFilterKind::WindowedSinc, 8, 64);

    let mut out = ptr::null_mut();
    let mut macs = SpMacCount::default();
    let st = unsafe { sp_warp_block(src, mvf, cfg, &mut out, &mut macs) };
    assert_eq!(st, SpStatus::Ok, "{}", last_error());

    let mut plane = vec![0.0; w * h];
    assert_eq!(
        unsafe { sp_frame_copy_plane(out, 0, plane.as_mut_ptr(), plane.len()) },
        SpStatus::Ok
    );
    assert_eq!(plane, data);
    assert_eq!(macs.pixels, (w * h) as u64);
    // 2N + (N^2 - N)/B with N = 8, B = 4
    assert_eq!(macs.total_macs, 30 * (w * h) as u64);

    let mut db = 0.0;
    assert_eq!(unsafe { sp_psnr(src, out, &mut db) }, SpStatus::Ok);
    assert!(db.is_infinite());

    unsafe {
        sp_frame_free(out);
        sp_frame_free(src);
        sp_motion_field_free(mvf);
        sp_warp_config_free(cfg);
    }
}

#[test]
fn block_and_dense_agree() {
    let (w, h) = (9, 7);
    let data = ramp(w, h);
    let src = frame(w, h, &data);
    let blk = field(w, h, 8, &[0.3, -1.7, 0.3, -1.7]);
    let dense_pairs: Vec<f64> = (0..w * h).flat_map(|_| [0.3, -1.7]).collect();
    let dense = field(w, h, 1, &dense_pairs);
    let cfg = config(SpFilterKind::Polynomial, 4, 32);

    let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(
            sp_warp_block(src, blk, cfg, &mut a, ptr::null_mut()),
            SpStatus::Ok
        );
        assert_eq!(
            sp_warp_dense(src, dense, cfg, &mut b, ptr::null_mut()),
            SpStatus::Ok
        );
    }
    let mut pa = vec![0.0; w * h];
    let mut pb = vec![0.0; w * h];
    unsafe {
        sp_frame_copy_plane(a, 0, pa.as_mut_ptr(), pa.len());
        sp_frame_copy_plane(b, 0, pb.as_mut_ptr(), pb.len());
    }
    assert_eq!(pa, pb);

    let mut bad = ptr::null_mut();
    assert_eq!(
        unsafe { sp_warp_dense(src, blk, cfg, &mut bad, ptr::null_mut()) },
        SpStatus::Contract
    );
    assert!(bad.is_null());

    unsafe {
        for f in [a, b, src] {
            sp_frame_free(f);
        }
        sp_motion_field_free(blk);
        sp_motion_field_free(dense);
        sp_warp_config_free(cfg);
    }
}

#[test]
fn bidirectional_prediction_counts_both_warps() {
    let (w, h) = (8, 8);
    let data = ramp(w, h);
    let r0 = frame(w, h, &data);
    let r1 = frame(w, h, &data);
    let mv = field(w, h, 4, &[0.5; 8]);
    let cfg = config(SpFilterKind::Polynomial, 2, 0);
    let mut out = ptr::null_mut();
    let mut macs = SpMacCount::default();
    let st = unsafe { sp_predict_bidir(r0, mv, r1, mv, 0.5, cfg, &mut out, &mut macs) };
    assert_eq!(st, SpStatus::Ok, "{}", last_error());
    // two warps at 2N + (N^2 - N)/B = 4.5 each
    assert_eq!(macs.total_macs, 9 * (w * h) as u64);
    assert_eq!(macs.pixels, (w * h) as u64);
    unsafe {
        sp_frame_free(out);
        sp_frame_free(r0);
        sp_frame_free(r1);
        sp_motion_field_free(mv);
        sp_warp_config_free(cfg);
    }
}

#[test]
fn complexity_fraction() {
    let (mut num, mut den) = (0, 0);
    assert_eq!(
        unsafe { sp_complexity_c2d_block(2, 8, &mut num, &mut den) },
        SpStatus::Ok
    );
    assert_eq!((num, den), (17, 4));
    assert_eq!(
        unsafe { sp_complexity_c2d_block(12, 1, &mut num, &mut den) },
        SpStatus::Ok
    );
    assert_eq!((num, den), (156, 1));
    assert_eq!(
        unsafe { sp_complexity_c2d_block(0, 1, &mut num, &mut den) },
        SpStatus::Contract
    );
}

#[test]
fn files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mvf_path = CString::new(dir.path().join("m.mvf").to_str().unwrap()).unwrap();
    let yuv_path = CString::new(dir.path().join("f.yuv").to_str().unwrap()).unwrap();

    let mv = field(8, 4, 4, &[0.25, -0.5, 1.75, 3.0]);
    assert_eq!(
        unsafe { sp_motion_field_write_mvf(mv, mvf_path.as_ptr()) },
        SpStatus::Ok
    );
    let mut back = ptr::null_mut();
    assert_eq!(
        unsafe { sp_motion_field_read_mvf(mvf_path.as_ptr(), &mut back) },
        SpStatus::Ok
    );
    assert_eq!(unsafe { sp_motion_field_block_size(back) }, 4);

    let planes: Vec<f64> = (0..3 * 32).map(|i| (i % 256) as f64 / 255.0).collect();
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(
            sp_frame_from_planar(8, 4, 3, planes.as_ptr(), planes.len(), &mut f),
            SpStatus::Ok
        );
        assert_eq!(sp_frame_write_yuv(f, yuv_path.as_ptr(), 8), SpStatus::Ok);
    }
    let mut g = ptr::null_mut();
    let st = unsafe { sp_frame_read_yuv(yuv_path.as_ptr(), 8, 4, 8, false, 0, &mut g) };
    assert_eq!(st, SpStatus::Ok, "{}", last_error());
    assert_eq!(
        unsafe { (sp_frame_width(g), sp_frame_height(g), sp_frame_channels(g)) },
        (8, 4, 3)
    );
    let mut db = 0.0;
    unsafe { sp_psnr(f, g, &mut db) };
    assert!(db.is_infinite());

    let missing = CString::new(dir.path().join("nope.mvf").to_str().unwrap()).unwrap();
    let mut none = ptr::null_mut();
    assert_eq!(
        unsafe { sp_motion_field_read_mvf(missing.as_ptr(), &mut none) },
        SpStatus::Io
    );
    assert!(last_error().contains("nope.mvf"));

    unsafe {
        sp_motion_field_free(mv);
        sp_motion_field_free(back);
        sp_frame_free(f);
        sp_frame_free(g);
    }
}

#[test]
fn null_handles_are_reported() {
    let mut out = ptr::null_mut();
    let st = unsafe {
        sp_warp_block(
            ptr::null(),
            ptr::null(),
            ptr::null(),
            &mut out,
            ptr::null_mut(),
        )
    };
    assert_eq!(st, SpStatus::NullPointer);
    assert_eq!(unsafe { sp_frame_width(ptr::null()) }, 0);
    unsafe {
        sp_frame_free(ptr::null_mut());
        sp_motion_field_free(ptr::null_mut());
        sp_warp_config_free(ptr::null_mut());
        sp_filter_table_free(ptr::null_mut());
    }
}

#[test]
fn status_names_and_version() {
    let name = unsafe { CStr::from_ptr(sp_status_name(SpStatus::BufferTooSmall)) };
    assert_eq!(name.to_str().unwrap(), "buffer too small");
    let v = unsafe { CStr::from_ptr(sp_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
