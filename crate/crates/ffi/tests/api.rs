use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use holoattr_ffi::*;

fn henon() -> *mut HaMap {
    ha_map_henon(0.75)
}

#[test]
fn fixed_point_of_henon() {
    let m = henon();
    let mut fp = std::mem::MaybeUninit::<HaFixedPoint>::uninit();
    let seed = [1.4, 0.0, 1.4, 0.0];
    let st = unsafe { ha_fixed_point(m, seed.as_ptr(), fp.as_mut_ptr()) };
    assert_eq!(st, HaStatus::Ok);
    let fp = unsafe { fp.assume_init() };
    assert!((fp.location[0] - 1.5).abs() < 1e-12 && (fp.location[2] - 1.5).abs() < 1e-12);
    assert_eq!(fp.classification, HaClassification::Saddle);
    let s5 = 5f64.sqrt();
    assert!((fp.eigenvalues[0] - (3.0 - s5) / 2.0).abs() < 1e-9);
    assert!((fp.eigenvalues[2] - (3.0 + s5) / 2.0).abs() < 1e-9);
    unsafe { ha_map_free(m) };
}

#[test]
fn map_json_round_trip_and_errors() {
    let json = CString::new(r#"{"steps":[{"kind":"linear","matrix":[[0.5,0],[0,0.5]]}]}"#).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ha_map_from_json(json.as_ptr(), &mut m) }, HaStatus::Ok);
    let mut out = [0.0; 4];
    let z = [1.0, 2.0, -4.0, 0.0];
    assert_eq!(unsafe { ha_map_apply(m, z.as_ptr(), out.as_mut_ptr()) }, HaStatus::Ok);
    assert_eq!(out, [0.5, 1.0, -2.0, 0.0]);

    let mut g = ptr::null_mut();
    let seed = [0.0; 4];
    assert_eq!(unsafe { ha_stable_graph(m, seed.as_ptr(), 0.1, &mut g) }, HaStatus::NotASaddle);
    assert!(g.is_null());
    let msg = unsafe { CStr::from_ptr(ha_last_error()) }.to_str().unwrap();
    assert!(msg.starts_with("NotASaddle"), "{msg}");
    unsafe { ha_map_free(m) };

    let bad = CString::new("{").unwrap();
    let mut m2 = ptr::null_mut();
    assert_eq!(unsafe { ha_map_from_json(bad.as_ptr(), &mut m2) }, HaStatus::MapFormat);
    assert!(m2.is_null());
    assert_eq!(unsafe { ha_map_from_json(ptr::null(), &mut m2) }, HaStatus::NullPointer);
    let name = unsafe { CStr::from_ptr(ha_status_name(HaStatus::BufferTooSmall)) };
    assert_eq!(name.to_str().unwrap(), "BufferTooSmall");
}

#[test]
fn stable_graph_handle() {
    let m = henon();
    let mut g = ptr::null_mut();
    let seed = [1.4, 0.0, 1.4, 0.0];
    assert_eq!(unsafe { ha_stable_graph(m, seed.as_ptr(), 0.1, &mut g) }, HaStatus::Ok);
    assert!(unsafe { ha_graph_residual(g) } < 1e-8);
    assert!(unsafe { ha_graph_iterations(g) } <= 60);
    let n = unsafe { ha_graph_len(g) };
    let mut buf = vec![0.0; 4 * n];
    let mut written = 0;
    assert_eq!(unsafe { ha_graph_points(g, buf.as_mut_ptr(), 1, &mut written) }, HaStatus::BufferTooSmall);
    assert_eq!(written, n);
    assert_eq!(unsafe { ha_graph_points(g, buf.as_mut_ptr(), n, &mut written) }, HaStatus::Ok);
    // first sample is the fixed point itself
    assert!((buf[0] - 1.5).abs() < 1e-9 && (buf[2] - 1.5).abs() < 1e-9);
    unsafe {
        ha_graph_free(g);
        ha_map_free(m);
        ha_graph_free(ptr::null_mut());
    }
}

#[test]
fn sphere_and_directions() {
    let (mut a, mut b) = (0.0, 0.0);
    assert_eq!(unsafe { ha_sphere_map(3, 0.5, 0.0, &mut a, &mut b) }, HaStatus::Ok);
    assert!((a - 0.2).abs() < 1e-15 && b == 0.0);
    assert_eq!(unsafe { ha_sphere_map(4, -0.25, 0.0, &mut a, &mut b) }, HaStatus::PoleHit);

    let mut count = 0;
    let mut buf = [HaDirection::default(); 4];
    assert_eq!(
        unsafe { ha_normal_form_directions(3.0, 0.0, buf.as_mut_ptr(), buf.len(), &mut count) },
        HaStatus::Ok
    );
    assert_eq!(count, 3);
    assert!(buf[..count].iter().all(|d| d.residual < 1e-10 && !d.degenerate));
}

#[test]
fn expansion_on_normal_form() {
    let json = CString::new(
        r#"{"volume_preserving":true,"steps":[
            {"kind":"shear_x","coeffs":[0,0,-1]},
            {"kind":"shear_y","coeffs":[0,0,1]},
            {"kind":"linear","matrix":[[1,0],[1,1]]},
            {"kind":"shear_x","coeffs":[0,0,1]},
            {"kind":"linear","matrix":[[1,0],[-1,1]]}]}"#,
    )
    .unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ha_map_from_json(json.as_ptr(), &mut m) }, HaStatus::Ok);
    let mut rep = HaExpansionReport::default();
    assert_eq!(unsafe { ha_expansion_check(m, 0.02, 500, 7, &mut rep) }, HaStatus::Ok);
    assert_eq!(rep.violations, 0);
    assert!(rep.admissible > 0);
    unsafe { ha_map_free(m) };
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/holoattr.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in ["ha_map_from_json", "ha_stable_graph", "ha_graph_free", "HA_STATUS_NOT_A_SADDLE"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use_header.c");
    std::fs::write(
        &src,
        "#include \"holoattr.h\"\nint main(void) { HaMap *m = ha_map_henon(0.75); ha_map_free(m); return (int)HA_STATUS_OK; }\n",
    )
    .unwrap();
    let Ok(status) = Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header.parent().unwrap())
        .arg(&src)
        .status()
    else {
        eprintln!("no C compiler; header syntax check skipped");
        return;
    };
    assert!(status.success());
}
