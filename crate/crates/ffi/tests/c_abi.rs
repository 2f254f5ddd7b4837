use std::ffi::{CStr, CString};
use std::ptr;

use xbound_ffi::*;

fn last_error() -> String {
    let p = xb_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn bell_parts() -> ([f64; 16], [f64; 16]) {
    let mut re = [0.0; 16];
    for (r, c) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        re[r * 4 + c] = 0.5;
    }
    (re, [0.0; 16])
}

struct Handle(*mut XbDensity);

impl Drop for Handle {
    fn drop(&mut self) {
        unsafe { xb_density_free(self.0) }
    }
}

#[test]
fn bell_state_round_trip() {
    let (re, im) = bell_parts();
    let mut h = ptr::null_mut();
    let s = unsafe { xb_density_new(2, 2, re.as_ptr(), im.as_ptr(), &mut h) };
    assert_eq!(s, XbStatus::Ok);
    let h = Handle(h);

    let (mut a, mut b) = (0, 0);
    assert_eq!(
        unsafe { xb_density_dims(h.0, &mut a, &mut b) },
        XbStatus::Ok
    );
    assert_eq!((a, b), (2, 2));

    let mut r = XbBoundReport::default();
    assert_eq!(unsafe { xb_x_lower_bound(h.0, &mut r) }, XbStatus::Ok);
    assert!((r.bound - 1.0).abs() < 1e-12);
    assert!((r.exact - 1.0).abs() < 1e-12);

    let mut w = 0.0;
    assert_eq!(
        unsafe { xb_wootters_concurrence(h.0, &mut w) },
        XbStatus::Ok
    );
    assert!((w - 1.0).abs() < 1e-12);

    let mut g = XbGeneralizedBound::default();
    assert_eq!(
        unsafe { xb_generalized_lower_bound(h.0, &mut g) },
        XbStatus::Ok
    );
    assert!(g.has_pair);
    assert!((g.bound - 1.0).abs() < 1e-12);
    assert_eq!((g.i, g.j, g.k, g.l, g.orientation), (0, 1, 0, 1, 0));

    let mut c = 0.0;
    assert_eq!(
        unsafe { xb_pair_bound(h.0, 0, 1, 0, 1, false, &mut c) },
        XbStatus::Ok
    );
    assert!((c - 1.0).abs() < 1e-12);
}

#[test]
fn validation_errors_map_to_status_codes() {
    let (mut re, im) = bell_parts();
    re[1] = 0.3;
    let mut h = ptr::null_mut();
    let s = unsafe { xb_density_new(2, 2, re.as_ptr(), im.as_ptr(), &mut h) };
    assert_eq!(s, XbStatus::NotHermitian);
    assert!(h.is_null());
    assert!(last_error().contains("ermitian"), "{}", last_error());

    let (mut re, im) = bell_parts();
    re[0] = 1.0;
    let s = unsafe { xb_density_new(2, 2, re.as_ptr(), im.as_ptr(), &mut h) };
    assert_eq!(s, XbStatus::TraceNotOne);

    let mut re = [0.0; 16];
    re[0] = 1.5;
    re[15] = -0.5;
    let s = unsafe { xb_density_new(2, 2, re.as_ptr(), [0.0; 16].as_ptr(), &mut h) };
    assert_eq!(s, XbStatus::NotPositive);

    let s = unsafe { xb_density_new(2, 2, ptr::null(), ptr::null(), &mut h) };
    assert_eq!(s, XbStatus::NullPointer);
    assert!(h.is_null());
}

#[test]
fn null_handles_and_outputs_are_rejected() {
    let mut out = 0.0;
    assert_eq!(
        unsafe { xb_wootters_concurrence(ptr::null(), &mut out) },
        XbStatus::NullPointer
    );
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { xb_density_werner(0.5, &mut h) }, XbStatus::Ok);
    let h = Handle(h);
    assert_eq!(
        unsafe { xb_wootters_concurrence(h.0, ptr::null_mut()) },
        XbStatus::NullPointer
    );
    unsafe { xb_density_free(ptr::null_mut()) };
}

#[test]
fn wrong_dimensions_for_two_qubit_calls() {
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { xb_density_isotropic(3, 0.5, &mut h) },
        XbStatus::Ok
    );
    let h = Handle(h);
    let mut r = XbBoundReport::default();
    assert_eq!(
        unsafe { xb_x_lower_bound(h.0, &mut r) },
        XbStatus::WrongDimensions
    );

    let mut g = XbGeneralizedBound::default();
    assert_eq!(
        unsafe { xb_generalized_lower_bound(h.0, &mut g) },
        XbStatus::Ok
    );
    let mut closed = 0.0;
    assert_eq!(
        unsafe { xb_isotropic_bound(3, 0.5, &mut closed) },
        XbStatus::Ok
    );
    assert!((g.bound - closed).abs() < 1e-10);

    let mut c = 0.0;
    assert_eq!(
        unsafe { xb_pair_bound(h.0, 0, 3, 0, 1, false, &mut c) },
        XbStatus::IndexOutOfRange
    );
}

#[test]
fn parameter_ranges() {
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { xb_density_werner(1.5, &mut h) },
        XbStatus::OutOfRange
    );
    assert_eq!(
        unsafe { xb_density_isotropic(1, 0.5, &mut h) },
        XbStatus::WrongDimensions
    );
    let mut x = 0.0;
    assert_eq!(
        unsafe { xb_isotropic_exact_concurrence(3, -0.1, &mut x) },
        XbStatus::OutOfRange
    );
    assert_eq!(
        unsafe { xb_isotropic_exact_concurrence(3, 1.0, &mut x) },
        XbStatus::Ok
    );
    assert!((x - 2.0 / 3f64.sqrt()).abs() < 1e-15);
    let mut cert = XbCertificate::default();
    assert_eq!(
        unsafe { xb_certify_from_elements(0.5, -0.1, 0.1, &mut cert) },
        XbStatus::OutOfRange
    );
    let mut f = XbFuzzReport::default();
    assert_eq!(
        unsafe { xb_fuzz_inequality(0, 2, 2, 1, &mut f) },
        XbStatus::InvalidArgument
    );
}

#[test]
fn json_constructor() {
    let json = CString::new(
        r#"{"dimA":2,"dimB":2,"re":[[0.5,0,0,0.5],[0,0,0,0],[0,0,0,0],[0.5,0,0,0.5]],"im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#,
    )
    .unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { xb_density_from_json(json.as_ptr(), &mut h) },
        XbStatus::Ok
    );
    let h = Handle(h);
    let mut r = XbBoundReport::default();
    assert_eq!(unsafe { xb_x_lower_bound(h.0, &mut r) }, XbStatus::Ok);
    assert!((r.bound - 1.0).abs() < 1e-12);

    let bad = CString::new("{\"dimA\": 2").unwrap();
    let mut h2 = ptr::null_mut();
    assert_eq!(
        unsafe { xb_density_from_json(bad.as_ptr(), &mut h2) },
        XbStatus::ParseError
    );
    assert!(h2.is_null());
}

#[test]
fn oracles_through_the_boundary() {
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { xb_density_random(2, 2, 2, 11, &mut h) },
        XbStatus::Ok
    );
    let h = Handle(h);
    let mut w = 0.0;
    assert_eq!(
        unsafe { xb_wootters_concurrence(h.0, &mut w) },
        XbStatus::Ok
    );
    let mut roof = 0.0;
    assert_eq!(
        unsafe { xb_convex_roof_upper(h.0, 3, 2000, 0, &mut roof) },
        XbStatus::Ok
    );
    assert!(
        roof >= w - 1e-10 && roof - w < 5e-3,
        "roof {roof} wootters {w}"
    );

    let mut opt = XbBasisOptimum::default();
    assert_eq!(
        unsafe { xb_optimize_basis(h.0, 2, 500, 0, &mut opt) },
        XbStatus::Ok
    );
    assert!(opt.best_bound >= opt.original_bound - 1e-12);
    assert!(opt.best_bound <= opt.exact + 1e-10);

    let mut f = XbFuzzReport::default();
    assert_eq!(
        unsafe { xb_fuzz_inequality(200, 2, 2, 5, &mut f) },
        XbStatus::Ok
    );
    assert_eq!(f.trials, 200);
    assert_eq!(f.violations, 0);
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(xb_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/xbound.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 19);
    for name in exports {
        assert!(
            header.contains(&format!("{name}(")),
            "{name} missing from header"
        );
    }
}
