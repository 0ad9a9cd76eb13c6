use std::ffi::{c_char, CStr, CString};
use std::ptr;

use ici_ffi::*;

struct Handle(*mut IciScenario);

impl Drop for Handle {
    fn drop(&mut self) {
        unsafe { ici_scenario_free(self.0) }
    }
}

fn scenario(json: &str) -> Handle {
    let text = CString::new(json).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ici_scenario_new(text.as_ptr(), &mut h) }, IciStatus::Ok);
    assert!(!h.is_null());
    Handle(h)
}

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    unsafe { ici_last_error_message(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_owned()
}

fn rings(h: &Handle) -> usize {
    let mut k = 0;
    assert_eq!(unsafe { ici_ring_count(h.0, &mut k) }, IciStatus::Ok);
    k
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(ici_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn default_scenario_pmfs_sum_to_one() {
    let h = scenario("");
    let k = rings(&h);
    assert_eq!(k, 10);
    for (scheme, slot) in [
        (IciScheme::Greedy, 0),
        (IciScheme::ProportionalFair, 0),
        (IciScheme::RoundRobin, 0),
        (IciScheme::LocationRoundRobin, 4),
        (IciScheme::GreedyRoundRobin, 3),
    ] {
        let mut pmf = vec![0.0; k];
        assert_eq!(unsafe { ici_location_pmf(h.0, scheme, slot, pmf.as_mut_ptr(), k) }, IciStatus::Ok);
        assert!((pmf.iter().sum::<f64>() - 1.0).abs() < 1e-9, "{scheme:?}");
    }
}

#[test]
fn metrics_have_expected_order() {
    let h = scenario(r#"{"interferers": 3}"#);
    let cap = |s| {
        let mut c = f64::NAN;
        assert_eq!(unsafe { ici_capacity(h.0, s, 0, &mut c) }, IciStatus::Ok);
        c
    };
    assert!(cap(IciScheme::Greedy) > cap(IciScheme::ProportionalFair));
    assert!(cap(IciScheme::ProportionalFair) > cap(IciScheme::RoundRobin));

    let mut f = f64::NAN;
    assert_eq!(unsafe { ici_fairness(h.0, IciScheme::RoundRobin, 0, &mut f) }, IciStatus::Ok);
    assert!((f - 1.0).abs() < 1e-9);

    let qs = [0.1, 1.0, 10.0];
    let mut out = [f64::NAN; 3];
    let st = unsafe { ici_outage(h.0, IciScheme::RoundRobin, 0, qs.as_ptr(), 3, out.as_mut_ptr()) };
    assert_eq!(st, IciStatus::Ok);
    assert!(out[0] < out[1] && out[1] < out[2] && out[2] <= 1.0);
}

#[test]
fn interference_cdf_brackets_its_mean() {
    let h = scenario("");
    let mut mean = f64::NAN;
    assert_eq!(unsafe { ici_interference_mean(h.0, IciScheme::Greedy, 0, &mut mean) }, IciStatus::Ok);
    let xs = [mean * 1e-3, mean, mean * 1e3];
    let mut f = [f64::NAN; 3];
    let st = unsafe { ici_interference_cdf(h.0, IciScheme::Greedy, 0, xs.as_ptr(), 3, f.as_mut_ptr()) };
    assert_eq!(st, IciStatus::Ok);
    assert!(f[0] < 0.01 && f[1] > 0.2 && f[1] < 0.9 && f[2] > 0.999, "{f:?}");
}

#[test]
fn errors_map_to_codes_and_messages() {
    let mut h = ptr::null_mut();
    let bad = CString::new(r#"{"beta": "steep"}"#).unwrap();
    assert_eq!(unsafe { ici_scenario_new(bad.as_ptr(), &mut h) }, IciStatus::Parse);
    assert!(h.is_null());
    assert!(last_error().contains("beta"), "{}", last_error());

    let bad = CString::new(r#"{"radius": -1}"#).unwrap();
    assert_eq!(unsafe { ici_scenario_new(bad.as_ptr(), &mut h) }, IciStatus::InvalidConfig);
    assert_eq!(unsafe { ici_scenario_new(ptr::null(), &mut h) }, IciStatus::NullPointer);

    let s = scenario("");
    let mut c = 0.0;
    assert_eq!(unsafe { ici_capacity(s.0, IciScheme::GreedyRoundRobin, 0, &mut c) }, IciStatus::Domain);
    assert_eq!(unsafe { ici_capacity(ptr::null(), IciScheme::Greedy, 0, &mut c) }, IciStatus::NullPointer);
    let mut small = [0.0; 3];
    let st = unsafe { ici_location_pmf(s.0, IciScheme::Greedy, 0, small.as_mut_ptr(), 3) };
    assert_eq!(st, IciStatus::BufferTooSmall);

    assert_eq!(unsafe { ici_capacity(s.0, IciScheme::Greedy, 0, &mut c) }, IciStatus::Ok);
    assert_eq!(last_error(), "");
}

#[test]
fn error_message_truncates() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ici_scenario_new(ptr::null(), &mut h) }, IciStatus::NullPointer);
    let mut buf = [0x7f as c_char; 4];
    let full = unsafe { ici_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(full > 3);
    assert_eq!(buf[3], 0);
    assert_eq!(unsafe { ici_last_error_message(ptr::null_mut(), 0) }, full);
}
