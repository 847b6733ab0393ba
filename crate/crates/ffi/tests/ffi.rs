use std::ffi::{CStr, CString};
use std::ptr;

use twcx_ffi::*;

const POINT: &str = r#"{
  "format": "twcx-bundle/1",
  "ring": {"kind": "rationals"},
  "spaces": {"pt": {"kind": "nerve", "truncation": 2,
                    "cover": {"points": ["p"], "sets": {"A": ["p"]}}}},
  "maps": {"id": {"source": "pt", "target": "pt", "components": [[0], [0], [0]]}},
  "twisted": {"E": {"space": "pt", "modules": [[[0, 1], [1, 1]]],
    "a": [
      {"p": 0, "q": 1, "simplex": "A", "degree": 0, "rows": 1, "cols": 1, "entries": ["1"]},
      {"p": 1, "q": 0, "simplex": "A,A", "degree": 0, "rows": 1, "cols": 1, "entries": ["1"]},
      {"p": 1, "q": 0, "simplex": "A,A", "degree": 1, "rows": 1, "cols": 1, "entries": ["1"]}
    ]}},
  "probes": {"P": {"objects": ["E"]}}
}"#;

fn take_string(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { twcx_string_free(s) };
    out
}

fn last_error() -> String {
    let p = twcx_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn parse_validate_and_read_report() {
    let json = CString::new(POINT).unwrap();
    let mut bundle = ptr::null_mut();
    assert_eq!(unsafe { twcx_bundle_parse(json.as_ptr(), &mut bundle) }, TwcxStatus::Ok);
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { twcx_validate(bundle, &mut report) }, TwcxStatus::Ok);
    assert_eq!(unsafe { twcx_report_passed(report) }, 1);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { twcx_report_json(report, &mut text) }, TwcxStatus::Ok);
    assert!(take_string(text).contains("\"passed\": true"));
    unsafe {
        twcx_report_free(report);
        twcx_bundle_free(bundle);
    }
}

#[test]
fn errors_map_to_codes_and_messages() {
    let bad = CString::new("{ not json").unwrap();
    let mut bundle = ptr::null_mut();
    assert_eq!(
        unsafe { twcx_bundle_parse(bad.as_ptr(), &mut bundle) },
        TwcxStatus::Parse
    );
    assert!(bundle.is_null());
    assert!(last_error().contains("line 1"));
    assert_eq!(
        unsafe { twcx_bundle_parse(ptr::null(), &mut bundle) },
        TwcxStatus::NullArgument
    );
    assert_eq!(unsafe { twcx_report_passed(ptr::null()) }, -1);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { twcx_generate(0, 91, &mut out) }, TwcxStatus::Structural);
}

#[test]
fn generated_bundle_round_trips_and_inverts() {
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { twcx_generate(3, 101, &mut json) }, TwcxStatus::Ok);
    let text = take_string(json);
    let c = CString::new(text.clone()).unwrap();
    let mut bundle = ptr::null_mut();
    assert_eq!(unsafe { twcx_bundle_parse(c.as_ptr(), &mut bundle) }, TwcxStatus::Ok);
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { twcx_bundle_to_json(bundle, &mut again) }, TwcxStatus::Ok);
    assert_eq!(take_string(again), text);

    let name = CString::new("weq").unwrap();
    let mut report = ptr::null_mut();
    assert_eq!(
        unsafe { twcx_ho_invert(bundle, name.as_ptr(), &mut report) },
        TwcxStatus::Ok
    );
    assert_eq!(unsafe { twcx_report_passed(report) }, 1);
    unsafe { twcx_report_free(report) };

    let probe = CString::new("P").unwrap();
    let mut report = ptr::null_mut();
    assert_eq!(
        unsafe { twcx_phi(bundle, ptr::null(), probe.as_ptr(), 2, &mut report) },
        TwcxStatus::Ok
    );
    assert_eq!(unsafe { twcx_report_passed(report) }, 1);
    unsafe {
        twcx_report_free(report);
        twcx_bundle_free(bundle);
    }
}

#[test]
fn wrong_degree_is_structural() {
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { twcx_generate(4, 0, &mut json) }, TwcxStatus::Ok);
    let c = CString::new(take_string(json)).unwrap();
    let mut bundle = ptr::null_mut();
    assert_eq!(unsafe { twcx_bundle_parse(c.as_ptr(), &mut bundle) }, TwcxStatus::Ok);
    let name = CString::new("rp1_E1E2").unwrap();
    let mut report = ptr::null_mut();
    assert_eq!(
        unsafe { twcx_ho_invert(bundle, name.as_ptr(), &mut report) },
        TwcxStatus::Structural
    );
    assert!(report.is_null());
    assert!(last_error().contains("degree 1"));
    unsafe { twcx_bundle_free(bundle) };
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/twcx.h")).unwrap();
    for f in [
        "twcx_bundle_parse",
        "twcx_bundle_load",
        "twcx_bundle_to_json",
        "twcx_bundle_free",
        "twcx_validate",
        "twcx_phi",
        "twcx_ho_invert",
        "twcx_report_passed",
        "twcx_report_json",
        "twcx_report_free",
        "twcx_generate",
        "twcx_string_free",
        "twcx_last_error",
        "twcx_version",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("typedef struct TwcxBundle TwcxBundle;"));
}

#[test]
fn header_compiles_as_c_when_a_compiler_is_present() {
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include/twcx.h");
    match std::process::Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", include])
        .status()
    {
        Ok(status) => assert!(status.success()),
        Err(_) => eprintln!("no C compiler; header syntax not checked"),
    }
}
