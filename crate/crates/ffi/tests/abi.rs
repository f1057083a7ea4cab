use std::ffi::{CStr, CString};
use std::ptr;

use idealstat_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    idealstat_string_free(s);
    out
}

#[test]
fn set_queries() {
    unsafe {
        let mut set = ptr::null_mut();
        let json = cs(r#"{"kind":"residue","mod":3,"res":1}"#);
        assert_eq!(idealstat_set_from_json(json.as_ptr(), &mut set), IdealstatStatus::Ok);
        let mut count = 0u64;
        assert_eq!(idealstat_set_count(set, 100, &mut count), IdealstatStatus::Ok);
        assert_eq!(count, (1..=100).filter(|n| n % 3 == 1).count() as u64);
        let mut member = -1;
        assert_eq!(idealstat_set_contains(set, 7, &mut member), IdealstatStatus::Ok);
        assert_eq!(member, 1);
        let mut cfg = ptr::null_mut();
        assert_eq!(idealstat_config_new(10_000, &mut cfg), IdealstatStatus::Ok);
        let mut report = ptr::null_mut();
        assert_eq!(idealstat_set_density(set, cfg, &mut report), IdealstatStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
        assert_eq!(v["value"]["den"], "3");
        idealstat_config_free(cfg);
        idealstat_set_free(set);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut set = ptr::null_mut();
        let bad = cs(r#"{"kind":"residue","mod":0,"res":0}"#);
        let st = idealstat_set_from_json(bad.as_ptr(), &mut set);
        assert_ne!(st, IdealstatStatus::Ok);
        assert!(set.is_null());
        assert!(!CStr::from_ptr(idealstat_last_error()).to_bytes().is_empty());
        assert_eq!(idealstat_set_from_json(ptr::null(), &mut set), IdealstatStatus::NullPointer);
        let mut cfg = ptr::null_mut();
        assert_eq!(idealstat_config_new(10, &mut cfg), IdealstatStatus::Validation);
        let mut count = 0;
        assert_eq!(idealstat_set_count(ptr::null(), 5, &mut count), IdealstatStatus::NullPointer);
        idealstat_set_free(ptr::null_mut());
    }
}

#[test]
fn membership_and_convergence() {
    unsafe {
        let mut cfg = ptr::null_mut();
        assert_eq!(idealstat_config_new(1_000_000, &mut cfg), IdealstatStatus::Ok);
        let (mut ideal, mut set) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(idealstat_ideal_parse(cs("summable").as_ptr(), &mut ideal), IdealstatStatus::Ok);
        assert_eq!(
            idealstat_set_from_json(cs(r#"{"kind":"intervals","gen":"squares"}"#).as_ptr(), &mut set),
            IdealstatStatus::Ok
        );
        let mut verdict = -1;
        assert_eq!(idealstat_ideal_decide(ideal, set, cfg, &mut verdict, ptr::null_mut()), IdealstatStatus::Ok);
        assert_eq!(verdict, IDEALSTAT_POSITIVE);

        let mut fin = ptr::null_mut();
        assert_eq!(idealstat_ideal_parse(cs("fin").as_ptr(), &mut fin), IdealstatStatus::Ok);
        let mut seq = ptr::null_mut();
        assert_eq!(idealstat_sequence_parse(cs("indicator:factorial").as_ptr(), &mut seq), IdealstatStatus::Ok);
        let mut outcome = -1;
        let mut report = ptr::null_mut();
        let st = idealstat_converge(
            IDEALSTAT_MODE_ISTAT,
            seq,
            fin,
            ptr::null(),
            cs("1").as_ptr(),
            cfg,
            &mut outcome,
            &mut report,
        );
        assert_eq!(st, IdealstatStatus::Ok);
        assert_eq!(outcome, IDEALSTAT_NEGATIVE);
        assert!(take(report).contains("\"outcome\""));

        let st = idealstat_converge(
            IDEALSTAT_MODE_IMU,
            seq,
            fin,
            ptr::null(),
            cs("1").as_ptr(),
            cfg,
            &mut outcome,
            ptr::null_mut(),
        );
        assert_eq!(st, IdealstatStatus::NullPointer);
        let mut mu = ptr::null_mut();
        assert_eq!(idealstat_submeasure_parse(cs("uniform").as_ptr(), &mut mu), IdealstatStatus::Ok);
        let st =
            idealstat_converge(IDEALSTAT_MODE_IMU, seq, fin, mu, cs("1").as_ptr(), cfg, &mut outcome, ptr::null_mut());
        assert_eq!(st, IdealstatStatus::Ok);
        assert_eq!(outcome, IDEALSTAT_NEGATIVE);

        idealstat_submeasure_free(mu);
        idealstat_sequence_free(seq);
        idealstat_ideal_free(fin);
        idealstat_ideal_free(ideal);
        idealstat_set_free(set);
        idealstat_config_free(cfg);
    }
}
