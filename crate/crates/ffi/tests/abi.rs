use std::ffi::{c_char, CStr, CString};
use std::ptr;

use nsd_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    nsd_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = nsd_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap().to_string()
}

unsafe fn set(json: &str) -> *mut NsdIndexSet {
    let mut out = ptr::null_mut();
    assert_eq!(nsd_index_set_from_json(c(json).as_ptr(), &mut out), NsdStatus::Ok);
    out
}

#[test]
fn index_sets_through_the_abi() {
    unsafe {
        let evens = set(r#"{"period":2,"residues":[0]}"#);
        let div3 = set(r#"{"period":3,"residues":[0]}"#);
        let mut b = false;
        assert_eq!(nsd_index_set_decide(evens, 0, &mut b), NsdStatus::Ok);
        assert!(b);
        assert_eq!(nsd_index_set_decide(evens, 1, &mut b), NsdStatus::Ok);
        assert!(!b);
        let mut both = ptr::null_mut();
        assert_eq!(nsd_index_set_op(NsdSetOp::Intersect, evens, div3, &mut both), NsdStatus::Ok);
        for n in 0..50u64 {
            assert_eq!(nsd_index_set_contains(both, n, &mut b), NsdStatus::Ok);
            assert_eq!(b, n % 6 == 0, "{n}");
        }
        let mut s = ptr::null_mut();
        assert_eq!(nsd_index_set_to_json(both, &mut s), NsdStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["period"], 6);
        assert_eq!(v["residues"], serde_json::json!([0]));
        let mut odds = ptr::null_mut();
        assert_eq!(nsd_index_set_op(NsdSetOp::Complement, evens, ptr::null(), &mut odds), NsdStatus::Ok);
        assert_eq!(nsd_index_set_contains(odds, 7, &mut b), NsdStatus::Ok);
        assert!(b);
        assert_eq!(nsd_index_set_op(NsdSetOp::Union, evens, ptr::null(), &mut odds), NsdStatus::NullPointer);
        for h in [evens, div3, both, odds] {
            nsd_index_set_free(h);
        }
    }
}

#[test]
fn families_and_bounds() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(nsd_family_from_json(c(r#"{"kind":"builtin","name":"dipath"}"#).as_ptr(), &mut f), NsdStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(nsd_family_classify(f, 0, &mut s), NsdStatus::Ok);
        assert_eq!(take(s), "strictly_unilateral");
        assert_eq!(nsd_family_check_bounds_json(f, 0, &mut s), NsdStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["category"], "strictly_unilateral");
        assert_eq!(v["holds"], true);
        nsd_family_free(f);

        assert_eq!(nsd_family_from_json(c(r#"{"kind":"builtin","name":"one_way_dipath_enlargement"}"#).as_ptr(), &mut f), NsdStatus::Ok);
        assert_eq!(nsd_family_check_bounds_json(f, 0, &mut s), NsdStatus::Unsupported);
        assert!(last_error().starts_with("NotHyperfinite"));
        nsd_family_free(f);
    }
}

#[test]
fn hypernaturals() {
    unsafe {
        let mut h = ptr::null_mut();
        let spec = c(r#"{"prefix":[1,0],"period":2,"polys":[[3],[0,1]]}"#);
        assert_eq!(nsd_hypernat_from_json(spec.as_ptr(), &mut h), NsdStatus::Ok);
        let mut v = 0u64;
        let expect = |n: u64| if n < 2 { [1, 0][n as usize] } else if n.is_multiple_of(2) { 3 } else { n };
        for n in 0..20 {
            assert_eq!(nsd_hypernat_eval(h, n, &mut v), NsdStatus::Ok);
            assert_eq!(v, expect(n));
        }
        let mut limited = false;
        assert_eq!(nsd_hypernat_limit(h, 0, &mut limited, &mut v), NsdStatus::Ok);
        assert!(limited);
        assert_eq!(v, 3);
        assert_eq!(nsd_hypernat_limit(h, 1, &mut limited, &mut v), NsdStatus::Ok);
        assert!(!limited);
        nsd_hypernat_free(h);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(nsd_index_set_from_json(c("{nope").as_ptr(), &mut out), NsdStatus::Parse);
        assert!(out.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(nsd_index_set_from_json(ptr::null(), &mut out), NsdStatus::NullPointer);
        let bad = [0xffu8, 0];
        assert_eq!(nsd_index_set_from_json(bad.as_ptr() as *const c_char, &mut out), NsdStatus::InvalidUtf8);
        let mut f = ptr::null_mut();
        assert_eq!(nsd_family_from_json(c(r#"{"kind":"builtin","name":"nope"}"#).as_ptr(), &mut f), NsdStatus::Parse);
        assert!(last_error().starts_with("UnknownBuiltin"));
        let mut b = false;
        assert_eq!(nsd_index_set_decide(ptr::null(), 0, &mut b), NsdStatus::NullPointer);
        let s = set(r#"{"period":1,"residues":[0]}"#);
        assert!(nsd_last_error_message().is_null());
        nsd_index_set_free(s);
        nsd_string_free(ptr::null_mut());
        nsd_family_free(ptr::null_mut());
    }
}
