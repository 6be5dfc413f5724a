use std::ffi::{CStr, CString};
use std::ptr;

use cksplit_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    ck_string_free(p);
    s
}

unsafe fn last_error() -> String {
    CStr::from_ptr(ck_last_error()).to_str().unwrap().to_string()
}

const CP1: &str = r#"{"vertices": ["e", "s1"], "edges": [{"src": "e", "dst": "s1", "mult": "inf"}]}"#;

#[test]
fn graph_round_trip_and_classify() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(ck_graph_from_json(c(CP1).as_ptr(), &mut g), CkStatus::Ok);
        assert!(ck_last_error().is_null());
        assert_eq!(ck_graph_vertex_count(g), 2);

        let mut out = ptr::null_mut();
        assert_eq!(ck_graph_to_json(g, &mut out), CkStatus::Ok);
        let text = take(out);
        assert!(text.starts_with("{\n  \"vertices\""));
        assert!(text.ends_with("}\n"));

        assert_eq!(ck_classify_json(g, &mut out), CkStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["sinks"], serde_json::json!(["s1"]));

        assert_eq!(ck_k_groups_json(g, &mut out), CkStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["k0_rank"], 2);
        ck_graph_free(g);
    }
}

#[test]
fn split_chain_and_flag() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(ck_flag_graph(1, [1usize].as_ptr(), 1, &mut g), CkStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(ck_split_json(g, c("s1").as_ptr(), c("e").as_ptr(), &mut out), CkStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["k0"]["q"], serde_json::json!([[1, 0]]));
        assert_eq!(v["k0"]["s"], serde_json::json!([[1], [1]]));

        assert_eq!(ck_split_json(g, c("s1").as_ptr(), ptr::null(), &mut out), CkStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["star"], serde_json::Value::Null);

        assert_eq!(ck_chain_json(g, ptr::null(), &mut out), CkStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["terminal"], "e");
        ck_graph_free(g);
    }
}

#[test]
fn errors_set_codes_and_messages() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(ck_graph_from_json(ptr::null(), &mut g), CkStatus::NullArgument);
        let bad = c(r#"{"vertices": ["a"], "edges": [{"src": "a", "dst": "b", "mult": "inf"}]}"#);
        assert_eq!(ck_graph_from_json(bad.as_ptr(), &mut g), CkStatus::InvalidInput);
        assert_eq!(last_error(), "edge 0 refers to undeclared vertex b");

        let mut out = ptr::null_mut();
        assert_eq!(ck_classify_json(ptr::null(), &mut out), CkStatus::NullArgument);
        assert_eq!(ck_flag_graph(3, ptr::null(), 0, &mut g), CkStatus::InvalidInput);
        assert_eq!(last_error(), "at least one node must be tagged");

        assert_eq!(ck_graph_from_json(c(CP1).as_ptr(), &mut g), CkStatus::Ok);
        assert_eq!(ck_chain_json(g, c("nope").as_ptr(), &mut out), CkStatus::InvalidInput);
        assert_eq!(ck_valid_stars_json(g, c("e").as_ptr(), &mut out), CkStatus::InvalidInput);
        assert_eq!(last_error(), "e is not a sink");
        ck_graph_free(g);

        ck_graph_free(ptr::null_mut());
        ck_string_free(ptr::null_mut());
        assert_eq!(CStr::from_ptr(ck_version()).to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
