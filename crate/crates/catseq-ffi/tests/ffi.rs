//! Exercise the C ABI from Rust, then compile and run a real C program
//! against the generated shared library and the shipped header.

use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use catseq_ffi::*;

fn call(
    f: impl FnOnce(*mut *mut CatseqResult) -> i32,
) -> (i32, Option<String>, Option<String>) {
    let mut out: *mut CatseqResult = ptr::null_mut();
    let code = f(&mut out);
    let json = {
        let p = catseq_result_json(out);
        (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string())
    };
    let error = {
        let p = catseq_result_error(out);
        (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string())
    };
    catseq_result_free(out);
    (code, json, error)
}

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

#[test]
fn sequence_operations() {
    let (code, json, _) = call(|out| {
        catseq_seq_star(cstr("[0,2,10]").as_ptr(), cstr("[0,2]").as_ptr(), out)
    });
    assert_eq!(code, CATSEQ_OK);
    assert_eq!(json.as_deref(), Some("[0,2,4,12]"));

    let (code, json, _) =
        call(|out| catseq_seq_min(cstr("[0,3,7,10]").as_ptr(), cstr("[0,2]").as_ptr(), out));
    assert_eq!(code, CATSEQ_OK);
    assert_eq!(json.as_deref(), Some("[0,2,7,10]"));

    let (code, json, _) = call(|out| catseq_seq_closure(cstr("[0,3,7]").as_ptr(), 4, out));
    assert_eq!(code, CATSEQ_OK);
    assert_eq!(json.as_deref(), Some("[0,3,7,10,14]"));

    let (code, _, _) = call(|out| catseq_seq_formal(cstr("[0,3,8,11]").as_ptr(), out));
    assert_eq!(code, CATSEQ_NEGATIVE);

    let (code, json, _) = call(|out| catseq_seq_optimal(2, 7, out));
    assert_eq!(code, CATSEQ_OK);
    assert_eq!(json.as_deref(), Some("[0,3,7]"));
}

#[test]
fn null_and_malformed_inputs() {
    let (code, _, error) = call(|out| catseq_seq_formal(ptr::null(), out));
    assert_eq!(code, CATSEQ_BAD_INPUT);
    assert!(error.unwrap().contains("null pointer"));

    let (code, _, error) =
        call(|out| catseq_seq_star(cstr("[1,2]").as_ptr(), cstr("[0]").as_ptr(), out));
    assert_eq!(code, CATSEQ_BAD_INPUT);
    assert!(error.unwrap().contains("start with 0"));

    // a null out pointer is allowed: only the status comes back
    let code = catseq_seq_formal(cstr("[0,3,7]").as_ptr(), ptr::null_mut());
    assert_eq!(code, CATSEQ_OK);
}

#[test]
fn algebra_and_realization() {
    let g2 = r#"{"field":{"Fp":2},"presentation":{"tensor":[{"truncated_poly":[[3,4]]},{"exterior":[5]}]}}"#;
    let (code, json, _) = call(|out| catseq_algebra_seq(cstr(g2).as_ptr(), 0, out));
    assert_eq!(code, CATSEQ_OK);
    assert_eq!(json.as_deref(), Some("[0,3,6,9,14]"));

    let (code, json, _) = call(|out| catseq_realize(cstr("[0,3,7]").as_ptr(), out));
    assert_eq!(code, CATSEQ_OK);
    assert_eq!(json.as_deref(), Some(r#"{"summands":[[3],[3,4]]}"#));

    let (code, json, _) = call(|out| {
        catseq_algebra_tensor(
            cstr(r#"{"field":"Q","presentation":{"exterior":[3]}}"#).as_ptr(),
            cstr(r#"{"field":"Q","presentation":{"exterior":[5]}}"#).as_ptr(),
            0,
            out,
        )
    });
    assert_eq!(code, CATSEQ_OK);
    let (code, json2, _) = call(|out| catseq_algebra_seq(cstr(&json.unwrap()).as_ptr(), 0, out));
    assert_eq!(code, CATSEQ_OK);
    assert_eq!(json2.as_deref(), Some("[0,3,8]"));
}

#[test]
fn infer_with_inline_trace() {
    let sp2 = r#"{"name":"sp2","simply_connected":true,"connectivity":3,
        "nonvanishing":{"degrees":[3,7,10],"complete_up_to":10},
        "formal_dimension":10,
        "cohomology_algebras":[{"field":"Q","presentation":{"exterior":[3,7]}}],
        "known_cat":3,"index_cap":6}"#;
    let (code, json, _) = call(|out| catseq_infer(cstr(sp2).as_ptr(), 0, out));
    assert_eq!(code, CATSEQ_OK);
    let v: serde_json::Value = serde_json::from_str(&json.unwrap()).unwrap();
    assert_eq!(v["sigma_exact_prefix"], serde_json::json!([0, 3, 7, 10]));

    let (code, json, _) = call(|out| catseq_infer_traced(cstr(sp2).as_ptr(), 0, out));
    assert_eq!(code, CATSEQ_OK);
    let v: serde_json::Value = serde_json::from_str(&json.unwrap()).unwrap();
    assert_eq!(v["result"]["cat"], serde_json::json!({"lower": 3, "upper": 3}));
    assert!(v["trace"]["steps"].as_array().unwrap().len() > 3);
    assert!(v["trace"]["final"]["sp2"]["lower"].is_array());
}

#[test]
fn ganea_checker() {
    let (code, json, _) = call(|out| {
        catseq_ganea(cstr(r#"{"k":1,"n":3,"a":[3,7,10],"h":[3,7,10],"complete_up_to":12}"#).as_ptr(), out)
    });
    assert_eq!(code, CATSEQ_OK);
    let v: serde_json::Value = serde_json::from_str(&json.unwrap()).unwrap();
    assert_eq!(v["cat_strict_upper_bound"], serde_json::json!(4));

    let (code, _, _) = call(|out| {
        catseq_ganea(cstr(r#"{"k":1,"n":3,"a":[3],"h":[3,7],"complete_up_to":5}"#).as_ptr(), out)
    });
    assert_eq!(code, CATSEQ_NEGATIVE);
}

#[test]
fn version_is_a_static_string() {
    let v = unsafe { CStr::from_ptr(catseq_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// Compile examples/smoke.c against include/catseq.h and the cdylib, run it,
/// and check its output: the header, the ABI and the library agree.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include = manifest.join("include");
    let smoke = manifest.join("examples/smoke.c");
    // the cdylib lands in the test binary's directory (deps/) under
    // `cargo test`, one level up under `cargo build`
    let mut deps_dir = PathBuf::from(std::env::current_exe().unwrap());
    deps_dir.pop();
    let lib_dir = [deps_dir.clone(), deps_dir.join("..")]
        .into_iter()
        .find(|d| d.join("libcatseq_ffi.so").exists())
        .unwrap_or_else(|| panic!("libcatseq_ffi.so not found near {}", deps_dir.display()));
    let lib = lib_dir.join("libcatseq_ffi.so");

    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let compile = Command::new(&cc)
        .arg(&smoke)
        .arg("-I")
        .arg(&include)
        .arg("-o")
        .arg(&exe)
        .arg(lib.as_os_str())
        .output()
        .expect("C compiler runs");
    assert!(
        compile.status.success(),
        "compile failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );
    let run = Command::new(&exe)
        .env("LD_LIBRARY_PATH", &lib_dir)
        .output()
        .expect("smoke test runs");
    assert!(run.status.success(), "smoke run failed: {}", String::from_utf8_lossy(&run.stderr));
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.contains("[0,2,4,12]"), "unexpected output: {stdout}");
    assert!(stdout.contains("\"summands\":[[3],[3,4]]"), "unexpected output: {stdout}");
}
