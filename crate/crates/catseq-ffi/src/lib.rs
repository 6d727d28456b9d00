//! C ABI over the catseq calculus. Every operation takes JSON strings (or
//! plain integers), returns a status code, and hands back an opaque result
//! holding either a JSON payload or an error message. Payloads and status
//! codes are byte-for-byte those of the `catseq` command line tool, so the
//! two surfaces stay in lockstep: 0 success, 1 mathematically negative
//! result, 2 malformed input, 3 internal error.

use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

pub const CATSEQ_OK: c_int = 0;
pub const CATSEQ_NEGATIVE: c_int = 1;
pub const CATSEQ_BAD_INPUT: c_int = 2;
pub const CATSEQ_INTERNAL: c_int = 3;

/// Opaque to C callers; accessed through `catseq_result_json`,
/// `catseq_result_error` and `catseq_result_free`.
pub struct CatseqResult {
    json: Option<CString>,
    error: Option<CString>,
}

fn c_string_lossy(s: &str) -> CString {
    CString::new(s.replace('\0', " ")).expect("nul bytes stripped")
}

fn finish(out: *mut *mut CatseqResult, code: c_int, json: &str, error: &str) -> c_int {
    if out.is_null() {
        return code;
    }
    let result = Box::new(CatseqResult {
        json: if json.is_empty() { None } else { Some(c_string_lossy(json.trim_end())) },
        error: if error.is_empty() { None } else { Some(c_string_lossy(error.trim_end())) },
    });
    unsafe { *out = Box::into_raw(result) };
    code
}

/// # Safety
/// `args` strings must be valid UTF-8 C strings; checked below.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, String> {
    if ptr.is_null() {
        return Err("null pointer argument".into());
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|_| "argument is not valid UTF-8".into())
}

fn run_cli(args: Vec<String>, out: *mut *mut CatseqResult) -> c_int {
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        catseq::cli::run(std::iter::once("catseq".to_string()).chain(args))
    }));
    match outcome {
        Ok(r) => finish(out, r.code, &r.stdout, &r.stderr),
        Err(_) => finish(out, CATSEQ_INTERNAL, "", "internal error"),
    }
}

macro_rules! require_str {
    ($ptr:expr, $out:expr) => {
        match unsafe { read_str($ptr) } {
            Ok(s) => s,
            Err(e) => return finish($out, CATSEQ_BAD_INPUT, "", &e),
        }
    };
}

/// Pointwise minimum of two sequences given as JSON arrays.
#[no_mangle]
pub extern "C" fn catseq_seq_min(
    s: *const c_char,
    t: *const c_char,
    out: *mut *mut CatseqResult,
) -> c_int {
    let (s, t) = (require_str!(s, out), require_str!(t, out));
    run_cli(vec!["seq-min".into(), s.into(), t.into()], out)
}

/// Star product of two sequences.
#[no_mangle]
pub extern "C" fn catseq_seq_star(
    s: *const c_char,
    t: *const c_char,
    out: *mut *mut CatseqResult,
) -> c_int {
    let (s, t) = (require_str!(s, out), require_str!(t, out));
    run_cli(vec!["seq-star".into(), s.into(), t.into()], out)
}

/// Superadditive closure out to `index_cap` (0 means the default).
#[no_mangle]
pub extern "C" fn catseq_seq_closure(
    s: *const c_char,
    index_cap: u64,
    out: *mut *mut CatseqResult,
) -> c_int {
    let s = require_str!(s, out);
    let mut args = vec!["seq-closure".into(), s.into()];
    if index_cap > 0 {
        args.extend(["--cap".into(), index_cap.to_string()]);
    }
    run_cli(args, out)
}

/// Formality test; status 1 with `{"formal":false}` when it fails.
#[no_mangle]
pub extern "C" fn catseq_seq_formal(s: *const c_char, out: *mut *mut CatseqResult) -> c_int {
    let s = require_str!(s, out);
    run_cli(vec!["seq-formal".into(), s.into()], out)
}

/// The optimal k-term sequence ending at n.
#[no_mangle]
pub extern "C" fn catseq_seq_optimal(k: u64, n: u64, out: *mut *mut CatseqResult) -> c_int {
    run_cli(vec!["seq-optimal".into(), k.to_string(), n.to_string()], out)
}

fn with_degree_cap(mut args: Vec<String>, degree_cap: u64) -> Vec<String> {
    if degree_cap > 0 {
        args.extend(["--degree-cap".into(), degree_cap.to_string()]);
    }
    args
}

/// Validate an algebra description (0 means no degree cap).
#[no_mangle]
pub extern "C" fn catseq_algebra_validate(
    algebra_json: *const c_char,
    degree_cap: u64,
    out: *mut *mut CatseqResult,
) -> c_int {
    let a = require_str!(algebra_json, out);
    run_cli(with_degree_cap(vec!["algebra-validate".into(), a.into()], degree_cap), out)
}

/// Product-length sequence of an algebra.
#[no_mangle]
pub extern "C" fn catseq_algebra_seq(
    algebra_json: *const c_char,
    degree_cap: u64,
    out: *mut *mut CatseqResult,
) -> c_int {
    let a = require_str!(algebra_json, out);
    run_cli(with_degree_cap(vec!["algebra-seq".into(), a.into()], degree_cap), out)
}

/// Tensor product of two algebras, returned as a multiplication table.
#[no_mangle]
pub extern "C" fn catseq_algebra_tensor(
    left_json: *const c_char,
    right_json: *const c_char,
    degree_cap: u64,
    out: *mut *mut CatseqResult,
) -> c_int {
    let (a, b) = (require_str!(left_json, out), require_str!(right_json, out));
    run_cli(with_degree_cap(vec!["algebra-tensor".into(), a.into(), b.into()], degree_cap), out)
}

/// Realize a formal sequence as a wedge of products of spheres.
#[no_mangle]
pub extern "C" fn catseq_realize(s: *const c_char, out: *mut *mut CatseqResult) -> c_int {
    let s = require_str!(s, out);
    run_cli(vec!["realize".into(), s.into()], out)
}

/// Sequence of a wedge given as `{"summands": [[..], ..]}`.
#[no_mangle]
pub extern "C" fn catseq_wedge_seq(wedge_json: *const c_char, out: *mut *mut CatseqResult) -> c_int {
    let w = require_str!(wedge_json, out);
    run_cli(vec!["wedge-seq".into(), w.into()], out)
}

/// Run the bound-propagation engine on a problem document. Status 1 with a
/// structured payload reports a contradiction.
#[no_mangle]
pub extern "C" fn catseq_infer(
    problems_json: *const c_char,
    index_cap: u64,
    out: *mut *mut CatseqResult,
) -> c_int {
    let p = require_str!(problems_json, out);
    let mut args = vec!["infer".into(), p.into()];
    if index_cap > 0 {
        args.extend(["--cap".into(), index_cap.to_string()]);
    }
    run_cli(args, out)
}

/// Like `catseq_infer`, but the payload is `{"result": .., "trace": ..}`
/// with the full derivation trace inlined.
#[no_mangle]
pub extern "C" fn catseq_infer_traced(
    problems_json: *const c_char,
    index_cap: u64,
    out: *mut *mut CatseqResult,
) -> c_int {
    let p = require_str!(problems_json, out);
    let run = catch_unwind(AssertUnwindSafe(|| {
        let dir = std::env::temp_dir();
        let path = dir.join(format!(
            "catseq-ffi-{}-{:x}.json",
            std::process::id(),
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_nanos())
                .unwrap_or(0)
        ));
        let mut args = vec![
            "catseq".to_string(),
            "infer".into(),
            p.to_string(),
            "--trace".into(),
            path.to_str().expect("temp path is UTF-8").to_string(),
        ];
        if index_cap > 0 {
            args.extend(["--cap".into(), index_cap.to_string()]);
        }
        let r = catseq::cli::run(args);
        let trace = std::fs::read_to_string(&path).unwrap_or_default();
        let _ = std::fs::remove_file(&path);
        (r, trace)
    }));
    match run {
        Ok((r, trace)) if r.code == 0 || r.code == 1 => {
            let combined = format!(
                "{{\"result\":{},\"trace\":{}}}",
                r.stdout.trim_end(),
                if trace.is_empty() { "null" } else { trace.trim_end() }
            );
            finish(out, r.code, &combined, &r.stderr)
        }
        Ok((r, _)) => finish(out, r.code, &r.stdout, &r.stderr),
        Err(_) => finish(out, CATSEQ_INTERNAL, "", "internal error"),
    }
}

/// Interval-covering strict upper bound for cat.
#[no_mangle]
pub extern "C" fn catseq_ganea(input_json: *const c_char, out: *mut *mut CatseqResult) -> c_int {
    let g = require_str!(input_json, out);
    run_cli(vec!["ganea".into(), g.into()], out)
}

/// Replay a trace document against its problem document.
#[no_mangle]
pub extern "C" fn catseq_replay(
    trace_json: *const c_char,
    problems_json: *const c_char,
    out: *mut *mut CatseqResult,
) -> c_int {
    let (t, p) = (require_str!(trace_json, out), require_str!(problems_json, out));
    run_cli(vec!["replay".into(), t.into(), p.into()], out)
}

/// JSON payload of a result, or NULL when the call produced none.
#[no_mangle]
pub extern "C" fn catseq_result_json(result: *const CatseqResult) -> *const c_char {
    if result.is_null() {
        return std::ptr::null();
    }
    match unsafe { &(*result).json } {
        Some(s) => s.as_ptr(),
        None => std::ptr::null(),
    }
}

/// Error message of a result, or NULL when the call succeeded cleanly.
#[no_mangle]
pub extern "C" fn catseq_result_error(result: *const CatseqResult) -> *const c_char {
    if result.is_null() {
        return std::ptr::null();
    }
    match unsafe { &(*result).error } {
        Some(s) => s.as_ptr(),
        None => std::ptr::null(),
    }
}

/// Release a result handle. Passing NULL is a no-op.
#[no_mangle]
pub extern "C" fn catseq_result_free(result: *mut CatseqResult) {
    if !result.is_null() {
        drop(unsafe { Box::from_raw(result) });
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn catseq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
