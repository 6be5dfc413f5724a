//! C ABI over `cksplit`.
//!
//! Graphs cross the boundary as opaque `CkGraph` handles; results come back
//! as NUL-terminated JSON strings owned by the caller and released with
//! `ck_string_free`. Every function returns a `CkStatus`; on failure the
//! message is available from `ck_last_error` on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cksplit::coxeter::{flag_graph, DynkinSpec};
use cksplit::cw::cw_kk_summary;
use cksplit::io::{emit_graph, parse_graph};
use cksplit::ktheory::{chain_k0, check_split_exact_k0, k_groups};
use cksplit::splitting::{build_splitting, kk_chain, policy_by_name, valid_stars, verify_split_exact};
use cksplit::{AmpGraph, Error};
use serde_json::json;

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CkStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Rejected input: malformed JSON, unknown vertex, invalid star, ...
    InvalidInput = 3,
    /// A mathematical check failed.
    VerificationFailed = 4,
    Panic = 5,
}

/// Opaque graph handle.
pub struct CkGraph {
    inner: AmpGraph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: CkStatus, msg: &str) -> CkStatus {
    set_error(msg);
    status
}

fn lib_failure(e: Error) -> CkStatus {
    let status = if e.is_verification_failure() { CkStatus::VerificationFailed } else { CkStatus::InvalidInput };
    fail(status, &e.to_string())
}

/// Runs `f`, converting panics into `CkStatus::Panic`.
fn guard(f: impl FnOnce() -> CkStatus) -> CkStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(CkStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, CkStatus> {
    if p.is_null() {
        return Err(fail(CkStatus::NullArgument, &format!("{} is null", what)));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(CkStatus::InvalidUtf8, &format!("{} is not UTF-8", what)))
}

unsafe fn graph_ref<'a>(g: *const CkGraph) -> Result<&'a AmpGraph, CkStatus> {
    g.as_ref().map(|h| &h.inner).ok_or_else(|| fail(CkStatus::NullArgument, "graph handle is null"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> CkStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            CkStatus::Ok
        }
        Err(_) => fail(CkStatus::Panic, "output contained a NUL byte"),
    }
}

unsafe fn write_json(out: *mut *mut c_char, v: &serde_json::Value) -> CkStatus {
    write_string(out, cksplit::io::to_pretty(v))
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! lib {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return lib_failure(Error::from(e)),
        }
    };
}

fn check_out<T>(out: *mut T) -> Result<(), CkStatus> {
    if out.is_null() {
        Err(fail(CkStatus::NullArgument, "output pointer is null"))
    } else {
        Ok(())
    }
}

/// Message for the last failure on this thread, or NULL. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ck_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ck_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ck_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a graph from its JSON text.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ck_graph_from_json(json: *const c_char, out: *mut *mut CkGraph) -> CkStatus {
    guard(|| {
        tri!(check_out(out));
        let text = tri!(read_str(json, "json"));
        let g = lib!(parse_graph(text));
        *out = Box::into_raw(Box::new(CkGraph { inner: g }));
        CkStatus::Ok
    })
}

/// Releases a graph handle. NULL is ignored.
///
/// # Safety
/// `g` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ck_graph_free(g: *mut CkGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ck_graph_vertex_count(g: *const CkGraph) -> usize {
    g.as_ref().map_or(0, |h| h.inner.n())
}

/// Canonical JSON text of the graph.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ck_graph_to_json(g: *const CkGraph, out: *mut *mut c_char) -> CkStatus {
    guard(|| {
        tri!(check_out(out));
        let g = tri!(graph_ref(g));
        write_string(out, emit_graph(g))
    })
}

/// Sinks, sources, acyclicity and amplification as JSON.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ck_classify_json(g: *const CkGraph, out: *mut *mut c_char) -> CkStatus {
    guard(|| {
        tri!(check_out(out));
        let g = tri!(graph_ref(g));
        let c = g.classify();
        write_json(
            out,
            &json!({"amplified": c.amplified, "acyclic": c.acyclic, "sinks": c.sinks, "sources": c.sources}),
        )
    })
}

/// Valid star vertices for `sink` as a JSON array.
///
/// # Safety
/// `g` must be a live handle, `sink` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ck_valid_stars_json(g: *const CkGraph, sink: *const c_char, out: *mut *mut c_char) -> CkStatus {
    guard(|| {
        tri!(check_out(out));
        let g = tri!(graph_ref(g));
        let sink = tri!(read_str(sink, "sink"));
        let stars = lib!(valid_stars(g, sink));
        write_json(out, &json!(stars))
    })
}

/// Builds and verifies the splitting for `sink`. A NULL `star` selects the
/// non-unital embedding. The JSON holds the generator images, the symbolic
/// checklist and the K₀ matrices.
///
/// # Safety
/// `g` must be a live handle, `sink` a NUL-terminated string, `star` NULL
/// or a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ck_split_json(
    g: *const CkGraph,
    sink: *const c_char,
    star: *const c_char,
    out: *mut *mut c_char,
) -> CkStatus {
    guard(|| {
        tri!(check_out(out));
        let g = tri!(graph_ref(g));
        let sink = tri!(read_str(sink, "sink"));
        let star = if star.is_null() { None } else { Some(tri!(read_str(star, "star"))) };
        let sd = lib!(build_splitting(g, sink, star));
        let report = lib!(verify_split_exact(&sd));
        let k0 = lib!(check_split_exact_k0(&sd));
        let table = |t: Vec<(String, String)>| -> Vec<serde_json::Value> {
            t.into_iter().map(|(a, b)| json!({"generator": a, "image": b})).collect()
        };
        let ok = report.ok() && k0.checks.ok();
        let status = write_json(
            out,
            &json!({
                "sink": sd.sink(),
                "star": sd.star(),
                "ideal": sd.ideal(),
                "sigma": table(sd.sigma().image_table()),
                "q": table(sd.q().image_table()),
                "verification": report,
                "k0": k0,
            }),
        );
        if status == CkStatus::Ok && !ok {
            return fail(CkStatus::VerificationFailed, "split extension failed verification");
        }
        status
    })
}

/// KK chain under a named policy (`first`, `last`, `source`, `embed`; NULL
/// means `first`), with its K₀ matrices.
///
/// # Safety
/// `g` must be a live handle, `policy` NULL or a NUL-terminated string,
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ck_chain_json(g: *const CkGraph, policy: *const c_char, out: *mut *mut c_char) -> CkStatus {
    guard(|| {
        tri!(check_out(out));
        let g = tri!(graph_ref(g));
        let name = if policy.is_null() { "first" } else { tri!(read_str(policy, "policy")) };
        let Some(p) = policy_by_name(name) else {
            return fail(CkStatus::InvalidInput, &format!("unknown policy {:?}", name));
        };
        let chain = lib!(kk_chain(g, p.as_ref()));
        let k0 = lib!(chain_k0(chain.steps()));
        let steps: Vec<_> = chain.steps().iter().map(|s| json!({"sink": s.sink(), "star": s.star()})).collect();
        let ok = k0.checks.ok();
        let status = write_json(
            out,
            &json!({
                "steps": steps,
                "terminal": chain.terminal(),
                "pi": chain.pi_terms(),
                "i": chain.i_terms(),
                "k0": k0,
            }),
        );
        if status == CkStatus::Ok && !ok {
            return fail(CkStatus::VerificationFailed, "chain failed K₀ verification");
        }
        status
    })
}

/// K-groups of an acyclic amplified graph as JSON.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ck_k_groups_json(g: *const CkGraph, out: *mut *mut c_char) -> CkStatus {
    guard(|| {
        tri!(check_out(out));
        let g = tri!(graph_ref(g));
        let k = lib!(k_groups(g));
        write_json(out, &json!(k))
    })
}

unsafe fn read_spec(rank: usize, tags: *const usize, ntags: usize) -> Result<DynkinSpec, CkStatus> {
    if tags.is_null() && ntags > 0 {
        return Err(fail(CkStatus::NullArgument, "tags is null"));
    }
    let tags = if ntags == 0 { &[][..] } else { std::slice::from_raw_parts(tags, ntags) };
    DynkinSpec::new(rank, tags).map_err(|e| lib_failure(e.into()))
}

/// Flag-manifold graph of the type-A diagram of `rank` with `tags` marked.
///
/// # Safety
/// `tags` must point to `ntags` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ck_flag_graph(rank: usize, tags: *const usize, ntags: usize, out: *mut *mut CkGraph) -> CkStatus {
    guard(|| {
        tri!(check_out(out));
        let spec = tri!(read_spec(rank, tags, ntags));
        let g = lib!(flag_graph(&spec));
        *out = Box::into_raw(Box::new(CkGraph { inner: g }));
        CkStatus::Ok
    })
}

/// Skeleton chain records and K₀ matrices of a flag graph as JSON.
///
/// # Safety
/// `tags` must point to `ntags` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ck_cw_summary_json(
    rank: usize,
    tags: *const usize,
    ntags: usize,
    out: *mut *mut c_char,
) -> CkStatus {
    guard(|| {
        tri!(check_out(out));
        let spec = tri!(read_spec(rank, tags, ntags));
        let s = lib!(cw_kk_summary(&spec));
        write_json(out, &json!(s))
    })
}
