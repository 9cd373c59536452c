//! C ABI for the curator engine.
//!
//! Knowledge bases are opaque `CuratorKb` handles. Every fallible call
//! returns a [`CuratorStatus`]; on failure the message is available from
//! [`curator_last_error_message`] on the same thread. Strings handed out
//! by the library are NUL-terminated UTF-8 and must be released with
//! [`curator_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use curator::af::{extensions, parse_apx, AfError, Semantics};
use curator::coach::{load_kb_file, CoachError};
use curator::domain::{DomainError, RequestContext};
use curator::dsl::parse_kb;
use curator::rules::{decide, default_kb, explain, Decision, KnowledgeBase};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CuratorStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON or an invalid request context.
    InvalidInput = 3,
    /// Knowledge-base, scenario or apx text failed to parse.
    ParseError = 4,
    /// No topic tag maps to a sphere.
    Unclassifiable = 5,
    Io = 6,
    /// Framework too large for an enumerating semantics.
    TooLarge = 7,
    /// A Rust panic was caught at the boundary.
    Internal = 8,
}

/// Opaque knowledge-base handle.
pub struct CuratorKb {
    kb: KnowledgeBase,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

type Failure = (CuratorStatus, String);

fn domain_failure(e: DomainError) -> Failure {
    let status = match e {
        DomainError::Unclassifiable(_) => CuratorStatus::Unclassifiable,
        _ => CuratorStatus::InvalidInput,
    };
    (status, e.to_string())
}

fn af_failure(e: AfError) -> Failure {
    let status = match e {
        AfError::TooLarge { .. } => CuratorStatus::TooLarge,
        AfError::Syntax { .. } | AfError::UndeclaredArgument { .. } => CuratorStatus::ParseError,
        _ => CuratorStatus::InvalidInput,
    };
    (status, e.to_string())
}

fn coach_failure(e: CoachError) -> Failure {
    let status = match &e {
        CoachError::Io(_) => CuratorStatus::Io,
        CoachError::Context(_) | CoachError::UnknownVersion { .. } => CuratorStatus::InvalidInput,
        _ => CuratorStatus::ParseError,
    };
    (status, e.to_string())
}

/// Runs `f`, records its error message and converts panics.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CuratorStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CuratorStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error: panic in curator");
            CuratorStatus::Internal
        }
    }
}

/// # Safety
/// `p` is null or a valid NUL-terminated string.
unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err((CuratorStatus::NullArgument, format!("`{name}` is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (CuratorStatus::InvalidUtf8, format!("`{name}` is not UTF-8")))
}

fn check_out<T>(out: *mut *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err((CuratorStatus::NullArgument, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("interior NULs replaced")
        .into_raw()
}

/// # Safety
/// `kb` is null or a live handle.
unsafe fn kb_arg<'a>(kb: *const CuratorKb) -> Result<&'a KnowledgeBase, Failure> {
    kb.as_ref()
        .map(|h| &h.kb)
        .ok_or((CuratorStatus::NullArgument, "`kb` is null".into()))
}

fn put_kb(out: *mut *mut CuratorKb, kb: KnowledgeBase) {
    // SAFETY: callers check `out` first.
    unsafe { *out = Box::into_raw(Box::new(CuratorKb { kb })) };
}

/// Built-in five-argument knowledge base.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn curator_kb_default(out: *mut *mut CuratorKb) -> CuratorStatus {
    guard(|| {
        check_out(out)?;
        put_kb(out, default_kb());
        Ok(())
    })
}

/// Parses knowledge-base DSL text.
///
/// # Safety
/// `text` is a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn curator_kb_parse(text: *const c_char, out: *mut *mut CuratorKb) -> CuratorStatus {
    guard(|| {
        check_out(out)?;
        let text = str_arg(text, "text")?;
        let kb = parse_kb(text).map_err(|e| (CuratorStatus::ParseError, e.to_string()))?;
        put_kb(out, kb);
        Ok(())
    })
}

/// Loads a `.kb` file or an append-only knowledge-base log.
///
/// # Safety
/// `path` is a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn curator_kb_load(path: *const c_char, out: *mut *mut CuratorKb) -> CuratorStatus {
    guard(|| {
        check_out(out)?;
        let path = str_arg(path, "path")?;
        let kb = load_kb_file(Path::new(path)).map_err(coach_failure)?;
        put_kb(out, kb);
        Ok(())
    })
}

/// Version of the knowledge base (number of applied entries); 0 for null.
///
/// # Safety
/// `kb` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn curator_kb_version(kb: *const CuratorKb) -> u64 {
    kb.as_ref().map_or(0, |h| h.kb.version())
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `kb` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn curator_kb_free(kb: *mut CuratorKb) {
    if !kb.is_null() {
        drop(Box::from_raw(kb));
    }
}

unsafe fn decide_arg(kb: *const CuratorKb, context_json: *const c_char) -> Result<Decision, Failure> {
    let kb = kb_arg(kb)?;
    let text = str_arg(context_json, "context_json")?;
    let ctx: RequestContext =
        serde_json::from_str(text).map_err(|e| (CuratorStatus::InvalidInput, e.to_string()))?;
    decide(ctx, kb).map_err(domain_failure)
}

/// Decides a context given as JSON. `*out_json` receives the Decision JSON,
/// byte-identical to the CLI `--json` output and the HTTP API body.
///
/// # Safety
/// `kb` is a live handle, `context_json` a NUL-terminated string and
/// `out_json` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn curator_decide_json(
    kb: *const CuratorKb,
    context_json: *const c_char,
    out_json: *mut *mut c_char,
) -> CuratorStatus {
    guard(|| {
        check_out(out_json)?;
        let d = decide_arg(kb, context_json)?;
        *out_json = into_c_string(d.to_json());
        Ok(())
    })
}

/// Like [`curator_decide_json`] but returns the human-readable explanation.
///
/// # Safety
/// Same as [`curator_decide_json`].
#[no_mangle]
pub unsafe extern "C" fn curator_explain_text(
    kb: *const CuratorKb,
    context_json: *const c_char,
    out_text: *mut *mut c_char,
) -> CuratorStatus {
    guard(|| {
        check_out(out_text)?;
        let d = decide_arg(kb, context_json)?;
        *out_text = into_c_string(explain(&d).render_text());
        Ok(())
    })
}

/// Solves an apx framework. `semantics` is one of `grounded`, `complete`,
/// `preferred`, `stable`. `*out_json` receives the extensions as a JSON
/// array of sorted name arrays.
///
/// # Safety
/// `apx` and `semantics` are NUL-terminated strings; `out_json` is valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn curator_af_solve(
    apx: *const c_char,
    semantics: *const c_char,
    out_json: *mut *mut c_char,
) -> CuratorStatus {
    guard(|| {
        check_out(out_json)?;
        let semantics: Semantics = str_arg(semantics, "semantics")?
            .parse()
            .map_err(|e: String| (CuratorStatus::InvalidInput, e))?;
        let af = parse_apx(str_arg(apx, "apx")?).map_err(af_failure)?;
        let exts = extensions(&af, semantics).map_err(af_failure)?;
        let names: Vec<Vec<&str>> = exts
            .iter()
            .map(|e| e.iter().map(|a| a.as_str()).collect())
            .collect();
        *out_json = into_c_string(serde_json::to_string(&names).expect("names serialize"));
        Ok(())
    })
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn curator_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` is null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn curator_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
