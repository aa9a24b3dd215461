//! C ABI over `mukai-kit`.
//!
//! Configurations are opaque [`MkConfig`] handles. Every call returns an
//! [`MkStatus`]; on failure the message is available from
//! [`mk_last_error`] on the same thread. Strings returned through `out`
//! pointers are owned by the caller and released with [`mk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use mukai_kit::cli::{self, Command, CommandArgs, Config, Outcome};
use mukai_kit::rational::{format_rational, parse_list};
use mukai_kit::{CohVector, Error};

/// Result code of every exported function. The first three values agree
/// with the command line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MkStatus {
    Ok = 0,
    InvalidInput = 1,
    RegimeFailure = 2,
    NullPointer = 3,
    InvalidUtf8 = 4,
    Panic = 5,
}

/// Loaded configuration. Opaque to C.
pub struct MkConfig {
    config: Config,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(MkStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = if e.exit_code() == 2 {
            MkStatus::RegimeFailure
        } else {
            MkStatus::InvalidInput
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<MkStatus, Failure>) -> MkStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            MkStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(MkStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(MkStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a>(cfg: *const MkConfig) -> Result<&'a MkConfig, Failure> {
    cfg.as_ref()
        .ok_or_else(|| Failure(MkStatus::NullPointer, "config handle is null".into()))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(MkStatus::NullPointer, "output pointer is null".into()));
    }
    let c = CString::new(s).map_err(|_| Failure(MkStatus::Panic, "interior NUL in output".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn vector(config: &Config, text: &str, what: &str) -> Result<CohVector, Failure> {
    let coords = parse_list(text).map_err(|e| Failure(MkStatus::InvalidInput, format!("{what}: {e}")))?;
    let want = config.surface.rank() + 2;
    if coords.len() != want {
        return Err(Failure(
            MkStatus::InvalidInput,
            format!("{what}: expected {want} entries, got {}", coords.len()),
        ));
    }
    Ok(CohVector::from_coords(&coords)?)
}

unsafe fn store(out: *mut *mut MkConfig, config: Config) -> Result<MkStatus, Failure> {
    if out.is_null() {
        return Err(Failure(MkStatus::NullPointer, "output pointer is null".into()));
    }
    *out = Box::into_raw(Box::new(MkConfig { config }));
    Ok(MkStatus::Ok)
}

/// Parses a JSON configuration. On success `*out` receives a handle to be
/// released with [`mk_config_free`].
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mk_config_from_json(json: *const c_char, out: *mut *mut MkConfig) -> MkStatus {
    guard(|| {
        let json = text(json, "json")?;
        store(out, Config::from_json(json)?)
    })
}

/// Reads and parses a JSON configuration file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mk_config_from_path(path: *const c_char, out: *mut *mut MkConfig) -> MkStatus {
    guard(|| {
        let path = text(path, "path")?;
        store(out, Config::load(Path::new(path))?)
    })
}

/// # Safety
/// `cfg` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mk_config_free(cfg: *mut MkConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Runs a command (`"pair"`, `"walls-scan"`, ...) with flags given as a JSON
/// object keyed like the long options (`{"v": "1,0,0,1", "ell": "2"}`).
/// `args_json` may be null for no flags. The JSON report is written to
/// `*out` whenever the command ran, including regime failures.
///
/// # Safety
/// String arguments must be NUL-terminated; `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mk_run(
    cfg: *const MkConfig,
    command: *const c_char,
    args_json: *const c_char,
    out: *mut *mut c_char,
) -> MkStatus {
    guard(|| {
        let cfg = handle(cfg)?;
        let command: Command = text(command, "command")?.parse()?;
        let args: CommandArgs = if args_json.is_null() {
            CommandArgs::default()
        } else {
            serde_json::from_str(text(args_json, "args_json")?)
                .map_err(|e| Failure(MkStatus::InvalidInput, format!("args_json: {e}")))?
        };
        let report = cli::run(command, &cfg.config, &args)?;
        write_string(out, report.to_json())?;
        Ok(match report.outcome {
            Outcome::Ok => MkStatus::Ok,
            Outcome::RegimeFailure => {
                set_error("regime or hypothesis check failed; see report checks");
                MkStatus::RegimeFailure
            }
            Outcome::Invalid => {
                set_error("configuration is invalid; see report checks");
                MkStatus::InvalidInput
            }
        })
    })
}

/// Mukai pairing of two comma-separated vectors `r,ξ_1,...,ξ_n,s`. The
/// exact value is written to `*out` as `p/q`.
///
/// # Safety
/// String arguments must be NUL-terminated; `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mk_pair(
    cfg: *const MkConfig,
    u: *const c_char,
    v: *const c_char,
    out: *mut *mut c_char,
) -> MkStatus {
    guard(|| {
        let cfg = handle(cfg)?;
        let u = vector(&cfg.config, text(u, "u")?, "u")?;
        let v = vector(&cfg.config, text(v, "v")?, "v")?;
        let value = cfg.config.surface.pair(&u, &v)?;
        write_string(out, format_rational(&value))?;
        Ok(MkStatus::Ok)
    })
}

/// Image of a comma-separated vector under the configured transform,
/// written to `*out` in the same comma-separated form.
///
/// # Safety
/// String arguments must be NUL-terminated; `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mk_fm_apply(cfg: *const MkConfig, v: *const c_char, out: *mut *mut c_char) -> MkStatus {
    guard(|| {
        let cfg = handle(cfg)?;
        let fm = cfg
            .config
            .fm
            .as_ref()
            .ok_or_else(|| Failure(MkStatus::InvalidInput, "config has no fm block".into()))?;
        let v = vector(&cfg.config, text(v, "v")?, "v")?;
        let image = fm.apply(&v)?;
        let parts: Vec<String> = image.coords().iter().map(format_rational).collect();
        write_string(out, parts.join(","))?;
        Ok(MkStatus::Ok)
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn mk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
