//! C ABI over `pnlab`.
//!
//! Groups cross the boundary as opaque `PnlabGroup` handles owned by the
//! caller and released with `pnlab_group_free`. Every call returns a
//! `PnlabStatus`; on failure the message is kept per thread and can be read
//! with `pnlab_last_error`. Panics are caught and reported as
//! `PNLAB_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use pnlab::analysis;
use pnlab::ancestry::{self, Descendant, Iso};
use pnlab::enumeration;
use pnlab::{catalog, check_consistency, ElementNF, Error, Group, Presentation};

/// Result code of every exported function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PnlabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    NotPrime = 4,
    InvalidPresentation = 5,
    Inconsistent = 6,
    CollectionBudget = 7,
    NotNormal = 8,
    PowerSubgroup = 9,
    NotPowerfullyNilpotent = 10,
    Infeasible = 11,
    Domain = 12,
    Internal = 13,
    BufferTooSmall = 14,
    UnknownFixture = 15,
    Panic = 16,
}

impl From<&Error> for PnlabStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Syntax { .. } => PnlabStatus::Syntax,
            Error::NotPrime(_) => PnlabStatus::NotPrime,
            Error::InvalidPresentation(_) => PnlabStatus::InvalidPresentation,
            Error::Inconsistent(_) => PnlabStatus::Inconsistent,
            Error::CollectionBudget(_) => PnlabStatus::CollectionBudget,
            Error::NotNormal => PnlabStatus::NotNormal,
            Error::PowerSubgroup(_) => PnlabStatus::PowerSubgroup,
            Error::NotPowerfullyNilpotent => PnlabStatus::NotPowerfullyNilpotent,
            Error::Infeasible(_) => PnlabStatus::Infeasible,
            Error::Domain(_) => PnlabStatus::Domain,
            Error::Internal(_) => PnlabStatus::Internal,
        }
    }
}

/// Opaque group handle.
pub struct PnlabGroup {
    inner: Group,
}

/// Outcome of an isomorphism test.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PnlabIso {
    No = 0,
    Yes = 1,
    Unknown = 2,
}

/// Invariants of a group. Fields that only exist for powerfully nilpotent
/// groups (`c`, `d`, `s`, `t`) are `-1` otherwise.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PnlabReport {
    pub p: u32,
    pub n: u32,
    pub r: u32,
    pub e: u32,
    pub c: i32,
    pub d: i32,
    pub s: i32,
    pub t: i32,
    pub powerful: bool,
    pub strongly_powerful: bool,
    pub powerfully_nilpotent: bool,
    pub maximal_tail: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Fail(PnlabStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(PnlabStatus::from(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PnlabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            PnlabStatus::Ok
        }
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("panic inside pnlab".into());
            PnlabStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(PnlabStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|_| Fail(PnlabStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn group<'a>(g: *const PnlabGroup) -> Result<&'a Group, Fail> {
    g.as_ref().map(|h| &h.inner).ok_or_else(null)
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(null)
}

fn boxed(g: Group) -> *mut PnlabGroup {
    Box::into_raw(Box::new(PnlabGroup { inner: g }))
}

/// Copies `s` plus a terminating NUL into `buf`. `needed` receives the
/// full size including the NUL, also when the buffer is too small.
unsafe fn write_str(s: &str, buf: *mut c_char, cap: usize, needed: *mut usize) -> Result<(), Fail> {
    let bytes = s.as_bytes();
    if let Some(n) = needed.as_mut() {
        *n = bytes.len() + 1;
    }
    if buf.is_null() || cap < bytes.len() + 1 {
        return Err(Fail(PnlabStatus::BufferTooSmall, format!("need {} bytes", bytes.len() + 1)));
    }
    std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, bytes.len());
    *buf.add(bytes.len()) = 0;
    Ok(())
}

/// Message for the last failed call on this thread (empty after success).
///
/// # Safety
/// `buf` must point to `cap` writable bytes or be null; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn pnlab_last_error(buf: *mut c_char, cap: usize, needed: *mut usize) -> PnlabStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    match write_str(&msg, buf, cap, needed) {
        Ok(()) => PnlabStatus::Ok,
        Err(Fail(code, _)) => code,
    }
}

/// Parses presentation-file text and builds the group.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pnlab_group_parse(text_: *const c_char, out_: *mut *mut PnlabGroup) -> PnlabStatus {
    guard(|| {
        let slot = out(out_)?;
        *slot = std::ptr::null_mut();
        let g = Group::parse(text(text_)?)?;
        *slot = boxed(g);
        Ok(())
    })
}

/// Builds a named catalog fixture such as `"sec4ex1_p3_r2"`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pnlab_group_fixture(name: *const c_char, out_: *mut *mut PnlabGroup) -> PnlabStatus {
    guard(|| {
        let slot = out(out_)?;
        *slot = std::ptr::null_mut();
        let name = text(name)?;
        let pres = catalog::fixture(name).ok_or_else(|| Fail(PnlabStatus::UnknownFixture, format!("no fixture named {name}")))?;
        *slot = boxed(Group::from_presentation(&pres)?);
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `g` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pnlab_group_free(g: *mut PnlabGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// `p`, `log_p |G|` and the number of presentation generators.
///
/// # Safety
/// `g` must be a live handle; each out pointer may be null.
#[no_mangle]
pub unsafe extern "C" fn pnlab_group_info(g: *const PnlabGroup, p: *mut u32, n: *mut u32, rank: *mut usize) -> PnlabStatus {
    guard(|| {
        let g = group(g)?;
        if let Some(v) = p.as_mut() {
            *v = g.p();
        }
        if let Some(v) = n.as_mut() {
            *v = g.n();
        }
        if let Some(v) = rank.as_mut() {
            *v = g.rank();
        }
        Ok(())
    })
}

/// Normal-form product: `a`, `b` and `out` hold `rank` exponents each.
///
/// # Safety
/// `g` must be a live handle; `a` and `b` readable and `out` writable for
/// `rank` entries.
#[no_mangle]
pub unsafe extern "C" fn pnlab_group_multiply(
    g: *const PnlabGroup,
    a: *const u64,
    b: *const u64,
    rank: usize,
    out_: *mut u64,
) -> PnlabStatus {
    guard(|| {
        let g = group(g)?;
        if a.is_null() || b.is_null() || out_.is_null() {
            return Err(null());
        }
        if rank != g.rank() {
            return Err(Fail(PnlabStatus::Domain, format!("expected {} exponents, got {rank}", g.rank())));
        }
        let x = ElementNF(std::slice::from_raw_parts(a, rank).to_vec());
        let y = ElementNF(std::slice::from_raw_parts(b, rank).to_vec());
        for (k, &v) in x.0.iter().chain(&y.0).enumerate() {
            let order = g.presentation().order(k % rank);
            if v >= order {
                return Err(Fail(PnlabStatus::Domain, format!("exponent {v} out of range 0..{order}")));
            }
        }
        let z = g.multiply(&x, &y)?;
        std::slice::from_raw_parts_mut(out_, rank).copy_from_slice(&z.0);
        Ok(())
    })
}

/// Invariants, predicates, class, coclass, p-th power length and tail.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pnlab_analyze(g: *const PnlabGroup, out_: *mut PnlabReport) -> PnlabStatus {
    guard(|| {
        let g = group(g)?;
        let slot = out(out_)?;
        let rep = analysis::analyze(g)?;
        let opt = |v: Option<u32>| v.map_or(-1, |x| x as i32);
        *slot = PnlabReport {
            p: rep.p,
            n: rep.n,
            r: rep.r,
            e: rep.e,
            c: opt(rep.c),
            d: opt(rep.d),
            s: opt(rep.s),
            t: opt(rep.t),
            powerful: rep.powerful,
            strongly_powerful: rep.strongly_powerful,
            powerfully_nilpotent: rep.pn,
            maximal_tail: rep.maximal_tail.unwrap_or(false),
        };
        Ok(())
    })
}

/// Runs the overlap tests on presentation-file text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `consistent` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pnlab_check_consistency(text_: *const c_char, consistent: *mut bool) -> PnlabStatus {
    guard(|| {
        let slot = out(consistent)?;
        let pres = Presentation::parse(text(text_)?)?;
        *slot = check_consistency(&pres)?.consistent;
        Ok(())
    })
}

/// Isomorphism test with a backtracking budget (0 selects the default).
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pnlab_are_isomorphic(
    a: *const PnlabGroup,
    b: *const PnlabGroup,
    budget: u64,
    out_: *mut PnlabIso,
) -> PnlabStatus {
    guard(|| {
        let (g, h) = (group(a)?, group(b)?);
        let slot = out(out_)?;
        let budget = if budget == 0 { ancestry::ISO_BUDGET } else { budget };
        *slot = match ancestry::are_isomorphic(g, h, budget)? {
            Iso::Yes(_) => PnlabIso::Yes,
            Iso::No => PnlabIso::No,
            Iso::Unknown => PnlabIso::Unknown,
        };
        Ok(())
    })
}

/// The direct descendant `G/Z(G)^p`; `*out` is null for abelian `G`.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pnlab_direct_descendant(g: *const PnlabGroup, out_: *mut *mut PnlabGroup) -> PnlabStatus {
    guard(|| {
        let g = group(g)?;
        let slot = out(out_)?;
        *slot = std::ptr::null_mut();
        if let Descendant::Group(q) = ancestry::direct_descendant(g)? {
            *slot = boxed(q.group);
        }
        Ok(())
    })
}

/// Presentation-file text of the group.
///
/// # Safety
/// `g` must be a live handle; `buf` must point to `cap` writable bytes or
/// be null; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn pnlab_group_to_text(
    g: *const PnlabGroup,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> PnlabStatus {
    guard(|| {
        let g = group(g)?;
        write_str(&g.presentation().to_text(), buf, cap, needed)
    })
}

/// Exponent `h(x)` with `|P(n, x)| = p^{h(x)}`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pnlab_h_value(n: u64, x: u64, out_: *mut i64) -> PnlabStatus {
    guard(|| {
        let slot = out(out_)?;
        let h = enumeration::h_value(n, x)?;
        *slot = i64::try_from(h).map_err(|_| Fail(PnlabStatus::Domain, "h(x) exceeds 64 bits".into()))?;
        Ok(())
    })
}
