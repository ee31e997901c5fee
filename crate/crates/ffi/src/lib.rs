//! C ABI over `effcond`.
//!
//! Every fallible call returns an [`EffcondStatus`]; on failure a message is
//! kept per thread and can be read with [`effcond_last_error_message`].
//! Handles are opaque and released with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use effcond::{
    build_sum_table, expand_effective_series, sigma22_series, solve_tensor, BiPolynomial, CompositeParams,
    Error, FormulaId, Lattice, LatticeSumTable, SolveMethod,
};
use num_complex::Complex64;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffcondStatus {
    Ok = 0,
    InvalidArgument = 1,
    ConvergenceFailure = 2,
    SingularSystem = 3,
    DomainError = 4,
    Pole = 5,
    IoError = 6,
    NullPointer = 7,
    Panic = 8,
}

/// Closed-form formula selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffcondFormula {
    Cma = 0,
    PerrinsHex = 1,
    KellerHex = 2,
    MatchedPerfectHex = 3,
    MatchedContrastHex = 4,
}

impl From<EffcondFormula> for FormulaId {
    fn from(f: EffcondFormula) -> Self {
        match f {
            EffcondFormula::Cma => FormulaId::Cma,
            EffcondFormula::PerrinsHex => FormulaId::PerrinsHex,
            EffcondFormula::KellerHex => FormulaId::KellerHex,
            EffcondFormula::MatchedPerfectHex => FormulaId::MatchedPerfectHex,
            EffcondFormula::MatchedContrastHex => FormulaId::MatchedContrastHex,
        }
    }
}

/// Effective conductivity tensor with the residual of the computation.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EffcondTensor {
    pub sigma11: f64,
    pub sigma12: f64,
    pub sigma22: f64,
    pub residual: f64,
}

pub struct EffcondLattice(Lattice);

pub struct EffcondSumTable(LatticeSumTable);

/// Expansions of `σ11 - iσ12` and `σ22`.
pub struct EffcondSeries {
    first: BiPolynomial,
    second: BiPolynomial,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> EffcondStatus {
    match err {
        Error::InvalidArgument(_) => EffcondStatus::InvalidArgument,
        Error::ConvergenceFailure { .. } => EffcondStatus::ConvergenceFailure,
        Error::SingularSystem { .. } => EffcondStatus::SingularSystem,
        Error::Domain(_) => EffcondStatus::DomainError,
        Error::Pole(_) => EffcondStatus::Pole,
        Error::Io { .. } => EffcondStatus::IoError,
    }
}

struct Null(&'static str);

enum Failure {
    Core(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<Null> for Failure {
    fn from(n: Null) -> Self {
        Failure::Null(n.0)
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> EffcondStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => EffcondStatus::Ok,
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer passed for {what}"));
            EffcondStatus::NullPointer
        }
        Err(_) => {
            set_error("internal panic".to_string());
            EffcondStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Null> {
    // SAFETY: the caller passes either null or a valid pointer from this library.
    unsafe { p.as_ref() }.ok_or(Null(what))
}

unsafe fn write<T>(p: *mut T, value: T, what: &'static str) -> Result<(), Null> {
    if p.is_null() {
        return Err(Null(what));
    }
    // SAFETY: non-null and, per the contract, valid for writes.
    unsafe { p.write(value) };
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn effcond_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn effcond_lattice_square(out: *mut *mut EffcondLattice) -> EffcondStatus {
    guard(|| Ok(unsafe { write(out, boxed(EffcondLattice(Lattice::square())), "out") }?))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn effcond_lattice_hexagonal(out: *mut *mut EffcondLattice) -> EffcondStatus {
    guard(|| Ok(unsafe { write(out, boxed(EffcondLattice(Lattice::hexagonal())), "out") }?))
}

/// Rectangular cell with side ratio `aspect`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn effcond_lattice_rectangular(aspect: f64, out: *mut *mut EffcondLattice) -> EffcondStatus {
    guard(|| {
        let lattice = Lattice::rectangular(aspect)?;
        Ok(unsafe { write(out, boxed(EffcondLattice(lattice)), "out") }?)
    })
}

/// Lattice spanned by `1` and `tau_re + i tau_im`, rescaled to unit area.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn effcond_lattice_general(
    tau_re: f64,
    tau_im: f64,
    out: *mut *mut EffcondLattice,
) -> EffcondStatus {
    guard(|| {
        let lattice = Lattice::general(Complex64::new(tau_re, tau_im))?;
        Ok(unsafe { write(out, boxed(EffcondLattice(lattice)), "out") }?)
    })
}

/// Concentration at which neighbouring disks touch; NaN for a null handle.
///
/// # Safety
/// `lattice` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn effcond_lattice_touching_concentration(lattice: *const EffcondLattice) -> f64 {
    unsafe { lattice.as_ref() }.map_or(f64::NAN, |l| l.0.touching_concentration())
}

/// # Safety
/// `lattice` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn effcond_lattice_free(lattice: *mut EffcondLattice) {
    if !lattice.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(lattice) });
    }
}

/// Lattice sums `S_2 ..= S_max_order` to absolute accuracy `tolerance`.
///
/// # Safety
/// `lattice` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn effcond_sum_table_build(
    lattice: *const EffcondLattice,
    max_order: u32,
    tolerance: f64,
    out: *mut *mut EffcondSumTable,
) -> EffcondStatus {
    guard(|| {
        let lattice = unsafe { deref(lattice, "lattice") }?;
        let table = build_sum_table(&lattice.0, max_order, tolerance)?;
        Ok(unsafe { write(out, boxed(EffcondSumTable(table)), "out") }?)
    })
}

/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn effcond_sum_table_max_order(table: *const EffcondSumTable) -> u32 {
    unsafe { table.as_ref() }.map_or(0, |t| t.0.max_order())
}

/// # Safety
/// `table` must be a live handle; `re` and `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn effcond_sum_table_get(
    table: *const EffcondSumTable,
    order: u32,
    re: *mut f64,
    im: *mut f64,
) -> EffcondStatus {
    guard(|| {
        let s = unsafe { deref(table, "table") }?.0.require(order)?;
        unsafe {
            write(re, s.re, "re")?;
            write(im, s.im, "im")?;
        }
        Ok(())
    })
}

/// # Safety
/// `table` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn effcond_sum_table_free(table: *mut EffcondSumTable) {
    if !table.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(table) });
    }
}

/// Solves the truncated system at truncation order `truncation`; LU when
/// `max_iter` is 0, successive approximations otherwise.
///
/// # Safety
/// `table` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn effcond_solve(
    table: *const EffcondSumTable,
    f: f64,
    rho: f64,
    truncation: u32,
    max_iter: u32,
    iter_tol: f64,
    out: *mut EffcondTensor,
) -> EffcondStatus {
    guard(|| {
        let table = &unsafe { deref(table, "table") }?.0;
        let params = CompositeParams::new(table.lattice(), f, rho)?;
        let method = if max_iter == 0 {
            SolveMethod::Direct
        } else {
            SolveMethod::Iterative {
                max_iter: max_iter as usize,
                tol: iter_tol,
            }
        };
        let sol = solve_tensor(table, &params, truncation as usize, method)?;
        let tensor = EffcondTensor {
            sigma11: sol.tensor.sigma11,
            sigma12: sol.tensor.sigma12,
            sigma22: sol.tensor.sigma22,
            residual: sol.residual,
        };
        Ok(unsafe { write(out, tensor, "out") }?)
    })
}

/// Expansions of both principal conductivities through `f^order`.
///
/// # Safety
/// `table` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn effcond_series_expand(
    table: *const EffcondSumTable,
    order: u32,
    out: *mut *mut EffcondSeries,
) -> EffcondStatus {
    guard(|| {
        let table = &unsafe { deref(table, "table") }?.0;
        let series = EffcondSeries {
            first: expand_effective_series(table, order as usize)?,
            second: sigma22_series(table, order as usize)?,
        };
        Ok(unsafe { write(out, boxed(series), "out") }?)
    })
}

/// Coefficient of `rho^k f^j` in `σ11 - iσ12`.
///
/// # Safety
/// `series` must be a live handle; `re` and `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn effcond_series_coefficient(
    series: *const EffcondSeries,
    j: u32,
    k: u32,
    re: *mut f64,
    im: *mut f64,
) -> EffcondStatus {
    guard(|| {
        let c = unsafe { deref(series, "series") }?.first.coeff(j as usize, k as usize);
        unsafe {
            write(re, c.re, "re")?;
            write(im, c.im, "im")?;
        }
        Ok(())
    })
}

/// # Safety
/// `series` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn effcond_series_evaluate(
    series: *const EffcondSeries,
    f: f64,
    rho: f64,
    out: *mut EffcondTensor,
) -> EffcondStatus {
    guard(|| {
        let s = unsafe { deref(series, "series") }?;
        let first = s.first.evaluate(rho, f);
        let tensor = EffcondTensor {
            sigma11: first.re,
            sigma12: -first.im,
            sigma22: s.second.evaluate(rho, f).re,
            residual: s.first.tail_estimate(rho, f),
        };
        Ok(unsafe { write(out, tensor, "out") }?)
    })
}

/// # Safety
/// `series` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn effcond_series_free(series: *mut EffcondSeries) {
    if !series.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(series) });
    }
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn effcond_closed_form(
    formula: EffcondFormula,
    f: f64,
    rho: f64,
    out: *mut f64,
) -> EffcondStatus {
    guard(|| {
        let v = FormulaId::from(formula).evaluate(f, rho)?;
        Ok(unsafe { write(out, v, "out") }?)
    })
}
