//! C ABI over `geogate`.
//!
//! Every fallible function returns a [`GeogateStatus`]; on failure the
//! message is available from [`geogate_last_error`] until the next call on
//! the same thread. Gates are passed around as opaque [`GeogateUnitary`]
//! handles and must be released with [`geogate_unitary_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use geogate::gates::{
    build_geometric_gate, cnot, cz, exchange_gate, factorization_test, hadamard, hybrid_cnot_sequence, pi8_gate,
    solve_aa_gate, solve_berry_gate, swap, tilted_phase_gate, two_qubit_geometric_audit, BuildMode, GateSpec,
    GateTarget, GeometricMechanism, Mechanism, SolvedParameters,
};
use geogate::linalg::{distance_up_to_global_phase, makhlin_invariants};
use geogate::phase::berry_phase_connection;
use geogate::{ComplexMatrix, Error, FieldConfig, TwoQubitConfig, Unitary, C64};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeogateStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotUnitary = 4,
    Unreachable = 5,
    GapClosed = 6,
    NotCyclic = 7,
    Numerical = 8,
    Panic = 9,
}

impl From<&Error> for GeogateStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DimensionMismatch { .. } | Error::UnsupportedDimension(_) => GeogateStatus::DimensionMismatch,
            Error::NotUnitary { .. } => GeogateStatus::NotUnitary,
            Error::Unreachable(_) | Error::NoRealRoot { .. } => GeogateStatus::Unreachable,
            Error::GapClosed { .. } | Error::DegenerateExchange | Error::ZeroField => GeogateStatus::GapClosed,
            Error::NotCyclic { .. } => GeogateStatus::NotCyclic,
            Error::NonFinite | Error::NonHermitianInput { .. } | Error::NotNormalized { .. } => GeogateStatus::Numerical,
            _ => GeogateStatus::InvalidArgument,
        }
    }
}

/// Opaque unitary gate (2 x 2 or 4 x 4).
pub struct GeogateUnitary {
    inner: Unitary,
}

/// Values of the `mechanism` argument of [`geogate_two_qubit_audit`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeogateMechanism {
    Berry = 0,
    AharonovAnandan = 1,
}

/// Values of the `which` argument of [`geogate_standard_gate`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeogateStandardGate {
    Pi8 = 0,
    Hadamard = 1,
    Cz = 2,
    Cnot = 3,
    Swap = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: GeogateStatus, msg: impl Into<String>) -> GeogateStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), GeogateStatus>) -> GeogateStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GeogateStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(GeogateStatus::Panic, "internal panic"),
    }
}

fn lib(e: Error) -> GeogateStatus {
    fail(GeogateStatus::from(&e), e.to_string())
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), GeogateStatus> {
    if p.is_null() {
        Err(fail(GeogateStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(())
    }
}

unsafe fn handle<'a>(p: *const GeogateUnitary, name: &str) -> Result<&'a Unitary, GeogateStatus> {
    non_null(p, name)?;
    Ok(&(*p).inner)
}

unsafe fn emit(out: *mut *mut GeogateUnitary, u: Unitary) -> Result<(), GeogateStatus> {
    non_null(out, "out")?;
    *out = Box::into_raw(Box::new(GeogateUnitary { inner: u }));
    Ok(())
}

/// Message for the last failed call on this thread, or null. Owned by the
/// library; valid until the next call.
#[no_mangle]
pub extern "C" fn geogate_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn geogate_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a unitary from `dim * dim` row-major real and imaginary parts.
///
/// # Safety
/// `re` and `im` must point to `dim * dim` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn geogate_unitary_new(
    dim: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut GeogateUnitary,
) -> GeogateStatus {
    guard(|| {
        non_null(re, "re")?;
        non_null(im, "im")?;
        if dim != 2 && dim != 4 {
            return Err(lib(Error::UnsupportedDimension(dim)));
        }
        let n = dim * dim;
        let (re, im) = (std::slice::from_raw_parts(re, n), std::slice::from_raw_parts(im, n));
        let entries: Vec<C64> = re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)).collect();
        let m = ComplexMatrix::from_row_major(&entries).map_err(lib)?;
        emit(out, Unitary::new(m).map_err(lib)?)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `u` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn geogate_unitary_free(u: *mut GeogateUnitary) {
    if !u.is_null() {
        drop(Box::from_raw(u));
    }
}

/// Dimension of the gate, or 0 for a null handle.
///
/// # Safety
/// `u` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn geogate_unitary_dim(u: *const GeogateUnitary) -> usize {
    if u.is_null() {
        0
    } else {
        (*u).inner.dim()
    }
}

/// Copies the row-major entries into `re` and `im`, each of length `len`
/// (at least dim * dim).
///
/// # Safety
/// `re` and `im` must be writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn geogate_unitary_entries(
    u: *const GeogateUnitary,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> GeogateStatus {
    guard(|| {
        let u = handle(u, "u")?;
        non_null(re, "re")?;
        non_null(im, "im")?;
        let entries = u.matrix().entries();
        if len < entries.len() {
            return Err(fail(GeogateStatus::DimensionMismatch, format!("buffer holds {len}, need {}", entries.len())));
        }
        for (k, z) in entries.iter().enumerate() {
            *re.add(k) = z.re;
            *im.add(k) = z.im;
        }
        Ok(())
    })
}

/// Product `first` then `second`, i.e. the matrix second * first.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn geogate_unitary_then(
    first: *const GeogateUnitary,
    second: *const GeogateUnitary,
    out: *mut *mut GeogateUnitary,
) -> GeogateStatus {
    guard(|| {
        let (a, b) = (handle(first, "first")?, handle(second, "second")?);
        if a.dim() != b.dim() {
            return Err(lib(Error::DimensionMismatch { expected: a.dim(), got: b.dim() }));
        }
        emit(out, b.then_after(a))
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn geogate_standard_gate(which: u32, out: *mut *mut GeogateUnitary) -> GeogateStatus {
    guard(|| {
        let u = match which {
            w if w == GeogateStandardGate::Pi8 as u32 => pi8_gate(),
            w if w == GeogateStandardGate::Hadamard as u32 => hadamard(),
            w if w == GeogateStandardGate::Cz as u32 => cz(),
            w if w == GeogateStandardGate::Cnot as u32 => cnot(),
            w if w == GeogateStandardGate::Swap as u32 => swap(),
            w => return Err(fail(GeogateStatus::InvalidArgument, format!("unknown gate {w}"))),
        };
        emit(out, u)
    })
}

/// Global-phase-invariant distance between two gates of equal dimension.
///
/// # Safety
/// Handles must be live; `distance` must be writable.
#[no_mangle]
pub unsafe extern "C" fn geogate_distance(
    a: *const GeogateUnitary,
    b: *const GeogateUnitary,
    distance: *mut f64,
) -> GeogateStatus {
    guard(|| {
        non_null(distance, "distance")?;
        *distance = distance_up_to_global_phase(handle(a, "a")?, handle(b, "b")?).map_err(lib)?;
        Ok(())
    })
}

/// Makhlin invariants G1 (complex) and G2 of a two-qubit gate.
///
/// # Safety
/// `u` must be live; output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn geogate_makhlin(
    u: *const GeogateUnitary,
    g1_re: *mut f64,
    g1_im: *mut f64,
    g2: *mut f64,
) -> GeogateStatus {
    guard(|| {
        non_null(g1_re, "g1_re")?;
        non_null(g1_im, "g1_im")?;
        non_null(g2, "g2")?;
        let m = makhlin_invariants(handle(u, "u")?).map_err(lib)?;
        *g1_re = m.g1.re;
        *g1_im = m.g1.im;
        *g2 = m.g2;
        Ok(())
    })
}

/// Whether a two-qubit gate is a product of single-qubit gates, with the
/// defect used for the verdict.
///
/// # Safety
/// `u` must be live; output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn geogate_factorization(
    u: *const GeogateUnitary,
    factorizable: *mut bool,
    defect: *mut f64,
) -> GeogateStatus {
    guard(|| {
        non_null(factorizable, "factorizable")?;
        non_null(defect, "defect")?;
        let f = factorization_test(handle(u, "u")?).map_err(lib)?;
        *factorizable = f.factorizable;
        *defect = f.defect;
        Ok(())
    })
}

/// exp(-i J t (S_a . S_b)) on two spins.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn geogate_exchange_gate(j: f64, t: f64, out: *mut *mut GeogateUnitary) -> GeogateStatus {
    guard(|| emit(out, exchange_gate(j, t).map_err(lib)?))
}

/// The five-factor exchange sequence; equals CZ up to global phase.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn geogate_hybrid_cnot(out: *mut *mut GeogateUnitary) -> GeogateStatus {
    guard(|| emit(out, hybrid_cnot_sequence().map_err(lib)?.product))
}

unsafe fn build(
    params: SolvedParameters,
    gamma: f64,
    chi: f64,
    mechanism: Mechanism,
    mode: BuildMode,
    out: *mut *mut GeogateUnitary,
    distance: *mut f64,
) -> Result<(), GeogateStatus> {
    let params = params.with_chi(chi);
    let spec = GateSpec::new(GateTarget::Custom(tilted_phase_gate(gamma, chi)), mechanism).map_err(lib)?;
    let built = build_geometric_gate(&spec, &params, mode).map_err(lib)?;
    if !distance.is_null() {
        *distance = built.distance;
    }
    emit(out, built.unitary)
}

/// Berry-phase gate R(chi) diag(e^{i gamma}, e^{-i gamma}) R(chi)^dagger from
/// the two-cycle echo. `slowness <= 0` returns the closed form; otherwise the
/// schedule is integrated at that slowness. `distance` (nullable) receives
/// the distance to the ideal gate.
///
/// # Safety
/// `out` must be writable; `distance` may be null.
#[no_mangle]
pub unsafe extern "C" fn geogate_berry_gate(
    gamma: f64,
    b1: f64,
    chi: f64,
    slowness: f64,
    out: *mut *mut GeogateUnitary,
    distance: *mut f64,
) -> GeogateStatus {
    guard(|| {
        let params = solve_berry_gate(gamma, b1).map_err(lib)?;
        let mode = if slowness > 0.0 {
            BuildMode::Stepped { slowness: Some(slowness), steps: None }
        } else {
            BuildMode::ClosedForm
        };
        build(params, gamma, chi, Mechanism::BerryEcho, mode, out, distance)
    })
}

/// Aharonov-Anandan gate with zero dynamical phase over one exact period.
///
/// # Safety
/// `out` must be writable; `distance` may be null.
#[no_mangle]
pub unsafe extern "C" fn geogate_aa_gate(
    gamma: f64,
    b1: f64,
    kappa: f64,
    chi: f64,
    out: *mut *mut GeogateUnitary,
    distance: *mut f64,
) -> GeogateStatus {
    guard(|| {
        let params = solve_aa_gate(gamma, b1, kappa).map_err(lib)?;
        build(params, gamma, chi, Mechanism::AaZeroDynamical, BuildMode::Exact { slowness: None }, out, distance)
    })
}

/// Berry phase of single-spin eigenstate `index` (0: lower energy) over one
/// loop of the field, from the discretized connection on `grid` points.
///
/// # Safety
/// `phase` must be writable.
#[no_mangle]
pub unsafe extern "C" fn geogate_single_berry_phase(
    b0: f64,
    b1: f64,
    kappa: f64,
    index: usize,
    grid: usize,
    phase: *mut f64,
) -> GeogateStatus {
    guard(|| {
        non_null(phase, "phase")?;
        let f = FieldConfig::new(b0, b1, 1.0, kappa).map_err(lib)?;
        if index > 1 {
            return Err(fail(GeogateStatus::InvalidArgument, format!("eigenstate index {index} out of range")));
        }
        *phase = berry_phase_connection(&f, index, grid).map_err(lib)?.wrapped;
        Ok(())
    })
}

/// Geometric phases of the four two-spin eigenstates and the factorization
/// defect of the two-qubit gate they generate.
///
/// # Safety
/// `phases` must be writable for 4 doubles; `defect` must be writable.
#[no_mangle]
pub unsafe extern "C" fn geogate_two_qubit_audit(
    mechanism: u32,
    b0: f64,
    b1: f64,
    omega: f64,
    kappa_alpha: f64,
    kappa_beta: f64,
    j: f64,
    phases: *mut f64,
    defect: *mut f64,
) -> GeogateStatus {
    guard(|| {
        non_null(phases, "phases")?;
        non_null(defect, "defect")?;
        let field = FieldConfig::new(b0, b1, omega, 1.0).map_err(lib)?;
        let cfg = TwoQubitConfig::new(field, kappa_alpha, kappa_beta, j).map_err(lib)?;
        let m = match mechanism {
            m if m == GeogateMechanism::Berry as u32 => GeometricMechanism::Berry,
            m if m == GeogateMechanism::AharonovAnandan as u32 => GeometricMechanism::AharonovAnandan,
            m => return Err(fail(GeogateStatus::InvalidArgument, format!("unknown mechanism {m}"))),
        };
        let audit = two_qubit_geometric_audit(&cfg, m).map_err(lib)?;
        for (k, p) in audit.phases.iter().enumerate() {
            *phases.add(k) = *p;
        }
        *defect = audit.factorization.defect;
        Ok(())
    })
}
