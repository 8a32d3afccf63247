//! C ABI for the phase-boundary library.
//!
//! Every function returns a [`PhasesStatus`]; results come back through out
//! pointers. Handles are opaque and must be released with the matching
//! `*_free` function. After a non-OK status, [`phases_last_error`] holds a
//! description of the failure for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cavity_hubbard::diagram::{scan_grid, species_window, PhaseGrid, PhaseLabel};
use cavity_hubbard::hubbard::single_mott_window;
use cavity_hubbard::landau;
use cavity_hubbard::oracle::verify_random;
use cavity_hubbard::presets::{figure_preset, FigureId, Variant};
use cavity_hubbard::{ChemicalPotentials, MottWindow, Occupation, PhaseError, PhysicalParams, ScaledParams, Species};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhasesStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument failed validation.
    InvalidArgument = 2,
    /// A pole was hit or the interaction matrix is singular.
    Numerical = 3,
    /// The requested species has no atoms in the occupation.
    EmptySpecies = 4,
    UnknownFigure = 5,
    /// Oracle verification failed for at least one draw.
    OracleFailed = 6,
    /// The library panicked; this is a bug.
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhasesVariant {
    Single = 0,
    Two = 1,
    Cavity = 2,
    General = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhasesSpecies {
    Ground = 0,
    Excited = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhasesLabel {
    Superfluid = 0,
    MottInsulator = 1,
    /// Ground superfluid, excited Mott.
    SuperfluidMott = 2,
    /// Ground Mott, excited superfluid.
    MottSuperfluid = 3,
}

/// Chemical-potential window; the bounds are meaningful only when `present` is nonzero.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhasesWindow {
    pub present: u8,
    pub mu_minus: f64,
    pub mu_plus: f64,
}

/// Parameters in absolute energy units.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasesPhysical {
    pub j_g: f64,
    pub j_e: f64,
    pub u_g: f64,
    pub u_e: f64,
    pub u_eg: f64,
    pub f_sq: f64,
    pub eps_g: f64,
    pub eps_e: f64,
    pub eps_c: f64,
    pub z: u32,
}

/// Scaled model parameters.
pub struct PhasesModel {
    params: ScaledParams,
}

/// Phase labels of a figure scan.
pub struct PhasesGrid {
    grid: PhaseGrid,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &PhaseError) -> PhasesStatus {
    match e {
        PhaseError::EmptySpecies { .. } => PhasesStatus::EmptySpecies,
        PhaseError::UnknownFigure(_) => PhasesStatus::UnknownFigure,
        e if e.is_numerical() => PhasesStatus::Numerical,
        _ => PhasesStatus::InvalidArgument,
    }
}

struct Failure(PhasesStatus, String);

impl From<PhaseError> for Failure {
    fn from(e: PhaseError) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(PhasesStatus::NullPointer, format!("`{name}` is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(PhasesStatus::InvalidArgument, msg.into())
}

/// Run `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PhasesStatus {
    let outcome = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".into());
        Err(Failure(PhasesStatus::Internal, msg))
    });
    match outcome {
        Ok(()) => {
            set_last_error("");
            PhasesStatus::Ok
        }
        Err(Failure(status, msg)) => {
            set_last_error(&msg);
            status
        }
    }
}

/// # Safety
/// `p` must be null or valid for writes of `T`.
unsafe fn write<T>(p: *mut T, name: &str, value: T) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    p.write(value);
    Ok(())
}

fn to_c_window(w: MottWindow) -> PhasesWindow {
    match w.bounds() {
        Some((lo, hi)) => PhasesWindow {
            present: 1,
            mu_minus: lo,
            mu_plus: hi,
        },
        None => PhasesWindow::default(),
    }
}

// Enum arguments arrive as plain integers: an out-of-range value in a Rust
// enum would be undefined behaviour, so they are checked here.
fn species(code: u32) -> Result<Species, Failure> {
    match code {
        c if c == PhasesSpecies::Ground as u32 => Ok(Species::Ground),
        c if c == PhasesSpecies::Excited as u32 => Ok(Species::Excited),
        c => Err(invalid(format!("unknown species code {c}"))),
    }
}

fn variant(code: u32) -> Result<Variant, Failure> {
    [
        (PhasesVariant::Single, Variant::Single),
        (PhasesVariant::Two, Variant::Two),
        (PhasesVariant::Cavity, Variant::Cavity),
        (PhasesVariant::General, Variant::General),
    ]
    .into_iter()
    .find(|(c, _)| *c as u32 == code)
    .map(|(_, v)| v)
    .ok_or_else(|| invalid(format!("unknown variant code {code}")))
}

fn label(l: PhaseLabel) -> PhasesLabel {
    match l {
        PhaseLabel::SF => PhasesLabel::Superfluid,
        PhaseLabel::MI => PhasesLabel::MottInsulator,
        PhaseLabel::SM => PhasesLabel::SuperfluidMott,
        PhaseLabel::MS => PhasesLabel::MottSuperfluid,
    }
}

/// # Safety
/// `model` must be null or a live handle from this library.
unsafe fn model_ref<'a>(model: *const PhasesModel) -> Result<&'a PhasesModel, Failure> {
    model.as_ref().ok_or_else(|| null("model"))
}

/// Static description of a `PhasesStatus` code.
#[no_mangle]
pub extern "C" fn phases_status_message(status: u32) -> *const c_char {
    let s: &'static CStr = match status {
        0 => c"ok",
        1 => c"null pointer argument",
        2 => c"invalid argument",
        3 => c"numerical failure (pole or singular interaction)",
        4 => c"species has no atoms",
        5 => c"unknown figure id",
        6 => c"oracle verification failed",
        7 => c"internal error",
        _ => c"unknown status",
    };
    s.as_ptr()
}

/// Detail of the last failure on this thread; empty after a successful call.
/// The pointer stays valid until the next call into the library from this thread.
#[no_mangle]
pub extern "C" fn phases_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Create a model from scaled parameters.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn phases_model_new_scaled(
    u_g: f64,
    u_e: f64,
    u_eg_g: f64,
    u_eg_e: f64,
    f: f64,
    eps_c_g: f64,
    eps_c_e: f64,
    eps_g: f64,
    eps_e: f64,
    out: *mut *mut PhasesModel,
) -> PhasesStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let params = ScaledParams {
            u_g,
            u_e,
            u_eg_g,
            u_eg_e,
            f,
            eps_c_g,
            eps_c_e,
            eps_g,
            eps_e,
        };
        params.validate()?;
        write(out, "out", Box::into_raw(Box::new(PhasesModel { params })))
    })
}

/// Create a model from physical parameters, dividing by the hopping scales.
///
/// # Safety
/// `physical` must be valid for reads and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn phases_model_from_physical(
    physical: *const PhasesPhysical,
    out: *mut *mut PhasesModel,
) -> PhasesStatus {
    guard(|| {
        let p = physical.as_ref().ok_or_else(|| null("physical"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let params = PhysicalParams {
            j_g: p.j_g,
            j_e: p.j_e,
            u_g: p.u_g,
            u_e: p.u_e,
            u_eg: p.u_eg,
            f_sq: p.f_sq,
            eps_g: p.eps_g,
            eps_e: p.eps_e,
            eps_c: p.eps_c,
            z: p.z,
        }
        .scale()?;
        write(out, "out", Box::into_raw(Box::new(PhasesModel { params })))
    })
}

/// Release a model. Null is ignored.
///
/// # Safety
/// `model` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn phases_model_free(model: *mut PhasesModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Single-component lobe of filling `n` at `u = U/zJ` (unbarred).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn phases_single_window(n: u32, u: f64, out: *mut PhasesWindow) -> PhasesStatus {
    guard(|| write(out, "out", to_c_window(single_mott_window(n, u)?)))
}

/// Window of species `which` (a `PhasesSpecies`) in variant `kind` (a
/// `PhasesVariant`) for the occupation `(n_g, n_e, n_c)`, including the level
/// offset of the species. For `Single` only `n_g` and the ground species are used.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn phases_window(
    model: *const PhasesModel,
    kind: u32,
    which: u32,
    n_g: u32,
    n_e: u32,
    n_c: f64,
    out: *mut PhasesWindow,
) -> PhasesStatus {
    guard(|| {
        let m = model_ref(model)?;
        let occ = Occupation::new(n_g, n_e, n_c)?;
        let w = species_window(variant(kind)?, species(which)?, &occ, &m.params)?;
        write(out, "out", to_c_window(w))
    })
}

/// Both boundary coefficients at unbarred potentials `(mu_g, mu_e)`.
/// The point is on the superfluid side of a boundary where a coefficient is negative.
///
/// # Safety
/// `model` must be a live handle; `c_g` and `c_e` valid for writes.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn phases_residual(
    model: *const PhasesModel,
    n_g: u32,
    n_e: u32,
    n_c: f64,
    mu_g: f64,
    mu_e: f64,
    c_g: *mut f64,
    c_e: *mut f64,
) -> PhasesStatus {
    guard(|| {
        let m = model_ref(model)?;
        if c_g.is_null() || c_e.is_null() {
            return Err(null("c_g/c_e"));
        }
        let occ = Occupation::new(n_g, n_e, n_c)?;
        let r = landau::residual(ChemicalPotentials::new(mu_g, mu_e), &occ, &m.params)?;
        write(c_g, "c_g", r.c_g)?;
        write(c_e, "c_e", r.c_e)
    })
}

/// Check the closed-form second-order energy against the explicit state sum
/// on `count` random draws starting at `seed`. `passed` receives the number
/// of passing draws; the status is `OracleFailed` unless all pass.
///
/// # Safety
/// `passed` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn phases_oracle_verify(seed: u64, count: u64, passed: *mut u64) -> PhasesStatus {
    guard(|| {
        if passed.is_null() {
            return Err(null("passed"));
        }
        let reports = verify_random(seed, count);
        let ok = reports.iter().filter(|r| r.as_ref().is_ok_and(|r| r.pass)).count() as u64;
        write(passed, "passed", ok)?;
        if ok == count {
            Ok(())
        } else {
            Err(Failure(PhasesStatus::OracleFailed, format!("{} of {count} draws failed", count - ok)))
        }
    })
}

/// Scan a built-in figure (`"fig7"`, ...) on an `nx` by `nmu` grid.
///
/// # Safety
/// `figure` must be a NUL-terminated string; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn phases_figure_scan(
    figure: *const c_char,
    nx: usize,
    nmu: usize,
    out: *mut *mut PhasesGrid,
) -> PhasesStatus {
    guard(|| {
        if figure.is_null() {
            return Err(null("figure"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let id: FigureId = CStr::from_ptr(figure)
            .to_str()
            .map_err(|_| invalid("figure id is not UTF-8"))?
            .parse()?;
        let grid = scan_grid(&figure_preset(id), (nx, nmu))?;
        write(out, "out", Box::into_raw(Box::new(PhasesGrid { grid })))
    })
}

/// Grid dimensions: horizontal nodes, vertical nodes and occupation layers.
///
/// # Safety
/// `grid` must be a live handle; out pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn phases_grid_shape(
    grid: *const PhasesGrid,
    nx: *mut usize,
    nmu: *mut usize,
    layers: *mut usize,
) -> PhasesStatus {
    guard(|| {
        let g = &grid.as_ref().ok_or_else(|| null("grid"))?.grid;
        write(nx, "nx", g.x.len())?;
        write(nmu, "nmu", g.mu.len())?;
        write(layers, "layers", g.layers.len())
    })
}

/// Horizontal coordinate `i` and vertical coordinate `j` of a node.
///
/// # Safety
/// `grid` must be a live handle; `x` and `mu` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn phases_grid_node(
    grid: *const PhasesGrid,
    i: usize,
    j: usize,
    x: *mut f64,
    mu: *mut f64,
) -> PhasesStatus {
    guard(|| {
        let g = &grid.as_ref().ok_or_else(|| null("grid"))?.grid;
        let (&xv, &mv) = g.x.get(i).zip(g.mu.get(j)).ok_or_else(|| invalid("node index out of range"))?;
        write(x, "x", xv)?;
        write(mu, "mu", mv)
    })
}

/// Label of node `(i, j)` in occupation layer `layer`.
///
/// # Safety
/// `grid` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn phases_grid_label(
    grid: *const PhasesGrid,
    layer: usize,
    i: usize,
    j: usize,
    out: *mut PhasesLabel,
) -> PhasesStatus {
    guard(|| {
        let g = &grid.as_ref().ok_or_else(|| null("grid"))?.grid;
        if layer >= g.layers.len() || i >= g.x.len() || j >= g.mu.len() {
            return Err(invalid("grid index out of range"));
        }
        write(out, "out", label(g.label(layer, i, j)))
    })
}

/// Release a grid. Null is ignored.
///
/// # Safety
/// `grid` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn phases_grid_free(grid: *mut PhasesGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}
