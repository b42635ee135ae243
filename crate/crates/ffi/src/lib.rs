//! C ABI over `qheat`.
//!
//! Every fallible function returns a [`QheatStatus`]; on failure a message is
//! available from [`qheat_last_error`] on the same thread. Objects are opaque
//! handles created by `*_new` / `*_run` functions and released with the
//! matching `*_free`. Output pointers are only written on success.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qheat::cli::{self, ExperimentConfig};
use qheat::collision::{detect_crossings, run_gossip, CollisionConfig, CollisionTrace};
use qheat::exchange::evolve;
use qheat::qops::DensityMatrix;
use qheat::spin_states::{correlated_initial_state, qubit_hamiltonian, thermal_state, ThermalSpec};
use qheat::thermo::{self, Scenario, ThermoRecord};
use qheat::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QheatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidState = 3,
    Config = 4,
    Io = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> QheatStatus {
    match err {
        Error::Config(_) => QheatStatus::Config,
        Error::Io(_) | Error::Csv(_) | Error::Json(_) => QheatStatus::Io,
        Error::InvalidState(_) | Error::NotHermitian { .. } | Error::SupportViolation { .. } => {
            QheatStatus::InvalidState
        }
        _ => QheatStatus::InvalidArgument,
    }
}

struct FfiError(QheatStatus, String);

impl From<Error> for FfiError {
    fn from(e: Error) -> Self {
        FfiError(status_of(&e), e.to_string())
    }
}

type FfiResult<T> = Result<T, FfiError>;

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> FfiResult<()>) -> QheatStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            QheatStatus::Ok
        }
        Ok(Err(FfiError(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QheatStatus::Panic
        }
    }
}

fn null(what: &str) -> FfiError {
    FfiError(QheatStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> FfiResult<&'a mut T> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| FfiError(QheatStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn out_slice<'a>(p: *mut f64, len: usize, needed: usize, what: &str) -> FfiResult<&'a mut [f64]> {
    if p.is_null() {
        return Err(null(what));
    }
    if len < needed {
        return Err(FfiError(
            QheatStatus::BufferTooSmall,
            format!("{what} holds {len} values, {needed} needed"),
        ));
    }
    Ok(std::slice::from_raw_parts_mut(p, needed))
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn qheat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qheat_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

// ---------------------------------------------------------------------------
// Two-qubit states

/// Opaque density matrix.
pub struct QheatState(DensityMatrix);

/// Initial state of a named preset ("uncorrelated", "correlated_phi_pi",
/// "correlated_phi_half_pi").
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qheat_state_new_scenario(
    name: *const c_char,
    nu0_hz: f64,
    out: *mut *mut QheatState,
) -> QheatStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let scenario: Scenario = c_str(name, "name")?.parse()?;
        let h = qubit_hamiltonian(nu0_hz)?;
        *out = Box::into_raw(Box::new(QheatState(scenario.initial_state(&h)?)));
        Ok(())
    })
}

/// ρ_A ⊗ ρ_B + α|01⟩⟨10| + α*|10⟩⟨01| from excited populations.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qheat_state_new_correlated(
    p_a1: f64,
    p_b1: f64,
    alpha_re: f64,
    alpha_im: f64,
    nu0_hz: f64,
    out: *mut *mut QheatState,
) -> QheatStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let h = qubit_hamiltonian(nu0_hz)?;
        let a = thermal_state(&ThermalSpec::excited_population(p_a1)?, &h)?;
        let b = thermal_state(&ThermalSpec::excited_population(p_b1)?, &h)?;
        let rho = correlated_initial_state(&a, &b, qheat::qops::Complex64::new(alpha_re, alpha_im))?;
        *out = Box::into_raw(Box::new(QheatState(rho)));
        Ok(())
    })
}

/// # Safety
/// `state` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qheat_state_free(state: *mut QheatState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qheat_state_dim(state: *const QheatState, out: *mut usize) -> QheatStatus {
    guard(|| {
        *out_ref(out, "out")? = deref(state, "state")?.0.dim();
        Ok(())
    })
}

/// Copies the matrix in row-major order into `re` and `im`, each of length
/// at least dim².
///
/// # Safety
/// `re` and `im` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qheat_state_copy_matrix(
    state: *const QheatState,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> QheatStatus {
    guard(|| {
        let m = deref(state, "state")?.0.matrix();
        let n = m.dim() * m.dim();
        let re = out_slice(re, len, n, "re")?;
        let im = out_slice(im, len, n, "im")?;
        for (k, z) in m.as_slice().iter().enumerate() {
            re[k] = z.re;
            im[k] = z.im;
        }
        Ok(())
    })
}

/// State after the exchange interaction acts for `tau_ms`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qheat_state_evolve(
    state: *const QheatState,
    tau_ms: f64,
    coupling_hz: f64,
    out: *mut *mut QheatState,
) -> QheatStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let rho = evolve(&deref(state, "state")?.0, tau_ms, coupling_hz)?;
        *out = Box::into_raw(Box::new(QheatState(rho)));
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qheat_mutual_information(state: *const QheatState, out: *mut f64) -> QheatStatus {
    guard(|| {
        *out_ref(out, "out")? = thermo::mutual_information(&deref(state, "state")?.0)?;
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qheat_geometric_discord(state: *const QheatState, out: *mut f64) -> QheatStatus {
    guard(|| {
        *out_ref(out, "out")? = thermo::geometric_discord(&deref(state, "state")?.0)?;
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// Heat/information ledger

/// Opaque list of ledger rows.
pub struct QheatLedger(Vec<ThermoRecord>);

/// One ledger row; energies in peV, entropies in nats.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct QheatThermoRow {
    pub tau_ms: f64,
    pub e_a: f64,
    pub e_b: f64,
    pub q_a: f64,
    pub q_b: f64,
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
    pub mutual_info: f64,
    pub delta_mi: f64,
    pub relent_a: f64,
    pub relent_b: f64,
    pub discord: f64,
    pub eq5_lhs: f64,
    pub eq5_rhs: f64,
    pub eq5_residual: f64,
    pub clausius_slack: f64,
}

impl From<&ThermoRecord> for QheatThermoRow {
    fn from(r: &ThermoRecord) -> Self {
        Self {
            tau_ms: r.tau_ms,
            e_a: r.e_a,
            e_b: r.e_b,
            q_a: r.q_a,
            q_b: r.q_b,
            s_a: r.s_a,
            s_b: r.s_b,
            s_ab: r.s_ab,
            mutual_info: r.mutual_info,
            delta_mi: r.delta_mi,
            relent_a: r.relent_a,
            relent_b: r.relent_b,
            discord: r.discord,
            eq5_lhs: r.eq5_lhs,
            eq5_rhs: r.eq5_rhs,
            eq5_residual: r.eq5_residual,
            clausius_slack: r.clausius_slack,
        }
    }
}

/// Ledger of a preset over `count` points spanning [0, t_max_ms].
///
/// # Safety
/// `scenario` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qheat_ledger_run(
    scenario: *const c_char,
    count: usize,
    t_max_ms: f64,
    coupling_hz: f64,
    nu0_hz: f64,
    out: *mut *mut QheatLedger,
) -> QheatStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let sc: Scenario = c_str(scenario, "scenario")?.parse()?;
        if count == 0 || !t_max_ms.is_finite() || t_max_ms < 0.0 {
            return Err(FfiError(QheatStatus::InvalidArgument, "grid needs count ≥ 1 and t_max_ms ≥ 0".into()));
        }
        let h = qubit_hamiltonian(nu0_hz)?;
        let (ba, bb) = sc.betas(&h)?;
        let rows = thermo::ledger(&sc.initial_state(&h)?, ba, bb, &thermo::tau_grid(count, t_max_ms), coupling_hz, &h)?;
        *out = Box::into_raw(Box::new(QheatLedger(rows)));
        Ok(())
    })
}

/// # Safety
/// `ledger` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qheat_ledger_free(ledger: *mut QheatLedger) {
    if !ledger.is_null() {
        drop(Box::from_raw(ledger));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qheat_ledger_len(ledger: *const QheatLedger, out: *mut usize) -> QheatStatus {
    guard(|| {
        *out_ref(out, "out")? = deref(ledger, "ledger")?.0.len();
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qheat_ledger_row(
    ledger: *const QheatLedger,
    index: usize,
    out: *mut QheatThermoRow,
) -> QheatStatus {
    guard(|| {
        let rows = &deref(ledger, "ledger")?.0;
        let row = rows.get(index).ok_or_else(|| {
            FfiError(QheatStatus::InvalidArgument, format!("row {index} out of range ({} rows)", rows.len()))
        })?;
        *out_ref(out, "out")? = row.into();
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// Collision model

/// Collision-model parameters. Temperatures are given as excited-state
/// populations of the hot system qubit and the cold bath qubits.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct QheatCollisionParams {
    pub n_bath: usize,
    pub steps: usize,
    pub lambda_sigma: f64,
    pub alpha: f64,
    pub hot_p1: f64,
    pub cold_p1: f64,
    pub nu0_hz: f64,
    pub seed: u64,
    pub smoothing_window: usize,
}

impl QheatCollisionParams {
    fn to_config(self) -> CollisionConfig {
        CollisionConfig {
            n_bath: self.n_bath,
            steps: self.steps,
            lambda_sigma: self.lambda_sigma,
            alpha: self.alpha,
            hot: ThermalSpec::ExcitedPopulation(self.hot_p1),
            cold: ThermalSpec::ExcitedPopulation(self.cold_p1),
            nu0_hz: self.nu0_hz,
            seed: self.seed,
            smoothing_window: self.smoothing_window,
        }
    }
}

/// Summary of a finished collision run; energies in peV.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct QheatTraceSummary {
    pub steps: usize,
    pub e_hot_init: f64,
    pub e_cold_init: f64,
    pub e_mean: f64,
    pub max_energy_drift: f64,
    pub final_trace: f64,
    pub final_min_eigenvalue: f64,
}

/// Opaque collision trace.
pub struct QheatTrace(CollisionTrace);

/// Fills `out` with the canonical parameters (8 bath qubits, 10⁴ steps,
/// σ = π/50, populations 0.3 / 0.2, α = 0, seed 0).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qheat_collision_params_default(out: *mut QheatCollisionParams) -> QheatStatus {
    guard(|| {
        let c = CollisionConfig::default();
        let p1 = |s: ThermalSpec| s.excited_population_for(qheat::spin_states::PLANCK_PEV_S * c.nu0_hz);
        *out_ref(out, "out")? = QheatCollisionParams {
            n_bath: c.n_bath,
            steps: c.steps,
            lambda_sigma: c.lambda_sigma,
            alpha: c.alpha,
            hot_p1: p1(c.hot),
            cold_p1: p1(c.cold),
            nu0_hz: c.nu0_hz,
            seed: c.seed,
            smoothing_window: c.smoothing_window,
        };
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qheat_collision_run(
    params: *const QheatCollisionParams,
    out: *mut *mut QheatTrace,
) -> QheatStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let trace = run_gossip(&deref(params, "params")?.to_config())?;
        *out = Box::into_raw(Box::new(QheatTrace(trace)));
        Ok(())
    })
}

/// # Safety
/// `trace` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qheat_trace_free(trace: *mut QheatTrace) {
    if !trace.is_null() {
        drop(Box::from_raw(trace));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qheat_trace_summary(trace: *const QheatTrace, out: *mut QheatTraceSummary) -> QheatStatus {
    guard(|| {
        let t = &deref(trace, "trace")?.0;
        *out_ref(out, "out")? = QheatTraceSummary {
            steps: t.steps(),
            e_hot_init: t.e_hot_init,
            e_cold_init: t.e_cold_init,
            e_mean: t.mean_energy(),
            max_energy_drift: t.max_energy_drift,
            final_trace: t.final_trace,
            final_min_eigenvalue: t.final_min_eigenvalue,
        };
        Ok(())
    })
}

/// Copies the system energy at steps 0..=steps (steps + 1 values), raw or
/// smoothed.
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qheat_trace_system_energies(
    trace: *const QheatTrace,
    smoothed: c_int,
    out: *mut f64,
    len: usize,
) -> QheatStatus {
    guard(|| {
        let t = &deref(trace, "trace")?.0;
        let values = if smoothed != 0 {
            t.smoothed_system_energy()
        } else {
            t.system_energies()
        };
        out_slice(out, len, values.len(), "out")?.copy_from_slice(&values);
        Ok(())
    })
}

/// Number of band crossings, on the raw or smoothed system energy.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qheat_trace_crossings(
    trace: *const QheatTrace,
    smoothed: c_int,
    out: *mut usize,
) -> QheatStatus {
    guard(|| {
        *out_ref(out, "out")? = detect_crossings(&deref(trace, "trace")?.0, smoothed != 0).len();
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// Batch runs

/// Runs an experiment described by a JSON config (same schema as the
/// `simulate` config file) and writes its outputs. `checks_passed` receives
/// 1 or 0.
///
/// # Safety
/// `config_json` must be a NUL-terminated string; `checks_passed` writable.
#[no_mangle]
pub unsafe extern "C" fn qheat_run_config(config_json: *const c_char, checks_passed: *mut c_int) -> QheatStatus {
    guard(|| {
        let out = out_ref(checks_passed, "checks_passed")?;
        let cfg = ExperimentConfig::from_json_str(c_str(config_json, "config_json")?)?;
        *out = c_int::from(cli::run(&cfg)?);
        Ok(())
    })
}
