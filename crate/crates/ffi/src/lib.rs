//! C ABI over `engagement_core`.
//!
//! Every fallible function returns an [`EngageStatus`] and writes its result
//! through an out-pointer. On failure a message is available from
//! [`engage_last_error`] on the calling thread. Handles are opaque and must be
//! released with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use engagement_core::advantage::{ar_first_kill, duel_outcomes, sar_first_kill, EngagementScenario};
use engagement_core::calculus::{self, DuelMode, DuelParams, NvnParams, SalvoParams, Side};
use engagement_core::error::EngageError;
use engagement_core::geometry::{self, Kinematics, TofConvention};
use engagement_core::pursuit::{run_pursuit, PursuitScenario, PursuitTrace, Verdict};
use engagement_core::radar::{self, LightSpeed, PulseParams, RadarCalc, SnrParams};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngageStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    NoIntercept = 3,
    Unsupported = 4,
    Config = 5,
    InsufficientData = 6,
    Resource = 7,
    OutOfBand = 8,
    Parse = 9,
    IndexOutOfRange = 10,
    Panic = 11,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn status_of(e: &EngageError) -> EngageStatus {
    match e {
        EngageError::Parse(_) => EngageStatus::Parse,
        EngageError::Domain(_) => EngageStatus::Domain,
        EngageError::NoInterceptSolution(_) => EngageStatus::NoIntercept,
        EngageError::Unsupported(_) => EngageStatus::Unsupported,
        EngageError::Config(_) => EngageStatus::Config,
        EngageError::InsufficientData(_) => EngageStatus::InsufficientData,
        EngageError::Resource(_) => EngageStatus::Resource,
        EngageError::OutOfBand(_) => EngageStatus::OutOfBand,
    }
}

/// Runs `body`, converting errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), (EngageStatus, String)>) -> EngageStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => EngageStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            EngageStatus::Panic
        }
    }
}

fn core_err(e: EngageError) -> (EngageStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (EngageStatus, String) {
    (EngageStatus::NullPointer, format!("{name} is null"))
}

/// Writes `value` through `out`.
///
/// # Safety
/// `out` must be null or valid for writes.
unsafe fn put<T>(out: *mut T, name: &str, value: T) -> Result<(), (EngageStatus, String)> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

/// Message describing the last failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn engage_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn engage_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Probability that a salvo of `k` shots kills its target.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn engage_salvo_kill(p: f64, k: u32, out: *mut f64) -> EngageStatus {
    guard(|| put(out, "out", calculus::kill_salvo(&SalvoParams { p, k }).map_err(core_err)?))
}

/// Probability that the target survives a salvo of `k` shots.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn engage_salvo_survive(p: f64, k: u32, out: *mut f64) -> EngageStatus {
    guard(|| put(out, "out", calculus::survive_salvo(&SalvoParams { p, k }).map_err(core_err)?))
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EngageDuelOutcome {
    pub p_red_destroyed: f64,
    pub p_blue_destroyed: f64,
    pub p_mutual: f64,
    pub p_both_survive: f64,
}

/// Discrete duel of `n` shots (or volleys) per side.
/// `red_first` is ignored for simultaneous duels.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn engage_duel(
    p_blue: f64,
    p_red: f64,
    n: u32,
    red_first: bool,
    simultaneous: bool,
    out: *mut EngageDuelOutcome,
) -> EngageStatus {
    guard(|| {
        let params = DuelParams::new(
            p_blue,
            p_red,
            n,
            if red_first { Side::Red } else { Side::Blue },
            if simultaneous { DuelMode::Simultaneous } else { DuelMode::Sequential },
        );
        let o = calculus::duel(&params).map_err(core_err)?;
        put(
            out,
            "out",
            EngageDuelOutcome {
                p_red_destroyed: o.p_red_destroyed,
                p_blue_destroyed: o.p_blue_destroyed,
                p_mutual: o.p_mutual,
                p_both_survive: o.p_both_survive,
            },
        )
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EngageNvnResult {
    pub p_salvo: f64,
    pub survivability: f64,
    pub expected_survivors: f64,
}

/// Attackers each fire `weapons_per_attacker` shots; `attackers` must equal
/// `targets`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn engage_nvn(
    p: f64,
    weapons_per_attacker: u32,
    attackers: u32,
    targets: u32,
    out: *mut EngageNvnResult,
) -> EngageStatus {
    guard(|| {
        let r = calculus::nvn_survivors(&NvnParams { p, weapons_per_attacker, attackers, targets })
            .map_err(core_err)?;
        put(
            out,
            "out",
            EngageNvnResult { p_salvo: r.p_salvo, survivability: r.survivability, expected_survivors: r.expected_survivors },
        )
    })
}

/// Speeds in m/s; `rho` in radians.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EngageKinematics {
    pub v_blue: f64,
    pub v_red: f64,
    pub rho: f64,
    pub v_missile_blue: f64,
    pub v_missile_red: f64,
}

impl From<EngageKinematics> for Kinematics {
    fn from(k: EngageKinematics) -> Self {
        Kinematics {
            v_blue: k.v_blue,
            v_red: k.v_red,
            rho: k.rho,
            v_missile_blue: k.v_missile_blue,
            v_missile_red: k.v_missile_red,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EngageIntercept {
    pub beta: f64,
    pub alpha: f64,
    pub v_closure: f64,
    pub mu_blue: f64,
    pub alpha_missile: f64,
    pub v_closure_missile: f64,
    pub sine_ratio: f64,
}

/// # Safety
/// `kin` must be valid for reads and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn engage_solve_intercept(kin: *const EngageKinematics, out: *mut EngageIntercept) -> EngageStatus {
    guard(|| {
        let kin = kin.as_ref().ok_or_else(|| null("kin"))?;
        let s = geometry::solve_intercept(&(*kin).into()).map_err(core_err)?;
        put(
            out,
            "out",
            EngageIntercept {
                beta: s.beta,
                alpha: s.alpha,
                v_closure: s.v_closure,
                mu_blue: s.mu_blue,
                alpha_missile: s.alpha_missile,
                v_closure_missile: s.v_closure_missile,
                sine_ratio: s.sine_ratio,
            },
        )
    })
}

/// Aircraft separation when blue's missile launched at `d_launch` arrives.
/// `kinematic_tof` selects TOF = R_MB/(V_MB + V_B) instead of R_MB/V_CMB.
///
/// # Safety
/// `kin` must be valid for reads and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn engage_post_intercept_separation(
    kin: *const EngageKinematics,
    d_launch: f64,
    kinematic_tof: bool,
    out: *mut f64,
) -> EngageStatus {
    guard(|| {
        let kin = kin.as_ref().ok_or_else(|| null("kin"))?;
        let convention = if kinematic_tof { TofConvention::Kinematic } else { TofConvention::Literal };
        let d = geometry::post_intercept_separation(&(*kin).into(), d_launch, convention).map_err(core_err)?;
        put(out, "out", d)
    })
}

fn calc(exact_light_speed: bool) -> RadarCalc {
    RadarCalc::new(if exact_light_speed { LightSpeed::Exact } else { LightSpeed::Nominal })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn engage_unambiguous_range(prf: f64, exact_light_speed: bool, out: *mut f64) -> EngageStatus {
    guard(|| put(out, "out", calc(exact_light_speed).unambiguous_range(prf).map_err(core_err)?))
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EngageRangeBin {
    pub index: u32,
    pub folds: u64,
    pub aliased: bool,
    pub folded_delay: f64,
    pub echo_delay: f64,
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn engage_range_bin(
    range: f64,
    prf: f64,
    n_bins: u32,
    exact_light_speed: bool,
    out: *mut EngageRangeBin,
) -> EngageStatus {
    guard(|| {
        let c = calc(exact_light_speed);
        let bin = c.range_bin(range, &PulseParams { prf, n_bins, f_tx: 1.0 }).map_err(core_err)?;
        let echo_delay = c.echo_delay(range).map_err(core_err)?;
        put(
            out,
            "out",
            EngageRangeBin {
                index: bin.index,
                folds: bin.folds,
                aliased: bin.aliased,
                folded_delay: bin.folded_delay,
                echo_delay,
            },
        )
    })
}

/// Doppler shift in Hz; positive for a closing target.
#[no_mangle]
pub extern "C" fn engage_doppler_shift(f_tx: f64, radial_velocity: f64, exact_light_speed: bool) -> f64 {
    calc(exact_light_speed).doppler_shift(f_tx, radial_velocity)
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EngageSnrParams {
    pub p_t: f64,
    pub g_t: f64,
    pub a_r: f64,
    pub rcs: f64,
    pub t_pulse: f64,
    pub range: f64,
    pub t_s: f64,
    pub losses: f64,
}

/// Single-pulse SNR, linear and in dB.
///
/// # Safety
/// `params` must be valid for reads; `linear` and `db` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn engage_snr(params: *const EngageSnrParams, linear: *mut f64, db: *mut f64) -> EngageStatus {
    guard(|| {
        let p = params.as_ref().ok_or_else(|| null("params"))?;
        let s = radar::snr(&SnrParams {
            p_t: p.p_t,
            g_t: p.g_t,
            a_r: p.a_r,
            rcs: p.rcs,
            t_pulse: p.t_pulse,
            range: p.range,
            t_s: p.t_s,
            losses: p.losses,
        })
        .map_err(core_err)?;
        if db.is_null() {
            return Err(null("db"));
        }
        put(linear, "linear", s.linear)?;
        put(db, "db", s.db)
    })
}

/// Range-advantage scenario parsed from JSON.
pub struct EngageScenario {
    inner: EngagementScenario,
}

/// Parses a scenario of the form
/// `{"kinematics": {...}, "blue": {...}, "red": {...}, "tof_convention": "literal"}`
/// with `rho` in radians. On success `*out` owns a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn engage_scenario_from_json(json: *const c_char, out: *mut *mut EngageScenario) -> EngageStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| (EngageStatus::Parse, e.to_string()))?;
        let inner: EngagementScenario = serde_json::from_str(text).map_err(|e| {
            let status = if e.is_data() { EngageStatus::Config } else { EngageStatus::Parse };
            (status, e.to_string())
        })?;
        inner.validate().map_err(core_err)?;
        put(out, "out", Box::into_raw(Box::new(EngageScenario { inner })))
    })
}

/// Releases a scenario handle; null is ignored.
///
/// # Safety
/// `handle` must come from `engage_scenario_from_json` and not be used again.
#[no_mangle]
pub unsafe extern "C" fn engage_scenario_free(handle: *mut EngageScenario) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Probability that blue's SAR missile kills first.
///
/// # Safety
/// `handle` must be a live scenario handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn engage_scenario_sar(handle: *const EngageScenario, out: *mut f64) -> EngageStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        put(out, "out", sar_first_kill(&h.inner).map_err(core_err)?.probability)
    })
}

/// Probability that blue's AR missile kills first.
///
/// # Safety
/// `handle` must be a live scenario handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn engage_scenario_ar(handle: *const EngageScenario, out: *mut f64) -> EngageStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        put(out, "out", ar_first_kill(&h.inner).map_err(core_err)?.probability)
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EngageDuelOutcomes {
    pub blue_win: f64,
    pub red_win: f64,
    /// 1 − blue_win − red_win, unclamped.
    pub mutual_kill: f64,
    pub out_of_range: bool,
}

/// # Safety
/// `handle` must be a live scenario handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn engage_scenario_duel(handle: *const EngageScenario, out: *mut EngageDuelOutcomes) -> EngageStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        let d = duel_outcomes(&h.inner).map_err(core_err)?;
        put(
            out,
            "out",
            EngageDuelOutcomes {
                blue_win: d.blue_win.probability,
                red_win: d.red_win.probability,
                mutual_kill: d.p_mutual_kill,
                out_of_range: d.out_of_range,
            },
        )
    })
}

/// Completed pure-pursuit run.
pub struct EngagePursuit {
    trace: PursuitTrace,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EngagePursuitRow {
    pub step: usize,
    pub target_x: f64,
    pub target_y: f64,
    pub follower_x: f64,
    pub follower_y: f64,
    pub distance: f64,
    pub cos: f64,
    pub sin: f64,
}

/// Runs a pursuit over `n_waypoints` (x, y) pairs stored contiguously in
/// `waypoints_xy`. On success `*out` owns a new handle.
///
/// # Safety
/// `waypoints_xy` must hold `2 * n_waypoints` readable doubles and `out` must
/// be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn engage_pursuit_run(
    waypoints_xy: *const f64,
    n_waypoints: usize,
    start_x: f64,
    start_y: f64,
    speed: f64,
    kill_radius: f64,
    out: *mut *mut EngagePursuit,
) -> EngageStatus {
    guard(|| {
        if waypoints_xy.is_null() && n_waypoints > 0 {
            return Err(null("waypoints_xy"));
        }
        let flat: &[f64] =
            if n_waypoints == 0 { &[] } else { std::slice::from_raw_parts(waypoints_xy, 2 * n_waypoints) };
        let scenario = PursuitScenario {
            waypoints: flat.chunks_exact(2).map(|c| [c[0], c[1]]).collect(),
            follower_start: [start_x, start_y],
            follower_speed: speed,
            kill_radius,
        };
        let trace = run_pursuit(&scenario).map_err(core_err)?;
        put(out, "out", Box::into_raw(Box::new(EngagePursuit { trace })))
    })
}

/// Number of recorded rows; 0 for a null handle.
///
/// # Safety
/// `handle` must be null or a live pursuit handle.
#[no_mangle]
pub unsafe extern "C" fn engage_pursuit_row_count(handle: *const EngagePursuit) -> usize {
    handle.as_ref().map_or(0, |h| h.trace.rows.len())
}

/// 1 when the target was destroyed, 0 when it escaped, −1 for a null handle.
///
/// # Safety
/// `handle` must be null or a live pursuit handle.
#[no_mangle]
pub unsafe extern "C" fn engage_pursuit_destroyed(handle: *const EngagePursuit) -> i32 {
    handle.as_ref().map_or(-1, |h| i32::from(h.trace.verdict == Verdict::Destroyed))
}

/// # Safety
/// `handle` must be a live pursuit handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn engage_pursuit_row(
    handle: *const EngagePursuit,
    index: usize,
    out: *mut EngagePursuitRow,
) -> EngageStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        let r = h.trace.rows.get(index).ok_or_else(|| {
            (EngageStatus::IndexOutOfRange, format!("row {index} of {}", h.trace.rows.len()))
        })?;
        put(
            out,
            "out",
            EngagePursuitRow {
                step: r.step,
                target_x: r.target[0],
                target_y: r.target[1],
                follower_x: r.follower[0],
                follower_y: r.follower[1],
                distance: r.distance,
                cos: r.cos,
                sin: r.sin,
            },
        )
    })
}

/// Releases a pursuit handle; null is ignored.
///
/// # Safety
/// `handle` must come from `engage_pursuit_run` and not be used again.
#[no_mangle]
pub unsafe extern "C" fn engage_pursuit_free(handle: *mut EngagePursuit) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}
