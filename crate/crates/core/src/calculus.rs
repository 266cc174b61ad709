//! Closed-form probability models for discrete missile exchanges.
//!
//! Covers one-sided salvos against an undefended target, alternating 1v1
//! duels, simultaneous-volley duels that admit mutual kills, and the
//! one-target-per-attacker NvN extension.

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, EngageError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SalvoParams {
    /// Single-shot probability of kill.
    pub p: f64,
    /// Number of shots in the salvo.
    pub k: u32,
}

impl SalvoParams {
    pub fn validate(&self) -> Result<()> {
        check_probability("p", self.p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Blue,
    Red,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Blue => Side::Red,
            Side::Red => Side::Blue,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DuelMode {
    /// Shots alternate; a destroyed side never fires again.
    Sequential,
    /// Both sides' shots of a volley arrive together.
    Simultaneous,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DuelParams {
    pub p_blue: f64,
    pub p_red: f64,
    /// Shots (sequential) or volleys (simultaneous) per side.
    pub n: u32,
    #[serde(default = "default_first_shooter")]
    pub first_shooter: Side,
    #[serde(default = "default_mode")]
    pub mode: DuelMode,
}

fn default_first_shooter() -> Side {
    Side::Blue
}

fn default_mode() -> DuelMode {
    DuelMode::Sequential
}

impl DuelParams {
    pub fn new(p_blue: f64, p_red: f64, n: u32, first_shooter: Side, mode: DuelMode) -> Self {
        Self { p_blue, p_red, n, first_shooter, mode }
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("p_blue", self.p_blue)?;
        check_probability("p_red", self.p_red)?;
        if self.n == 0 {
            return Err(EngageError::Domain("n must be >= 1".into()));
        }
        Ok(())
    }

    /// Same engagement with the blue and red roles exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            p_blue: self.p_red,
            p_red: self.p_blue,
            first_shooter: self.first_shooter.other(),
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DuelOutcome {
    pub p_red_destroyed: f64,
    pub p_blue_destroyed: f64,
    /// Both destroyed in the same volley (always zero for sequential duels).
    pub p_mutual: f64,
    pub p_both_survive: f64,
}

impl DuelOutcome {
    pub fn swapped(&self) -> Self {
        Self {
            p_red_destroyed: self.p_blue_destroyed,
            p_blue_destroyed: self.p_red_destroyed,
            ..*self
        }
    }

    /// Largest absolute per-field difference to another outcome.
    pub fn max_abs_diff(&self, other: &DuelOutcome) -> f64 {
        [
            self.p_red_destroyed - other.p_red_destroyed,
            self.p_blue_destroyed - other.p_blue_destroyed,
            self.p_mutual - other.p_mutual,
            self.p_both_survive - other.p_both_survive,
        ]
        .iter()
        .fold(0.0_f64, |m, d| m.max(d.abs()))
    }
}

pub fn survive_salvo(params: &SalvoParams) -> Result<f64> {
    params.validate()?;
    Ok((1.0 - params.p).powi(params.k as i32))
}

pub fn kill_salvo(params: &SalvoParams) -> Result<f64> {
    Ok(1.0 - survive_salvo(params)?)
}

/// Per-exchange survival product q = (1 - p_b)(1 - p_r) and the partial
/// geometric sum 1 + q + ... + q^(n-1).
///
/// Evaluated through `ln_1p`/`exp_m1` with the denominator 1 - q expanded as
/// p_b + p_r - p_b p_r so that small kill probabilities keep full precision.
/// When both probabilities are zero no exchange can kill and the sum is
/// irrelevant; zero is returned so every kill probability collapses to 0.
fn exchange_series(p_b: f64, p_r: f64, n: u32) -> (f64, f64) {
    let q = (1.0 - p_b) * (1.0 - p_r);
    let one_minus_q = p_b + p_r - p_b * p_r;
    if one_minus_q <= 0.0 {
        return (q, 0.0);
    }
    let ln_q = (-p_b).ln_1p() + (-p_r).ln_1p();
    let one_minus_qn = -(n as f64 * ln_q).exp_m1();
    (q, one_minus_qn / one_minus_q)
}

/// Alternating exchange until both sides have fired `n` shots.
///
/// Red-first results are the blue-first formulas with the roles swapped.
pub fn sequential_duel(params: &DuelParams) -> Result<DuelOutcome> {
    params.validate()?;
    if params.first_shooter == Side::Red {
        let mut swapped = params.swapped();
        swapped.mode = DuelMode::Sequential;
        return sequential_duel(&swapped).map(|o| o.swapped());
    }
    let (p_b, p_r) = (params.p_blue, params.p_red);
    let (q, series) = exchange_series(p_b, p_r, params.n);
    Ok(DuelOutcome {
        p_red_destroyed: p_b * series,
        p_blue_destroyed: p_r * (1.0 - p_b) * series,
        p_mutual: 0.0,
        p_both_survive: q.powi(params.n as i32),
    })
}

/// Volley exchange where both sides' shots arrive together.
pub fn simultaneous_duel(params: &DuelParams) -> Result<DuelOutcome> {
    params.validate()?;
    let (p_b, p_r) = (params.p_blue, params.p_red);
    let (q, series) = exchange_series(p_b, p_r, params.n);
    Ok(DuelOutcome {
        p_red_destroyed: p_b * series,
        p_blue_destroyed: p_r * series,
        p_mutual: p_b * p_r * series,
        p_both_survive: q.powi(params.n as i32),
    })
}

/// Dispatch on `params.mode`.
pub fn duel(params: &DuelParams) -> Result<DuelOutcome> {
    match params.mode {
        DuelMode::Sequential => sequential_duel(params),
        DuelMode::Simultaneous => simultaneous_duel(params),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NvnParams {
    pub p: f64,
    /// Weapons carried by each attacker (J).
    pub weapons_per_attacker: u32,
    /// Attackers (M).
    pub attackers: u32,
    /// Targets (T).
    pub targets: u32,
}

impl NvnParams {
    /// N = M * J.
    pub fn total_weapons(&self) -> u64 {
        self.attackers as u64 * self.weapons_per_attacker as u64
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("p", self.p)?;
        for (name, v) in [
            ("weapons_per_attacker", self.weapons_per_attacker),
            ("attackers", self.attackers),
            ("targets", self.targets),
        ] {
            if v == 0 {
                return Err(EngageError::Domain(format!("{name} must be >= 1")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NvnResult {
    /// Kill probability of one attacker's J-shot salvo.
    pub p_salvo: f64,
    /// Average survivability of each target.
    pub survivability: f64,
    /// Expected number of surviving targets.
    pub expected_survivors: f64,
}

/// Survivors of an N-vs-N exchange with one target per attacker.
///
/// The survivability exponent is the literal N/T, which for M = T gives
/// (1 - p)^(J*J). A reading of "J shots per target" would give (1 - p)^J
/// instead; see [`per_target_survivability`].
pub fn nvn_survivors(params: &NvnParams) -> Result<NvnResult> {
    params.validate()?;
    if params.attackers != params.targets {
        return Err(EngageError::Unsupported(format!(
            "only one target per attacker is modelled (M = T); got M = {}, T = {}",
            params.attackers, params.targets
        )));
    }
    let j = params.weapons_per_attacker as i32;
    let p_salvo = 1.0 - (1.0 - params.p).powi(j);
    let exponent = params.total_weapons() as f64 / params.targets as f64;
    let survivability = (1.0 - p_salvo).powf(exponent);
    debug_assert!({
        let simplified = (1.0 - params.p).powi(j * j);
        (survivability - simplified).abs() <= 1e-12
    });
    Ok(NvnResult {
        p_salvo,
        survivability,
        expected_survivors: params.targets as f64 * survivability,
    })
}

/// Simplified form (1 - p)^(J*J) valid when M = T.
pub fn nvn_simplified_survivability(p: f64, weapons_per_attacker: u32) -> Result<f64> {
    check_probability("p", p)?;
    let j = weapons_per_attacker as i32;
    Ok((1.0 - p).powi(j * j))
}

/// Alternative reading where each target faces exactly J shots.
pub fn per_target_survivability(p: f64, weapons_per_attacker: u32) -> Result<f64> {
    check_probability("p", p)?;
    Ok((1.0 - p).powi(weapons_per_attacker as i32))
}
