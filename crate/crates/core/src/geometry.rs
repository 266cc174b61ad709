//! Planar collision-course geometry between two constant-velocity aircraft
//! and the missile one of them launches.
//!
//! All angles are measured from the line of sight (LOS) joining the two
//! aircraft. Red's heading `rho` is zero when red flies straight down the LOS
//! at blue (head-on) and π when it flies directly away (tail chase).

use serde::{Deserialize, Serialize};

use crate::error::{check_nonnegative, check_positive, EngageError, Result};

/// Below this |sin α| the law-of-sines ratio is replaced by its limit.
pub const SINGULAR_SIN_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kinematics {
    /// Blue aircraft speed (m/s).
    pub v_blue: f64,
    /// Red aircraft speed (m/s).
    pub v_red: f64,
    /// Red heading relative to the LOS (radians, 0..=π).
    pub rho: f64,
    /// Blue missile speed excluding the launcher's own speed (m/s).
    pub v_missile_blue: f64,
    /// Red missile speed excluding the launcher's own speed (m/s).
    pub v_missile_red: f64,
}

impl Kinematics {
    pub fn validate(&self) -> Result<()> {
        check_positive("v_blue", self.v_blue)?;
        check_positive("v_red", self.v_red)?;
        check_nonnegative("v_missile_blue", self.v_missile_blue)?;
        check_nonnegative("v_missile_red", self.v_missile_red)?;
        if !(self.rho.is_finite() && (0.0..=std::f64::consts::PI).contains(&self.rho)) {
            return Err(EngageError::Domain(format!("rho must lie in [0, π] radians, got {}", self.rho)));
        }
        Ok(())
    }

    /// The same engagement seen from red: red becomes the launcher and blue's
    /// collision-course heading `beta` becomes the target aspect.
    pub fn from_red(&self) -> Result<Kinematics> {
        let beta = lead_angle(self)?;
        Ok(Kinematics {
            v_blue: self.v_red,
            v_red: self.v_blue,
            rho: beta,
            v_missile_blue: self.v_missile_red,
            v_missile_red: self.v_missile_blue,
        })
    }
}

/// How the missile's time of flight is converted into launcher travel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TofConvention {
    /// TOF = R_MB / V_CMB, the closed-form separation factor taken as written.
    #[default]
    #[serde(alias = "paper", alias = "paper-literal", alias = "paper_literal")]
    Literal,
    /// TOF = R_MB / (V_MB + V_B), the missile's actual flight time.
    Kinematic,
}

impl std::str::FromStr for TofConvention {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "literal" | "paper" | "paper-literal" | "paper_literal" => Ok(TofConvention::Literal),
            "kinematic" => Ok(TofConvention::Kinematic),
            other => Err(format!("unknown TOF convention '{other}' (expected literal|kinematic)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MissileLine {
    /// Missile heading relative to the LOS (radians).
    pub mu: f64,
    /// Missile collision angle with the target (radians).
    pub alpha: f64,
    /// Missile–target closure rate (m/s).
    pub v_closure: f64,
    /// sin(ρ) / sin(α_M), or its limit at the singular geometries.
    pub sine_ratio: f64,
    /// Distance the missile flies to reach the target (m).
    pub range: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterceptSolution {
    pub beta: f64,
    pub alpha: f64,
    pub v_closure: f64,
    pub mu_blue: f64,
    pub alpha_missile: f64,
    pub v_closure_missile: f64,
    pub sine_ratio: f64,
}

/// Interceptor heading that nulls the relative lateral velocity.
fn collision_heading(v_interceptor: f64, v_target: f64, rho: f64) -> Result<f64> {
    let arg = v_target / v_interceptor * rho.sin();
    if arg.is_nan() || arg.abs() > 1.0 {
        return Err(EngageError::NoInterceptSolution(format!(
            "|V_target/V_interceptor · sin ρ| = {:.6} exceeds 1",
            arg.abs()
        )));
    }
    Ok(arg.asin())
}

/// Law-of-cosines closure with α = π − ρ − heading.
///
/// The signed projection V_i cos(heading) + V_t cos ρ decides validity; it
/// equals the square-root value whenever it is positive.
fn closure(v_interceptor: f64, v_target: f64, rho: f64, heading: f64) -> Result<(f64, f64)> {
    let alpha = std::f64::consts::PI - rho - heading;
    let along_los = v_interceptor * heading.cos() + v_target * rho.cos();
    if along_los <= 0.0 {
        return Err(EngageError::NoInterceptSolution(format!(
            "closure rate {along_los:.6} m/s is not positive"
        )));
    }
    // a² + b² − 2ab·cos α written as (a − b)² + 4ab·sin²(α/2): no cancellation.
    let half = (alpha * 0.5).sin();
    let diff = v_interceptor - v_target;
    let sq = diff * diff + 4.0 * v_interceptor * v_target * half * half;
    Ok((alpha, sq.sqrt()))
}

/// Blue's collision-course heading β relative to the LOS.
pub fn lead_angle(kin: &Kinematics) -> Result<f64> {
    kin.validate()?;
    collision_heading(kin.v_blue, kin.v_red, kin.rho)
}

/// Aircraft closure rate V_C for blue flying heading `beta`.
pub fn closure_rate(kin: &Kinematics, beta: f64) -> Result<f64> {
    kin.validate()?;
    closure(kin.v_blue, kin.v_red, kin.rho, beta).map(|(_, vc)| vc)
}

/// The collision line flown by blue's missile launched at range `d_launch`.
pub fn missile_line(kin: &Kinematics, d_launch: f64) -> Result<MissileLine> {
    kin.validate()?;
    check_positive("d_launch", d_launch)?;
    let v_eff = kin.v_missile_blue + kin.v_blue;
    let mu = collision_heading(v_eff, kin.v_red, kin.rho)?;
    let (alpha, v_closure) = closure(v_eff, kin.v_red, kin.rho, mu)?;
    let sin_alpha = alpha.sin();
    let sine_ratio = if sin_alpha.abs() < SINGULAR_SIN_THRESHOLD {
        // Head-on or tail chase: 0/0, replaced by V_eff / V_CMB along the LOS.
        v_eff / (v_eff * mu.cos() + kin.v_red * kin.rho.cos())
    } else {
        kin.rho.sin() / sin_alpha
    };
    Ok(MissileLine { mu, alpha, v_closure, sine_ratio, range: sine_ratio * d_launch })
}

/// Fraction of the launch range still separating the aircraft when blue's
/// missile reaches red.
pub fn separation_factor(kin: &Kinematics, convention: TofConvention) -> Result<f64> {
    let beta = lead_angle(kin)?;
    let v_c = closure_rate(kin, beta)?;
    let line = missile_line(kin, 1.0)?;
    Ok(match convention {
        TofConvention::Literal => 1.0 - line.sine_ratio * v_c / line.v_closure,
        TofConvention::Kinematic => {
            let v_eff = kin.v_missile_blue + kin.v_blue;
            1.0 - line.sine_ratio * v_c / v_eff
        }
    })
}

/// Aircraft separation at missile impact for a launch at `d_launch`.
pub fn post_intercept_separation(kin: &Kinematics, d_launch: f64, convention: TofConvention) -> Result<f64> {
    let beta = lead_angle(kin)?;
    let v_c = closure_rate(kin, beta)?;
    let line = missile_line(kin, d_launch)?;
    let travelled = match convention {
        TofConvention::Literal => line.range / line.v_closure * v_c,
        TofConvention::Kinematic => line.range / (kin.v_missile_blue + kin.v_blue) * v_c,
    };
    Ok(d_launch - travelled)
}

/// All derived angles and rates of blue's intercept.
pub fn solve_intercept(kin: &Kinematics) -> Result<InterceptSolution> {
    let beta = lead_angle(kin)?;
    let (alpha, v_closure) = closure(kin.v_blue, kin.v_red, kin.rho, beta)?;
    let line = missile_line(kin, 1.0)?;
    Ok(InterceptSolution {
        beta,
        alpha,
        v_closure,
        mu_blue: line.mu,
        alpha_missile: line.alpha,
        v_closure_missile: line.v_closure,
        sine_ratio: line.sine_ratio,
    })
}
