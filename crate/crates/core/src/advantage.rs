//! Gaussian launch-range models and first-kill probabilities.
//!
//! Each side detects at a normally distributed range D and launches after a
//! normally distributed delay T, during which the aircraft close by
//! L = V_C·T. Active-radar (AR) missiles add the seeker acquisition range
//! D_M. Every quantity is a linear combination of independent Gaussians, so
//! each "range advantage" Z is Gaussian with closed-form mean and variance.

use serde::{Deserialize, Serialize};

use crate::error::{check_nonnegative, EngageError, Result};
use crate::geometry::{closure_rate, lead_angle, separation_factor, Kinematics, TofConvention};
use crate::normal::prob_positive;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianSpec {
    pub mean: f64,
    pub sd: f64,
}

impl GaussianSpec {
    pub const fn new(mean: f64, sd: f64) -> Self {
        Self { mean, sd }
    }

    pub const fn point(mean: f64) -> Self {
        Self { mean, sd: 0.0 }
    }

    pub fn variance(&self) -> f64 {
        self.sd * self.sd
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        if !self.mean.is_finite() {
            return Err(EngageError::Domain(format!("{name}.mean must be finite")));
        }
        check_nonnegative(&format!("{name}.sd"), self.sd)
    }

    fn scaled(&self, c: f64) -> Self {
        Self { mean: self.mean * c, sd: self.sd * c }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Seeker {
    /// Semi-active radar: the launcher supports the missile until impact.
    Sar,
    /// Active radar: support ends when the missile's own seeker acquires.
    Ar,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideStochastics {
    /// Detection range D (m).
    pub detection: GaussianSpec,
    /// Delay T between detection and launch (s).
    pub launch_delay: GaussianSpec,
    pub seeker: Seeker,
    /// Seeker acquisition range D_M (m), AR seekers only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeker_acquisition: Option<GaussianSpec>,
}

impl SideStochastics {
    pub fn validate(&self, side: &str) -> Result<()> {
        self.detection.validate(&format!("{side}.detection"))?;
        self.launch_delay.validate(&format!("{side}.launch_delay"))?;
        if let Some(acq) = &self.seeker_acquisition {
            acq.validate(&format!("{side}.seeker_acquisition"))?;
        }
        Ok(())
    }

    /// Non-fatal modelling hygiene issues, e.g. a launch delay whose mean is
    /// less than three standard deviations from zero.
    pub fn warnings(&self, side: &str) -> Vec<String> {
        let mut out = Vec::new();
        let delay = &self.launch_delay;
        if delay.mean < 3.0 * delay.sd {
            out.push(format!(
                "{side}.launch_delay mean {} s is less than 3 sd ({} s) from zero; launch-before-detection is not negligible",
                delay.mean,
                3.0 * delay.sd
            ));
        }
        if self.seeker == Seeker::Sar && self.seeker_acquisition.is_some() {
            out.push(format!("{side}.seeker_acquisition is ignored for a SAR seeker"));
        }
        out
    }

    fn acquisition(&self, side: &str) -> Result<GaussianSpec> {
        match (self.seeker, self.seeker_acquisition) {
            (Seeker::Ar, Some(acq)) => Ok(acq),
            (Seeker::Ar, None) => Err(EngageError::Config(format!(
                "{side} has an AR seeker but no seeker_acquisition distribution"
            ))),
            (Seeker::Sar, _) => Err(EngageError::Config(format!("{side} must carry an AR seeker for this analysis"))),
        }
    }

    /// Multiplies every range quantity (detection, acquisition) and the
    /// launch delay by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            detection: self.detection.scaled(c),
            launch_delay: self.launch_delay.scaled(c),
            seeker: self.seeker,
            seeker_acquisition: self.seeker_acquisition.map(|g| g.scaled(c)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngagementScenario {
    pub kinematics: Kinematics,
    pub blue: SideStochastics,
    pub red: SideStochastics,
    #[serde(default)]
    pub tof_convention: TofConvention,
}

impl EngagementScenario {
    pub fn validate(&self) -> Result<()> {
        self.kinematics.validate()?;
        self.blue.validate("blue")?;
        self.red.validate("red")
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut w = self.blue.warnings("blue");
        w.extend(self.red.warnings("red"));
        w
    }

    /// Blue and red exchanged, with red's collision geometry as the new
    /// blue geometry.
    pub fn swapped(&self) -> Result<Self> {
        Ok(Self {
            kinematics: self.kinematics.from_red()?,
            blue: self.red,
            red: self.blue,
            tof_convention: self.tof_convention,
        })
    }

    /// Deterministic geometry shared by every model: closure rate and the
    /// separation factors of blue's and red's missiles.
    pub fn geometry(&self) -> Result<ScenarioGeometry> {
        self.validate()?;
        let kin = &self.kinematics;
        let beta = lead_angle(kin)?;
        let v_closure = closure_rate(kin, beta)?;
        let blue_factor = separation_factor(kin, self.tof_convention)?;
        let red_factor = separation_factor(&kin.from_red()?, self.tof_convention)?;
        Ok(ScenarioGeometry { v_closure, blue_factor, red_factor })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioGeometry {
    /// Aircraft closure rate V_C (m/s).
    pub v_closure: f64,
    /// 1 − (sin ρ / sin α_MB)(V_C / V_CMB) or its kinematic counterpart.
    pub blue_factor: f64,
    /// 1 − (sin β / sin α_MR)(V_C / V_CMR) or its kinematic counterpart.
    pub red_factor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeAdvantageResult {
    pub mu_z: f64,
    pub sigma_z: f64,
    pub probability: f64,
}

impl RangeAdvantageResult {
    /// P(Z > 0).
    fn positive(mu_z: f64, var_z: f64) -> Self {
        let sigma_z = var_z.max(0.0).sqrt();
        Self { mu_z, sigma_z, probability: prob_positive(mu_z, sigma_z) }
    }

    /// P(Z < 0).
    fn negative(mu_z: f64, var_z: f64) -> Self {
        let sigma_z = var_z.max(0.0).sqrt();
        Self { mu_z, sigma_z, probability: prob_positive(-mu_z, sigma_z) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaunchRange {
    pub distribution: GaussianSpec,
    pub warning: Option<String>,
}

/// Distribution of the launch range D − V_C·T.
pub fn launch_range_distribution(side: &SideStochastics, v_closure: f64) -> Result<LaunchRange> {
    side.validate("side")?;
    let travel_sd = v_closure * side.launch_delay.sd;
    let distribution = GaussianSpec {
        mean: side.detection.mean - v_closure * side.launch_delay.mean,
        sd: (side.detection.variance() + travel_sd * travel_sd).sqrt(),
    };
    let warning = (distribution.mean <= 0.0).then(|| {
        format!(
            "mean launch range {} m is not positive; the aircraft close past each other before launch",
            distribution.mean
        )
    });
    Ok(LaunchRange { distribution, warning })
}

/// Blue's SAR missile kills red before red reaches its launch range.
pub fn sar_first_kill(scenario: &EngagementScenario) -> Result<RangeAdvantageResult> {
    let g = scenario.geometry()?;
    let blue = launch_range_distribution(&scenario.blue, g.v_closure)?.distribution;
    let red = launch_range_distribution(&scenario.red, g.v_closure)?.distribution;
    let mu = g.blue_factor * blue.mean - red.mean;
    let var = g.blue_factor.powi(2) * blue.variance() + red.variance();
    Ok(RangeAdvantageResult::positive(mu, var))
}

/// Blue's AR missile: support ends at seeker acquisition, extending blue's
/// effective reach by D_MB.
pub fn ar_first_kill(scenario: &EngagementScenario) -> Result<RangeAdvantageResult> {
    let acq = scenario.blue.acquisition("blue")?;
    let g = scenario.geometry()?;
    let blue = launch_range_distribution(&scenario.blue, g.v_closure)?.distribution;
    let red = launch_range_distribution(&scenario.red, g.v_closure)?.distribution;
    let mu = g.blue_factor * (blue.mean + acq.mean) - red.mean;
    let var = g.blue_factor.powi(2) * (blue.variance() + acq.variance()) + red.variance();
    Ok(RangeAdvantageResult::positive(mu, var))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DuelOutcomes {
    /// Z_B statistics and P(blue wins).
    pub blue_win: RangeAdvantageResult,
    /// Z_R statistics and P(red wins).
    pub red_win: RangeAdvantageResult,
    /// 1 − P(blue wins) − P(red wins), unclamped.
    pub p_mutual_kill: f64,
    /// Set when the mutual-kill complement falls outside [0, 1].
    pub out_of_range: bool,
}

/// Single-missile AR duel.
///
/// Z_B = f_B·(D_B − L_B) − f_R·(D_R − L_R + D_MR) and
/// Z_R = f_B·(D_B − L_B + D_MB) − f_R·(D_R − L_R).
/// Blue wins when its missile kills red while red's missile is still short of
/// acquisition (Z_B > 0); red wins when Z_R < 0. The mutual kill is the
/// complement of the two win probabilities, which treats the win events as
/// disjoint; `crate::oracle::mc_range_advantage` measures their overlap.
pub fn duel_outcomes(scenario: &EngagementScenario) -> Result<DuelOutcomes> {
    let acq_b = scenario.blue.acquisition("blue")?;
    let acq_r = scenario.red.acquisition("red")?;
    let g = scenario.geometry()?;
    let blue = launch_range_distribution(&scenario.blue, g.v_closure)?.distribution;
    let red = launch_range_distribution(&scenario.red, g.v_closure)?.distribution;
    let (fb2, fr2) = (g.blue_factor.powi(2), g.red_factor.powi(2));

    let mu_zb = g.blue_factor * blue.mean - g.red_factor * (red.mean + acq_r.mean);
    let var_zb = fb2 * blue.variance() + fr2 * (red.variance() + acq_r.variance());
    let mu_zr = g.blue_factor * (blue.mean + acq_b.mean) - g.red_factor * red.mean;
    let var_zr = fb2 * (blue.variance() + acq_b.variance()) + fr2 * red.variance();

    let blue_win = RangeAdvantageResult::positive(mu_zb, var_zb);
    let red_win = RangeAdvantageResult::negative(mu_zr, var_zr);
    let p_mutual_kill = 1.0 - (blue_win.probability + red_win.probability);
    Ok(DuelOutcomes {
        blue_win,
        red_win,
        p_mutual_kill,
        out_of_range: !(0.0..=1.0).contains(&p_mutual_kill),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_3;

    fn side(d: GaussianSpec, t: GaussianSpec, acq: Option<GaussianSpec>) -> SideStochastics {
        SideStochastics {
            detection: d,
            launch_delay: t,
            seeker: if acq.is_some() { Seeker::Ar } else { Seeker::Sar },
            seeker_acquisition: acq,
        }
    }

    fn symmetric(v_missile: f64, acq: Option<GaussianSpec>) -> EngagementScenario {
        let s = side(GaussianSpec::new(60_000.0, 3_000.0), GaussianSpec::new(5.0, 1.0), acq);
        EngagementScenario {
            kinematics: Kinematics {
                v_blue: 300.0,
                v_red: 300.0,
                rho: FRAC_PI_3,
                v_missile_blue: v_missile,
                v_missile_red: v_missile,
            },
            blue: s,
            red: s,
            tof_convention: TofConvention::Literal,
        }
    }

    #[test]
    fn launch_range_examples() {
        let s = side(GaussianSpec::point(50_000.0), GaussianSpec::point(4.0), None);
        let lr = launch_range_distribution(&s, 500.0).unwrap();
        assert_eq!(lr.distribution, GaussianSpec::point(48_000.0));
        assert!(lr.warning.is_none());

        let s = side(GaussianSpec::new(50_000.0, 2_000.0), GaussianSpec::point(0.0), None);
        let lr = launch_range_distribution(&s, 500.0).unwrap();
        assert_eq!(lr.distribution, s.detection);

        let s = side(GaussianSpec::new(60_000.0, 3_000.0), GaussianSpec::new(5.0, 1.0), None);
        let lr = launch_range_distribution(&s, 600.0).unwrap();
        assert_abs_diff_eq!(lr.distribution.mean, 57_000.0, epsilon = 1e-9);
        assert_abs_diff_eq!(lr.distribution.sd, (3_000.0f64.powi(2) + 600.0f64.powi(2)).sqrt(), epsilon = 1e-9);

        let s = side(GaussianSpec::point(1_000.0), GaussianSpec::point(10.0), None);
        assert!(launch_range_distribution(&s, 500.0).unwrap().warning.is_some());
    }

    #[test]
    fn deterministic_step() {
        let mut sc = symmetric(600.0, None);
        sc.blue.detection = GaussianSpec::point(200_000.0);
        sc.blue.launch_delay = GaussianSpec::point(5.0);
        sc.red.detection = GaussianSpec::point(20_000.0);
        sc.red.launch_delay = GaussianSpec::point(5.0);
        let r = sar_first_kill(&sc).unwrap();
        assert!(r.mu_z > 0.0);
        assert_eq!(r.sigma_z, 0.0);
        assert_eq!(r.probability, 1.0);
    }

    #[test]
    fn fast_missile_symmetry_limit() {
        let r = sar_first_kill(&symmetric(1e13, None)).unwrap();
        assert_abs_diff_eq!(r.probability, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn ar_requires_acquisition() {
        let sc = symmetric(600.0, None);
        assert!(matches!(ar_first_kill(&sc), Err(EngageError::Config(_))));
        let mut sc = symmetric(600.0, None);
        sc.blue.seeker = Seeker::Ar;
        assert!(matches!(ar_first_kill(&sc), Err(EngageError::Config(_))));
        assert!(matches!(duel_outcomes(&sc), Err(EngageError::Config(_))));
    }

    #[test]
    fn ar_with_zero_acquisition_is_sar() {
        let sc = symmetric(600.0, Some(GaussianSpec::point(0.0)));
        let ar = ar_first_kill(&sc).unwrap();
        let sar = sar_first_kill(&sc).unwrap();
        assert_eq!(ar, sar);
    }

    #[test]
    fn ar_beats_sar() {
        let sc = symmetric(600.0, Some(GaussianSpec::new(15_000.0, 1_000.0)));
        assert!(ar_first_kill(&sc).unwrap().probability > sar_first_kill(&sc).unwrap().probability);
    }

    #[test]
    fn acquisition_spread_can_lower_a_favourable_probability() {
        let mut sc = symmetric(600.0, Some(GaussianSpec::new(0.0, 20_000.0)));
        sc.blue.detection.mean = 120_000.0;
        let sar = sar_first_kill(&sc).unwrap();
        let ar = ar_first_kill(&sc).unwrap();
        assert!(sar.mu_z > 0.0);
        assert!(ar.probability < sar.probability);
    }

    #[test]
    fn symmetric_duel() {
        let sc = symmetric(600.0, Some(GaussianSpec::new(15_000.0, 1_000.0)));
        let d = duel_outcomes(&sc).unwrap();
        assert_eq!(d.blue_win.probability, d.red_win.probability);
        assert_eq!(d.blue_win.probability + d.red_win.probability + d.p_mutual_kill, 1.0);
        assert!(!d.out_of_range);
    }

    #[test]
    fn delay_hygiene_warning() {
        let mut sc = symmetric(600.0, None);
        assert!(sc.warnings().is_empty());
        sc.blue.launch_delay = GaussianSpec::new(2.0, 1.0);
        let w = sc.warnings();
        assert_eq!(w.len(), 1);
        assert!(w[0].contains("blue.launch_delay"));
    }

    #[test]
    fn role_swap() {
        let mut sc = symmetric(600.0, Some(GaussianSpec::new(15_000.0, 1_000.0)));
        sc.kinematics.v_red = 250.0;
        sc.kinematics.v_missile_red = 500.0;
        sc.red.detection = GaussianSpec::new(50_000.0, 2_000.0);
        let d = duel_outcomes(&sc).unwrap();
        let s = duel_outcomes(&sc.swapped().unwrap()).unwrap();
        assert_relative_eq!(d.blue_win.probability, s.red_win.probability, max_relative = 1e-9);
        assert_relative_eq!(d.red_win.probability, s.blue_win.probability, max_relative = 1e-9);
        assert_relative_eq!(d.p_mutual_kill, s.p_mutual_kill, max_relative = 1e-9);
    }

    proptest! {
        #[test]
        fn ar_dominates_sar(
            d_acq in 0.0f64..30_000.0, sd_acq in 0.0f64..3_000.0,
            d_blue in 30_000.0f64..90_000.0, d_red in 30_000.0f64..90_000.0,
        ) {
            let mut sc = symmetric(600.0, Some(GaussianSpec::point(d_acq)));
            sc.blue.detection.mean = d_blue;
            sc.red.detection.mean = d_red;
            let sar = sar_first_kill(&sc).unwrap().probability;
            prop_assert!(ar_first_kill(&sc).unwrap().probability >= sar);

            // with μ_Z ≤ 0 extra acquisition spread cannot hurt either
            let mut spread = sc;
            spread.blue.seeker_acquisition = Some(GaussianSpec::new(d_acq, sd_acq));
            let ar = ar_first_kill(&spread).unwrap();
            if ar.mu_z <= 0.0 {
                prop_assert!(ar.probability >= sar);
            }
        }

        #[test]
        fn scale_invariance(c in 0.1f64..10.0) {
            let sc = symmetric(600.0, Some(GaussianSpec::new(15_000.0, 1_000.0)));
            let mut scaled = sc;
            scaled.blue = sc.blue.scaled(c);
            scaled.red = sc.red.scaled(c);
            let a = duel_outcomes(&sc).unwrap();
            let b = duel_outcomes(&scaled).unwrap();
            prop_assert!((a.blue_win.probability - b.blue_win.probability).abs() < 1e-12);
            prop_assert!((a.red_win.probability - b.red_win.probability).abs() < 1e-12);
            let s1 = ar_first_kill(&sc).unwrap().probability;
            let s2 = ar_first_kill(&scaled).unwrap().probability;
            prop_assert!((s1 - s2).abs() < 1e-12);
        }
    }
}
