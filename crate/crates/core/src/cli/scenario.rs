//! Scenario file schema and its conversion into model parameters.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::Value;

use crate::advantage::{EngagementScenario, SideStochastics};
use crate::calculus::{DuelParams, NvnParams, SalvoParams};
use crate::detection::{parse_trace, validate_trace, FusionConfig, SensorFrame};
use crate::error::EngageError;
use crate::geometry::{Kinematics, TofConvention};
use crate::oracle::McConfig;
use crate::pursuit::PursuitScenario;
use crate::radar::{LightSpeed, PulseParams, SnrParams};

use super::Failure;

pub const SECTIONS: [&str; 8] = ["salvo", "duel", "nvn", "geometry", "range_advantage", "pursuit", "radar", "detect"];

pub const DEFAULT_MC_SAMPLES: u64 = 100_000;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub salvo: Option<SalvoParams>,
    pub duel: Option<DuelParams>,
    pub nvn: Option<NvnParams>,
    pub geometry: Option<GeometryInput>,
    pub range_advantage: Option<RangeAdvantageInput>,
    pub pursuit: Option<PursuitInput>,
    pub radar: Option<RadarInput>,
    pub detect: Option<DetectInput>,
    pub monte_carlo: Option<MonteCarloBlock>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloBlock {
    #[serde(default = "default_samples")]
    pub samples: u64,
    #[serde(default)]
    pub seed: u64,
}

fn default_samples() -> u64 {
    DEFAULT_MC_SAMPLES
}

/// Aircraft kinematics with the heading in degrees.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KinematicsInput {
    pub v_blue: f64,
    pub v_red: f64,
    pub rho_deg: f64,
    #[serde(default)]
    pub v_missile_blue: f64,
    #[serde(default)]
    pub v_missile_red: f64,
}

impl KinematicsInput {
    pub fn to_model(self) -> Kinematics {
        Kinematics {
            v_blue: self.v_blue,
            v_red: self.v_red,
            rho: self.rho_deg.to_radians(),
            v_missile_blue: self.v_missile_blue,
            v_missile_red: self.v_missile_red,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryInput {
    pub v_blue: f64,
    pub v_red: f64,
    pub rho_deg: f64,
    #[serde(default)]
    pub v_missile_blue: f64,
    #[serde(default)]
    pub v_missile_red: f64,
    /// Launch range (m); enables missile range and separation outputs.
    pub d_launch: Option<f64>,
    pub tof_convention: Option<TofConvention>,
}

impl GeometryInput {
    pub fn kinematics(&self) -> Kinematics {
        KinematicsInput {
            v_blue: self.v_blue,
            v_red: self.v_red,
            rho_deg: self.rho_deg,
            v_missile_blue: self.v_missile_blue,
            v_missile_red: self.v_missile_red,
        }
        .to_model()
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeAdvantageInput {
    pub kinematics: KinematicsInput,
    pub blue: SideStochastics,
    pub red: SideStochastics,
    pub tof_convention: Option<TofConvention>,
}

impl RangeAdvantageInput {
    pub fn to_model(&self, convention: Option<TofConvention>) -> EngagementScenario {
        EngagementScenario {
            kinematics: self.kinematics.to_model(),
            blue: self.blue,
            red: self.red,
            tof_convention: convention.or(self.tof_convention).unwrap_or_default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PursuitPreset {
    Reference,
    ReferenceAlternate,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PursuitInput {
    pub preset: Option<PursuitPreset>,
    pub waypoints: Option<Vec<[f64; 2]>>,
    pub follower_start: Option<[f64; 2]>,
    pub follower_speed: Option<f64>,
    pub kill_radius: Option<f64>,
}

impl PursuitInput {
    /// Explicit fields override the preset's.
    pub fn to_model(&self) -> Result<PursuitScenario, Failure> {
        let base = self.preset.map(|p| match p {
            PursuitPreset::Reference => PursuitScenario::reference_track(),
            PursuitPreset::ReferenceAlternate => PursuitScenario::reference_track_alternate(),
        });
        let missing = |name: &str| Failure::Invalid(format!("pursuit.{name} is required without a preset"));
        Ok(PursuitScenario {
            waypoints: match (&self.waypoints, &base) {
                (Some(w), _) => w.clone(),
                (None, Some(b)) => b.waypoints.clone(),
                (None, None) => return Err(missing("waypoints")),
            },
            follower_start: self.follower_start.or(base.as_ref().map(|b| b.follower_start)).ok_or_else(|| missing("follower_start"))?,
            follower_speed: self.follower_speed.or(base.as_ref().map(|b| b.follower_speed)).ok_or_else(|| missing("follower_speed"))?,
            kill_radius: self.kill_radius.or(base.as_ref().map(|b| b.kill_radius)).ok_or_else(|| missing("kill_radius"))?,
        })
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadarTarget {
    /// Range (m).
    pub range: f64,
    /// Closing speed along the line of sight (m/s).
    #[serde(default)]
    pub radial_velocity: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadarInput {
    pub prf: f64,
    pub n_bins: u32,
    pub f_tx: f64,
    #[serde(default)]
    pub light_speed: LightSpeed,
    #[serde(default)]
    pub targets: Vec<RadarTarget>,
    pub snr: Option<SnrParams>,
}

impl RadarInput {
    pub fn pulse(&self) -> PulseParams {
        PulseParams { prf: self.prf, n_bins: self.n_bins, f_tx: self.f_tx }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectInput {
    /// JSON Lines trace, relative to the scenario file.
    pub trace: Option<PathBuf>,
    pub frames: Option<Vec<SensorFrame>>,
    #[serde(default)]
    pub fusion: FusionConfig,
}

impl DetectInput {
    pub fn load_frames(&self, base_dir: &Path) -> Result<Vec<SensorFrame>, Failure> {
        match (&self.trace, &self.frames) {
            (Some(path), None) => {
                let full = base_dir.join(path);
                let text = std::fs::read_to_string(&full)
                    .map_err(|e| Failure::Parse(format!("cannot read trace {}: {e}", full.display())))?;
                Ok(parse_trace(&text)?)
            }
            (None, Some(frames)) => {
                validate_trace(frames)?;
                Ok(frames.clone())
            }
            _ => Err(Failure::Invalid("detect needs exactly one of `trace` or `frames`".into())),
        }
    }
}

/// The single analysis a scenario file requests.
#[derive(Debug, Clone)]
pub enum Analysis {
    Salvo(SalvoParams),
    Duel(DuelParams),
    Nvn(NvnParams),
    Geometry(GeometryInput),
    RangeAdvantage(RangeAdvantageInput),
    Pursuit(PursuitInput),
    Radar(RadarInput),
    Detect(DetectInput),
}

impl Analysis {
    pub fn name(&self) -> &'static str {
        match self {
            Analysis::Salvo(_) => "salvo",
            Analysis::Duel(_) => "duel",
            Analysis::Nvn(_) => "nvn",
            Analysis::Geometry(_) => "geometry",
            Analysis::RangeAdvantage(_) => "range_advantage",
            Analysis::Pursuit(_) => "pursuit",
            Analysis::Radar(_) => "radar",
            Analysis::Detect(_) => "detect",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub analysis: Analysis,
    pub monte_carlo: Option<MonteCarloBlock>,
}

impl Scenario {
    pub fn from_value(value: Value) -> Result<Self, Failure> {
        let file: ScenarioFile =
            serde_json::from_value(value).map_err(|e| Failure::Invalid(format!("scenario: {e}")))?;
        let mut found = Vec::new();
        let ScenarioFile { salvo, duel, nvn, geometry, range_advantage, pursuit, radar, detect, monte_carlo } = file;
        found.extend(salvo.map(Analysis::Salvo));
        found.extend(duel.map(Analysis::Duel));
        found.extend(nvn.map(Analysis::Nvn));
        found.extend(geometry.map(Analysis::Geometry));
        found.extend(range_advantage.map(Analysis::RangeAdvantage));
        found.extend(pursuit.map(Analysis::Pursuit));
        found.extend(radar.map(Analysis::Radar));
        found.extend(detect.map(Analysis::Detect));
        if found.len() != 1 {
            let names: Vec<_> = found.iter().map(Analysis::name).collect();
            return Err(Failure::Invalid(format!(
                "scenario must contain exactly one of {}; found [{}]",
                SECTIONS.join(", "),
                names.join(", ")
            )));
        }
        Ok(Scenario { analysis: found.remove(0), monte_carlo })
    }

    /// Parameter checks only; nothing is solved.
    pub fn validate(&self, base_dir: &Path) -> Result<(), Failure> {
        if let Some(mc) = &self.monte_carlo {
            McConfig::new(mc.samples, mc.seed).validate()?;
        }
        match &self.analysis {
            Analysis::Salvo(p) => p.validate()?,
            Analysis::Duel(p) => p.validate()?,
            Analysis::Nvn(p) => p.validate()?,
            Analysis::Geometry(g) => {
                g.kinematics().validate()?;
                if let Some(d) = g.d_launch {
                    if !(d.is_finite() && d > 0.0) {
                        return Err(EngageError::Domain(format!("d_launch must be > 0, got {d}")).into());
                    }
                }
            }
            Analysis::RangeAdvantage(r) => r.to_model(None).validate()?,
            Analysis::Pursuit(p) => p.to_model()?.validate()?,
            Analysis::Radar(r) => {
                r.pulse().validate()?;
                for t in &r.targets {
                    if !(t.range.is_finite() && t.range >= 0.0 && t.radial_velocity.is_finite()) {
                        return Err(Failure::Invalid(format!("invalid radar target {t:?}")));
                    }
                }
                if let Some(s) = &r.snr {
                    s.validate()?;
                }
            }
            Analysis::Detect(d) => {
                d.fusion.validate()?;
                d.load_frames(base_dir)?;
            }
        }
        Ok(())
    }

    /// Non-fatal modelling warnings.
    pub fn warnings(&self) -> Vec<String> {
        match &self.analysis {
            Analysis::RangeAdvantage(r) => r.to_model(None).warnings(),
            _ => Vec::new(),
        }
    }
}

/// Reads JSON text, separating syntax failures from schema failures.
pub fn parse_json(text: &str) -> Result<Value, Failure> {
    serde_json::from_str(text).map_err(|e| {
        if e.is_data() {
            Failure::Invalid(format!("scenario: {e}"))
        } else {
            Failure::Parse(format!("scenario: {e}"))
        }
    })
}
