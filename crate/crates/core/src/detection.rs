//! Replay of scripted sensor traces through a sonar/smoke/metal cue-fusion
//! ladder.
//!
//! Positions are taken in the sweep plane with x along the servo's 90°
//! boresight and y across it, so a frame at angle θ and range r sits at
//! (r·sin θ, −r·cos θ).

use serde::{Deserialize, Serialize};

use crate::error::{EngageError, Result};

pub const SWEEP_MIN_DEG: f64 = 15.0;
pub const SWEEP_MAX_DEG: f64 = 165.0;
pub const SMOKE_THRESHOLD: u16 = 400;
pub const SMOKE_ANALOG_MAX: u16 = 1023;
/// Half the speed of sound in cm/µs.
const SONAR_CM_PER_US: f64 = 0.034 / 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorFrame {
    /// Seconds.
    pub timestamp: f64,
    /// Servo angle in degrees.
    pub servo_angle: f64,
    /// Ultrasonic echo duration in µs; zero when nothing returned.
    pub echo_duration: f64,
    pub smoke_analog: u16,
    pub metal_flag: bool,
}

impl SensorFrame {
    pub fn validate(&self) -> Result<()> {
        if !self.timestamp.is_finite() {
            return Err(EngageError::Domain(format!("timestamp must be finite, got {}", self.timestamp)));
        }
        if !(SWEEP_MIN_DEG..=SWEEP_MAX_DEG).contains(&self.servo_angle) {
            return Err(EngageError::Domain(format!(
                "servo_angle {} outside the [{SWEEP_MIN_DEG}, {SWEEP_MAX_DEG}] degree sweep",
                self.servo_angle
            )));
        }
        if !(self.echo_duration.is_finite() && self.echo_duration >= 0.0) {
            return Err(EngageError::Domain(format!("echo_duration must be >= 0, got {}", self.echo_duration)));
        }
        if self.smoke_analog > SMOKE_ANALOG_MAX {
            return Err(EngageError::Domain(format!("smoke_analog must be <= 1023, got {}", self.smoke_analog)));
        }
        Ok(())
    }

    pub fn range_cm(&self) -> f64 {
        sonar_distance(self.echo_duration)
    }

    pub fn position_cm(&self) -> [f64; 2] {
        let r = self.range_cm();
        let theta = self.servo_angle.to_radians();
        [r * theta.sin(), -r * theta.cos()]
    }
}

/// Checks every frame and that timestamps strictly increase.
pub fn validate_trace(frames: &[SensorFrame]) -> Result<()> {
    for (i, f) in frames.iter().enumerate() {
        f.validate().map_err(|e| EngageError::Domain(format!("frame {i}: {e}")))?;
    }
    if let Some(i) = frames.windows(2).position(|w| w[1].timestamp <= w[0].timestamp) {
        return Err(EngageError::Domain(format!("frame {}: timestamps must strictly increase", i + 1)));
    }
    Ok(())
}

/// Reads one JSON frame per non-blank line.
pub fn parse_trace(text: &str) -> Result<Vec<SensorFrame>> {
    let mut frames = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let frame: SensorFrame = serde_json::from_str(line).map_err(|e| {
            let msg = format!("trace line {}: {e}", n + 1);
            if e.is_data() {
                EngageError::Domain(msg)
            } else {
                EngageError::Parse(msg)
            }
        })?;
        frames.push(frame);
    }
    validate_trace(&frames)?;
    Ok(frames)
}

pub fn write_trace(frames: &[SensorFrame]) -> String {
    frames
        .iter()
        .map(|f| serde_json::to_string(f).expect("frames serialize") + "\n")
        .collect()
}

pub fn sonar_distance(echo_duration_us: f64) -> f64 {
    echo_duration_us * SONAR_CM_PER_US
}

pub fn smoke_alarm(smoke_analog: u16) -> bool {
    smoke_analog > SMOKE_THRESHOLD
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FusionConfig {
    /// A sonar return counts as a detection below this range (cm).
    pub max_range_cm: f64,
    /// Smoke and metal cues must fall within this many seconds of a detection.
    pub window_s: f64,
}

impl Default for FusionConfig {
    fn default() -> Self {
        Self { max_range_cm: 40.0, window_s: 1.0 }
    }
}

impl FusionConfig {
    pub fn validate(&self) -> Result<()> {
        crate::error::check_positive("max_range_cm", self.max_range_cm)?;
        crate::error::check_nonnegative("window_s", self.window_s)
    }

    fn is_detection(&self, f: &SensorFrame) -> bool {
        f.echo_duration > 0.0 && f.range_cm() < self.max_range_cm
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ObjectClass {
    NoObject,
    MovingObject,
    SmokeBearingObject,
    MissileClassified,
}

impl std::fmt::Display for ObjectClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ObjectClass::NoObject => "NoObject",
            ObjectClass::MovingObject => "MovingObject",
            ObjectClass::SmokeBearingObject => "SmokeBearingObject",
            ObjectClass::MissileClassified => "MissileClassified",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Track {
    /// Range of the last detection (cm).
    pub range_cm: f64,
    /// Speed over the last pair of detections (cm/s).
    pub speed_cm_s: f64,
    /// Direction of the last displacement, degrees counter-clockwise from +x.
    pub heading_deg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionVerdict {
    pub class: ObjectClass,
    /// Range of the last detection, when there was one.
    pub estimated_range_cm: Option<f64>,
    /// Present when at least two detections were seen.
    pub track: Option<Track>,
}

fn detections<'a>(frames: &'a [SensorFrame], config: &'a FusionConfig) -> impl Iterator<Item = &'a SensorFrame> {
    frames.iter().filter(move |f| config.is_detection(f))
}

pub fn track_object(frames: &[SensorFrame], config: &FusionConfig) -> Result<Track> {
    let hits: Vec<&SensorFrame> = detections(frames, config).collect();
    let [.., a, b] = hits.as_slice() else {
        return Err(EngageError::InsufficientData(format!(
            "tracking needs at least 2 detections, found {}",
            hits.len()
        )));
    };
    let (pa, pb) = (a.position_cm(), b.position_cm());
    let (dx, dy) = (pb[0] - pa[0], pb[1] - pa[1]);
    let dt = b.timestamp - a.timestamp;
    if dt.is_nan() || dt <= 0.0 {
        return Err(EngageError::Domain("detections must have increasing timestamps".into()));
    }
    Ok(Track {
        range_cm: b.range_cm(),
        speed_cm_s: dx.hypot(dy) / dt,
        heading_deg: dy.atan2(dx).to_degrees(),
    })
}

pub fn classify(frames: &[SensorFrame], config: &FusionConfig) -> DetectionVerdict {
    let near = |t: f64, cue: &dyn Fn(&SensorFrame) -> bool| {
        frames.iter().any(|f| cue(f) && (f.timestamp - t).abs() <= config.window_s)
    };
    let class = detections(frames, config)
        .map(|d| {
            let smoke = near(d.timestamp, &|f| smoke_alarm(f.smoke_analog));
            let metal = near(d.timestamp, &|f| f.metal_flag);
            match (smoke, metal) {
                (true, true) => ObjectClass::MissileClassified,
                (true, false) => ObjectClass::SmokeBearingObject,
                _ => ObjectClass::MovingObject,
            }
        })
        .max()
        .unwrap_or(ObjectClass::NoObject);
    DetectionVerdict {
        class,
        estimated_range_cm: detections(frames, config).last().map(SensorFrame::range_cm),
        track: track_object(frames, config).ok(),
    }
}
