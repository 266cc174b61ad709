//! Pulse timing, range binning, Doppler and radar range equation.

use serde::{Deserialize, Serialize};

use crate::error::{check_nonnegative, check_positive, EngageError, Result};

pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Speed-of-light constant set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LightSpeed {
    /// 3×10⁸ m/s, the rounded value used in textbook worked examples.
    #[default]
    Nominal,
    /// 299 792 458 m/s.
    Exact,
}

impl LightSpeed {
    pub const fn value(self) -> f64 {
        match self {
            LightSpeed::Nominal => 3.0e8,
            LightSpeed::Exact => 299_792_458.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseParams {
    /// Pulse repetition frequency (Hz).
    pub prf: f64,
    pub n_bins: u32,
    /// Transmit frequency (Hz).
    pub f_tx: f64,
}

impl PulseParams {
    pub fn validate(&self) -> Result<()> {
        check_positive("prf", self.prf)?;
        check_positive("f_tx", self.f_tx)?;
        if self.n_bins == 0 {
            return Err(EngageError::Domain("n_bins must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeBin {
    /// Bin index, counted from zero delay.
    pub index: u32,
    /// Echo delay after folding into one pulse repetition interval (s).
    pub folded_delay: f64,
    /// Number of whole intervals the echo was folded by.
    pub folds: u64,
    /// True when the echo arrived after the next pulse was transmitted.
    pub aliased: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DopplerFold {
    pub folded: f64,
    pub aliased: bool,
}

/// Rounds values within a few ulps-worth of an integer onto it, so that
/// exact decimal inputs such as 21 km / 15 km land on their intended bins.
fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        x
    }
}

/// Radar relations evaluated with one speed-of-light constant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RadarCalc {
    pub light: LightSpeed,
}

impl RadarCalc {
    pub const fn new(light: LightSpeed) -> Self {
        Self { light }
    }

    fn c(&self) -> f64 {
        self.light.value()
    }

    pub fn pulse_interval(&self, prf: f64) -> Result<f64> {
        check_positive("prf", prf)?;
        Ok(1.0 / prf)
    }

    /// Largest range whose echo returns before the next pulse: c / (2·PRF).
    pub fn unambiguous_range(&self, prf: f64) -> Result<f64> {
        check_positive("prf", prf)?;
        Ok(self.c() / (2.0 * prf))
    }

    /// Round-trip delay 2R / c.
    pub fn echo_delay(&self, range: f64) -> Result<f64> {
        check_nonnegative("range", range)?;
        Ok(2.0 * range / self.c())
    }

    /// Range measured from a round-trip delay.
    pub fn range_from_delay(&self, delay: f64) -> Result<f64> {
        check_nonnegative("delay", delay)?;
        Ok(self.c() * delay / 2.0)
    }

    pub fn range_resolution(&self, pulse: &PulseParams) -> Result<f64> {
        pulse.validate()?;
        Ok(self.unambiguous_range(pulse.prf)? / pulse.n_bins as f64)
    }

    pub fn range_bin(&self, range: f64, pulse: &PulseParams) -> Result<RangeBin> {
        pulse.validate()?;
        check_nonnegative("range", range)?;
        let intervals = snap(range / self.unambiguous_range(pulse.prf)?);
        let folds = intervals.floor();
        let fraction = intervals - folds;
        let index = (snap(fraction * pulse.n_bins as f64).floor() as u32).min(pulse.n_bins - 1);
        Ok(RangeBin {
            index,
            folded_delay: fraction / pulse.prf,
            folds: folds as u64,
            aliased: folds >= 1.0,
        })
    }

    /// Doppler shift 2·f·v / c; positive for a closing target.
    pub fn doppler_shift(&self, f_tx: f64, range_velocity: f64) -> f64 {
        2.0 * f_tx * range_velocity / self.c()
    }

    /// λ = c / f.
    pub fn wavelength(&self, f: f64) -> Result<f64> {
        check_positive("frequency", f)?;
        Ok(self.c() / f)
    }
}

pub fn unambiguous_range(prf: f64) -> Result<f64> {
    RadarCalc::default().unambiguous_range(prf)
}

pub fn echo_delay(range: f64) -> Result<f64> {
    RadarCalc::default().echo_delay(range)
}

pub fn range_bin(range: f64, pulse: &PulseParams) -> Result<RangeBin> {
    RadarCalc::default().range_bin(range, pulse)
}

pub fn doppler_shift(f_tx: f64, range_velocity: f64) -> f64 {
    RadarCalc::default().doppler_shift(f_tx, range_velocity)
}

pub fn wavelength(f: f64) -> Result<f64> {
    RadarCalc::default().wavelength(f)
}

/// Doppler shifts must stay below the PRF to be measured unambiguously.
pub fn max_unambiguous_doppler(prf: f64) -> Result<f64> {
    check_positive("prf", prf)?;
    Ok(prf)
}

/// Folds a Doppler shift into [0, PRF), keeping its sign.
pub fn fold_doppler(shift: f64, prf: f64) -> Result<DopplerFold> {
    let limit = max_unambiguous_doppler(prf)?;
    let magnitude = shift.abs();
    let folded = snap(magnitude / limit).fract() * limit;
    Ok(DopplerFold { folded: folded.copysign(shift), aliased: magnitude >= limit })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnrParams {
    /// Transmit power (W).
    pub p_t: f64,
    /// Transmit antenna gain.
    pub g_t: f64,
    /// Receive aperture area (m²).
    pub a_r: f64,
    /// Radar cross section (m²).
    pub rcs: f64,
    /// Receive pulse duration (s).
    pub t_pulse: f64,
    /// Range to target (m).
    pub range: f64,
    /// System noise temperature (K).
    pub t_s: f64,
    /// Aggregate system losses (≥ 1).
    pub losses: f64,
}

impl SnrParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("p_t", self.p_t),
            ("g_t", self.g_t),
            ("a_r", self.a_r),
            ("rcs", self.rcs),
            ("t_pulse", self.t_pulse),
            ("range", self.range),
            ("t_s", self.t_s),
        ] {
            check_positive(name, v)?;
        }
        if !(self.losses.is_finite() && self.losses >= 1.0) {
            return Err(EngageError::Domain(format!("losses must be >= 1, got {}", self.losses)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Snr {
    pub linear: f64,
    pub db: f64,
}

/// Single-pulse SNR = P_t G_t A_r σ t / ((4π)² R⁴ k T_s L).
pub fn snr(params: &SnrParams) -> Result<Snr> {
    params.validate()?;
    let four_pi = 4.0 * std::f64::consts::PI;
    let numerator = params.p_t * params.g_t * params.a_r * params.rcs * params.t_pulse;
    let denominator = four_pi * four_pi * params.range.powi(4) * BOLTZMANN * params.t_s * params.losses;
    let linear = numerator / denominator;
    Ok(Snr { linear, db: 10.0 * linear.log10() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandEntry {
    pub name: &'static str,
    pub f_low_ghz: f64,
    pub f_high_ghz: f64,
    /// Wavelength at the low-frequency edge (cm).
    pub lambda_low_cm: f64,
    /// Wavelength at the high-frequency edge (cm).
    pub lambda_high_cm: f64,
}

const fn band(name: &'static str, f_low_ghz: f64, f_high_ghz: f64, lambda_low_cm: f64, lambda_high_cm: f64) -> BandEntry {
    BandEntry { name, f_low_ghz, f_high_ghz, lambda_low_cm, lambda_high_cm }
}

/// Radar bands in ascending frequency.
pub const BAND_TABLE: [BandEntry; 9] = [
    band("UHF", 0.3, 1.0, 100.0, 30.0),
    band("L", 1.0, 2.0, 30.0, 15.0),
    band("S", 2.0, 4.0, 15.0, 7.5),
    band("C", 4.0, 8.0, 7.5, 3.75),
    band("X", 8.0, 12.5, 3.75, 2.4),
    band("Ku", 12.5, 18.0, 2.4, 1.7),
    band("K", 18.0, 26.5, 1.7, 1.1),
    band("Ka", 26.5, 40.0, 1.1, 0.75),
    band("Millimeter", 40.0, 100.0, 0.75, 0.30),
];

/// Band containing `f` (Hz). Intervals are [low, high), except the top band
/// which also contains its upper edge.
pub fn classify_band(f: f64) -> Result<BandEntry> {
    check_positive("frequency", f)?;
    let ghz = f / 1e9;
    let last = BAND_TABLE.len() - 1;
    BAND_TABLE
        .iter()
        .enumerate()
        .find(|(i, b)| ghz >= b.f_low_ghz && (ghz < b.f_high_ghz || (*i == last && ghz <= b.f_high_ghz)))
        .map(|(_, b)| *b)
        .ok_or(EngageError::OutOfBand(ghz))
}
