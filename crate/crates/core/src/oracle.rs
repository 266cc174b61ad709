//! Independent verification engines.
//!
//! `enumerate_duel` walks every shot outcome of a discrete duel and weights
//! branches by their Bernoulli probabilities. The Monte Carlo estimators draw
//! from ChaCha8 streams: the sample range is cut into fixed blocks of
//! [`BLOCK_SAMPLES`], block `i` uses the master seed with ChaCha stream `i`,
//! and per-block integer counts are summed. The block layout depends only on
//! the sample count, so serial and parallel runs give bit-identical results.
//! Gaussian variates come from the Box–Muller transform of two uniforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::advantage::{EngagementScenario, GaussianSpec, Seeker};
use crate::calculus::{DuelMode, DuelOutcome, DuelParams, NvnParams, Side};
use crate::error::{EngageError, Result};

/// Samples drawn from one ChaCha stream.
pub const BLOCK_SAMPLES: u64 = 1 << 16;

/// Identifier recorded alongside every Monte Carlo result.
pub const GENERATOR_ID: &str = "chacha8-stream-per-65536-block/box-muller";

/// Largest shot count accepted by [`enumerate_duel`].
pub const MAX_ENUMERATION_SHOTS: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    #[serde(default = "default_parallel", skip_serializing)]
    pub parallel: bool,
}

fn default_parallel() -> bool {
    true
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self { samples, seed, parallel: true }
    }

    pub fn serial(self) -> Self {
        Self { parallel: false, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(EngageError::Domain("samples must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl McEstimate {
    /// Bernoulli proportion with its binomial standard error.
    pub fn from_count(hits: u64, samples: u64) -> Self {
        let estimate = hits as f64 / samples as f64;
        Self { estimate, std_error: (estimate * (1.0 - estimate) / samples as f64).sqrt(), samples }
    }

    /// |estimate − reference| in units of the reference's binomial standard
    /// error (the estimate's own error when the reference is 0 or 1).
    pub fn z_score(&self, reference: f64) -> f64 {
        let se_ref = (reference * (1.0 - reference) / self.samples as f64).sqrt();
        let se = if se_ref > 0.0 { se_ref } else { self.std_error };
        let diff = (self.estimate - reference).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / se
        }
    }
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Runs `per_block(rng, n)` over every block and merges the counts.
fn run_blocks<const K: usize, F>(cfg: &McConfig, per_block: F) -> [u64; K]
where
    F: Fn(&mut ChaCha8Rng, u64) -> [u64; K] + Sync,
{
    let blocks = cfg.samples.div_ceil(BLOCK_SAMPLES);
    let block = |i: u64| {
        let n = BLOCK_SAMPLES.min(cfg.samples - i * BLOCK_SAMPLES);
        per_block(&mut block_rng(cfg.seed, i), n)
    };
    let merge = |mut a: [u64; K], b: [u64; K]| {
        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        a
    };
    if cfg.parallel {
        (0..blocks).into_par_iter().map(block).reduce(|| [0; K], merge)
    } else {
        (0..blocks).map(block).fold([0; K], merge)
    }
}

/// Box–Muller pair of independent standard normals.
fn standard_normal_pair<R: Rng>(rng: &mut R) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = std::f64::consts::TAU * u2;
    (r * theta.cos(), r * theta.sin())
}

/// Exact duel outcome probabilities by recursive enumeration.
pub fn enumerate_duel(params: &DuelParams) -> Result<DuelOutcome> {
    params.validate()?;
    if params.n > MAX_ENUMERATION_SHOTS {
        return Err(EngageError::Resource(format!(
            "enumeration is limited to n <= {MAX_ENUMERATION_SHOTS}, got {}",
            params.n
        )));
    }
    let mut out = DuelOutcome::default();
    match params.mode {
        DuelMode::Sequential => {
            enumerate_sequential(params, params.first_shooter, params.n, params.n, 1.0, &mut out)
        }
        DuelMode::Simultaneous => enumerate_volleys(params, params.n, 1.0, &mut out),
    }
    Ok(out)
}

fn enumerate_sequential(
    params: &DuelParams,
    shooter: Side,
    blue_left: u32,
    red_left: u32,
    weight: f64,
    out: &mut DuelOutcome,
) {
    if blue_left == 0 && red_left == 0 {
        out.p_both_survive += weight;
        return;
    }
    let (left, p) = match shooter {
        Side::Blue => (blue_left, params.p_blue),
        Side::Red => (red_left, params.p_red),
    };
    if left == 0 {
        return enumerate_sequential(params, shooter.other(), blue_left, red_left, weight, out);
    }
    match shooter {
        Side::Blue => out.p_red_destroyed += weight * p,
        Side::Red => out.p_blue_destroyed += weight * p,
    }
    let (b, r) = match shooter {
        Side::Blue => (blue_left - 1, red_left),
        Side::Red => (blue_left, red_left - 1),
    };
    enumerate_sequential(params, shooter.other(), b, r, weight * (1.0 - p), out);
}

fn enumerate_volleys(params: &DuelParams, volleys_left: u32, weight: f64, out: &mut DuelOutcome) {
    if volleys_left == 0 {
        out.p_both_survive += weight;
        return;
    }
    let (pb, pr) = (params.p_blue, params.p_red);
    let both = weight * pb * pr;
    let red_only = weight * pb * (1.0 - pr);
    let blue_only = weight * (1.0 - pb) * pr;
    out.p_mutual += both;
    out.p_red_destroyed += both + red_only;
    out.p_blue_destroyed += both + blue_only;
    enumerate_volleys(params, volleys_left - 1, weight * (1.0 - pb) * (1.0 - pr), out);
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DuelMcEstimate {
    pub red_destroyed: McEstimate,
    pub blue_destroyed: McEstimate,
    pub mutual: McEstimate,
    pub both_survive: McEstimate,
}

/// Simulates the shot process of a discrete duel.
pub fn mc_discrete_duel(params: &DuelParams, cfg: &McConfig) -> Result<DuelMcEstimate> {
    params.validate()?;
    cfg.validate()?;
    let p = *params;
    // counts: red destroyed, blue destroyed, mutual, both survive
    let counts = run_blocks::<4, _>(cfg, |rng, n| {
        let mut c = [0u64; 4];
        for _ in 0..n {
            let (red_dead, blue_dead) = simulate_duel(&p, rng);
            c[0] += red_dead as u64;
            c[1] += blue_dead as u64;
            c[2] += (red_dead && blue_dead) as u64;
            c[3] += (!red_dead && !blue_dead) as u64;
        }
        c
    });
    let est = |i: usize| McEstimate::from_count(counts[i], cfg.samples);
    Ok(DuelMcEstimate { red_destroyed: est(0), blue_destroyed: est(1), mutual: est(2), both_survive: est(3) })
}

fn simulate_duel<R: Rng>(p: &DuelParams, rng: &mut R) -> (bool, bool) {
    let mut red_dead = false;
    let mut blue_dead = false;
    match p.mode {
        DuelMode::Sequential => {
            let mut shooter = p.first_shooter;
            for _ in 0..2 * p.n {
                let hit = match shooter {
                    Side::Blue => rng.gen::<f64>() < p.p_blue,
                    Side::Red => rng.gen::<f64>() < p.p_red,
                };
                if hit {
                    match shooter {
                        Side::Blue => red_dead = true,
                        Side::Red => blue_dead = true,
                    }
                    break;
                }
                shooter = shooter.other();
            }
        }
        DuelMode::Simultaneous => {
            for _ in 0..p.n {
                red_dead = rng.gen::<f64>() < p.p_blue;
                blue_dead = rng.gen::<f64>() < p.p_red;
                if red_dead || blue_dead {
                    break;
                }
            }
        }
    }
    (red_dead, blue_dead)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeAdvantageMc {
    /// Blue SAR first kill, P(Z_B > 0).
    pub sar: McEstimate,
    /// Blue AR first kill, present when blue carries an AR seeker.
    pub ar: Option<McEstimate>,
    /// Duel classification, present when both sides carry AR seekers.
    pub duel: Option<DuelClassification>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DuelClassification {
    /// Marginal P(blue-win condition).
    pub blue_win: McEstimate,
    /// Marginal P(red-win condition).
    pub red_win: McEstimate,
    /// Neither win condition holds.
    pub mutual: McEstimate,
    /// Both win conditions hold at once.
    pub overlap: McEstimate,
    pub blue_only: u64,
    pub red_only: u64,
    pub neither: u64,
    pub both: u64,
}

impl DuelClassification {
    /// 1 − P(blue win) − P(red win) from the marginal estimates.
    pub fn complement_mutual(&self) -> f64 {
        1.0 - self.blue_win.estimate - self.red_win.estimate
    }
}

fn draw(spec: &GaussianSpec, z: f64) -> f64 {
    spec.mean + spec.sd * z
}

/// Joint sampling of every per-side random variable of the range-advantage
/// models, evaluating all conditions on the same draws.
pub fn mc_range_advantage(scenario: &EngagementScenario, cfg: &McConfig) -> Result<RangeAdvantageMc> {
    cfg.validate()?;
    let g = scenario.geometry()?;
    let blue_ar = scenario.blue.seeker == Seeker::Ar;
    let red_ar = scenario.red.seeker == Seeker::Ar;
    let acq_b = match (blue_ar, scenario.blue.seeker_acquisition) {
        (true, Some(a)) => Some(a),
        (true, None) => {
            return Err(EngageError::Config("blue has an AR seeker but no seeker_acquisition".into()))
        }
        _ => None,
    };
    let acq_r = match (red_ar, scenario.red.seeker_acquisition) {
        (true, Some(a)) => Some(a),
        (true, None) => {
            return Err(EngageError::Config("red has an AR seeker but no seeker_acquisition".into()))
        }
        _ => None,
    };
    let (sc, vc, fb, fr) = (*scenario, g.v_closure, g.blue_factor, g.red_factor);
    let zero = GaussianSpec::point(0.0);

    // counts: sar, ar, blue_only, red_only, neither, both
    let counts = run_blocks::<6, _>(cfg, |rng, n| {
        let mut c = [0u64; 6];
        for _ in 0..n {
            let (z1, z2) = standard_normal_pair(rng);
            let (z3, z4) = standard_normal_pair(rng);
            let (z5, z6) = standard_normal_pair(rng);
            let d_b = draw(&sc.blue.detection, z1);
            let t_b = draw(&sc.blue.launch_delay, z2);
            let dm_b = draw(acq_b.as_ref().unwrap_or(&zero), z3);
            let d_r = draw(&sc.red.detection, z4);
            let t_r = draw(&sc.red.launch_delay, z5);
            let dm_r = draw(acq_r.as_ref().unwrap_or(&zero), z6);

            let launch_b = d_b - vc * t_b;
            let launch_r = d_r - vc * t_r;
            c[0] += (fb * launch_b - launch_r > 0.0) as u64;
            if acq_b.is_some() {
                c[1] += (fb * (launch_b + dm_b) - launch_r > 0.0) as u64;
            }
            if acq_b.is_some() && acq_r.is_some() {
                let blue_win = fb * launch_b - fr * (launch_r + dm_r) > 0.0;
                let red_win = fb * (launch_b + dm_b) - fr * launch_r < 0.0;
                let slot = match (blue_win, red_win) {
                    (true, false) => 2,
                    (false, true) => 3,
                    (false, false) => 4,
                    (true, true) => 5,
                };
                c[slot] += 1;
            }
        }
        c
    });

    let n = cfg.samples;
    let duel = (acq_b.is_some() && acq_r.is_some()).then(|| {
        let [_, _, blue_only, red_only, neither, both] = counts;
        DuelClassification {
            blue_win: McEstimate::from_count(blue_only + both, n),
            red_win: McEstimate::from_count(red_only + both, n),
            mutual: McEstimate::from_count(neither, n),
            overlap: McEstimate::from_count(both, n),
            blue_only,
            red_only,
            neither,
            both,
        }
    });
    Ok(RangeAdvantageMc {
        sar: McEstimate::from_count(counts[0], n),
        ar: acq_b.map(|_| McEstimate::from_count(counts[1], n)),
        duel,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurvivorEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

/// Simulates the NvN exchange shot by shot: each target receives N/T salvos
/// of J independent shots, and the surviving targets are counted.
pub fn mc_nvn_survivors(params: &NvnParams, cfg: &McConfig) -> Result<SurvivorEstimate> {
    params.validate()?;
    cfg.validate()?;
    let n_weapons = params.total_weapons();
    let targets = params.targets as u64;
    if !n_weapons.is_multiple_of(targets) {
        return Err(EngageError::Unsupported("N/T must be an integer for the salvo simulation".into()));
    }
    let shots = (n_weapons / targets) * params.weapons_per_attacker as u64;
    let p = params.p;
    // counts: Σ survivors, Σ survivors²
    let counts = run_blocks::<2, _>(cfg, |rng, n| {
        let mut c = [0u64; 2];
        for _ in 0..n {
            let survivors = (0..targets)
                .filter(|_| (0..shots).all(|_| rng.gen::<f64>() >= p))
                .count() as u64;
            c[0] += survivors;
            c[1] += survivors * survivors;
        }
        c
    });
    let n = cfg.samples as f64;
    let mean = counts[0] as f64 / n;
    let var = if cfg.samples > 1 {
        ((counts[1] as f64 - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(SurvivorEstimate { mean, std_error: (var / n).sqrt(), samples: cfg.samples })
}
