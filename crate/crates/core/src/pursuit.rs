//! Discrete-step pure-pursuit interceptor chasing a waypoint-sampled target.
//!
//! At step `i` the follower measures its distance to waypoint `i`. A distance
//! strictly below the kill radius destroys the target; otherwise the follower
//! moves exactly `follower_speed` scene units straight at that waypoint, with
//! no clamping when it would overshoot. The target escapes when the
//! waypoints run out. Scene units are abstract.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{check_nonnegative, check_positive, EngageError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PursuitScenario {
    pub waypoints: Vec<[f64; 2]>,
    pub follower_start: [f64; 2],
    /// Distance covered per step.
    pub follower_speed: f64,
    pub kill_radius: f64,
}

const APPENDIX_X: [f64; 13] = [80., 90., 99., 108., 116., 125., 133., 141., 151., 160., 169., 174., 180.];
const APPENDIX_Y: [f64; 13] = [0., -2., -5., -9., -15., -18., -23., -29., -28., -25., -21., -20., -17.];
const APPENDIX_ALT_X: [f64; 13] = [80., 90., 99., 108., 116., 125., 133., 141., 151., 80., 60., 16., 10.];
const APPENDIX_ALT_Y: [f64; 13] = [0., -2., -5., -9., -15., -18., -23., -29., -28., -23., -25., -21., -28.];

impl PursuitScenario {
    fn reference(xs: &[f64], ys: &[f64]) -> Self {
        Self {
            waypoints: xs.iter().zip(ys).map(|(&x, &y)| [x, y]).collect(),
            follower_start: [-70.0, 0.0],
            follower_speed: 20.0,
            kill_radius: 10.0,
        }
    }

    /// The 13-waypoint reference track, follower at (−70, 0), speed 20,
    /// kill radius 10.
    pub fn reference_track() -> Self {
        Self::reference(&APPENDIX_X, &APPENDIX_Y)
    }

    /// The alternate reference track in which the target doubles back.
    pub fn reference_track_alternate() -> Self {
        Self::reference(&APPENDIX_ALT_X, &APPENDIX_ALT_Y)
    }

    pub fn validate(&self) -> Result<()> {
        if self.waypoints.is_empty() {
            return Err(EngageError::Domain("at least one waypoint is required".into()));
        }
        let finite = |p: &[f64; 2]| p.iter().all(|v| v.is_finite());
        if !self.waypoints.iter().all(finite) || !finite(&self.follower_start) {
            return Err(EngageError::Domain("positions must be finite".into()));
        }
        check_positive("follower_speed", self.follower_speed)?;
        check_nonnegative("kill_radius", self.kill_radius)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PursuitRow {
    pub step: usize,
    pub target: [f64; 2],
    pub follower: [f64; 2],
    pub distance: f64,
    /// Unit vector from follower to target. (1, 0) on exact co-location.
    pub cos: f64,
    pub sin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Destroyed,
    Escaped,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Destroyed => "Target destroyed",
            Verdict::Escaped => "Target escaped",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PursuitTrace {
    pub rows: Vec<PursuitRow>,
    pub verdict: Verdict,
    pub steps_used: usize,
}

pub fn run_pursuit(scenario: &PursuitScenario) -> Result<PursuitTrace> {
    scenario.validate()?;
    let mut follower = scenario.follower_start;
    let mut rows = Vec::with_capacity(scenario.waypoints.len());
    for (step, &target) in scenario.waypoints.iter().enumerate() {
        let dx = target[0] - follower[0];
        let dy = target[1] - follower[1];
        let distance = dx.hypot(dy);
        let (cos, sin) = if distance > 0.0 { (dx / distance, dy / distance) } else { (1.0, 0.0) };
        rows.push(PursuitRow { step, target, follower, distance, cos, sin });
        if distance < scenario.kill_radius || distance == 0.0 {
            return Ok(PursuitTrace { rows, verdict: Verdict::Destroyed, steps_used: step + 1 });
        }
        follower = [
            follower[0] + scenario.follower_speed * cos,
            follower[1] + scenario.follower_speed * sin,
        ];
    }
    let steps_used = rows.len();
    Ok(PursuitTrace { rows, verdict: Verdict::Escaped, steps_used })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CsvPrecision {
    /// Two decimals, matching the reference listing's table.
    #[default]
    TwoDecimals,
    /// Shortest round-trip representation.
    Full,
}

pub const PURSUIT_CSV_HEADER: &str = "Time,xb,yb,xf,yf,Distance,Cos,Sin";

pub fn pursuit_csv(trace: &PursuitTrace, precision: CsvPrecision) -> String {
    let fmt = |v: f64| match precision {
        CsvPrecision::TwoDecimals => format!("{v:.2}"),
        CsvPrecision::Full => format!("{v}"),
    };
    let mut out = String::from(PURSUIT_CSV_HEADER);
    out.push('\n');
    for r in &trace.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.step,
            fmt(r.target[0]),
            fmt(r.target[1]),
            fmt(r.follower[0]),
            fmt(r.follower[1]),
            fmt(r.distance),
            fmt(r.cos),
            fmt(r.sin)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn scenario(waypoints: Vec<[f64; 2]>, start: [f64; 2], speed: f64, radius: f64) -> PursuitScenario {
        PursuitScenario { waypoints, follower_start: start, follower_speed: speed, kill_radius: radius }
    }

    #[test]
    fn immediate_kill() {
        let t = run_pursuit(&scenario(vec![[5.0, 0.0]], [0.0, 0.0], 20.0, 10.0)).unwrap();
        assert_eq!(t.verdict, Verdict::Destroyed);
        assert_eq!(t.steps_used, 1);
        assert_eq!(t.rows[0].distance, 5.0);
    }

    #[test]
    fn overshoot_oscillates_without_kill() {
        let t = run_pursuit(&scenario(vec![[30.0, 0.0]; 6], [0.0, 0.0], 20.0, 10.0)).unwrap();
        let xs: Vec<f64> = t.rows.iter().map(|r| r.follower[0]).collect();
        assert_eq!(xs, vec![0.0, 20.0, 40.0, 20.0, 40.0, 20.0]);
        assert!(t.rows[1..].iter().all(|r| r.distance == 10.0));
        assert_eq!(t.verdict, Verdict::Escaped);
    }

    #[test]
    fn kill_radius_boundary_is_strict() {
        let t = run_pursuit(&scenario(vec![[10.0, 0.0]], [0.0, 0.0], 1.0, 10.0)).unwrap();
        assert_eq!(t.verdict, Verdict::Escaped);
    }

    #[test]
    fn colocation_with_zero_radius_kills() {
        let t = run_pursuit(&scenario(vec![[3.0, 4.0]], [3.0, 4.0], 1.0, 0.0)).unwrap();
        assert_eq!(t.verdict, Verdict::Destroyed);
        assert_eq!((t.rows[0].cos, t.rows[0].sin), (1.0, 0.0));
    }

    #[test]
    fn rejects_invalid() {
        assert!(run_pursuit(&scenario(vec![], [0.0, 0.0], 1.0, 1.0)).is_err());
        assert!(run_pursuit(&scenario(vec![[1.0, 1.0]], [0.0, 0.0], 0.0, 1.0)).is_err());
        assert!(run_pursuit(&scenario(vec![[1.0, 1.0]], [0.0, 0.0], 1.0, -1.0)).is_err());
    }

    #[test]
    fn csv_shapes() {
        let t = run_pursuit(&scenario(vec![[5.0, 0.0]], [0.0, 0.0], 20.0, 10.0)).unwrap();
        let csv = pursuit_csv(&t, CsvPrecision::TwoDecimals);
        assert_eq!(csv, "Time,xb,yb,xf,yf,Distance,Cos,Sin\n0,5.00,0.00,0.00,0.00,5.00,1.00,0.00\n");
        assert_eq!(csv.lines().count(), 2);

        let t = run_pursuit(&scenario(vec![[100.0, 0.0], [100.0, 0.0], [1.0, 0.0]], [0.0, 0.0], 50.0, 10.0)).unwrap();
        assert_eq!(t.verdict, Verdict::Escaped);
        let csv = pursuit_csv(&t, CsvPrecision::Full);
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.ends_with("2,1,0,100,0,99,-1,0\n"));
    }

    #[test]
    fn reference_tracks_escape() {
        assert_eq!(run_pursuit(&PursuitScenario::reference_track()).unwrap().verdict, Verdict::Escaped);
        assert_eq!(run_pursuit(&PursuitScenario::reference_track_alternate()).unwrap().verdict, Verdict::Escaped);
    }

    fn track() -> impl Strategy<Value = PursuitScenario> {
        (
            prop::collection::vec((-200.0f64..200.0, -200.0f64..200.0), 1..40),
            (-300.0f64..300.0, -300.0f64..300.0),
            0.5f64..50.0,
            0.0f64..20.0,
        )
            .prop_map(|(w, s, v, r)| scenario(w.into_iter().map(|(x, y)| [x, y]).collect(), [s.0, s.1], v, r))
    }

    proptest! {
        #[test]
        fn step_length_and_direction(sc in track()) {
            let t = run_pursuit(&sc).unwrap();
            for r in &t.rows {
                prop_assert!((r.cos * r.cos + r.sin * r.sin - 1.0).abs() < 1e-9);
                prop_assert!(r.distance >= 0.0);
            }
            for pair in t.rows.windows(2) {
                let moved = (pair[1].follower[0] - pair[0].follower[0]).hypot(pair[1].follower[1] - pair[0].follower[1]);
                prop_assert!((moved - sc.follower_speed).abs() < 1e-9);
                let to_target = [pair[0].target[0] - pair[0].follower[0], pair[0].target[1] - pair[0].follower[1]];
                prop_assert!(to_target[0] * pair[0].cos + to_target[1] * pair[0].sin >= 0.0);
            }
        }

        #[test]
        fn deterministic(sc in track()) {
            prop_assert_eq!(run_pursuit(&sc).unwrap(), run_pursuit(&sc).unwrap());
        }

        // A follower faster than the target closes by at least
        // speed − (target step) whenever it is farther than one step away.
        #[test]
        fn closes_while_far(
            start in (-500.0f64..-100.0, -100.0f64..100.0),
            heading in 0.0f64..std::f64::consts::TAU,
            target_step in 0.0f64..5.0,
            slack in 0.1f64..20.0,
        ) {
            let speed = 2.0 * target_step + slack;
            let waypoints: Vec<[f64; 2]> = (0..60)
                .map(|i| [i as f64 * target_step * heading.cos(), i as f64 * target_step * heading.sin()])
                .collect();
            let t = run_pursuit(&scenario(waypoints, [start.0, start.1], speed, 0.0)).unwrap();
            for pair in t.rows.windows(2) {
                if pair[0].distance > speed {
                    prop_assert!(pair[1].distance < pair[0].distance);
                    prop_assert!(pair[1].distance <= pair[0].distance - speed + target_step + 1e-9);
                }
            }
        }
    }
}
