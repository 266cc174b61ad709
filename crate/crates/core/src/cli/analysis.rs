//! Evaluation of each scenario section into records and tables.

use std::path::Path;

use crate::advantage::{ar_first_kill, duel_outcomes, launch_range_distribution, sar_first_kill, Seeker};
use crate::calculus::{duel, kill_salvo, nvn_survivors, survive_salvo, DuelOutcome, DuelParams, NvnParams, SalvoParams};
use crate::detection::{classify, FusionConfig};
use crate::geometry::{missile_line, post_intercept_separation, separation_factor, solve_intercept, TofConvention};
use crate::oracle::{
    enumerate_duel, mc_discrete_duel, mc_nvn_survivors, mc_range_advantage, McConfig, McEstimate,
    MAX_ENUMERATION_SHOTS,
};
use crate::pursuit::{run_pursuit, CsvPrecision};
use crate::radar::{classify_band, fold_doppler, max_unambiguous_doppler, snr, RadarCalc};

use super::scenario::{Analysis, DetectInput, GeometryInput, PursuitInput, RadarInput, RangeAdvantageInput, Scenario};
use super::table::{Cell, Record, ResultTable};
use super::{AngleUnit, Failure};

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub tof_convention: Option<TofConvention>,
    pub angles: AngleUnit,
    pub full_precision: bool,
}

#[derive(Debug, Clone)]
pub struct Evaluation {
    /// Flat scalars, one sweep row per evaluation.
    pub record: Record,
    /// Richer layout for a single analysis; defaults to the record.
    pub table: Option<ResultTable>,
    pub warnings: Vec<String>,
    pub monte_carlo: Option<McConfig>,
}

impl Evaluation {
    fn new(record: Record) -> Self {
        Self { record, table: None, warnings: Vec::new(), monte_carlo: None }
    }
}

/// Monte Carlo settings: command-line overrides beat the file block.
/// `always` forces a run with defaults when neither is present.
fn mc_config(scenario: &Scenario, opts: &Options, always: bool) -> Option<McConfig> {
    let block = scenario.monte_carlo;
    if block.is_none() && opts.samples.is_none() && opts.seed.is_none() && !always {
        return None;
    }
    let samples = opts.samples.or(block.map(|b| b.samples)).unwrap_or(super::scenario::DEFAULT_MC_SAMPLES);
    let seed = opts.seed.or(block.map(|b| b.seed)).unwrap_or(0);
    Some(McConfig::new(samples, seed))
}

pub fn evaluate(scenario: &Scenario, opts: &Options, base_dir: &Path) -> Result<Evaluation, Failure> {
    scenario.validate(base_dir)?;
    let mut eval = match &scenario.analysis {
        Analysis::Salvo(p) => salvo(p)?,
        Analysis::Duel(p) => duel_analysis(p, mc_config(scenario, opts, false))?,
        Analysis::Nvn(p) => nvn(p, mc_config(scenario, opts, false))?,
        Analysis::Geometry(g) => geometry(g, opts)?,
        Analysis::RangeAdvantage(r) => range_advantage(r, opts, mc_config(scenario, opts, true))?,
        Analysis::Pursuit(p) => pursuit(p, opts)?,
        Analysis::Radar(r) => radar(r)?,
        Analysis::Detect(d) => detect(d, opts, base_dir)?,
    };
    let mut warnings = scenario.warnings();
    warnings.append(&mut eval.warnings);
    eval.warnings = warnings;
    Ok(eval)
}

fn salvo(p: &SalvoParams) -> Result<Evaluation, Failure> {
    let mut r = Record::default();
    r.push("p_kill", kill_salvo(p)?);
    r.push("p_survive", survive_salvo(p)?);
    Ok(Evaluation::new(r))
}

const DUEL_FIELDS: [&str; 4] = ["p_red_destroyed", "p_blue_destroyed", "p_mutual", "p_both_survive"];

fn duel_fields(o: &DuelOutcome) -> [f64; 4] {
    [o.p_red_destroyed, o.p_blue_destroyed, o.p_mutual, o.p_both_survive]
}

fn duel_analysis(p: &DuelParams, mc: Option<McConfig>) -> Result<Evaluation, Failure> {
    let closed = duel_fields(&duel(p)?);
    let enumerated = if p.n <= MAX_ENUMERATION_SHOTS { Some(duel_fields(&enumerate_duel(p)?)) } else { None };
    let simulated = match &mc {
        Some(cfg) => {
            let e = mc_discrete_duel(p, cfg)?;
            Some([e.red_destroyed, e.blue_destroyed, e.mutual, e.both_survive])
        }
        None => None,
    };

    let mut record = Record::default();
    let mut table = ResultTable::new(["quantity", "closed_form", "enumeration", "monte_carlo", "mc_std_error"]);
    for (i, name) in DUEL_FIELDS.iter().enumerate() {
        record.push(*name, closed[i]);
        table.rows.push(vec![
            Cell::from(*name),
            closed[i].into(),
            enumerated.map(|e| e[i]).into(),
            simulated.map(|s| s[i].estimate).into(),
            simulated.map(|s| s[i].std_error).into(),
        ]);
    }
    if let Some(e) = enumerated {
        for (name, v) in DUEL_FIELDS.iter().zip(e) {
            record.push(format!("enum_{name}"), v);
        }
    }
    if let Some(s) = simulated {
        for (name, v) in DUEL_FIELDS.iter().zip(s) {
            record.push(format!("mc_{name}"), v.estimate);
            record.push(format!("mc_{name}_se"), v.std_error);
        }
    }
    let mut eval = Evaluation::new(record);
    if enumerated.is_none() {
        eval.warnings.push(format!("enumeration skipped: n = {} exceeds {MAX_ENUMERATION_SHOTS}", p.n));
    }
    eval.table = Some(table);
    eval.monte_carlo = mc;
    Ok(eval)
}

fn nvn(p: &NvnParams, mc: Option<McConfig>) -> Result<Evaluation, Failure> {
    let res = nvn_survivors(p)?;
    let mut r = Record::default();
    r.push("total_weapons", p.total_weapons());
    r.push("p_salvo", res.p_salvo);
    r.push("survivability", res.survivability);
    r.push("expected_survivors", res.expected_survivors);
    if let Some(cfg) = &mc {
        let e = mc_nvn_survivors(p, cfg)?;
        r.push("mc_expected_survivors", e.mean);
        r.push("mc_expected_survivors_se", e.std_error);
    }
    let mut eval = Evaluation::new(r);
    eval.monte_carlo = mc;
    Ok(eval)
}

fn geometry(g: &GeometryInput, opts: &Options) -> Result<Evaluation, Failure> {
    let kin = g.kinematics();
    let convention = opts.tof_convention.or(g.tof_convention).unwrap_or_default();
    let sol = solve_intercept(&kin)?;
    let a = opts.angles;
    let mut r = Record::default();
    r.push(a.label("beta"), a.convert(sol.beta));
    r.push(a.label("alpha"), a.convert(sol.alpha));
    r.push("v_closure", sol.v_closure);
    r.push(a.label("mu_blue"), a.convert(sol.mu_blue));
    r.push(a.label("alpha_missile"), a.convert(sol.alpha_missile));
    r.push("v_closure_missile", sol.v_closure_missile);
    r.push("sine_ratio", sol.sine_ratio);
    r.push("separation_factor", separation_factor(&kin, convention)?);
    if let Some(d) = g.d_launch {
        r.push("missile_range", missile_line(&kin, d)?.range);
        r.push("separation", post_intercept_separation(&kin, d, convention)?);
    }
    let mut eval = Evaluation::new(r);
    let mut table = eval.record.as_table();
    table.note("tof_convention", convention_name(convention));
    eval.table = Some(table);
    Ok(eval)
}

fn convention_name(c: TofConvention) -> &'static str {
    match c {
        TofConvention::Literal => "literal",
        TofConvention::Kinematic => "kinematic",
    }
}

fn range_advantage(input: &RangeAdvantageInput, opts: &Options, mc: Option<McConfig>) -> Result<Evaluation, Failure> {
    let cfg = mc.expect("range advantage always samples");
    let sc = input.to_model(opts.tof_convention);
    let g = sc.geometry()?;
    let blue_launch = launch_range_distribution(&sc.blue, g.v_closure)?;
    let red_launch = launch_range_distribution(&sc.red, g.v_closure)?;
    let sar = sar_first_kill(&sc)?;
    let blue_ar = sc.blue.seeker == Seeker::Ar;
    let both_ar = blue_ar && sc.red.seeker == Seeker::Ar;
    let ar = if blue_ar { Some(ar_first_kill(&sc)?) } else { None };
    let duel = if both_ar { Some(duel_outcomes(&sc)?) } else { None };
    let sim = mc_range_advantage(&sc, &cfg)?;

    let mut r = Record::default();
    r.push("v_closure", g.v_closure);
    r.push("blue_factor", g.blue_factor);
    r.push("red_factor", g.red_factor);
    r.push("blue_launch_mean", blue_launch.distribution.mean);
    r.push("blue_launch_sd", blue_launch.distribution.sd);
    r.push("red_launch_mean", red_launch.distribution.mean);
    r.push("red_launch_sd", red_launch.distribution.sd);
    r.push("sar_mu_z", sar.mu_z);
    r.push("sar_sigma_z", sar.sigma_z);
    r.push("sar_probability", sar.probability);
    r.push("mc_sar_probability", sim.sar.estimate);
    r.push("mc_sar_probability_se", sim.sar.std_error);
    if let (Some(a), Some(m)) = (ar, sim.ar) {
        r.push("ar_mu_z", a.mu_z);
        r.push("ar_sigma_z", a.sigma_z);
        r.push("ar_probability", a.probability);
        r.push("mc_ar_probability", m.estimate);
        r.push("mc_ar_probability_se", m.std_error);
    }
    if let (Some(d), Some(m)) = (duel, sim.duel) {
        r.push("duel_blue_win", d.blue_win.probability);
        r.push("duel_red_win", d.red_win.probability);
        r.push("duel_mutual_kill", d.p_mutual_kill);
        r.push("duel_mutual_out_of_range", d.out_of_range);
        r.push("mc_duel_blue_win", m.blue_win.estimate);
        r.push("mc_duel_red_win", m.red_win.estimate);
        r.push("mc_duel_mutual_kill", m.mutual.estimate);
        r.push("mc_duel_overlap", m.overlap.estimate);
        r.push("mutual_kill_discrepancy", d.p_mutual_kill - m.mutual.estimate);
    }

    let mut table = ResultTable::new(["quantity", "closed_form", "monte_carlo", "mc_std_error"]);
    let row = |name: &str, closed: Cell, est: Option<McEstimate>| {
        vec![Cell::from(name), closed, est.map(|e| e.estimate).into(), est.map(|e| e.std_error).into()]
    };
    for (name, v) in [
        ("v_closure", g.v_closure),
        ("blue_factor", g.blue_factor),
        ("red_factor", g.red_factor),
        ("blue_launch_mean", blue_launch.distribution.mean),
        ("blue_launch_sd", blue_launch.distribution.sd),
        ("red_launch_mean", red_launch.distribution.mean),
        ("red_launch_sd", red_launch.distribution.sd),
    ] {
        table.rows.push(row(name, v.into(), None));
    }
    table.rows.push(row("sar_probability", sar.probability.into(), Some(sim.sar)));
    if let Some(a) = ar {
        table.rows.push(row("ar_probability", a.probability.into(), sim.ar));
    }
    if let (Some(d), Some(m)) = (duel, sim.duel) {
        table.rows.push(row("duel_blue_win", d.blue_win.probability.into(), Some(m.blue_win)));
        table.rows.push(row("duel_red_win", d.red_win.probability.into(), Some(m.red_win)));
        table.rows.push(row("duel_mutual_kill", d.p_mutual_kill.into(), Some(m.mutual)));
        table.rows.push(row("duel_overlap", Cell::Empty, Some(m.overlap)));
    }
    table.note("tof_convention", convention_name(sc.tof_convention));

    let mut eval = Evaluation::new(r);
    eval.warnings.extend(blue_launch.warning.map(|w| format!("blue: {w}")));
    eval.warnings.extend(red_launch.warning.map(|w| format!("red: {w}")));
    if let Some(d) = duel.filter(|d| d.out_of_range) {
        eval.warnings.push(format!("closed-form mutual-kill value {} lies outside [0, 1]", d.p_mutual_kill));
    }
    eval.table = Some(table);
    eval.monte_carlo = Some(cfg);
    Ok(eval)
}

fn pursuit(input: &PursuitInput, opts: &Options) -> Result<Evaluation, Failure> {
    let trace = run_pursuit(&input.to_model()?)?;
    let precision = if opts.full_precision { CsvPrecision::Full } else { CsvPrecision::TwoDecimals };
    let fmt = |v: f64| -> Cell {
        match precision {
            CsvPrecision::TwoDecimals => Cell::Text(format!("{v:.2}")),
            CsvPrecision::Full => Cell::Float(v),
        }
    };
    let mut table = ResultTable::new(crate::pursuit::PURSUIT_CSV_HEADER.split(','));
    for row in &trace.rows {
        table.rows.push(vec![
            row.step.into(),
            fmt(row.target[0]),
            fmt(row.target[1]),
            fmt(row.follower[0]),
            fmt(row.follower[1]),
            fmt(row.distance),
            fmt(row.cos),
            fmt(row.sin),
        ]);
    }
    table.note("verdict", trace.verdict);
    let mut r = Record::default();
    r.push("verdict", trace.verdict.to_string());
    r.push("steps_used", trace.steps_used);
    r.push("final_distance", trace.rows.last().map(|row| row.distance));
    let mut eval = Evaluation::new(r);
    eval.table = Some(table);
    Ok(eval)
}

fn radar(input: &RadarInput) -> Result<Evaluation, Failure> {
    let calc = RadarCalc::new(input.light_speed);
    let pulse = input.pulse();
    let mut r = Record::default();
    r.push("pri_s", calc.pulse_interval(pulse.prf)?);
    r.push("unambiguous_range_m", calc.unambiguous_range(pulse.prf)?);
    r.push("range_resolution_m", calc.range_resolution(&pulse)?);
    r.push("wavelength_m", calc.wavelength(pulse.f_tx)?);
    r.push("band", classify_band(pulse.f_tx).map(|b| b.name).unwrap_or("none"));
    r.push("max_unambiguous_doppler_hz", max_unambiguous_doppler(pulse.prf)?);
    for (i, t) in input.targets.iter().enumerate() {
        let tag = format!("target{}", i + 1);
        let bin = calc.range_bin(t.range, &pulse)?;
        let shift = calc.doppler_shift(pulse.f_tx, t.radial_velocity);
        let fold = fold_doppler(shift, pulse.prf)?;
        r.push(format!("{tag}_range_m"), t.range);
        r.push(format!("{tag}_echo_delay_s"), calc.echo_delay(t.range)?);
        r.push(format!("{tag}_bin"), bin.index);
        r.push(format!("{tag}_folds"), bin.folds);
        r.push(format!("{tag}_aliased"), bin.aliased);
        r.push(format!("{tag}_folded_delay_s"), bin.folded_delay);
        r.push(format!("{tag}_doppler_hz"), shift);
        r.push(format!("{tag}_doppler_folded_hz"), fold.folded);
        r.push(format!("{tag}_doppler_aliased"), fold.aliased);
    }
    if let Some(p) = &input.snr {
        let s = snr(p)?;
        r.push("snr", s.linear);
        r.push("snr_db", s.db);
    }
    let mut eval = Evaluation::new(r);
    let mut table = eval.record.as_table();
    table.note("speed_of_light_m_s", input.light_speed.value());
    eval.table = Some(table);
    Ok(eval)
}

fn detect(input: &DetectInput, opts: &Options, base_dir: &Path) -> Result<Evaluation, Failure> {
    let frames = input.load_frames(base_dir)?;
    let config: FusionConfig = input.fusion;
    let verdict = classify(&frames, &config);
    let a = opts.angles;
    let mut r = Record::default();
    r.push("class", verdict.class.to_string());
    r.push("frames", frames.len());
    r.push("estimated_range_cm", verdict.estimated_range_cm);
    r.push("estimated_speed_cm_s", verdict.track.map(|t| t.speed_cm_s));
    r.push(a.label("estimated_heading"), verdict.track.map(|t| a.convert(t.heading_deg.to_radians())));
    Ok(Evaluation::new(r))
}
