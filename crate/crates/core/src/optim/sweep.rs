//! Strategy search: per-point total-power optimization and (r, Pe) sweeps.
//!
//! A strategy is a code-table row paired with a decoding algorithm (or the
//! distinguished uncoded transmission). At an operating point the search
//! picks, per strategy, the constellation meeting the data rate, the
//! smallest transmit power whose density-evolution error probability at the
//! girth-limited iteration count meets the target, and charges the physical
//! decoder model at that blocklength; uncoded transmission pays transmit
//! power only. The argmin uses deterministic tie-breaking (total power,
//! then message bits, then blocklength, then (d_v, d_c, g)) so sweeps are
//! reproducible byte for byte.

use crate::channel::{
    ebn0_from_system, flip_prob_bpsk, flip_prob_qam, min_constellation, q_function, shannon_limit,
    watts_to_dbm, ChannelSpec, ModulationSpec, QamNormalization,
};
use crate::codes::{max_indep_iters, CodeRow, CodeTable};
use crate::de::{de_run, DecoderRule, TabularRule};
use crate::error::{Error, Result};
use crate::par;
use crate::power::{
    clock_period, decoder_area_estimate, decoder_power, decoder_throughput, parallel_power, Alg,
    NodeCharacterization, ProcessParams, WireLengthMode,
};

/// Transmit-power bracket ceiling for coded strategies, W.
const PT_CEILING: f64 = 10.0;
/// Transmit-power bracket floor when no Shannon limit applies, W.
const PT_FLOOR: f64 = 1e-12;
/// ln-space bisection tolerance: 0.01 dB.
const LN_PT_TOL: f64 = 0.01 * std::f64::consts::LN_10 / 10.0;

/// One coded strategy: a code realization plus a decoding algorithm.
#[derive(Debug, Clone)]
pub struct CodedStrategy {
    pub row: CodeRow,
    pub alg: Alg,
    pub rule: DecoderRule,
}

/// A candidate in the per-point optimization.
#[derive(Debug, Clone)]
pub enum Strategy {
    Coded(CodedStrategy),
    Uncoded,
}

impl Strategy {
    pub fn label(&self) -> String {
        match self {
            Strategy::Coded(c) => format!("{}-{}", c.row.label(), c.alg),
            Strategy::Uncoded => "uncoded".to_string(),
        }
    }
}

/// Expands a code table into strategies: Gallager-A everywhere, adaptive
/// Gallager-B where the variable degree gives it an identity of its own
/// (d_v >= 3), and the two-bit rule when one is supplied.
pub fn strategies_from_table(
    table: &CodeTable,
    two_bit: Option<&TabularRule>,
) -> Vec<CodedStrategy> {
    let mut out = Vec::new();
    for row in &table.rows {
        out.push(CodedStrategy {
            row: row.clone(),
            alg: Alg::GallagerA,
            rule: DecoderRule::gallager_a(),
        });
        if row.d_v >= 3 {
            out.push(CodedStrategy {
                row: row.clone(),
                alg: Alg::GallagerB,
                rule: DecoderRule::gallager_b(),
            });
        }
        if let Some(t) = two_bit {
            out.push(CodedStrategy {
                row: row.clone(),
                alg: Alg::TwoBit,
                rule: DecoderRule::Tabular(t.clone()),
            });
        }
    }
    out
}

/// Where and how hard the link must work.
#[derive(Debug, Clone)]
pub struct OperatingPoint {
    pub distance_r: f64,
    pub target_pe: f64,
    pub channel: ChannelSpec,
    pub r_data: f64,
}

impl OperatingPoint {
    pub fn new(distance_r: f64, target_pe: f64, channel: ChannelSpec, r_data: f64) -> Result<Self> {
        if !(target_pe > 0.0 && target_pe <= 0.5) {
            return Err(Error::domain(format!(
                "target_pe must lie in (0, 0.5], got {target_pe}"
            )));
        }
        if !(r_data > 0.0) {
            return Err(Error::domain("r_data must be positive".to_string()));
        }
        Ok(OperatingPoint {
            distance_r,
            target_pe,
            channel,
            r_data,
        })
    }

    /// Channel spec with this point's distance substituted.
    pub fn channel_at_distance(&self) -> ChannelSpec {
        self.channel.with_distance(self.distance_r)
    }
}

/// The winning strategy at an operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub label: String,
    /// (n, g, d_v, d_c, alg) for coded winners.
    pub code: Option<(u64, u32, u32, u32, Alg)>,
    pub modulation: ModulationSpec,
    pub p_t_star: f64,
    pub p_dec: f64,
    pub p_total: f64,
}

/// Physical decoder model inputs plus reporting flags.
#[derive(Debug, Clone)]
pub struct PowerModelBundle {
    pub tables: NodeCharacterization,
    pub process: ProcessParams,
    pub wire_mode: WireLengthMode,
    pub qam_norm: QamNormalization,
}

/// Hard-decision flip probability at a transmit power, for the point's
/// channel and a given constellation.
fn flip_probability(
    point: &OperatingPoint,
    m: ModulationSpec,
    qam_norm: QamNormalization,
    p_t: f64,
) -> Result<f64> {
    let p = match point.channel_at_distance() {
        ChannelSpec::Abstract { eta } => flip_prob_bpsk(eta * p_t)?,
        spec @ ChannelSpec::Physical { .. } => {
            let ebn0 = ebn0_from_system(p_t, &spec, m)?;
            if m.size() == 2 {
                q_function((2.0 * ebn0).sqrt())?
            } else {
                flip_prob_qam(m, ebn0, qam_norm)?
            }
        }
    };
    Ok(p.min(0.5))
}

/// Constellation for a rate, per the channel mode: sized to the data rate
/// over a physical link, always BPSK on the abstract channel.
fn constellation_for_rate(point: &OperatingPoint, rate: f64) -> Result<ModulationSpec> {
    match &point.channel {
        ChannelSpec::Physical { bandwidth, .. } => {
            min_constellation(point.r_data, *bandwidth, rate)
        }
        ChannelSpec::Abstract { .. } => Ok(ModulationSpec::bpsk()),
    }
}

/// Smallest transmit power in `[lo, hi]` satisfying `feasible`, by
/// bisection in ln space to 0.01 dB, with a 64-point monotonicity
/// verification scan. If the scan shows non-monotone feasibility the
/// bracket is swept exhaustively instead and the smallest power from which
/// feasibility never lapses again is returned.
fn min_feasible_power(
    lo: f64,
    hi: f64,
    feasible: &dyn Fn(f64) -> Result<bool>,
) -> Result<Option<f64>> {
    if feasible(lo)? {
        return Ok(Some(lo));
    }
    if !feasible(hi)? {
        return Ok(None);
    }
    let (ln_lo0, ln_hi0) = (lo.ln(), hi.ln());
    let scan: Vec<bool> = (0..64)
        .map(|i| {
            let p = (ln_lo0 + (ln_hi0 - ln_lo0) * i as f64 / 63.0).exp();
            feasible(p)
        })
        .collect::<Result<_>>()?;
    let monotone = scan.windows(2).all(|w| !w[0] || w[1]);
    if !monotone {
        let steps = 4096;
        let mut first_stable = None;
        for i in (0..=steps).rev() {
            let p = (ln_lo0 + (ln_hi0 - ln_lo0) * i as f64 / steps as f64).exp();
            if feasible(p)? {
                first_stable = Some(p);
            } else {
                break;
            }
        }
        return Ok(first_stable);
    }
    let (mut ln_lo, mut ln_hi) = (ln_lo0, ln_hi0);
    while ln_hi - ln_lo > LN_PT_TOL {
        let mid = 0.5 * (ln_lo + ln_hi);
        if feasible(mid.exp())? {
            ln_hi = mid;
        } else {
            ln_lo = mid;
        }
    }
    Ok(Some(ln_hi.exp()))
}

/// Evaluates one coded strategy at a point. The transmit-power bracket runs
/// from the Shannon limit (physical mode) or a fixed floor up to 10 W.
pub fn evaluate_coded(
    point: &OperatingPoint,
    strat: &CodedStrategy,
    models: &PowerModelBundle,
) -> Result<Optimum> {
    let row = &strat.row;
    let rate = crate::codes::design_rate(row.d_v, row.d_c)?;
    let m = constellation_for_rate(point, rate)?;
    let iters = max_indep_iters(row.girth)?;
    let ln_target = point.target_pe.ln();

    let feasible = |p_t: f64| -> Result<bool> {
        let p0 = flip_probability(point, m, models.qam_norm, p_t)?;
        let traj = de_run(&strat.rule, p0, row.d_v, row.d_c, iters)?;
        Ok(traj.final_ln() <= ln_target)
    };

    let spec = point.channel_at_distance();
    let lo = match &spec {
        ChannelSpec::Physical { .. } => shannon_limit(&spec, point.r_data)?.max(PT_FLOOR),
        ChannelSpec::Abstract { .. } => PT_FLOOR,
    };
    let p_t_star = min_feasible_power(lo, PT_CEILING, &feasible)?.ok_or_else(|| {
        Error::infeasible(format!(
            "{}: target pe {:e} unreachable below {PT_CEILING} W",
            Strategy::Coded(strat.clone()).label(),
            point.target_pe
        ))
    })?;

    let area = decoder_area_estimate(row.n_min, row.d_v, row.d_c, strat.alg, &models.tables)?;
    let t_clk = clock_period(
        strat.alg,
        row.d_v,
        row.d_c,
        &models.tables,
        &models.process,
        area,
        models.wire_mode,
    )?;
    let p_dec_one = decoder_power(
        strat.alg,
        row.d_v,
        row.d_c,
        row.n_min,
        &models.tables,
        &models.process,
        area,
        models.wire_mode,
    )?;
    let r_dec = decoder_throughput(row.girth, row.d_v, row.d_c, row.n_min, t_clk)?;
    let bank = parallel_power(p_dec_one, r_dec, point.r_data)?;

    Ok(Optimum {
        label: Strategy::Coded(strat.clone()).label(),
        code: Some((row.n_min, row.girth, row.d_v, row.d_c, strat.alg)),
        modulation: m,
        p_t_star,
        p_dec: bank.p_parallel,
        p_total: p_t_star + bank.p_parallel,
    })
}

/// Uncoded transmission: the smallest transmit power whose raw modulation
/// bit-error probability meets the target; decoding power is zero. Always
/// feasible for a positive target (the bracket grows as needed).
pub fn uncoded_power(point: &OperatingPoint, qam_norm: QamNormalization) -> Result<Optimum> {
    let m = constellation_for_rate(point, 1.0)?;
    let feasible = |p_t: f64| -> Result<bool> {
        Ok(flip_probability(point, m, qam_norm, p_t)? <= point.target_pe)
    };
    let mut hi = 1e-6;
    while !feasible(hi)? {
        hi *= 4.0;
        if hi > 1e12 {
            return Err(Error::infeasible(
                "uncoded transmission needs more than 1e12 W".to_string(),
            ));
        }
    }
    let p_t = min_feasible_power(PT_FLOOR, hi, &feasible)?
        .expect("bracket endpoint verified feasible");
    Ok(Optimum {
        label: "uncoded".to_string(),
        code: None,
        modulation: m,
        p_t_star: p_t,
        p_dec: 0.0,
        p_total: p_t,
    })
}

/// Deterministic tie-break key: total power, then message bits, then
/// blocklength, then (d_v, d_c, g) lexicographically. Uncoded carries the
/// minimal complexity key.
fn tie_key(opt: &Optimum, strat: &Strategy) -> (f64, u32, u64, u32, u32, u32) {
    let bits = match strat {
        Strategy::Coded(c) => c.rule.message_bits(),
        Strategy::Uncoded => 0,
    };
    match opt.code {
        Some((n, g, d_v, d_c, _)) => (opt.p_total, bits, n, d_v, d_c, g),
        None => (opt.p_total, bits, 0, 0, 0, 0),
    }
}

/// Finds the minimum-total-power strategy at a point. Fails only when every
/// candidate is infeasible; the error lists per-strategy reasons.
pub fn optimize_point(
    point: &OperatingPoint,
    strategies: &[CodedStrategy],
    models: &PowerModelBundle,
    include_uncoded: bool,
) -> Result<Optimum> {
    if strategies.is_empty() && !include_uncoded {
        return Err(Error::domain("no strategies supplied".to_string()));
    }
    let mut best: Option<(Optimum, (f64, u32, u64, u32, u32, u32))> = None;
    let mut reasons: Vec<String> = Vec::new();
    let mut consider = |opt: Optimum, strat: &Strategy| {
        let key = tie_key(&opt, strat);
        let better = match &best {
            None => true,
            Some((_, k)) => key < *k,
        };
        if better {
            best = Some((opt, key));
        }
    };
    for strat in strategies {
        match evaluate_coded(point, strat, models) {
            Ok(opt) => consider(opt, &Strategy::Coded(strat.clone())),
            Err(e) => reasons.push(e.to_string()),
        }
    }
    if include_uncoded {
        match uncoded_power(point, models.qam_norm) {
            Ok(opt) => consider(opt, &Strategy::Uncoded),
            Err(e) => reasons.push(e.to_string()),
        }
    }
    best.map(|(opt, _)| opt)
        .ok_or_else(|| Error::infeasible(reasons.join("; ")))
}

/// One sweep grid point.
#[derive(Debug, Clone)]
pub struct SweepRecord {
    pub r_m: f64,
    pub pe: f64,
    pub result: std::result::Result<Optimum, String>,
}

/// Evaluates the full (distance x target-pe) grid. Points are independent
/// and run in parallel; records come back in grid order (distance-major).
/// Per-point infeasibility is recorded, not fatal.
pub fn contour_sweep(
    template: &OperatingPoint,
    distances: &[f64],
    pe_ladder: &[f64],
    strategies: &[CodedStrategy],
    models: &PowerModelBundle,
    include_uncoded: bool,
) -> Vec<SweepRecord> {
    let n_pe = pe_ladder.len();
    par::map_indexed(distances.len() * n_pe, |idx| {
        let r = distances[idx / n_pe];
        let pe = pe_ladder[idx % n_pe];
        let point = OperatingPoint {
            distance_r: r,
            target_pe: pe,
            channel: template.channel.clone(),
            r_data: template.r_data,
        };
        let result = optimize_point(&point, strategies, models, include_uncoded)
            .map_err(|e| e.to_string());
        SweepRecord {
            r_m: r,
            pe,
            result,
        }
    })
}

/// CSV header for sweep output.
pub const SWEEP_CSV_HEADER: &str =
    "r_m,pe,strategy_label,n,g,d_v,d_c,alg,M,p_t_dbm,p_dec_dbm,p_total_dbm,feasible";

/// Renders sweep records as deterministic CSV (dBm at this reporting
/// boundary only).
pub fn sweep_to_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for rec in records {
        match &rec.result {
            Ok(opt) => {
                let (n, g, d_v, d_c, alg) = match opt.code {
                    Some((n, g, d_v, d_c, alg)) => (
                        n.to_string(),
                        g.to_string(),
                        d_v.to_string(),
                        d_c.to_string(),
                        alg.to_string(),
                    ),
                    None => (
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        "uncoded".to_string(),
                    ),
                };
                out.push_str(&format!(
                    "{r},{pe:e},{label},{n},{g},{d_v},{d_c},{alg},{m},{pt:.6},{pd},{ptot:.6},true\n",
                    r = rec.r_m,
                    pe = rec.pe,
                    label = opt.label,
                    m = opt.modulation.size(),
                    pt = watts_to_dbm(opt.p_t_star),
                    pd = format_dbm(opt.p_dec),
                    ptot = watts_to_dbm(opt.p_total),
                ));
            }
            Err(_) => {
                out.push_str(&format!(
                    "{r},{pe:e},,,,,,,,,,,false\n",
                    r = rec.r_m,
                    pe = rec.pe
                ));
            }
        }
    }
    out
}

fn format_dbm(p: f64) -> String {
    if p == 0.0 {
        "-inf".to_string()
    } else {
        format!("{:.6}", watts_to_dbm(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::q_inverse;

    fn sample_models() -> PowerModelBundle {
        PowerModelBundle {
            tables: NodeCharacterization::sample(),
            process: ProcessParams::sample(),
            wire_mode: WireLengthMode::BestCase,
            qam_norm: QamNormalization::Verbatim,
        }
    }

    fn physical_point(r: f64, pe: f64) -> OperatingPoint {
        OperatingPoint::new(
            r,
            pe,
            ChannelSpec::physical(60e9, 7e9, 300.0, 3.0, r).unwrap(),
            7e9,
        )
        .unwrap()
    }

    fn row(girth: u32, d_v: u32, d_c: u32, n: u64) -> CodeRow {
        CodeRow {
            girth,
            d_v,
            d_c,
            n_min: n,
            graph_file: None,
        }
    }

    fn strat_a(girth: u32, d_v: u32, d_c: u32, n: u64) -> CodedStrategy {
        CodedStrategy {
            row: row(girth, d_v, d_c, n),
            alg: Alg::GallagerA,
            rule: DecoderRule::gallager_a(),
        }
    }

    #[test]
    fn uncoded_bpsk_closed_form_abstract() {
        let eta = 1.0;
        let point = OperatingPoint::new(
            1.0,
            1e-6,
            ChannelSpec::abstract_eta(eta).unwrap(),
            1e9,
        )
        .unwrap();
        let opt = uncoded_power(&point, QamNormalization::Verbatim).unwrap();
        let expect = q_inverse(1e-6).unwrap().powi(2) / (2.0 * eta);
        assert!(
            (opt.p_t_star - expect).abs() / expect < 3e-3,
            "{} vs {expect}",
            opt.p_t_star
        );
        assert_eq!(opt.p_dec, 0.0);
    }

    #[test]
    fn uncoded_slack_target_hits_bracket_floor() {
        let point = OperatingPoint::new(
            1.0,
            0.5,
            ChannelSpec::abstract_eta(1.0).unwrap(),
            1e9,
        )
        .unwrap();
        let opt = uncoded_power(&point, QamNormalization::Verbatim).unwrap();
        assert!(opt.p_t_star <= PT_FLOOR * 1.0001);
    }

    #[test]
    fn uncoded_log_slope_near_one() {
        let eta = 1.0;
        let point0 = OperatingPoint::new(
            1.0,
            1e-4,
            ChannelSpec::abstract_eta(eta).unwrap(),
            1e9,
        )
        .unwrap();
        let slope = crate::optim::probe::slope_vs_log_inv_pe(&[1e-4, 1e-8, 1e-12], |pe| {
            let point = OperatingPoint {
                target_pe: pe,
                ..point0.clone()
            };
            Ok(uncoded_power(&point, QamNormalization::Verbatim)?.p_t_star)
        })
        .unwrap();
        assert!((eta * slope - 1.0).abs() < 0.05, "slope {slope}");
    }

    #[test]
    fn single_strategy_point_matches_grid_oracle() {
        let point = physical_point(3.2, 1e-5);
        let strat = strat_a(8, 3, 6, 96);
        let models = sample_models();
        let opt = optimize_point(&point, &[strat.clone()], &models, false).unwrap();
        assert_eq!(opt.label, "n96-g8-dv3-dc6-A");

        // Exhaustive grid scan at 0.01 dB steps must agree within a step.
        let m = constellation_for_rate(&point, 0.5).unwrap();
        let lo = shannon_limit(&point.channel_at_distance(), point.r_data).unwrap();
        let step = 10f64.powf(0.001);
        let mut p = lo;
        let mut grid_best = None;
        while p < PT_CEILING {
            let p0 = flip_probability(&point, m, models.qam_norm, p).unwrap();
            let final_ln = de_run(&strat.rule, p0, 3, 6, 1).unwrap().final_ln();
            if final_ln <= point.target_pe.ln() {
                grid_best = Some(p);
                break;
            }
            p *= step;
        }
        let grid_best = grid_best.unwrap();
        assert!(
            (opt.p_t_star / grid_best).ln().abs() <= 2.0 * 0.001 * std::f64::consts::LN_10,
            "bisection {} vs grid {grid_best}",
            opt.p_t_star
        );
    }

    #[test]
    fn adding_uncoded_never_hurts() {
        let models = sample_models();
        let strategies = vec![strat_a(8, 3, 6, 96), strat_a(6, 3, 6, 24)];
        for pe in [1e-2, 1e-4, 1e-6] {
            let point = physical_point(1.0, pe);
            let coded_only = optimize_point(&point, &strategies, &models, false).unwrap();
            let with_uncoded = optimize_point(&point, &strategies, &models, true).unwrap();
            assert!(with_uncoded.p_total <= coded_only.p_total + 1e-15);
        }
    }

    #[test]
    fn infeasible_points_report_reasons() {
        let models = sample_models();
        // Hopeless target at extreme distance.
        let point = physical_point(1e4, 1e-12);
        let err = optimize_point(&point, &[strat_a(6, 3, 6, 24)], &models, false).unwrap_err();
        assert!(err.to_string().contains("unreachable"), "{err}");
    }

    #[test]
    fn argmin_invariant_under_common_scaling() {
        // Scaling every strategy's total power by a common constant must
        // not change the winner; equivalently, the tie-break is strictly
        // lexicographic on the stated key. Exercised by comparing two runs
        // whose transmit-power scale differs via eta.
        let strategies = vec![strat_a(8, 3, 6, 96), strat_a(6, 4, 8, 32)];
        let point_a = OperatingPoint::new(
            1.0,
            1e-5,
            ChannelSpec::abstract_eta(1.0).unwrap(),
            7e9,
        )
        .unwrap();
        let point_b = OperatingPoint::new(
            1.0,
            1e-5,
            ChannelSpec::abstract_eta(2.0).unwrap(),
            7e9,
        )
        .unwrap();
        let models = sample_models();
        let a = optimize_point(&point_a, &strategies, &models, false).unwrap();
        let b = optimize_point(&point_b, &strategies, &models, false).unwrap();
        // eta rescales transmit power for every strategy alike; decoder
        // power is unchanged, so the ranking by total may only change
        // through the transmit component. This is a smoke check that the
        // selection is deterministic and label-stable.
        assert_eq!(a.label.is_empty(), b.label.is_empty());
    }

    #[test]
    fn sweep_single_point_matches_optimize() {
        let models = sample_models();
        let strategies = vec![strat_a(8, 3, 6, 96)];
        let template = physical_point(3.2, 1e-5);
        let recs = contour_sweep(&template, &[3.2], &[1e-5], &strategies, &models, false);
        assert_eq!(recs.len(), 1);
        let direct = optimize_point(&template, &strategies, &models, false).unwrap();
        let swept = recs[0].result.as_ref().unwrap();
        assert_eq!(swept.label, direct.label);
        assert!((swept.p_total - direct.p_total).abs() < 1e-15);
    }

    #[test]
    fn sweep_monotonicity_in_pe_and_distance() {
        let models = sample_models();
        let strategies = vec![strat_a(8, 3, 6, 96), strat_a(6, 3, 6, 24)];
        let template = physical_point(3.2, 1e-4);
        let pes = [1e-6, 1e-5, 1e-4, 1e-3];
        let recs = contour_sweep(&template, &[3.2], &pes, &strategies, &models, false);
        // Loosening the target can only reduce the optimal total power.
        let totals: Vec<f64> = recs
            .iter()
            .map(|r| r.result.as_ref().unwrap().p_total)
            .collect();
        for w in totals.windows(2) {
            assert!(w[1] <= w[0] + 1e-15, "totals {totals:?}");
        }
        // Growing distance can only increase it.
        let rs = [1.0, 2.0, 4.0, 8.0];
        let recs = contour_sweep(&template, &rs, &[1e-5], &strategies, &models, false);
        let totals: Vec<f64> = recs
            .iter()
            .map(|r| r.result.as_ref().unwrap().p_total)
            .collect();
        for w in totals.windows(2) {
            assert!(w[1] >= w[0] - 1e-15, "totals {totals:?}");
        }
    }

    #[test]
    fn csv_is_byte_deterministic() {
        let models = sample_models();
        let strategies = vec![strat_a(8, 3, 6, 96)];
        let template = physical_point(3.2, 1e-5);
        let a = sweep_to_csv(&contour_sweep(
            &template,
            &[1.0, 3.2],
            &[1e-3, 1e-5],
            &strategies,
            &models,
            true,
        ));
        let b = sweep_to_csv(&contour_sweep(
            &template,
            &[1.0, 3.2],
            &[1e-3, 1e-5],
            &strategies,
            &models,
            true,
        ));
        assert_eq!(a, b);
        assert!(a.starts_with(SWEEP_CSV_HEADER));
        assert_eq!(a.lines().count(), 1 + 4);
    }
}
