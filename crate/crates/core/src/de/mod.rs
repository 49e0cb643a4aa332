//! Density evolution for hard-decision message-passing decoders on the BSC.
//!
//! Tracks the message error probability of a (d_v, d_c)-regular ensemble
//! across decoding iterations, exactly in the cycle-free limit. Three rule
//! families are supported:
//!
//! - **Gallager-A**: a variable node flips the channel value only when all
//!   d_v - 1 incoming check messages disagree with it.
//! - **Gallager-B**: the flip happens when at least `b` incoming messages
//!   disagree. The threshold `b` may be fixed, or chosen adaptively per
//!   iteration to minimize the next error probability (Gallager's original
//!   formulation; this is the default, and at d_v = 3 it coincides with
//!   Gallager-A step for step).
//! - **Tabular**: general finite-alphabet symmetric rules driven by update
//!   tables (see [`tabular`]).
//!
//! Iterates move to the log domain once they fall below 1e-15 so that
//! doubly-exponential Gallager-B decay (down to 1e-64 and far beyond) stays
//! representable and accurate.

pub mod tabular;

use crate::error::{Error, Result};
pub use tabular::TabularRule;

/// Below this linear probability (1e-15) the engine steps in the log domain.
const LN_SWITCH: f64 = -34.538776394910684;

/// An iterate below this value counts as converged to zero.
const LN_CONVERGED: f64 = -690.7755278982137; // ln(1e-300)

/// Iteration cap used by threshold bisection probes.
pub const THRESHOLD_PROBE_ITERS: u32 = 10_000;
/// An iterate below this value counts as "driven to zero" for threshold
/// bisection purposes.
const LN_THRESHOLD_TARGET: f64 = -27.631021115928547; // ln(1e-12)

/// Flip-threshold policy for Gallager-B.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BThreshold {
    /// Per-iteration threshold minimizing the next error probability over
    /// the legal range `[ceil((d_v-1)/2), d_v-1]`.
    Adaptive,
    /// A fixed flip threshold.
    Fixed(u32),
}

/// A finite-alphabet symmetric message-passing decoder.
#[derive(Debug, Clone)]
pub enum DecoderRule {
    GallagerA,
    GallagerB { b: BThreshold },
    Tabular(TabularRule),
}

impl DecoderRule {
    pub fn gallager_a() -> Self {
        DecoderRule::GallagerA
    }

    /// Gallager-B with the adaptive per-iteration threshold.
    pub fn gallager_b() -> Self {
        DecoderRule::GallagerB {
            b: BThreshold::Adaptive,
        }
    }

    pub fn gallager_b_fixed(b: u32) -> Self {
        DecoderRule::GallagerB {
            b: BThreshold::Fixed(b),
        }
    }

    /// Message alphabet size: 2 for the one-bit rules.
    pub fn alphabet_size(&self) -> usize {
        match self {
            DecoderRule::GallagerA | DecoderRule::GallagerB { .. } => 2,
            DecoderRule::Tabular(t) => t.alphabet_size(),
        }
    }

    /// Bits required to carry one message.
    pub fn message_bits(&self) -> u32 {
        (self.alphabet_size() as f64).log2().ceil() as u32
    }

    pub fn name(&self) -> &'static str {
        match self {
            DecoderRule::GallagerA => "A",
            DecoderRule::GallagerB { .. } => "B",
            DecoderRule::Tabular(_) => "T",
        }
    }
}

/// A density-evolution run: the channel error probability and the message
/// error probability after each iteration.
#[derive(Debug, Clone)]
pub struct DeTrajectory {
    pub p0: f64,
    /// ln of the error-probability iterates p_1 .. p_t.
    pub ln_iterates: Vec<f64>,
    /// Message distributions per iteration (tabular rules only).
    pub dists: Option<Vec<Vec<f64>>>,
    /// Set when the iterate fell below 1e-300 and the run stopped early.
    pub converged: bool,
}

impl DeTrajectory {
    /// ln of the final iterate (ln p0 when no iterations ran).
    pub fn final_ln(&self) -> f64 {
        self.ln_iterates.last().copied().unwrap_or(self.p0.ln())
    }

    /// Final iterate in linear scale; underflows to 0 below ~1e-308.
    pub fn final_linear(&self) -> f64 {
        self.final_ln().exp()
    }

    /// Iterates in linear scale.
    pub fn linear_iterates(&self) -> Vec<f64> {
        self.ln_iterates.iter().map(|l| l.exp()).collect()
    }
}

fn validate_degrees(d_v: u32, d_c: u32) -> Result<()> {
    if d_v < 2 || d_c <= d_v {
        return Err(Error::domain(format!(
            "need d_c > d_v >= 2, got d_v = {d_v}, d_c = {d_c}"
        )));
    }
    Ok(())
}

fn validate_prob_half(name: &str, p: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::domain(format!("{name} must lie in [0, 0.5], got {p}")));
    }
    Ok(())
}

/// Legal Gallager-B flip thresholds for a given variable degree.
pub fn b_threshold_range(d_v: u32) -> std::ops::RangeInclusive<u32> {
    (d_v - 1).div_ceil(2)..=(d_v - 1)
}

fn validate_b(d_v: u32, b: u32) -> Result<()> {
    let range = b_threshold_range(d_v);
    if !range.contains(&b) {
        return Err(Error::domain(format!(
            "flip threshold b = {b} outside [{}, {}] for d_v = {d_v}",
            range.start(),
            range.end()
        )));
    }
    Ok(())
}

/// `P(check message wrong) = (1 - (1-2p)^(d_c-1)) / 2`, computed in a form
/// that stays accurate for p near 0.
fn check_error_prob(p: f64, d_c: u32) -> f64 {
    -0.5 * f64::exp_m1((d_c as f64 - 1.0) * f64::ln_1p(-2.0 * p))
}

/// One Gallager-A density-evolution step:
///
/// `p0 - p0 [(1+(1-2p)^(dc-1))/2]^(dv-1) + (1-p0) [(1-(1-2p)^(dc-1))/2]^(dv-1)`
///
/// clamped to [0, 0.5]. Zero is an exact fixed point.
pub fn gallager_a_step(p_prev: f64, p0: f64, d_v: u32, d_c: u32) -> Result<f64> {
    validate_degrees(d_v, d_c)?;
    validate_prob_half("p_prev", p_prev)?;
    validate_prob_half("p0", p0)?;
    let k = d_v - 1;
    let q_minus = check_error_prob(p_prev, d_c);
    // p0 (1 - q_plus^k) without the cancellation: 1 - (1-q)^k = -expm1(k ln(1-q)).
    let one_minus_qplus_k = -f64::exp_m1(k as f64 * f64::ln_1p(-q_minus));
    let next = p0 * one_minus_qplus_k + (1.0 - p0) * q_minus.powi(k as i32);
    Ok(next.clamp(0.0, 0.5))
}

/// One Gallager-B density-evolution step with flip threshold `b`: the
/// variable node flips the channel value when at least `b` of its d_v - 1
/// incoming check messages disagree with it. Expanding over the number of
/// disagreeing messages:
///
/// `p0 [1 - P(Bin(d_v-1, q+) >= b)] + (1-p0) P(Bin(d_v-1, q-) >= b)`
///
/// where `q- = (1-(1-2p)^(dc-1))/2` and `q+ = 1 - q-`. At odd d_v with
/// `b = (d_v-1)/2` this is the classical binomial double-sum form; at
/// `b = d_v - 1` it reduces to [`gallager_a_step`].
///
/// The raw expression is returned; with sub-majority thresholds it can
/// exceed 1/2 (the trajectory runner clamps its own iterates).
pub fn gallager_b_step(p_prev: f64, p0: f64, d_v: u32, d_c: u32, b: u32) -> Result<f64> {
    validate_degrees(d_v, d_c)?;
    validate_prob_half("p_prev", p_prev)?;
    validate_prob_half("p0", p0)?;
    validate_b(d_v, b)?;
    let k = d_v - 1;
    let q_minus = check_error_prob(p_prev, d_c);
    let q_plus = 1.0 - q_minus;
    // 1 - P(Bin(k, q+) >= b) computed as the complementary sum directly,
    // so no precision is lost when q- is tiny; every term carries a
    // q-^(k-m >= 1) factor.
    let mut low_plus = 0.0;
    let mut tail_minus = 0.0;
    for m in 0..b {
        low_plus += binomial(k, m) * q_plus.powi(m as i32) * q_minus.powi((k - m) as i32);
    }
    for m in b..=k {
        tail_minus += binomial(k, m) * q_minus.powi(m as i32) * q_plus.powi((k - m) as i32);
    }
    let next = p0 * low_plus + (1.0 - p0) * tail_minus;
    Ok(next.max(0.0))
}

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k.min(n));
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Log-domain step for the one-bit rules, valid for ln(p_prev) below the
/// switch point. Uses the binomial expansion with `eps = (d_c-1) p_prev`
/// (higher-order corrections are below 1e-13 relative there):
///
/// `p_next = p0 * sum_{m<b} C(k,m) eps^(k-m) + (1-p0) * sum_{m>=b} C(k,m) eps^m`.
///
/// `ln_p0` may be arbitrarily deep; `ln_1m_p0` is ln(1 - p0).
fn ln_step_small(ln_p_prev: f64, ln_p0: f64, ln_1m_p0: f64, d_v: u32, d_c: u32, b: u32) -> f64 {
    let k = d_v - 1;
    let ln_eps = ((d_c - 1) as f64).ln() + ln_p_prev;
    let mut terms: Vec<f64> = Vec::with_capacity(k as usize + 1);
    for m in 0..b {
        terms.push(ln_p0 + binomial(k, m).ln() + (k - m) as f64 * ln_eps);
    }
    for m in b..=k {
        terms.push(ln_1m_p0 + binomial(k, m).ln() + m as f64 * ln_eps);
    }
    log_sum_exp(&terms)
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// One step of the rule in ln-domain, dispatching between the exact linear
/// formulas and the small-probability expansion. The channel error
/// probability is carried as `ln_p0` so that ladders far below the f64
/// underflow point stay representable.
fn rule_step_ln(rule: &DecoderRule, ln_p_prev: f64, ln_p0: f64, d_v: u32, d_c: u32) -> Result<f64> {
    let fixed_b = match rule {
        DecoderRule::GallagerA => Some(d_v - 1),
        DecoderRule::GallagerB {
            b: BThreshold::Fixed(b),
        } => Some(*b),
        DecoderRule::GallagerB {
            b: BThreshold::Adaptive,
        } => None,
        DecoderRule::Tabular(_) => {
            return Err(Error::domain(
                "tabular rules evolve full distributions; use tabular_de_run".to_string(),
            ))
        }
    };
    if ln_p_prev > LN_SWITCH {
        // p_prev is representable, hence so is p0 (p0 >= the trajectory
        // scale in every use; if not, exp underflows to 0 and the exact
        // formulas remain valid).
        let p_prev = ln_p_prev.exp();
        let p0 = ln_p0.exp();
        let next = match fixed_b {
            Some(b) => gallager_b_step(p_prev, p0, d_v, d_c, b)?,
            None => {
                let mut best = f64::INFINITY;
                for b in b_threshold_range(d_v) {
                    best = best.min(gallager_b_step(p_prev, p0, d_v, d_c, b)?);
                }
                best
            }
        };
        Ok(next.min(0.5).ln())
    } else {
        let ln_1m_p0 = f64::ln_1p(-ln_p0.exp());
        let next = match fixed_b {
            Some(b) => ln_step_small(ln_p_prev, ln_p0, ln_1m_p0, d_v, d_c, b),
            None => {
                let mut best = f64::INFINITY;
                for b in b_threshold_range(d_v) {
                    best = best.min(ln_step_small(ln_p_prev, ln_p0, ln_1m_p0, d_v, d_c, b));
                }
                best
            }
        };
        Ok(next)
    }
}

/// For adaptive Gallager-B: the flip threshold that the rule would use at a
/// given message error probability. Exposed so that graph simulation can
/// replay exactly the schedule density evolution follows.
pub fn adaptive_b_choice(ln_p_prev: f64, p0: f64, d_v: u32, d_c: u32) -> Result<u32> {
    validate_degrees(d_v, d_c)?;
    let mut best = (f64::INFINITY, d_v - 1);
    for b in b_threshold_range(d_v) {
        let v = if ln_p_prev > LN_SWITCH {
            gallager_b_step(ln_p_prev.exp(), p0, d_v, d_c, b)?.ln()
        } else {
            ln_step_small(ln_p_prev, p0.ln(), f64::ln_1p(-p0), d_v, d_c, b)
        };
        // Strict improvement keeps the largest (most conservative) b on ties.
        if v < best.0 {
            best = (v, b);
        }
    }
    Ok(best.1)
}

/// Runs density evolution for `max_iters` iterations, stopping early once
/// the iterate drops below 1e-300 (`converged` is set in that case).
pub fn de_run(
    rule: &DecoderRule,
    p0: f64,
    d_v: u32,
    d_c: u32,
    max_iters: u32,
) -> Result<DeTrajectory> {
    validate_degrees(d_v, d_c)?;
    validate_prob_half("p0", p0)?;
    if let DecoderRule::Tabular(t) = rule {
        return tabular::tabular_de_run(t, p0, d_v, d_c, max_iters);
    }
    if let DecoderRule::GallagerB {
        b: BThreshold::Fixed(b),
    } = rule
    {
        validate_b(d_v, *b)?;
    }
    let mut ln_iterates = Vec::new();
    let ln_p0 = p0.ln();
    let mut ln_p = ln_p0;
    let mut converged = p0 == 0.0;
    for _ in 0..max_iters {
        if converged {
            break;
        }
        ln_p = rule_step_ln(rule, ln_p, ln_p0, d_v, d_c)?;
        ln_iterates.push(ln_p);
        if ln_p < LN_CONVERGED {
            converged = true;
        }
    }
    Ok(DeTrajectory {
        p0,
        ln_iterates,
        dists: None,
        converged,
    })
}

/// Whether density evolution from `p0` drives the iterate below 1e-12
/// within the probe budget.
fn probe_converges(rule: &DecoderRule, p0: f64, d_v: u32, d_c: u32) -> Result<bool> {
    if p0 == 0.0 {
        return Ok(true);
    }
    // Same dynamics as de_run, with an additional early exit at the
    // threshold target. Stall detection aborts runs that have plainly
    // reached a nonzero fixed point.
    match rule {
        DecoderRule::Tabular(t) => {
            let traj = tabular::tabular_de_run(t, p0, d_v, d_c, THRESHOLD_PROBE_ITERS)?;
            Ok(traj.final_ln() < LN_THRESHOLD_TARGET)
        }
        _ => {
            let ln_p0 = p0.ln();
            let mut ln_p = ln_p0;
            let mut stall = 0u32;
            for _ in 0..THRESHOLD_PROBE_ITERS {
                let next = rule_step_ln(rule, ln_p, ln_p0, d_v, d_c)?;
                if next < LN_THRESHOLD_TARGET {
                    return Ok(true);
                }
                if next >= ln_p - 1e-14 {
                    stall += 1;
                    if stall > 64 {
                        return Ok(false);
                    }
                } else {
                    stall = 0;
                }
                ln_p = next;
            }
            Ok(false)
        }
    }
}

/// Decoding threshold of the rule on the BSC: the largest flip probability
/// from which density evolution still drives the error probability to zero.
///
/// Bisection on [1e-6, 0.5] to 1e-9 absolute, with 1e4 iterations per
/// probe. Monotonicity of convergence in p0 is verified on a 64-point scan
/// first; if violated, the largest converging scan point seeds an
/// exhaustive fine scan instead of bisection.
pub fn threshold(rule: &DecoderRule, d_v: u32, d_c: u32) -> Result<f64> {
    validate_degrees(d_v, d_c)?;
    let lo0 = 1e-6;
    let hi0 = 0.5;
    if !probe_converges(rule, lo0, d_v, d_c)? {
        return Err(Error::NoThreshold { p0: lo0 });
    }
    // Monotonicity scan: convergence flags should be all-true then all-false.
    let scan: Vec<bool> = (0..64)
        .map(|i| {
            let p = lo0 + (hi0 - lo0) * (i as f64) / 63.0;
            probe_converges(rule, p, d_v, d_c)
        })
        .collect::<Result<_>>()?;
    let monotone = scan.windows(2).all(|w| w[0] || !w[1]);
    if !monotone {
        // Fine exhaustive scan: largest converging point wins.
        let steps = 1 << 14;
        let mut best = lo0;
        for i in 0..=steps {
            let p = lo0 + (hi0 - lo0) * (i as f64) / (steps as f64);
            if probe_converges(rule, p, d_v, d_c)? {
                best = p;
            }
        }
        return Ok(best);
    }
    let (mut lo, mut hi) = (lo0, hi0);
    if probe_converges(rule, hi, d_v, d_c)? {
        return Ok(hi);
    }
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if probe_converges(rule, mid, d_v, d_c)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Smallest iteration count t with p_t <= target_pe, or `None` when the
/// target is not reached within `cap` iterations (expected above threshold).
pub fn min_iterations(
    rule: &DecoderRule,
    p0: f64,
    d_v: u32,
    d_c: u32,
    target_pe: f64,
    cap: u32,
) -> Result<Option<u32>> {
    validate_prob_half("p0", p0)?;
    if !(target_pe > 0.0 && target_pe < 0.5) {
        return Err(Error::domain(format!(
            "target_pe must lie in (0, 0.5), got {target_pe}"
        )));
    }
    min_iterations_ln(rule, p0.ln(), d_v, d_c, target_pe.ln(), cap)
}

/// Log-domain variant of [`min_iterations`]: the channel error probability
/// and target are `ln p0` and `ln target_pe`, either of which may lie far
/// below the f64 underflow point. Tabular rules evolve linear
/// distributions, so for them `ln p0` must still be representable.
pub fn min_iterations_ln(
    rule: &DecoderRule,
    ln_p0: f64,
    d_v: u32,
    d_c: u32,
    ln_target_pe: f64,
    cap: u32,
) -> Result<Option<u32>> {
    validate_degrees(d_v, d_c)?;
    if !(ln_p0 <= 0.5f64.ln()) {
        return Err(Error::domain(format!(
            "ln_p0 must be at most ln(1/2), got {ln_p0}"
        )));
    }
    if !(ln_target_pe < 0.5f64.ln()) {
        return Err(Error::domain(format!(
            "ln_target_pe must be below ln(1/2), got {ln_target_pe}"
        )));
    }
    if cap < 1 {
        return Err(Error::domain("cap must be >= 1".to_string()));
    }
    if ln_p0 <= ln_target_pe {
        return Ok(Some(0));
    }
    match rule {
        DecoderRule::Tabular(t) => {
            let p0 = ln_p0.exp();
            if p0 == 0.0 {
                return Err(Error::domain(
                    "tabular rules need a representable p0".to_string(),
                ));
            }
            let traj = tabular::tabular_de_run(t, p0, d_v, d_c, cap)?;
            for (i, ln_p) in traj.ln_iterates.iter().enumerate() {
                if *ln_p <= ln_target_pe {
                    return Ok(Some(i as u32 + 1));
                }
            }
            Ok(None)
        }
        _ => {
            let mut ln_p = ln_p0;
            let mut stall = 0u32;
            for t in 1..=cap {
                let next = rule_step_ln(rule, ln_p, ln_p0, d_v, d_c)?;
                if next <= ln_target_pe {
                    return Ok(Some(t));
                }
                if next >= ln_p - 1e-14 {
                    stall += 1;
                    if stall > 64 {
                        return Ok(None);
                    }
                } else {
                    stall = 0;
                }
                ln_p = next;
            }
            Ok(None)
        }
    }
}
