//! Total-power minimization over transmit power and coding strategies.
//!
//! The objective throughout is `P_total = P_T + P_dec`: raising transmit
//! power cleans up the channel and lets the decoder work less, so the two
//! terms trade off and the minimum sits strictly between the extremes.
//!
//! This module carries the closed forms (principal-branch Lambert W and the
//! transmit-power optimizer it yields), exact numeric minimization for the
//! node and wire decoding-power models driven by density evolution, and the
//! uncoded baseline. Strategy search and grid sweeps live in [`sweep`];
//! asymptotic-scaling verification in [`probe`].

pub mod probe;
pub mod sweep;

use crate::channel::{ln_q, q_inverse_ln};
use crate::de::{min_iterations_ln, DecoderRule};
use crate::error::{Error, Result};

/// Iteration cap for density-evolution feasibility probes.
const ITER_CAP: u32 = 10_000;
/// ln-space bisection width for transmit-power searches (well under the
/// 0.01 dB reporting tolerance).
const LN_PT_TOL: f64 = 1e-5;

/// Principal branch of the Lambert W function: the `w >= -1` solution of
/// `w e^w = x`, defined for `x >= -1/e`. Halley iteration to 1e-12
/// relative.
pub fn lambert_w0(x: f64) -> Result<f64> {
    let min_x = -(-1.0f64).exp();
    if !x.is_finite() || x < min_x {
        return Err(Error::domain(format!(
            "lambert_w0 requires x >= -1/e = {min_x}, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let mut w = if x > std::f64::consts::E {
        let lx = x.ln();
        lx - lx.ln()
    } else if x >= 0.0 {
        x / (1.0 + x)
    } else {
        // Series around the branch point x = -1/e.
        let p = (2.0 * (std::f64::consts::E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0
    };
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - x;
        let denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        let step = f / denom;
        w -= step;
        if step.abs() <= 1e-14 * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w)
}

/// Closed-form transmit power minimizing `P_T + (1/pe)^(gamma/(eta P_T))`
/// (the exponential-in-iterations wire-cost objective):
///
/// `P_T* = (gamma ln(1/pe) / eta) / (2 W0( sqrt(gamma ln(1/pe) / eta) / 2 ))`.
///
/// Valid once the Lambert argument is comfortably past the sandwich regime,
/// which `pe < e^(-e)` guarantees.
pub fn asymptotic_pt_star_gallager_a(gamma: f64, eta: f64, pe: f64) -> Result<f64> {
    if !(gamma > 0.0 && eta > 0.0) {
        return Err(Error::domain("gamma and eta must be positive".to_string()));
    }
    let cutoff = (-std::f64::consts::E).exp();
    if !(pe > 0.0 && pe < cutoff) {
        return Err(Error::domain(format!(
            "pe must lie in (0, e^-e = {cutoff:.4}), got {pe}"
        )));
    }
    let l = gamma * (1.0 / pe).ln() / eta;
    Ok(l / (2.0 * lambert_w0(0.5 * l.sqrt())?))
}

/// A minimized operating point for one decoding-power model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptimum {
    pub p_t_star: f64,
    /// Decoding iterations at the optimum.
    pub n_iter: u32,
    pub p_dec: f64,
    pub p_total: f64,
}

/// Smallest transmit power at which the rule reaches the target error
/// probability (given as `ln(1/pe)`) within `n_iter` iterations over the
/// `Es/N0 = eta P_T` BPSK channel. `hi` must be feasible. Everything runs
/// in the log domain so arbitrarily deep targets are allowed.
fn min_power_for_iters(
    rule: &DecoderRule,
    d_v: u32,
    d_c: u32,
    eta: f64,
    ln_inv_pe: f64,
    n_iter: u32,
    hi: f64,
) -> Result<f64> {
    let feasible = |p_t: f64| -> Result<bool> {
        let ln_p0 = ln_q((2.0 * eta * p_t).sqrt())?.min(0.5f64.ln());
        Ok(match n_iter {
            0 => ln_p0 <= -ln_inv_pe,
            _ => min_iterations_ln(rule, ln_p0, d_v, d_c, -ln_inv_pe, n_iter)?.is_some(),
        })
    };
    debug_assert!(feasible(hi)?);
    let mut ln_hi = hi.ln();
    let mut ln_lo = (1e-9f64).ln();
    if feasible(ln_lo.exp())? {
        return Ok(ln_lo.exp());
    }
    while ln_hi - ln_lo > LN_PT_TOL {
        let mid = 0.5 * (ln_lo + ln_hi);
        if feasible(mid.exp())? {
            ln_hi = mid;
        } else {
            ln_lo = mid;
        }
    }
    Ok(ln_hi.exp())
}

/// Minimizes `P_T + xi_node * N_iter(P_T, pe)` for the node decoding-power
/// model, with the iteration count supplied by density evolution at
/// `p0 = Q(sqrt(2 eta P_T))`.
///
/// When `p_t` is supplied the objective is evaluated there without
/// optimizing. The search is exact over the integer iteration count: for
/// each N the minimal feasible transmit power is found by bisection, and
/// the scan stops once `xi_node * N` alone exceeds the best total seen.
pub fn node_model_total(
    rule: &DecoderRule,
    d_v: u32,
    d_c: u32,
    xi_node: f64,
    eta: f64,
    pe: f64,
    p_t: Option<f64>,
) -> Result<PowerOptimum> {
    if !(pe > 0.0 && pe < 0.5) {
        return Err(Error::domain(format!("pe must lie in (0, 0.5), got {pe}")));
    }
    node_model_total_ln(rule, d_v, d_c, xi_node, eta, -pe.ln(), p_t)
}

/// Log-domain variant of [`node_model_total`]: the target is `ln(1/pe)`,
/// allowing ladders far beyond the f64 underflow point.
pub fn node_model_total_ln(
    rule: &DecoderRule,
    d_v: u32,
    d_c: u32,
    xi_node: f64,
    eta: f64,
    ln_inv_pe: f64,
    p_t: Option<f64>,
) -> Result<PowerOptimum> {
    if !(xi_node > 0.0 && eta > 0.0) {
        return Err(Error::domain("xi_node and eta must be positive".to_string()));
    }
    if !(ln_inv_pe > 0.5f64.recip().ln()) {
        return Err(Error::domain(format!(
            "ln(1/pe) must exceed ln 2, got {ln_inv_pe}"
        )));
    }
    if let Some(p_t) = p_t {
        let ln_p0 = ln_q((2.0 * eta * p_t).sqrt())?.min(0.5f64.ln());
        let n = min_iterations_ln(rule, ln_p0, d_v, d_c, -ln_inv_pe, ITER_CAP)?
            .ok_or_else(|| {
                Error::infeasible(format!(
                    "ln(1/pe) = {ln_inv_pe} unreachable at P_T = {p_t}"
                ))
            })?;
        let p_dec = xi_node * n as f64;
        return Ok(PowerOptimum {
            p_t_star: p_t,
            n_iter: n,
            p_dec,
            p_total: p_t + p_dec,
        });
    }
    // N = 0 is always feasible at the uncoded power, giving both an upper
    // bracket and a starting objective.
    let p_uncoded = q_inverse_ln(-ln_inv_pe)?.powi(2) / (2.0 * eta);
    let mut best = PowerOptimum {
        p_t_star: p_uncoded,
        n_iter: 0,
        p_dec: 0.0,
        p_total: p_uncoded,
    };
    let mut hi = p_uncoded;
    for n in 1..=ITER_CAP {
        let cost = xi_node * n as f64;
        if cost >= best.p_total {
            break;
        }
        let p_t = min_power_for_iters(rule, d_v, d_c, eta, ln_inv_pe, n, hi)?;
        hi = p_t;
        let total = p_t + cost;
        if total < best.p_total {
            best = PowerOptimum {
                p_t_star: p_t,
                n_iter: n,
                p_dec: cost,
                p_total: total,
            };
        }
    }
    Ok(best)
}

/// Both bracket optima of the wire decoding-power model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WireBracketOptima {
    /// Using the area floor `lambda^2 e^(gamma N)`.
    pub lower: PowerOptimum,
    /// Using the area ceiling `lambda^2 e^(2 gamma N)`.
    pub upper: PowerOptimum,
    pub gamma: f64,
}

/// Minimizes `P_T + xi_wire * A_wires(N_iter)` under both exponential
/// wiring-area brackets (`e^(gamma N)` and `e^(2 gamma N)`), with the
/// construction constant `gamma` defaulting to the interval floor
/// `log((d_v-1)(d_c-1))`.
pub fn wire_model_total(
    rule: &DecoderRule,
    d_v: u32,
    d_c: u32,
    xi_wire: f64,
    lambda: f64,
    eta: f64,
    pe: f64,
    gamma: Option<f64>,
) -> Result<WireBracketOptima> {
    if !(pe > 0.0 && pe < 0.5) {
        return Err(Error::domain(format!("pe must lie in (0, 0.5), got {pe}")));
    }
    wire_model_total_ln(rule, d_v, d_c, xi_wire, lambda, eta, -pe.ln(), gamma)
}

/// Log-domain variant of [`wire_model_total`]: the target is `ln(1/pe)`.
pub fn wire_model_total_ln(
    rule: &DecoderRule,
    d_v: u32,
    d_c: u32,
    xi_wire: f64,
    lambda: f64,
    eta: f64,
    ln_inv_pe: f64,
    gamma: Option<f64>,
) -> Result<WireBracketOptima> {
    if !(xi_wire > 0.0 && lambda > 0.0 && eta > 0.0) {
        return Err(Error::domain(
            "xi_wire, lambda and eta must be positive".to_string(),
        ));
    }
    if !(ln_inv_pe > 0.5f64.recip().ln()) {
        return Err(Error::domain(format!(
            "ln(1/pe) must exceed ln 2, got {ln_inv_pe}"
        )));
    }
    let gamma = gamma.unwrap_or((((d_v - 1) * (d_c - 1)) as f64).ln());
    let optimize = |gamma_eff: f64| -> Result<PowerOptimum> {
        // N = 0: no decoder, no wires; the uncoded power brackets the search.
        let p_uncoded = q_inverse_ln(-ln_inv_pe)?.powi(2) / (2.0 * eta);
        let mut best = PowerOptimum {
            p_t_star: p_uncoded,
            n_iter: 0,
            p_dec: 0.0,
            p_total: p_uncoded,
        };
        let mut hi = p_uncoded;
        for n in 1..=ITER_CAP {
            let cost = xi_wire * lambda * lambda * (gamma_eff * n as f64).exp();
            if cost >= best.p_total {
                break;
            }
            let p_t = min_power_for_iters(rule, d_v, d_c, eta, ln_inv_pe, n, hi)?;
            hi = p_t;
            let total = p_t + cost;
            if total < best.p_total {
                best = PowerOptimum {
                    p_t_star: p_t,
                    n_iter: n,
                    p_dec: cost,
                    p_total: total,
                };
            }
        }
        Ok(best)
    };
    Ok(WireBracketOptima {
        lower: optimize(gamma)?,
        upper: optimize(2.0 * gamma)?,
        gamma,
    })
}
