//! Wiring-area lower bounds for fully-parallel decoders.
//!
//! Two families of bounds are reported. The trivial one charges each of the
//! `d_v n` wires its minimum footprint `lambda^2`. The iteration-driven one
//! converts a required number of independent decoding iterations into a
//! girth requirement, a blocklength requirement, and finally an exponential
//! wiring-area bound `e^(gamma N)` with the construction-dependent constant
//! `gamma` pinned to the interval
//! `[log((d_v-1)(d_c-1)), 3 log(2 d_v d_c + 1)]`. When the degrees are
//! large enough (`d_v d_c >= 4 (d_v + d_c)`), a crossing-number argument
//! adds a second exponential branch with exponent
//! `log(2 d_v^2 d_c^2 / (d_v + d_c)^2)`.
//!
//! Exact crossing numbers are not computed (that problem is NP-hard and the
//! bounds are what the analysis uses); the crossing-number constant
//! `k_l = 1 / (l^2 2^(2l+3))` is reported as an order-level estimate only.

use crate::error::{Error, Result};

/// Which datum drives the bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundMode {
    /// Known blocklength: the per-wire footprint bound.
    FromN { n: u64 },
    /// Required independent iterations: the exponential bounds.
    FromIters { n_iter: u32 },
}

/// Dense-degree crossing-number branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DenseBranch {
    /// `d_v d_c < 4 (d_v + d_c)`: the branch gives nothing.
    NotApplicable,
    Applicable {
        /// Per-iteration exponent `log(2 d_v^2 d_c^2 / (d_v+d_c)^2)`.
        exponent: f64,
        /// `e^(exponent * n_iter)`, order-level.
        value: f64,
    },
}

/// Order-level constant of the girth-based crossing-number bound,
/// instantiated at `l = 2 n_iter - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingConstant {
    pub l: u32,
    pub k_l: f64,
    /// Always true: the constant is an order-level estimate, not exact.
    pub order_level: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WiringBoundReport {
    pub d_v: u32,
    pub d_c: u32,
    pub lambda: f64,
    /// `lambda^2 d_v n` (FromN mode).
    pub per_wire_floor: Option<f64>,
    /// `[log((d_v-1)(d_c-1)), 3 log(2 d_v d_c + 1)]` (FromIters mode).
    pub gamma_interval: Option<(f64, f64)>,
    /// `e^(gamma n_iter)` at each end of the gamma interval.
    pub exponential_floor: Option<(f64, f64)>,
    pub dense: Option<DenseBranch>,
    pub crossing_constant: Option<CrossingConstant>,
}

/// Computes the wiring-area lower bounds in the requested mode.
pub fn wiring_area_lower_bounds(
    d_v: u32,
    d_c: u32,
    mode: BoundMode,
    lambda: f64,
) -> Result<WiringBoundReport> {
    if d_v < 2 || d_c <= d_v {
        return Err(Error::domain(format!(
            "need d_c > d_v >= 2, got d_v = {d_v}, d_c = {d_c}"
        )));
    }
    if !(lambda > 0.0) {
        return Err(Error::domain(format!("lambda must be positive, got {lambda}")));
    }
    let mut report = WiringBoundReport {
        d_v,
        d_c,
        lambda,
        per_wire_floor: None,
        gamma_interval: None,
        exponential_floor: None,
        dense: None,
        crossing_constant: None,
    };
    match mode {
        BoundMode::FromN { n } => {
            report.per_wire_floor = Some(lambda * lambda * d_v as f64 * n as f64);
        }
        BoundMode::FromIters { n_iter } => {
            if n_iter < 1 {
                return Err(Error::domain("n_iter must be >= 1".to_string()));
            }
            let dv = d_v as f64;
            let dc = d_c as f64;
            let gamma_lo = ((dv - 1.0) * (dc - 1.0)).ln();
            let gamma_hi = 3.0 * (2.0 * dv * dc + 1.0).ln();
            report.gamma_interval = Some((gamma_lo, gamma_hi));
            report.exponential_floor = Some((
                (gamma_lo * n_iter as f64).exp(),
                (gamma_hi * n_iter as f64).exp(),
            ));
            report.dense = Some(if dv * dc >= 4.0 * (dv + dc) {
                let exponent = (2.0 * dv * dv * dc * dc / ((dv + dc) * (dv + dc))).ln();
                DenseBranch::Applicable {
                    exponent,
                    value: (exponent * n_iter as f64).exp(),
                }
            } else {
                DenseBranch::NotApplicable
            });
            let l = 2 * n_iter - 1;
            report.crossing_constant = Some(CrossingConstant {
                l,
                k_l: 1.0 / ((l as f64) * (l as f64) * 2f64.powi(2 * l as i32 + 3)),
                order_level: true,
            });
        }
    }
    Ok(report)
}
