//! Uniform verifier for asymptotic scaling claims.
//!
//! A probe evaluates a quantity along a ladder of target error
//! probabilities, divides it by a candidate growth model, and reports the
//! ratio spread plus a fitted log-log exponent. A claim of the form
//! "quantity = Theta(model)" shows up as a ratio spread near 1; a claim
//! about the growth exponent shows up in the fit.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct ProbeReport {
    /// quantity(pe) / model(pe) per ladder rung.
    pub ratios: Vec<f64>,
    /// max(ratios) / min(ratios).
    pub spread: f64,
    /// Least-squares slope of ln(quantity) against ln(model).
    pub exponent: f64,
    /// RMS residual of the fit in ln space.
    pub residual: f64,
}

/// Runs a scaling probe over a descending ladder of error probabilities.
///
/// The ladder needs at least three rungs spanning at least three orders of
/// magnitude. Non-finite quantities are reported as errors naming the rung.
pub fn scaling_probe(
    ladder: &[f64],
    quantity: impl Fn(f64) -> Result<f64>,
    model: impl Fn(f64) -> f64,
) -> Result<ProbeReport> {
    if ladder.iter().any(|&pe| !(pe > 0.0 && pe < 0.5)) {
        return Err(Error::domain("ladder entries must lie in (0, 0.5)".to_string()));
    }
    let ln_ladder: Vec<f64> = ladder.iter().map(|&pe| -pe.ln()).collect();
    scaling_probe_ln(
        &ln_ladder,
        |ln_inv_pe| quantity((-ln_inv_pe).exp()),
        |ln_inv_pe| model((-ln_inv_pe).exp()),
    )
}

/// Log-domain scaling probe: the ladder carries `ln(1/pe)` values
/// (ascending), so targets far beyond the f64 underflow point are
/// expressible. The quantity and model receive `ln(1/pe)`.
pub fn scaling_probe_ln(
    ladder_ln_inv_pe: &[f64],
    quantity: impl Fn(f64) -> Result<f64>,
    model: impl Fn(f64) -> f64,
) -> Result<ProbeReport> {
    let ladder = ladder_ln_inv_pe;
    if ladder.len() < 3 {
        return Err(Error::domain(format!(
            "ladder needs >= 3 rungs, got {}",
            ladder.len()
        )));
    }
    if ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain(
            "ladder must be strictly ascending in ln(1/pe)".to_string(),
        ));
    }
    if ladder[ladder.len() - 1] - ladder[0] < 3.0 * std::f64::consts::LN_10 {
        return Err(Error::domain(
            "ladder must span at least three orders of magnitude".to_string(),
        ));
    }
    let mut ratios = Vec::with_capacity(ladder.len());
    let mut xs = Vec::with_capacity(ladder.len());
    let mut ys = Vec::with_capacity(ladder.len());
    for &l in ladder {
        let q = quantity(l)?;
        let m = model(l);
        if !q.is_finite() || !m.is_finite() || q <= 0.0 || m <= 0.0 {
            return Err(Error::domain(format!(
                "non-finite or non-positive probe values at ln(1/pe) = {l}: quantity {q}, model {m}"
            )));
        }
        ratios.push(q / m);
        xs.push(m.ln());
        ys.push(q.ln());
    }
    let spread = ratios.iter().copied().fold(f64::MIN, f64::max)
        / ratios.iter().copied().fold(f64::MAX, f64::min);
    let (exponent, residual) = fit_line(&xs, &ys);
    Ok(ProbeReport {
        ratios,
        spread,
        exponent,
        residual,
    })
}

fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    (slope, (rss / n).sqrt())
}

/// Slope of a quantity against `ln(1/pe)` (the natural axis for
/// transmit-power growth laws), by least squares over the ladder.
pub fn slope_vs_log_inv_pe(
    ladder: &[f64],
    quantity: impl Fn(f64) -> Result<f64>,
) -> Result<f64> {
    if ladder.len() < 2 {
        return Err(Error::domain("need >= 2 rungs".to_string()));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &pe in ladder {
        xs.push((1.0 / pe).ln());
        ys.push(quantity(pe)?);
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}
