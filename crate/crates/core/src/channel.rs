//! AWGN channel, modulation, and noise math.
//!
//! Maps transmit power to the hard-decision flip probability of the induced
//! binary symmetric channel and back: the Gaussian tail function with its
//! Mills-ratio sandwich, BPSK and Gray-mapped square-QAM bit-error
//! probabilities, the link-budget Eb/N0 equation, minimum constellation
//! sizing under a data-rate constraint, and the Shannon limit for the link.
//!
//! All quantities are SI. Conversions to dBm happen only at reporting
//! boundaries.

use crate::error::{Error, Result};
use statrs::function::erf;

/// Boltzmann constant in J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

/// AWGN channel parameters, in either abstract or physical form.
///
/// Abstract mode fixes the proportionality `Es/N0 = eta * P_T` and nothing
/// else. Physical mode derives Eb/N0 from carrier frequency, bandwidth,
/// temperature, power-law path loss, and distance.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    /// `Es/N0 = eta * P_T` with `eta` in 1/W.
    Abstract { eta: f64 },
    /// Thermal-noise link budget with power-law path loss.
    Physical {
        /// Carrier frequency in Hz.
        f_c: f64,
        /// Passband bandwidth in Hz (also the symbol rate).
        bandwidth: f64,
        /// Noise temperature in K.
        temperature: f64,
        /// Path-loss exponent (dimensionless).
        alpha: f64,
        /// Transmitter-receiver distance in m.
        distance: f64,
    },
}

impl ChannelSpec {
    pub fn abstract_eta(eta: f64) -> Result<Self> {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(Error::domain(format!("eta must be positive, got {eta}")));
        }
        Ok(ChannelSpec::Abstract { eta })
    }

    pub fn physical(
        f_c: f64,
        bandwidth: f64,
        temperature: f64,
        alpha: f64,
        distance: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("f_c", f_c),
            ("bandwidth", bandwidth),
            ("temperature", temperature),
            ("alpha", alpha),
            ("distance", distance),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(ChannelSpec::Physical {
            f_c,
            bandwidth,
            temperature,
            alpha,
            distance,
        })
    }

    /// Carrier wavelength in m (physical mode only). Always derived from
    /// `f_c`, never stored.
    pub fn wavelength(&self) -> Option<f64> {
        match self {
            ChannelSpec::Physical { f_c, .. } => Some(SPEED_OF_LIGHT / f_c),
            ChannelSpec::Abstract { .. } => None,
        }
    }

    /// Same spec at a different distance. No-op in abstract mode.
    pub fn with_distance(&self, distance: f64) -> Self {
        match *self {
            ChannelSpec::Physical {
                f_c,
                bandwidth,
                temperature,
                alpha,
                ..
            } => ChannelSpec::Physical {
                f_c,
                bandwidth,
                temperature,
                alpha,
                distance,
            },
            ref a => a.clone(),
        }
    }

    /// Far-field caveat: the power-law path loss model presumes
    /// `distance >> wavelength`. Returns a human-readable warning when the
    /// distance is within 10 wavelengths of the antenna.
    pub fn far_field_warning(&self) -> Option<String> {
        if let ChannelSpec::Physical { distance, .. } = self {
            let lam = self.wavelength().unwrap();
            if *distance < 10.0 * lam {
                return Some(format!(
                    "distance {distance} m is below 10 wavelengths ({} m); \
                     far-field path-loss model may not apply",
                    10.0 * lam
                ));
            }
        }
        None
    }
}

/// Constellation choice: BPSK (`M = 2`) or square QAM with `sqrt(M)` a
/// positive even integer (4, 16, 36, 64, ...).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModulationSpec {
    m: u64,
}

impl ModulationSpec {
    pub fn new(m: u64) -> Result<Self> {
        if m == 2 || is_square_of_even(m) {
            Ok(ModulationSpec { m })
        } else {
            Err(Error::domain(format!(
                "constellation size {m} is neither 2 nor the square of an even integer"
            )))
        }
    }

    pub fn bpsk() -> Self {
        ModulationSpec { m: 2 }
    }

    pub fn size(&self) -> u64 {
        self.m
    }

    /// Bits carried per constellation symbol.
    pub fn bits_per_symbol(&self) -> f64 {
        (self.m as f64).log2()
    }
}

fn is_square_of_even(m: u64) -> bool {
    let root = (m as f64).sqrt().round() as u64;
    root * root == m && root % 2 == 0 && root > 0
}

/// Selects the normalization of the square-QAM bit-error formula.
///
/// `Verbatim` evaluates the double sum exactly as printed in the source it
/// was taken from; `Corrected` divides by `sqrt(M)`, which is the
/// normalization that matches a Monte-Carlo simulation of Gray-mapped
/// square QAM (and reduces to the classical `Q(sqrt(2 Eb/N0))` at M = 4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QamNormalization {
    #[default]
    Verbatim,
    Corrected,
}

/// Tail probability of the standard normal distribution,
/// `Q(x) = P(Z > x)`.
///
/// Computed through the complementary error function; absolute accuracy is
/// well below 1e-12, which downstream bisections rely on.
pub fn q_function(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("q_function requires finite x, got {x}")));
    }
    Ok(0.5 * erf::erfc(x / std::f64::consts::SQRT_2))
}

/// Inverse of [`q_function`] on (0, 1).
pub fn q_inverse(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("q_inverse requires p in (0,1), got {p}")));
    }
    Ok(std::f64::consts::SQRT_2 * erf::erfc_inv(2.0 * p))
}

/// `ln Q(x)`, valid far beyond the underflow point of `Q` itself
/// (asymptotic tail expansion for large `x`); used by the log-domain
/// optimizer paths where target error probabilities are given as
/// `ln(1/pe)` and may lie below 1e-308.
pub fn ln_q(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("ln_q requires finite x, got {x}")));
    }
    if x <= 30.0 {
        return Ok(q_function(x)?.ln());
    }
    // Q(x) = phi(x)/x (1 - x^-2 + 3 x^-4 - 15 x^-6 + 105 x^-8 ...)
    let inv2 = 1.0 / (x * x);
    let series = 1.0 - inv2 * (1.0 - inv2 * (3.0 - inv2 * (15.0 - inv2 * 105.0)));
    Ok(-0.5 * x * x - x.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln() + series.ln())
}

/// Solves `ln Q(x) = ln_p` for `x > 0`; `ln_p` may be far below the f64
/// underflow range.
pub fn q_inverse_ln(ln_p: f64) -> Result<f64> {
    if !(ln_p < (0.5f64).ln()) {
        return Err(Error::domain(format!(
            "q_inverse_ln requires ln_p < ln(1/2), got {ln_p}"
        )));
    }
    if ln_p > (1e-250f64).ln() {
        return q_inverse(ln_p.exp());
    }
    // Newton iteration on ln Q; d/dx ln Q = -phi(x)/Q(x) ~ -(x + 1/x).
    let mut x = (-2.0 * ln_p).sqrt();
    for _ in 0..60 {
        let f = ln_q(x)? - ln_p;
        let step = f / (x + 1.0 / x);
        x += step;
        if step.abs() < 1e-12 * x {
            break;
        }
    }
    Ok(x)
}

/// Mills-ratio sandwich around `Q(x)` for positive `x`:
///
/// `e^(-x^2/2) / (sqrt(2 pi) (x + 1/x))  <=  Q(x)  <=  e^(-x^2/2) / (sqrt(2 pi) x)`.
pub fn q_sandwich(x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("q_sandwich requires x > 0, got {x}")));
    }
    let sqrt_2pi = (2.0 * std::f64::consts::PI).sqrt();
    let num = (-0.5 * x * x).exp();
    let lower = num / (sqrt_2pi * (x + 1.0 / x));
    let upper = num / (sqrt_2pi * x);
    Ok((lower, upper))
}

/// Hard-decision flip probability for BPSK at a given symbol SNR:
/// `p0 = Q(sqrt(2 Es/N0))`.
pub fn flip_prob_bpsk(es_n0: f64) -> Result<f64> {
    if !(es_n0 >= 0.0) || !es_n0.is_finite() {
        return Err(Error::domain(format!(
            "flip_prob_bpsk requires Es/N0 >= 0, got {es_n0}"
        )));
    }
    q_function((2.0 * es_n0).sqrt())
}

/// Gray-mapped square-QAM bit-error probability as a function of Eb/N0.
///
/// Evaluates the exact double sum over the per-bit error terms of the
/// underlying sqrt(M)-PAM constellations. With `Verbatim` normalization the
/// sum is taken as printed in its source; `Corrected` applies the
/// `1/sqrt(M)` prefactor that makes the expression agree with Gray-mapped
/// symbol simulation (see [`QamNormalization`]). The result is clamped to
/// [0, 1].
pub fn flip_prob_qam(m: ModulationSpec, eb_n0: f64, norm: QamNormalization) -> Result<f64> {
    if m.size() < 4 {
        return Err(Error::domain(
            "flip_prob_qam requires M >= 4; use flip_prob_bpsk for BPSK".to_string(),
        ));
    }
    if !(eb_n0 >= 0.0) || !eb_n0.is_finite() {
        return Err(Error::domain(format!(
            "flip_prob_qam requires Eb/N0 >= 0, got {eb_n0}"
        )));
    }
    let m_f = m.size() as f64;
    let sqrt_m = m_f.sqrt();
    let log2_sqrt_m = sqrt_m.log2().round() as i64;
    let mut total = 0.0;
    for k in 1..=log2_sqrt_m {
        let two_k_m1 = (1u64 << (k - 1)) as f64;
        let j_max = ((1.0 - 0.5f64.powi(k as i32)) * sqrt_m - 1.0).round() as i64;
        for j in 0..=j_max {
            let frac = (j as f64) * two_k_m1 / sqrt_m;
            let sign = if (frac.floor() as i64) % 2 == 0 { 1.0 } else { -1.0 };
            let weight = two_k_m1 - (frac + 0.5).floor();
            let arg = (2 * j + 1) as f64 * (3.0 * eb_n0 * m_f.log2() / (m_f - 1.0)).sqrt();
            total += sign * weight * 2.0 * q_function(arg)?;
        }
    }
    total /= log2_sqrt_m as f64;
    if let QamNormalization::Corrected = norm {
        total /= sqrt_m;
    }
    Ok(total.clamp(0.0, 1.0))
}

/// Received Eb/N0 for a physical link:
/// `P_T / (k T W (r / lambda)^alpha log2(M))`.
pub fn ebn0_from_system(p_t: f64, spec: &ChannelSpec, m: ModulationSpec) -> Result<f64> {
    let ChannelSpec::Physical {
        bandwidth,
        temperature,
        alpha,
        distance,
        ..
    } = spec
    else {
        return Err(Error::Mode(
            "ebn0_from_system requires a physical-mode channel spec".to_string(),
        ));
    };
    if !(p_t > 0.0) {
        return Err(Error::domain(format!("transmit power must be positive, got {p_t}")));
    }
    let lam = spec.wavelength().unwrap();
    let attenuation = (distance / lam).powf(*alpha);
    Ok(p_t / (BOLTZMANN * temperature * bandwidth * attenuation * m.bits_per_symbol()))
}

/// Smallest admissible constellation meeting a data-rate requirement:
/// the least `M` (2, or a square of an even integer) with
/// `M >= 2^(r_data / (w * rate))`.
pub fn min_constellation(r_data: f64, w: f64, rate: f64) -> Result<ModulationSpec> {
    if !(r_data > 0.0 && w > 0.0) {
        return Err(Error::domain("r_data and w must be positive".to_string()));
    }
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::domain(format!("rate must be in (0,1], got {rate}")));
    }
    let required = 2f64.powf(r_data / (w * rate));
    if required <= 2.0 {
        return Ok(ModulationSpec::bpsk());
    }
    // Smallest square of an even integer not below the requirement.
    let mut root = (required.sqrt().ceil() as u64).max(2);
    if root % 2 == 1 {
        root += 1;
    }
    ModulationSpec::new(root * root)
}

/// Minimum transmit power at which the AWGN capacity of the link supports
/// the requested data rate:
/// `P_T = k T W (r / lambda)^alpha (2^(r_data / W) - 1)`.
pub fn shannon_limit(spec: &ChannelSpec, r_data: f64) -> Result<f64> {
    let ChannelSpec::Physical {
        bandwidth,
        temperature,
        alpha,
        distance,
        ..
    } = spec
    else {
        return Err(Error::Mode(
            "shannon_limit requires a physical-mode channel spec".to_string(),
        ));
    };
    if !(r_data > 0.0) {
        return Err(Error::domain(format!("r_data must be positive, got {r_data}")));
    }
    let lam = spec.wavelength().unwrap();
    let attenuation = (distance / lam).powf(*alpha);
    Ok(BOLTZMANN * temperature * bandwidth * attenuation * (2f64.powf(r_data / bandwidth) - 1.0))
}

/// Watts to dBm. Reporting-boundary helper only.
pub fn watts_to_dbm(p: f64) -> f64 {
    10.0 * (p / 1e-3).log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec_60ghz(distance: f64) -> ChannelSpec {
        ChannelSpec::physical(60e9, 7e9, 300.0, 3.0, distance).unwrap()
    }

    #[test]
    fn q_at_zero_is_half() {
        assert!((q_function(0.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn q_at_two_matches_gaussian_tail() {
        // Reference value from numerical integration of the Gaussian tail.
        assert!((q_function(2.0).unwrap() - 0.0227501).abs() < 1e-6);
    }

    #[test]
    fn q_monotone_and_complementary() {
        let q2 = q_function(2.0).unwrap();
        let q3 = q_function(3.0).unwrap();
        assert!(0.0 < q3 && q3 < q2);
        for x in [-3.0, -0.7, 0.0, 1.3, 4.0] {
            let s = q_function(x).unwrap() + q_function(-x).unwrap();
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn q_rejects_non_finite() {
        assert!(q_function(f64::NAN).is_err());
        assert!(q_function(f64::INFINITY).is_err());
    }

    #[test]
    fn q_inverse_round_trip() {
        for p in [0.4, 1e-2, 1e-6, 1e-12] {
            let x = q_inverse(p).unwrap();
            assert!((q_function(x).unwrap() - p).abs() / p < 1e-10);
        }
    }

    #[test]
    fn ln_q_matches_exact_and_extends() {
        // Continuity across the series switch at x = 30.
        for x in [1.0, 5.0, 20.0, 29.9] {
            let exact = q_function(x).unwrap().ln();
            assert!((ln_q(x).unwrap() - exact).abs() < 1e-12);
        }
        let below = ln_q(30.0 - 1e-9).unwrap();
        let above = ln_q(30.0 + 1e-9).unwrap();
        assert!((below - above).abs() < 1e-7);
        // Deep tail round trip: ln Q down to -25000.
        for ln_p in [-100.0, -1000.0, -5000.0, -25000.0] {
            let x = q_inverse_ln(ln_p).unwrap();
            assert!((ln_q(x).unwrap() - ln_p).abs() / ln_p.abs() < 1e-10, "ln_p={ln_p}");
        }
        // Agreement with the direct inverse in the representable range.
        let x1 = q_inverse_ln((1e-12f64).ln()).unwrap();
        let x2 = q_inverse(1e-12).unwrap();
        assert!((x1 - x2).abs() < 1e-9);
    }

    #[test]
    fn sandwich_at_two() {
        let (lo, hi) = q_sandwich(2.0).unwrap();
        assert!((lo - 0.021597).abs() < 1e-5);
        assert!((hi - 0.026996).abs() < 1e-5);
        let q = q_function(2.0).unwrap();
        assert!(lo <= q && q <= hi);
    }

    #[test]
    fn sandwich_strict_order() {
        let (lo, hi) = q_sandwich(1.0).unwrap();
        assert!(lo < hi);
    }

    #[test]
    fn sandwich_ratio_at_large_x() {
        let (lo, hi) = q_sandwich(10.0).unwrap();
        assert!((lo / hi - (1.0 - 1.0 / 100.0)).abs() < 1e-3);
    }

    #[test]
    fn sandwich_rejects_nonpositive() {
        assert!(q_sandwich(0.0).is_err());
        assert!(q_sandwich(-1.0).is_err());
    }

    #[test]
    fn bpsk_flip_probability() {
        assert!((flip_prob_bpsk(0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((flip_prob_bpsk(2.0).unwrap() - 0.0227501).abs() < 1e-6);
        // eta * P_T substitution is definitional.
        let eta = 1.0;
        let p_t = 2.0;
        assert_eq!(flip_prob_bpsk(eta * p_t).unwrap(), flip_prob_bpsk(2.0).unwrap());
        assert!(flip_prob_bpsk(-0.5).is_err());
    }

    #[test]
    fn bpsk_flip_monotone() {
        let mut prev = flip_prob_bpsk(0.0).unwrap();
        for i in 1..100 {
            let p = flip_prob_bpsk(i as f64 * 0.1).unwrap();
            assert!(p < prev);
            prev = p;
        }
    }

    #[test]
    fn qam4_verbatim_is_twice_bpsk_expression() {
        for eb_n0 in [0.5, 1.0, 4.0, 10.0] {
            let p = flip_prob_qam(ModulationSpec::new(4).unwrap(), eb_n0, QamNormalization::Verbatim)
                .unwrap();
            let expect = (2.0 * q_function((2.0 * eb_n0).sqrt()).unwrap()).clamp(0.0, 1.0);
            assert!((p - expect).abs() < 1e-14, "eb_n0={eb_n0}: {p} vs {expect}");
        }
    }

    #[test]
    fn qam4_corrected_matches_gray_qpsk() {
        let p = flip_prob_qam(ModulationSpec::new(4).unwrap(), 3.0, QamNormalization::Corrected)
            .unwrap();
        let expect = q_function((2.0 * 3.0f64).sqrt()).unwrap();
        assert!((p - expect).abs() < 1e-14);
    }

    #[test]
    fn qam_vanishes_at_high_snr() {
        let p = flip_prob_qam(ModulationSpec::new(16).unwrap(), 1e4, QamNormalization::Verbatim)
            .unwrap();
        assert!(p < 1e-30);
    }

    #[test]
    fn qam_monotone_in_snr() {
        let m = ModulationSpec::new(16).unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..60 {
            let p = flip_prob_qam(m, i as f64 * 0.5, QamNormalization::Corrected).unwrap();
            assert!(p <= prev + 1e-15);
            prev = p;
        }
    }

    #[test]
    fn qam_rejects_bpsk_and_non_square() {
        assert!(flip_prob_qam(ModulationSpec::bpsk(), 1.0, QamNormalization::Verbatim).is_err());
        assert!(ModulationSpec::new(8).is_err());
        assert!(ModulationSpec::new(9).is_err());
    }

    #[test]
    fn ebn0_link_budget() {
        let spec = spec_60ghz(1.0);
        let eb = ebn0_from_system(1e-3, &spec, ModulationSpec::new(4).unwrap()).unwrap();
        assert!((eb - 2.157).abs() / 2.157 < 5e-3, "got {eb}");
        // Linearity in transmit power.
        let eb2 = ebn0_from_system(2e-3, &spec, ModulationSpec::new(4).unwrap()).unwrap();
        assert!((eb2 / eb - 2.0).abs() < 1e-12);
    }

    #[test]
    fn ebn0_distance_independent_at_zero_alpha() {
        let near = ChannelSpec::physical(60e9, 7e9, 300.0, 1e-300, 1.0).unwrap();
        let far = near.with_distance(100.0);
        let m = ModulationSpec::bpsk();
        let a = ebn0_from_system(1e-3, &near, m).unwrap();
        let b = ebn0_from_system(1e-3, &far, m).unwrap();
        // alpha -> 0 limit: (r/lambda)^alpha -> 1.
        assert!((a / b - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ebn0_requires_physical_mode() {
        let spec = ChannelSpec::abstract_eta(1.0).unwrap();
        assert!(matches!(
            ebn0_from_system(1.0, &spec, ModulationSpec::bpsk()),
            Err(Error::Mode(_))
        ));
    }

    #[test]
    fn constellation_selection() {
        assert_eq!(min_constellation(7e9, 7e9, 0.5).unwrap().size(), 4);
        assert_eq!(min_constellation(7e9, 7e9, 1.0).unwrap().size(), 2);
        assert_eq!(min_constellation(7e9, 7e9, 1.0 / 3.0).unwrap().size(), 16);
    }

    #[test]
    fn constellation_is_minimal() {
        for (r_data, w, rate) in [
            (7e9, 7e9, 0.5),
            (7e9, 7e9, 0.25),
            (1e10, 7e9, 0.4),
            (2e9, 7e9, 0.9),
        ] {
            let m = min_constellation(r_data, w, rate).unwrap();
            let required = 2f64.powf(r_data / (w * rate));
            assert!(m.size() as f64 >= required);
            // The next smaller admissible size must violate the requirement.
            let smaller = match m.size() {
                2 => None,
                4 => Some(2),
                s => {
                    let root = (s as f64).sqrt() as u64 - 2;
                    Some(root * root)
                }
            };
            if let Some(s) = smaller {
                assert!((s as f64) < required, "M={} not minimal", m.size());
            }
        }
    }

    #[test]
    fn shannon_limit_matches_closed_form() {
        let spec = spec_60ghz(1.0);
        // r_data = W makes the required SNR exactly one.
        let p = shannon_limit(&spec, 7e9).unwrap();
        let ktw = BOLTZMANN * 300.0 * 7e9;
        let atten = (1.0f64 / 5e-3).powi(3);
        assert!((p - ktw * atten).abs() / p < 1e-12);
        assert!((p - 2.318e-4).abs() / 2.318e-4 < 5e-3, "got {p}");
    }

    #[test]
    fn shannon_limit_capacity_equality() {
        let spec = spec_60ghz(2.5);
        for r_data in [1e9, 7e9, 2e10] {
            let p = shannon_limit(&spec, r_data).unwrap();
            let lam = spec.wavelength().unwrap();
            let snr = p / (BOLTZMANN * 300.0 * 7e9 * (2.5f64 / lam).powi(3));
            let capacity = 7e9 * (1.0 + snr).log2();
            assert!((capacity - r_data).abs() / r_data < 1e-9);
        }
    }

    #[test]
    fn shannon_limit_linear_in_attenuation() {
        let spec1 = spec_60ghz(1.0);
        let spec2 = spec_60ghz(2.0f64.powf(1.0 / 3.0)); // doubles (r/lambda)^3
        let p1 = shannon_limit(&spec1, 7e9).unwrap();
        let p2 = shannon_limit(&spec2, 7e9).unwrap();
        assert!((p2 / p1 - 2.0).abs() < 1e-9);
    }

    #[test]
    fn far_field_warning_fires_close_in() {
        let spec = spec_60ghz(0.01); // 2 wavelengths at 60 GHz
        assert!(spec.far_field_warning().is_some());
        assert!(spec_60ghz(3.2).far_field_warning().is_none());
    }

    #[test]
    fn dbm_conversion() {
        assert!((watts_to_dbm(1e-3) - 0.0).abs() < 1e-12);
        assert!((watts_to_dbm(1.0) - 30.0).abs() < 1e-12);
    }
}
