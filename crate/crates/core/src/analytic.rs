//! Closed-form reference curves: the leading high-temperature behaviour of
//! the tight-binding chain and the conformal-field-theory description of the
//! low-temperature regime.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Relative accuracy demanded from the CFT phase integral.
pub const CFT_REL_TOL: f64 = 1e-8;

/// `𝒜 t² β² / 2`, where the area `𝒜` counts bonds cut by the boundary of
/// `A` (2 for an interior interval of a chain). Valid for `βt ≪ 1`.
pub fn high_t_delta_s2(t: f64, beta: f64, area: f64) -> f64 {
    if (beta * t).abs() >= 1.0 {
        log::warn!("high-temperature law used at βt = {}", beta * t);
    }
    area * t * t * beta * beta / 2.0
}

/// `𝒜 t² β² / 4`, half of [`high_t_delta_s2`].
pub fn high_t_delta_sm(t: f64, beta: f64, area: f64) -> f64 {
    if (beta * t).abs() >= 1.0 {
        log::warn!("high-temperature law used at βt = {}", beta * t);
    }
    area * t * t * beta * beta / 4.0
}

/// Parameters of the cylinder correlator. `luttinger` only enters the
/// zero-temperature asymptote; the correlator itself is the free-fermion one.
/// The description holds for temperatures well below the bandwidth.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CftParams {
    pub beta: f64,
    pub len_a: f64,
    pub luttinger: f64,
}

impl CftParams {
    pub fn new(beta: f64, len_a: f64, luttinger: f64) -> Result<Self> {
        if !(beta > 0.0) || !(len_a > 0.0) || !(luttinger > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "CFT parameters must be positive (β = {beta}, L_A = {len_a}, K = {luttinger})"
            )));
        }
        Ok(Self {
            beta,
            len_a,
            luttinger,
        })
    }

    pub fn base(&self) -> f64 {
        cft_base(self.beta, self.len_a)
    }

    pub fn delta_s2(&self) -> Result<f64> {
        cft_delta_s2(self.beta, self.len_a)
    }

    pub fn t0_asymptote(&self) -> Result<f64> {
        cft_t0_asymptote(self.len_a, self.luttinger)
    }
}

/// `(2β/π) tanh(π L_A / 2β)`; tends to `L_A` as `β → ∞` and to `2β/π`
/// for `β ≪ L_A`.
pub fn cft_base(beta: f64, len_a: f64) -> f64 {
    if beta.is_infinite() {
        return len_a;
    }
    2.0 * beta / PI * (PI * len_a / (2.0 * beta)).tanh()
}

fn checked_base(beta: f64, len_a: f64) -> Result<f64> {
    if !(beta > 0.0) || !(len_a > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "β = {beta} and L_A = {len_a} must be positive"
        )));
    }
    let base = cft_base(beta, len_a);
    if !(base > f64::MIN_POSITIVE) || !base.is_finite() {
        return Err(Error::Numerical(format!("correlator base {base} outside range")));
    }
    Ok(base)
}

/// `⟨V₁V₂V₃V₄⟩_{2β} = base^{−α₁₂²/π²}`.
pub fn cft_four_point(alpha12: f64, beta: f64, len_a: f64) -> Result<f64> {
    let base = checked_base(beta, len_a)?;
    Ok(base.powf(-alpha12 * alpha12 / (PI * PI)))
}

/// `−log ∫∫ dα₁dα₂/(2π)² ⟨V₁V₂V₃V₄⟩`, reduced to
/// `∫_{−2π}^{2π} du f(u)(2π − |u|)/(2π)²` and evaluated by double-exponential
/// quadrature. Requires `base ≥ 1`.
pub fn cft_delta_s2(beta: f64, len_a: f64) -> Result<f64> {
    let base = checked_base(beta, len_a)?;
    if base < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "CFT correlator base {base:.4} < 1 is outside its validity domain"
        )));
    }
    let rate = base.ln() / (PI * PI);
    let f = |u: f64| (-rate * u * u).exp() * (2.0 * PI - u);
    let out = quadrature::integrate(f, 0.0, 2.0 * PI, 1e-14);
    let integral = 2.0 * out.integral / (4.0 * PI * PI);
    if !(integral > 0.0) || out.error_estimate > CFT_REL_TOL * out.integral {
        return Err(Error::Numerical(format!(
            "phase integral did not converge (estimate {:.3e}, error {:.3e})",
            out.integral, out.error_estimate
        )));
    }
    Ok(-integral.ln())
}

/// `½ log((2K/π) log L_A)`, the zero-temperature number entropy of a
/// Luttinger liquid.
pub fn cft_t0_asymptote(len_a: f64, luttinger: f64) -> Result<f64> {
    let arg = 2.0 * luttinger / PI * len_a.ln();
    if !(arg > 0.0) || !arg.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "double-log asymptote undefined for L_A = {len_a}, K = {luttinger}"
        )));
    }
    Ok(0.5 * arg.ln())
}

/// Reference fit of the ground-state number entropy of the half-filled
/// tight-binding chain, `½ log(1.731 (log L_A + 2.269))`.
pub fn number_entropy_reference(len_a: f64) -> f64 {
    0.5 * (1.731 * (len_a.ln() + 2.269)).ln()
}

/// Reference fit of the ground-state entanglement entropy of the same
/// interval, `⅓ log L_A + 0.726`.
pub fn entanglement_entropy_reference(len_a: f64) -> f64 {
    len_a.ln() / 3.0 + 0.726
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn high_t_values() {
        assert!((high_t_delta_s2(1.0, 0.1, 2.0) - 0.01).abs() < 1e-15);
        assert!((high_t_delta_sm(1.0, 0.1, 2.0) - 0.005).abs() < 1e-15);
        assert_eq!(high_t_delta_s2(1.0, 0.1, 0.0), 0.0);
    }

    #[test]
    fn base_limits() {
        assert!((cft_base(1e9, 100.0) - 100.0).abs() < 1e-9);
        assert!((cft_base(2.0, 1e4) - 4.0 / PI).abs() < 1e-12);
        assert_eq!(cft_base(f64::INFINITY, 50.0), 50.0);
    }

    #[test]
    fn four_point_normalized_and_even() {
        assert_eq!(cft_four_point(0.0, 3.0, 40.0).unwrap(), 1.0);
        let a = cft_four_point(1.3, 3.0, 40.0).unwrap();
        let b = cft_four_point(-1.3, 3.0, 40.0).unwrap();
        assert_eq!(a, b);
        assert!(a < 1.0);
    }

    #[test]
    fn asymptote_value_and_growth() {
        let v = cft_t0_asymptote(100.0, 1.0).unwrap();
        assert!((v - 0.5 * (2.0 / PI * 100f64.ln()).ln()).abs() < 1e-15);
        assert!((v - 0.5378).abs() < 1e-4);
        let d = cft_t0_asymptote(1e4, 1.0).unwrap() - v;
        assert!((d - 0.5 * 2f64.ln()).abs() < 1e-14);
        assert!(cft_t0_asymptote(1.0, 1.0).is_err());
    }

    #[test]
    fn delta_s2_rejects_small_base() {
        assert!(cft_delta_s2(0.5, 100.0).is_err());
        assert!(cft_delta_s2(10.0, 100.0).unwrap() > 0.0);
    }

    #[test]
    fn reference_fits() {
        assert!((number_entropy_reference(100.0) - 1.238).abs() < 5e-4);
        assert!(entanglement_entropy_reference(100.0) > number_entropy_reference(100.0));
    }
}

#[cfg(test)]
mod oracles {
    use super::*;
    use statrs::function::erf::erf;

    /// `∫₀^{2π} e^{−cu²}(2π − u) du` in closed form.
    fn weighted_gaussian(c: f64) -> f64 {
        let two_pi = 2.0 * PI;
        two_pi * PI.sqrt() / (2.0 * c.sqrt()) * erf(two_pi * c.sqrt())
            - (1.0 - (-two_pi * two_pi * c).exp()) / (2.0 * c)
    }

    #[test]
    fn phase_integral_matches_error_function_form() {
        for (beta, la) in [(3.0, 100.0), (20.0, 100.0), (1e3, 50.0), (f64::INFINITY, 1e6)] {
            let c = cft_base(beta, la).ln() / (PI * PI);
            let expected = -(2.0 * weighted_gaussian(c) / (4.0 * PI * PI)).ln();
            let got = cft_delta_s2(beta, la).unwrap();
            assert!((got - expected).abs() < 1e-10 * expected.abs().max(1.0), "{got} vs {expected}");
        }
    }

    #[test]
    fn zero_temperature_double_log_slope() {
        // slope of ΔS₂ against log log L_A tends to ½ for very large L_A
        let at = |la: f64| (cft_delta_s2(f64::INFINITY, la).unwrap(), la.ln().ln());
        let (y1, x1) = at(1e100);
        let (y2, x2) = at(1e300);
        assert!(((y2 - y1) / (x2 - x1) - 0.5).abs() < 0.01);
        // the approach is slow: over 10²..10⁶ the secant slope is still ≈ 0.44
        let (y1, x1) = at(1e2);
        let (y2, x2) = at(1e6);
        assert!(((y2 - y1) / (x2 - x1) - 0.4436).abs() < 1e-3);
    }
}
