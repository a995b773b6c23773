use super::{gamma_fn, integrate, QuadratureSpec};
use crate::error::{Error, Result};
use crate::model::Extent;

/// Parabolic cylinder function `D_ν(x)` for negative order `ν = −p`, `p > 0`.
///
/// Evaluated from `D₋ₚ(x) = e^{−x²/4}/Γ(p) ∫₀^∞ t^{p−1} e^{−t²/2 − xt} dt`.
pub fn parabolic_cylinder_d(order: f64, x: f64) -> Result<f64> {
    let (integral, log_prefactor) = reduced_integral(order, x)?;
    Ok(log_prefactor.exp() * integral / gamma_fn(-order)?)
}

/// `e^{x²/4} D₋ₚ(x)`, which stays representable where `D₋ₚ` itself
/// underflows (large positive `x`).
pub fn parabolic_cylinder_d_scaled(order: f64, x: f64) -> Result<f64> {
    let (integral, log_prefactor) = reduced_integral(order, x)?;
    Ok((log_prefactor + 0.25 * x * x).exp() * integral / gamma_fn(-order)?)
}

/// Returns `(J, ln P)` with `D₋ₚ(x) = P·J/Γ(p)`.
fn reduced_integral(order: f64, x: f64) -> Result<(f64, f64)> {
    let p = -order;
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::domain(format!(
            "parabolic_cylinder_d supports negative orders only, got {order}"
        )));
    }
    if !x.is_finite() {
        return Err(Error::domain("parabolic_cylinder_d requires finite argument"));
    }
    // For x ≥ 0 the Gaussian prefactor is applied outside so deep tails keep
    // their relative accuracy; for x < 0 it is folded into the exponent to
    // avoid overflow of the bare integral.
    let shift = if x >= 0.0 { 0.0 } else { 0.25 * x * x };
    let spec = QuadratureSpec::relative(1e-13, Extent::Infinite);
    let integral = if p >= 1.0 {
        integrate(
            |t| t.powf(p - 1.0) * (-0.5 * t * t - x * t - shift).exp(),
            &spec,
        )?
        .value
    } else {
        // t = s^{1/p} removes the t^{p−1} endpoint singularity.
        let inv = 1.0 / p;
        integrate(
            |s| {
                let t = s.powf(inv);
                (-0.5 * t * t - x * t - shift).exp()
            },
            &spec,
        )?
        .value
            * inv
    };
    let log_prefactor = if x >= 0.0 { -0.25 * x * x } else { 0.0 };
    Ok((integral, log_prefactor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn order_minus_one_at_origin() {
        let d = parabolic_cylinder_d(-1.0, 0.0).unwrap();
        assert!(rel(d, (PI / 2.0).sqrt()) < 1e-12);
    }

    #[test]
    fn reference_values() {
        // Values from an independent arbitrary-precision implementation.
        assert!(rel(parabolic_cylinder_d(-2.0, 1.0).unwrap(), 0.268_157_041_991_744_17) < 1e-11);
        assert!(rel(parabolic_cylinder_d(-0.5, 2.0).unwrap(), 0.243_018_893_963_601_93) < 1e-11);
        assert!(rel(parabolic_cylinder_d(-3.0, -1.5).unwrap(), 7.098_558_063_370_524) < 1e-11);
    }

    #[test]
    fn large_argument_asymptote() {
        for p in [0.5, 1.0, 2.0] {
            let x: f64 = 20.0;
            let ratio = parabolic_cylinder_d(-p, x).unwrap() * x.powf(p) * (0.25 * x * x).exp();
            assert!((ratio - 1.0).abs() < 0.01, "p={p}: ratio {ratio}");
        }
    }

    #[test]
    fn scaled_form_survives_underflow() {
        let x = 30.0;
        let plain = parabolic_cylinder_d(-1.5, x).unwrap();
        let scaled = parabolic_cylinder_d_scaled(-1.5, x).unwrap();
        assert!(rel(plain * (0.25 * x * x).exp(), scaled) < 1e-12);
        let huge = parabolic_cylinder_d_scaled(-1.0, 700.0).unwrap();
        assert!(rel(huge * 700.0, 1.0) < 1e-5);
    }

    #[test]
    fn recurrence_in_order() {
        // D_{ν+1}(x) − x D_ν(x) + ν D_{ν−1}(x) = 0 with ν = −2.
        let x = 0.7;
        let dm1 = parabolic_cylinder_d(-1.0, x).unwrap();
        let dm2 = parabolic_cylinder_d(-2.0, x).unwrap();
        let dm3 = parabolic_cylinder_d(-3.0, x).unwrap();
        assert!((dm1 - x * dm2 - 2.0 * dm3).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_negative_order() {
        assert!(parabolic_cylinder_d(0.0, 1.0).is_err());
        assert!(parabolic_cylinder_d(1.5, 1.0).is_err());
    }
}
