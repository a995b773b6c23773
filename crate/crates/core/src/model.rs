//! Physical parameters, bare Landau coefficients and the Gaussian layer.
//!
//! All momentum integrals are written in the dimensionless variable
//! `x = qξ` with a UV cutoff `x_c`. Extensive quantities carry a factor
//! `V = L^d`; when `L` is infinite they are reported per unit volume.

use std::f64::consts::PI;
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::selfconsist::FluctuationState;
use crate::specfun::{gamma_fn, integrate, integrate_interval, QuadratureSpec};

/// A length or cutoff that may be infinite.
///
/// Serialized as a JSON number, or as the string `"inf"` when infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extent {
    Finite(f64),
    Infinite,
}

impl Extent {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Extent::Infinite)
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            Extent::Finite(v) => Some(v),
            Extent::Infinite => None,
        }
    }

    /// `f64::INFINITY` for the infinite variant.
    pub fn value(&self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl From<f64> for Extent {
    fn from(v: f64) -> Self {
        if v.is_infinite() && v > 0.0 {
            Extent::Infinite
        } else {
            Extent::Finite(v)
        }
    }
}

impl fmt::Display for Extent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extent::Finite(v) => write!(f, "{v}"),
            Extent::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Extent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Extent::Finite(v) => s.serialize_f64(v),
            Extent::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Extent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct ExtentVisitor;

        impl<'de> Visitor<'de> for ExtentVisitor {
            type Value = Extent;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a positive number or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Extent, E> {
                Ok(Extent::from(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Extent, E> {
                Ok(Extent::Finite(v as f64))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Extent, E> {
                Ok(Extent::Finite(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Extent, E> {
                match v.trim().to_ascii_lowercase().as_str() {
                    "inf" | "infinity" | "infinite" => Ok(Extent::Infinite),
                    other => other
                        .parse::<f64>()
                        .map(Extent::from)
                        .map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }

        d.deserialize_any(ExtentVisitor)
    }
}

fn default_cutoff() -> Extent {
    Extent::Finite(1.0)
}

fn default_kb() -> f64 {
    1.0
}

/// The full parameter set of one system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Slope of the quadratic coefficient, `a(T) = a0 (T − Tc)`.
    pub a0: f64,
    /// Mean-field critical temperature.
    #[serde(rename = "Tc")]
    pub tc: f64,
    /// Quartic coefficient `b(Tc)`.
    pub b: f64,
    /// Sextic coefficient, strictly positive.
    pub u0: f64,
    /// Coherence length.
    pub xi0: f64,
    /// Space dimension, `0 < d ≤ 4` for the fluctuation solvers.
    pub d: f64,
    /// Linear sample size.
    #[serde(rename = "L")]
    pub l: Extent,
    /// Dimensionless UV cutoff on `ξ|q|`.
    #[serde(default = "default_cutoff")]
    pub x_c: Extent,
    #[serde(rename = "kB", default = "default_kb")]
    pub kb: f64,
}

impl ModelParams {
    /// Checks the structural invariants. `u0 = 0` is accepted as the
    /// fluctuation-free limit.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("a0", self.a0),
            ("Tc", self.tc),
            ("xi0", self.xi0),
            ("kB", self.kb),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(self.u0 >= 0.0 && self.u0.is_finite()) {
            return Err(Error::invalid(format!("u0 must be non-negative, got {}", self.u0)));
        }
        if !self.b.is_finite() {
            return Err(Error::invalid("b must be finite"));
        }
        if !(self.d > 0.0 && self.d.is_finite()) {
            return Err(Error::invalid(format!("d must be positive, got {}", self.d)));
        }
        if let Extent::Finite(l) = self.l {
            if !(l > 0.0) {
                return Err(Error::invalid(format!("L must be positive, got {l}")));
            }
        }
        if let Extent::Finite(x) = self.x_c {
            if !(x > 0.0) {
                return Err(Error::invalid(format!("x_c must be positive, got {x}")));
            }
        }
        Ok(())
    }

    /// `V = L^d`, or `None` for an infinite sample.
    pub fn volume(&self) -> Option<f64> {
        self.l.finite().map(|l| l.powf(self.d))
    }

    /// Volume factor for extensive quantities: `L^d`, or 1 (per unit volume)
    /// when `L` is infinite.
    pub fn extensive_factor(&self) -> f64 {
        self.volume().unwrap_or(1.0)
    }

    /// `ε = (T − Tc)/Tc`.
    pub fn reduced_temperature(&self, t: f64) -> f64 {
        (t - self.tc) / self.tc
    }

    /// Hex SHA-256 digest of the canonical JSON form.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("ModelParams serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: Self = serde_json::from_str(s).map_err(|e| Error::invalid(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }
}

/// ħ, carrier mass, carrier charge and μ₀. Natural units by default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub mass: f64,
    pub charge: f64,
    pub mu0: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            charge: 1.0,
            mu0: 1.0,
        }
    }
}

impl PhysicalConstants {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("hbar", self.hbar),
            ("mass", self.mass),
            ("charge", self.charge),
            ("mu0", self.mu0),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Ferromagnet convention `b(Tc) = kB Tc³ / 12T²` evaluated at `T = Tc`.
pub fn quartic_landau_preset(kb: f64, tc: f64) -> f64 {
    kb * tc / 12.0
}

/// Superconductor convention `a0²/b(Tc) = 8π²ν / 7ζ(3)`, solved for `b`.
pub fn quartic_bcs_preset(a0: f64, nu: f64) -> f64 {
    const ZETA3: f64 = 1.202_056_903_159_594_3;
    a0 * a0 * 7.0 * ZETA3 / (8.0 * PI * PI * nu)
}

/// `a(T) = a0 (T − Tc)`.
pub fn bare_quadratic(params: &ModelParams, t: f64) -> f64 {
    params.a0 * (t - params.tc)
}

/// The three radial integrals over `x = qξ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DimensionIntegral {
    /// `∫ x^{d−1} / (1+x²)² dx`
    I2,
    /// `∫ x^{d−1} / (1+x²) dx`
    I1,
    /// `∫ x^{d+1} / (1+x²)³ dx`
    I3,
}

impl DimensionIntegral {
    /// (power of x in the numerator, power of (1+x²) in the denominator)
    fn shape(self, d: f64) -> (f64, i32) {
        match self {
            DimensionIntegral::I2 => (d - 1.0, 2),
            DimensionIntegral::I1 => (d - 1.0, 1),
            DimensionIntegral::I3 => (d + 1.0, 3),
        }
    }

    /// Largest `d` (exclusive) for which the infinite-range integral converges.
    pub fn convergence_limit(self) -> f64 {
        match self {
            DimensionIntegral::I1 => 2.0,
            DimensionIntegral::I2 | DimensionIntegral::I3 => 4.0,
        }
    }
}

fn radial_spec() -> QuadratureSpec {
    QuadratureSpec::relative(1e-13, Extent::Infinite)
}

/// Radial integral of the requested kind up to `x_c`.
pub fn dimension_integral(kind: DimensionIntegral, d: f64, x_c: Extent) -> Result<f64> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::domain(format!("dimension must be positive, got {d}")));
    }
    let (alpha, k) = kind.shape(d);
    let spec = radial_spec();
    let h = |x2: f64| (1.0 + x2).powi(-k);

    // ∫₀^u x^α h(x²) dx with s = x^{α+1}, which removes the x^α endpoint behaviour.
    let head = |u: f64| -> Result<f64> {
        let inv = 1.0 / (alpha + 1.0);
        let est = integrate_interval(|s| h(s.powf(2.0 * inv)), 0.0, u.powf(alpha + 1.0), &spec)?;
        Ok(est.value * inv)
    };

    match x_c {
        Extent::Finite(xc) => {
            if !(xc > 0.0) {
                return Err(Error::domain(format!("cutoff must be positive, got {xc}")));
            }
            if xc <= 1.0 {
                head(xc)
            } else {
                let tail =
                    integrate_interval(|x| x.powf(alpha) * h(x * x), 1.0, xc, &spec)?.value;
                Ok(head(1.0)? + tail)
            }
        }
        Extent::Infinite => {
            if d >= kind.convergence_limit() {
                return Err(Error::Divergent {
                    what: format!(
                        "{kind:?} at d = {d} diverges at large x (needs d < {}); set a finite x_c",
                        kind.convergence_limit()
                    ),
                });
            }
            // x = 1/y on [1, ∞): ∫₀¹ y^e / (1+y²)^k dy, e = 2k − α − 2 > −1.
            let e = 2.0 * k as f64 - alpha - 2.0;
            let inv = 1.0 / (e + 1.0);
            let tail = integrate_interval(|s| h(s.powf(2.0 * inv)), 0.0, 1.0, &spec)?.value * inv;
            Ok(head(1.0)? + tail)
        }
    }
}

/// `2^{d−1} π^{d/2} Γ(d/2)`, the inverse of `ℜ_d / (2π)^d`.
fn angular_denominator(d: f64) -> Result<f64> {
    Ok(2f64.powf(d - 1.0) * PI.powf(0.5 * d) * gamma_fn(0.5 * d)?)
}

/// Surface of the unit sphere in `d` dimensions, `2π^{d/2}/Γ(d/2)`.
pub fn sphere_surface(d: f64) -> Result<f64> {
    Ok(2.0 * PI.powf(0.5 * d) / gamma_fn(0.5 * d)?)
}

/// Amplitude `K_d` of the anharmonic correction.
pub fn coefficient_k(params: &ModelParams) -> Result<f64> {
    let i2 = dimension_integral(DimensionIntegral::I2, params.d, params.x_c)?;
    Ok(45.0 * params.u0 * params.kb * params.kb * params.xi0.powf(-params.d)
        / (angular_denominator(params.d)? * params.a0 * params.a0)
        * i2)
}

/// Amplitude `𝒦_d` of the harmonic correction.
pub fn coefficient_kcal(params: &ModelParams) -> Result<f64> {
    let i1 = dimension_integral(DimensionIntegral::I1, params.d, params.x_c)?;
    Ok(15.0 * params.u0 * params.kb * params.xi0.powf(-params.d)
        / (angular_denominator(params.d)? * params.a0)
        * i1)
}

/// Heat-capacity amplitude `κ_d` (extensive).
pub fn coefficient_kappa(params: &ModelParams) -> Result<f64> {
    let i2 = dimension_integral(DimensionIntegral::I2, params.d, params.x_c)?;
    Ok(params.kb * params.extensive_factor() * params.xi0.powf(-params.d)
        / (angular_denominator(params.d)? * params.a0 * params.a0)
        * i2)
}

/// `u0` that gives the fixed-point amplitude `K_d/V = amplitude`.
pub fn u0_for_amplitude(params: &ModelParams, amplitude: f64) -> Result<f64> {
    let v = params
        .volume()
        .ok_or_else(|| Error::invalid("a finite L is needed to set K_d/V"))?;
    let unit = coefficient_k(&ModelParams { u0: 1.0, ..*params })?;
    Ok(amplitude * v / unit)
}

/// Gaussian free energy with mode weight `a0(T − Tc) + Ω + q²`, integrated
/// up to `Λ = x_c/ξ0`.
pub fn gaussian_free_energy(params: &ModelParams, t: f64, omega: f64) -> Result<f64> {
    params.validate()?;
    if !(t > 0.0) {
        return Err(Error::domain(format!("temperature must be positive, got {t}")));
    }
    let x_c = params.x_c.finite().ok_or_else(|| Error::Divergent {
        what: "the Gaussian free energy needs a finite momentum cutoff".into(),
    })?;
    let mass = bare_quadratic(params, t) + omega;
    if !(mass > 0.0) {
        return Err(Error::domain(format!(
            "non-positive Gaussian mode weight {mass} at T = {t}"
        )));
    }
    let lambda = x_c / params.xi0;
    let beta = 1.0 / (params.kb * t);
    let d = params.d;
    let integrand = |q: f64| (PI / (beta * (mass + q * q))).ln();
    let spec = QuadratureSpec::default().with_tolerances(1e-300, 1e-12);
    let radial = if d < 1.0 {
        let inv = 1.0 / d;
        integrate_interval(|s| integrand(s.powf(inv)), 0.0, lambda.powf(d), &spec)?.value * inv
    } else {
        integrate(
            |q| q.powf(d - 1.0) * integrand(q),
            &QuadratureSpec {
                upper_limit: Extent::Finite(lambda),
                ..spec
            },
        )?
        .value
    };
    let measure = sphere_surface(d)? / (2.0 * PI).powf(d);
    Ok(-params.kb * t * params.extensive_factor() / 2.0 * measure * radial)
}

/// Singular part of the Gaussian heat capacity,
/// `κ_d (T/Tc)² (a0 + Ω′)² (ε + Ω/(a0Tc))^{d/2−2}`.
pub fn heat_capacity_gaussian(params: &ModelParams, t: f64, fluct: &FluctuationState) -> Result<f64> {
    let gap = fluct.gap_at(params, t);
    let p = 0.5 * params.d - 2.0;
    if p != 0.0 && !(gap > 0.0) {
        return Err(Error::domain(format!(
            "ε + Ω/(a0Tc) = {gap} must be positive for the heat capacity"
        )));
    }
    let kappa = coefficient_kappa(params)?;
    let ratio = t / params.tc;
    let slope = params.a0 + fluct.domega_dt;
    Ok(kappa * ratio * ratio * slope * slope * gap.powf(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(d: f64) -> ModelParams {
        ModelParams {
            a0: 1.0,
            tc: 1.0,
            b: 1.0,
            u0: 1.0,
            xi0: 1.0,
            d,
            l: Extent::Finite(10.0),
            x_c: Extent::Infinite,
            kb: 1.0,
        }
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn bare_quadratic_is_linear() {
        let mut p = toy(3.0);
        p.tc = 100.0;
        assert_eq!(bare_quadratic(&p, 100.0), 0.0);
        p.a0 = 2.0;
        assert_eq!(bare_quadratic(&p, 110.0), 20.0);
        assert_eq!(bare_quadratic(&p, 90.0), -20.0);
    }

    #[test]
    fn closed_forms_at_infinite_cutoff() {
        use DimensionIntegral::*;
        assert!(rel(dimension_integral(I2, 3.0, Extent::Infinite).unwrap(), PI / 4.0) < 1e-12);
        assert!(rel(dimension_integral(I1, 1.0, Extent::Infinite).unwrap(), PI / 2.0) < 1e-12);
        assert!(rel(dimension_integral(I3, 2.0, Extent::Infinite).unwrap(), 0.25) < 1e-12);
    }

    #[test]
    fn finite_cutoff_antiderivatives() {
        use DimensionIntegral::*;
        for xc in [0.3, 1.0, 2.5, 40.0] {
            let i1 = dimension_integral(I1, 2.0, Extent::Finite(xc)).unwrap();
            assert!(rel(i1, 0.5 * (1.0 + xc * xc).ln()) < 1e-12, "xc={xc}");
            let i2 = dimension_integral(I2, 3.0, Extent::Finite(xc)).unwrap();
            let exact = 0.5 * (xc.atan() - xc / (1.0 + xc * xc));
            assert!(rel(i2, exact) < 1e-12, "xc={xc}");
        }
    }

    #[test]
    fn divergent_requests_name_the_cutoff() {
        use DimensionIntegral::*;
        for (kind, d) in [(I1, 2.0), (I1, 3.0), (I2, 4.0), (I3, 4.5)] {
            match dimension_integral(kind, d, Extent::Infinite) {
                Err(Error::Divergent { what }) => assert!(what.contains("x_c")),
                other => panic!("{kind:?} d={d}: {other:?}"),
            }
            assert!(dimension_integral(kind, d, Extent::Finite(1.0)).unwrap() > 0.0);
        }
    }

    #[test]
    fn near_marginal_dimension_still_converges() {
        let d = 3.9;
        let got = dimension_integral(DimensionIntegral::I2, d, Extent::Infinite).unwrap();
        let exact = gamma_fn(d / 2.0).unwrap() * gamma_fn(2.0 - d / 2.0).unwrap() / 2.0;
        assert!(rel(got, exact) < 1e-10);
    }

    #[test]
    fn coefficient_k_three_dimensions() {
        // 45/(4π^{3/2}Γ(3/2)) · π/4 = 45/(8π)
        let k = coefficient_k(&toy(3.0)).unwrap();
        assert!(rel(k, 45.0 / (8.0 * PI)) < 1e-12, "{k}");
        let zero = coefficient_k(&ModelParams { u0: 0.0, ..toy(3.0) }).unwrap();
        assert_eq!(zero, 0.0);
        let doubled = coefficient_k(&ModelParams { a0: 2.0, ..toy(3.0) }).unwrap();
        assert!(rel(doubled, k / 4.0) < 1e-14);
    }

    #[test]
    fn coefficient_kcal_values() {
        let k = coefficient_kcal(&toy(1.0)).unwrap();
        assert!(rel(k, 7.5) < 1e-12, "{k}");
        let p = ModelParams {
            x_c: Extent::Finite(1.0),
            ..toy(2.0)
        };
        // 15/(2π·1) · ½ ln 2
        let expected = 15.0 / (2.0 * PI) * 0.5 * 2f64.ln();
        assert!(rel(coefficient_kcal(&p).unwrap(), expected) < 1e-12);
        assert!(matches!(coefficient_kcal(&toy(2.0)), Err(Error::Divergent { .. })));
    }

    #[test]
    fn free_energy_scales_with_volume() {
        let mut p = toy(3.0);
        p.x_c = Extent::Finite(1.0);
        let f10 = gaussian_free_energy(&p, 1.2, 0.01).unwrap();
        p.l = Extent::Finite(20.0);
        let f20 = gaussian_free_energy(&p, 1.2, 0.01).unwrap();
        assert!(rel(f20, 8.0 * f10) < 1e-12);
    }

    #[test]
    fn free_energy_rejects_unstable_modes() {
        let mut p = toy(3.0);
        p.x_c = Extent::Finite(1.0);
        assert!(matches!(gaussian_free_energy(&p, 0.9, 0.05), Err(Error::Domain(_))));
        p.x_c = Extent::Infinite;
        assert!(matches!(gaussian_free_energy(&p, 1.2, 0.0), Err(Error::Divergent { .. })));
    }

    #[test]
    fn extent_json_forms() {
        let p: ModelParams = serde_json::from_str(
            r#"{"a0":1,"Tc":2,"b":0.5,"u0":1e-3,"xi0":1,"d":3,"L":"inf"}"#,
        )
        .unwrap();
        assert_eq!(p.l, Extent::Infinite);
        assert_eq!(p.x_c, Extent::Finite(1.0));
        assert_eq!(p.kb, 1.0);
        let back: ModelParams = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = ModelParams::from_json(
            r#"{"a0":1,"Tc":2,"b":0.5,"u0":1e-3,"xi0":1,"d":3,"L":10,"bogus":1}"#,
        );
        assert!(matches!(err, Err(Error::Invalid(_))));
    }

    #[test]
    fn validation_catches_bad_values() {
        let mut p = toy(3.0);
        p.u0 = -1.0;
        assert!(p.validate().is_err());
        let mut p = toy(3.0);
        p.l = Extent::Finite(0.0);
        assert!(p.validate().is_err());
    }

    #[test]
    fn bcs_preset_ratio() {
        let b = quartic_bcs_preset(2.0, 0.3);
        let ratio = 4.0 / b;
        assert!(rel(ratio, 8.0 * PI * PI * 0.3 / (7.0 * 1.202_056_903_159_594_3)) < 1e-14);
        assert!(rel(quartic_landau_preset(1.0, 12.0), 1.0) < 1e-15);
    }
}
