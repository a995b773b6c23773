//! Renormalized thermodynamic observables and effective exponent fits.
//!
//! Every observable here takes an already solved [`FluctuationState`] so the
//! caller decides whether `Ω` is re-solved at each temperature or pinned at
//! `Ω_dc` (see [`FluctuationState::frozen`]). The ordered-phase formulas
//! (`ξ` below `T*`, the reduced length) only make sense with the pinned state.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::selfconsist::{CriticalPoint, FluctuationState};
use crate::specfun::bessel_k0;

/// A sampled observable, ordered by temperature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableCurve {
    pub name: String,
    pub unit: String,
    pub points: Vec<(f64, f64)>,
    pub params_hash: String,
}

impl ObservableCurve {
    pub fn new(
        name: impl Into<String>,
        unit: impl Into<String>,
        points: Vec<(f64, f64)>,
        params_hash: impl Into<String>,
    ) -> Result<Self> {
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::invalid(format!(
                    "curve temperatures must increase strictly ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        if let Some(bad) = points.iter().find(|(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite curve point {bad:?}")));
        }
        Ok(ObservableCurve {
            name: name.into(),
            unit: unit.into(),
            points,
            params_hash: params_hash.into(),
        })
    }

    /// Evaluates `f` on each temperature of `temps`.
    pub fn tabulate<F>(
        name: &str,
        unit: &str,
        params: &ModelParams,
        temps: &[f64],
        mut f: F,
    ) -> Result<Self>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let points = temps
            .iter()
            .map(|&t| f(t).map(|v| (t, v)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(name, unit, points, params.digest())
    }

    /// CSV text with header `T,<name>` and 17 significant digits per value.
    pub fn to_csv(&self) -> String {
        let mut out = format!("T,{}\n", self.name);
        for (t, v) in &self.points {
            let _ = writeln!(out, "{t:.16e},{v:.16e}");
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    /// Parses the two-column form written by [`ObservableCurve::to_csv`].
    /// Lines starting with `#` and rows with an empty value are skipped.
    pub fn from_csv(text: &str, unit: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim_start().starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::invalid("empty CSV"))?;
        let name = header
            .split(',')
            .nth(1)
            .ok_or_else(|| Error::invalid("CSV header needs two columns"))?
            .trim()
            .to_string();
        let mut points = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let mut cols = line.split(',');
            let t = cols.next().unwrap_or("").trim();
            let v = cols.next().unwrap_or("").trim();
            if v.is_empty() {
                continue;
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::invalid(format!("bad CSV number {s:?}")))
            };
            points.push((parse(t)?, parse(v)?));
        }
        Self::new(name, unit, points, "")
    }
}

/// Which side of `T*` a fit uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Above,
    Below,
}

/// Result of a log-log least-squares fit `ln|value| = intercept + slope·ln|ε*|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub slope: f64,
    pub stderr: f64,
    pub intercept: f64,
    pub points: usize,
}

impl PowerLawFit {
    /// Exponent of a quantity that diverges as `|ε*|^{−x}`; that is `−slope`.
    pub fn divergence_exponent(&self) -> f64 {
        -self.slope
    }
}

/// The six classical exponents with the residuals of the four scaling laws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentSet {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub nu: f64,
    pub eta: f64,
    pub relation_residuals: [f64; 4],
}

impl ExponentSet {
    /// Builds the set and fills in the residuals for dimension `d`.
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64, nu: f64, eta: f64, d: f64) -> Self {
        let mut set = ExponentSet {
            alpha,
            beta,
            gamma,
            delta,
            nu,
            eta,
            relation_residuals: [0.0; 4],
        };
        set.relation_residuals = check_scaling_relations(&set, d);
        set
    }

    /// `α = 2 − d/2`, `β = ½`, `γ = 1`, `δ = 3`, `ν = ½`, `η = 0`.
    pub fn mean_field(d: f64) -> Self {
        Self::new(2.0 - 0.5 * d, 0.5, 1.0, 3.0, 0.5, 0.0, d)
    }
}

/// `|α − (2 − dν)|`, `|α + β(1+δ) − 2|`, `|α + 2β + γ − 2|`, `|γ − β(δ − 1)|`.
pub fn check_scaling_relations(e: &ExponentSet, d: f64) -> [f64; 4] {
    [
        (e.alpha - (2.0 - d * e.nu)).abs(),
        (e.alpha + e.beta * (1.0 + e.delta) - 2.0).abs(),
        (e.alpha + 2.0 * e.beta + e.gamma - 2.0).abs(),
        (e.gamma - e.beta * (e.delta - 1.0)).abs(),
    ]
}

/// The renormalized ordered-phase quantities at one temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderParameterPoint {
    #[serde(rename = "T")]
    pub t: f64,
    pub psi0: f64,
    #[serde(rename = "f_T")]
    pub f_t: f64,
    pub a_star: f64,
    pub b_star: f64,
}

/// `a0(T − Tc) + Ω`, taken from the stored gap when possible.
fn renormalized_mass(params: &ModelParams, t: f64, fluct: &FluctuationState) -> f64 {
    params.a0 * params.tc * fluct.gap_at(params, t)
}

/// `χ* = [a0(T − Tc) + Ω]⁻¹`.
pub fn susceptibility(params: &ModelParams, t: f64, fluct: &FluctuationState) -> Result<f64> {
    let mass = renormalized_mass(params, t, fluct);
    if mass == 0.0 {
        return Err(Error::Pole {
            what: "susceptibility".into(),
            at: t,
        });
    }
    Ok(1.0 / mass)
}

/// `G*(q) = [2β(a(T) + Ω + q²)]⁻¹`.
pub fn q_mode_correlator(params: &ModelParams, t: f64, fluct: &FluctuationState, q: f64) -> Result<f64> {
    if !(q >= 0.0) {
        return Err(Error::domain(format!("wave number must be non-negative, got {q}")));
    }
    if !(t > 0.0) {
        return Err(Error::domain(format!("temperature must be positive, got {t}")));
    }
    let weight = renormalized_mass(params, t, fluct) + q * q;
    if !(weight > 0.0) {
        return Err(Error::domain(format!("non-positive mode weight {weight} at q = {q}")));
    }
    let beta = 1.0 / (params.kb * t);
    Ok(1.0 / (2.0 * beta * weight))
}

/// Correlation length on either side of `T*`.
///
/// Above: `ξ0⁺ Tc^{1/2} [T − T* + (Ω − Ω_dc)/a0]^{−1/2}`.
/// Below: `(ξ0⁻/2) Tc^{1/2} [T* − T + (Ω_dc − Ω)/a0]^{−1/2}`.
///
/// The lower bracket is the negative of the upper one, so below `T*` it is
/// positive only for states whose `Ω` stays near `Ω_dc`, such as
/// [`FluctuationState::frozen`].
pub fn correlation_length(
    params: &ModelParams,
    t: f64,
    cp: &CriticalPoint,
    fluct: &FluctuationState,
    xi0_plus: f64,
    xi0_minus: f64,
) -> Result<f64> {
    let shift = (fluct.omega - cp.omega_c) / params.a0;
    let (amplitude, bracket) = if t > cp.t_star {
        (xi0_plus, t - cp.t_star + shift)
    } else if t < cp.t_star {
        (0.5 * xi0_minus, cp.t_star - t - shift)
    } else {
        return Err(Error::Pole {
            what: "correlation length".into(),
            at: t,
        });
    };
    if !(bracket > 0.0) {
        return Err(Error::domain(format!(
            "correlation-length bracket {bracket} is not positive at T = {t}"
        )));
    }
    Ok(amplitude * params.tc.sqrt() / bracket.sqrt())
}

/// `l* = l0 Tc^{−1/2} [T* − T + (Ω_dc − Ω)/a0]^{1/2}` below `T*`.
///
/// `l* ≫ 1` means finite-size effects are negligible, `l* ≲ 1` means strong
/// rounding of the transition.
pub fn reduced_length(
    params: &ModelParams,
    t: f64,
    cp: &CriticalPoint,
    fluct: &FluctuationState,
    l0: f64,
) -> Result<f64> {
    if !(l0 > 0.0) {
        return Err(Error::domain(format!("l0 must be positive, got {l0}")));
    }
    if !(t < cp.t_star) {
        return Err(Error::OutOfRegime(format!(
            "reduced length needs T < T* = {}, got {t}",
            cp.t_star
        )));
    }
    let bracket = cp.t_star - t + (cp.omega_c - fluct.omega) / params.a0;
    if !(bracket > 0.0) {
        return Err(Error::domain(format!("reduced-length bracket {bracket} is not positive")));
    }
    Ok(l0 * (bracket / params.tc).sqrt())
}

/// Real-space correlator for `d ∈ {1, 2, 3}`.
///
/// The one-dimensional form `(x/ξ*)e^{−x/ξ*}` vanishes at contact, unlike
/// the textbook Ornstein-Zernike `(ξ/2)e^{−x/ξ}`; it is kept in this form on
/// purpose.
pub fn correlation_function(d: u32, distance: f64, xi_star: f64) -> Result<f64> {
    if !(distance > 0.0 && xi_star > 0.0) {
        return Err(Error::domain(format!(
            "distance ({distance}) and ξ* ({xi_star}) must be positive"
        )));
    }
    let s = distance / xi_star;
    match d {
        1 => Ok(s * (-s).exp()),
        2 => Ok(bessel_k0(s)? / (2.0 * PI)),
        3 => Ok((-s).exp() / (4.0 * PI * distance)),
        other => Err(Error::UnsupportedDimension(other as f64)),
    }
}

/// Order parameter with `a* = a0(T − T*)` and `b* = b + Θ_d`.
pub fn order_parameter(
    params: &ModelParams,
    t: f64,
    cp: &CriticalPoint,
    fluct: &FluctuationState,
) -> Result<OrderParameterPoint> {
    let theta = fluct.theta_or_zero();
    let b_star = params.b + theta;
    if !(b_star > 0.0) {
        return Err(Error::Stability(format!(
            "b* = b + Θ = {b_star} ≤ 0; the transition is first order"
        )));
    }
    let a_star = params.a0 * (t - cp.t_star);
    let psi0 = if a_star < 0.0 {
        (a_star.abs() / (2.0 * b_star)).sqrt()
    } else {
        0.0
    };
    let a_bare = params.a0 * (t - params.tc);
    if a_bare == 0.0 {
        return Err(Error::Pole {
            what: "amplitude prefactor f(T) (a(T) = 0)".into(),
            at: t,
        });
    }
    let stiffness = 1.0 + theta / params.b;
    if !(stiffness > 0.0) {
        return Err(Error::Stability(format!("1 + Θ/b = {stiffness} ≤ 0")));
    }
    let f_t = ((1.0 + fluct.omega / a_bare).abs() / stiffness).sqrt();
    Ok(OrderParameterPoint {
        t,
        psi0,
        f_t,
        a_star,
        b_star,
    })
}

/// External field `h = 2a*ψ + 4b*ψ³`.
pub fn equation_of_state(op: &OrderParameterPoint, psi: f64) -> f64 {
    2.0 * op.a_star * psi + 4.0 * op.b_star * psi.powi(3)
}

/// `ΔC* = L^d Tc (a0²/2b)(1 − Ω_dc/(a0 Tc))`, per unit volume at `L = ∞`.
pub fn specific_heat_jump(params: &ModelParams, cp: &CriticalPoint) -> Result<f64> {
    if !(params.b > 0.0) {
        return Err(Error::domain(format!("specific-heat jump needs b > 0, got {}", params.b)));
    }
    Ok(params.extensive_factor() * params.tc * params.a0 * params.a0 / (2.0 * params.b)
        * (1.0 - cp.omega_c / (params.a0 * params.tc)))
}

/// Least-squares slope of `ln|value|` against `ln|ε*|`, `ε* = (T − T*)/Tc`,
/// over the points on `side` with `window.0 ≤ |ε*| ≤ window.1`.
pub fn fit_exponent(
    curve: &ObservableCurve,
    t_star: f64,
    tc: f64,
    side: Side,
    window: (f64, f64),
) -> Result<PowerLawFit> {
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::Fit(format!("invalid window ({lo}, {hi})")));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &(t, v) in &curve.points {
        let eps = (t - t_star) / tc;
        let on_side = match side {
            Side::Above => eps > 0.0,
            Side::Below => eps < 0.0,
        };
        if !on_side || eps.abs() < lo || eps.abs() > hi {
            continue;
        }
        if !(v > 0.0) {
            return Err(Error::Fit(format!("non-positive value {v} at T = {t}")));
        }
        xs.push(eps.abs().ln());
        ys.push(v.ln());
    }
    let n = xs.len();
    if n < 8 {
        return Err(Error::Fit(format!("{n} points inside the window; at least 8 needed")));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Fit("all points share one |ε*|".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    let stderr = (ssr / (nf - 2.0) / sxx).sqrt();
    Ok(PowerLawFit {
        slope,
        stderr,
        intercept,
        points: n,
    })
}

/// `count` temperatures `T* + sign·Tc·|ε*|` with `|ε*|` log-spaced over
/// `window`, returned in increasing order.
pub fn log_spaced_temperatures(t_star: f64, tc: f64, side: Side, window: (f64, f64), count: usize) -> Vec<f64> {
    let (lo, hi) = (window.0.ln(), window.1.ln());
    let mut temps: Vec<f64> = (0..count)
        .map(|i| {
            let frac = if count > 1 { i as f64 / (count - 1) as f64 } else { 0.0 };
            let e = (lo + frac * (hi - lo)).exp();
            match side {
                Side::Above => t_star + tc * e,
                Side::Below => t_star - tc * e,
            }
        })
        .collect();
    temps.sort_by(|a, b| a.partial_cmp(b).expect("finite temperatures"));
    temps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Extent;
    use crate::selfconsist::{solve_critical_point, solve_omega, SolverSettings};
    use proptest::prelude::*;

    fn toy() -> ModelParams {
        ModelParams {
            a0: 1.0,
            tc: 1.0,
            b: 1.0,
            u0: 0.05,
            xi0: 1.0,
            d: 3.0,
            l: Extent::Finite(10.0),
            x_c: Extent::Finite(1.0),
            kb: 1.0,
        }
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn susceptibility_trivial_and_pole() {
        let p = toy();
        let s = FluctuationState::bare(&p, 2.0);
        assert_eq!(susceptibility(&p, 2.0, &s).unwrap(), 1.0);
        let at_tc = FluctuationState::bare(&p, 1.0);
        assert!(matches!(susceptibility(&p, 1.0, &at_tc), Err(Error::Pole { .. })));
    }

    #[test]
    fn inverse_susceptibility_small_at_shifted_point() {
        let p = toy();
        let set = SolverSettings::default();
        let cp = solve_critical_point(&p, &set).unwrap();
        let s = solve_omega(&p, cp.t_star, &set).unwrap();
        let inv = 1.0 / susceptibility(&p, cp.t_star, &s).unwrap();
        // Finite-size rounding leaves χ*⁻¹ of order Ω_dc, not zero.
        assert!(inv > 0.0 && inv < cp.omega_c, "{inv} vs {}", cp.omega_c);
        let far = solve_omega(&p, 1.5, &set).unwrap();
        assert!(1.0 / susceptibility(&p, 1.5, &far).unwrap() > 100.0 * inv);
    }

    #[test]
    fn correlation_length_amplitude_ratio() {
        let p = toy();
        let cp = solve_critical_point(&p, &SolverSettings::default()).unwrap();
        let dt = 0.01;
        let up = FluctuationState::frozen(&p, &cp, cp.t_star + dt);
        let dn = FluctuationState::frozen(&p, &cp, cp.t_star - dt);
        let above = correlation_length(&p, cp.t_star + dt, &cp, &up, 1.0, 1.0).unwrap();
        let below = correlation_length(&p, cp.t_star - dt, &cp, &dn, 1.0, 1.0).unwrap();
        assert!(rel(above / below, 2.0) < 1e-9);
    }

    #[test]
    fn reduced_length_scales_with_l0() {
        let p = toy();
        let cp = solve_critical_point(&p, &SolverSettings::default()).unwrap();
        let t = 0.9 * cp.t_star;
        let s = FluctuationState::frozen(&p, &cp, t);
        let one = reduced_length(&p, t, &cp, &s, 1.0).unwrap();
        let three = reduced_length(&p, t, &cp, &s, 3.0).unwrap();
        assert!(rel(three, 3.0 * one) < 1e-15);
        assert!(rel(one, (0.1 * cp.t_star / p.tc).sqrt()) < 1e-12);
        assert!(reduced_length(&p, cp.t_star * 1.01, &cp, &s, 1.0).is_err());
    }

    #[test]
    fn correlation_function_rows() {
        let xi = 2.0;
        let c3 = correlation_function(3, xi, xi).unwrap();
        assert!(rel(c3, (-1.0f64).exp() / (4.0 * PI * xi)) < 1e-15);
        let c2 = correlation_function(2, xi, xi).unwrap();
        assert!(rel(c2, 0.421_024_438_240_708_23 / (2.0 * PI)) < 1e-13);
        assert!(correlation_function(1, 1e-300, 1.0).unwrap() < 1e-299);
        assert!(matches!(correlation_function(4, 1.0, 1.0), Err(Error::UnsupportedDimension(_))));
    }

    #[test]
    fn order_parameter_limits() {
        let p = toy();
        let cp = CriticalPoint::unshifted(&p);
        let s = FluctuationState::bare(&p, 0.5);
        let op = order_parameter(&p, 0.5, &cp, &s).unwrap();
        assert_eq!(op.f_t, 1.0);
        let phi0 = (0.5f64 / 2.0).sqrt();
        assert!(rel(op.psi0, phi0) < 1e-15);
        assert!(equation_of_state(&op, op.psi0).abs() < 1e-12);
        let above = order_parameter(&p, 1.5, &cp, &FluctuationState::bare(&p, 1.5)).unwrap();
        assert_eq!(above.psi0, 0.0);
    }

    #[test]
    fn order_parameter_factorizes_with_pinned_omega() {
        let p = ModelParams { d: 2.0, ..toy() };
        let cp = solve_critical_point(&p, &SolverSettings::default()).unwrap();
        let t = 0.95 * cp.t_star;
        let s = FluctuationState::frozen(&p, &cp, t);
        let op = order_parameter(&p, t, &cp, &s).unwrap();
        let phi0 = (p.a0 * (p.tc - t) / (2.0 * p.b)).sqrt();
        assert!(rel(op.psi0, op.f_t * phi0) < 1e-12);
    }

    #[test]
    fn stability_error_for_negative_quartic() {
        let p = ModelParams { b: -1.0, ..toy() };
        let cp = CriticalPoint::unshifted(&p);
        let s = FluctuationState::bare(&p, 0.5);
        assert!(matches!(order_parameter(&p, 0.5, &cp, &s), Err(Error::Stability(_))));
    }

    #[test]
    fn equation_of_state_values() {
        let op = OrderParameterPoint {
            t: 1.0,
            psi0: 0.0,
            f_t: 1.0,
            a_star: 1.0,
            b_star: 1.0,
        };
        assert_eq!(equation_of_state(&op, 1.0), 6.0);
        let iso = OrderParameterPoint { a_star: 0.0, ..op };
        for psi in [0.1, 1.0, 2.0] {
            assert!(rel(equation_of_state(&iso, psi) / psi.powi(3), 4.0) < 1e-15);
        }
    }

    #[test]
    fn specific_heat_jump_behaviour() {
        let p = toy();
        let landau = specific_heat_jump(&p, &CriticalPoint::unshifted(&p)).unwrap();
        assert!(rel(landau, 1000.0 * 0.5) < 1e-15);
        let cp = solve_critical_point(&p, &SolverSettings::default()).unwrap();
        assert!(specific_heat_jump(&p, &cp).unwrap() < landau);
        let full = CriticalPoint {
            omega_c: p.a0 * p.tc,
            ..cp
        };
        assert_eq!(specific_heat_jump(&p, &full).unwrap(), 0.0);
    }

    #[test]
    fn scaling_relations_examples() {
        assert_eq!(ExponentSet::mean_field(4.0).relation_residuals, [0.0; 4]);
        let d3 = ExponentSet::mean_field(3.0);
        assert_eq!(d3.relation_residuals[0], 0.0);
        assert!((d3.relation_residuals[2] - 0.5).abs() < 1e-15);
        let zero = ExponentSet::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 3.0);
        assert_eq!(zero.relation_residuals, [2.0, 2.0, 2.0, 0.0]);
    }

    #[test]
    fn fit_recovers_synthetic_power_law() {
        let temps = log_spaced_temperatures(1.0, 1.0, Side::Above, (1e-4, 1e-2), 30);
        let pts = temps.iter().map(|&t| (t, (t - 1.0f64).abs().powf(-1.75))).collect();
        let curve = ObservableCurve::new("synthetic", "1", pts, "").unwrap();
        let fit = fit_exponent(&curve, 1.0, 1.0, Side::Above, (1e-4, 1e-2)).unwrap();
        assert!((fit.divergence_exponent() - 1.75).abs() < 1e-6);
        assert!(fit.stderr < 1e-6);
    }

    #[test]
    fn fit_rejects_sparse_or_negative() {
        let pts: Vec<_> = (1..5).map(|i| (1.0 + i as f64 * 1e-3, 1.0)).collect();
        let curve = ObservableCurve::new("x", "1", pts, "").unwrap();
        assert!(matches!(
            fit_exponent(&curve, 1.0, 1.0, Side::Above, (1e-4, 1e-2)),
            Err(Error::Fit(_))
        ));
        let pts: Vec<_> = (1..12).map(|i| (1.0 + i as f64 * 5e-4, -1.0)).collect();
        let curve = ObservableCurve::new("x", "1", pts, "").unwrap();
        assert!(fit_exponent(&curve, 1.0, 1.0, Side::Above, (1e-4, 1e-2)).is_err());
    }

    #[test]
    fn curve_rejects_unordered_points() {
        assert!(ObservableCurve::new("x", "1", vec![(2.0, 1.0), (1.0, 1.0)], "").is_err());
        assert!(ObservableCurve::new("x", "1", vec![(1.0, f64::NAN)], "").is_err());
    }

    #[test]
    fn csv_round_trip() {
        let curve =
            ObservableCurve::new("chi", "1/energy", vec![(1.0, 0.1), (1.5, 1.0 / 3.0)], "h").unwrap();
        let csv = curve.to_csv();
        assert!(csv.starts_with("T,chi\n"));
        assert!(csv.contains("3.3333333333333331e-1"));
        let back = ObservableCurve::from_csv(&csv, "1/energy").unwrap();
        assert_eq!(back.points, curve.points);
    }

    proptest! {
        #[test]
        fn zero_mode_correlator_is_half_kt_chi(
            a0 in 0.1f64..10.0, tc in 0.5f64..50.0, t_rel in 1.01f64..3.0, omega in 0.0f64..1.0, kb in 0.1f64..5.0,
        ) {
            let p = ModelParams { a0, tc, kb, ..toy() };
            let t = t_rel * tc;
            let s = FluctuationState { omega, gap: p.reduced_temperature(t) + omega / (a0 * tc), ..FluctuationState::bare(&p, t) };
            let g = q_mode_correlator(&p, t, &s, 0.0).unwrap();
            let chi = susceptibility(&p, t, &s).unwrap();
            let beta = 1.0 / (kb * t);
            prop_assert!(rel(g * 2.0 * beta, chi) <= 4.0 * f64::EPSILON);
        }

        #[test]
        fn equation_of_state_vanishes_at_spontaneous_value(a_star in -10.0f64..-1e-6, b_star in 1e-3f64..10.0) {
            let psi0 = (a_star.abs() / (2.0 * b_star)).sqrt();
            let op = OrderParameterPoint { t: 0.0, psi0, f_t: 1.0, a_star, b_star };
            prop_assert!(equation_of_state(&op, psi0).abs() < 1e-12);
            prop_assert!(rel(psi0 * psi0 * 2.0 * b_star, a_star.abs()) < 1e-15);
        }

        #[test]
        fn correlator_positive_and_decreasing(d in 1u32..4, xi in 0.1f64..10.0, r in 1.0f64..20.0) {
            let r1 = r * xi;
            let r2 = r1 * 1.1;
            let c1 = correlation_function(d, r1, xi).unwrap();
            let c2 = correlation_function(d, r2, xi).unwrap();
            prop_assert!(c1 > 0.0 && c2 > 0.0 && c2 < c1);
        }

        #[test]
        fn fit_recovers_any_exponent(x in -3.0f64..3.0, amp in 0.1f64..10.0) {
            let temps = log_spaced_temperatures(2.0, 2.0, Side::Below, (1e-4, 1e-2), 12);
            let pts = temps.iter().map(|&t| (t, amp * ((t - 2.0f64) / 2.0).abs().powf(x))).collect();
            let curve = ObservableCurve::new("s", "1", pts, "").unwrap();
            let fit = fit_exponent(&curve, 2.0, 2.0, Side::Below, (1e-4, 1e-2)).unwrap();
            prop_assert!((fit.slope - x).abs() < 1e-6);
        }
    }
}
