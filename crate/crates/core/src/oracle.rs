//! Brute-force validators.
//!
//! These routines recompute quantities the solvers rely on by a route that
//! shares as little code as possible with them: single-site moments by direct
//! quadrature, and the correlator of a handful of interacting modes by
//! nested adaptive integration over the mode amplitudes.

use std::cell::Cell;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::applications::{
    aleph, paraconductivity_1d, paraconductivity_2d, paraconductivity_3d, paraconductivity_with_aleph,
    Geometry, SuperconductorParams,
};
use crate::error::{Error, Result};
use crate::model::{dimension_integral, DimensionIntegral, Extent, ModelParams, PhysicalConstants};
use crate::selfconsist::{CriticalPoint, FluctuationState};
use crate::specfun::{double_factorial_odd, gamma_fn, integrate, parabolic_cylinder_d_scaled, QuadratureSpec};

/// `∫₀^∞ y^{2n} e^{−p y²} dy = (2n−1)!!/(2(2p)ⁿ) · √(π/p)`.
pub fn gaussian_moment(n: u32, p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::domain(format!("Gaussian moment needs p > 0, got {p}")));
    }
    let odd = double_factorial_odd(n);
    Ok(odd / (2.0 * (2.0 * p).powi(n as i32)) * (PI / p).sqrt())
}

/// `∫₀^∞ φ^{2p−1} exp(−λ₂φ² − λ₄φ⁴) dφ` in closed form,
/// `(2λ₄)^{−p/2} Γ(p) D₋ₚ(λ₂/√(2λ₄)) e^{λ₂²/8λ₄} / 2`.
pub fn nongaussian_moment(p: f64, lambda2: f64, lambda4: f64) -> Result<f64> {
    if !(lambda4 > 0.0) {
        return Err(Error::domain(format!("λ₄ must be positive, got {lambda4}")));
    }
    if !(p > 0.0) {
        return Err(Error::domain(format!("p must be positive, got {p}")));
    }
    let z = lambda2 / (2.0 * lambda4).sqrt();
    // e^{λ₂²/8λ₄} = e^{z²/4} is absorbed into the scaled D₋ₚ.
    Ok(0.5 * (2.0 * lambda4).powf(-0.5 * p) * gamma_fn(p)? * parabolic_cylinder_d_scaled(-p, z)?)
}

/// The same moment by direct adaptive quadrature in `φ`.
pub fn nongaussian_moment_quadrature(p: f64, lambda2: f64, lambda4: f64) -> Result<f64> {
    if !(lambda4 > 0.0 && p > 0.0) {
        return Err(Error::domain("quadrature moment needs p > 0 and λ₄ > 0"));
    }
    let spec = QuadratureSpec::relative(1e-13, Extent::Infinite);
    let weight = |phi: f64| (-lambda2 * phi * phi - lambda4 * phi.powi(4)).exp();
    if p >= 0.5 {
        Ok(integrate(|phi| phi.powf(2.0 * p - 1.0) * weight(phi), &spec)?.value)
    } else {
        // φ = s^{1/2p} removes the φ^{2p−1} endpoint singularity.
        let inv = 1.0 / (2.0 * p);
        Ok(integrate(|s| weight(s.powf(inv)), &spec)?.value * inv)
    }
}

fn default_modes() -> Vec<f64> {
    vec![0.0, 0.5, 1.0]
}

/// A truncated field theory with one real amplitude per balanced `±q` pair:
///
/// `H = Σ (a + q_i²) φ_i² + (b/V) S² + (u0/V²) S³`, `S = Σ φ_i²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FewModeSystem {
    pub mode_q: Vec<f64>,
    pub a_bare: f64,
    pub b_bare: f64,
    pub u0: f64,
    pub beta: f64,
    pub volume_factor: f64,
}

impl Default for FewModeSystem {
    fn default() -> Self {
        FewModeSystem {
            mode_q: default_modes(),
            a_bare: 1.0,
            b_bare: 0.0,
            u0: 0.01,
            beta: 1.0,
            volume_factor: 2.0,
        }
    }
}

impl FewModeSystem {
    pub fn n_modes(&self) -> usize {
        self.mode_q.len()
    }

    fn weights(&self) -> Vec<f64> {
        self.mode_q.iter().map(|q| self.a_bare + q * q).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_modes();
        if !(1..=3).contains(&n) {
            return Err(Error::invalid(format!("1 to 3 modes supported, got {n}")));
        }
        if self.mode_q.iter().any(|q| !(*q >= 0.0 && q.is_finite())) {
            return Err(Error::invalid("mode wave numbers must be non-negative"));
        }
        if !(self.beta > 0.0 && self.volume_factor > 0.0) {
            return Err(Error::invalid("beta and volume_factor must be positive"));
        }
        if !(self.u0 >= 0.0) {
            return Err(Error::invalid("u0 must be non-negative"));
        }
        if self.u0 == 0.0 {
            if self.b_bare < 0.0 {
                return Err(Error::invalid("b < 0 without a sextic term is not integrable"));
            }
            if self.b_bare == 0.0 && self.weights().iter().any(|w| !(*w > 0.0)) {
                return Err(Error::invalid("Gaussian weights a + q² must be positive"));
            }
        }
        Ok(())
    }

    /// `βH` at the given amplitudes.
    fn beta_h(&self, phi: &[f64], weights: &[f64]) -> f64 {
        let mut quad = 0.0;
        let mut s = 0.0;
        for (p, w) in phi.iter().zip(weights) {
            let p2 = p * p;
            quad += w * p2;
            s += p2;
        }
        let v = self.volume_factor;
        self.beta * (quad + self.b_bare / v * s * s + self.u0 / (v * v) * s * s * s)
    }
}

/// Integral of `f` over `[0, ∞)^n` by nested adaptive quadrature.
fn nested_integral<F>(n: usize, scales: &[f64], spec: &QuadratureSpec, f: &F) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    fn level<F: Fn(&[f64]) -> f64>(
        k: usize,
        n: usize,
        point: [f64; 3],
        scales: &[f64],
        spec: &QuadratureSpec,
        f: &F,
        failure: &Cell<Option<Error>>,
    ) -> f64 {
        let inner = |u: f64| {
            let mut p = point;
            p[k] = u * scales[k];
            if k + 1 == n {
                f(&p[..n])
            } else {
                level(k + 1, n, p, scales, spec, f, failure)
            }
        };
        match integrate(inner, spec) {
            Ok(est) => est.value * scales[k],
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        }
    }
    let failure = Cell::new(None);
    let value = level(0, n, [0.0; 3], scales, spec, f, &failure);
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

fn few_mode_spec() -> QuadratureSpec {
    QuadratureSpec::default().with_tolerances(1e-300, 1e-10)
}

/// `⟨φ_i²⟩` of the few-mode system by direct integration.
///
/// With one real amplitude per mode the Gaussian limit is
/// `⟨φ_i²⟩ = [2β(a + q_i²)]⁻¹`, the zero-time correlator of the
/// renormalized theory.
pub fn few_mode_correlator(sys: &FewModeSystem, mode_index: usize) -> Result<f64> {
    sys.validate()?;
    let n = sys.n_modes();
    if mode_index >= n {
        return Err(Error::invalid(format!("mode index {mode_index} out of range for {n} modes")));
    }
    let weights = sys.weights();
    let scales: Vec<f64> = weights
        .iter()
        .map(|w| 1.0 / (2.0 * sys.beta * w.max(0.05)).sqrt())
        .collect();
    let spec = few_mode_spec();
    let boltzmann = |phi: &[f64]| (-sys.beta_h(phi, &weights)).exp();
    let z = nested_integral(n, &scales, &spec, &boltzmann)?;
    let moment = nested_integral(n, &scales, &spec, &|phi: &[f64]| {
        phi[mode_index] * phi[mode_index] * boltzmann(phi)
    })?;
    if !(z > 0.0 && moment.is_finite()) {
        return Err(Error::Accuracy {
            value: moment,
            error: f64::NAN,
            subdivisions: 0,
        });
    }
    Ok(moment / z)
}

/// Self-consistent Gaussian (Hartree) description of a [`FewModeSystem`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HartreePrediction {
    pub omega: f64,
    pub correlators: Vec<f64>,
}

/// Solves `Ω = 2(b/V)⟨S⟩ + 3(u0/V²)⟨S²⟩` with Gaussian averages
/// `g_i = [2β(a + q_i² + Ω)]⁻¹`, `⟨S⟩ = Σg`, `⟨S²⟩ = (Σg)² + 2Σg²`.
///
/// The contraction counts are those of the truncated system itself, not the
/// large-mode-number factor used by the continuum decoupling.
pub fn hartree_prediction(sys: &FewModeSystem) -> Result<HartreePrediction> {
    sys.validate()?;
    if sys.b_bare < 0.0 {
        return Err(Error::invalid("the Hartree prediction needs b ≥ 0"));
    }
    let weights = sys.weights();
    let v = sys.volume_factor;
    let gs = |omega: f64| -> Vec<f64> {
        weights.iter().map(|w| 1.0 / (2.0 * sys.beta * (w + omega))).collect()
    };
    let rhs = |omega: f64| -> f64 {
        let g = gs(omega);
        let s1: f64 = g.iter().sum();
        let s2: f64 = g.iter().map(|x| x * x).sum();
        2.0 * sys.b_bare / v * s1 + 3.0 * sys.u0 / (v * v) * (s1 * s1 + 2.0 * s2)
    };
    let min_w = weights.iter().cloned().fold(f64::INFINITY, f64::min);
    // Ω − rhs(Ω) is increasing; rhs(lo) bounds the root from above.
    let mut lo = (-min_w).max(0.0);
    if rhs(lo) == 0.0 {
        return Ok(HartreePrediction {
            omega: 0.0,
            correlators: gs(0.0),
        });
    }
    if lo > 0.0 || min_w == 0.0 {
        lo += 1e-12 * (1.0 + lo);
    }
    let mut hi = lo + rhs(lo);
    if !hi.is_finite() {
        return Err(Error::NoSolution("Hartree bracket overflows".into()));
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mid - rhs(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let omega = 0.5 * (lo + hi);
    Ok(HartreePrediction {
        omega,
        correlators: gs(omega),
    })
}

/// One line of an oracle report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub name: String,
    pub max_rel_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl OracleCheck {
    fn new(name: &str, max_rel_error: f64, tolerance: f64) -> Self {
        OracleCheck {
            name: name.to_string(),
            max_rel_error,
            tolerance,
            passed: max_rel_error <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub checks: Vec<OracleCheck>,
    pub all_passed: bool,
}

/// Inputs of [`run_oracle_suite`]; every field is optional in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OracleConfig {
    /// `ℵ₁, ℵ₂, ℵ₃` to use in the conductivity consistency check; `None`
    /// entries are computed from their integrals.
    pub aleph: [Option<f64>; 3],
    pub few_mode: FewModeSystem,
}

fn rel_err(got: f64, want: f64) -> f64 {
    if got == want {
        0.0
    } else {
        ((got - want) / want).abs()
    }
}

fn max_over<I: IntoIterator<Item = Result<f64>>>(errs: I) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for e in errs {
        let e = e?;
        worst = if e.is_nan() { f64::INFINITY } else { worst.max(e) };
    }
    Ok(worst)
}

/// Runs every validator and reports the largest relative error of each.
pub fn run_oracle_suite(config: &OracleConfig) -> Result<OracleReport> {
    let mut checks = Vec::new();
    let computed_aleph = [
        aleph(1.0, Extent::Infinite)?,
        aleph(2.0, Extent::Infinite)?,
        aleph(3.0, Extent::Infinite)?,
    ];

    let literal = [PI / 16.0, 1.0 / 16.0, 1.0 / 32.0];
    let worst = max_over((0..3).map(|i| Ok(rel_err(computed_aleph[i], literal[i]))))?;
    checks.push(OracleCheck::new("aleph_constants", worst, 1e-10));

    let worst = max_over([1.0, 2.0, 3.0].into_iter().flat_map(|d: f64| {
        let i2 = dimension_integral(DimensionIntegral::I2, d, Extent::Infinite).and_then(|v| {
            Ok(rel_err(v, gamma_fn(d / 2.0)? * gamma_fn(2.0 - d / 2.0)? / 2.0))
        });
        let i3 = dimension_integral(DimensionIntegral::I3, d, Extent::Infinite).and_then(|v| {
            Ok(rel_err(v, gamma_fn(d / 2.0 + 1.0)? * gamma_fn(2.0 - d / 2.0)? / 4.0))
        });
        [i2, i3]
    }))?;
    checks.push(OracleCheck::new("dimension_integrals_closed_form", worst, 1e-10));

    for (i, d) in [1u32, 2, 3].into_iter().enumerate() {
        let used = config.aleph[i].unwrap_or(computed_aleph[i]);
        let worst = paracond_consistency(d, used)?;
        checks.push(OracleCheck::new(&format!("paraconductivity_consistency_d{d}"), worst, 1e-10));
    }

    let mut grid = Vec::new();
    for p in [0.5, 1.0, 2.0, 3.0] {
        for l2 in [-1.0, 0.0, 1.0, 4.0] {
            for l4 in [0.25, 1.0] {
                grid.push((p, l2, l4));
            }
        }
    }
    let worst = max_over(grid.iter().map(|&(p, l2, l4)| {
        Ok(rel_err(nongaussian_moment(p, l2, l4)?, nongaussian_moment_quadrature(p, l2, l4)?))
    }))?;
    checks.push(OracleCheck::new("nongaussian_closed_form", worst, 1e-8));

    let spec = QuadratureSpec::relative(1e-13, Extent::Infinite);
    let worst = max_over((0..5u32).flat_map(|n| {
        [0.5, 1.0, 2.0].into_iter().map(move |p: f64| {
            let direct = integrate(|y| y.powi(2 * n as i32) * (-p * y * y).exp(), &spec)?.value;
            Ok(rel_err(gaussian_moment(n, p)?, direct))
        })
    }))?;
    checks.push(OracleCheck::new("gaussian_moments", worst, 1e-10));

    let gaussian_sys = FewModeSystem {
        u0: 0.0,
        b_bare: 0.0,
        ..config.few_mode.clone()
    };
    gaussian_sys.validate()?;
    let worst = max_over((0..gaussian_sys.n_modes()).map(|i| {
        let exact = 1.0 / (2.0 * gaussian_sys.beta * (gaussian_sys.a_bare + gaussian_sys.mode_q[i].powi(2)));
        Ok(rel_err(few_mode_correlator(&gaussian_sys, i)?, exact))
    }))?;
    checks.push(OracleCheck::new("few_mode_gaussian_limit", worst, 1e-8));

    let sys = &config.few_mode;
    let prediction = hartree_prediction(sys)?;
    let worst = max_over((0..sys.n_modes()).map(|i| Ok(rel_err(prediction.correlators[i], few_mode_correlator(sys, i)?))))?;
    checks.push(OracleCheck::new("few_mode_decoupling", worst, 0.05));

    let all_passed = checks.iter().all(|c| c.passed);
    Ok(OracleReport { checks, all_passed })
}

/// Largest relative gap between the general conductivity formula (with the
/// supplied `ℵ_d`) and the dimension-specific literal one over a fixed set
/// of deterministic draws.
pub fn paracond_consistency(d: u32, aleph_d: f64) -> Result<f64> {
    let geometry = match d {
        1 => Geometry::Wire {
            thickness: 0.3,
            width: 0.45,
        },
        2 => Geometry::Film { thickness: 0.7 },
        3 => Geometry::Bulk,
        other => return Err(Error::UnsupportedDimension(other as f64)),
    };
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let s = k as f64;
        let base = ModelParams {
            a0: 0.5 + 0.17 * s,
            tc: 1.0 + 0.9 * s,
            b: 1.0,
            u0: 0.0,
            xi0: 1.0,
            d: d as f64,
            l: Extent::Infinite,
            x_c: Extent::Finite(1.0),
            kb: 1.0,
        };
        let constants = PhysicalConstants {
            hbar: 0.6 + 0.05 * s,
            mass: 1.4 - 0.03 * s,
            charge: 0.8 + 0.02 * s,
            mu0: 1.0,
        };
        let sp = SuperconductorParams {
            constants,
            geometry,
            base,
        };
        let width = 0.01 * (k % 7) as f64;
        let cp = CriticalPoint {
            t_star: base.tc * (1.0 - width),
            omega_c: width * base.a0 * base.tc,
            ginzburg_width: width,
            eq30_residual: 0.0,
            iterations: 0,
        };
        let t = base.tc * (1.0 + 0.003 * (1.0 + s * s));
        let omega = 0.5 * width * base.a0 * base.tc;
        let fluct = FluctuationState {
            omega,
            gap: base.reduced_temperature(t) + omega / (base.a0 * base.tc),
            ..FluctuationState::bare(&base, t)
        };
        let general = paraconductivity_with_aleph(&sp, t, &fluct, &cp, aleph_d)?;
        let literal = match d {
            1 => paraconductivity_1d(&sp, t, &fluct, &cp)?,
            2 => paraconductivity_2d(&sp, t, &fluct, &cp)?,
            _ => paraconductivity_3d(&sp, t, &fluct, &cp)?,
        };
        worst = worst.max(rel_err(general, literal));
    }
    Ok(worst)
}
