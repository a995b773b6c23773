//! Fixed-point solves for the fluctuation corrections `Ω_d(T)` and `Θ_d(T)`.
//!
//! The anharmonic correction obeys
//!
//! ```text
//! Ω = A(T) · B^p,   A = (K_d/V)(T/Tc)²,   B = ε + Ω/(a0 Tc),   p = d/2 − 2.
//! ```
//!
//! Close to the shifted critical temperature `B` is the small difference of
//! two nearly equal numbers, so the solver never forms it by subtraction.
//! Below `Tc` it iterates on `ln B`, above `Tc` on `ln(B − ε) = ln(Ω/(a0Tc))`.
//! In either variable the equation is strictly decreasing whenever `p ≤ 0`,
//! which makes the root unique, and `Ω` is recovered as `A·B^p`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{coefficient_k, coefficient_kcal, ModelParams};

/// Iteration controls shared by all fixed-point and root solves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSettings {
    pub rel_tol: f64,
    pub max_iter: usize,
    /// Growth factor applied to a root bracket that does not yet straddle
    /// the root.
    pub bracket_expansion: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_iter: 200,
            bracket_expansion: 2.0,
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::invalid(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        if self.max_iter < 1 {
            return Err(Error::invalid("max_iter must be at least 1"));
        }
        if !(self.bracket_expansion > 1.0) {
            return Err(Error::invalid("bracket_expansion must exceed 1"));
        }
        Ok(())
    }
}

/// Converged fluctuation corrections at one temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluctuationState {
    #[serde(rename = "T")]
    pub t: f64,
    pub omega: f64,
    /// `Θ_d(T)`. `None` where the harmonic correction is undefined: a
    /// non-positive gap outside `d = 2`, or a divergent `𝒦_d`.
    pub theta: Option<f64>,
    /// The gap `ε + Ω/(a0 Tc)`, carried to full relative precision.
    pub gap: f64,
    #[serde(rename = "domega_dT")]
    pub domega_dt: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl FluctuationState {
    /// A state with no fluctuations at all.
    pub fn bare(params: &ModelParams, t: f64) -> Self {
        let gap = params.reduced_temperature(t);
        FluctuationState {
            t,
            omega: 0.0,
            theta: Some(0.0),
            gap,
            domega_dt: 0.0,
            residual: 0.0,
            iterations: 0,
            converged: true,
        }
    }

    /// The ordered-phase state with `Ω` pinned at `Ω_dc`, so that
    /// `a0(T − Tc) + Ω = a0(T − T*)`. Its gap `(T − T*)/Tc` is negative below
    /// `T*`, where `Θ_d` is only defined for `d = 2`.
    pub fn frozen(params: &ModelParams, cp: &CriticalPoint, t: f64) -> Self {
        let gap = (t - cp.t_star) / params.tc;
        FluctuationState {
            t,
            omega: cp.omega_c,
            theta: theta_from_gap(params, t, gap).ok(),
            gap,
            domega_dt: 0.0,
            residual: 0.0,
            iterations: 0,
            converged: true,
        }
    }

    /// `ε(t) + Ω/(a0 Tc)`; uses the stored high-precision gap when `t` is the
    /// state's own temperature.
    pub fn gap_at(&self, params: &ModelParams, t: f64) -> f64 {
        if t == self.t {
            self.gap
        } else {
            params.reduced_temperature(t) + self.omega / (params.a0 * params.tc)
        }
    }

    /// `Θ_d`, or zero where it is undefined.
    pub fn theta_or_zero(&self) -> f64 {
        self.theta.unwrap_or(0.0)
    }
}

/// The renormalized critical point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    #[serde(rename = "T_star")]
    pub t_star: f64,
    pub omega_c: f64,
    pub ginzburg_width: f64,
    /// Difference between the two sides of the logarithmic self-consistency
    /// relation at the solution. Diagnostic only.
    pub eq30_residual: f64,
    pub iterations: usize,
}

impl CriticalPoint {
    fn from_omega(params: &ModelParams, omega_c: f64, eq30_residual: f64, iterations: usize) -> Self {
        CriticalPoint {
            t_star: params.tc - omega_c / params.a0,
            omega_c,
            ginzburg_width: omega_c / (params.a0 * params.tc),
            eq30_residual,
            iterations,
        }
    }

    /// No fluctuation shift: `T* = Tc`.
    pub fn unshifted(params: &ModelParams) -> Self {
        Self::from_omega(params, 0.0, 0.0, 0)
    }
}

/// `K_d/V`, or `None` when the sample is infinite.
pub fn amplitude_per_volume(params: &ModelParams) -> Result<Option<f64>> {
    match params.volume() {
        None => Ok(None),
        Some(v) => Ok(Some(coefficient_k(params)? / v)),
    }
}

/// Solution of `A·B^p = c·(B − ε)` for `B > max(ε, 0)`.
#[derive(Debug, Clone, Copy)]
struct GapRoot {
    gap: f64,
    omega: f64,
    iterations: usize,
}

/// Solves the gap equation with a safeguarded Newton iteration in a log
/// variable chosen so that no step subtracts nearly equal numbers.
///
/// For `ε > 0` the unknown is `x = ln(B − ε)`, otherwise `x = ln B`; in both
/// cases the remaining sum `ε + e^x` or `e^x − ε` adds two non-negative
/// terms. `a` and `c` are strictly positive. For `p > 0` uniqueness is not
/// guaranteed and the first bracketed root is returned.
fn solve_gap(a: f64, p: f64, c: f64, eps: f64, settings: &SolverSettings) -> Result<GapRoot> {
    if p == 0.0 {
        return Ok(GapRoot {
            gap: eps + a / c,
            omega: a,
            iterations: 0,
        });
    }
    let ln_ac = a.ln() - c.ln();
    let above = eps > 0.0;
    // φ(x) is decreasing for p ≤ 0; returns (φ, φ′).
    let phi = |x: f64| -> (f64, f64) {
        let ex = x.exp();
        if above {
            let b = eps + ex;
            (ln_ac + p * b.ln() - x, p * ex / b - 1.0)
        } else {
            let excess = ex - eps;
            (ln_ac + p * x - excess.ln(), p - ex / excess)
        }
    };
    let gap_of = |x: f64| if above { eps + x.exp() } else { x.exp() };

    // Start from the solution that ignores ε, which is exact at ε = 0.
    let free = (ln_ac / (1.0 - p)).clamp(-700.0, 700.0);
    let guess = if above { ln_ac + p * eps.max(free.exp()).ln() } else { free };
    let step = settings.bracket_expansion.ln().max(0.1);
    let (mut lo, mut hi) = (guess - step, guess + step);
    let mut widen = step;
    let mut expansions = 0usize;
    while !(phi(lo).0 > 0.0) {
        widen *= settings.bracket_expansion;
        lo -= widen;
        expansions += 1;
        if expansions > settings.max_iter || lo < -745.0 {
            return Err(Error::NoSolution(format!(
                "gap ε + Ω/(a0Tc) underflows at ε = {eps}; no representable fixed point"
            )));
        }
    }
    widen = step;
    expansions = 0;
    while !(phi(hi).0 < 0.0) {
        widen *= settings.bracket_expansion;
        hi += widen;
        expansions += 1;
        if expansions > settings.max_iter || hi > 709.0 {
            return Err(Error::NoSolution(format!(
                "no sign change of the fixed-point function at ε = {eps} (p = {p})"
            )));
        }
    }

    let mut x = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
    let mut iterations = 0;
    loop {
        iterations += 1;
        let (fx, dfx) = phi(x);
        if fx == 0.0 {
            break;
        }
        if fx > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx < 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let scale = 4.0 * f64::EPSILON * next.abs().max(1.0);
        let dx = (next - x).abs();
        x = next;
        if dx <= scale || hi - lo <= scale {
            break;
        }
        if iterations >= settings.max_iter {
            return Err(Error::NonConvergence {
                what: "fluctuation gap".into(),
                iterations,
                best: a * gap_of(x).powf(p),
                residual: fx.abs(),
            });
        }
    }
    let gap = gap_of(x);
    Ok(GapRoot {
        gap,
        omega: a * gap.powf(p),
        iterations,
    })
}

fn check_temperature(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("temperature must be positive, got {t}")));
    }
    Ok(())
}

/// Harmonic correction from a known gap.
fn theta_from_gap(params: &ModelParams, t: f64, gap: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let kcal = coefficient_kcal(params)?;
    let ratio = t / params.tc;
    if params.d == 2.0 {
        return Ok(kcal * ratio);
    }
    if !(gap > 0.0) {
        return Err(Error::domain(format!(
            "ε + Ω/(a0Tc) = {gap} must be positive for Θ_d at d = {}",
            params.d
        )));
    }
    let theta = kcal * ratio * gap.powf(0.5 * params.d - 1.0);
    if !theta.is_finite() {
        return Err(Error::domain(format!("Θ_d is not finite at T = {t}")));
    }
    Ok(theta)
}

/// `Θ_d = 𝒦_d (T/Tc) (ε + Ω/(a0Tc))^{d/2−1}`.
pub fn solve_theta(params: &ModelParams, t: f64, omega: f64) -> Result<f64> {
    params.validate()?;
    if !(t >= 0.0) {
        return Err(Error::domain(format!("temperature must be non-negative, got {t}")));
    }
    let gap = params.reduced_temperature(t) + omega / (params.a0 * params.tc);
    theta_from_gap(params, t, gap)
}

/// Solves the anharmonic fixed point at temperature `t`.
pub fn solve_omega(params: &ModelParams, t: f64, settings: &SolverSettings) -> Result<FluctuationState> {
    params.validate()?;
    settings.validate()?;
    check_temperature(t)?;
    let eps = params.reduced_temperature(t);
    let c = params.a0 * params.tc;
    let p = 0.5 * params.d - 2.0;

    let kv = amplitude_per_volume(params)?.unwrap_or(0.0);
    let mut state = if kv == 0.0 {
        FluctuationState::bare(params, t)
    } else {
        let ratio = t / params.tc;
        let a = kv * ratio * ratio;
        let root = solve_gap(a, p, c, eps, settings)?;
        let residual = (root.omega - c * (root.gap - eps)).abs() / root.omega.max(1.0);
        FluctuationState {
            t,
            omega: root.omega,
            theta: None,
            gap: root.gap,
            domega_dt: 0.0,
            residual,
            iterations: root.iterations,
            converged: true,
        }
    };
    state.theta = theta_from_gap(params, t, state.gap).ok();
    state.domega_dt = domega_dt(params, &state)?;
    Ok(state)
}

/// Implicit derivative of the fixed point,
/// `[A′B^p + A p B^{p−1}/Tc] / [1 − A p B^{p−1}/(a0 Tc)]`.
///
/// Evaluated as `[2Ω/T + pΩ/(B Tc)] / [1 − pΩ/(B a0 Tc)]`, which is the same
/// expression with `A B^p = Ω` substituted.
pub fn domega_dt(params: &ModelParams, state: &FluctuationState) -> Result<f64> {
    if state.omega == 0.0 {
        return Ok(0.0);
    }
    let p = 0.5 * params.d - 2.0;
    let c = params.a0 * params.tc;
    let shape = if p == 0.0 { 0.0 } else { p * state.omega / state.gap };
    let denominator = 1.0 - shape / c;
    if denominator.abs() < 1e-14 {
        return Err(Error::SingularDerivative(format!(
            "1 − A p B^(p−1)/(a0Tc) = {denominator} at T = {}",
            state.t
        )));
    }
    Ok((2.0 * state.omega / state.t + shape / params.tc) / denominator)
}

/// Ω at the trial shift `δ = Tc − T*`: the gap equation with `ε` replaced by
/// `|ε(T*)| = δ/Tc`.
fn shifted_omega(params: &ModelParams, kv: f64, delta: f64, settings: &SolverSettings) -> Result<f64> {
    let t = params.tc - delta;
    if !(t > 0.0) {
        return Err(Error::Unphysical(format!(
            "fluctuation shift {delta} drives T* to {t} ≤ 0"
        )));
    }
    let ratio = t / params.tc;
    let a = kv * ratio * ratio;
    let p = 0.5 * params.d - 2.0;
    Ok(solve_gap(a, p, params.a0 * params.tc, delta / params.tc, settings)?.omega)
}

/// Locates `T*_c = Tc − Ω_dc/a0` together with `Ω_dc`.
///
/// At `T*` the signed reduced temperature `ε = −Ω_dc/(a0Tc)` cancels the
/// fluctuation term exactly, so the fixed point is closed with the magnitude
/// `|ε(T*)|` instead. The outer map `δ ↦ Ω(δ)/a0` is iterated on the shift
/// `δ = Tc − T*` (never on `T*` itself, which would lose the digits of very
/// narrow critical regions) with damping 0.5 and Aitken extrapolation.
pub fn solve_critical_point(params: &ModelParams, settings: &SolverSettings) -> Result<CriticalPoint> {
    params.validate()?;
    settings.validate()?;
    if params.d > 4.0 {
        return Err(Error::UnsupportedDimension(params.d));
    }
    let kv = match amplitude_per_volume(params)? {
        Some(kv) if kv != 0.0 => kv,
        _ => return Ok(CriticalPoint::unshifted(params)),
    };
    let c = params.a0 * params.tc;
    let p = 0.5 * params.d - 2.0;
    let map = |delta: f64| -> Result<f64> { Ok(shifted_omega(params, kv, delta, settings)? / params.a0) };

    // Closed-form start from w·c = (K/V)(2w)^p with T* ≈ Tc.
    let w0 = (kv * 2f64.powf(p) / c).powf(1.0 / (1.0 - p));
    if !(w0 < 1.0) {
        return Err(Error::Unphysical(format!(
            "fluctuation amplitude K_d/V = {kv} exceeds a0Tc; the shift would reach T ≤ 0"
        )));
    }
    let mut delta = w0 * params.tc;
    let mut history: Vec<f64> = vec![delta];
    let mut iterations = 0;
    loop {
        iterations += 1;
        let image = map(delta)?;
        let mut next = 0.5 * delta + 0.5 * image;
        history.push(next);
        if iterations >= 5 && history.len() >= 3 {
            let n = history.len();
            let (x0, x1, x2) = (history[n - 3], history[n - 2], history[n - 1]);
            let denom = x2 - 2.0 * x1 + x0;
            if denom != 0.0 {
                let accelerated = x2 - (x2 - x1) * (x2 - x1) / denom;
                if accelerated > 0.0 && accelerated < params.tc && accelerated.is_finite() {
                    next = accelerated;
                    history.clear();
                    history.push(next);
                }
            }
        }
        if !(next > 0.0) || next >= params.tc {
            return Err(Error::Unphysical(format!(
                "Ω_dc ≥ a0Tc (shift {next} of Tc = {}); T* would be non-positive",
                params.tc
            )));
        }
        let change = (next - delta).abs();
        delta = next;
        if change <= settings.rel_tol * delta {
            break;
        }
        if iterations >= settings.max_iter {
            return Err(Error::NonConvergence {
                what: "critical-point iteration".into(),
                iterations,
                best: params.tc - delta,
                residual: change / delta,
            });
        }
    }
    // Finish with an undamped evaluation so that Ω_dc is the map's own output.
    let omega_c = shifted_omega(params, kv, delta, settings)?;
    if omega_c >= c {
        return Err(Error::Unphysical(format!("Ω_dc = {omega_c} ≥ a0Tc = {c}")));
    }
    let cp = CriticalPoint::from_omega(params, omega_c, 0.0, iterations);
    Ok(CriticalPoint {
        eq30_residual: eq30_residual(params, kv, &cp, delta),
        ..cp
    })
}

/// `(d/2 − 2) ln(|ε| + w) − ln[(a0Tc)² Ω_dc / ((K_d/V)(a0Tc − Ω_dc)²)]` at the
/// solution. `|ε|` comes from the converged shift `δ` rather than from
/// `Tc − T*`, which would cancel when the width is tiny.
fn eq30_residual(params: &ModelParams, kv: f64, cp: &CriticalPoint, delta: f64) -> f64 {
    let c = params.a0 * params.tc;
    let w = cp.omega_c / c;
    let eps_abs = delta / params.tc;
    let p = 0.5 * params.d - 2.0;
    let lhs = if p == 0.0 { 0.0 } else { p * (eps_abs + w).ln() };
    let rhs = (c * c * cp.omega_c / (kv * (c - cp.omega_c).powi(2))).ln();
    lhs - rhs
}

/// `Δt_G = Ω_dc/(a0 Tc)`.
pub fn ginzburg_width(cp: &CriticalPoint, params: &ModelParams) -> f64 {
    cp.omega_c / (params.a0 * params.tc)
}

/// Returns `base` with `u0` chosen so that the critical point has Ginzburg
/// width `target_width`.
///
/// Because `K_d ∝ u0`, the fixed point `w·a0Tc = u0·k(1−w)²(2w)^p` can be
/// inverted for `u0` in closed form. The candidate is then re-solved and, if
/// needed, polished by a secant search in `ln u0` bracketed by the
/// monotonicity of the width in `u0`.
pub fn calibrate_to_width(target_width: f64, base: &ModelParams) -> Result<ModelParams> {
    calibrate_to_width_with(target_width, base, &SolverSettings::default())
}

pub fn calibrate_to_width_with(
    target_width: f64,
    base: &ModelParams,
    settings: &SolverSettings,
) -> Result<ModelParams> {
    base.validate()?;
    if !(target_width > 0.0 && target_width < 1.0) {
        return Err(Error::Calibration(format!(
            "target width must lie in (0, 1), got {target_width}"
        )));
    }
    if base.d >= 4.0 {
        return Err(Error::Calibration(format!(
            "width calibration needs d < 4, got {}",
            base.d
        )));
    }
    let unit = ModelParams { u0: 1.0, ..*base };
    let k_unit = amplitude_per_volume(&unit)?
        .ok_or_else(|| Error::Calibration("an infinite sample has zero width for every u0".into()))?;
    let c = base.a0 * base.tc;
    let p = 0.5 * base.d - 2.0;
    let w = target_width;
    let closed = w * c / (k_unit * (1.0 - w).powi(2) * (2.0 * w).powf(p));
    if !(closed.is_finite() && closed > 0.0) {
        return Err(Error::Calibration(format!(
            "target {target_width} unreachable: u0 estimate {closed}"
        )));
    }

    let width_of = |u0: f64| -> Result<f64> {
        let cp = solve_critical_point(&ModelParams { u0, ..*base }, settings)?;
        Ok(cp.ginzburg_width)
    };
    let accept = |got: f64| ((got - w) / w).abs() <= 1e-9;

    let mut u = closed;
    let mut got = width_of(u)?;
    if accept(got) {
        return Ok(ModelParams { u0: u, ..*base });
    }
    // Secant on ln(width) against ln(u0); the width is increasing in u0.
    let mut u_prev = u * if got < w { 1.5 } else { 1.0 / 1.5 };
    let mut got_prev = width_of(u_prev)?;
    for _ in 0..settings.max_iter {
        let f1 = got.ln() - w.ln();
        let f0 = got_prev.ln() - w.ln();
        if f1 == f0 {
            break;
        }
        let x1 = u.ln();
        let x0 = u_prev.ln();
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        u_prev = u;
        got_prev = got;
        u = x2.exp();
        got = width_of(u)?;
        if accept(got) {
            return Ok(ModelParams { u0: u, ..*base });
        }
    }
    Err(Error::Calibration(format!(
        "could not reach Δt_G = {target_width}; best u0 = {u} gives {got}"
    )))
}
