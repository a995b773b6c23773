//! Applications of the renormalized coefficients: Weiss magnetism, the
//! Curie temperature of thin films, and superconducting lengths and
//! paraconductivity.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{dimension_integral, DimensionIntegral, Extent, ModelParams, PhysicalConstants};
use crate::selfconsist::{CriticalPoint, FluctuationState};
use crate::specfun::gamma_fn;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MagnetParams {
    /// Curie constant `C`.
    pub curie_constant: f64,
    /// Bare Weiss-field coefficient `N_W`.
    pub weiss_coefficient: f64,
    pub base: ModelParams,
}

impl MagnetParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.curie_constant > 0.0) {
            return Err(Error::invalid("curie_constant must be positive"));
        }
        self.base.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilmParams {
    /// Film thickness in units of a material length scale.
    pub l0: f64,
    pub base: ModelParams,
}

/// Sample shape for the conductivity formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Geometry {
    /// Large in every direction; uses `base.d`.
    Bulk,
    /// Thin film of the given thickness, effectively two dimensional.
    Film { thickness: f64 },
    /// Wire with thickness `ℓ` and width `ϱ`, effectively one dimensional.
    Wire { thickness: f64, width: f64 },
}

impl Geometry {
    /// Effective dimension: `base_d` for bulk, 2 for a film, 1 for a wire.
    pub fn dimension(&self, base_d: f64) -> f64 {
        match self {
            Geometry::Bulk => base_d,
            Geometry::Film { .. } => 2.0,
            Geometry::Wire { .. } => 1.0,
        }
    }

    /// Cross-section divisor applied to the conductance.
    fn divisor(&self) -> f64 {
        match *self {
            Geometry::Bulk => 1.0,
            Geometry::Film { thickness } => thickness,
            Geometry::Wire { thickness, width } => thickness * width,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperconductorParams {
    pub constants: PhysicalConstants,
    pub geometry: Geometry,
    pub base: ModelParams,
}

impl SuperconductorParams {
    pub fn validate(&self) -> Result<()> {
        self.constants.validate()?;
        self.base.validate()?;
        let lengths = match self.geometry {
            Geometry::Bulk => vec![],
            Geometry::Film { thickness } => vec![thickness],
            Geometry::Wire { thickness, width } => vec![thickness, width],
        };
        if lengths.iter().any(|l| !(*l > 0.0)) {
            return Err(Error::invalid("geometric lengths must be positive"));
        }
        let d = self.geometry.dimension(self.base.d);
        if d != self.base.d {
            return Err(Error::invalid(format!(
                "{:?} geometry is {d}-dimensional but base.d = {}",
                self.geometry, self.base.d
            )));
        }
        Ok(())
    }

    /// `ξ_GLW(0) = ħ/√(2 m a0 Tc)`.
    pub fn xi_glw_zero(&self) -> f64 {
        let c = &self.constants;
        c.hbar / (2.0 * c.mass * self.base.a0 * self.base.tc).sqrt()
    }

    /// Rate constant `Υ = 8 kB/(a0 ħ π)`.
    pub fn upsilon(&self) -> f64 {
        8.0 * self.base.kb / (self.base.a0 * self.constants.hbar * PI)
    }

    /// Bare Ginzburg-Landau parameter `κ = √(m² b/(μ0 ħ² e²))`.
    pub fn kappa_bare(&self) -> Result<f64> {
        kappa_of(&self.constants, self.base.b)
    }
}

/// Renormalized penetration depth, coherence length and their ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlLengths {
    pub lambda_star: f64,
    pub xi_glw_star: f64,
    pub kappa_star: f64,
}

/// Outcome of the film Curie-temperature formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilmTransition {
    /// Ordered below this temperature (zero exactly at `l0 = π`).
    At(f64),
    /// The formula gives a negative temperature: the film stays disordered.
    NoTransition { formula_value: f64 },
}

impl FilmTransition {
    pub fn temperature(&self) -> Option<f64> {
        match *self {
            FilmTransition::At(t) => Some(t),
            FilmTransition::NoTransition { .. } => None,
        }
    }
}

/// `ν_d = Ω_dc/(a0 Tc)`, the ratio of anharmonic to thermal energy.
pub fn nu_d(cp: &CriticalPoint, params: &ModelParams) -> f64 {
    cp.omega_c / (params.a0 * params.tc)
}

/// Internal field `H*_m = N_W (1 − ν_d) M`.
pub fn weiss_field(mp: &MagnetParams, cp: &CriticalPoint, magnetization: f64) -> f64 {
    mp.weiss_coefficient * (1.0 - nu_d(cp, &mp.base)) * magnetization
}

/// Curie-Weiss law `C/|T − T*|`.
pub fn magnetic_susceptibility(mp: &MagnetParams, cp: &CriticalPoint, t: f64) -> Result<f64> {
    let dt = (t - cp.t_star).abs();
    if dt == 0.0 {
        return Err(Error::Pole {
            what: "magnetic susceptibility".into(),
            at: t,
        });
    }
    Ok(mp.curie_constant / dt)
}

/// Bulk-only finite-size estimate `Tc − π²/(a0 L²)`. May be negative.
pub fn film_tc_bare(base: &ModelParams, l: f64) -> Result<f64> {
    if !(l > 0.0) {
        return Err(Error::domain(format!("film thickness must be positive, got {l}")));
    }
    Ok(base.tc - PI * PI / (base.a0 * l * l))
}

/// `T*_c(l0) = Tc (1 − Ω_dc/(a0 Tc)) (1 − (π/l0)²)`.
pub fn film_tc_renormalized(fp: &FilmParams, cp: &CriticalPoint) -> Result<FilmTransition> {
    if !(fp.l0 > 0.0) {
        return Err(Error::domain(format!("l0 must be positive, got {}", fp.l0)));
    }
    let ratio = PI / fp.l0;
    let value = fp.base.tc * (1.0 - nu_d(cp, &fp.base)) * (1.0 - ratio * ratio);
    Ok(if value >= 0.0 {
        FilmTransition::At(value)
    } else {
        FilmTransition::NoTransition {
            formula_value: value,
        }
    })
}

fn kappa_of(c: &PhysicalConstants, b_star: f64) -> Result<f64> {
    if !(b_star > 0.0) {
        return Err(Error::Stability(format!("b* = {b_star} ≤ 0")));
    }
    Ok((c.mass * c.mass * b_star / (c.mu0 * c.hbar * c.hbar * c.charge * c.charge)).sqrt())
}

/// `λ* = √(m b*/(2 μ0 e² |a*|))`, `ξ*_GLW = ħ/√(2 m |a*|)` and `κ* = λ*/ξ*`.
pub fn gl_lengths(
    sp: &SuperconductorParams,
    t: f64,
    fluct: &FluctuationState,
    cp: &CriticalPoint,
) -> Result<GlLengths> {
    let a_star = sp.base.a0 * (t - cp.t_star);
    let b_star = sp.base.b + fluct.theta_or_zero();
    let kappa_star = kappa_of(&sp.constants, b_star)?;
    if a_star == 0.0 {
        return Err(Error::Pole {
            what: "Ginzburg-Landau lengths (a* = 0)".into(),
            at: t,
        });
    }
    let c = &sp.constants;
    let lambda_star = (c.mass * b_star / (2.0 * c.mu0 * c.charge * c.charge * a_star.abs())).sqrt();
    let xi_glw_star = c.hbar / (2.0 * c.mass * a_star.abs()).sqrt();
    Ok(GlLengths {
        lambda_star,
        xi_glw_star,
        kappa_star,
    })
}

/// `τ_q = 2m/(Υ ħ² (q² + ξ*⁻²))`.
pub fn relaxation_time(sp: &SuperconductorParams, q: f64, xi_glw_star: f64) -> Result<f64> {
    if !(xi_glw_star > 0.0) {
        return Err(Error::domain(format!("ξ*_GLW must be positive, got {xi_glw_star}")));
    }
    let c = &sp.constants;
    Ok(2.0 * c.mass / (sp.upsilon() * c.hbar * c.hbar * (q * q + xi_glw_star.powi(-2))))
}

/// `ℵ_d = 2^{1−d} π^{1−d/2} / (d Γ(d/2)) · ∫ x^{d+1}/(1+x²)³ dx`.
pub fn aleph(d: f64, x_c: Extent) -> Result<f64> {
    let i3 = dimension_integral(DimensionIntegral::I3, d, x_c)?;
    Ok(2f64.powf(1.0 - d) * PI.powf(1.0 - 0.5 * d) / (d * gamma_fn(0.5 * d)?) * i3)
}

fn paracond_checks(sp: &SuperconductorParams, t: f64, fluct: &FluctuationState, cp: &CriticalPoint) -> Result<f64> {
    if !(t > cp.t_star) {
        return Err(Error::OutOfRegime(format!(
            "paraconductivity is defined only above T* = {}, got T = {t}",
            cp.t_star
        )));
    }
    let gap = fluct.gap_at(&sp.base, t);
    if !(gap > 0.0) {
        return Err(Error::domain(format!("ε + Ω/(a0Tc) = {gap} must be positive")));
    }
    Ok(gap)
}

/// Excess conductivity above `T*` for any dimension, with `ℵ_d` computed
/// from its integral at infinite cutoff.
pub fn paraconductivity(
    sp: &SuperconductorParams,
    t: f64,
    fluct: &FluctuationState,
    cp: &CriticalPoint,
) -> Result<f64> {
    let d = sp.geometry.dimension(sp.base.d);
    let aleph_d = aleph(d, Extent::Infinite)?;
    paraconductivity_with_aleph(sp, t, fluct, cp, aleph_d)
}

/// As [`paraconductivity`] with a caller-supplied `ℵ_d`.
pub fn paraconductivity_with_aleph(
    sp: &SuperconductorParams,
    t: f64,
    fluct: &FluctuationState,
    cp: &CriticalPoint,
    aleph_d: f64,
) -> Result<f64> {
    let gap = paracond_checks(sp, t, fluct, cp)?;
    let d = sp.geometry.dimension(sp.base.d);
    let c = &sp.constants;
    let xi0 = sp.xi_glw_zero();
    let suppression = 1.0 - nu_d(cp, &sp.base);
    Ok(aleph_d * c.charge * c.charge * xi0.powf(2.0 - d) / c.hbar * suppression * gap.powf(0.5 * d - 2.0)
        / sp.geometry.divisor())
}

/// Bulk three-dimensional form `e²/(32 ħ ξ_GLW(0)) (1 − ν_d) gap^{−1/2}`.
pub fn paraconductivity_3d(
    sp: &SuperconductorParams,
    t: f64,
    fluct: &FluctuationState,
    cp: &CriticalPoint,
) -> Result<f64> {
    let gap = paracond_checks(sp, t, fluct, cp)?;
    let c = &sp.constants;
    Ok(c.charge * c.charge / (32.0 * c.hbar * sp.xi_glw_zero()) * (1.0 - nu_d(cp, &sp.base)) / gap.sqrt())
}

/// Thin-film form `e²/(16 L ħ) (1 − ν_d) gap^{−1}`.
pub fn paraconductivity_2d(
    sp: &SuperconductorParams,
    t: f64,
    fluct: &FluctuationState,
    cp: &CriticalPoint,
) -> Result<f64> {
    let Geometry::Film { thickness } = sp.geometry else {
        return Err(Error::invalid("the two-dimensional form needs a film geometry"));
    };
    let gap = paracond_checks(sp, t, fluct, cp)?;
    let c = &sp.constants;
    Ok(c.charge * c.charge / (16.0 * thickness * c.hbar) * (1.0 - nu_d(cp, &sp.base)) / gap)
}

/// Wire form `π e² ξ_GLW(0)/(16 ℓ ϱ ħ) (1 − ν_d) gap^{−3/2}`.
pub fn paraconductivity_1d(
    sp: &SuperconductorParams,
    t: f64,
    fluct: &FluctuationState,
    cp: &CriticalPoint,
) -> Result<f64> {
    let Geometry::Wire { thickness, width } = sp.geometry else {
        return Err(Error::invalid("the one-dimensional form needs a wire geometry"));
    };
    let gap = paracond_checks(sp, t, fluct, cp)?;
    let c = &sp.constants;
    Ok(PI * c.charge * c.charge * sp.xi_glw_zero() / (16.0 * thickness * width * c.hbar)
        * (1.0 - nu_d(cp, &sp.base))
        * gap.powf(-1.5))
}

/// Coefficient `2e²Ω/(m b*)` of the vector potential in the fluctuation
/// supercurrent; the full current is `j_GL + j_fluct`.
pub fn fluctuation_current_factor(
    params: &ModelParams,
    constants: &PhysicalConstants,
    fluct: &FluctuationState,
) -> Result<f64> {
    let b_star = params.b + fluct.theta_or_zero();
    if !(b_star > 0.0) {
        return Err(Error::Stability(format!("b* = {b_star} ≤ 0")));
    }
    Ok(2.0 * constants.charge * constants.charge * fluct.omega / (constants.mass * b_star))
}
