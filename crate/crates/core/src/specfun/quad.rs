//! Globally adaptive 21-point Gauss-Kronrod quadrature.
//!
//! Semi-infinite ranges are mapped onto `(0, 1)` with `x = t / (1 - t)`;
//! the Kronrod rule never touches the endpoints, so integrands only need to
//! be finite on the open interval.

#![allow(clippy::excessive_precision)]

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Extent;

/// Kronrod abscissae, positive half, descending. Odd indices are the
/// 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_067_630_437,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Tolerances and range for [`integrate`]. The lower limit is always 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub upper_limit: Extent,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
            upper_limit: Extent::Infinite,
        }
    }
}

impl QuadratureSpec {
    pub fn to(upper_limit: Extent) -> Self {
        Self {
            upper_limit,
            ..Self::default()
        }
    }

    /// Purely relative target, for integrands whose magnitude is far from 1.
    pub fn relative(rel_tol: f64, upper_limit: Extent) -> Self {
        Self {
            abs_tol: f64::MIN_POSITIVE,
            rel_tol,
            max_subdivisions: 4000,
            upper_limit,
        }
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::invalid("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions must be at least 1"));
        }
        if let Extent::Finite(u) = self.upper_limit {
            if !(u > 0.0 && u.is_finite()) {
                return Err(Error::invalid(format!(
                    "finite upper limit must be positive, got {u}"
                )));
            }
        }
        Ok(())
    }
}

/// Integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

/// `∫₀^upper f(x) dx` under `spec`.
pub fn integrate<F>(f: F, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    match spec.upper_limit {
        Extent::Finite(b) => adaptive(&f, 0.0, b, spec),
        Extent::Infinite => {
            let g = |t: f64| {
                let s = 1.0 - t;
                f(t / s) / (s * s)
            };
            adaptive(&g, 0.0, 1.0, spec)
        }
    }
}

/// `∫ₐᵇ f(x) dx` for a finite interval, using the tolerances of `spec`
/// (its `upper_limit` is ignored).
pub fn integrate_interval<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid("integrate_interval needs finite limits"));
    }
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
        });
    }
    if b < a {
        let est = adaptive(&f, b, a, spec)?;
        return Ok(Estimate {
            value: -est.value,
            ..est
        });
    }
    adaptive(&f, a, b, spec)
}

/// `∫_{-∞}^{∞} f(x) dx`, split at zero.
pub fn integrate_real_line<F>(f: F, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    let inf = QuadratureSpec {
        upper_limit: Extent::Infinite,
        ..*spec
    };
    let right = integrate(&f, &inf)?;
    let left = integrate(|x| f(-x), &inf)?;
    Ok(Estimate {
        value: left.value + right.value,
        error: left.error + right.error,
        subdivisions: left.subdivisions + right.subdivisions,
    })
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn adaptive<F>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(f64) -> f64 + ?Sized,
{
    let first = kronrod21(f, a, b);
    if !first.value.is_finite() {
        return Err(Error::domain("integrand is not finite on the integration range"));
    }
    let mut segments = vec![first];
    let mut total = first.value;
    let mut total_err = first.error;

    loop {
        let target = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= target {
            break;
        }
        if segments.len() >= spec.max_subdivisions {
            return Err(Error::Accuracy {
                value: total,
                error: total_err,
                subdivisions: segments.len(),
            });
        }
        // Bisect the segment with the largest error; ties go to the leftmost
        // one so the refinement order is deterministic.
        let (idx, worst) = segments
            .iter()
            .enumerate()
            .fold((0, segments[0]), |best, (i, s)| {
                if s.error > best.1.error {
                    (i, *s)
                } else {
                    best
                }
            });
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Interval is at floating-point resolution; no further progress possible.
            return Err(Error::Accuracy {
                value: total,
                error: total_err,
                subdivisions: segments.len(),
            });
        }
        let left = kronrod21(f, worst.a, mid);
        let right = kronrod21(f, mid, worst.b);
        if !(left.value.is_finite() && right.value.is_finite()) {
            return Err(Error::domain("integrand is not finite on the integration range"));
        }
        segments[idx] = left;
        segments.push(right);
        // Re-summing keeps the running totals free of cancellation drift.
        total = segments.iter().map(|s| s.value).sum();
        total_err = segments.iter().map(|s| s.error).sum();
    }

    Ok(Estimate {
        value: total,
        error: total_err,
        subdivisions: segments.len(),
    })
}

fn kronrod21<F>(f: &F, a: f64, b: f64) -> Segment
where
    F: Fn(f64) -> f64 + ?Sized,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let fc = f(center);
    let mut res_gauss = 0.0;
    let mut res_kronrod = fc * WGK[10];
    let mut res_abs = res_kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_kronrod * half;
    let error = rescale_error(
        ((res_kronrod - res_gauss) * half).abs(),
        res_abs * abs_half,
        res_asc * abs_half,
    );
    Segment { a, b, value, error }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err;
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}
