#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use crate::error::{Error, Result};

// Lanczos approximation, g = 607/128, 15 terms (Godfrey's coefficients).
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_091_82,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];

fn lanczos_sum(x: f64) -> f64 {
    LANCZOS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS[0], |acc, (k, c)| acc + c / (x + (k + 1) as f64))
}

/// Γ(z) for real `z > 0`.
pub fn gamma_fn(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain(format!("gamma_fn requires z > 0, got {z}")));
    }
    if z < 0.5 {
        // Γ(z) = Γ(z+1)/z keeps the Lanczos sum in its accurate range.
        return Ok(gamma_fn(z + 1.0)? / z);
    }
    if z == z.floor() && z <= 23.0 {
        // Exact for small integers.
        return Ok((1..z as u64).fold(1.0, |acc, k| acc * k as f64));
    }
    let x = z - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let sum = lanczos_sum(x);
    // t^(x+0.5) split in two halves so it does not overflow before e^-t.
    let half = t.powf(0.5 * (x + 0.5));
    Ok((2.0 * PI).sqrt() * half * ((-t).exp() * half) * sum)
}

/// ln Γ(z) for real `z > 0`.
pub fn ln_gamma(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain(format!("ln_gamma requires z > 0, got {z}")));
    }
    if z < 0.5 {
        return Ok(ln_gamma(z + 1.0)? - z.ln());
    }
    let x = z - 1.0;
    let t = x + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + lanczos_sum(x).ln())
}

/// (2n − 1)!! with the convention (−1)!! = 1.
pub fn double_factorial_odd(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * (2 * k - 1) as f64)
}
