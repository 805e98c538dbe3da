//! Complex Gamma via Lanczos (g = 607/128) with reflection.

use super::{NumericsError, C64};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_P: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `x ∈ {0, −1, −2, …}` as a complex point on the real axis.
pub fn is_nonpositive_integer(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

// sin(πx) for real x with exact argument reduction
fn sinpi_real(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).round();
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

fn cospi_real(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).round();
    sinpi_real(0.5 - r.abs())
}

/// sin(πz), exact zeros at the integers.
pub fn sinpi(z: C64) -> C64 {
    let (py_c, py_s) = ((PI * z.im).cosh(), (PI * z.im).sinh());
    C64::new(sinpi_real(z.re) * py_c, cospi_real(z.re) * py_s)
}

// ln Γ(z) for Re z ≥ 1/2; branch is irrelevant after exponentiation
fn ln_gamma_right(z: C64) -> C64 {
    let z = z - 1.0;
    let mut acc = C64::new(LANCZOS_P[0], 0.0);
    for (k, &p) in LANCZOS_P.iter().enumerate().skip(1) {
        acc += p / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (z + 0.5) * t.ln() - t + acc.ln() + LN_SQRT_2PI
}

/// ln Γ(z) on the principal sheet of the logarithm of the Lanczos sum.
/// Only `exp(ln_gamma(z))` and `Re ln_gamma(z)` are meaningful.
pub fn ln_gamma(z: C64) -> C64 {
    if z.re >= 0.5 {
        ln_gamma_right(z)
    } else {
        // ln π − ln sin(πz) − ln Γ(1−z)
        C64::new(PI.ln(), 0.0) - sinpi(z).ln() - ln_gamma_right(1.0 - z)
    }
}

/// Γ(z), infinite at the poles.
pub fn gamma_raw(z: C64) -> C64 {
    if is_nonpositive_integer(z) {
        return C64::new(f64::INFINITY, 0.0);
    }
    if z.re >= 0.5 {
        ln_gamma_right(z).exp()
    } else {
        PI / (sinpi(z) * ln_gamma_right(1.0 - z).exp())
    }
}

/// Γ(z); a pole input is an error carrying its location.
pub fn gamma(z: C64) -> Result<C64, NumericsError> {
    if is_nonpositive_integer(z) {
        return Err(NumericsError::Pole { location: z });
    }
    Ok(gamma_raw(z))
}

/// 1/Γ(z), entire: exactly zero at the poles of Γ.
pub fn rgamma(z: C64) -> C64 {
    if is_nonpositive_integer(z) {
        return C64::new(0.0, 0.0);
    }
    if z.re >= 0.5 {
        (-ln_gamma_right(z)).exp()
    } else {
        sinpi(z) * ln_gamma_right(1.0 - z).exp() / PI
    }
}

/// (x)_n = x(x+1)⋯(x+n−1), with (x)_0 = 1.
pub fn pochhammer(x: C64, n: u32) -> C64 {
    (0..n).fold(C64::new(1.0, 0.0), |acc, k| acc * (x + k as f64))
}

/// B(x, y) = Γ(x)Γ(y)/Γ(x+y).
pub fn beta(x: C64, y: C64) -> C64 {
    gamma_raw(x) * gamma_raw(y) * rgamma(x + y)
}
