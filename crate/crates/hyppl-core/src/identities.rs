//! The identity ledger: every closed-form identity the assemblies lean on,
//! evaluated on parameter grids and reported in ratio form.
//!
//! Residue-type identities hold at lattice points where both sides vanish;
//! there the ratio is taken as the removable limit of lhs/rhs.

use crate::intertwine::{
    alpha_p, alpha_tilde, beta_p, beta_tilde, c_small, knapp_stein_b, omega, riesz_convolution_constant, riesz_convolution_quadrature,
    riesz_fourier_closed, riesz_fourier_numeric, riesz_u, RieszParams,
};
use crate::jacobi::{discrete_points, l_pair_recip, l_weight, KTypeJacobiSlot};
use crate::numerics::{
    closed_form_integral_oracles, gamma_raw, hyp2f1, hyp2f1_series, neg1_pow, removable_limit, rgamma, QuadratureSpec, C64, I,
};
use crate::plancherel::sigma_weight;
use crate::Result;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Ratio the Casselman family is expected to show (the printed closed form
/// lacks a factor π).
pub const CASSELMAN_RATIO: f64 = PI;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub family: String,
    pub params: String,
    pub lhs: C64,
    pub rhs: C64,
    pub ratio: C64,
    pub expected_ratio: f64,
    /// |ratio − expected_ratio|.
    pub deviation: f64,
}

impl IdentityCheck {
    fn new(family: &str, params: String, lhs: C64, rhs: C64, ratio: C64, expected_ratio: f64) -> Self {
        IdentityCheck {
            family: family.to_string(),
            params,
            lhs,
            rhs,
            ratio,
            expected_ratio,
            deviation: (ratio - expected_ratio).norm(),
        }
    }

    fn plain(family: &str, params: String, lhs: C64, rhs: C64) -> Self {
        Self::new(family, params, lhs, rhs, lhs / rhs, 1.0)
    }

    // both sides vanish at z0; ratio as the limit
    fn limit<F, G>(family: &str, params: String, lhs: F, rhs: G, z0: C64) -> Self
    where
        F: Fn(C64) -> C64,
        G: Fn(C64) -> C64,
    {
        let ratio = removable_limit(|z| lhs(z) / rhs(z), z0, 0.05, 16);
        let (a, b) = (removable_limit(&lhs, z0, 0.05, 16), removable_limit(&rhs, z0, 0.05, 16));
        Self::new(family, params, a, b, ratio, 1.0)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.deviation.is_finite() && self.deviation <= tol * self.expected_ratio.abs().max(1.0)
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// 2⁴c_m(ν)c_{−m}(−ν)ℓ₀(ν)ℓ₀(−ν) = c_m(ν−2)c_{−m}(−ν−2)ℓ₁(ν)ℓ₁(−ν)
///   = (2⁵(−1)^{1+ε}/π) cos²(π(ν+ε)/2)/(ν sin(πν/2)).
pub fn c_and_l() -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::new();
    for m in [2i32, 4, -6, 3, -1, 0, 1, 5] {
        let eps = m.rem_euclid(2) as f64;
        for nu in [c(0.3, 0.1), c(1.7, 0.0), c(0.0, 2.5), c(-0.6, 0.9)] {
            let s0 = KTypeJacobiSlot::new(0, m)?;
            let s1 = KTypeJacobiSlot::new(1, m)?;
            let cs = (PI * (nu + eps) / 2.0).cos();
            let rhs = 32.0 * neg1_pow(1 + eps as i64) / PI * cs * cs / (nu * (PI * nu / 2.0).sin());
            let l0 = l_weight(s0, nu)? * l_weight(s0, -nu)?;
            let l1 = l_weight(s1, nu)? * l_weight(s1, -nu)?;
            let params = format!("m={m}, nu={nu}");
            out.push(IdentityCheck::plain(
                "c_and_l_j0",
                params.clone(),
                16.0 * c_small(m, nu) * c_small(-m, -nu) * l0,
                rhs,
            ));
            out.push(IdentityCheck::plain(
                "c_and_l_j1",
                params,
                c_small(m, nu - 2.0) * c_small(-m, -nu - 2.0) * l1,
                rhs,
            ));
        }
    }
    Ok(out)
}

/// Σ_ξ|ω^ξ_m|² = 4, ω⁰_m − ω¹_m = 2 and ω⁰_m + ω¹_m = 2(−i)^m; together
/// they force Σ_ξ ω^ξ_m ω̄^{1−ξ}_m = 0.
pub fn omega_sums() -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    for m in -9..=9 {
        let (w0, w1) = (omega(m, 0), omega(m, 1));
        let params = format!("m={m}");
        out.push(IdentityCheck::plain(
            "omega_norm",
            params.clone(),
            c(w0.norm_sqr() + w1.norm_sqr(), 0.0),
            c(4.0, 0.0),
        ));
        out.push(IdentityCheck::plain("omega_difference", params.clone(), w0 - w1, c(2.0, 0.0)));
        let cross = w0 * w1.conj() + w1 * w0.conj();
        out.push(IdentityCheck::plain(
            "omega_cross",
            params.clone(),
            c(4.0, 0.0) + cross,
            c(4.0, 0.0),
        ));
        out.push(IdentityCheck::plain("omega_total", params, w0 + w1, 2.0 * c(0.0, -1.0).powi(m)));
    }
    out
}

fn l_pair(slot: KTypeJacobiSlot, z: C64) -> C64 {
    1.0 / l_pair_recip(slot, z)
}

/// ε = 0: (−2π)α_mα̃_mℓ₀(μ)ℓ₀(−μ) = 16π²cot(πμ/2)σ(μ)/μ on D₀ and
/// (π/2)β_mβ̃_mℓ₁(μ)ℓ₁(−μ) = the same on D₁.
pub fn residue_identities_eps0() -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::new();
    let rhs = |z: C64| 16.0 * PI * PI * (PI * z / 2.0).cos() / (PI * z / 2.0).sin() * sigma_weight(z) / z;
    for m in [2i32, 4, 6, 8, 10, -6, -8] {
        for j in 0..2u8 {
            let slot = KTypeJacobiSlot::new(j, m)?;
            for mu in discrete_points(slot) {
                let z0 = c(mu, 0.0);
                let params = format!("m={m}, mu={mu}");
                out.push(if j == 0 {
                    IdentityCheck::limit(
                        "residue_eps0_d0",
                        params,
                        |z| -2.0 * PI * alpha_p(m, z) * alpha_tilde(m, z) * l_pair(slot, z),
                        rhs,
                        z0,
                    )
                } else {
                    IdentityCheck::limit(
                        "residue_eps0_d1",
                        params,
                        |z| PI / 2.0 * beta_p(m, z) * beta_tilde(m, z) * l_pair(slot, z),
                        rhs,
                        z0,
                    )
                });
            }
        }
    }
    Ok(out)
}

/// ε = 1: (−2π)α_mℓ₀(μ)ℓ₀(−μ) = 4i(−1)^{(|m|−1)/2} sin(πμ/2)/μ on D₀ and
/// (π/2)β_mℓ₁(μ)ℓ₁(−μ) = 4i(−1)^{(|m|+1)/2} sin(πμ/2)/μ on D₁, with
/// α_m = i(−1)^{(|m|+1)/2}c_m(μ)c_{−m}(−μ), β_m = ¼i(−1)^{(|m|+1)/2}c_m(μ−2)c_{−m}(−μ−2).
pub fn residue_identities_eps1() -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::new();
    for m in [3i32, 5, 7, 9, -5, -7, -9] {
        let h = (m.abs() + 1) / 2;
        let s = neg1_pow(h as i64);
        for j in 0..2u8 {
            let slot = KTypeJacobiSlot::new(j, m)?;
            for mu in discrete_points(slot) {
                let z0 = c(mu, 0.0);
                let params = format!("m={m}, mu={mu}");
                out.push(if j == 0 {
                    IdentityCheck::limit(
                        "residue_eps1_d0",
                        params,
                        |z| -2.0 * PI * I * s * c_small(m, z) * c_small(-m, -z) * l_pair(slot, z),
                        |z| 4.0 * I * neg1_pow(h as i64 - 1) * (PI * z / 2.0).sin() / z,
                        z0,
                    )
                } else {
                    IdentityCheck::limit(
                        "residue_eps1_d1",
                        params,
                        |z| PI / 2.0 * 0.25 * I * s * c_small(m, z - 2.0) * c_small(-m, -z - 2.0) * l_pair(slot, z),
                        |z| 4.0 * I * s * (PI * z / 2.0).sin() / z,
                        z0,
                    )
                });
            }
        }
    }
    Ok(out)
}

/// T⁰_μ𝔸_μ = (√π 2^μ/Γ((1−μ)/2)) 𝔸_{−μ} on each K-type, for both the J₀
/// and the J₁ coefficient (the transforms are even in μ).
pub fn t0_functional_equation() -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::new();
    for m in [0i32, 2, 4, 6, -2, -6] {
        for mu in [c(0.3, 0.7), c(-0.4, 1.9), c(0.0, 0.6), c(1.2, -0.5)] {
            let b = knapp_stein_b(0, m, mu)?;
            let k = PI.sqrt() * C64::new(2.0, 0.0).powc(mu) * rgamma((1.0 - mu) / 2.0);
            let params = format!("m={m}, mu={mu}");
            out.push(IdentityCheck::plain(
                "t0_functional_j0",
                params.clone(),
                b * alpha_tilde(m, mu),
                k * alpha_tilde(m, -mu),
            ));
            out.push(IdentityCheck::plain(
                "t0_functional_j1",
                params,
                b * beta_tilde(m, mu),
                k * beta_tilde(m, -mu),
            ));
        }
    }
    Ok(out)
}

/// The integral formulas (Casselman, Gradshteyn–Ryzhik, Beta) and the
/// Riesz convolution and Fourier identities, by quadrature.
pub fn integral_oracles() -> Result<Vec<IdentityCheck>> {
    let mut out: Vec<IdentityCheck> = closed_form_integral_oracles()?
        .into_iter()
        .map(|r| {
            let expected = if r.id == "casselman" { CASSELMAN_RATIO } else { 1.0 };
            IdentityCheck::new(&r.id, r.params, r.lhs, r.rhs, r.ratio, expected)
        })
        .collect();
    let rp = |epsilon: u8, re: f64, im: f64| RieszParams { epsilon, alpha: c(re, im) };
    let spec = QuadratureSpec::with_tol(1e-14, 1e-12);
    for (a, b) in [
        (rp(0, -0.6, 0.2), rp(0, -0.7, -0.1)),
        (rp(1, -0.5, 0.3), rp(0, -0.8, 0.0)),
        (rp(1, -0.75, 0.0), rp(1, -0.45, 0.4)),
    ] {
        let target = RieszParams {
            epsilon: (a.epsilon + b.epsilon) % 2,
            alpha: a.alpha + b.alpha + 1.0,
        };
        for x in [0.7, -1.9] {
            out.push(IdentityCheck::plain(
                "riesz_convolution",
                format!("a={:?}, b={:?}, x={x}", a, b),
                riesz_convolution_quadrature(a, b, x, &spec)?,
                riesz_convolution_constant(a, b) * riesz_u(target, x),
            ));
        }
    }
    for p in [rp(0, -0.4, 0.0), rp(1, -0.3, 0.7), rp(0, 0.5, -0.2)] {
        for w in [1.0, -2.5] {
            out.push(IdentityCheck::plain(
                "riesz_fourier",
                format!("u={:?}, w={w}", p),
                riesz_fourier_numeric(p, w)?,
                riesz_fourier_closed(p, w),
            ));
        }
    }
    Ok(out)
}

/// Every family above.
pub fn identity_suite() -> Result<Vec<IdentityCheck>> {
    let mut out = substrate_identities()?;
    out.extend(c_and_l()?);
    out.extend(omega_sums());
    out.extend(residue_identities_eps0()?);
    out.extend(residue_identities_eps1()?);
    out.extend(t0_functional_equation()?);
    out.extend(integral_oracles()?);
    Ok(out)
}

/// Γ reflection and duplication, and the Euler and Pfaff transformations
/// of ₂F₁ (on z ≤ 0, where [`hyp2f1`] switches between its three regimes).
pub fn substrate_identities() -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::new();
    for z in [c(0.3, 0.0), c(0.25, 1.5), c(-2.7, 0.4), c(5.5, -3.0), c(0.5, 12.0), c(-7.3, -0.2)] {
        let params = format!("z={z}");
        out.push(IdentityCheck::plain(
            "gamma_reflection",
            params.clone(),
            gamma_raw(z) * gamma_raw(1.0 - z),
            PI / (PI * z).sin(),
        ));
        out.push(IdentityCheck::plain(
            "gamma_duplication",
            params,
            gamma_raw(z) * gamma_raw(z + 0.5),
            C64::new(2.0, 0.0).powc(1.0 - 2.0 * z) * PI.sqrt() * gamma_raw(2.0 * z),
        ));
    }
    for (a, b, cc) in [
        (c(0.3, 0.2), c(1.1, -0.4), c(1.7, 0.0)),
        (c(0.75, 1.0), c(0.75, -1.0), c(1.5, 0.0)),
        (c(-0.5, 0.3), c(2.0, 0.0), c(2.5, 0.1)),
        (c(1.25, 0.0), c(0.25, 0.0), c(3.0, 0.0)),
    ] {
        for z in [-0.3, -0.9, -1.5, -6.0, -40.0] {
            let f = hyp2f1(a, b, cc, z)?;
            let params = format!("a={a}, b={b}, c={cc}, z={z}");
            let euler = C64::new(1.0 - z, 0.0).powc(cc - a - b) * hyp2f1(cc - a, cc - b, cc, z)?;
            out.push(IdentityCheck::plain("hyp2f1_euler", params.clone(), f, euler));
            if z >= -1.5 {
                let w = C64::new(z / (z - 1.0), 0.0);
                let pfaff = C64::new(1.0 - z, 0.0).powc(-a) * hyp2f1_series(a, cc - b, cc, w)?;
                out.push(IdentityCheck::plain("hyp2f1_pfaff", params, f, pfaff));
            }
        }
    }
    Ok(out)
}
