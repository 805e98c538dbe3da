//! λ ≠ 0: the A-images by direct kernel quadrature, their comparison with
//! the λ = 0 images of ankh-transported functions, and the P/A duality.

use crate::geometry::HyperboloidFunction;
use crate::intertwine::{a_bold_from_transforms, a_kernel_quadrature, ankh_apply, p_kernel_quadrature, p_on_ktype, KTypeCoefficients};
use crate::jacobi::{ForwardRule, KTypeJacobiSlot};
use crate::numerics::{gamma_raw, integrate_adaptive, rgamma, Interval, NumericsError, QuadratureSpec, C64};
use crate::Result;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// 𝐀^ξ_{λ,μ} f = A^ξ_{λ,μ} f / Γ((1−μ)/2) for any imaginary λ = f.lambda.
#[allow(non_snake_case)]
pub fn lambda_extended_A(xi: u8, f: &HyperboloidFunction, mu: C64, spec: &QuadratureSpec) -> Result<KTypeCoefficients> {
    Ok(a_kernel_quadrature(xi, f, mu, spec)?.scaled(rgamma((1.0 - mu) / 2.0)))
}

/// The λ-dependence of the discrete prefactors relative to λ = 0:
/// Γ((k+μ+λ)/4)Γ((k−μ)/4) / (Γ((k+μ)/4)Γ((k−μ−λ)/4)), k = 1 + 2ξ.
/// Exactly 1 at λ = 0; 0 at the poles of Γ((k+μ)/4) otherwise.
pub fn discrete_lambda_factor(xi: u8, lambda: C64, mu: f64) -> C64 {
    if lambda == C64::new(0.0, 0.0) {
        return C64::new(1.0, 0.0);
    }
    let k = 1.0 + 2.0 * xi as f64;
    let z = C64::new(mu, 0.0);
    gamma_raw((k + z + lambda) / 4.0) * gamma_raw((k - z) / 4.0) * rgamma((k + z) / 4.0) * rgamma((k - z - lambda) / 4.0)
}

/// 𝔸_{λ,μ} f = r⁰·(Γ((3−μ)/4)/Γ((1−μ)/4)) 𝐀⁰ + r¹·(Γ((1−μ)/4)/Γ((3−μ)/4)) 𝐀¹
/// with r^ξ = [`discrete_lambda_factor`]; ε = 0.
pub fn lambda_extended_bb(f: &HyperboloidFunction, mu: f64, spec: &QuadratureSpec) -> Result<KTypeCoefficients> {
    if f.epsilon != 0 {
        return Err(NumericsError::Domain("𝔸 is the epsilon = 0 family".into()));
    }
    let z = C64::new(mu, 0.0);
    let (a, b) = ((3.0 - z) / 4.0, (1.0 - z) / 4.0);
    let c0 = gamma_raw(a) * rgamma(b) * discrete_lambda_factor(0, f.lambda, mu);
    let c1 = gamma_raw(b) * rgamma(a) * discrete_lambda_factor(1, f.lambda, mu);
    let a0 = lambda_extended_A(0, f, z, spec)?;
    let a1 = lambda_extended_A(1, f, z, spec)?;
    let mut out = KTypeCoefficients::new(0, z);
    for (&m, &v0) in &a0.coeffs {
        out.insert(m, c0 * v0 + c1 * a1.get(m))?;
    }
    Ok(out)
}

/// 𝒜_{λ,μ} f = r⁰·𝐀⁰_{λ,μ} f; ε = 1.
pub fn lambda_extended_cal(f: &HyperboloidFunction, mu: f64, spec: &QuadratureSpec) -> Result<KTypeCoefficients> {
    if f.epsilon != 1 {
        return Err(NumericsError::Domain("𝒜 is the epsilon = 1 family".into()));
    }
    Ok(lambda_extended_A(0, f, C64::new(mu, 0.0), spec)?.scaled(discrete_lambda_factor(0, f.lambda, mu)))
}

/// One point of the comparison between the continuous integrands
/// Σ_ξ|𝐀^ξ_{λ,is} g|²/|a(is)|² and Σ_ξ|𝐀^ξ_{0,is} ankh_{λ→0} g|²/|a(is)|².
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransportRow {
    pub s: f64,
    pub m: i32,
    pub at_lambda: f64,
    pub transported: f64,
}

/// The λ-independence of the continuous spectrum, K-type by K-type.
///
/// ankh g is not compactly supported: its radial part H(u) behaves like
/// C_±|sinh 2u|^{λ/2−1} as u → ±∞. H is computed exactly for |u| ≤ `u_cut`
/// and continued by that power law, fitted at ±u_cut, beyond; the relative
/// error of the continuation is O(e^{−2 u_cut}).
pub fn transported_spectrum(g: &HyperboloidFunction, s_values: &[f64], u_cut: f64, spec: &QuadratureSpec) -> Result<Vec<TransportRow>> {
    g.validate()?;
    let zero = C64::new(0.0, 0.0);
    let p = g.lambda / 2.0 - 1.0;
    // J-integrands of the continuation decay like e^{−x/2}
    let t_max = 60.0;
    let s_top = s_values.iter().fold(1.0f64, |a, s| a.max(s.abs()));
    let mut rows = Vec::new();
    for (m, profiles) in g.by_ktype() {
        let gm = HyperboloidFunction::new(
            g.epsilon,
            g.lambda,
            profiles
                .into_iter()
                .map(|profile| crate::geometry::KTypeTerm { m, profile })
                .collect(),
        )?;
        // k_θ n̄_y = k_0 b_u diag(t, 1/t) with θ = atan(y)/2, sinh 2u = y and
        // t = cosh^{1/2} 2u > 0, so H(u) is the ankh value itself
        let exact = |u: f64| -> C64 {
            let y = (2.0 * u).sinh();
            ankh_apply(&gm, zero, 0.5 * y.atan(), y, spec).unwrap_or(C64::new(f64::NAN, f64::NAN))
        };
        let ends = [exact(-u_cut), exact(u_cut)];
        let y_cut = (2.0 * u_cut).sinh();
        let h = |u: f64| -> C64 {
            if u.abs() <= u_cut {
                return exact(u);
            }
            let end = ends[(u > 0.0) as usize];
            end * C64::new((2.0 * u).sinh().abs() / y_cut, 0.0).powc(p)
        };
        let half = m as f64 / 2.0;
        let even = ForwardRule::new(
            |x: f64| x.cosh().powf(-half) * 0.5 * (h(x / 2.0) + h(-x / 2.0)),
            t_max,
            KTypeJacobiSlot::new(0, m)?,
            s_top,
        );
        let odd = ForwardRule::new(
            |x: f64| 0.5 * (h(x / 2.0) - h(-x / 2.0)) / (x.sinh() * x.cosh().powf(half)),
            t_max,
            KTypeJacobiSlot::new(1, m)?,
            s_top,
        );
        for &s in s_values {
            let mu = C64::new(0.0, s);
            let (j0, j1) = (even.eval(mu)?, odd.eval(mu)?);
            if !(j0.is_finite() && j1.is_finite()) {
                return Err(NumericsError::Consistency(format!("transported transform at m = {m}, s = {s}")));
            }
            let w = super::plancherel_weight(g.epsilon, s);
            let mut at_lambda = 0.0;
            let mut transported = 0.0;
            for xi in 0..2u8 {
                at_lambda += lambda_extended_A(xi, &gm, mu, spec)?.get(m).norm_sqr() * w;
                transported += a_bold_from_transforms(xi, m, mu, j0, j1).norm_sqr() * w;
            }
            rows.push(TransportRow {
                s,
                m,
                at_lambda,
                transported,
            });
        }
    }
    Ok(rows)
}

/// Both sides of ∫_{G/H} P^ξ_{λ,μ}ζ_m · ḡ = ∫_K ζ_m · conj(A^ξ_{λ,−μ̄} g).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub xi: u8,
    pub m: i32,
    pub mu: C64,
    pub lhs: C64,
    pub rhs: C64,
    pub residual: f64,
}

/// The P/A duality on ζ_m against a K-type test function g (λ = g.lambda).
/// P comes from its closed form at λ = 0 and from kernel quadrature
/// otherwise; A always from kernel quadrature. Needs |Re μ| < 1.
pub fn duality_check(xi: u8, m: i32, mu: C64, g: &HyperboloidFunction, spec: &QuadratureSpec) -> Result<DualityReport> {
    g.validate()?;
    let zero = C64::new(0.0, 0.0);
    let r = g.support_radius();
    let p = |u: f64| -> Result<C64> {
        if g.lambda == zero {
            p_on_ktype(xi, g.epsilon, mu, m, crate::geometry::CoordinatePoint { theta: 0.0, u })
        } else {
            p_kernel_quadrature(xi, g.epsilon, g.lambda, mu, m, u, spec)
        }
    };
    let integrand = |u: f64| -> C64 {
        let h = g.radial(m, u);
        if h == 0.0 {
            return zero;
        }
        p(u).map_or(C64::new(f64::NAN, f64::NAN), |v| v * h * (2.0 * u).cosh())
    };
    let lhs = if g.by_ktype().contains_key(&m) {
        PI * integrate_adaptive(integrand, &Interval::new(-r, r), spec)?.value
    } else {
        zero
    };
    let a = a_kernel_quadrature(xi, g, -mu.conj(), spec)?;
    let rhs = 2.0 * PI * a.get(m).conj();
    let scale = lhs.norm().max(rhs.norm()).max(1e-300);
    Ok(DualityReport {
        xi,
        m,
        mu,
        lhs,
        rhs,
        residual: (lhs - rhs).norm() / scale,
    })
}
