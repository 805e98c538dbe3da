//! Direct quadrature of the defining kernel integrals. Slow, but valid for
//! every λ, and the reference the K-type fast path is checked against.

use super::{check_parity, KTypeCoefficients, KernelParams};
use crate::geometry::HyperboloidFunction;
use crate::numerics::{integrate_adaptive, integrate_nodes, rgamma, Interval, Node, NumericsError, QuadratureSpec, C64};
use crate::Result;
use std::f64::consts::PI;

fn inner_spec(spec: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: spec.abs_tol * 0.1,
        rel_tol: spec.rel_tol * 0.1,
        ..*spec
    }
}

/// A^ξ_{λ,μ} f by the kernel integral
///
///   A f(e) = ∫₀^π ∫_ℝ K^ξ_{−λ,−μ}((k_θ b_u)^{−1}) f(k_θ b_u) cosh(2u) du dθ,
///
/// one K-type at a time. Needs Re μ < 1.
pub fn a_kernel_quadrature(xi: u8, f: &HyperboloidFunction, mu: C64, spec: &QuadratureSpec) -> Result<KTypeCoefficients> {
    f.validate()?;
    if mu.re >= 1.0 {
        return Err(NumericsError::Domain(format!("kernel integral diverges at Re mu = {}", mu.re)));
    }
    let kp = KernelParams::new(xi, f.epsilon, -f.lambda, -mu)?;
    let (ea, eb) = kp.exponents();
    let r = f.support_radius();
    let ispec = inner_spec(spec);
    let mut out = KTypeCoefficients::new(f.epsilon, mu);
    for m in f.by_ktype().keys().copied() {
        let outer = |u: f64| -> C64 {
            let h = f.radial(m, u);
            if h == 0.0 {
                return C64::new(0.0, 0.0);
            }
            let (ch, sh) = (u.cosh(), u.sinh());
            let rho = (2.0 * u).cosh().sqrt();
            // first column of b_{−u} k_{−θ}: (−ρ sin(θ−θ₁), ρ sin(θ−θ₂))
            let t1 = ch.atan2(sh);
            let t2 = sh.atan2(ch);
            let hi = t2 + PI;
            let iv = Interval::new(t2, hi)
                .singular_lo(eb.re)
                .singular_hi(eb.re)
                .with_break(t1, Some(ea.re));
            let g = |n: Node| {
                let g11 = -rho * n.from(t1).sin();
                let g21 = if n.knot == hi {
                    -rho * n.offset.sin()
                } else {
                    rho * n.from(t2).sin()
                };
                kp.eval_entries(g11, g21) * C64::from_polar(1.0, m as f64 * n.x)
            };
            match integrate_nodes(g, &iv, &ispec) {
                Ok(v) => v.value * (h * (2.0 * u).cosh()),
                Err(_) => C64::new(f64::NAN, f64::NAN),
            }
        };
        let v = integrate_adaptive(outer, &Interval::new(-r, r), spec)?.value;
        if !v.is_finite() {
            return Err(NumericsError::Consistency(format!("inner kernel integral failed at m = {m}")));
        }
        out.insert(m, v)?;
    }
    Ok(out)
}

/// P^ξ_{λ,μ} ζ_m(b_u) = ∫₀^{2π} K^ξ_{λ,μ}(b_{−u} k_θ) e^{imθ} dθ. Needs Re μ > −1.
pub fn p_kernel_quadrature(xi: u8, epsilon: u8, lambda: C64, mu: C64, m: i32, u: f64, spec: &QuadratureSpec) -> Result<C64> {
    check_parity(epsilon, m)?;
    if mu.re <= -1.0 {
        return Err(NumericsError::Domain(format!("kernel integral diverges at Re mu = {}", mu.re)));
    }
    let kp = KernelParams::new(xi, epsilon, lambda, mu)?;
    let (ea, eb) = kp.exponents();
    let (ch, sh) = (u.cosh(), u.sinh());
    let rho = (2.0 * u).cosh().sqrt();
    // (g₁₁, g₂₁) = (ρ cos(θ−β), −ρ sin(θ+β))
    let beta = sh.atan2(ch);
    let s0 = -beta;
    let k1 = beta + PI / 2.0;
    let k2 = s0 + PI;
    let k3 = beta + 1.5 * PI;
    let s4 = s0 + 2.0 * PI;
    let iv = Interval::new(s0, s4)
        .singular_lo(eb.re)
        .singular_hi(eb.re)
        .with_break(k1, Some(ea.re))
        .with_break(k2, Some(eb.re))
        .with_break(k3, Some(ea.re));
    let g = |n: Node| {
        let g11 = if n.knot == k1 {
            -rho * n.offset.sin()
        } else if n.knot == k3 {
            rho * n.offset.sin()
        } else {
            rho * (n.x - beta).cos()
        };
        let g21 = if n.knot == s0 || n.knot == s4 {
            -rho * n.offset.sin()
        } else if n.knot == k2 {
            rho * n.offset.sin()
        } else {
            -rho * (n.x + beta).sin()
        };
        kp.eval_entries(g11, g21) * C64::from_polar(1.0, m as f64 * n.x)
    };
    Ok(integrate_nodes(g, &iv, spec)?.value)
}

/// (1/Γ((μ+ε)/2)) ∫_ℝ (x+i)^{(m−μ−1)/2} (x−i)^{(−m−μ−1)/2} dx with ε = m mod 2,
/// the Knapp–Stein integral in the noncompact picture. Needs Re μ > 0.
pub fn knapp_stein_integral(m: i32, mu: C64, spec: &QuadratureSpec) -> Result<C64> {
    if mu.re <= 0.0 {
        return Err(NumericsError::Domain(format!("integral diverges at Re mu = {}", mu.re)));
    }
    let p = (m as f64 - mu - 1.0) / 2.0;
    let q = (-(m as f64) - mu - 1.0) / 2.0;
    let g = |x: f64| C64::new(x, 1.0).powc(p) * C64::new(x, -1.0).powc(q);
    let iv = Interval::real_line().algebraic_decay(mu.re + 1.0);
    let eps = m.rem_euclid(2) as f64;
    Ok(integrate_adaptive(g, &iv, spec)?.value * rgamma((mu + eps) / 2.0))
}
