//! Riesz distributions u^ε_α on ℝ and the λ-shift operator ankh, which is
//! convolution by an even Riesz kernel along the n̄ direction.

use super::spow;
use crate::geometry::{kn_coordinates, HyperboloidFunction};
use crate::numerics::{
    gamma_raw, gauss_legendre_panels, i_pow, integrate_adaptive, integrate_nodes, neg1_pow, rgamma, Interval, Node, NumericsError,
    QuadratureSpec, C64,
};
use crate::Result;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RieszParams {
    pub epsilon: u8,
    pub alpha: C64,
}

/// u^ε_α(x) = 2^{−α/2} |x|^α_ε / Γ((α+1+ε)/2).
pub fn riesz_u(p: RieszParams, x: f64) -> C64 {
    if x == 0.0 {
        return C64::new(0.0, 0.0);
    }
    C64::new(2.0, 0.0).powc(-p.alpha / 2.0) * spow(x, p.alpha, p.epsilon) * rgamma((p.alpha + 1.0 + p.epsilon as f64) / 2.0)
}

/// c with u^ε_α ∗ u^ξ_β = c · u^{ε+ξ}_{α+β+1}.
pub fn riesz_convolution_constant(a: RieszParams, b: RieszParams) -> C64 {
    let s = a.epsilon + b.epsilon;
    neg1_pow((s / 2) as i64)
        * (2.0 * PI).sqrt()
        * gamma_raw((-1.0 - a.alpha - b.alpha + (s % 2) as f64) / 2.0)
        * rgamma((-a.alpha + a.epsilon as f64) / 2.0)
        * rgamma((-b.alpha + b.epsilon as f64) / 2.0)
}

/// (u^ε_α ∗ u^ξ_β)(x) by quadrature; needs Re α, Re β > −1 and Re(α+β) < −1.
pub fn riesz_convolution_quadrature(a: RieszParams, b: RieszParams, x: f64, spec: &QuadratureSpec) -> Result<C64> {
    let (ra, rb) = (a.alpha.re, b.alpha.re);
    if ra <= -1.0 || rb <= -1.0 || ra + rb >= -1.0 || x == 0.0 {
        return Err(NumericsError::Domain(format!(
            "convolution of exponents {} and {} at x = {x} is not a convergent integral",
            a.alpha, b.alpha
        )));
    }
    let iv = Interval::real_line()
        .algebraic_decay(-(ra + rb))
        .with_break(0.0, Some(rb))
        .with_break(x, Some(ra));
    let g = |n: Node| riesz_u(a, -n.from(x)) * riesz_u(b, n.from(0.0));
    Ok(integrate_nodes(g, &iv, spec)?.value)
}

/// ∫ u^ε_α(x) e^{−ixw} dx as the δ → 0 limit of the Abel-damped integral
/// with weight e^{−δ|x|}, Richardson-extrapolated over halving δ. Needs
/// Re α > −1 and w ≠ 0. The closed form is (−i)^ε √(2π) u^ε_{−1−α}(w).
pub fn riesz_fourier_numeric(p: RieszParams, w: f64) -> Result<C64> {
    if p.alpha.re <= -1.0 || w == 0.0 {
        return Err(NumericsError::Domain(format!(
            "Fourier integral of u at alpha = {}, w = {w}",
            p.alpha
        )));
    }
    const LEVELS: usize = 9;
    let period = 2.0 * PI / w.abs();
    let spec = QuadratureSpec::with_tol(1e-14, 1e-12);
    let sign = neg1_pow(p.epsilon as i64);
    let half = |delta: f64| -> Result<C64> {
        let g = |x: f64| {
            let e = C64::from_polar((-delta * x).exp(), -w * x);
            riesz_u(p, x) * (e + sign * e.conj())
        };
        let head = integrate_adaptive(g, &Interval::new(0.0, period).singular_lo(p.alpha.re), &spec)?.value;
        let end = period.max(40.0 / delta);
        let panels = ((end - period) / period * 4.0).ceil() as usize;
        Ok(head + gauss_legendre_panels(g, period, end, panels))
    };
    let mut t = [[C64::new(0.0, 0.0); LEVELS]; LEVELS];
    let mut delta = 0.5;
    for i in 0..LEVELS {
        t[i][0] = half(delta)?;
        let mut f = 2.0;
        for j in 1..=i {
            t[i][j] = t[i][j - 1] + (t[i][j - 1] - t[i - 1][j - 1]) / (f - 1.0);
            f *= 2.0;
        }
        delta *= 0.5;
    }
    Ok(t[LEVELS - 1][LEVELS - 1])
}

/// The closed form of [`riesz_fourier_numeric`].
pub fn riesz_fourier_closed(p: RieszParams, w: f64) -> C64 {
    let dual = RieszParams {
        epsilon: p.epsilon,
        alpha: -1.0 - p.alpha,
    };
    i_pow(-(p.epsilon as i64)) * (2.0 * PI).sqrt() * riesz_u(dual, w)
}

/// 2^{−s/2} Γ((1−s)/2) / (√π Γ(s/2)), s = (λ−ν)/2.
pub fn ankh_prefactor(lambda: C64, nu: C64) -> C64 {
    let s = (lambda - nu) / 2.0;
    C64::new(2.0, 0.0).powc(-s / 2.0) / PI.sqrt() * gamma_raw((1.0 - s) / 2.0) * rgamma(s / 2.0)
}

/// ∫_ℝ |x|^{s−1} F(x) dx for s ∈ iℝ∖{0}, regularised at x = 0 by
///
///   ∫₀^∞ e^{−sv}[F(e^{−v}) + F(−e^{−v}) − 2F(0)] dv + 2F(0)/s
///     + ∫₀^∞ e^{sv}[F(e^v) + F(−e^v)] dv.
///
/// F vanishes outside `support`. The support ends and the `marks` become
/// break points: where F is concentrated on a sliver of a long range, the
/// first Kronrod panel sees only zeros and accepts them.
fn riesz_line<F: Fn(f64) -> C64>(f: F, s: C64, support: (f64, f64), marks: &[f64], spec: &QuadratureSpec) -> Result<C64> {
    let (lo, hi) = support;
    let zero = C64::new(0.0, 0.0);
    let f0 = if lo < 0.0 && hi > 0.0 { f(0.0) } else { zero };
    let points: Vec<f64> = marks
        .iter()
        .copied()
        .chain([lo, hi])
        .filter(|x| x.is_finite() && *x != 0.0)
        .collect();
    let inner = |v: f64| (-s * v).exp() * (f((-v).exp()) + f(-(-v).exp()) - 2.0 * f0);
    // the bracket is O(e^{−v}); a long flat range invites false convergence
    let mut iv = Interval::new(0.0, 50.0);
    for &x in &points {
        if x.abs() < 1.0 {
            iv = iv.with_break(-x.abs().ln(), None);
        }
    }
    let mut total = integrate_adaptive(inner, &iv, spec)?.value + 2.0 * f0 / s;
    // |x| > 1 on each side, in v = ln|x|
    for (sign, a, b) in [(1.0, lo, hi), (-1.0, -hi, -lo)] {
        if b > 1.0 {
            let g = |v: f64| (s * v).exp() * f(sign * v.exp());
            let v0 = a.max(1.0).ln();
            let v1 = if b.is_finite() { b.ln() } else { f64::INFINITY };
            if v1 <= v0 {
                continue;
            }
            let mut iv = Interval::new(v0, v1);
            for &x in &points {
                if sign * x > 1.0 {
                    iv = iv.with_break((sign * x).ln(), None);
                }
            }
            total += integrate_adaptive(g, &iv, spec)?.value;
        }
    }
    Ok(total)
}

/// ankh_{λ→ν} applied to the function x ↦ F(x) on a line: c(λ,ν) ∫|x|^{s−1}F(x)dx,
/// F vanishing outside `support`.
pub fn ankh_line<F: Fn(f64) -> C64>(f: F, lambda: C64, nu: C64, support: (f64, f64), spec: &QuadratureSpec) -> Result<C64> {
    ankh_line_marked(f, lambda, nu, support, &[], spec)
}

fn ankh_line_marked<F: Fn(f64) -> C64>(
    f: F,
    lambda: C64,
    nu: C64,
    support: (f64, f64),
    marks: &[f64],
    spec: &QuadratureSpec,
) -> Result<C64> {
    let s = (lambda - nu) / 2.0;
    if s.re != 0.0 {
        return Err(NumericsError::Domain(format!(
            "ankh needs imaginary lambda - nu, got {}",
            lambda - nu
        )));
    }
    if s == C64::new(0.0, 0.0) {
        return Ok(f(0.0));
    }
    Ok(ankh_prefactor(lambda, nu) * riesz_line(f, s, support, marks, spec)?)
}

// Points of the line k_θ n̄_{y+x} where the radial coordinate runs through
// the profile support: x = sinh(2u) − y on a grid of u.
const LINE_MARKS: usize = 24;

fn along_nbar(f: &HyperboloidFunction, theta: f64, y: f64) -> (impl Fn(f64) -> C64 + '_, (f64, f64), Vec<f64>) {
    // f(k_θ n̄_z) = 0 once asinh|z|/2 exceeds the support radius
    let r = f.support_radius();
    let zmax = (2.0 * r).sinh();
    let line = move |x: f64| {
        let z = y + x;
        if z.abs() >= zmax {
            return C64::new(0.0, 0.0);
        }
        f.eval_group(&kn_coordinates(theta, z)).unwrap_or(C64::new(f64::NAN, f64::NAN))
    };
    let marks = (1..LINE_MARKS)
        .map(|k| (2.0 * r * (2.0 * k as f64 / LINE_MARKS as f64 - 1.0)).sinh() - y)
        .collect();
    (line, (-y - zmax, -y + zmax), marks)
}

/// (ankh_{λ→ν} f)(k_θ n̄_y), λ = f.lambda.
pub fn ankh_apply(f: &HyperboloidFunction, nu: C64, theta: f64, y: f64, spec: &QuadratureSpec) -> Result<C64> {
    f.validate()?;
    let (line, support, marks) = along_nbar(f, theta, y);
    let v = ankh_line_marked(line, f.lambda, nu, support, &marks, spec)?;
    if !v.is_finite() {
        return Err(NumericsError::Consistency(format!(
            "ankh line integral at theta = {theta}, y = {y}"
        )));
    }
    Ok(v)
}

/// ‖ankh_{λ→ν} f‖² = Σ_m (π/2) ∫ |G_m(y)|² dy with ankh f(k_θ n̄_y) = Σ e^{imθ} G_m(y).
///
/// G_m decays like |y|^{−1}; with y = sinh 2v the integrand decays like
/// e^{−2v} and is cut at |v| = v_max.
pub fn ankh_norm_sq(f: &HyperboloidFunction, nu: C64, v_max: f64, spec: &QuadratureSpec) -> Result<f64> {
    f.validate()?;
    let mut total = 0.0;
    for (m, profiles) in f.by_ktype() {
        let fm = HyperboloidFunction::new(
            f.epsilon,
            f.lambda,
            profiles
                .into_iter()
                .map(|profile| crate::geometry::KTypeTerm { m, profile })
                .collect(),
        )?;
        let g = |v: f64| {
            let y = (2.0 * v).sinh();
            match ankh_apply(&fm, nu, 0.0, y, spec) {
                Ok(x) => C64::new(x.norm_sqr() * 2.0 * (2.0 * v).cosh(), 0.0),
                Err(_) => C64::new(f64::NAN, 0.0),
            }
        };
        let r = f.support_radius();
        let iv = Interval::new(-v_max, v_max).with_break(-r, None).with_break(r, None);
        let v = integrate_adaptive(g, &iv, spec)?.value.re;
        if !v.is_finite() {
            return Err(NumericsError::Consistency(format!("ankh norm at m = {m}")));
        }
        total += 0.5 * PI * v;
    }
    Ok(total)
}
