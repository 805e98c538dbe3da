//! Quadrature checks of the classical integral formulas used by the kernel
//! calculus: the Casselman integral, the Gradshteyn–Ryzhik 3.631 sine/cosine
//! pair, and the two Beta-type integrals. Each is reported as a ratio
//! lhs/rhs; a constant ratio over the grid means a constant slip in the
//! closed form, a drifting ratio means a real error.

use super::quad::{integrate_adaptive, integrate_nodes, Interval, Node, QuadratureSpec};
use super::{beta, gamma_raw, rgamma, NumericsError, C64, I};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityRatio {
    pub id: String,
    pub params: String,
    pub lhs: C64,
    pub rhs: C64,
    pub ratio: C64,
}

impl IdentityRatio {
    pub fn new(id: &str, params: String, lhs: C64, rhs: C64) -> Self {
        IdentityRatio {
            id: id.to_string(),
            params,
            lhs,
            rhs,
            ratio: lhs / rhs,
        }
    }
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::with_tol(1e-14, 1e-12)
}

/// The closed form as printed: 2^{2−α−β} i^{α−β} Γ(α+β−1)/(Γ(α)Γ(β)).
pub fn casselman_closed_form(a: C64, b: C64) -> C64 {
    let two = C64::new(2.0, 0.0);
    two.powc(2.0 - a - b) * (I * (PI / 2.0) * (a - b)).exp() * gamma_raw(a + b - 1.0) * rgamma(a) * rgamma(b)
}

/// ∫_ℝ (x−i)^{−α}(x+i)^{−β} dx with principal branches.
pub fn casselman_integral(a: C64, b: C64) -> Result<C64, NumericsError> {
    let p = (a + b).re;
    if p <= 1.0 {
        return Err(NumericsError::Domain(format!("Casselman integral diverges for Re(α+β) = {p} ≤ 1")));
    }
    let f = |x: f64| (C64::new(x, -1.0)).powc(-a) * (C64::new(x, 1.0)).powc(-b);
    let iv = Interval::real_line().algebraic_decay(p).with_break(0.0, None);
    Ok(integrate_adaptive(f, &iv, &spec())?.value)
}

/// ∫_0^π sin^{ν−1}(x) e^{iax} dx.
pub fn trig_integral(nu: f64, a: f64) -> Result<C64, NumericsError> {
    if nu <= 0.0 {
        return Err(NumericsError::Domain(format!("Re ν = {nu} must be positive")));
    }
    let f = |n: Node| {
        // sin x from the exact distance to the nearer end
        let s = if n.x > PI / 2.0 { (-n.from(PI)).sin() } else { n.from(0.0).sin() };
        s.powf(nu - 1.0) * C64::from_polar(1.0, a * n.x)
    };
    let mut iv = Interval::new(0.0, PI);
    if nu < 1.0 {
        iv = iv.singular_lo(nu - 1.0).singular_hi(nu - 1.0);
    }
    Ok(integrate_nodes(f, &iv, &spec())?.value)
}

/// 2^{1−ν}π e^{iaπ/2} Γ(ν)/(Γ((ν+1−a)/2)Γ((ν+1+a)/2)).
pub fn trig_closed_form(nu: f64, a: f64) -> C64 {
    let g = 2f64.powf(1.0 - nu)
        * PI
        * gamma_raw(C64::new(nu, 0.0))
        * rgamma(C64::new((nu + 1.0 - a) / 2.0, 0.0))
        * rgamma(C64::new((nu + 1.0 + a) / 2.0, 0.0));
    g * C64::from_polar(1.0, a * PI / 2.0)
}

/// ∫_1^∞ x^α(x−1)^β dx.
pub fn beta_integral_shifted(a: f64, b: f64) -> Result<C64, NumericsError> {
    if !(b > -1.0 && a + b < -1.0) {
        return Err(NumericsError::Domain(format!("need β > −1, α+β < −1; got ({a}, {b})")));
    }
    let f = |n: Node| C64::new(n.x.powf(a) * n.from(1.0).powf(b), 0.0);
    let iv = Interval::new(1.0, f64::INFINITY).singular_lo(b).algebraic_decay(-(a + b));
    Ok(integrate_nodes(f, &iv, &spec())?.value)
}

/// ∫_0^∞ x^α(x+1)^β dx.
pub fn beta_integral_plus(a: f64, b: f64) -> Result<C64, NumericsError> {
    if !(a > -1.0 && a + b < -1.0) {
        return Err(NumericsError::Domain(format!("need α > −1, α+β < −1; got ({a}, {b})")));
    }
    let f = |x: f64| C64::new(x.powf(a) * (x + 1.0).powf(b), 0.0);
    let iv = Interval::new(0.0, f64::INFINITY).singular_lo(a).algebraic_decay(-(a + b));
    Ok(integrate_adaptive(f, &iv, &spec())?.value)
}

/// All four families on their standard parameter grids.
pub fn closed_form_integral_oracles() -> Result<Vec<IdentityRatio>, NumericsError> {
    let c = |re: f64, im: f64| C64::new(re, im);
    let mut out = Vec::new();
    for (a, b) in [
        (c(1.0, 0.0), c(1.0, 0.0)),
        (c(1.5, 0.0), c(1.0, 0.0)),
        (c(2.0, 0.0), c(1.5, 0.0)),
        (c(1.3, 0.0), c(0.8, 0.0)),
        (c(0.9, 0.0), c(0.7, 0.0)),
        (c(1.0, 0.5), c(1.0, -0.5)),
    ] {
        out.push(IdentityRatio::new(
            "casselman",
            format!("alpha={a}, beta={b}"),
            casselman_integral(a, b)?,
            casselman_closed_form(a, b),
        ));
    }
    for (nu, a) in [(2.0, 0.0), (0.5, 0.7), (3.5, 2.0), (1.0, 3.0), (0.7, -1.3), (2.5, 0.4)] {
        let lhs = trig_integral(nu, a)?;
        let rhs = trig_closed_form(nu, a);
        let params = format!("nu={nu}, a={a}");
        out.push(IdentityRatio::new("trig_exp", params.clone(), lhs, rhs));
        // cosine and sine halves, skipping the parameters where they vanish
        if (a / 2.0 - 0.5).fract().abs() > 1e-12 {
            out.push(IdentityRatio::new("trig_cos", params.clone(), c(lhs.re, 0.0), c(rhs.re, 0.0)));
        }
        if (a / 2.0).fract().abs() > 1e-12 {
            out.push(IdentityRatio::new("trig_sin", params, c(lhs.im, 0.0), c(rhs.im, 0.0)));
        }
    }
    for (a, b) in [(-3.0, 0.0), (-2.5, -0.5), (-4.0, 1.5), (-2.2, 0.3), (-1.7, -0.1)] {
        out.push(IdentityRatio::new(
            "beta_shifted",
            format!("alpha={a}, beta={b}"),
            beta_integral_shifted(a, b)?,
            beta(c(-a - b - 1.0, 0.0), c(b + 1.0, 0.0)),
        ));
    }
    for (a, b) in [(0.0, -2.0), (-0.5, -1.0), (0.5, -2.5), (1.2, -3.7), (-0.3, -1.4)] {
        out.push(IdentityRatio::new(
            "beta_plus",
            format!("alpha={a}, beta={b}"),
            beta_integral_plus(a, b)?,
            beta(c(-a - b - 1.0, 0.0), c(a + 1.0, 0.0)),
        ));
    }
    Ok(out)
}
