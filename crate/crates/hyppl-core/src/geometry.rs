//! G/H = SL(2,ℝ)/MA in the (θ,u) chart xH = k_θ b_u H, measure cosh(2u) du dθ,
//! and the (θ,y) chart xH = k_θ n̄_y H, measure ½ dy dθ.
//!
//! Sections of Ind_H^G(ε ⊗ e^λ) satisfy f(gh) = χ(h)^{−1} f(g) with
//! χ(diag(t, 1/t)) = sgn(t)^ε |t|^λ, and are stored as finite K-type sums
//! f(k_θ b_u) = Σ e^{imθ} h_m(u).

use crate::jacobi::RadialProfile;
use crate::numerics::{differentiate_with_step, integrate_adaptive, Interval, NumericsError, QuadratureSpec, C64, I};
use crate::Result;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub g11: f64,
    pub g12: f64,
    pub g21: f64,
    pub g22: f64,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement {
        g11: 1.0,
        g12: 0.0,
        g21: 0.0,
        g22: 1.0,
    };

    pub fn new(g11: f64, g12: f64, g21: f64, g22: f64) -> Result<Self> {
        let g = GroupElement { g11, g12, g21, g22 };
        if (g.det() - 1.0).abs() > 1e-12 {
            return Err(NumericsError::Domain(format!("det = {} is not 1", g.det())));
        }
        Ok(g)
    }

    pub fn k(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        GroupElement {
            g11: c,
            g12: s,
            g21: -s,
            g22: c,
        }
    }

    pub fn b(u: f64) -> Self {
        let (c, s) = (u.cosh(), u.sinh());
        GroupElement {
            g11: c,
            g12: s,
            g21: s,
            g22: c,
        }
    }

    pub fn nbar(x: f64) -> Self {
        GroupElement {
            g11: 1.0,
            g12: 0.0,
            g21: x,
            g22: 1.0,
        }
    }

    pub fn w0() -> Self {
        GroupElement {
            g11: 0.0,
            g12: 1.0,
            g21: -1.0,
            g22: 0.0,
        }
    }

    pub fn diag(t: f64) -> Self {
        GroupElement {
            g11: t,
            g12: 0.0,
            g21: 0.0,
            g22: 1.0 / t,
        }
    }

    pub fn det(&self) -> f64 {
        self.g11 * self.g22 - self.g12 * self.g21
    }

    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        GroupElement {
            g11: self.g11 * o.g11 + self.g12 * o.g21,
            g12: self.g11 * o.g12 + self.g12 * o.g22,
            g21: self.g21 * o.g11 + self.g22 * o.g21,
            g22: self.g21 * o.g12 + self.g22 * o.g22,
        }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            g11: self.g22,
            g12: -self.g12,
            g21: -self.g21,
            g22: self.g11,
        }
    }

    fn max_abs_diff(&self, o: &GroupElement) -> f64 {
        [self.g11 - o.g11, self.g12 - o.g12, self.g21 - o.g21, self.g22 - o.g22]
            .iter()
            .fold(0.0f64, |a, x| a.max(x.abs()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordinatePoint {
    pub theta: f64,
    pub u: f64,
}

impl CoordinatePoint {
    pub fn new(theta: f64, u: f64) -> Result<Self> {
        if !(0.0..PI).contains(&theta) || !u.is_finite() {
            return Err(NumericsError::Domain(format!("({theta}, {u}) outside [0,π)×ℝ")));
        }
        Ok(CoordinatePoint { theta, u })
    }

    pub fn element(&self) -> GroupElement {
        GroupElement::k(self.theta).mul(&GroupElement::b(self.u))
    }
}

/// g = k_θ b_u diag(t, 1/t): returns (θ mod π, u, t).
pub fn kb_decompose(g: &GroupElement) -> Result<(f64, f64, f64)> {
    let GroupElement {
        g11: p,
        g12: q,
        g21: r,
        g22: s,
    } = *g;
    // g J gᵀ with J = antidiag(1,1) is invariant under H and equals
    // sinh(2u)·1 + cosh(2u)·[[sin 2θ, cos 2θ],[cos 2θ, −sin 2θ]]
    let sh = p * q + r * s;
    let u = 0.5 * sh.asinh();
    let s11 = 2.0 * p * q;
    let s22 = 2.0 * r * s;
    let s12 = p * s + q * r;
    let two_theta = (0.5 * (s11 - s22)).atan2(s12);
    let theta = (0.5 * two_theta).rem_euclid(PI);
    let h = GroupElement::b(u).inverse().mul(&GroupElement::k(theta).inverse()).mul(g);
    let t = h.g11;
    if h.max_abs_diff(&GroupElement::diag(t)) > 1e-9 * (1.0 + t.abs() + 1.0 / t.abs()) {
        return Err(NumericsError::Domain(format!("{g:?} has no KBH decomposition")));
    }
    Ok((theta, u, t))
}

/// k_θ n̄_y.
pub fn kn_coordinates(theta: f64, y: f64) -> GroupElement {
    GroupElement::k(theta).mul(&GroupElement::nbar(y))
}

/// g = k_θ n̄_y diag(t, 1/t): returns (θ mod π, y, t); undefined when g₂₂ = 0.
pub fn kn_decompose(g: &GroupElement) -> Result<(f64, f64, f64)> {
    // right H scales the columns by t and 1/t; the second column is k_θ (0, 1/t)ᵀ
    let (q, s) = (g.g12, g.g22);
    let n = q.hypot(s);
    if n == 0.0 || s.abs() < 1e-14 * n {
        return Err(NumericsError::Domain(format!("{g:?} lies on the degenerate set")));
    }
    let theta = q.atan2(s).rem_euclid(PI);
    let rest = GroupElement::k(theta).inverse().mul(g);
    let t = 1.0 / rest.g22;
    let y = rest.g21 / t;
    Ok((theta, y, t))
}

/// (θ, y) ↦ (θ', u) with k_θ n̄_y H = k_θ' b_u H: sinh 2u = y, θ' = θ − atan(y)/2.
pub fn kn_to_kb(theta: f64, y: f64) -> (f64, f64) {
    (theta - 0.5 * y.atan(), 0.5 * y.asinh())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KTypeTerm {
    pub m: i32,
    pub profile: RadialProfile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperboloidFunction {
    pub epsilon: u8,
    pub lambda: C64,
    pub terms: Vec<KTypeTerm>,
}

impl HyperboloidFunction {
    pub fn new(epsilon: u8, lambda: C64, terms: Vec<KTypeTerm>) -> Result<Self> {
        let f = HyperboloidFunction { epsilon, lambda, terms };
        f.validate()?;
        Ok(f)
    }

    pub fn single(epsilon: u8, m: i32, profile: RadialProfile) -> Result<Self> {
        Self::new(epsilon, C64::new(0.0, 0.0), vec![KTypeTerm { m, profile }])
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilon > 1 {
            return Err(NumericsError::Domain(format!("epsilon = {} must be 0 or 1", self.epsilon)));
        }
        if self.lambda.re != 0.0 {
            return Err(NumericsError::Domain(format!("lambda = {} must be imaginary", self.lambda)));
        }
        for t in &self.terms {
            if t.m.rem_euclid(2) != self.epsilon as i32 {
                return Err(NumericsError::Domain(format!(
                    "K-type m = {} violates parity epsilon = {}",
                    t.m, self.epsilon
                )));
            }
            t.profile.validate()?;
        }
        Ok(())
    }

    /// Terms merged by K-type, ascending in m.
    pub fn by_ktype(&self) -> BTreeMap<i32, Vec<RadialProfile>> {
        let mut map: BTreeMap<i32, Vec<RadialProfile>> = BTreeMap::new();
        for t in &self.terms {
            map.entry(t.m).or_default().push(t.profile);
        }
        map
    }

    pub fn support_radius(&self) -> f64 {
        self.terms.iter().map(|t| t.profile.support_radius()).fold(0.0, f64::max)
    }

    /// Radial part h_m(u) of K-type m, summed over its terms.
    pub fn radial(&self, m: i32, u: f64) -> f64 {
        self.terms.iter().filter(|t| t.m == m).map(|t| t.profile.eval(u)).sum()
    }

    /// f(k_θ b_u) = Σ e^{imθ} h_m(u).
    pub fn eval(&self, p: CoordinatePoint) -> C64 {
        self.eval_kb(p.theta, p.u)
    }

    /// As [`eval`](Self::eval) for any real θ.
    pub fn eval_kb(&self, theta: f64, u: f64) -> C64 {
        self.terms
            .iter()
            .map(|t| C64::from_polar(t.profile.eval(u), t.m as f64 * theta))
            .sum()
    }

    /// f(g) for a group element, through its KBH decomposition.
    pub fn eval_group(&self, g: &GroupElement) -> Result<C64> {
        let (theta, u, t) = kb_decompose(g)?;
        Ok(self.eval_kb(theta, u) / character(self.epsilon, self.lambda, t))
    }
}

/// χ_{ε,λ}(diag(t, 1/t)) = sgn(t)^ε |t|^λ.
pub fn character(epsilon: u8, lambda: C64, t: f64) -> C64 {
    let sign = if t < 0.0 && epsilon == 1 { -1.0 } else { 1.0 };
    (lambda * t.abs().ln()).exp() * sign
}

/// ∫₀^π ∫_ℝ |f(k_θ b_u)|² cosh(2u) du dθ = π Σ_m ∫ |h_m|² cosh(2u) du.
pub fn invariant_norm_sq(f: &HyperboloidFunction, spec: &QuadratureSpec) -> Result<f64> {
    let r = f.support_radius();
    let mut total = 0.0;
    for m in f.by_ktype().keys() {
        let g = |u: f64| C64::new(f.radial(*m, u).powi(2) * (2.0 * u).cosh(), 0.0);
        total += integrate_adaptive(g, &Interval::new(-r, r), spec)?.value.re;
    }
    Ok(PI * total)
}

/// ½ ∫₀^π ∫_ℝ |f(k_θ n̄_y)|² dy dθ on a tensor Gauss–Legendre grid.
///
/// The y-range is cut at sinh(2R) for the profile support radius R; nodes
/// are placed in v with y = sinh(2v).
pub fn invariant_norm_sq_kn(f: &HyperboloidFunction, panels: usize) -> Result<f64> {
    let vnodes = crate::numerics::gauss_legendre_nodes(-f.support_radius(), f.support_radius(), panels);
    let tnodes = crate::numerics::gauss_legendre_nodes(0.0, PI, panels.max(4));
    let mut acc = 0.0;
    for &(v, wv) in &vnodes {
        let y = (2.0 * v).sinh();
        let dy = 2.0 * (2.0 * v).cosh();
        for &(th, wt) in &tnodes {
            let g = kn_coordinates(th, y);
            let val = f.eval_group(&g)?;
            acc += 0.5 * val.norm_sqr() * wv * wt * dy;
        }
    }
    Ok(acc)
}

/// Δ_λ f at a point, with exact θ- and u-derivatives of the profiles.
pub fn casimir_apply(f: &HyperboloidFunction, p: CoordinatePoint) -> C64 {
    let lam = f.lambda;
    let c = (2.0 * p.u).cosh();
    let th = (2.0 * p.u).tanh();
    f.terms
        .iter()
        .map(|t| {
            let m = t.m as f64;
            let (h0, h1, h2) = (t.profile.deriv(p.u, 0), t.profile.deriv(p.u, 1), t.profile.deriv(p.u, 2));
            let coef = lam * lam / (c * c) + lam * (2.0 * th / c) * (I * m) + m * m / (c * c);
            C64::from_polar(1.0, m * p.theta) * (coef * h0 + 2.0 * th * h1 + h2)
        })
        .sum()
}

/// Δ_λ from the displayed operator, all derivatives by finite differences of
/// an arbitrary function F(θ, u).
pub fn casimir_apply_fd<F: Fn(f64, f64) -> C64>(lambda: C64, f: F, theta: f64, u: f64) -> Result<C64> {
    let c = (2.0 * u).cosh();
    let th = (2.0 * u).tanh();
    let d_theta = differentiate_with_step(|x| f(x, u), theta, 1, 0.1)?;
    let d_theta2 = differentiate_with_step(|x| f(x, u), theta, 2, 0.1)?;
    let d_u = differentiate_with_step(|x| f(theta, x), u, 1, 0.1)?;
    let d_u2 = differentiate_with_step(|x| f(theta, x), u, 2, 0.1)?;
    Ok(lambda * lambda / (c * c) * f(theta, u) + lambda * (2.0 * th / c) * d_theta + 2.0 * th * d_u - d_theta2 / (c * c) + d_u2)
}

/// □_m h(t) = m(m+2)h + 8(−1+(3+m)t)h′ − 16t(1−t)h″, derivatives by
/// Ridders extrapolation. The step stays inside t < 0 when t < 0.
pub fn box_apply<F: Fn(f64) -> C64>(m: i32, h: F, t: f64) -> Result<C64> {
    let step = if t < 0.0 {
        (0.1 * t.abs().max(0.5)).min(0.5 * t.abs())
    } else {
        0.1 * t.abs().max(0.5)
    };
    let d1 = differentiate_with_step(&h, t, 1, step)?;
    let d2 = differentiate_with_step(&h, t, 2, step)?;
    let m = m as f64;
    Ok(m * (m + 2.0) * h(t) + 8.0 * (-1.0 + (3.0 + m) * t) * d1 - 16.0 * t * (1.0 - t) * d2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::Parity;
    use crate::numerics::rel_diff;

    fn gauss() -> RadialProfile {
        RadialProfile::gaussian(0.2, 0.8)
    }

    #[test]
    fn factories() {
        for x in [-1.3, 0.0, 0.7] {
            for g in [
                GroupElement::k(x),
                GroupElement::b(x),
                GroupElement::nbar(x),
                GroupElement::diag(x + 2.0),
            ] {
                assert!((g.det() - 1.0).abs() < 1e-14);
            }
            let kk = GroupElement::k(x).mul(&GroupElement::k(0.4));
            assert!(kk.max_abs_diff(&GroupElement::k(x + 0.4)) < 1e-15);
        }
        assert_eq!(kn_coordinates(0.0, 0.0), GroupElement::IDENTITY);
        assert_eq!(kn_coordinates(0.3, 0.0), GroupElement::k(0.3));
        assert!(GroupElement::new(1.0, 1.0, 1.0, 1.0).is_err());
        let w = GroupElement::w0();
        assert!(w.mul(&w).max_abs_diff(&GroupElement::diag(-1.0)) < 1e-15);
    }

    #[test]
    fn decompositions_roundtrip() {
        for (th, u, t) in [(0.3, 0.5, 1.7), (2.9, -1.2, -0.4), (1.5, 0.0, 3.0)] {
            let g = GroupElement::k(th).mul(&GroupElement::b(u)).mul(&GroupElement::diag(t));
            let (th2, u2, t2) = kb_decompose(&g).unwrap();
            let back = GroupElement::k(th2).mul(&GroupElement::b(u2)).mul(&GroupElement::diag(t2));
            assert!(back.max_abs_diff(&g) < 1e-12);
            assert!((u2 - u).abs() < 1e-12);
            let (th3, y, t3) = kn_decompose(&g).unwrap();
            let back = kn_coordinates(th3, y).mul(&GroupElement::diag(t3));
            assert!(back.max_abs_diff(&g) < 1e-12);
        }
        for (th, y) in [(0.4, 0.0), (1.0, 2.5), (2.0, -0.7)] {
            let (tp, u) = kn_to_kb(th, y);
            let (tq, u2, _) = kb_decompose(&kn_coordinates(th, y)).unwrap();
            assert!((u - u2).abs() < 1e-12);
            assert!(((tp - tq) / PI - ((tp - tq) / PI).round()).abs() < 1e-12);
        }
        assert!(kn_decompose(&GroupElement::w0()).is_err());
    }

    #[test]
    fn eval_basics() {
        let empty = HyperboloidFunction::new(0, C64::new(0.0, 0.0), vec![]).unwrap();
        assert_eq!(empty.eval(CoordinatePoint::new(1.0, 0.3).unwrap()), C64::new(0.0, 0.0));
        let h = gauss();
        let f = HyperboloidFunction::single(0, 0, h).unwrap();
        for th in [0.0, 1.0, 3.0] {
            assert_eq!(f.eval(CoordinatePoint::new(th, 0.4).unwrap()).re, h.eval(0.4));
        }
        let f = HyperboloidFunction::new(
            0,
            C64::new(0.0, 0.0),
            vec![KTypeTerm { m: 4, profile: h }, KTypeTerm { m: -4, profile: h }],
        )
        .unwrap();
        let v = f.eval(CoordinatePoint::new(0.7, -0.2).unwrap());
        assert!((v.re - 2.0 * (4.0 * 0.7f64).cos() * h.eval(-0.2)).abs() < 1e-15 && v.im.abs() < 1e-15);
        assert!(HyperboloidFunction::single(1, 2, h).is_err());
        assert!(HyperboloidFunction::new(0, C64::new(0.1, 0.0), vec![]).is_err());
    }

    #[test]
    fn equivariance() {
        let f = HyperboloidFunction::new(
            1,
            C64::new(0.0, 0.8),
            vec![KTypeTerm { m: 3, profile: gauss() }, KTypeTerm { m: -1, profile: gauss() }],
        )
        .unwrap();
        let g = kn_coordinates(0.9, 0.4);
        let base = f.eval_group(&g).unwrap();
        for t in [2.0, -0.5] {
            let gh = g.mul(&GroupElement::diag(t));
            let want = base / character(1, f.lambda, t);
            assert!(rel_diff(f.eval_group(&gh).unwrap(), want) < 1e-12);
        }
    }

    #[test]
    fn norms_and_orthogonality() {
        let spec = QuadratureSpec::default();
        let zero = HyperboloidFunction::new(0, C64::new(0.0, 0.0), vec![]).unwrap();
        assert_eq!(invariant_norm_sq(&zero, &spec).unwrap(), 0.0);
        let a = HyperboloidFunction::single(0, 2, gauss()).unwrap();
        let b = HyperboloidFunction::single(0, -4, RadialProfile::hermite(-0.3, 0.6, 1)).unwrap();
        let mut ab = a.clone();
        ab.terms.extend(b.terms.clone());
        let na = invariant_norm_sq(&a, &spec).unwrap();
        let nb = invariant_norm_sq(&b, &spec).unwrap();
        let nab = invariant_norm_sq(&ab, &spec).unwrap();
        assert!((nab - na - nb).abs() < 1e-8 * nab);
        // Simpson oracle for the single Gaussian
        let h = gauss();
        let r = h.support_radius();
        let n = 20000;
        let dx = 2.0 * r / n as f64;
        let simpson: f64 = (0..=n)
            .map(|k| {
                let u = -r + k as f64 * dx;
                let w = if k == 0 || k == n {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w * h.eval(u).powi(2) * (2.0 * u).cosh()
            })
            .sum::<f64>()
            * dx
            / 3.0;
        assert!((na - PI * simpson).abs() < 1e-8 * na);
    }

    #[test]
    fn chart_measures_agree() {
        let spec = QuadratureSpec::default();
        let fns = [
            HyperboloidFunction::single(0, 0, gauss()).unwrap(),
            HyperboloidFunction::single(1, 3, RadialProfile::hermite(0.0, 0.5, 2)).unwrap(),
            HyperboloidFunction::new(
                0,
                C64::new(0.0, 1.5),
                vec![
                    KTypeTerm { m: 2, profile: gauss() },
                    KTypeTerm {
                        m: 0,
                        profile: RadialProfile::gaussian(-0.4, 0.3),
                    },
                ],
            )
            .unwrap(),
        ];
        for f in &fns {
            let a = invariant_norm_sq(f, &spec).unwrap();
            let b = invariant_norm_sq_kn(f, 60).unwrap();
            assert!((a - b).abs() < 1e-6 * a, "{a} vs {b}");
        }
    }

    #[test]
    fn casimir_matches_finite_differences() {
        let f = HyperboloidFunction::new(
            0,
            C64::new(0.0, 0.7),
            vec![
                KTypeTerm { m: 2, profile: gauss() },
                KTypeTerm {
                    m: -4,
                    profile: RadialProfile::hermite(0.1, 0.9, 1),
                },
            ],
        )
        .unwrap();
        for (th, u) in [(0.3, 0.1), (1.9, -0.6), (2.5, 0.9)] {
            let exact = casimir_apply(&f, CoordinatePoint::new(th, u).unwrap());
            let fd = casimir_apply_fd(f.lambda, |a, b| f.eval_kb(a, b), th, u).unwrap();
            assert!((exact - fd).norm() < 1e-7 * (1.0 + exact.norm()), "{exact} vs {fd}");
        }
    }

    #[test]
    fn casimir_of_flat_constant_vanishes() {
        let wide = RadialProfile::gaussian(0.0, 1e4).with_parity(Parity::Even);
        let f = HyperboloidFunction::single(0, 0, wide).unwrap();
        let v = casimir_apply(&f, CoordinatePoint::new(0.5, 0.3).unwrap());
        assert!(v.norm() < 1e-7);
    }

    #[test]
    fn box_on_polynomials() {
        for m in -3..=4 {
            for t in [-2.0, -0.3, 0.5] {
                let one = box_apply(m, |_| C64::new(1.0, 0.0), t).unwrap();
                let mm = (m * (m + 2)) as f64;
                assert!((one.re - mm).abs() < 1e-9);
                let lin = box_apply(m, |x| C64::new(x, 0.0), t).unwrap();
                let want = -8.0 + ((m * m + 10 * m + 24) as f64) * t;
                assert!((lin.re - want).abs() < 1e-8, "m={m} t={t}: {lin} vs {want}");
            }
        }
    }

    #[test]
    fn box_conjugates_radial_casimir() {
        // Δ̃_m (cosh^{m/2}(2u) h(−sinh²2u)) = cosh^{m/2}(2u) (□_m h)(−sinh²2u)
        let h = |t: f64| C64::new((0.3 * t).exp() + t * t * 0.01, 0.0);
        for m in [-2, 0, 3] {
            let mf = m as f64;
            let lifted = |u: f64| (2.0 * u).cosh().powf(mf / 2.0) * h(-(2.0 * u).sinh().powi(2));
            for u in [0.2, 0.5, -0.7] {
                let lhs = casimir_apply_fd(C64::new(0.0, 0.0), |th, x| C64::from_polar(1.0, mf * th) * lifted(x), 0.0, u).unwrap();
                let t = -(2.0 * u).sinh().powi(2);
                let rhs = (2.0 * u).cosh().powf(mf / 2.0) * box_apply(m, h, t).unwrap();
                assert!((lhs - rhs).norm() < 1e-6 * (1.0 + rhs.norm()), "m={m} u={u}: {lhs} vs {rhs}");
            }
        }
    }
}
