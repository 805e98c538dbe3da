//! The A-image fast path: per K-type, A^ξ_μ f is a combination of the two
//! Fourier–Jacobi transforms
//!
//!   J₀f(μ) = J₀(cosh^{−m/2}(x) h_e(x/2))(μ),
//!   J₁f(μ) = J₁(sinh^{−1}(x) cosh^{−m/2}(x) h_o(x/2))(μ),
//!
//! of the even and odd parts of the radial profile h.

use super::{a_bold_from_transforms, alpha_tilde, beta_tilde, check_parity, KTypeCoefficients};
use crate::geometry::HyperboloidFunction;
use crate::jacobi::{ForwardRule, KTypeJacobiSlot, Parity, RadialProfile};
use crate::numerics::{gamma_raw, NumericsError, C64};
use crate::Result;
use std::collections::BTreeMap;

/// Tabulated J₀/J₁ rules of one K-type.
#[derive(Clone, Debug, PartialEq)]
pub struct KTypeTransforms {
    pub m: i32,
    even: Option<ForwardRule>,
    odd: Option<ForwardRule>,
}

fn sum_profiles(ps: &[RadialProfile], part: fn(&RadialProfile) -> RadialProfile, u: f64) -> f64 {
    ps.iter().map(|p| part(p).eval(u)).sum()
}

impl KTypeTransforms {
    /// `s_max` sizes the quadrature panels for μ = is with |s| ≤ s_max.
    pub fn new(profiles: &[RadialProfile], m: i32, s_max: f64) -> Result<Self> {
        let r = profiles.iter().map(|p| p.support_radius()).fold(0.0, f64::max);
        let t_max = 2.0 * r;
        let half = m as f64 / 2.0;
        let has_even = profiles.iter().any(|p| p.parity != Parity::Odd && p.amplitude != 0.0);
        let has_odd = profiles.iter().any(|p| p.parity != Parity::Even && p.amplitude != 0.0);
        let ps = profiles.to_vec();
        let even = has_even.then(|| {
            let f = |x: f64| C64::new(x.cosh().powf(-half) * sum_profiles(&ps, RadialProfile::even_part, x / 2.0), 0.0);
            ForwardRule::new(f, t_max, KTypeJacobiSlot::new(0, m).unwrap(), s_max)
        });
        let odd = has_odd.then(|| {
            let f = |x: f64| {
                let h = sum_profiles(&ps, RadialProfile::odd_part, x / 2.0);
                C64::new(h / (x.sinh() * x.cosh().powf(half)), 0.0)
            };
            ForwardRule::new(f, t_max, KTypeJacobiSlot::new(1, m).unwrap(), s_max)
        });
        Ok(KTypeTransforms { m, even, odd })
    }

    pub fn j0(&self, mu: C64) -> Result<C64> {
        self.even.as_ref().map_or(Ok(C64::new(0.0, 0.0)), |r| r.eval(mu))
    }

    pub fn j1(&self, mu: C64) -> Result<C64> {
        self.odd.as_ref().map_or(Ok(C64::new(0.0, 0.0)), |r| r.eval(mu))
    }

    pub fn has_even(&self) -> bool {
        self.even.is_some()
    }

    pub fn has_odd(&self) -> bool {
        self.odd.is_some()
    }
}

/// J₀/J₁ rules for every K-type of a function.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileTransforms {
    pub epsilon: u8,
    pub ktypes: BTreeMap<i32, KTypeTransforms>,
}

impl ProfileTransforms {
    pub fn new(f: &HyperboloidFunction, s_max: f64) -> Result<Self> {
        f.validate()?;
        let ktypes = f
            .by_ktype()
            .into_iter()
            .map(|(m, ps)| Ok((m, KTypeTransforms::new(&ps, m, s_max)?)))
            .collect::<Result<_>>()?;
        Ok(ProfileTransforms {
            epsilon: f.epsilon,
            ktypes,
        })
    }

    /// Coefficients c(m, J₀f(μ), J₁f(μ)) over all K-types.
    pub fn map<F>(&self, mu: C64, c: F) -> Result<KTypeCoefficients>
    where
        F: Fn(i32, C64, C64) -> C64,
    {
        let mut out = KTypeCoefficients::new(self.epsilon, mu);
        for (&m, t) in &self.ktypes {
            out.insert(m, c(m, t.j0(mu)?, t.j1(mu)?))?;
        }
        Ok(out)
    }
}

fn require_lambda_zero(f: &HyperboloidFunction) -> Result<()> {
    if f.lambda != C64::new(0.0, 0.0) {
        return Err(NumericsError::Domain(format!("fast path needs lambda = 0, got {}", f.lambda)));
    }
    Ok(())
}

/// 𝐀^ξ_μ f = A^ξ_μ f / Γ((1−μ)/2) from precomputed transforms.
pub fn a_on_ktype_with(xi: u8, t: &ProfileTransforms, mu: C64) -> Result<KTypeCoefficients> {
    t.map(mu, |m, j0, j1| a_bold_from_transforms(xi, m, mu, j0, j1))
}

/// A^ξ_μ f on K-types, un-normalised.
pub fn a_on_ktype(xi: u8, f: &HyperboloidFunction, mu: C64) -> Result<KTypeCoefficients> {
    Ok(combined_continuous(xi, f, mu)?.scaled(gamma_raw((1.0 - mu) / 2.0)))
}

/// 𝐀^ξ_μ f = A^ξ_μ f / Γ((1−μ)/2).
pub fn combined_continuous(xi: u8, f: &HyperboloidFunction, mu: C64) -> Result<KTypeCoefficients> {
    require_lambda_zero(f)?;
    if xi > 1 {
        return Err(NumericsError::Domain(format!("xi = {xi} must be 0 or 1")));
    }
    let t = ProfileTransforms::new(f, mu.im.abs() + 1.0)?;
    a_on_ktype_with(xi, &t, mu)
}

/// 𝔸_μ f = Â⁰_μ f + Â¹_μ f, coefficients α̃_m J₀f + β̃_m J₁f; ε = 0.
pub fn combined_discrete_eps0(f: &HyperboloidFunction, mu: f64) -> Result<KTypeCoefficients> {
    require_lambda_zero(f)?;
    if f.epsilon != 0 {
        return Err(NumericsError::Domain("𝔸_μ is the epsilon = 0 family".into()));
    }
    let t = ProfileTransforms::new(f, 1.0)?;
    let mu = C64::new(mu, 0.0);
    t.map(mu, |m, j0, j1| alpha_tilde(m, mu) * j0 + beta_tilde(m, mu) * j1)
}

/// 𝒜_μ f = A⁰_μ f / Γ((1−μ)/2); ε = 1.
pub fn combined_discrete_eps1(f: &HyperboloidFunction, mu: f64) -> Result<KTypeCoefficients> {
    require_lambda_zero(f)?;
    if f.epsilon != 1 {
        return Err(NumericsError::Domain("𝒜_μ is the epsilon = 1 family".into()));
    }
    for t in &f.terms {
        check_parity(1, t.m)?;
    }
    let t = ProfileTransforms::new(f, 1.0)?;
    let mu = C64::new(mu, 0.0);
    t.map(mu, |m, j0, j1| a_bold_from_transforms(0, m, mu, j0, j1))
}
