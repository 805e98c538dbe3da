//! Jacobi functions and the Fourier–Jacobi transform pair per K-type.
//!
//! For a K-type m the radial eigenfunctions of □_m are
//!
//!   φ^m_μ(x) = ₂F₁((1+m+μ)/4, (1+m−μ)/4; 1/2; −sinh²x),
//!   ψ^m_μ(x) = i sinh x · ₂F₁((3+m+μ)/4, (3+m−μ)/4; 3/2; −sinh²x),
//!
//! and the transforms J₀, J₁ integrate against φ cosh^{m+1} and
//! ψ sinh cosh^{m+1}. Inversion is a continuous integral over μ = is with
//! density 1/|ℓ_j(is)|² plus residue terms at the finite set D_j.

use crate::exec::Exec;
use crate::numerics::{
    gamma_raw, gauss_legendre_nodes, hyp2f1, integrate_adaptive, is_nonpositive_integer, residue, rgamma, Interval, NumericsError,
    QuadratureSpec, C64, I,
};
use crate::Result;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Parameters (α, β) of a general Jacobi function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JacobiSpec {
    pub alpha: C64,
    pub beta: C64,
}

impl JacobiSpec {
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        if alpha.im == 0.0 && alpha.re < 0.0 && alpha.re == alpha.re.round() {
            return Err(NumericsError::Domain(format!("alpha = {alpha} is a negative integer")));
        }
        if beta.re <= -1.0 {
            return Err(NumericsError::Domain(format!("Re beta = {} must exceed -1", beta.re)));
        }
        Ok(JacobiSpec { alpha, beta })
    }
}

/// Which second ₂F₁ parameter to use in [`jacobi_phi_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParamConvention {
    /// ((α+β+1+μ)/2, (α+β+1−μ)/2): even in μ, and the one that solves □_m.
    Symmetric,
    /// ((α+β+1+μ)/2, (α−β+1+μ)/2): the published argument order, not even in μ.
    Printed,
}

/// φ^{α,β}_μ(t) = ₂F₁((α+β+1+μ)/2, (α+β+1−μ)/2; α+1; −sinh²t).
pub fn jacobi_phi(spec: JacobiSpec, mu: C64, t: f64) -> Result<C64> {
    jacobi_phi_with(spec, mu, t, ParamConvention::Symmetric)
}

pub fn jacobi_phi_with(spec: JacobiSpec, mu: C64, t: f64, conv: ParamConvention) -> Result<C64> {
    let JacobiSpec { alpha, beta } = spec;
    let a = (alpha + beta + 1.0 + mu) / 2.0;
    let b = match conv {
        ParamConvention::Symmetric => (alpha + beta + 1.0 - mu) / 2.0,
        ParamConvention::Printed => (alpha - beta + 1.0 + mu) / 2.0,
    };
    let s = t.sinh();
    hyp2f1(a, b, alpha + 1.0, -s * s)
}

/// c_{α,β}(μ) = Γ(μ)Γ(α+1)/(Γ((α+|β|+1+μ)/2)Γ((α−|β|+1+μ)/2)), |β| taken on Re β.
pub fn c_jacobi(spec: JacobiSpec, mu: C64) -> Result<C64> {
    if is_nonpositive_integer(mu) {
        return Err(NumericsError::Pole { location: mu });
    }
    let JacobiSpec { alpha, beta } = spec;
    let ab = if beta.re < 0.0 { -beta } else { beta };
    Ok(gamma_raw(mu) * gamma_raw(alpha + 1.0) * rgamma((alpha + ab + 1.0 + mu) / 2.0) * rgamma((alpha - ab + 1.0 + mu) / 2.0))
}

/// φ^m_μ(x), even in x and in μ.
pub fn phi_m(m: i32, mu: C64, x: f64) -> Result<C64> {
    let m = m as f64;
    let s = x.sinh();
    hyp2f1((1.0 + m + mu) / 4.0, (1.0 + m - mu) / 4.0, C64::new(0.5, 0.0), -s * s)
}

/// ψ^m_μ(x), odd in x and even in μ.
pub fn psi_m(m: i32, mu: C64, x: f64) -> Result<C64> {
    let mf = m as f64;
    let s = x.sinh();
    let f = hyp2f1((3.0 + mf + mu) / 4.0, (3.0 + mf - mu) / 4.0, C64::new(1.5, 0.0), -s * s)?;
    Ok(I * s * f)
}

/// The (j, m) slot of the K-type transforms: j = 0 uses φ, j = 1 uses ψ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KTypeJacobiSlot {
    pub j: u8,
    pub m: i32,
}

impl KTypeJacobiSlot {
    pub fn new(j: u8, m: i32) -> Result<Self> {
        if j > 1 {
            return Err(NumericsError::Domain(format!("j = {j} must be 0 or 1")));
        }
        Ok(KTypeJacobiSlot { j, m })
    }

    fn shifts(&self, mu: C64) -> (C64, C64) {
        let base = 1.0 + 2.0 * self.j as f64;
        let am = self.m.unsigned_abs() as f64;
        ((mu + base + am) / 4.0, (mu + base - am) / 4.0)
    }
}

/// φ^m_μ (j=0) or ψ^m_μ (j=1).
pub fn slot_function(slot: KTypeJacobiSlot, mu: C64, x: f64) -> Result<C64> {
    if slot.j == 0 {
        phi_m(slot.m, mu, x)
    } else {
        psi_m(slot.m, mu, x)
    }
}

/// Transform weight cosh^{m+1}(t), times sinh t for j = 1.
pub fn slot_weight(slot: KTypeJacobiSlot, t: f64) -> f64 {
    let w = t.cosh().powi(slot.m + 1);
    if slot.j == 0 {
        w
    } else {
        w * t.sinh()
    }
}

/// ℓ_j(μ) = Γ(μ/2)/(Γ((μ+1+2j+|m|)/4)Γ((μ+1+2j−|m|)/4)); pole at μ ∈ −2ℕ₀.
pub fn l_weight(slot: KTypeJacobiSlot, mu: C64) -> Result<C64> {
    if is_nonpositive_integer(mu / 2.0) {
        return Err(NumericsError::Pole { location: mu });
    }
    let (p, q) = slot.shifts(mu);
    Ok(gamma_raw(mu / 2.0) * rgamma(p) * rgamma(q))
}

/// 1/ℓ_j(μ), entire.
pub fn l_weight_recip(slot: KTypeJacobiSlot, mu: C64) -> C64 {
    let (p, q) = slot.shifts(mu);
    gamma_raw(p) * gamma_raw(q) * rgamma(mu / 2.0)
}

/// (ℓ_j(ν)ℓ_j(−ν))^{−1}, meromorphic with simple poles at ±D_j.
pub fn l_pair_recip(slot: KTypeJacobiSlot, nu: C64) -> C64 {
    l_weight_recip(slot, nu) * l_weight_recip(slot, -nu)
}

/// Continuous spectral density 1/|ℓ_j(is)|².
pub fn spectral_density(slot: KTypeJacobiSlot, s: f64) -> f64 {
    l_weight_recip(slot, C64::new(0.0, s)).norm_sqr()
}

/// Finite discrete spectrum of a slot with residue weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteSpectrum {
    pub points: Vec<f64>,
    pub weights: Vec<C64>,
}

/// D_j = {4k+1+2j−|m| < 0 : k ∈ ℕ₀}, ascending.
pub fn discrete_points(slot: KTypeJacobiSlot) -> Vec<f64> {
    let base = 1 + 2 * slot.j as i64 - slot.m.unsigned_abs() as i64;
    (0..)
        .map(|k: i64| base + 4 * k)
        .take_while(|&eta| eta < 0)
        .map(|eta| eta as f64)
        .collect()
}

pub fn discrete_set(slot: KTypeJacobiSlot) -> Result<DiscreteSpectrum> {
    let points = discrete_points(slot);
    let weights = points.iter().map(|&p| residue_weight(slot, p)).collect::<Result<Vec<_>>>()?;
    Ok(DiscreteSpectrum { points, weights })
}

/// Res_{ν=μ0} (ℓ_j(ν)ℓ_j(−ν))^{−1}, by symmetric Richardson extrapolation.
pub fn residue_weight(slot: KTypeJacobiSlot, mu0: f64) -> Result<C64> {
    if !discrete_points(slot).contains(&mu0) {
        return Err(NumericsError::Domain(format!("{mu0} is not in D_{} for m = {}", slot.j, slot.m)));
    }
    Ok(residue(|nu| l_pair_recip(slot, nu), mu0)?.0)
}

/// Factor applied to the residue term at μ₀ ∈ D_j.
///
/// At odd m the points of D_j are even integers, where Γ(μ/2) in ℓ_j has a
/// pole cancelled by the denominator. There the residue formula gives twice
/// the L² projection coefficient 1/‖φ_{μ₀}‖² (exactly 2 for every case
/// checked against direct norms), so the term carries ½. At odd μ₀ it is 1.
pub fn residue_multiplicity(mu0: f64) -> f64 {
    if mu0 % 2.0 == 0.0 {
        0.5
    } else {
        1.0
    }
}

/// Smooth rapidly decaying radial test profile: a Hermite–Gaussian
/// H_n((u−c)/w)·e^{−((u−c)/w)²}, optionally (anti)symmetrised.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub family: ProfileFamily,
    pub center: f64,
    pub width: f64,
    pub poly_degree: u32,
    pub parity: Parity,
    #[serde(default = "one")]
    pub amplitude: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileFamily {
    GaussianBump,
    HermiteGaussian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
    None,
}

// physicists' Hermite polynomial
fn hermite(n: u32, x: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * x);
    if n == 0 {
        return h0;
    }
    for k in 1..n {
        let h2 = 2.0 * x * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

impl RadialProfile {
    pub fn gaussian(center: f64, width: f64) -> Self {
        RadialProfile {
            family: ProfileFamily::GaussianBump,
            center,
            width,
            poly_degree: 0,
            parity: Parity::None,
            amplitude: 1.0,
        }
    }

    pub fn hermite(center: f64, width: f64, degree: u32) -> Self {
        RadialProfile {
            family: ProfileFamily::HermiteGaussian,
            poly_degree: degree,
            ..Self::gaussian(center, width)
        }
    }

    pub fn with_parity(mut self, parity: Parity) -> Self {
        self.parity = parity;
        self
    }

    pub fn scaled(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0) || !self.center.is_finite() || !self.amplitude.is_finite() {
            return Err(NumericsError::Domain(format!("invalid profile {self:?}")));
        }
        Ok(())
    }

    fn degree(&self) -> u32 {
        match self.family {
            ProfileFamily::GaussianBump => 0,
            ProfileFamily::HermiteGaussian => self.poly_degree,
        }
    }

    // k-th derivative of the unsymmetrised base
    fn base(&self, u: f64, k: u32) -> f64 {
        let x = (u - self.center) / self.width;
        let n = self.degree();
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * hermite(n + k, x) * (-x * x).exp() / self.width.powi(k as i32)
    }

    /// k-th derivative h^{(k)}(u), exact.
    pub fn deriv(&self, u: f64, k: u32) -> f64 {
        let b = self.base(u, k);
        let refl = || {
            // d^k/du^k g(−u) = (−1)^k g^{(k)}(−u)
            let s = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
            s * self.base(-u, k)
        };
        self.amplitude
            * match self.parity {
                Parity::None => b,
                Parity::Even => 0.5 * (b + refl()),
                Parity::Odd => 0.5 * (b - refl()),
            }
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.deriv(u, 0)
    }

    /// |u| beyond which the profile is below ~1e-20 of its scale.
    pub fn support_radius(&self) -> f64 {
        self.center.abs() + self.width * (7.0 + self.degree() as f64)
    }

    /// Even and odd parts as profiles of the same family.
    pub fn even_part(&self) -> RadialProfile {
        let mut p = *self;
        p.parity = match self.parity {
            Parity::Odd => return self.scaled(0.0),
            _ => Parity::Even,
        };
        p
    }

    pub fn odd_part(&self) -> RadialProfile {
        let mut p = *self;
        p.parity = match self.parity {
            Parity::Even => return self.scaled(0.0),
            _ => Parity::Odd,
        };
        p
    }

    /// Sampled parity check on [−R, R].
    pub fn parity_consistent(&self) -> bool {
        let r = self.support_radius();
        (0..=40).all(|k| {
            let u = r * k as f64 / 40.0;
            let (a, b) = (self.eval(u), self.eval(-u));
            let tol = 1e-14 * (a.abs() + b.abs() + 1e-300);
            match self.parity {
                Parity::Even => (a - b).abs() <= tol,
                Parity::Odd => (a + b).abs() <= tol,
                Parity::None => true,
            }
        })
    }
}

/// How ∫_{iℝ} … dμ is discretised.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralGridSpec {
    pub s_max: f64,
    pub n_points: usize,
    pub rule: SpectralRule,
    #[serde(default)]
    pub measure: SpectralMeasure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralRule {
    UniformTrapezoid,
    GaussLegendrePanels,
}

/// Reading of ∫_{iℝ} F(μ) dμ for the even integrands of this crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralMeasure {
    /// ∫_0^∞ F(is) ds: the unitary dual modulo μ ↔ −μ. Makes the inversion
    /// and Plancherel constants exact.
    #[default]
    HalfLine,
    /// ∫_ℝ F(is) ds, literally; every continuous part doubles.
    FullLine,
}

impl Default for SpectralGridSpec {
    fn default() -> Self {
        SpectralGridSpec {
            s_max: 10.0,
            n_points: 400,
            rule: SpectralRule::GaussLegendrePanels,
            measure: SpectralMeasure::HalfLine,
        }
    }
}

impl SpectralGridSpec {
    pub fn new(s_max: f64, n_points: usize) -> Self {
        SpectralGridSpec {
            s_max,
            n_points,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s_max > 0.0) || self.n_points < 16 {
            return Err(NumericsError::Domain(format!(
                "spectral grid needs s_max > 0 and n_points >= 16, got {} / {}",
                self.s_max, self.n_points
            )));
        }
        Ok(())
    }

    /// Nodes s ∈ [0, s_max] and weights, with the measure factor folded in.
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        let factor = match self.measure {
            SpectralMeasure::HalfLine => 1.0,
            SpectralMeasure::FullLine => 2.0,
        };
        let raw = match self.rule {
            SpectralRule::GaussLegendrePanels => gauss_legendre_nodes(0.0, self.s_max, (self.n_points / 10).max(1)),
            SpectralRule::UniformTrapezoid => {
                let n = self.n_points - 1;
                let h = self.s_max / n as f64;
                (0..=n)
                    .map(|k| {
                        let w = if k == 0 || k == n { 0.5 * h } else { h };
                        (k as f64 * h, w)
                    })
                    .collect()
            }
        };
        raw.into_iter().map(|(s, w)| (s, w * factor)).collect()
    }
}

/// Fixed composite Gauss–Legendre rule for J_j f on [0, t_max], with
/// f·weight tabulated once. Used for spectral grids, where the same f is
/// transformed at hundreds of μ.
#[derive(Clone, Debug, PartialEq)]
pub struct ForwardRule {
    pub slot: KTypeJacobiSlot,
    nodes: Vec<(f64, C64)>,
}

impl ForwardRule {
    /// Panels are sized so each spans at most ~3 radians of e^{ist/2}, s ≤ s_max.
    pub fn new<F: Fn(f64) -> C64>(f: F, t_max: f64, slot: KTypeJacobiSlot, s_max: f64) -> Self {
        let panels = (t_max * (s_max / 6.0).max(4.0)).ceil() as usize;
        let nodes = gauss_legendre_nodes(0.0, t_max, panels)
            .into_iter()
            .map(|(t, w)| (t, f(t) * (w * slot_weight(slot, t))))
            .collect();
        ForwardRule { slot, nodes }
    }

    pub fn for_profile(f: &RadialProfile, slot: KTypeJacobiSlot, s_max: f64) -> Self {
        Self::new(|t| C64::new(f.eval(t), 0.0), f.support_radius(), slot, s_max)
    }

    pub fn eval(&self, mu: C64) -> Result<C64> {
        self.nodes
            .iter()
            .try_fold(C64::new(0.0, 0.0), |acc, &(t, fw)| Ok(acc + fw * slot_function(self.slot, mu, t)?))
    }

    /// ∫ |f φ_μ weight| dt, the scale against which J_j f(μ) is resolved.
    pub fn l1(&self, mu: C64) -> Result<f64> {
        self.nodes
            .iter()
            .try_fold(0.0, |acc, &(t, fw)| Ok(acc + (fw * slot_function(self.slot, mu, t)?).norm()))
    }
}

/// J_j f(μ) for a function f on [0, t_max], adaptively. The absolute
/// tolerance is raised to 1e-13 of the integrand's L¹ mass, below which the
/// oscillatory cancellation is pure roundoff.
pub fn fj_forward_fn<F: Fn(f64) -> C64>(f: F, t_max: f64, slot: KTypeJacobiSlot, mu: C64, spec: &QuadratureSpec) -> Result<C64> {
    let scale = ForwardRule::new(&f, t_max, slot, mu.im.abs()).l1(mu)?;
    let spec = QuadratureSpec {
        abs_tol: spec.abs_tol.max(1e-13 * scale),
        ..*spec
    };
    let failure = std::cell::RefCell::new(None);
    let g = |t: f64| match slot_function(slot, mu, t) {
        Ok(v) => f(t) * v * slot_weight(slot, t),
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            C64::new(f64::NAN, 0.0)
        }
    };
    let r = integrate_adaptive(g, &Interval::new(0.0, t_max), &spec);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(r?.value)
}

/// J_j applied to a radial profile, truncated at its support radius.
pub fn fj_forward(f: &RadialProfile, slot: KTypeJacobiSlot, mu: C64, spec: &QuadratureSpec) -> Result<C64> {
    fj_forward_fn(|t| C64::new(f.eval(t), 0.0), f.support_radius(), slot, mu, spec)
}

/// Continuous and discrete inversion prefactors for a slot.
pub fn inversion_prefactors(j: u8) -> (f64, f64) {
    if j == 0 {
        (1.0 / (4.0 * PI * PI), -1.0 / (2.0 * PI))
    } else {
        (-1.0 / (PI * PI), 2.0 / PI)
    }
}

/// Tabulated spectral data of one transform, ready for pointwise inversion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FjSpectrum {
    pub slot: KTypeJacobiSlot,
    /// (s, quadrature weight × density, J_j f(is))
    pub nodes: Vec<(f64, f64, C64)>,
    /// (μ₀, J_j f(μ₀), residue weight)
    pub discrete: Vec<(f64, C64, C64)>,
    pub s_max: f64,
}

pub fn fj_spectrum<F>(slot: KTypeJacobiSlot, jf: F, grid: &SpectralGridSpec, exec: Exec) -> Result<FjSpectrum>
where
    F: Fn(C64) -> Result<C64> + Sync + Send,
{
    grid.validate()?;
    let nodes = grid.nodes();
    let values = exec.try_map(&nodes, |&(s, w)| Ok((s, w * spectral_density(slot, s), jf(C64::new(0.0, s))?)))?;
    let ds = discrete_set(slot)?;
    let discrete = ds
        .points
        .iter()
        .zip(&ds.weights)
        .map(|(&p, &r)| Ok((p, jf(C64::new(p, 0.0))?, r)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FjSpectrum {
        slot,
        nodes: values,
        discrete,
        s_max: grid.s_max,
    })
}

/// Result of a pointwise inversion with its truncation diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FjInversion {
    pub value: C64,
    pub continuous: C64,
    pub discrete: C64,
    /// |integrand| near s_max times the last panel width.
    pub tail_estimate: f64,
    pub warning: Option<String>,
}

impl FjSpectrum {
    /// Inversion at t; for j = 1 this reconstructs sinh(t)·f(t).
    pub fn invert(&self, t: f64, include_discrete: bool) -> Result<FjInversion> {
        let (kc, kd) = inversion_prefactors(self.slot.j);
        let mut cont = C64::new(0.0, 0.0);
        let mut tail = 0.0;
        let n = self.nodes.len();
        for (k, &(s, w, jf)) in self.nodes.iter().enumerate() {
            let term = jf * slot_function(self.slot, C64::new(0.0, s), t)? * w;
            cont += term;
            if k + 3 >= n {
                tail = f64::max(tail, term.norm());
            }
        }
        cont *= kc;
        tail *= kc.abs() * n as f64 / 10.0;
        let mut disc = C64::new(0.0, 0.0);
        if include_discrete {
            for &(mu0, jf, res) in &self.discrete {
                disc += jf * slot_function(self.slot, C64::new(mu0, 0.0), t)? * (res * residue_multiplicity(mu0));
            }
            disc *= kd;
        }
        let value = cont + disc;
        let warning =
            (tail > 1e-6 * value.norm().max(1e-12)).then(|| format!("spectral tail {tail:.2e} not negligible at s_max = {}", self.s_max));
        Ok(FjInversion {
            value,
            continuous: cont,
            discrete: disc,
            tail_estimate: tail,
            warning,
        })
    }
}

/// One-shot inversion of a spectral function Jf at t.
pub fn fj_invert<F>(slot: KTypeJacobiSlot, jf: F, t: f64, grid: &SpectralGridSpec) -> Result<FjInversion>
where
    F: Fn(C64) -> Result<C64> + Sync + Send,
{
    fj_spectrum(slot, jf, grid, Exec::default())?.invert(t, true)
}
