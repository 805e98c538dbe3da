//! Assembly of the Plancherel and inversion formulas.
//!
//! Continuous part: ∫ Σ_ξ ‖𝐀^ξ_{is} f‖² ds / |a(is)|² over s ≥ 0 (see
//! [`SpectralMeasure`]). Discrete part: a weighted Knapp–Stein norm of 𝔸_μ f
//! (ε = 0) or 𝒜_μ f (ε = 1) at finitely many μ ∈ 1−ε−2ℕ.

mod lambda;

pub use lambda::{
    discrete_lambda_factor, duality_check, lambda_extended_A, lambda_extended_bb, lambda_extended_cal, transported_spectrum, DualityReport,
    TransportRow,
};

use crate::exec::Exec;
use crate::geometry::{invariant_norm_sq, CoordinatePoint, HyperboloidFunction};
use crate::intertwine::{
    a_bold_from_transforms, alpha_tilde, beta_tilde, hat_t_eigenvalue, hat_t_eigenvalue_printed, knapp_stein_b, p_bold_radial, pcal_radial,
    pp_radial, KTypeCoefficients, ProfileTransforms,
};
use crate::jacobi::{SpectralGridSpec, SpectralMeasure};
use crate::numerics::{gamma_raw, rgamma, NumericsError, QuadratureSpec, C64, I};
use crate::Result;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Which constants the discrete sums use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscreteConvention {
    /// Constants re-derived from the residue calculus; these make the
    /// formulas exact.
    #[default]
    Derived,
    /// The constants as printed: 1/(16π), 1/(32π) for ε = 0 and the ε = 1
    /// weight with its T̂¹ orientation.
    Printed,
}

// derived / printed, for the ε = 0 Plancherel and inversion constants
pub const EPS0_DERIVED_OVER_PRINTED: f64 = 4.0 / (PI * PI);
// derived / printed for ε = 1: residues at even μ₀ count with multiplicity ½
pub const EPS1_DERIVED_OVER_PRINTED: f64 = 0.5;

/// a(μ) = 2^{3/2} π Γ(μ/2) / (Γ((1+μ+ε)/2) Γ((1+μ−ε)/2)).
pub fn a_density(epsilon: u8, mu: C64) -> C64 {
    let e = epsilon as f64;
    2f64.powf(1.5) * PI * gamma_raw(mu / 2.0) * rgamma((1.0 + mu + e) / 2.0) * rgamma((1.0 + mu - e) / 2.0)
}

/// 1/|a(is)|², with the Γ(μ/2) of a cancelled by hand: the ε = 0 weight
/// vanishes at s = 0, the ε = 1 weight is |Γ(1+μ/2)|²/(8π²).
pub fn plancherel_weight(epsilon: u8, s: f64) -> f64 {
    let mu = C64::new(0.0, s);
    let r = if epsilon == 0 {
        rgamma(mu / 2.0) * gamma_raw((1.0 + mu) / 2.0).powi(2)
    } else {
        gamma_raw(1.0 + mu / 2.0)
    };
    r.norm_sqr() / (8.0 * PI * PI)
}

/// σ(μ) = Γ((1+μ)/4)^{−2}Γ((1−μ)/4)^{−2} + Γ((3+μ)/4)^{−2}Γ((3−μ)/4)^{−2}.
pub fn sigma_weight(mu: C64) -> C64 {
    (rgamma((1.0 + mu) / 4.0) * rgamma((1.0 - mu) / 4.0)).powi(2) + (rgamma((3.0 + mu) / 4.0) * rgamma((3.0 - mu) / 4.0)).powi(2)
}

fn check_lattice(epsilon: u8, mu: f64) -> Result<()> {
    let k = (1.0 - epsilon as f64 - mu) / 2.0;
    if epsilon > 1 || k < 0.0 || k.fract() != 0.0 {
        return Err(NumericsError::Domain(format!("mu = {mu} is not in 1 - {epsilon} - 2N")));
    }
    Ok(())
}

/// The weight in front of the discrete norm at μ ∈ 1−ε−2ℕ.
pub fn discrete_coefficient(epsilon: u8, mu: f64, conv: DiscreteConvention) -> Result<f64> {
    check_lattice(epsilon, mu)?;
    let z = C64::new(mu, 0.0);
    let printed = if epsilon == 0 {
        gamma_raw(1.0 - z) * rgamma(-z / 2.0) / sigma_weight(z) / (16.0 * PI)
    } else {
        gamma_raw(-z) * z * z * rgamma((1.0 - z) / 2.0) / (2.0 * PI)
    };
    let scale = match (conv, epsilon) {
        (DiscreteConvention::Printed, _) => 1.0,
        (DiscreteConvention::Derived, 0) => EPS0_DERIVED_OVER_PRINTED,
        (DiscreteConvention::Derived, _) => EPS1_DERIVED_OVER_PRINTED,
    };
    Ok(printed.re * scale)
}

/// Parameters of a discrete-series norm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteNormSpec {
    pub epsilon: u8,
    pub mu: f64,
}

/// Σ_m 2π λ_m |F_m|², with λ_m the eigenvalue of T⁰_μ (ε = 0) or of the
/// positive T̂¹_μ (ε = 1).
pub fn discrete_norm_sq(spec: DiscreteNormSpec, f: &KTypeCoefficients) -> Result<f64> {
    discrete_norm_sq_with(spec, f, DiscreteConvention::Derived)
}

/// As [`discrete_norm_sq`]; `Printed` uses the printed T̂¹ orientation, whose
/// eigenvalues are ≤ 0.
pub fn discrete_norm_sq_with(spec: DiscreteNormSpec, f: &KTypeCoefficients, conv: DiscreteConvention) -> Result<f64> {
    check_lattice(spec.epsilon, spec.mu)?;
    let mu = C64::new(spec.mu, 0.0);
    if f.mu != mu || f.epsilon != spec.epsilon {
        return Err(NumericsError::Domain(format!(
            "coefficients at mu = {}, epsilon = {} do not match {:?}",
            f.mu, f.epsilon, spec
        )));
    }
    let mut total = C64::new(0.0, 0.0);
    for (&m, c) in &f.coeffs {
        let ev = match (spec.epsilon, conv) {
            (0, _) => knapp_stein_b(0, m, mu)?,
            (_, DiscreteConvention::Derived) => hat_t_eigenvalue(1, m, mu)?,
            (_, DiscreteConvention::Printed) => hat_t_eigenvalue_printed(1, m, mu)?,
        };
        total += 2.0 * PI * ev.conj() * c.norm_sqr();
    }
    let scale = 2.0 * PI * f.coeffs.values().map(|c| c.norm_sqr()).sum::<f64>() + 1e-300;
    if total.im.abs() > 1e-10 * scale.max(total.norm()) {
        return Err(NumericsError::Consistency(format!("discrete norm {total} is not real")));
    }
    if conv == DiscreteConvention::Derived && total.re < -1e-10 * total.norm().max(1e-300) {
        return Err(NumericsError::Consistency(format!("discrete norm {total} is negative")));
    }
    Ok(total.re)
}

/// Lattice points 1−ε, −1−ε, … down to −max|m|−2; below that every
/// discrete coefficient of f vanishes.
pub fn discrete_lattice(f: &HyperboloidFunction) -> Vec<f64> {
    let mmax = f.terms.iter().map(|t| t.m.abs()).max().unwrap_or(0) as f64;
    let mut out = Vec::new();
    let mut mu = 1.0 - f.epsilon as f64;
    while mu >= -mmax - 2.0 {
        if mu < 0.0 {
            out.push(mu);
        }
        mu -= 2.0;
    }
    out
}

/// Knobs shared by the Plancherel and inversion assemblies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlancherelOptions {
    pub convention: DiscreteConvention,
    pub include_discrete: bool,
    pub exec: Exec,
    /// Accuracy of the direct kernel quadrature used for λ ≠ 0.
    pub kernel_spec: QuadratureSpec,
}

impl Default for PlancherelOptions {
    fn default() -> Self {
        PlancherelOptions {
            convention: DiscreteConvention::Derived,
            include_discrete: true,
            exec: Exec::default(),
            kernel_spec: QuadratureSpec::with_tol(1e-9, 1e-7),
        }
    }
}

/// Σ_ξ ‖𝐀^ξ_{is} f‖² / |a(is)|² per K-type.
pub fn continuous_integrand(t: &ProfileTransforms, s: f64) -> Result<BTreeMap<i32, f64>> {
    let mu = C64::new(0.0, s);
    let w = plancherel_weight(t.epsilon, s);
    let mut out = BTreeMap::new();
    for (&m, k) in &t.ktypes {
        let (j0, j1) = (k.j0(mu)?, k.j1(mu)?);
        let v: f64 = (0..2u8).map(|xi| a_bold_from_transforms(xi, m, mu, j0, j1).norm_sqr()).sum();
        out.insert(m, 2.0 * PI * v * w);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuousPart {
    pub value: f64,
    pub per_ktype: BTreeMap<i32, f64>,
    /// (s, integrand) at the grid nodes.
    pub integrand: Vec<(f64, f64)>,
    pub tail_estimate: f64,
    pub warning: Option<String>,
}

fn grid_integrate(grid: &SpectralGridSpec, nodes: &[(f64, f64)], values: Vec<BTreeMap<i32, f64>>) -> ContinuousPart {
    let mut per_ktype: BTreeMap<i32, f64> = BTreeMap::new();
    let mut integrand = Vec::with_capacity(nodes.len());
    for (&(s, w), v) in nodes.iter().zip(&values) {
        let total: f64 = v.values().sum();
        for (&m, x) in v {
            *per_ktype.entry(m).or_default() += w * x;
        }
        integrand.push((s, total));
    }
    let value: f64 = per_ktype.values().sum();
    // the integrand decays at least exponentially; the last node value times
    // one tenth of the range bounds what lies beyond s_max
    let last = integrand.last().map_or(0.0, |x| x.1.abs());
    let factor = if grid.measure == SpectralMeasure::FullLine { 2.0 } else { 1.0 };
    let tail_estimate = last * grid.s_max / 10.0 * factor;
    let warning = (tail_estimate > 1e-6 * value.abs().max(1e-300))
        .then(|| format!("spectral tail {tail_estimate:.2e} is not negligible at s_max = {}", grid.s_max));
    ContinuousPart {
        value,
        per_ktype,
        integrand,
        tail_estimate,
        warning,
    }
}

/// The continuous part of ‖f‖²; λ ≠ 0 goes through direct kernel quadrature.
pub fn continuous_part(f: &HyperboloidFunction, grid: &SpectralGridSpec, opts: &PlancherelOptions) -> Result<ContinuousPart> {
    grid.validate()?;
    f.validate()?;
    let nodes = grid.nodes();
    let values = if f.lambda == C64::new(0.0, 0.0) {
        let t = ProfileTransforms::new(f, grid.s_max)?;
        opts.exec.try_map(&nodes, |&(s, _)| continuous_integrand(&t, s))?
    } else {
        opts.exec.try_map(&nodes, |&(s, _)| {
            let mu = C64::new(0.0, s);
            let w = plancherel_weight(f.epsilon, s);
            let mut out: BTreeMap<i32, f64> = BTreeMap::new();
            for xi in 0..2u8 {
                let a = lambda_extended_A(xi, f, mu, &opts.kernel_spec)?;
                for (&m, c) in &a.coeffs {
                    *out.entry(m).or_default() += 2.0 * PI * c.norm_sqr() * w;
                }
            }
            Ok(out)
        })?
    };
    Ok(grid_integrate(grid, &nodes, values))
}

/// 𝔸_μ f (ε = 0) or 𝒜_μ f (ε = 1) at a lattice point, λ = 0.
pub fn discrete_image(f: &HyperboloidFunction, t: &ProfileTransforms, mu: f64) -> Result<KTypeCoefficients> {
    check_lattice(f.epsilon, mu)?;
    let z = C64::new(mu, 0.0);
    if f.epsilon == 0 {
        t.map(z, |m, j0, j1| alpha_tilde(m, z) * j0 + beta_tilde(m, z) * j1)
    } else {
        t.map(z, |m, j0, j1| a_bold_from_transforms(0, m, z, j0, j1))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteTerm {
    pub mu: f64,
    pub contribution: f64,
    pub per_ktype: BTreeMap<i32, f64>,
}

/// Discrete contributions at every lattice point where f has any. λ ≠ 0
/// takes 𝔸_{λ,μ} / 𝒜_{λ,μ} from kernel quadrature.
pub fn discrete_part(f: &HyperboloidFunction, opts: &PlancherelOptions) -> Result<Vec<DiscreteTerm>> {
    f.validate()?;
    let conv = opts.convention;
    let t = if f.lambda == C64::new(0.0, 0.0) {
        Some(ProfileTransforms::new(f, 1.0)?)
    } else {
        None
    };
    let mut out = Vec::new();
    for mu in discrete_lattice(f) {
        let img = match (&t, f.epsilon) {
            (Some(t), _) => discrete_image(f, t, mu)?,
            (None, 0) => lambda_extended_bb(f, mu, &opts.kernel_spec)?,
            (None, _) => lambda_extended_cal(f, mu, &opts.kernel_spec)?,
        };
        let coef = discrete_coefficient(f.epsilon, mu, conv)?;
        let spec = DiscreteNormSpec { epsilon: f.epsilon, mu };
        let mut per_ktype = BTreeMap::new();
        for (&m, &c) in &img.coeffs {
            let mut single = KTypeCoefficients::new(f.epsilon, img.mu);
            single.insert(m, c)?;
            per_ktype.insert(m, coef * discrete_norm_sq_with(spec, &single, conv)?);
        }
        let contribution: f64 = per_ktype.values().sum();
        // exact zeros from the selection rules come out at roundoff level
        let scale = 2.0 * PI * img.coeffs.values().map(|c| c.norm_sqr()).sum::<f64>();
        if contribution.abs() > 1e-13 * scale.max(1e-300) {
            out.push(DiscreteTerm {
                mu,
                contribution,
                per_ktype,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlancherelReport {
    pub epsilon: u8,
    pub lambda_imag: f64,
    pub lhs_norm_sq: f64,
    pub continuous_part: f64,
    pub discrete_terms: Vec<DiscreteTerm>,
    pub rhs_total: f64,
    pub ratio: f64,
    pub tail_estimate: f64,
    /// K-type → (continuous, discrete) contributions.
    pub per_ktype: BTreeMap<i32, (f64, f64)>,
    pub convention: DiscreteConvention,
    pub warnings: Vec<String>,
}

/// ‖f‖² against the spectral side; the ratio is reported, not judged.
pub fn verify_plancherel(f: &HyperboloidFunction, grid: &SpectralGridSpec, opts: &PlancherelOptions) -> Result<PlancherelReport> {
    let lhs = invariant_norm_sq(f, &QuadratureSpec::default())?;
    let cont = continuous_part(f, grid, opts)?;
    let discrete_terms = if opts.include_discrete {
        discrete_part(f, opts)?
    } else {
        Vec::new()
    };
    let mut per_ktype: BTreeMap<i32, (f64, f64)> = cont.per_ktype.iter().map(|(&m, &v)| (m, (v, 0.0))).collect();
    for d in &discrete_terms {
        for (&m, &v) in &d.per_ktype {
            per_ktype.entry(m).or_default().1 += v;
        }
    }
    let rhs = cont.value + discrete_terms.iter().map(|d| d.contribution).sum::<f64>();
    let ratio = if lhs == 0.0 && rhs == 0.0 { 1.0 } else { rhs / lhs };
    Ok(PlancherelReport {
        epsilon: f.epsilon,
        lambda_imag: f.lambda.im,
        lhs_norm_sq: lhs,
        continuous_part: cont.value,
        discrete_terms,
        rhs_total: rhs,
        ratio,
        tail_estimate: cont.tail_estimate,
        per_ktype,
        convention: opts.convention,
        warnings: cont.warning.into_iter().collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InversionResult {
    pub point: CoordinatePoint,
    pub exact: C64,
    pub reconstructed: C64,
    pub continuous: C64,
    pub discrete: C64,
    pub error: f64,
}

/// Precomputed transforms of f for pointwise inversion at many points.
pub struct InversionEngine<'a> {
    f: &'a HyperboloidFunction,
    t: ProfileTransforms,
    nodes: Vec<(f64, f64)>,
    // per node: s, weight/|a|², per K-type (𝐀⁰, 𝐀¹)
    spectral: Vec<(f64, f64, BTreeMap<i32, [C64; 2]>)>,
    discrete: Vec<(f64, KTypeCoefficients)>,
    opts: PlancherelOptions,
}

impl<'a> InversionEngine<'a> {
    pub fn new(f: &'a HyperboloidFunction, grid: &SpectralGridSpec, opts: &PlancherelOptions) -> Result<Self> {
        grid.validate()?;
        f.validate()?;
        if f.lambda != C64::new(0.0, 0.0) {
            return Err(NumericsError::Domain("pointwise inversion is implemented for lambda = 0".into()));
        }
        let t = ProfileTransforms::new(f, grid.s_max)?;
        let nodes = grid.nodes();
        let spectral = opts.exec.try_map(&nodes, |&(s, w)| {
            let mu = C64::new(0.0, s);
            let mut per = BTreeMap::new();
            for (&m, k) in &t.ktypes {
                let (j0, j1) = (k.j0(mu)?, k.j1(mu)?);
                per.insert(m, [0u8, 1].map(|xi| a_bold_from_transforms(xi, m, mu, j0, j1)));
            }
            Ok::<_, NumericsError>((s, w * plancherel_weight(f.epsilon, s), per))
        })?;
        let discrete = discrete_lattice(f)
            .into_iter()
            .map(|mu| Ok((mu, discrete_image(f, &t, mu)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(InversionEngine {
            f,
            t,
            nodes,
            spectral,
            discrete,
            opts: *opts,
        })
    }

    pub fn transforms(&self) -> &ProfileTransforms {
        &self.t
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Reconstruct f(k_θ b_u).
    pub fn invert(&self, p: CoordinatePoint) -> Result<InversionResult> {
        let mut cont = C64::new(0.0, 0.0);
        for (s, w, per) in &self.spectral {
            let mu = C64::new(0.0, *s);
            for (&m, a) in per {
                let mut v = C64::new(0.0, 0.0);
                for xi in 0..2u8 {
                    v += p_bold_radial(xi, m, mu, p.u)? * a[xi as usize];
                }
                cont += C64::from_polar(*w, m as f64 * p.theta) * v;
            }
        }
        let mut disc = C64::new(0.0, 0.0);
        if self.opts.include_discrete {
            for (mu, img) in &self.discrete {
                disc += self.discrete_term(*mu, img, p)?;
            }
        }
        let exact = self.f.eval(p);
        let reconstructed = cont + disc;
        Ok(InversionResult {
            point: p,
            exact,
            reconstructed,
            continuous: cont,
            discrete: disc,
            error: (reconstructed - exact).norm(),
        })
    }

    fn discrete_term(&self, mu: f64, img: &KTypeCoefficients, p: CoordinatePoint) -> Result<C64> {
        let z = C64::new(mu, 0.0);
        let mut v = C64::new(0.0, 0.0);
        if self.f.epsilon == 0 {
            // C Σ (−μ/σ(μ)) ℙ_μ 𝔸_μ f
            let c = match self.opts.convention {
                DiscreteConvention::Printed => 1.0 / (32.0 * PI),
                DiscreteConvention::Derived => EPS0_DERIVED_OVER_PRINTED / (32.0 * PI),
            };
            let k = c * (-z / sigma_weight(z));
            for (&m, &a) in &img.coeffs {
                if a != C64::new(0.0, 0.0) {
                    v += k * a * pp_radial(m, z, p.u)? * C64::from_polar(1.0, m as f64 * p.theta);
                }
            }
        } else {
            // (1/2πi) Σ μ 𝒫_μ 𝒜_μ f
            let c = match self.opts.convention {
                DiscreteConvention::Printed => 1.0,
                DiscreteConvention::Derived => EPS1_DERIVED_OVER_PRINTED,
            };
            let k = c * z / (2.0 * PI * I);
            for (&m, &a) in &img.coeffs {
                if a != C64::new(0.0, 0.0) {
                    v += k * a * pcal_radial(m, z, p.u)? * C64::from_polar(1.0, m as f64 * p.theta);
                }
            }
        }
        Ok(v)
    }
}

/// Reconstruct f at one point from its spectral data.
pub fn verify_inversion(
    f: &HyperboloidFunction,
    p: CoordinatePoint,
    grid: &SpectralGridSpec,
    opts: &PlancherelOptions,
) -> Result<InversionResult> {
    InversionEngine::new(f, grid, opts)?.invert(p)
}
