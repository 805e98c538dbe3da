//! Harmonic analysis on line bundles over the one-sheeted hyperboloid SL(2,ℝ)/H.
//!
//! The crate evaluates, and checks numerically, the explicit Plancherel and
//! inversion formulas for `Ind_H^G(ε ⊗ e^λ)`, where H is the diagonal
//! subgroup. All of it is built from a small set of ingredients:
//!
//! - [`numerics`]: complex Gamma, ₂F₁ on the negative axis, adaptive
//!   Gauss–Kronrod quadrature, and Richardson differentiation.
//! - [`jacobi`]: Jacobi functions φ^m_μ and ψ^m_μ, the weights ℓ_j, and the
//!   Fourier–Jacobi transform pair with its residue terms.
//! - [`geometry`]: group elements, the (θ,u) and (θ,y) charts, K-type test
//!   functions, the Casimir operator, and its radial reduction □_m.
//! - [`intertwine`]: the kernels K^ξ_{λ,μ}, the operators P and A on K-types,
//!   Knapp–Stein eigenvalues, Riesz distributions, and the λ-shift ankh.
//! - [`plancherel`]: spectral densities, the discrete weights, and the full
//!   Plancherel/inversion assemblies with their ratio diagnostics.
//!
//! Parallelism is confined to [`Exec`], which maps over spectral grids with
//! rayon when the `parallel` feature is on and sequentially otherwise.

#![allow(clippy::neg_cmp_op_on_partial_ord)]
// oracle values are frozen at 17 significant digits
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod exec;
pub mod geometry;
pub mod identities;
pub mod intertwine;
pub mod jacobi;
pub mod numerics;
pub mod plancherel;

pub use exec::Exec;
pub use numerics::{NumericsError, C64};

pub type Result<T> = std::result::Result<T, NumericsError>;
