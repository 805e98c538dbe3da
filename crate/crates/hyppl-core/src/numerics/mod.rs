//! Numerical substrate: Gamma family, ₂F₁ on z ≤ 0, quadrature, differentiation.

mod diff;
mod gamma;
mod hyp2f1;
mod limit;
mod oracles;
mod quad;

pub use diff::{differentiate, differentiate_with_step};
pub use gamma::{beta, gamma, gamma_raw, is_nonpositive_integer, ln_gamma, pochhammer, rgamma, sinpi};
pub use hyp2f1::{hyp2f1, hyp2f1_series};
pub use limit::{removable_limit, residue};
pub use oracles::{casselman_closed_form, closed_form_integral_oracles, IdentityRatio};
pub use quad::{
    gauss_legendre_nodes, gauss_legendre_panels, integrate, integrate_adaptive, integrate_nodes, Interval, Node, QuadratureResult,
    QuadratureSpec,
};

pub use num_complex::Complex64 as C64;

/// Complex scalar; points of iℝ are `C64::new(0.0, s)`.
pub type ComplexValue = C64;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole at {location}")]
    Pole { location: C64 },
    #[error("no convergence in {what} (partial value {partial}, last term {last_term:e})")]
    NonConvergence { what: &'static str, partial: C64, last_term: f64 },
    #[error("subdivision budget exhausted (best {best}, error estimate {error:e})")]
    BudgetExhausted { best: C64, error: f64 },
    #[error("truncated tail too large: {tail:e} > {tol:e}")]
    Tail { tail: f64, tol: f64 },
    #[error("consistency check failed: {0}")]
    Consistency(String),
}

/// `c` as a complex number.
#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// The point `is` of the imaginary axis.
#[inline]
pub fn imag(s: f64) -> C64 {
    C64::new(0.0, s)
}

/// `i^k` for integer k, exact.
pub fn i_pow(k: i64) -> C64 {
    match k.rem_euclid(4) {
        0 => re(1.0),
        1 => I,
        2 => re(-1.0),
        _ => -I,
    }
}

/// `(-1)^k` for integer k.
#[inline]
pub fn neg1_pow(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Relative difference `|a-b| / max(|a|,|b|)`, zero when both vanish.
pub fn rel_diff(a: C64, b: C64) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}
