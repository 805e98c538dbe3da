//! Limits at removable singularities and residues of meromorphic functions.

use super::{NumericsError, C64};
use std::f64::consts::PI;

/// Value at z0 of a function with a removable singularity there, as the
/// mean over a circle of radius r (n points). Error is O(r^n) times the
/// growth of the Taylor coefficients.
pub fn removable_limit<F: FnMut(C64) -> C64>(mut f: F, z0: C64, r: f64, n: usize) -> C64 {
    // rotate off the real axis so no node lands on a lattice point
    let phase = PI / n as f64 * 0.5;
    let sum = (0..n).fold(C64::new(0.0, 0.0), |acc, k| {
        let t = 2.0 * PI * k as f64 / n as f64 + phase;
        acc + f(z0 + C64::from_polar(r, t))
    });
    sum / n as f64
}

/// Residue of g at a simple pole mu0 on the real axis.
///
/// Uses the symmetric estimate R(h) = h·(g(μ0+h) − g(μ0−h))/2, which is even
/// in h, and Richardson-extrapolates in h² over halving steps. Returns the
/// value and the agreement of the two finest extrapolants.
pub fn residue<F: Fn(C64) -> C64>(g: F, mu0: f64) -> Result<(C64, f64), NumericsError> {
    const ROWS: usize = 7;
    let mut t = [[C64::new(0.0, 0.0); ROWS]; ROWS];
    let mut h = 0.25;
    for i in 0..ROWS {
        let z = C64::new(mu0, 0.0);
        t[i][0] = (g(z + h) - g(z - h)) * (0.5 * h);
        let mut p = 4.0;
        for j in 1..=i {
            t[i][j] = t[i][j - 1] + (t[i][j - 1] - t[i - 1][j - 1]) / (p - 1.0);
            p *= 4.0;
        }
        h *= 0.5;
    }
    let v = t[ROWS - 1][ROWS - 1];
    let agree = (v - t[ROWS - 2][ROWS - 2]).norm();
    let scale = v.norm().max(1e-300);
    if !v.re.is_finite() || agree > 1e-7 * scale {
        return Err(NumericsError::NonConvergence {
            what: "residue extrapolation",
            partial: v,
            last_term: agree,
        });
    }
    Ok((v, agree))
}
