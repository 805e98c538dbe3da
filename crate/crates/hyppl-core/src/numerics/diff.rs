//! Central differences with Richardson extrapolation (Ridders' tableau).

use super::{NumericsError, C64};

const CON: f64 = 1.4;
const CON2: f64 = CON * CON;
const NTAB: usize = 12;

/// `order`-th derivative of f at x0, order 1 or 2, default initial step.
pub fn differentiate<F: Fn(f64) -> C64>(f: F, x0: f64, order: u8) -> Result<C64, NumericsError> {
    differentiate_with_step(f, x0, order, 0.1 * x0.abs().max(0.5))
}

/// As [`differentiate`] with an explicit initial step; the tableau shrinks it
/// by 1.4 per row, so f only needs to be smooth on [x0 − h0, x0 + h0].
///
/// The whole tableau is always filled: the usual early exit fires on a poor
/// first extrapolant when h0 is a sizeable fraction of the distance to the
/// nearest singularity. Three staggered starts are run and the medoid kept.
pub fn differentiate_with_step<F: Fn(f64) -> C64>(f: F, x0: f64, order: u8, h0: f64) -> Result<C64, NumericsError> {
    if !(order == 1 || order == 2) {
        return Err(NumericsError::Domain(format!("derivative order {order} unsupported")));
    }
    if !(h0 > 0.0) || h0 < 1e-10 * x0.abs().max(1.0) {
        return Err(NumericsError::Domain(format!("step {h0:e} underflows at x0 = {x0}")));
    }
    let runs = [1.0, 0.83, 0.69]
        .iter()
        .map(|&k| ridders(&f, x0, order, k * h0))
        .collect::<Result<Vec<_>, _>>()?;
    let spread = |i: usize| runs.iter().map(|r| (r - runs[i]).norm()).sum::<f64>();
    let best = (0..runs.len()).min_by(|&i, &j| spread(i).total_cmp(&spread(j))).unwrap_or(0);
    Ok(runs[best])
}

fn ridders<F: Fn(f64) -> C64>(f: &F, x0: f64, order: u8, h0: f64) -> Result<C64, NumericsError> {
    let fx = if order == 2 { f(x0) } else { C64::new(0.0, 0.0) };
    let stencil = |h: f64| -> C64 {
        if order == 1 {
            (f(x0 + h) - f(x0 - h)) / (2.0 * h)
        } else {
            (f(x0 + h) - fx * 2.0 + f(x0 - h)) / (h * h)
        }
    };
    let mut a = [[C64::new(0.0, 0.0); NTAB]; NTAB];
    let mut h = h0;
    a[0][0] = stencil(h);
    let mut best = a[0][0];
    let mut err = f64::INFINITY;
    for i in 1..NTAB {
        h /= CON;
        a[0][i] = stencil(h);
        let mut fac = CON2;
        for j in 1..=i {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= CON2;
            let e = (a[j][i] - a[j - 1][i]).norm().max((a[j][i] - a[j - 1][i - 1]).norm());
            if e <= err {
                err = e;
                best = a[j][i];
            }
        }
    }
    if !best.re.is_finite() || !best.im.is_finite() {
        return Err(NumericsError::NonConvergence {
            what: "Richardson differentiation",
            partial: best,
            last_term: err,
        });
    }
    Ok(best)
}
