//! Adaptive Gauss–Kronrod (21-point) quadrature for complex integrands.
//!
//! Every piece of an [`Interval`] is mapped to a finite parameter segment and
//! all segments share one priority queue, so the budget goes wherever the
//! error is. Declared endpoint singularities |x−x₀|^σ get the substitution
//! x = x₀ + L·t^p with p = 1/(1+σ), capped at 6, which makes the integrand
//! bounded in t.
//!
//! Near a singular end the rounded x has lost the information that matters:
//! fl(x₀ − d) − x₀ is mostly rounding noise once d ≪ ulp(x₀)/ε. Integrands
//! that form x − x₀ should use [`integrate_nodes`], which hands them the exact
//! offset from the nearest declared knot.

use super::{NumericsError, C64};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_352,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_5,
    0.149_445_554_002_916_9,
];
// Gauss weights for XGK[1], XGK[3], …, XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Cut-off for infinite ends without a declared decay power.
    pub truncation_radius: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_subdivisions: 4000,
            truncation_radius: 40.0,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        QuadratureSpec {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), NumericsError> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.truncation_radius > 0.0) {
            return Err(NumericsError::Domain("tolerances and truncation radius must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: C64,
    pub error_estimate: f64,
    pub subdivisions_used: usize,
}

/// Integration domain with optional singularity and decay declarations.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    /// Exponent σ > −1 of |x − lo|^σ behaviour at the lower end.
    pub lo_singularity: Option<f64>,
    pub hi_singularity: Option<f64>,
    /// f ~ |x|^{−p}, p > 1, at infinite ends; absent means truncation.
    pub decay_power: Option<f64>,
    /// Interior break points, each with an optional singular exponent.
    pub breaks: Vec<(f64, Option<f64>)>,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            hi,
            lo_singularity: None,
            hi_singularity: None,
            decay_power: None,
            breaks: Vec::new(),
        }
    }

    pub fn real_line() -> Self {
        Interval::new(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn singular_lo(mut self, exponent: f64) -> Self {
        self.lo_singularity = Some(exponent);
        self
    }

    pub fn singular_hi(mut self, exponent: f64) -> Self {
        self.hi_singularity = Some(exponent);
        self
    }

    pub fn algebraic_decay(mut self, power: f64) -> Self {
        self.decay_power = Some(power);
        self
    }

    pub fn with_break(mut self, x: f64, exponent: Option<f64>) -> Self {
        self.breaks.push((x, exponent));
        self
    }
}

/// A quadrature node: `x = knot + offset`, with `offset` exact even when the
/// sum has rounded away most of its digits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Node {
    pub x: f64,
    pub knot: f64,
    pub offset: f64,
}

impl Node {
    /// x − s, exact when s is the knot this node was generated from.
    #[inline]
    pub fn from(&self, s: f64) -> f64 {
        if self.knot == s {
            self.offset
        } else {
            self.x - s
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Map {
    Identity,
    // x = x0 + len·t^p
    PowLo { x0: f64, len: f64, p: f64 },
    // x = x1 − len·t^p
    PowHi { x1: f64, len: f64, p: f64 },
    // x = a + sign·(t^{−r} − 1)
    Tail { a: f64, sign: f64, r: f64 },
}

impl Map {
    #[inline]
    fn eval<F: Fn(Node) -> C64>(&self, f: &F, t: f64) -> C64 {
        let (node, jac) = match *self {
            Map::Identity => (
                Node {
                    x: t,
                    knot: t,
                    offset: 0.0,
                },
                1.0,
            ),
            Map::PowLo { x0, len, p } => {
                let d = len * t.powf(p);
                (
                    Node {
                        x: x0 + d,
                        knot: x0,
                        offset: d,
                    },
                    len * p * t.powf(p - 1.0),
                )
            }
            Map::PowHi { x1, len, p } => {
                let d = len * t.powf(p);
                (
                    Node {
                        x: x1 - d,
                        knot: x1,
                        offset: -d,
                    },
                    len * p * t.powf(p - 1.0),
                )
            }
            Map::Tail { a, sign, r } => {
                let tr = t.powf(-r);
                let x = a + sign * (tr - 1.0);
                (Node { x, knot: x, offset: 0.0 }, r * tr / t)
            }
        };
        if !node.x.is_finite() || !jac.is_finite() || jac == 0.0 {
            return C64::new(0.0, 0.0);
        }
        let v = f(node) * jac;
        // x rounded onto a declared singular end; the mapped integrand is
        // bounded there, so the node carries no weight worth keeping
        if !v.re.is_finite() || !v.im.is_finite() {
            return C64::new(0.0, 0.0);
        }
        v
    }
}

#[derive(Clone, Copy, Debug)]
struct Seg {
    a: f64,
    b: f64,
    map: usize,
    val: C64,
    err: f64,
    leaf: bool,
}

impl PartialEq for Seg {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Seg {}
impl PartialOrd for Seg {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Seg {
    fn cmp(&self, o: &Self) -> Ordering {
        // leaves sink to the bottom of the queue
        (!self.leaf).cmp(&!o.leaf).then(self.err.total_cmp(&o.err))
    }
}

fn gk21<F: Fn(Node) -> C64>(f: &F, map: &Map, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = map.eval(f, c);
    let mut k = fc * WGK[10];
    let mut g = C64::new(0.0, 0.0);
    let mut fv = [(C64::new(0.0, 0.0), C64::new(0.0, 0.0)); 10];
    let mut abs_k = fc.norm() * WGK[10];
    for j in 0..10 {
        let dx = h * XGK[j];
        let f1 = map.eval(f, c - dx);
        let f2 = map.eval(f, c + dx);
        fv[j] = (f1, f2);
        k += (f1 + f2) * WGK[j];
        abs_k += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            g += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = k * 0.5;
    let mut asc = (fc - mean).norm() * WGK[10];
    for j in 0..10 {
        asc += ((fv[j].0 - mean).norm() + (fv[j].1 - mean).norm()) * WGK[j];
    }
    let val = k * h;
    let h = h.abs();
    let (abs_k, asc) = (abs_k * h, asc * h);
    let mut err = ((k - g) * h).norm();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    if abs_k > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs_k);
    }
    if !val.re.is_finite() || !val.im.is_finite() {
        err = f64::INFINITY;
    }
    (val, err)
}

fn singular_map(lo: f64, hi: f64, exp_lo: Option<f64>, exp_hi: Option<f64>, out: &mut Vec<Map>) {
    let pow = |s: f64| (1.0 / (1.0 + s)).clamp(1.0, 6.0);
    match (exp_lo, exp_hi) {
        (None, None) => out.push(Map::Identity),
        (Some(s), None) => out.push(Map::PowLo {
            x0: lo,
            len: hi - lo,
            p: pow(s),
        }),
        (None, Some(s)) => out.push(Map::PowHi {
            x1: hi,
            len: hi - lo,
            p: pow(s),
        }),
        (Some(s1), Some(s2)) => {
            let mid = 0.5 * (lo + hi);
            singular_map(lo, mid, Some(s1), None, out);
            singular_map(mid, hi, None, Some(s2), out);
        }
    }
}

struct Plan {
    maps: Vec<Map>,
    // parameter range per map; identity maps carry their own x-range
    ranges: Vec<(f64, f64)>,
    // truncation points to probe for the tail check
    truncated_at: Vec<f64>,
}

fn plan(iv: &Interval, spec: &QuadratureSpec) -> Result<Plan, NumericsError> {
    if iv.lo.is_nan() || iv.hi.is_nan() || !(iv.lo < iv.hi) {
        return Err(NumericsError::Domain(format!("empty or invalid interval [{}, {}]", iv.lo, iv.hi)));
    }
    for e in [iv.lo_singularity, iv.hi_singularity]
        .into_iter()
        .chain(iv.breaks.iter().map(|b| b.1))
        .flatten()
    {
        if e <= -1.0 {
            return Err(NumericsError::Domain(format!("endpoint exponent {e} is not integrable")));
        }
    }
    if let Some(p) = iv.decay_power {
        if p <= 1.0 {
            return Err(NumericsError::Domain(format!(
                "decay power {p} does not give a convergent integral"
            )));
        }
    }
    let mut knots: Vec<(f64, Option<f64>)> = vec![(iv.lo, iv.lo_singularity)];
    let mut inner: Vec<(f64, Option<f64>)> = iv.breaks.iter().copied().filter(|(x, _)| *x > iv.lo && *x < iv.hi).collect();
    inner.sort_by(|a, b| a.0.total_cmp(&b.0));
    inner.dedup_by(|a, b| a.0 == b.0);
    knots.extend(inner);
    knots.push((iv.hi, iv.hi_singularity));

    let mut p = Plan {
        maps: Vec::new(),
        ranges: Vec::new(),
        truncated_at: Vec::new(),
    };
    let r_trunc = spec.truncation_radius;
    for w in knots.windows(2) {
        let (mut a, ea) = w[0];
        let (mut b, eb) = w[1];
        let lo_inf = a == f64::NEG_INFINITY;
        let hi_inf = b == f64::INFINITY;
        match iv.decay_power {
            Some(power) if lo_inf || hi_inf => {
                // algebraic tail: x = a + (t^{−r} − 1), integrand ~ t^{p−2}
                let r = 2.0 / (power - 1.0);
                if lo_inf && hi_inf {
                    p.maps.push(Map::Tail { a: 0.0, sign: -1.0, r });
                    p.ranges.push((0.0, 1.0));
                    p.maps.push(Map::Tail { a: 0.0, sign: 1.0, r });
                    p.ranges.push((0.0, 1.0));
                } else if hi_inf {
                    let mut start = a;
                    if ea.is_some() {
                        start = a + 1.0;
                        push_finite(&mut p, a, start, ea, None);
                    }
                    p.maps.push(Map::Tail { a: start, sign: 1.0, r });
                    p.ranges.push((0.0, 1.0));
                } else {
                    let mut end = b;
                    if eb.is_some() {
                        end = b - 1.0;
                        push_finite(&mut p, end, b, None, eb);
                    }
                    p.maps.push(Map::Tail { a: end, sign: -1.0, r });
                    p.ranges.push((0.0, 1.0));
                }
            }
            _ => {
                if lo_inf {
                    a = (-r_trunc).min(b - r_trunc);
                    p.truncated_at.push(a);
                }
                if hi_inf {
                    b = r_trunc.max(a + r_trunc);
                    p.truncated_at.push(b);
                }
                push_finite(&mut p, a, b, ea, eb);
            }
        }
    }
    Ok(p)
}

fn push_finite(p: &mut Plan, a: f64, b: f64, ea: Option<f64>, eb: Option<f64>) {
    let start = p.maps.len();
    singular_map(a, b, ea, eb, &mut p.maps);
    for m in &p.maps[start..] {
        p.ranges.push(match *m {
            Map::Identity => (a, b),
            _ => (0.0, 1.0),
        });
    }
}

/// Adaptive quadrature of `f` over `iv`.
pub fn integrate_adaptive<F>(f: F, iv: &Interval, spec: &QuadratureSpec) -> Result<QuadratureResult, NumericsError>
where
    F: Fn(f64) -> C64,
{
    integrate_nodes(|n: Node| f(n.x), iv, spec)
}

/// As [`integrate_adaptive`], for integrands that need exact distances to
/// the declared singular points.
pub fn integrate_nodes<F>(f: F, iv: &Interval, spec: &QuadratureSpec) -> Result<QuadratureResult, NumericsError>
where
    F: Fn(Node) -> C64,
{
    spec.validate()?;
    let plan = plan(iv, spec)?;
    let mut heap = BinaryHeap::new();
    for (i, (map, &(a, b))) in plan.maps.iter().zip(&plan.ranges).enumerate() {
        let (val, err) = gk21(&f, map, a, b);
        heap.push(Seg {
            a,
            b,
            map: i,
            val,
            err,
            leaf: false,
        });
    }
    let mut used = 0;
    loop {
        let (total, err) = totals(&heap);
        let tol = spec.abs_tol.max(spec.rel_tol * total.norm());
        if err <= tol {
            break;
        }
        let worst = match heap.peek() {
            Some(s) if !s.leaf => *s,
            _ => break,
        };
        if used >= spec.max_subdivisions {
            break;
        }
        heap.pop();
        let mid = 0.5 * (worst.a + worst.b);
        let width_floor = 1e-14 * worst.a.abs().max(worst.b.abs()).max(1e-300);
        if (worst.b - worst.a).abs() <= width_floor || mid == worst.a || mid == worst.b {
            heap.push(Seg { leaf: true, ..worst });
            continue;
        }
        used += 1;
        let map = &plan.maps[worst.map];
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (val, err) = gk21(&f, map, a, b);
            heap.push(Seg {
                a,
                b,
                map: worst.map,
                val,
                err,
                leaf: false,
            });
        }
    }
    let (value, mut error) = totals(&heap);
    let tol = spec.abs_tol.max(spec.rel_tol * value.norm());
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(NumericsError::BudgetExhausted {
            best: value,
            error: f64::INFINITY,
        });
    }
    if error > tol {
        return Err(NumericsError::BudgetExhausted { best: value, error });
    }
    if !plan.truncated_at.is_empty() {
        // crude tail bound: |f| at the cut and a bit beyond, over a unit scale
        let tail = plan
            .truncated_at
            .iter()
            .map(|&x| {
                let at = |x: f64| f(Node { x, knot: x, offset: 0.0 }).norm();
                at(x).max(at(1.25 * x))
            })
            .fold(0.0, f64::max);
        if tail > tol {
            return Err(NumericsError::Tail { tail, tol });
        }
        error += tail;
    }
    Ok(QuadratureResult {
        value,
        error_estimate: error,
        subdivisions_used: used,
    })
}

fn totals(heap: &BinaryHeap<Seg>) -> (C64, f64) {
    heap.iter().fold((C64::new(0.0, 0.0), 0.0), |(v, e), s| (v + s.val, e + s.err))
}

/// Shorthand: regular finite interval, value only.
pub fn integrate<F>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<C64, NumericsError>
where
    F: Fn(f64) -> C64,
{
    Ok(integrate_adaptive(f, &Interval::new(lo, hi), spec)?.value)
}

/// Composite 10-point Gauss–Legendre on `panels` equal panels.
pub fn gauss_legendre_panels<F>(f: F, lo: f64, hi: f64, panels: usize) -> C64
where
    F: Fn(f64) -> C64,
{
    let panels = panels.max(1);
    let w = (hi - lo) / panels as f64;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..panels {
        let c = lo + (k as f64 + 0.5) * w;
        let h = 0.5 * w;
        for j in 0..5 {
            let dx = h * XGK[2 * j + 1];
            acc += (f(c - dx) + f(c + dx)) * (WG[j] * h);
        }
    }
    acc
}

/// Nodes and weights of composite 10-point Gauss–Legendre.
pub fn gauss_legendre_nodes(lo: f64, hi: f64, panels: usize) -> Vec<(f64, f64)> {
    let panels = panels.max(1);
    let w = (hi - lo) / panels as f64;
    let mut out = Vec::with_capacity(10 * panels);
    for k in 0..panels {
        let c = lo + (k as f64 + 0.5) * w;
        let h = 0.5 * w;
        for j in (0..5).rev() {
            out.push((c - h * XGK[2 * j + 1], WG[j] * h));
        }
        for j in 0..5 {
            out.push((c + h * XGK[2 * j + 1], WG[j] * h));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{gamma, rel_diff};
    use std::f64::consts::PI;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn sine_integral() {
        let r = integrate_adaptive(|x| re(x.sin()), &Interval::new(0.0, PI), &QuadratureSpec::default()).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-13);
        assert!(r.error_estimate >= 0.0);
    }

    #[test]
    fn lorentzian_on_real_line() {
        let r = integrate_adaptive(
            |x| re(1.0 / (x * x + 1.0)),
            &Interval::real_line().algebraic_decay(2.0),
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!((r.value.re - PI).abs() < 1e-11, "{}", r.value);
    }

    #[test]
    fn gaussian_truncated() {
        let r = integrate_adaptive(|x| re((-x * x).exp()), &Interval::real_line(), &QuadratureSpec::default()).unwrap();
        assert!((r.value.re - PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn tail_check_fires() {
        let spec = QuadratureSpec {
            truncation_radius: 3.0,
            ..Default::default()
        };
        let r = integrate_adaptive(|x| re((-x.abs()).exp()), &Interval::real_line(), &spec);
        assert!(matches!(r, Err(NumericsError::Tail { .. })));
    }

    #[test]
    fn endpoint_singularities() {
        // ∫_0^1 x^{−1/2}(1−x)^{−0.7} dx = B(1/2, 0.3)
        let want = gamma(re(0.5)).unwrap() * gamma(re(0.3)).unwrap() / gamma(re(0.8)).unwrap();
        let r = integrate_nodes(
            |n: Node| re(n.from(0.0).powf(-0.5) * (-n.from(1.0)).powf(-0.7)),
            &Interval::new(0.0, 1.0).singular_lo(-0.5).singular_hi(-0.7),
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!(rel_diff(r.value, want) < 1e-10, "{} vs {}", r.value, want);
    }

    #[test]
    fn interior_break() {
        // ∫_{−1}^{2} |x|^{−1/3} dx = 1.5(1 + 2^{2/3})
        let r = integrate_nodes(
            |n: Node| re(n.from(0.0).abs().powf(-1.0 / 3.0)),
            &Interval::new(-1.0, 2.0).with_break(0.0, Some(-1.0 / 3.0)),
            &QuadratureSpec::default(),
        )
        .unwrap();
        let want = 1.5 * (1.0 + 2f64.powf(2.0 / 3.0));
        assert!((r.value.re - want).abs() < 1e-11);
    }

    #[test]
    fn budget_exhaustion_carries_estimate() {
        let spec = QuadratureSpec {
            max_subdivisions: 3,
            ..Default::default()
        };
        let r = integrate_adaptive(|x| re((50.0 * x).sin().abs()), &Interval::new(0.0, 10.0), &spec);
        match r {
            Err(NumericsError::BudgetExhausted { best, error }) => {
                assert!(best.re.is_finite() && error > 0.0)
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn invalid_declarations() {
        let s = QuadratureSpec::default();
        assert!(integrate_adaptive(|_| re(1.0), &Interval::new(1.0, 0.0), &s).is_err());
        assert!(integrate_adaptive(|_| re(1.0), &Interval::new(0.0, 1.0).singular_lo(-1.0), &s).is_err());
    }

    #[test]
    fn gl_panels_polynomial_exact() {
        let v = gauss_legendre_panels(|x| re(x.powi(7) - 3.0 * x * x), -1.0, 2.0, 3);
        let want = (2f64.powi(8) - 1.0) / 8.0 - (8.0 + 1.0);
        assert!((v.re - want).abs() < 1e-12);
        let nodes = gauss_legendre_nodes(0.0, 1.0, 4);
        assert_eq!(nodes.len(), 40);
        let s: f64 = nodes.iter().map(|(_, w)| w).sum();
        assert!((s - 1.0).abs() < 1e-14);
    }
}
