use hyppl_core::geometry::{CoordinatePoint, HyperboloidFunction, KTypeTerm};
use hyppl_core::identities::t0_functional_equation;
use hyppl_core::intertwine::{alpha_tilde, beta_tilde, knapp_stein_b, KTypeCoefficients};
use hyppl_core::jacobi::{RadialProfile, SpectralGridSpec};
use hyppl_core::numerics::{rgamma, QuadratureSpec, C64};
use hyppl_core::plancherel::*;
use proptest::prelude::*;
use std::f64::consts::PI;

fn func(eps: u8, lambda: f64, terms: &[(i32, RadialProfile)]) -> HyperboloidFunction {
    let terms = terms.iter().map(|&(m, profile)| KTypeTerm { m, profile }).collect();
    HyperboloidFunction::new(eps, C64::new(0.0, lambda), terms).unwrap()
}

fn profile() -> impl Strategy<Value = RadialProfile> {
    (-0.3f64..0.3, 0.4f64..0.7, 0u32..3, 0.5f64..2.0).prop_map(|(c, w, n, a)| RadialProfile::hermite(c, w, n).scaled(a))
}

fn ktype(eps: u8) -> impl Strategy<Value = i32> {
    (-3i32..=3).prop_map(move |k| 2 * k + eps as i32)
}

fn case() -> impl Strategy<Value = (u8, i32, i32)> {
    (0u8..2).prop_flat_map(|e| (Just(e), ktype(e), ktype(e)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn discrete_weights_are_positive(eps in 0u8..2, k in 0usize..10) {
        let mu = (1 - eps as i32 - 2 * k as i32 - 2) as f64;
        let w = discrete_coefficient(eps, mu, DiscreteConvention::Derived).unwrap();
        prop_assert!(w > 0.0, "eps={} mu={}: {}", eps, mu, w);
    }

    #[test]
    fn discrete_norms_are_nonnegative(eps in 0u8..2, k in 1usize..6, coeffs in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..6)) {
        let mu = (1 - eps as i32 - 2 * k as i32) as f64;
        let mut f = KTypeCoefficients::new(eps, C64::new(mu, 0.0));
        for (i, (re, im)) in coeffs.iter().enumerate() {
            let m = 2 * i as i32 - 4 + eps as i32;
            f.insert(m, C64::new(*re, *im)).unwrap();
        }
        let n = discrete_norm_sq(DiscreteNormSpec { epsilon: eps, mu }, &f).unwrap();
        prop_assert!(n >= -1e-12 * f.l2_norm_sq(), "{}", n);
    }

    #[test]
    fn plancherel_weight_is_even_and_nonnegative(eps in 0u8..2, s in 0.0f64..40.0) {
        let (a, b) = (plancherel_weight(eps, s), plancherel_weight(eps, -s));
        prop_assert!(a >= 0.0 && a.is_finite());
        prop_assert!((a - b).abs() <= 1e-14 * a.max(1e-300));
        let want = 1.0 / a_density(eps, C64::new(0.0, s)).norm_sqr();
        if s > 1e-3 {
            prop_assert!((a - want).abs() <= 1e-12 * want, "{} {}", a, want);
        }
    }

    #[test]
    fn t0_intertwines_discrete_images(k in -4i32..=4, re in -0.9f64..1.4, im in -3.0f64..3.0) {
        let (m, mu) = (2 * k, C64::new(re, im));
        let b = knapp_stein_b(0, m, mu).unwrap();
        let scale = PI.sqrt() * C64::new(2.0, 0.0).powc(mu) * rgamma((1.0 - mu) / 2.0);
        for (l, r) in [
            (b * alpha_tilde(m, mu), scale * alpha_tilde(m, -mu)),
            (b * beta_tilde(m, mu), scale * beta_tilde(m, -mu)),
        ] {
            prop_assert!((l - r).norm() <= 1e-6 * l.norm().max(r.norm()).max(1e-300), "m={} mu={}: {} {}", m, mu, l, r);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn plancherel_ratio_is_one((eps, m1, m2) in case(), p in profile(), q in profile()) {
        let f = func(eps, 0.0, &[(m1, p), (m2, q)]);
        let r = verify_plancherel(&f, &SpectralGridSpec::new(10.0, 200), &PlancherelOptions::default()).unwrap();
        prop_assert!((r.ratio - 1.0).abs() < 1e-3, "{:?}", r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3))]

    #[test]
    fn continuous_spectrum_is_lambda_independent(eps in 0u8..2, k in -1i32..=1, lam in 0.3f64..2.0, s in 0.2f64..3.0, p in profile()) {
        let m = 2 * k + eps as i32;
        let g = func(eps, lam, &[(m, p)]);
        let spec = QuadratureSpec::with_tol(1e-11, 1e-9);
        for row in transported_spectrum(&g, &[s], 6.0, &spec).unwrap() {
            let scale = row.at_lambda.abs().max(row.transported.abs()).max(1e-12);
            prop_assert!((row.at_lambda - row.transported).abs() < 1e-3 * scale, "{:?}", row);
        }
    }
}

#[test]
fn ratio_spread_across_test_functions_is_small() {
    let grid = SpectralGridSpec::new(10.0, 200);
    let opts = PlancherelOptions::default();
    for (eps, sets) in [
        (0u8, vec![vec![0], vec![2], vec![6], vec![0, 2, 6], vec![-4, 2]]),
        (1u8, vec![vec![1, -1], vec![3, -3], vec![5], vec![-1, 3], vec![1, -5]]),
    ] {
        let ratios: Vec<f64> = sets
            .iter()
            .enumerate()
            .map(|(i, ms)| {
                let p = RadialProfile::hermite(0.1 * i as f64 - 0.2, 0.45 + 0.05 * i as f64, i as u32 % 3);
                let terms: Vec<_> = ms.iter().map(|&m| (m, p)).collect();
                verify_plancherel(&func(eps, 0.0, &terms), &grid, &opts).unwrap().ratio
            })
            .collect();
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let sd = (ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (ratios.len() - 1) as f64).sqrt();
        assert!(sd < 1e-3, "eps={eps}: {ratios:?}");
    }
}

// Refining (s_max, n_points) together at fixed node density drives the
// Plancherel deviation and the inversion error down together.
#[test]
fn plancherel_and_inversion_errors_shrink_together() {
    let p = RadialProfile::gaussian(0.15, 0.5);
    let f = func(0, 0.0, &[(0, p), (2, p), (6, p)]);
    let opts = PlancherelOptions::default();
    let pts: Vec<_> = [(0.3, 0.1), (1.2, -0.4), (2.5, 0.7)]
        .iter()
        .map(|&(t, u)| CoordinatePoint::new(t, u).unwrap())
        .collect();
    let mut prev: Option<(f64, f64)> = None;
    for (s_max, n) in [(6.0, 60), (10.0, 100), (16.0, 160)] {
        let grid = SpectralGridSpec::new(s_max, n);
        let dev = (verify_plancherel(&f, &grid, &opts).unwrap().ratio - 1.0).abs();
        let engine = InversionEngine::new(&f, &grid, &opts).unwrap();
        let inv = pts.iter().map(|&q| engine.invert(q).unwrap().error).fold(0.0, f64::max);
        if let Some((d0, i0)) = prev {
            // the Plancherel deviation floors near 1e-6 once s_max ≥ 10
            assert!(dev < d0 || dev < 1e-6, "plancherel {d0} -> {dev}");
            assert!(inv < 0.5 * i0, "inversion {i0} -> {inv}");
        }
        prev = Some((dev, inv));
    }
}

#[test]
fn identity_ledger_functional_equation_rows() {
    let rows = t0_functional_equation().unwrap();
    assert!(rows.len() >= 40);
    assert!(rows.iter().all(|r| r.passes(1e-6)));
}
