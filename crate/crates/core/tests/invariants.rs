use dpnl_core::baselines::{
    analytic_gaussian_sigma, classic_gaussian_sigma, laplace_mechanism, uniform_limit_mechanism,
};
use dpnl_core::bounds::{q1_lower, q2_lower, LowerBoundParams};
use dpnl_core::*;
use proptest::prelude::*;

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.log10()..hi.log10()).prop_map(|t| 10f64.powf(t))
}

fn params() -> impl Strategy<Value = PrivacyParams> {
    (log_uniform(1e-4, 10.0), log_uniform(1e-6, 0.4))
        .prop_map(|(e, d)| PrivacyParams::new(e, d).unwrap())
}

fn mechanisms(p: PrivacyParams) -> Vec<Box<dyn NoiseMechanism>> {
    let s = Sensitivity::new(1.0).unwrap();
    vec![
        Box::new(TruncatedLaplace::calibrate(p, s)),
        Box::new(laplace_mechanism(p.epsilon(), s).unwrap()),
        Box::new(analytic_gaussian_sigma(p, s).unwrap()),
        Box::new(uniform_limit_mechanism(p.delta(), s).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn quantile_inverts_cdf(p in params(), u in 1e-9f64..(1.0 - 1e-9)) {
        for m in mechanisms(p) {
            let x = m.quantile(u).unwrap();
            prop_assert!((m.cdf(x).unwrap() - u).abs() < 1e-12, "{} at {p}: u={u}", m.name());
        }
    }

    #[test]
    fn symmetric_densities(p in params(), t in 0.0f64..1.0) {
        for m in mechanisms(p) {
            let x = t * m.coverage_radius(1e-9);
            prop_assert_eq!(m.pdf(x).unwrap(), m.pdf(-x).unwrap());
            let s = m.cdf(x).unwrap() + m.cdf(-x).unwrap();
            prop_assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn cdf_nondecreasing(p in params(), a in -1.0f64..1.0, b in -1.0f64..1.0) {
        for m in mechanisms(p) {
            let r = m.coverage_radius(1e-9);
            let (lo, hi) = if a < b { (a * r, b * r) } else { (b * r, a * r) };
            prop_assert!(m.cdf(lo).unwrap() <= m.cdf(hi).unwrap());
        }
    }

    #[test]
    fn trunclap_samples_stay_in_support(p in params(), seed in any::<u64>()) {
        let m = TruncatedLaplace::calibrate(p, Sensitivity::new(1.0).unwrap());
        let mut rng = noise_stream(seed, 0);
        for _ in 0..64 {
            let x = m.sample(&mut rng);
            prop_assert!(x.abs() <= m.radius());
        }
    }

    #[test]
    fn lower_never_exceeds_upper(p in params(), s in 0.1f64..10.0) {
        let sens = Sensitivity::new(s).unwrap();
        for cost in [CostKind::Amplitude, CostKind::Power] {
            let pair = bound_pair(p, sens, cost).unwrap();
            prop_assert!(pair.lower_floor <= pair.upper);
            prop_assert!(pair.lower <= pair.upper, "{cost} at {p}: {pair:?}");
        }
    }

    #[test]
    fn closed_forms_match_series(p in params(), k in 2u32..400) {
        let lbp = LowerBoundParams::new(p, Sensitivity::new(1.0).unwrap());
        let n = f64::from(k);
        for cost in [CostKind::Amplitude, CostKind::Power] {
            let closed = lbp.bound_at(cost, n);
            let series = lbp.series(cost, n);
            prop_assert!((closed / series - 1.0).abs() < 1e-12, "{cost} at {p}, n={n}");
        }
        prop_assert_eq!(q1_lower(&lbp).floor, lbp.bound_at(CostKind::Amplitude, lbp.n_floor as f64));
        prop_assert_eq!(q2_lower(&lbp).frac, lbp.bound_at(CostKind::Power, lbp.n_frac));
    }

    #[test]
    fn analytic_sigma_below_classic(e in 1e-3f64..1.0, d in log_uniform(1e-8, 0.4)) {
        let p = PrivacyParams::new(e, d).unwrap();
        let s = Sensitivity::new(1.0).unwrap();
        let a = analytic_gaussian_sigma(p, s).unwrap();
        let (c, warning) = classic_gaussian_sigma(p, s);
        prop_assert!(warning.is_none());
        prop_assert!(a.sigma <= c.sigma);
    }

    #[test]
    fn validation_is_total(e in any::<f64>(), d in any::<f64>(), s in any::<f64>()) {
        let ok = e > 0.0 && e.is_finite() && d > 0.0 && d < 0.5 && s > 0.0 && s.is_finite();
        prop_assert_eq!(validate(e, d, s).is_ok(), ok);
    }
}

#[test]
fn analytic_sigma_monotone_on_grid() {
    let s = Sensitivity::new(1.0).unwrap();
    let eps: Vec<f64> = (0..10)
        .map(|i| 10f64.powf(-3.0 + 4.0 * i as f64 / 9.0))
        .collect();
    let dels: Vec<f64> = (0..10)
        .map(|i| 10f64.powf(-8.0 + 7.0 * i as f64 / 9.0))
        .collect();
    let sigma = |e: f64, d: f64| {
        analytic_gaussian_sigma(PrivacyParams::new(e, d).unwrap(), s)
            .unwrap()
            .sigma
    };
    for i in 0..10 {
        for j in 0..10 {
            let here = sigma(eps[i], dels[j]);
            if i + 1 < 10 {
                assert!(sigma(eps[i + 1], dels[j]) <= here);
            }
            if j + 1 < 10 {
                assert!(sigma(eps[i], dels[j + 1]) <= here);
            }
        }
    }
}
