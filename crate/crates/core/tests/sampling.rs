use dpnl_core::baselines::{analytic_gaussian_sigma, laplace_mechanism};
use dpnl_core::quad::integrate_pieces;
use dpnl_core::sampling::sample_n;
use dpnl_core::stats::{ks_critical, ks_statistic, mean_and_stderr};
use dpnl_core::*;

const N: usize = 100_000;

fn pp() -> PrivacyParams {
    PrivacyParams::new(1.0, 1e-5).unwrap()
}

#[test]
fn trunclap_passes_ks() {
    let m = TruncatedLaplace::calibrate(pp(), Sensitivity::new(1.0).unwrap());
    let mut xs = sample_n(&m, &mut noise_stream(11, 0), N);
    let d = ks_statistic(&mut xs, |x| m.cdf(x).unwrap());
    assert!(d < ks_critical(N, 1.63), "D = {d}");
}

#[test]
fn baselines_pass_ks() {
    let s = Sensitivity::new(2.0).unwrap();
    let mechs: Vec<Box<dyn NoiseMechanism>> = vec![
        Box::new(laplace_mechanism(0.5, s).unwrap()),
        Box::new(analytic_gaussian_sigma(pp(), s).unwrap()),
    ];
    for m in mechs {
        let mut xs = sample_n(m.as_ref(), &mut noise_stream(5, 1), N);
        let d = ks_statistic(&mut xs, |x| m.cdf(x).unwrap());
        assert!(d < ks_critical(N, 1.63), "{}: D = {d}", m.name());
    }
}

#[test]
fn mean_amplitude_within_three_standard_errors() {
    let m = TruncatedLaplace::calibrate(pp(), Sensitivity::new(1.0).unwrap());
    let xs: Vec<f64> = sample_n(&m, &mut noise_stream(2024, 0), N)
        .iter()
        .map(|x| x.abs())
        .collect();
    let (mean, se) = mean_and_stderr(&xs);
    // standard error from the exact variance of |X|
    let a = m.radius();
    let second = 2.0 * integrate_pieces(|x| x * x * m.pdf(x).unwrap(), &[0.0, a], 1e-13);
    let var = second - m.expected_amplitude().powi(2);
    let exact_se = (var / N as f64).sqrt();
    assert!((se / exact_se - 1.0).abs() < 0.05);
    assert!((mean - m.expected_amplitude()).abs() < 3.0 * exact_se);
}

#[test]
fn streams_are_reproducible() {
    let m = TruncatedLaplace::calibrate(pp(), Sensitivity::new(1.0).unwrap());
    let a = sample_n(&m, &mut noise_stream(9, 3), 100);
    let b = sample_n(&m, &mut noise_stream(9, 3), 100);
    let c = sample_n(&m, &mut noise_stream(9, 4), 100);
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn median_draw_gives_zero_noise() {
    let m = TruncatedLaplace::calibrate(pp(), Sensitivity::new(1.0).unwrap());
    let mut rng = noise_stream(3_453_682_501_520_545_093, 0);
    assert_eq!(m.sample(&mut rng), 0.0);
}
