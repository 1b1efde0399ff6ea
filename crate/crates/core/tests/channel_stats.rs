use qc_layered_bp::channel::{init_llr, transmit, ChannelConfig};
use statrs::function::erf::erfc;

#[test]
fn noise_variance_matches_configuration() {
    let cfg = ChannelConfig::new(0.161, 2024).unwrap();
    assert!((cfg.sigma2 - 6.211).abs() < 1e-3);
    let rx = transmit(&vec![0u8; 1_000_000], &cfg, 0);
    let n = rx.samples.len() as f64;
    let noise: Vec<f64> = rx.samples.iter().map(|r| r - 1.0).collect();
    let mean = noise.iter().sum::<f64>() / n;
    let var = noise.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!((var / cfg.sigma2 - 1.0).abs() < 0.01, "variance {var}");
}

#[test]
fn llr_sign_and_scale_follow_samples() {
    let cfg = ChannelConfig::new(0.5, 1).unwrap();
    let rx = transmit(&[0, 1, 1, 0, 1, 0, 0, 1], &cfg, 3);
    let llr = init_llr(&rx, &cfg);
    for (l, r) in llr.iter().zip(&rx.samples) {
        assert_eq!(l.signum(), r.signum());
        assert!((l - r * 2.0 / cfg.sigma2).abs() < 1e-15);
    }
}

#[test]
fn uncoded_bit_errors_follow_q_function() {
    for (snr, seed) in [(0.5, 1u64), (1.0, 2), (2.0, 3)] {
        let cfg = ChannelConfig::new(snr, seed).unwrap();
        let trials = 200_000usize;
        let errors = transmit(&vec![0u8; trials], &cfg, 0)
            .samples
            .iter()
            .filter(|&&r| r < 0.0)
            .count();
        let p = 0.5 * erfc(snr.sqrt() / 2f64.sqrt());
        let expected = p * trials as f64;
        let sd = (trials as f64 * p * (1.0 - p)).sqrt();
        assert!(
            (errors as f64 - expected).abs() <= 3.0 * sd,
            "snr {snr}: {errors} errors vs {expected:.0} ± {sd:.0}"
        );
    }
}
