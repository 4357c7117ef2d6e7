use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use relay_secrecy::asymptotic::sop_asymptotic;
use relay_secrecy::exact::{
    distribution_value, ip_direct, ip_exact, ip_total, sop_direct, sop_exact, sop_total, wirs_probability, DistributionKind,
    Model, WirsSubset,
};
use relay_secrecy::montecarlo::{sample_channel, simulate, Metric, Mode};
use relay_secrecy::network::{resolve, NetworkConfig, SchemeId};
use relay_secrecy::special::binomial;

const CLOSED: [SchemeId; 6] = [SchemeId::DMC, SchemeId::DSC, SchemeId::DMM, SchemeId::DSM, SchemeId::DMA, SchemeId::DSA];

fn within_3se(p_hat: f64, p: f64, n: u64) -> bool {
    (p_hat - p).abs() <= 3.0 * (p * (1.0 - p) / n as f64).sqrt()
}

#[test]
fn intercept_without_rate_is_certain() {
    let cfg = NetworkConfig { rate_r: 1e-12, ..Default::default() };
    assert!((ip_direct(&cfg).unwrap() - 1.0).abs() < 1e-9);
    assert!((ip_exact(SchemeId::DSC, &cfg, 2).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn ip_direct_against_sampled_eavesdropper() {
    // δ = 1 at R = 1; σ̄_se = 1 at 0 dB
    let cfg = NetworkConfig { rate_r: 1.0, eve_snr_db: Some(0.0), ..Default::default() };
    let p = ip_direct(&cfg).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let exp = Exp::new(1.0).unwrap();
    let n = 10_000_000u64;
    let hits = (0..n).filter(|_| exp.sample(&mut rng) > 1.0).count() as u64;
    assert!(within_3se(hits as f64 / n as f64, p, n));
    assert!((p - (-1.0f64).exp()).abs() < 1e-12);
}

#[test]
fn ip_direct_vanishes_with_weak_eavesdropper() {
    let cfg = NetworkConfig { eve_snr_db: Some(-40.0), ..Default::default() };
    assert!(ip_direct(&cfg).unwrap() < 1e-100);
}

#[test]
fn sop_direct_limits() {
    let strong = NetworkConfig { snr_anchor_db: 80.0, eve_snr_db: Some(-1.0), ..Default::default() };
    assert!(sop_direct(&strong).unwrap() < 1e-5);
    let tapped = NetworkConfig { eve_snr_db: Some(80.0), ..Default::default() };
    assert!(sop_direct(&tapped).unwrap() > 1.0 - 1e-5);
}

#[test]
fn sop_direct_without_an_matches_exponential_algebra() {
    let cfg = NetworkConfig { n: 0, ..Default::default() };
    let m = resolve(&cfg).unwrap();
    let two_r = 2f64.powf(cfg.rate_r);
    let want = 1.0 - m.sigma_sd / (m.sigma_sd + two_r * m.sigma_se) * (-(two_r - 1.0) / m.sigma_sd).exp();
    assert!((sop_direct(&cfg).unwrap() - want).abs() < 1e-12);
}

#[test]
fn sop_direct_against_simulation() {
    let cfg = NetworkConfig::default();
    let n = 1_000_000;
    let est = simulate(&cfg, n, 5, Mode::PaperFaithful).unwrap().estimate(Metric::Sop, SchemeId::DT);
    assert!(within_3se(est.p_hat, sop_direct(&cfg).unwrap(), n));
}

#[test]
fn wirs_edge_cases() {
    let cfg = NetworkConfig { rate_r: 1e-12, ..Default::default() };
    assert!(wirs_probability(&cfg, WirsSubset { mask: 0 }).unwrap() < 1e-9);
    assert!((wirs_probability(&cfg, WirsSubset { mask: 0b1111 }).unwrap() - 1.0).abs() < 1e-9);

    let cfg = NetworkConfig { m: 1, n: 0, ..Default::default() };
    let m = resolve(&cfg).unwrap();
    let want = 1.0 - (-(4f64.powf(cfg.rate_r) - 1.0) / m.sigma_sm).exp();
    assert!((wirs_probability(&cfg, WirsSubset { mask: 0 }).unwrap() - want).abs() < 1e-12);
    assert!(wirs_probability(&cfg, WirsSubset { mask: 0b10 }).is_err());
}

#[test]
fn wirs_subsets_against_sampled_decoding() {
    let cfg = NetworkConfig::default();
    let means = resolve(&cfg).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 1_000_000u64;
    let mut counts = [0u64; 16];
    for _ in 0..n {
        counts[sample_channel(&means, cfg.m, cfg.rate_r, &mut rng).wirs.mask as usize] += 1;
    }
    for (mask, &c) in counts.iter().enumerate() {
        let p = wirs_probability(&cfg, WirsSubset { mask: mask as u64 }).unwrap();
        assert!(within_3se(c as f64 / n as f64, p, n), "subset {mask:04b}: {} vs {p}", c as f64 / n as f64);
    }
}

#[test]
fn totals_match_subset_enumeration() {
    let cfg = NetworkConfig::default();
    let model = Model::new(&cfg).unwrap();
    for scheme in CLOSED {
        let mut sop = 0.0;
        let mut ip = 0.0;
        for mask in 0u64..(1 << cfg.m) {
            let w = wirs_probability(&cfg, WirsSubset { mask }).unwrap();
            let k = mask.count_ones();
            let (s, i) = if k == 0 {
                (sop_direct(&cfg).unwrap(), ip_direct(&cfg).unwrap())
            } else {
                (sop_exact(scheme, &cfg, k).unwrap(), ip_exact(scheme, &cfg, k).unwrap())
            };
            sop += w * s;
            ip += w * i;
        }
        assert!((sop_total(scheme, &cfg).unwrap() - sop).abs() < 1e-12, "{scheme}");
        assert!((ip_total(scheme, &cfg).unwrap() - ip).abs() < 1e-12, "{scheme}");
        assert!((model.sop_total(scheme).unwrap() - sop).abs() < 1e-12);
    }
}

#[test]
fn relays_that_never_decode_leave_direct_transmission() {
    let cfg = NetworkConfig { eps_hat: 1e-9, ..Default::default() };
    for scheme in CLOSED {
        assert!((sop_total(scheme, &cfg).unwrap() - sop_direct(&cfg).unwrap()).abs() < 1e-9, "{scheme}");
    }
    assert_eq!(sop_total(SchemeId::DT, &cfg).unwrap(), sop_direct(&cfg).unwrap());
}

#[test]
fn scheme_orderings() {
    for anchor in [0.0, 10.0, 20.0, 30.0] {
        let cfg = NetworkConfig { snr_anchor_db: anchor, ..Default::default() };
        for k in 1..=cfg.m {
            assert!(sop_exact(SchemeId::DSC, &cfg, k).unwrap() >= sop_exact(SchemeId::DMC, &cfg, k).unwrap() - 1e-12);
            assert!(ip_exact(SchemeId::DMA, &cfg, k).unwrap() >= ip_exact(SchemeId::DSA, &cfg, k).unwrap() - 1e-12);
        }
    }
}

#[test]
fn dmm_total_falls_with_snr() {
    let mut prev = 1.0;
    for i in 0..=30 {
        let p = sop_total(SchemeId::DMM, &NetworkConfig { snr_anchor_db: i as f64, ..Default::default() }).unwrap();
        assert!(p <= prev + 1e-12, "{i} dB");
        prev = p;
    }
}

#[test]
fn sop_vanishes_with_strong_legitimate_links() {
    let cfg = NetworkConfig { snr_anchor_db: 70.0, eve_snr_db: Some(-1.0), ..Default::default() };
    for scheme in CLOSED {
        assert!(sop_exact(scheme, &cfg, 2).unwrap() < 1e-6, "{scheme}");
    }
}

#[test]
fn conditional_sop_against_simulation() {
    let cfg = NetworkConfig::default();
    let tally = simulate(&cfg, 1_000_000, 9, Mode::PaperFaithful).unwrap();
    for (scheme, k, metric) in [(SchemeId::DMC, 2, Metric::Sop), (SchemeId::DMC, 1, Metric::Ip)] {
        let est = tally.conditional_estimate(metric, scheme, k).unwrap();
        let p = match metric {
            Metric::Sop => sop_exact(scheme, &cfg, k).unwrap(),
            Metric::Ip => ip_exact(scheme, &cfg, k).unwrap(),
        };
        assert!(within_3se(est.p_hat, p, est.trials), "{scheme} {k}");
    }
}

#[test]
fn distributions_are_cdfs() {
    let cfg = NetworkConfig::default();
    let kinds = [
        DistributionKind::MrcConventional,
        DistributionKind::MrcMinimum,
        DistributionKind::MrcAll,
        DistributionKind::Direct,
        DistributionKind::MaxRelay,
    ];
    for kind in kinds {
        for k in 1..=cfg.m {
            assert!(distribution_value(kind, &cfg, k, 0.0).unwrap().abs() < 1e-12, "{kind:?}");
            let mut prev = 0.0;
            for i in 1..=60 {
                let g = 0.05 * 1.25f64.powi(i);
                let f = distribution_value(kind, &cfg, k, g).unwrap();
                assert!(f >= prev - 1e-12 && f <= 1.0 + 1e-12, "{kind:?} k={k} at {g}");
                prev = f;
            }
            assert!(prev > 1.0 - 1e-9, "{kind:?} k={k} tail {prev}");
        }
    }
    assert!(distribution_value(DistributionKind::Direct, &cfg, 1, -1.0).is_err());
    let pdf = |g| distribution_value(DistributionKind::SelectionAllEavesdropperPdf, &cfg, 3, g).unwrap();
    assert!((0..200).all(|i| pdf(i as f64 * 0.5) >= 0.0));
}

#[test]
fn dmc_asymptote_at_40_db() {
    let cfg = NetworkConfig { snr_anchor_db: 40.0, eve_snr_db: Some(-1.0), ..Default::default() };
    let r = sop_asymptotic(SchemeId::DMC, &cfg, 4).unwrap() / sop_exact(SchemeId::DMC, &cfg, 4).unwrap();
    assert!((r - 1.0).abs() < 0.1, "{r}");
}

#[test]
fn no_closed_form_for_optimal_selection() {
    let cfg = NetworkConfig::default();
    assert!(sop_total(SchemeId::DSO, &cfg).is_err());
    assert!(ip_exact(SchemeId::DMO, &cfg, 2).is_err());
    assert!(sop_exact(SchemeId::DMC, &cfg, 5).is_err());
}

fn config() -> impl Strategy<Value = NetworkConfig> {
    (1u32..=6, 0u32..=6, 0.05f64..3.0, -5.0f64..40.0, -5.0f64..20.0, 0.5f64..2.0, 0.5f64..2.0, 0.5f64..2.0, -10.0f64..5.0)
        .prop_map(|(m, n, rate_r, anchor, mer, eps, eps_hat, eps_tilde, an_db)| NetworkConfig {
            m,
            n,
            rate_r,
            snr_anchor_db: anchor,
            mer_db: mer,
            eps,
            eps_hat,
            eps_tilde,
            an_base: 10f64.powf(an_db / 10.0),
            ..Default::default()
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn metrics_are_probabilities(cfg in config()) {
        let model = match Model::new(&cfg) {
            Ok(m) => m,
            // coincident means are reported, not evaluated
            Err(relay_secrecy::Error::Singularity(_)) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        for scheme in [SchemeId::DT].into_iter().chain(CLOSED) {
            for v in [model.sop_total(scheme), model.ip_total(scheme)] {
                match v {
                    Ok(p) => prop_assert!((0.0..=1.0).contains(&p), "{scheme}: {p}"),
                    Err(relay_secrecy::Error::Singularity(_)) => {}
                    Err(e) => panic!("{scheme}: {e}"),
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn wirs_probabilities_sum_to_one(m in 1u32..=8, anchor in -10.0f64..40.0, rate in 0.01f64..4.0) {
        let cfg = NetworkConfig { m, snr_anchor_db: anchor, rate_r: rate, ..Default::default() };
        let total: f64 = (0u64..(1 << m)).map(|mask| wirs_probability(&cfg, WirsSubset { mask }).unwrap()).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        let by_k: f64 = (0..=m)
            .map(|k| binomial(m, k) * wirs_probability(&cfg, WirsSubset { mask: (1u64 << k) - 1 }).unwrap())
            .sum();
        prop_assert!((by_k - 1.0).abs() < 1e-9);
    }

    #[test]
    fn total_is_weighted_conditionals(anchor in 0.0f64..30.0, m in 1u32..=5) {
        let cfg = NetworkConfig { m, snr_anchor_db: anchor, ..Default::default() };
        let model = Model::new(&cfg).unwrap();
        let w = model.cardinality_distribution();
        for scheme in CLOSED {
            let sum: f64 = (0..=m).map(|k| w[k as usize] * model.sop_conditional(scheme, k).unwrap()).sum();
            prop_assert!((model.sop_total(scheme).unwrap() - sum).abs() < 1e-12);
        }
    }
}
