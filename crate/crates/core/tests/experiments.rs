use relay_secrecy::asymptotic::diversity_order;
use relay_secrecy::experiments::{measure_diversity_slope, run_figure, Row};
use relay_secrecy::montecarlo::Mode;
use relay_secrecy::network::{NetworkConfig, SchemeId};

fn curve(rows: &[Row], scheme: &str) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = rows.iter().filter(|r| r.scheme == scheme).filter_map(|r| Some((r.x_value, r.analytic?))).collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    v
}

#[test]
fn figure_3_curves_fall_with_snr() {
    let rows = run_figure(3, 0, 1, Mode::PaperFaithful).unwrap();
    for scheme in ["DT", "DT_N0", "DMC", "DSC", "DMM", "DSM", "DMA", "DSA"] {
        let c = curve(&rows, scheme);
        assert_eq!(c.len(), 9, "{scheme}");
        assert!(c.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12), "{scheme}: {c:?}");
    }
}

#[test]
fn figure_5_shapes() {
    let rows = run_figure(5, 0, 1, Mode::PaperFaithful).unwrap();
    let dmc = curve(&rows, "DMC");
    assert!(dmc.windows(2).all(|w| w[1].1 < w[0].1), "{dmc:?}");
    for scheme in ["DMM", "DSM"] {
        let v: Vec<f64> = curve(&rows, scheme).into_iter().filter(|p| p.0 >= 2.0).map(|p| p.1).collect();
        let spread = v.iter().cloned().fold(0.0, f64::max) / v.iter().cloned().fold(1.0, f64::min) - 1.0;
        assert!(spread < 0.2, "{scheme}: {spread}");
    }
}

#[test]
fn figure_presets_agree_with_simulation() {
    let mut rows = Vec::new();
    for fig in 3..=6 {
        rows.extend(run_figure(fig, 100_000, 17, Mode::PaperFaithful).unwrap());
    }
    let paired: Vec<(f64, f64, u64)> = rows.iter().filter_map(|r| Some((r.analytic?, r.mc?.p_hat, r.mc?.trials))).collect();
    assert!(paired.len() > 200);
    let within = paired.iter().filter(|(a, p, n)| (p - a).abs() <= 4.0 * (a * (1.0 - a) / *n as f64).sqrt()).count();
    assert!(within as f64 >= 0.99 * paired.len() as f64, "{within} of {}", paired.len());
    assert!(rows.iter().all(|r| r.status.starts_with("ok")), "{:?}", rows.iter().find(|r| !r.status.starts_with("ok")));
}

#[test]
fn measured_diversity() {
    let cfg = NetworkConfig { m: 2, ..Default::default() };
    let d = measure_diversity_slope(SchemeId::DMC, &cfg, (45.0, 65.0)).unwrap();
    assert!((d.order - 3.0).abs() < 0.3, "{}", d.order);
    assert!(d.points.len() >= 5);

    let cfg = NetworkConfig::default();
    let d = measure_diversity_slope(SchemeId::DMM, &cfg, (45.0, 65.0)).unwrap();
    let table = diversity_order(SchemeId::DMM, d.dominant_k, cfg.m) as f64;
    assert!((d.order - table).abs() < 0.05, "{} vs {table} at |F|={}", d.order, d.dominant_k);
    assert!((2.0..=5.0).contains(&table));

    assert!(measure_diversity_slope(SchemeId::DMC, &cfg, (20.0, 50.0)).is_err());
    assert!(measure_diversity_slope(SchemeId::DSO, &cfg, (45.0, 65.0)).is_err());
}
