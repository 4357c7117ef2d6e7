//! Anchor sweep written as CSV, plus the SOP-vs-IP trade-off for two schemes.

use relay_secrecy::experiments::{run_sweep, sop_vs_ip_curve, to_csv, MetricSel, SweepSpec, SweepVariable};
use relay_secrecy::montecarlo::Mode;
use relay_secrecy::network::{NetworkConfig, SchemeId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SweepSpec {
        variable: SweepVariable::AnchorSnrDb,
        grid: vec![0.0, 10.0, 20.0, 30.0],
        schemes: vec![SchemeId::DT, SchemeId::DMC, SchemeId::DSO],
        metric: MetricSel::Sop,
        trials: 100_000,
        seed: 1,
        mode: Mode::PaperFaithful,
    };
    print!("{}", to_csv(&run_sweep(&spec, &NetworkConfig::default())?));

    let cfg = NetworkConfig::default();
    for s in [SchemeId::DT, SchemeId::DSM] {
        let rows = sop_vs_ip_curve(s, &cfg, &[0.2, 0.4, 0.6], 0, 1, Mode::PaperFaithful)?;
        for r in rows {
            println!("{s} IP {:.1} -> SOP {:.4}", r.x_value, r.analytic.unwrap_or(f64::NAN));
        }
    }
    Ok(())
}
