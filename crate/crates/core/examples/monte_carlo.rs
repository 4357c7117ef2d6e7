//! Simulated SOP/IP for all nine schemes next to the exact values.

use relay_secrecy::exact::Model;
use relay_secrecy::montecarlo::{simulate, Metric, Mode};
use relay_secrecy::network::{NetworkConfig, SchemeId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = NetworkConfig::default();
    let model = Model::new(&cfg)?;
    let tally = simulate(&cfg, 1_000_000, 42, Mode::PaperFaithful)?;
    for s in SchemeId::ALL {
        let sop = tally.estimate(Metric::Sop, s);
        let ip = tally.estimate(Metric::Ip, s);
        let exact = if s.has_closed_form() { format!("{:.5}", model.sop_total(s)?) } else { "-".into() };
        println!("{s:>3}  SOP {:.5} ± {:.5} (exact {exact})  IP {:.5}", sop.p_hat, sop.std_err, ip.p_hat);
    }

    // conditioned on every relay decoding
    let k = cfg.m;
    let e = tally.conditional_estimate(Metric::Sop, SchemeId::DMC, k)?;
    println!("DMC SOP given |F|={k}: {:.5} ± {:.5} (exact {:.5})", e.p_hat, e.std_err, model.sop_conditional(SchemeId::DMC, k)?);
    Ok(())
}
