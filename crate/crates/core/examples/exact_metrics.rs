//! Exact SOP and IP per scheme, per WIRS size and in total.

use relay_secrecy::exact::{sop_direct, Model};
use relay_secrecy::network::{NetworkConfig, SchemeId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = NetworkConfig { snr_anchor_db: 20.0, ..Default::default() };
    let model = Model::new(&cfg)?;
    println!("Pr(|F| = k): {:.4?}", model.cardinality_distribution());
    println!("direct SOP {:.5}", sop_direct(&cfg)?);

    for s in SchemeId::ALL.into_iter().filter(|s| s.has_closed_form()) {
        let per_k: Vec<f64> = (1..=cfg.m).map(|k| model.sop_conditional(s, k)).collect::<Result<_, _>>()?;
        println!("{s:>3}  SOP {:.5}  IP {:.5}  SOP|k {per_k:.4?}", model.sop_total(s)?, model.ip_total(s)?);
    }
    Ok(())
}
