//! Resolve a scenario into link means and the shared constants.

use relay_secrecy::network::{derive_constants, resolve, NetworkConfig, SchemeId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = NetworkConfig { snr_anchor_db: 15.0, ..Default::default() };
    let means = resolve(&cfg)?;
    println!("sd {:.3}  sm {:.3}  md {:.3}", means.sigma_sd, means.sigma_sm, means.sigma_md);
    println!("se {:.3}  me {:.3}", means.sigma_se, means.sigma_me);
    println!("AN at D: {:?}", means.sigma_id);

    let c = derive_constants(&means, cfg.rate_r)?;
    println!("delta {:.4}  varrho {:.4}", c.delta, c.varrho);
    println!("AN weights at D: {:?}", c.pi_sd);

    for s in SchemeId::ALL {
        print!("{s} ");
    }
    println!();
    Ok(())
}
