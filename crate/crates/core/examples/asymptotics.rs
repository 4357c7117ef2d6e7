//! High-SNR leading terms, diversity orders and coding gains with the
//! eavesdropper held at -1 dB.

use relay_secrecy::asymptotic::{coding_gain, snr_gap_db, sop_asymptotic_total, sop_floor};
use relay_secrecy::exact::Model;
use relay_secrecy::network::{NetworkConfig, SchemeId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = NetworkConfig { snr_anchor_db: 45.0, eve_snr_db: Some(-1.0), ..Default::default() };
    let model = Model::new(&cfg)?;
    for s in SchemeId::ALL {
        let (p, d) = sop_asymptotic_total(s, &cfg)?;
        let exact = if s.has_closed_form() { format!("{:.4e}", model.sop_total(s)?) } else { "-".into() };
        println!("{s:>3}  D={d}  asymptotic {p:.4e}  exact {exact}  C={:.5}", coding_gain(s, &cfg)?);
    }
    println!("DMC over DSC: {:.2} dB", snr_gap_db(SchemeId::DMC, SchemeId::DSC, &cfg)?);

    let no_an = NetworkConfig { n: 0, ..Default::default() };
    println!("floor without AN at 11 dB MER: {:.4}", sop_floor(&no_an)?);
    Ok(())
}
