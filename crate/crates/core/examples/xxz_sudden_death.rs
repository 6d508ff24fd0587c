//! Thermal two-site XXZ chain: the negativity dies at a finite temperature
//! while ΔS_m stays positive.

use nument::entropy::number_entanglement;
use nument::hilbert::Bipartition;
use nument::models::{thermal_state, xxz_chain};
use nument::negativity::log_negativity;

fn main() -> nument::Result<()> {
    let a = Bipartition::prefix(2, 1)?;
    for eta in [0.0, 2.0, 4.0] {
        let h = xxz_chain(2, 1.0, eta)?;
        println!("η = {eta}");
        for t in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let rho = thermal_state(&h, 1.0 / t)?;
            println!(
                "  T = {t:>4}: ΔS_m = {:.5}  𝒩 = {:.5}",
                number_entanglement(&rho, &a)?.delta_s_m,
                log_negativity(&rho, &a)?
            );
        }
    }
    Ok(())
}
