//! ΔS_m for the named example states, with its per-sector breakdown and
//! the relative-entropy form S(ρ‖ρ_m).

use nument::entropy::{number_entanglement, relative_entropy};
use nument::hilbert::{project_subsystem_charge, Bipartition};
use nument::models::{build_named, NamedState};

fn main() -> nument::Result<()> {
    for state in NamedState::ALL {
        let rho = build_named(state)?;
        let l = rho.basis().num_sites();
        let a = Bipartition::prefix(l, l / 2)?;
        let report = number_entanglement(&rho, &a)?;
        let rel = relative_entropy(&rho, &project_subsystem_charge(&rho, &a))?;
        println!(
            "{:>8}: ΔS_m = {:.6}  S(ρ‖ρ_m) = {:.6}  symmetric: {}",
            state.tag(),
            report.delta_s_m,
            rel.value(),
            report.is_symmetric()
        );
        for s in &report.sectors {
            println!("          N_A = {}: p = {:.3}, S = {:.4}", s.subsystem_charge, s.probability, s.block_entropy);
        }
    }
    Ok(())
}
