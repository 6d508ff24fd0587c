//! Subsystem-charge measurement of a random symmetric state, done by
//! projection and by phase averaging, plus its total-charge sectors.

use std::sync::Arc;

use nument::hilbert::{
    phase_average, project_subsystem_charge, total_charge_sectors, Bipartition, ChargeMap,
    OccupationBasis, Statistics,
};
use nument::linalg;
use nument::sampling::random_symmetric_state;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> nument::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let basis = Arc::new(OccupationBasis::new(3, Statistics::Boson { cap: 2 }, None)?);
    let a = Bipartition::new(3, &[0, 2])?;
    let rho = random_symmetric_state(&basis, &mut rng);

    let projected = project_subsystem_charge(&rho, &a);
    let spread = ChargeMap::new(&basis, &a).subsystem_spread();
    let averaged = phase_average(&rho, &a, spread)?;
    println!(
        "dim {}  N_A values {spread}  |projection − phase average| = {:.1e}",
        basis.dimension(),
        linalg::max_abs(&(projected.matrix() - averaged.matrix()))
    );

    for (n, p, block) in total_charge_sectors(&rho) {
        println!("N = {n}: p = {p:.4}, block dimension {}", block.dimension());
    }
    Ok(())
}
