//! ΔS_m under symmetric local operations: the swap-mixing channel removes it
//! completely, and seeded random graded channels never increase it.

use std::sync::Arc;

use nument::hilbert::{Bipartition, OccupationBasis, Statistics};
use nument::linalg::c;
use nument::locc::{monotonicity_check, random_graded_channel, swap_mixing_channel, swap_mixing_input, validate_channel};
use nument::sampling::random_symmetric_state;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> nument::Result<()> {
    let (basis, a, channel) = swap_mixing_channel(0)?;
    let report = validate_channel(&channel, &basis, &a)?;
    println!("swap mixing: valid {}  grades {:?}", report.is_valid(), channel.grades());
    let m = monotonicity_check(&swap_mixing_input(0.5, c(0.4))?, &channel, &a)?;
    println!("  ΔS_m {:.4} → {:.1e}", m.before, m.after);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let basis = Arc::new(OccupationBasis::new(3, Statistics::HardcoreBoson, None)?);
    let a = Bipartition::prefix(3, 1)?;
    for trial in 0..5 {
        let channel = random_graded_channel(&basis, &a, 2, &mut rng)?;
        let rho = random_symmetric_state(&basis, &mut rng);
        let m = monotonicity_check(&rho, &channel, &a)?;
        println!("trial {trial}: {:.4} → {:.4}", m.before, m.after);
    }
    Ok(())
}
