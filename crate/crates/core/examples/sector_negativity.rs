//! A separable state can still hide entanglement inside fixed-charge
//! sectors: the full negativity vanishes while a sector block is maximally
//! entangled.

use nument::hilbert::Bipartition;
use nument::models::named_state;
use nument::negativity::{log_negativity, sector_negativities};

fn main() -> nument::Result<()> {
    let rho = named_state("qd1")?;
    let a = Bipartition::prefix(2, 1)?;
    println!("full state: 𝒩 = {:.6}", log_negativity(&rho, &a)?);
    for row in sector_negativities(&rho, &a)?.rows {
        println!("N = {}: p = {:.2}, 𝒩 = {:.6}", row.total_charge, row.probability, row.log_negativity);
    }
    Ok(())
}
