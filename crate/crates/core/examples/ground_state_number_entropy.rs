//! Zero-temperature number entropy of a half-filled chain from the
//! counting statistics of the subsystem charge.

use nument::analytic::{entanglement_entropy_reference, number_entropy_reference};
use nument::freefermion::{ground_state_charge_distribution, number_entropy_ground_state};

fn main() -> nument::Result<()> {
    let p = ground_state_charge_distribution(200, 20)?;
    let mode = p.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(n, _)| n).unwrap_or(0);
    println!("L = 200, L_A = 20: most likely N_A = {mode} with p = {:.4}", p[mode]);
    for la in [10, 30, 100, 300] {
        let s = number_entropy_ground_state(10 * la, la)?;
        let x = la as f64;
        println!(
            "L_A = {la:>3}: S_N = {s:.4}  fit {:.4}  S_EE fit {:.4}",
            number_entropy_reference(x),
            entanglement_entropy_reference(x)
        );
    }
    Ok(())
}
