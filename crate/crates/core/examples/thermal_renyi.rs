//! ΔS₂ of a thermal tight-binding chain from the single-particle kernel,
//! next to the high-temperature law and the CFT curve.

use nument::analytic::{cft_delta_s2, high_t_delta_s2};
use nument::freefermion::{delta_s2_sweep, Placement, SingleParticleKernel};

fn main() -> nument::Result<()> {
    let (l, la) = (400, 40);
    let kernel = SingleParticleKernel::tight_binding(l, 1.0, &Placement::Centered.sites(l, la)?)?;
    let temps = [0.05, 0.1, 0.3, 1.0, 3.0, 10.0];
    let betas: Vec<f64> = temps.iter().map(|t| 1.0 / t).collect();
    let values = delta_s2_sweep(&kernel, &betas)?;
    println!("{:>6} {:>10} {:>10} {:>10}", "T", "lattice", "CFT", "β²t²");
    for ((t, b), v) in temps.iter().zip(&betas).zip(values) {
        let cft = cft_delta_s2(*b, la as f64).map_or("-".to_string(), |x| format!("{x:.5}"));
        let high = if *b < 1.0 { format!("{:.5}", high_t_delta_s2(1.0, *b, 2.0)) } else { "-".into() };
        println!("{t:>6} {v:>10.5} {cft:>10} {high:>10}");
    }
    Ok(())
}
