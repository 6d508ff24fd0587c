//! The CFT prediction for ΔS₂ and its slow approach to the double-log law.

use nument::analytic::{cft_base, cft_delta_s2, cft_t0_asymptote};

fn main() -> nument::Result<()> {
    let la = 100.0;
    for beta in [2.0, 5.0, 20.0, 100.0, f64::INFINITY] {
        println!("β = {beta:>5}: base = {:>8.3}  ΔS₂ = {:.5}", cft_base(beta, la), cft_delta_s2(beta, la)?);
    }
    for exp in [2, 6, 20, 100] {
        let x = 10f64.powi(exp);
        println!(
            "L_A = 1e{exp}: ΔS₂(T=0) = {:.4}  ½ log((2/π) log L_A) = {:.4}",
            cft_delta_s2(f64::INFINITY, x)?,
            cft_t0_asymptote(x, 1.0)?
        );
    }
    Ok(())
}
