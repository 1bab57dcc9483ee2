//! Minimum energy per secret bit of a scalar Rayleigh pair as the two
//! gains become correlated; quadrature next to a Monte Carlo estimate.

use secrecy_lowsnr::fading::{
    average_derivatives, correlated_pair_c1, FadingModel, MonteCarloConfig,
};
use secrecy_lowsnr::lowsnr::min_energy_per_secret_bit;

fn main() -> secrecy_lowsnr::Result<()> {
    let mc = MonteCarloConfig::new(200_000, 2024);
    println!("rho,c1_quadrature,c1_monte_carlo,std_error,eb_n0_min_db");
    for rho in [0.0, 0.2, 0.4, 0.6, 0.8, 0.95] {
        let c1 = correlated_pair_c1(rho, 1.0, 1.0)?;
        let sim = average_derivatives(&FadingModel::correlated_pair(rho, 1.0, 1.0)?, &mc)?;
        println!(
            "{rho},{c1:.6},{:.6},{:.6},{:.4}",
            sim.c1_avg,
            sim.standard_error_c1,
            min_energy_per_secret_bit(c1)
        );
    }
    Ok(())
}
