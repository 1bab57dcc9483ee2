//! Low-SNR profile of the 3x3x3 reference channel and the first-order
//! slope of three transmit strategies.

use secrecy_lowsnr::channel::rate_first_derivative;
use secrecy_lowsnr::lowsnr::{min_energy_per_secret_bit, secrecy_derivatives, CovarianceStrategy};
use secrecy_lowsnr::presets::reference_channel_3x3;

fn main() -> secrecy_lowsnr::Result<()> {
    let ch = reference_channel_3x3();
    let p = secrecy_derivatives(&ch)?;
    println!("lambda_max(Phi) = {:.4}", p.lambda_max);
    println!("top eigenvector = {:.4?}", p.eigenspace[0]);
    println!("c2 = {:.4}, wideband slope = {:.4}", p.c2, p.wideband_slope);

    for s in [
        CovarianceStrategy::Optimal,
        CovarianceStrategy::MainBeamforming,
        CovarianceStrategy::Uniform,
    ] {
        let slope = rate_first_derivative(&ch, &s.covariance(&ch, &p)?)?;
        println!(
            "{s:?}: slope {slope:.4}, Eb/N0 min {:.2} dB",
            min_energy_per_secret_bit(slope)
        );
    }
    Ok(())
}
