//! Secrecy rate in nats/dimension against SNR for the optimal low-SNR
//! covariance, main-link beamforming and uniform power, as CSV.

use secrecy_lowsnr::channel::secrecy_rate;
use secrecy_lowsnr::lowsnr::{secrecy_derivatives, CovarianceStrategy};
use secrecy_lowsnr::presets::reference_channel_3x3;
use secrecy_lowsnr::sweep::{grid, GridScale};

fn main() -> secrecy_lowsnr::Result<()> {
    let ch = reference_channel_3x3();
    let p = secrecy_derivatives(&ch)?;
    let covs = [
        CovarianceStrategy::Optimal.covariance(&ch, &p)?,
        CovarianceStrategy::MainBeamforming.covariance(&ch, &p)?,
        CovarianceStrategy::Uniform.covariance(&ch, &p)?,
    ];
    println!("snr,optimal,main_beamforming,uniform");
    for snr in grid(0.01, 2.0, 200, GridScale::Linear)? {
        let r: Vec<String> = covs
            .iter()
            .map(|k| secrecy_rate(&ch, k, snr).map(|v| v.nats().to_string()))
            .collect::<Result<_, _>>()?;
        println!("{snr},{}", r.join(","));
    }
    eprintln!(
        "second-order approximation at snr 0.1: {:.5}",
        p.second_order_rate(0.1)
    );
    Ok(())
}
