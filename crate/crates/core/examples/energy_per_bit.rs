//! Rate in bits/dimension against energy per secret bit, with and
//! without an eavesdropper.

use secrecy_lowsnr::lowsnr::{
    energy_rate_curve, main_beamforming, no_secrecy_derivatives, no_secrecy_energy_curve,
    secrecy_derivatives, CovarianceStrategy, LowSnrOptions,
};
use secrecy_lowsnr::presets::reference_channel_3x3;
use secrecy_lowsnr::sweep::{grid, GridScale};

fn main() -> secrecy_lowsnr::Result<()> {
    let ch = reference_channel_3x3();
    let p = secrecy_derivatives(&ch)?;
    let plain = no_secrecy_derivatives(&ch, &LowSnrOptions::default())?;
    println!(
        "# Eb/N0 min with secrecy {:.2} dB, without {:.2} dB, penalty {:.2} dB",
        p.eb_n0_min_db,
        plain.eb_n0_min_db,
        p.eb_n0_min_db - plain.eb_n0_min_db
    );

    let g = grid(1e-4, 10.0, 80, GridScale::Log)?;
    let optimal = CovarianceStrategy::Optimal.covariance(&ch, &p)?;
    let secure = energy_rate_curve(&ch, &optimal, &g)?;
    let open = no_secrecy_energy_curve(&ch, &main_beamforming(&ch)?, &g)?;
    println!("curve,snr,eb_n0_db,rate_bits_per_dim");
    for (name, t) in [("secrecy", &secure), ("no_secrecy", &open)] {
        for row in &t.rows {
            println!("{name},{},{},{}", row[0], row[1], row[2]);
        }
    }
    Ok(())
}
