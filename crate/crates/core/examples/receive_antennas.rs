//! Average low-SNR slope with three eavesdropper antennas as receive
//! antennas are added. The fixed unit-gain channel has no secrecy until
//! the receiver outnumbers the eavesdropper.

use secrecy_lowsnr::fading::{average_derivatives, FadingModel, MonteCarloConfig};

fn main() -> secrecy_lowsnr::Result<()> {
    let mc = MonteCarloConfig::new(200_000, 5);
    println!("n_r,c1_avg,std_error,eb_n0_min_db,fixed_eb_n0_min_db");
    for n_r in 1..=5 {
        let p = average_derivatives(&FadingModel::iid_rayleigh(1, n_r, 3, 1.0, 1.0)?, &mc)?;
        let fixed = average_derivatives(&FadingModel::zero_spread(1, n_r, 3, 1.0, 1.0)?, &mc)?;
        println!(
            "{n_r},{:.6},{:.6},{:.3},{:.3}",
            p.c1_avg, p.standard_error_c1, p.eb_n0_min_db, fixed.eb_n0_min_db
        );
    }
    Ok(())
}
