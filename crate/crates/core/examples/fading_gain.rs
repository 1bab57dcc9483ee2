//! Energy per secret bit needed for a given average rate with one
//! transmit, five receive and three eavesdropper antennas: Rayleigh
//! fading against the same link with every gain fixed at one.

use secrecy_lowsnr::fading::{
    avg_secrecy_capacity_single_tx, FadingModel, MonteCarloConfig, SingleTxSamples,
};
use secrecy_lowsnr::sweep::{grid, GridScale};

fn main() -> secrecy_lowsnr::Result<()> {
    let mc = MonteCarloConfig::new(1_000_000, 7);
    let faded = SingleTxSamples::draw(&FadingModel::iid_rayleigh(1, 5, 3, 1.0, 1.0)?, &mc)?;
    let fixed = SingleTxSamples::draw(&FadingModel::zero_spread(1, 5, 3, 1.0, 1.0)?, &mc)?;
    for bits in [0.02, 0.06, 0.1, 0.14] {
        let a = faded.eb_n0_at_rate(bits)?;
        let b = fixed.eb_n0_at_rate(bits)?;
        println!(
            "rate {bits:.2} bits: fading {a:.2} dB, fixed {b:.2} dB, gain {:.2} dB",
            b - a
        );
    }

    let g = grid(1e-3, 100.0, 40, GridScale::Log)?;
    let model = FadingModel::iid_rayleigh(1, 5, 3, 1.0, 1.0)?;
    let table = avg_secrecy_capacity_single_tx(&model, &g, &MonteCarloConfig::new(100_000, 7))?;
    print!("{}", table.to_csv_string());
    Ok(())
}
