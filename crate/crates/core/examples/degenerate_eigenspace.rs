//! A channel whose Phi has a repeated top eigenvalue: the optimal power
//! split inside the eigenspace comes from a small quadratic program.

use secrecy_lowsnr::lowsnr::{relaxed_eigenspace_minimum, secrecy_derivatives};
use secrecy_lowsnr::presets::parallel_degenerate_channel;

fn main() -> secrecy_lowsnr::Result<()> {
    let ch = parallel_degenerate_channel();
    let p = secrecy_derivatives(&ch)?;
    println!(
        "lambda_max = {}, multiplicity = {}",
        p.lambda_max,
        p.multiplicity()
    );
    println!("alpha = {:.5?}", p.alpha);
    println!("c2 = {:.4}", p.c2);

    // full weight matrices instead of a diagonal split
    let r = relaxed_eigenspace_minimum(&ch, &p.eigenspace)?;
    println!(
        "diagonal objective {:.6}, relaxed {:.6}",
        r.diagonal_value, r.relaxed_value
    );
    println!("{}", p.to_json());
    Ok(())
}
