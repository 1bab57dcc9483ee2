//! Reference channel instances used by the examples and regression tests.

use crate::channel::WiretapChannel;
use crate::matrix::ComplexMatrix;

/// Real 3x3x3 reference channel with unit noise variances.
///
/// `λ_max(Φ) ≈ 1.6298` and is simple.
pub fn reference_channel_3x3() -> WiretapChannel {
    WiretapChannel::from_real(
        (3, 3, 3),
        &[1.0, 0.8, 0.5, 0.3, 1.0, 0.1, 0.1, 0.2, 0.1],
        &[0.5, 0.4, 1.0, 0.7, 0.1, 0.5, 0.3, 0.5, 0.1],
        1.0,
        1.0,
    )
    .expect("valid preset")
}

/// Parallel channels with `Hm†Hm = diag(5, 4, 2)` and `He†He = diag(2, 1, 1)`,
/// equal noise. `Φ = diag(3, 3, 1)` has a doubly repeated top eigenvalue.
pub fn parallel_degenerate_channel() -> WiretapChannel {
    let s = f64::sqrt;
    WiretapChannel::new(
        ComplexMatrix::diag(&[s(5.0), 2.0, s(2.0)]),
        ComplexMatrix::diag(&[s(2.0), 1.0, 1.0]),
        1.0,
        1.0,
    )
    .expect("valid preset")
}

/// Single-antenna links with identical gains and noise: no secrecy.
pub fn identical_scalar_channel() -> WiretapChannel {
    WiretapChannel::from_real((1, 1, 1), &[1.0], &[1.0], 1.0, 1.0).expect("valid preset")
}
