//! Low-SNR analysis of the Gaussian MIMO wiretap channel.
//!
//! Given channel matrices to a legitimate receiver and an eavesdropper,
//! this crate computes the first and second derivatives of the secrecy
//! capacity at zero SNR, the transmit covariance that attains them, the
//! minimum energy per secret bit and the wideband slope. The [`fading`]
//! module averages the same quantities over random channel realizations.
//!
//! ```
//! use secrecy_lowsnr::{lowsnr, presets};
//!
//! let ch = presets::reference_channel_3x3();
//! let profile = lowsnr::secrecy_derivatives(&ch).unwrap();
//! assert!((profile.c1 - 1.6298).abs() < 1e-3);
//! assert!((profile.eb_n0_min_db + 3.71).abs() < 0.01);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod cli;
pub mod error;
pub mod fading;
pub mod lowsnr;
pub mod matrix;
pub mod presets;
mod serde_ext;
pub mod special;
pub mod sweep;

#[cfg(test)]
mod test_support;

pub use channel::{NormalizedCovariance, RateValue, WiretapChannel};
pub use error::{Error, Result};
pub use lowsnr::{secrecy_derivatives, LowSnrProfile};
pub use matrix::{ComplexMatrix, EigenDecomposition, HermitianMatrix};
pub use sweep::SweepTable;
