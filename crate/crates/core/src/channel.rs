//! The Gaussian MIMO wiretap channel and the secrecy rate of a fixed
//! transmit covariance.
//!
//! Rates are in nats per second per Hz per receive dimension. The SNR is
//! `P / (n_R N_m)`, total transmit power over total noise power at the
//! legitimate receiver.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{log_det_i_plus, ComplexMatrix, HermitianMatrix, PSD_TOL};

/// `tr(Φ K)` must exceed this to count as positive.
pub const POSITIVE_TOL: f64 = 1e-12;

/// Trace tolerance for a normalized covariance.
pub const TRACE_TOL: f64 = 1e-10;

/// Channel matrices to the legitimate receiver (`hm`, `n_R x n_T`) and the
/// eavesdropper (`he`, `n_E x n_T`) with their per-dimension noise variances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelFile", into = "ChannelFile")]
pub struct WiretapChannel {
    hm: ComplexMatrix,
    he: ComplexMatrix,
    nm: f64,
    ne: f64,
}

/// On-disk layout: complex entries as `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    #[serde(rename = "Hm")]
    pub hm: Vec<Vec<Complex64>>,
    #[serde(rename = "He")]
    pub he: Vec<Vec<Complex64>>,
    #[serde(rename = "Nm")]
    pub nm: f64,
    #[serde(rename = "Ne")]
    pub ne: f64,
}

impl TryFrom<ChannelFile> for WiretapChannel {
    type Error = Error;

    fn try_from(f: ChannelFile) -> Result<Self> {
        Self::new(
            ComplexMatrix::from_rows(&f.hm)?,
            ComplexMatrix::from_rows(&f.he)?,
            f.nm,
            f.ne,
        )
    }
}

impl From<WiretapChannel> for ChannelFile {
    fn from(ch: WiretapChannel) -> Self {
        Self {
            hm: ch.hm.to_rows(),
            he: ch.he.to_rows(),
            nm: ch.nm,
            ne: ch.ne,
        }
    }
}

impl WiretapChannel {
    pub fn new(hm: ComplexMatrix, he: ComplexMatrix, nm: f64, ne: f64) -> Result<Self> {
        if hm.rows() == 0 || he.rows() == 0 || hm.cols() == 0 {
            return Err(Error::Shape(
                "channel matrices need at least one row and column".into(),
            ));
        }
        if hm.cols() != he.cols() {
            return Err(Error::Shape(format!(
                "Hm has {} transmit antennas but He has {}",
                hm.cols(),
                he.cols()
            )));
        }
        if !(nm > 0.0 && nm.is_finite() && ne > 0.0 && ne.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "noise variances must be positive and finite (Nm={nm}, Ne={ne})"
            )));
        }
        Ok(Self { hm, he, nm, ne })
    }

    /// Real-valued channel, matrices given row-major.
    pub fn from_real(
        dims: (usize, usize, usize),
        hm: &[f64],
        he: &[f64],
        nm: f64,
        ne: f64,
    ) -> Result<Self> {
        let (nt, nr, ne_ant) = dims;
        Self::new(
            ComplexMatrix::from_real(nr, nt, hm)?,
            ComplexMatrix::from_real(ne_ant, nt, he)?,
            nm,
            ne,
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("channel serializes")
    }

    pub fn hm(&self) -> &ComplexMatrix {
        &self.hm
    }

    pub fn he(&self) -> &ComplexMatrix {
        &self.he
    }

    pub fn nm(&self) -> f64 {
        self.nm
    }

    pub fn ne(&self) -> f64 {
        self.ne
    }

    pub fn n_t(&self) -> usize {
        self.hm.cols()
    }

    pub fn n_r(&self) -> usize {
        self.hm.rows()
    }

    pub fn n_e(&self) -> usize {
        self.he.rows()
    }

    /// `N_m / N_e`.
    pub fn noise_ratio(&self) -> f64 {
        self.nm / self.ne
    }

    /// Transmit power `P` corresponding to an SNR value.
    pub fn power_for_snr(&self, snr: f64) -> f64 {
        snr * self.n_r() as f64 * self.nm
    }

    /// `Φ = Hm† Hm - (Nm/Ne) He† He`.
    pub fn phi(&self) -> HermitianMatrix {
        phi_matrix(self)
    }
}

pub fn phi_matrix(ch: &WiretapChannel) -> HermitianMatrix {
    let main = HermitianMatrix::gram(&ch.hm);
    let eve = HermitianMatrix::gram(&ch.he).scale(ch.noise_ratio());
    main.sub(&eve).expect("both Gram matrices are n_T x n_T")
}

/// Trace-one positive-semidefinite transmit covariance `K / P`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedCovariance(HermitianMatrix);

impl NormalizedCovariance {
    pub fn new(k: HermitianMatrix) -> Result<Self> {
        let tr = k.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidInput(format!(
                "covariance trace is {tr}, expected 1"
            )));
        }
        check_psd(&k)?;
        Ok(Self(k))
    }

    /// Scales a nonzero PSD matrix to unit trace.
    pub fn from_unnormalized(k: HermitianMatrix) -> Result<Self> {
        check_psd(&k)?;
        let tr = k.trace();
        if !(tr > 0.0) {
            return Err(Error::InvalidInput("covariance has zero trace".into()));
        }
        Ok(Self(k.scale(1.0 / tr)))
    }

    /// Beamforming along `u` (normalized internally).
    pub fn beamforming(u: &[Complex64]) -> Result<Self> {
        Self::from_unnormalized(HermitianMatrix::outer(u))
    }

    /// `I / n_T`.
    pub fn uniform(n_t: usize) -> Self {
        Self(HermitianMatrix::identity(n_t).scale(1.0 / n_t as f64))
    }

    /// `Σ w_i u_i u_i†` over orthonormal `u_i` with simplex weights.
    pub fn from_weighted_basis(weights: &[f64], basis: &[Vec<Complex64>]) -> Result<Self> {
        let n = basis
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidInput("empty basis".into()))?;
        let mut k = HermitianMatrix::diag(&vec![0.0; n]);
        for (w, u) in weights.iter().zip(basis) {
            k = k.add(&HermitianMatrix::outer(u).scale(*w))?;
        }
        Self::new(k)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CovarianceFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let k = HermitianMatrix::new(ComplexMatrix::from_rows(&file.k)?)?;
        Self::from_unnormalized(k)
    }
}

/// Covariance file layout: `{"K": [[[re, im], ...], ...]}`; rescaled to unit
/// trace on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovarianceFile {
    #[serde(rename = "K")]
    pub k: Vec<Vec<Complex64>>,
}

fn check_psd(k: &HermitianMatrix) -> Result<()> {
    let eig = k.eig()?;
    let floor = -PSD_TOL * (1.0 + eig.lambda_max().abs());
    if eig.lambda_min() < floor {
        return Err(Error::NotPsd(eig.lambda_min()));
    }
    Ok(())
}

/// Nonnegative rate in nats/s/Hz/dimension.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct RateValue(f64);

impl RateValue {
    pub fn nats(self) -> f64 {
        self.0
    }

    pub fn bits(self) -> f64 {
        self.0 / std::f64::consts::LN_2
    }
}

fn check_dims(ch: &WiretapChannel, cov: &NormalizedCovariance) -> Result<()> {
    if cov.dim() != ch.n_t() {
        return Err(Error::Shape(format!(
            "covariance is {0}x{0} but the channel has {1} transmit antennas",
            cov.dim(),
            ch.n_t()
        )));
    }
    Ok(())
}

/// The two log-det terms of the secrecy rate, before the positive part.
fn log_det_terms(ch: &WiretapChannel, cov: &NormalizedCovariance, snr: f64) -> Result<(f64, f64)> {
    check_dims(ch, cov)?;
    if !(snr >= 0.0) || !snr.is_finite() {
        return Err(Error::Domain(format!(
            "SNR must be finite and >= 0, got {snr}"
        )));
    }
    let nr = ch.n_r() as f64;
    let main = HermitianMatrix::congruence(&ch.hm, cov.matrix())?;
    let eve = HermitianMatrix::congruence(&ch.he, cov.matrix())?;
    let a = log_det_i_plus(&main, nr * snr)?;
    let b = log_det_i_plus(&eve, nr * ch.noise_ratio() * snr)?;
    Ok((a, b))
}

/// Secrecy rate of a given covariance:
/// `(1/n_R) [log det(I + n_R snr Hm K Hm†) - log det(I + n_R (Nm/Ne) snr He K He†)]^+`.
pub fn secrecy_rate(
    ch: &WiretapChannel,
    cov: &NormalizedCovariance,
    snr: f64,
) -> Result<RateValue> {
    let (a, b) = log_det_terms(ch, cov, snr)?;
    Ok(RateValue(((a - b) / ch.n_r() as f64).max(0.0)))
}

/// Rate to the legitimate receiver with no secrecy constraint.
pub fn main_link_rate(
    ch: &WiretapChannel,
    cov: &NormalizedCovariance,
    snr: f64,
) -> Result<RateValue> {
    let (a, _) = log_det_terms(ch, cov, snr)?;
    Ok(RateValue(a / ch.n_r() as f64))
}

/// `tr(Φ K)`, signed.
pub fn trace_phi_cov(ch: &WiretapChannel, cov: &NormalizedCovariance) -> Result<f64> {
    check_dims(ch, cov)?;
    ch.phi().trace_product(cov.matrix())
}

/// `tr(Hm K Hm†) - (Nm/Ne) tr(He K He†)`, the same quantity as
/// [`trace_phi_cov`] computed in receiver coordinates.
pub fn trace_split(ch: &WiretapChannel, cov: &NormalizedCovariance) -> Result<f64> {
    check_dims(ch, cov)?;
    let main = HermitianMatrix::congruence(&ch.hm, cov.matrix())?.trace();
    let eve = HermitianMatrix::congruence(&ch.he, cov.matrix())?.trace();
    Ok(main - ch.noise_ratio() * eve)
}

/// First derivative of the secrecy rate at zero SNR, `[tr(Φ K)]^+`.
pub fn rate_first_derivative(ch: &WiretapChannel, cov: &NormalizedCovariance) -> Result<f64> {
    Ok(trace_phi_cov(ch, cov)?.max(0.0))
}

/// Second derivative of the secrecy rate at zero SNR,
/// `-n_R tr((Hm K Hm†)^2 - (Nm/Ne)^2 (He K He†)^2)` gated on `tr(Φ K) > 0`.
pub fn rate_second_derivative(ch: &WiretapChannel, cov: &NormalizedCovariance) -> Result<f64> {
    if trace_phi_cov(ch, cov)? <= POSITIVE_TOL {
        return Ok(0.0);
    }
    let main = HermitianMatrix::congruence(&ch.hm, cov.matrix())?;
    let eve = HermitianMatrix::congruence(&ch.he, cov.matrix())?;
    let r = ch.noise_ratio();
    Ok(-(ch.n_r() as f64) * (main.trace_square() - r * r * eve.trace_square()))
}
