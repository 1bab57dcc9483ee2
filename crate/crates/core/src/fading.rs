//! Averages over random channel realizations.
//!
//! Every sample is drawn from its own ChaCha stream, selected by the sample
//! index, and sums are formed over fixed-size chunks with pairwise addition.
//! Results therefore depend only on `(seed, samples)` and never on the
//! number of worker threads.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::WiretapChannel;
use crate::error::{Error, Result};
use crate::lowsnr::{energy_per_bit_db, min_energy_per_secret_bit, secrecy_derivatives};
use crate::matrix::ComplexMatrix;
use crate::special::{bessel_i0e, integrate};
use crate::sweep::{check_snr_grid, SweepTable};

/// Environment variable that caps the number of Monte Carlo workers.
pub const THREADS_ENV: &str = "SECRECY_ANALYZER_THREADS";

/// Upper limit of both quadrature axes; unit exponential tail mass beyond
/// it is below 1e-17.
pub const QUADRATURE_LIMIT: f64 = 40.0;

// Samples per reduction chunk. Fixed so the summation tree depends only on
// the sample count.
const CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FadingKind {
    IidRayleigh,
    CorrelatedScalarPair,
    Fixed,
}

/// Statistical description of the pair `(Hm, He)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelFile", into = "ModelFile")]
pub struct FadingModel {
    kind: FadingKind,
    n_t: usize,
    n_r: usize,
    n_e: usize,
    rho: f64,
    nm: f64,
    ne: f64,
    var_m: f64,
    var_e: f64,
    fixed: Option<WiretapChannel>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    kind: FadingKind,
    #[serde(rename = "nT", default = "one")]
    n_t: usize,
    #[serde(rename = "nR", default = "one")]
    n_r: usize,
    #[serde(rename = "nE", default = "one")]
    n_e: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rho: Option<f64>,
    #[serde(rename = "Nm", default = "unit")]
    nm: f64,
    #[serde(rename = "Ne", default = "unit")]
    ne: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    variances: Option<VarianceFile>,
    #[serde(rename = "Hm", default, skip_serializing_if = "Option::is_none")]
    hm: Option<Vec<Vec<Complex64>>>,
    #[serde(rename = "He", default, skip_serializing_if = "Option::is_none")]
    he: Option<Vec<Vec<Complex64>>>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VarianceFile {
    #[serde(rename = "Hm")]
    hm: f64,
    #[serde(rename = "He")]
    he: f64,
}

fn one() -> usize {
    1
}

fn unit() -> f64 {
    1.0
}

impl TryFrom<ModelFile> for FadingModel {
    type Error = Error;

    fn try_from(f: ModelFile) -> Result<Self> {
        let (var_m, var_e) = f.variances.map_or((1.0, 1.0), |v| (v.hm, v.he));
        let mut model = match f.kind {
            FadingKind::IidRayleigh => Self::iid_rayleigh(f.n_t, f.n_r, f.n_e, f.nm, f.ne)?,
            FadingKind::CorrelatedScalarPair => {
                if (f.n_t, f.n_r, f.n_e) != (1, 1, 1) {
                    return Err(Error::InvalidInput(
                        "correlated_scalar_pair requires nT = nR = nE = 1".into(),
                    ));
                }
                let rho = f.rho.ok_or_else(|| {
                    Error::InvalidInput("correlated_scalar_pair requires rho".into())
                })?;
                Self::correlated_pair(rho, f.nm, f.ne)?
            }
            FadingKind::Fixed => {
                let hm = match &f.hm {
                    Some(rows) => ComplexMatrix::from_rows(rows)?,
                    None => ones(f.n_r, f.n_t),
                };
                let he = match &f.he {
                    Some(rows) => ComplexMatrix::from_rows(rows)?,
                    None => ones(f.n_e, f.n_t),
                };
                if (hm.rows(), hm.cols(), he.rows()) != (f.n_r, f.n_t, f.n_e) {
                    return Err(Error::Shape(format!(
                        "fixed channel matrices are {}x{} and {}x{}, expected nR x nT = {}x{} and nE x nT = {}x{}",
                        hm.rows(),
                        hm.cols(),
                        he.rows(),
                        he.cols(),
                        f.n_r,
                        f.n_t,
                        f.n_e,
                        f.n_t
                    )));
                }
                Self::fixed(WiretapChannel::new(hm, he, f.nm, f.ne)?)
            }
        };
        if f.kind != FadingKind::CorrelatedScalarPair && f.rho.is_some() {
            return Err(Error::InvalidInput(
                "rho only applies to correlated_scalar_pair".into(),
            ));
        }
        if f.kind != FadingKind::Fixed && (f.hm.is_some() || f.he.is_some()) {
            return Err(Error::InvalidInput(
                "Hm/He only apply to the fixed model".into(),
            ));
        }
        if f.variances.is_some() {
            if f.kind == FadingKind::Fixed {
                return Err(Error::InvalidInput(
                    "variances do not apply to the fixed model".into(),
                ));
            }
            model = model.with_variances(var_m, var_e)?;
        }
        Ok(model)
    }
}

impl From<FadingModel> for ModelFile {
    fn from(m: FadingModel) -> Self {
        let random = m.kind != FadingKind::Fixed;
        Self {
            kind: m.kind,
            n_t: m.n_t,
            n_r: m.n_r,
            n_e: m.n_e,
            rho: (m.kind == FadingKind::CorrelatedScalarPair).then_some(m.rho),
            nm: m.nm,
            ne: m.ne,
            variances: (random && (m.var_m != 1.0 || m.var_e != 1.0)).then_some(VarianceFile {
                hm: m.var_m,
                he: m.var_e,
            }),
            hm: m.fixed.as_ref().map(|c| c.hm().to_rows()),
            he: m.fixed.as_ref().map(|c| c.he().to_rows()),
        }
    }
}

fn ones(rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::new(rows, cols, vec![Complex64::new(1.0, 0.0); rows * cols])
        .expect("sizes match")
}

fn check_noise(nm: f64, ne: f64) -> Result<()> {
    if nm > 0.0 && nm.is_finite() && ne > 0.0 && ne.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "noise variances must be positive and finite (Nm={nm}, Ne={ne})"
        )))
    }
}

impl FadingModel {
    /// Independent `CN(0, 1)` entries in both matrices.
    pub fn iid_rayleigh(n_t: usize, n_r: usize, n_e: usize, nm: f64, ne: f64) -> Result<Self> {
        if n_t == 0 || n_r == 0 || n_e == 0 {
            return Err(Error::Shape("antenna counts must be at least 1".into()));
        }
        check_noise(nm, ne)?;
        Ok(Self {
            kind: FadingKind::IidRayleigh,
            n_t,
            n_r,
            n_e,
            rho: 0.0,
            nm,
            ne,
            var_m: 1.0,
            var_e: 1.0,
            fixed: None,
        })
    }

    /// Scalar gains with power correlation `rho`:
    /// `h_e = √ρ h_m + √(1−ρ) w`.
    pub fn correlated_pair(rho: f64, nm: f64, ne: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::InvalidInput(format!(
                "rho must lie in [0, 1], got {rho}"
            )));
        }
        let mut m = Self::iid_rayleigh(1, 1, 1, nm, ne)?;
        m.kind = FadingKind::CorrelatedScalarPair;
        m.rho = rho;
        Ok(m)
    }

    /// A degenerate distribution that always returns `ch`.
    pub fn fixed(ch: WiretapChannel) -> Self {
        Self {
            kind: FadingKind::Fixed,
            n_t: ch.n_t(),
            n_r: ch.n_r(),
            n_e: ch.n_e(),
            rho: 0.0,
            nm: ch.nm(),
            ne: ch.ne(),
            var_m: 1.0,
            var_e: 1.0,
            fixed: Some(ch),
        }
    }

    /// Fixed model whose channel coefficients are all one.
    pub fn zero_spread(n_t: usize, n_r: usize, n_e: usize, nm: f64, ne: f64) -> Result<Self> {
        Ok(Self::fixed(WiretapChannel::new(
            ones(n_r, n_t),
            ones(n_e, n_t),
            nm,
            ne,
        )?))
    }

    /// Per-entry variances of `Hm` and `He` (random models only).
    pub fn with_variances(mut self, var_m: f64, var_e: f64) -> Result<Self> {
        if !(var_m > 0.0 && var_m.is_finite() && var_e > 0.0 && var_e.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "variances must be positive and finite (Hm={var_m}, He={var_e})"
            )));
        }
        if self.kind == FadingKind::Fixed {
            return Err(Error::InvalidInput(
                "variances do not apply to the fixed model".into(),
            ));
        }
        self.var_m = var_m;
        self.var_e = var_e;
        Ok(self)
    }

    pub fn kind(&self) -> FadingKind {
        self.kind
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.n_t, self.n_r, self.n_e)
    }

    pub fn rho(&self) -> Option<f64> {
        (self.kind == FadingKind::CorrelatedScalarPair).then_some(self.rho)
    }

    pub fn nm(&self) -> f64 {
        self.nm
    }

    pub fn ne(&self) -> f64 {
        self.ne
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }
}

/// Sample count, seed and worker count for a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarloConfig {
    pub samples: u64,
    pub seed: u64,
    /// 0 selects the rayon default.
    pub workers: usize,
}

impl MonteCarloConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self {
            samples,
            seed,
            workers: 0,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidInput("samples must be at least 1".into()));
        }
        Ok(())
    }

    /// Worker count after applying the default and the environment cap.
    pub fn effective_workers(&self) -> usize {
        let wanted = if self.workers == 0 {
            rayon::current_num_threads()
        } else {
            self.workers
        };
        let cap = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0);
        cap.map_or(wanted, |c| wanted.min(c)).max(1)
    }

    fn install<T: Send>(&self, job: impl FnOnce() -> T + Send) -> Result<T> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.effective_workers())
            .build()
            .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
        Ok(pool.install(job))
    }
}

fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn complex_normal(rng: &mut ChaCha8Rng, variance: f64) -> Complex64 {
    let s = (0.5 * variance).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(s * re, s * im)
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, variance: f64) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| complex_normal(rng, variance))
        .collect();
    ComplexMatrix::new(rows, cols, data).expect("sizes match")
}

/// Channel realization number `index`; depends only on `(seed, index)`.
pub fn draw_channel(model: &FadingModel, seed: u64, index: u64) -> WiretapChannel {
    if let Some(ch) = &model.fixed {
        return ch.clone();
    }
    let mut rng = sample_rng(seed, index);
    let (hm, he) = match model.kind {
        FadingKind::CorrelatedScalarPair => {
            let h = complex_normal(&mut rng, 1.0);
            let w = complex_normal(&mut rng, 1.0);
            let e = h * model.rho.sqrt() + w * (1.0 - model.rho).sqrt();
            let scalar = |z: Complex64| ComplexMatrix::new(1, 1, vec![z]).expect("1x1");
            (
                scalar(h * model.var_m.sqrt()),
                scalar(e * model.var_e.sqrt()),
            )
        }
        _ => {
            let hm = gaussian_matrix(&mut rng, model.n_r, model.n_t, model.var_m);
            let he = gaussian_matrix(&mut rng, model.n_e, model.n_t, model.var_e);
            (hm, he)
        }
    };
    WiretapChannel::new(hm, he, model.nm, model.ne).expect("model noise was validated")
}

/// Sum by recursive halving; rounding error grows like `log n`.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 8;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let (a, b) = values.split_at(values.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Per-component sample mean and standard error of the mean.
#[derive(Debug, Clone, PartialEq)]
struct Moments {
    mean: Vec<f64>,
    std_error: Vec<f64>,
}

/// Evaluates `f(index, out)` for every sample, where `out` has `width`
/// slots, and reduces the results deterministically.
fn monte_carlo<F>(mc: &MonteCarloConfig, width: usize, f: F) -> Result<Moments>
where
    F: Fn(u64, &mut [f64]) -> Result<()> + Sync,
{
    mc.validate()?;
    let chunks = mc.samples.div_ceil(CHUNK);
    let partial: Vec<(Vec<f64>, Vec<f64>)> = mc.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let lo = c * CHUNK;
                let hi = (lo + CHUNK).min(mc.samples);
                let n = (hi - lo) as usize;
                // column-major so each component is contiguous
                let mut buf = vec![0.0; n * width];
                let mut row = vec![0.0; width];
                for (k, index) in (lo..hi).enumerate() {
                    f(index, &mut row)?;
                    for j in 0..width {
                        buf[j * n + k] = row[j];
                    }
                }
                let mut sums = Vec::with_capacity(width);
                let mut squares = Vec::with_capacity(width);
                for col in buf.chunks(n) {
                    sums.push(pairwise_sum(col));
                    let sq: Vec<f64> = col.iter().map(|v| v * v).collect();
                    squares.push(pairwise_sum(&sq));
                }
                Ok((sums, squares))
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let n = mc.samples as f64;
    let mut mean = Vec::with_capacity(width);
    let mut std_error = Vec::with_capacity(width);
    for j in 0..width {
        let s: Vec<f64> = partial.iter().map(|p| p.0[j]).collect();
        let q: Vec<f64> = partial.iter().map(|p| p.1[j]).collect();
        let m = pairwise_sum(&s) / n;
        let var = if mc.samples > 1 {
            ((pairwise_sum(&q) - n * m * m) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        mean.push(m);
        std_error.push((var / n).sqrt());
    }
    Ok(Moments { mean, std_error })
}

/// Averaged low-SNR quantities of a fading model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FadingProfile {
    pub kind: FadingKind,
    pub c1_avg: f64,
    pub c2_avg: f64,
    #[serde(with = "crate::serde_ext")]
    pub eb_n0_min_db: f64,
    pub standard_error_c1: f64,
    pub standard_error_c2: f64,
    pub samples: u64,
    pub seed: u64,
    #[serde(rename = "Nm")]
    pub nm: f64,
    #[serde(rename = "Ne")]
    pub ne: f64,
}

impl FadingProfile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
    }
}

/// Sample means of the per-realization first and second derivatives.
///
/// The fixed model is evaluated once and reports zero standard error.
pub fn average_derivatives(model: &FadingModel, mc: &MonteCarloConfig) -> Result<FadingProfile> {
    mc.validate()?;
    let (c1, c2, se1, se2) = match &model.fixed {
        Some(ch) => {
            let p = secrecy_derivatives(ch)?;
            (p.c1, p.c2, 0.0, 0.0)
        }
        None => {
            let m = monte_carlo(mc, 2, |i, out| {
                let p = secrecy_derivatives(&draw_channel(model, mc.seed, i))?;
                out[0] = p.c1;
                out[1] = p.c2;
                Ok(())
            })?;
            (m.mean[0], m.mean[1], m.std_error[0], m.std_error[1])
        }
    };
    Ok(FadingProfile {
        kind: model.kind,
        c1_avg: c1,
        c2_avg: c2,
        eb_n0_min_db: min_energy_per_secret_bit(c1),
        standard_error_c1: se1,
        standard_error_c2: se2,
        samples: mc.samples,
        seed: mc.seed,
        nm: model.nm,
        ne: model.ne,
    })
}

/// Minimum energy per secret bit of the averaged capacity, dB.
pub fn fading_min_energy(model: &FadingModel, mc: &MonteCarloConfig) -> Result<f64> {
    Ok(average_derivatives(model, mc)?.eb_n0_min_db)
}

/// Joint density of `z_m = |h_m|²` and `z_e = |h_e|²` for unit-power
/// Rayleigh gains with power correlation `rho`.
pub fn bivariate_exponential_pdf(zm: f64, ze: f64, rho: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::Domain(format!("rho must lie in [0, 1), got {rho}")));
    }
    if zm < 0.0 || ze < 0.0 {
        return Err(Error::Domain(
            "density arguments must be non-negative".into(),
        ));
    }
    Ok(pdf_unchecked(zm, ze, rho))
}

fn pdf_unchecked(zm: f64, ze: f64, rho: f64) -> f64 {
    let q = 1.0 - rho;
    let x = 2.0 * (rho * zm * ze).sqrt() / q;
    // I0(x) = i0e(x) e^x, folded into the exponent to avoid overflow
    bessel_i0e(x) * (x - (zm + ze) / q).exp() / q
}

/// `E[(z_m − (N_m/N_e) z_e)^+]` under the bivariate exponential density,
/// by iterated adaptive quadrature over `[0, 40]²`.
pub fn correlated_pair_c1(rho: f64, nm: f64, ne: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::Domain(format!("rho must lie in [0, 1), got {rho}")));
    }
    check_noise(nm, ne)?;
    let r = nm / ne;
    let z = QUADRATURE_LIMIT;
    let inner = |ze: f64| {
        let lo = r * ze;
        if lo >= z {
            return 0.0;
        }
        // the integrand has a kink at zm = r ze, placed on the boundary
        integrate(
            |zm| (zm - lo) * pdf_unchecked(zm, ze, rho),
            lo,
            z,
            1e-13,
            1e-11,
            400,
        )
        .0
    };
    let (v, _) = integrate(inner, 0.0, z.min(z / r), 1e-12, 1e-10, 400);
    Ok(v)
}

/// Squared norms `(‖h_m‖², ‖h_e‖²)` of single-transmit-antenna realizations,
/// which determine the secrecy capacity at every SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleTxSamples {
    gains: Vec<(f64, f64)>,
    n_r: usize,
    ratio: f64,
    mc: MonteCarloConfig,
}

impl SingleTxSamples {
    pub fn draw(model: &FadingModel, mc: &MonteCarloConfig) -> Result<Self> {
        mc.validate()?;
        if model.n_t != 1 {
            return Err(Error::Unsupported(format!(
                "finite-SNR secrecy capacity needs a single transmit antenna (nT = {})",
                model.n_t
            )));
        }
        let count = if model.fixed.is_some() { 1 } else { mc.samples };
        let gains = mc.install(|| {
            (0..count)
                .into_par_iter()
                .map(|i| {
                    let ch = draw_channel(model, mc.seed, i);
                    (
                        ch.hm().frobenius_norm().powi(2),
                        ch.he().frobenius_norm().powi(2),
                    )
                })
                .collect::<Vec<_>>()
        })?;
        Ok(Self {
            gains,
            n_r: model.n_r,
            ratio: model.nm / model.ne,
            mc: *mc,
        })
    }

    pub fn len(&self) -> usize {
        self.gains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gains.is_empty()
    }

    fn rate(&self, snr: f64, gm: f64, ge: f64) -> f64 {
        let n = self.n_r as f64;
        let main = (n * snr * gm).ln_1p();
        let eve = (n * self.ratio * snr * ge).ln_1p();
        ((main - eve) / n).max(0.0)
    }

    /// Mean secrecy capacity in nats per dimension and its standard error.
    pub fn average_rate(&self, snr: f64) -> Result<(f64, f64)> {
        let n = self.gains.len() as f64;
        let chunk = CHUNK as usize;
        let partial: Vec<(f64, f64)> = self.mc.install(|| {
            self.gains
                .par_chunks(chunk)
                .map(|c| {
                    let v: Vec<f64> = c.iter().map(|&(a, b)| self.rate(snr, a, b)).collect();
                    let sq: Vec<f64> = v.iter().map(|x| x * x).collect();
                    (pairwise_sum(&v), pairwise_sum(&sq))
                })
                .collect()
        })?;
        let s: Vec<f64> = partial.iter().map(|p| p.0).collect();
        let q: Vec<f64> = partial.iter().map(|p| p.1).collect();
        let mean = pairwise_sum(&s) / n;
        let se = if self.gains.len() > 1 {
            (((pairwise_sum(&q) - n * mean * mean) / (n - 1.0)).max(0.0) / n).sqrt()
        } else {
            0.0
        };
        Ok((mean, se))
    }

    /// SNR at which the mean rate reaches `target_nats`, by bisection;
    /// `None` if the rate never gets there.
    pub fn snr_for_rate(&self, target_nats: f64) -> Result<Option<f64>> {
        if !(target_nats > 0.0) {
            return Err(Error::Domain("target rate must be positive".into()));
        }
        let mut hi = 1.0;
        while self.average_rate(hi)?.0 < target_nats {
            hi *= 2.0;
            if hi > 1e12 {
                return Ok(None);
            }
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.average_rate(mid)?.0 < target_nats {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(Some(hi))
    }

    /// Energy per secret bit (dB) needed for a mean rate of `target_bits`;
    /// `+∞` if that rate is out of reach.
    pub fn eb_n0_at_rate(&self, target_bits: f64) -> Result<f64> {
        let target = target_bits * LN_2;
        Ok(match self.snr_for_rate(target)? {
            Some(snr) => energy_per_bit_db(snr, target),
            None => f64::INFINITY,
        })
    }
}

/// Mean secrecy capacity of a single-transmit-antenna model on an SNR grid.
///
/// Columns: `snr`, `rate_nats_per_dim`, `std_error_nats`,
/// `rate_bits_per_dim`, `eb_n0_db` (`inf` where the rate is zero).
pub fn avg_secrecy_capacity_single_tx(
    model: &FadingModel,
    snr_grid: &[f64],
    mc: &MonteCarloConfig,
) -> Result<SweepTable> {
    check_snr_grid(snr_grid)?;
    let samples = SingleTxSamples::draw(model, mc)?;
    let mut table = SweepTable::new(&[
        "snr",
        "rate_nats_per_dim",
        "std_error_nats",
        "rate_bits_per_dim",
        "eb_n0_db",
    ]);
    for &snr in snr_grid {
        let (rate, se) = samples.average_rate(snr)?;
        table.push(vec![
            snr,
            rate,
            se,
            rate / LN_2,
            energy_per_bit_db(snr, rate),
        ]);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::reference_channel_3x3;
    use crate::sweep::{grid, GridScale};
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    fn power_correlation(pairs: &[(f64, f64)]) -> f64 {
        let n = pairs.len() as f64;
        let (ma, mb) = pairs
            .iter()
            .fold((0.0, 0.0), |s, p| (s.0 + p.0 / n, s.1 + p.1 / n));
        let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
        for &(a, b) in pairs {
            sab += (a - ma) * (b - mb);
            saa += (a - ma) * (a - ma);
            sbb += (b - mb) * (b - mb);
        }
        sab / (saa * sbb).sqrt()
    }

    fn scalar_powers(model: &FadingModel, n: u64) -> Vec<(f64, f64)> {
        (0..n)
            .into_par_iter()
            .map(|i| {
                let ch = draw_channel(model, 7, i);
                (ch.hm()[(0, 0)].norm_sqr(), ch.he()[(0, 0)].norm_sqr())
            })
            .collect()
    }

    // E[(a X − b Y)^+] for independent unit exponentials is a²/(a+b); the
    // correlated pair reduces to that form with a, −b the eigenvalues of
    // diag(1, −r) times the gain covariance.
    fn closed_form_c1(rho: f64, r: f64) -> f64 {
        let d = ((1.0 - r).powi(2) + 4.0 * r * (1.0 - rho)).sqrt();
        let a = 0.5 * (1.0 - r + d);
        let b = 0.5 * (d - (1.0 - r));
        a * a / (a + b)
    }

    #[test]
    fn draws_depend_only_on_seed_and_index() {
        let m = FadingModel::iid_rayleigh(2, 3, 2, 1.0, 1.0).unwrap();
        assert_eq!(draw_channel(&m, 5, 11), draw_channel(&m, 5, 11));
        assert_ne!(draw_channel(&m, 5, 11), draw_channel(&m, 5, 12));
        assert_ne!(draw_channel(&m, 6, 11), draw_channel(&m, 5, 11));
        let ch = draw_channel(&m, 5, 0);
        assert_eq!((ch.n_t(), ch.n_r(), ch.n_e()), (2, 3, 2));
    }

    #[test]
    fn full_correlation_gives_identical_gains() {
        let m = FadingModel::correlated_pair(1.0, 1.0, 1.0).unwrap();
        for i in 0..100 {
            let ch = draw_channel(&m, 3, i);
            assert_eq!(ch.hm()[(0, 0)], ch.he()[(0, 0)]);
        }
    }

    #[test]
    fn empirical_power_correlation() {
        let n = 1_000_000;
        let zero = scalar_powers(&FadingModel::correlated_pair(0.0, 1.0, 1.0).unwrap(), n);
        assert!(power_correlation(&zero).abs() < 0.005);
        let half = scalar_powers(&FadingModel::correlated_pair(0.5, 1.0, 1.0).unwrap(), n);
        let c = power_correlation(&half);
        assert!((c - 0.5).abs() < 0.01, "{c}");
    }

    #[test]
    fn entry_variance_is_respected() {
        let m = FadingModel::iid_rayleigh(2, 2, 1, 1.0, 1.0)
            .unwrap()
            .with_variances(2.0, 0.5)
            .unwrap();
        let n = 100_000u64;
        let (mut sm, mut se) = (0.0, 0.0);
        for i in 0..n {
            let ch = draw_channel(&m, 1, i);
            sm += ch.hm().frobenius_norm().powi(2) / 4.0;
            se += ch.he().frobenius_norm().powi(2) / 2.0;
        }
        assert!((sm / n as f64 - 2.0).abs() < 0.02);
        assert!((se / n as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn density_without_correlation_is_a_product() {
        for (a, b) in [(0.0, 0.0), (0.3, 2.0), (5.0, 1.5)] {
            let p = bivariate_exponential_pdf(a, b, 0.0).unwrap();
            assert!((p - (-a - b).exp()).abs() < 1e-15);
        }
        assert!(matches!(
            bivariate_exponential_pdf(1.0, 1.0, 1.0),
            Err(Error::Domain(_))
        ));
        assert!(bivariate_exponential_pdf(-1.0, 1.0, 0.5).is_err());
    }

    fn integrate_2d(
        f: impl Fn(f64, f64) -> f64,
        (a0, a1): (f64, f64),
        (b0, b1): (f64, f64),
    ) -> f64 {
        integrate(
            |y| integrate(|x| f(x, y), a0, a1, 1e-14, 1e-12, 400).0,
            b0,
            b1,
            1e-13,
            1e-11,
            400,
        )
        .0
    }

    #[test]
    fn density_normalization_and_marginal() {
        for rho in [0.0, 0.3, 0.7, 0.95] {
            let total = integrate_2d(|x, y| pdf_unchecked(x, y, rho), (0.0, 40.0), (0.0, 40.0));
            assert!((total - 1.0).abs() < 1e-8, "rho={rho}: {total}");
            for zm in [0.1, 1.0, 3.0] {
                let marginal = integrate(
                    |ze| pdf_unchecked(zm, ze, rho),
                    0.0,
                    40.0,
                    1e-15,
                    1e-12,
                    400,
                )
                .0;
                assert!((marginal - (-zm).exp()).abs() < 1e-8, "rho={rho} zm={zm}");
            }
        }
    }

    #[test]
    fn density_matches_sampler() {
        // chi-square goodness of fit on 20 x 20 equal-probability marginal bins
        let rho = 0.5;
        let n = 1_000_000u64;
        let bins = 20;
        let edge = |k: usize| {
            if k == bins {
                QUADRATURE_LIMIT
            } else {
                -(1.0 - k as f64 / bins as f64).ln()
            }
        };
        let bin = |z: f64| (((1.0 - (-z).exp()) * bins as f64) as usize).min(bins - 1);
        let mut counts = vec![0u64; bins * bins];
        for (a, b) in scalar_powers(&FadingModel::correlated_pair(rho, 1.0, 1.0).unwrap(), n) {
            counts[bin(a) * bins + bin(b)] += 1;
        }
        let mut expected = vec![0.0; bins * bins];
        for i in 0..bins {
            for j in 0..bins {
                let p = integrate_2d(
                    |x, y| pdf_unchecked(x, y, rho),
                    (edge(i), edge(i + 1)),
                    (edge(j), edge(j + 1)),
                );
                expected[i * bins + j] = p * n as f64;
            }
        }
        // pool sparse cells into one
        let (mut stat, mut cells) = (0.0, 0usize);
        let (mut pooled_obs, mut pooled_exp) = (0.0, 0.0);
        for (o, e) in counts.iter().zip(&expected) {
            if *e < 5.0 {
                pooled_obs += *o as f64;
                pooled_exp += e;
            } else {
                stat += (*o as f64 - e).powi(2) / e;
                cells += 1;
            }
        }
        if pooled_exp > 0.0 {
            stat += (pooled_obs - pooled_exp).powi(2) / pooled_exp;
            cells += 1;
        }
        let p = 1.0 - ChiSquared::new((cells - 1) as f64).unwrap().cdf(stat);
        assert!(p > 0.001, "chi-square {stat} on {cells} cells, p = {p}");
    }

    #[test]
    fn correlated_c1_matches_closed_form() {
        for rho in [0.0, 0.2, 0.5, 0.8, 0.95] {
            for (nm, ne) in [(1.0, 1.0), (1.0, 2.0), (2.0, 1.0)] {
                let got = correlated_pair_c1(rho, nm, ne).unwrap();
                let want = closed_form_c1(rho, nm / ne);
                assert!(
                    (got - want).abs() < 1e-9,
                    "rho={rho} r={}: {got} vs {want}",
                    nm / ne
                );
            }
        }
        assert!((correlated_pair_c1(0.0, 1.0, 1.0).unwrap() - 0.5).abs() < 1e-10);
        assert!(correlated_pair_c1(1.0, 1.0, 1.0).is_err());
        assert!(correlated_pair_c1(-0.1, 1.0, 1.0).is_err());
    }

    #[test]
    fn rayleigh_scalar_average() {
        let m = FadingModel::iid_rayleigh(1, 1, 1, 1.0, 1.0).unwrap();
        let p = average_derivatives(&m, &MonteCarloConfig::new(200_000, 1)).unwrap();
        assert!((p.c1_avg - 0.5).abs() < 4.0 * p.standard_error_c1);
        assert!(p.c1_avg > 0.0);
    }

    #[test]
    fn two_receive_antennas_match_quadrature() {
        // z = ‖h_m‖² is Gamma(2, 1), w = |h_e|² unit exponential
        let m = FadingModel::iid_rayleigh(1, 2, 1, 1.0, 1.0).unwrap();
        let p = average_derivatives(&m, &MonteCarloConfig::new(200_000, 3)).unwrap();
        let want = integrate(
            |w| integrate(|z| (z - w) * z * (-z).exp(), w, 60.0, 1e-14, 1e-12, 200).0 * (-w).exp(),
            0.0,
            60.0,
            1e-13,
            1e-11,
            200,
        )
        .0;
        assert!(
            (p.c1_avg - want).abs() < 4.0 * p.standard_error_c1,
            "{} vs {want}",
            p.c1_avg
        );
    }

    #[test]
    fn fixed_model_reduces_to_deterministic_profile() {
        let ch = reference_channel_3x3();
        let det = secrecy_derivatives(&ch).unwrap();
        let p =
            average_derivatives(&FadingModel::fixed(ch), &MonteCarloConfig::new(10, 0)).unwrap();
        assert_eq!(p.c1_avg, det.c1);
        assert_eq!(p.c2_avg, det.c2);
        assert_eq!(p.eb_n0_min_db, det.eb_n0_min_db);
        assert_eq!(p.standard_error_c1, 0.0);

        let same = FadingModel::zero_spread(1, 1, 1, 1.0, 1.0).unwrap();
        assert_eq!(
            fading_min_energy(&same, &MonteCarloConfig::new(1, 0)).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn results_do_not_depend_on_worker_count() {
        let m = FadingModel::iid_rayleigh(2, 2, 1, 1.0, 1.5).unwrap();
        let base = MonteCarloConfig::new(20_000, 42);
        let one = average_derivatives(&m, &base.with_workers(1)).unwrap();
        let four = average_derivatives(&m, &base.with_workers(4)).unwrap();
        assert_eq!(one.to_json(), four.to_json());
        assert_eq!(one, FadingProfile::from_json(&one.to_json()).unwrap());

        let g = grid(0.1, 2.0, 5, GridScale::Linear).unwrap();
        let m1 = FadingModel::iid_rayleigh(1, 3, 2, 1.0, 1.0).unwrap();
        let a = avg_secrecy_capacity_single_tx(&m1, &g, &base.with_workers(1)).unwrap();
        let b = avg_secrecy_capacity_single_tx(&m1, &g, &base.with_workers(3)).unwrap();
        assert_eq!(a.to_csv_string(), b.to_csv_string());
    }

    #[test]
    fn zero_spread_curve_is_closed_form() {
        let m = FadingModel::zero_spread(1, 5, 3, 1.0, 1.0).unwrap();
        let g = grid(0.01, 10.0, 30, GridScale::Log).unwrap();
        let t = avg_secrecy_capacity_single_tx(&m, &g, &MonteCarloConfig::new(1, 0)).unwrap();
        for row in &t.rows {
            let s = row[0];
            let want = (((1.0 + 25.0 * s).ln() - (1.0 + 15.0 * s).ln()) / 5.0).max(0.0);
            assert!((row[1] - want).abs() < 1e-15);
            assert_eq!(row[2], 0.0);
        }
    }

    #[test]
    fn finite_snr_needs_single_transmit_antenna() {
        let m = FadingModel::iid_rayleigh(2, 1, 1, 1.0, 1.0).unwrap();
        let r = avg_secrecy_capacity_single_tx(&m, &[1.0], &MonteCarloConfig::new(10, 0));
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }

    #[test]
    fn bisection_inverts_the_rate() {
        let m = FadingModel::zero_spread(1, 5, 3, 1.0, 1.0).unwrap();
        let s = SingleTxSamples::draw(&m, &MonteCarloConfig::new(1, 0)).unwrap();
        let snr = s.snr_for_rate(0.05).unwrap().unwrap();
        assert!((s.average_rate(snr).unwrap().0 - 0.05).abs() < 1e-12);
        // the deterministic rate saturates at (1/5) ln(5/3)
        assert_eq!(
            s.snr_for_rate(0.2 * (5.0f64 / 3.0).ln() + 1e-3).unwrap(),
            None
        );
        assert_eq!(s.eb_n0_at_rate(0.2).unwrap(), f64::INFINITY);
    }

    #[test]
    fn model_json() {
        let text = r#"{"kind": "correlated_scalar_pair", "nT": 1, "nR": 1, "nE": 1, "rho": 0.4, "Nm": 1, "Ne": 2}"#;
        let m = FadingModel::from_json(text).unwrap();
        assert_eq!(m.rho(), Some(0.4));
        assert_eq!(FadingModel::from_json(&m.to_json()).unwrap(), m);

        let text = r#"{"kind": "iid_rayleigh", "nT": 1, "nR": 5, "nE": 3, "variances": {"Hm": 2, "He": 1}}"#;
        let m = FadingModel::from_json(text).unwrap();
        assert_eq!((m.nm(), m.ne()), (1.0, 1.0));
        assert_eq!(FadingModel::from_json(&m.to_json()).unwrap(), m);

        let fixed = r#"{"kind": "fixed", "nT": 1, "nR": 5, "nE": 3, "Nm": 1, "Ne": 1}"#;
        let m = FadingModel::from_json(fixed).unwrap();
        assert_eq!(m, FadingModel::zero_spread(1, 5, 3, 1.0, 1.0).unwrap());
        assert_eq!(FadingModel::from_json(&m.to_json()).unwrap(), m);

        for bad in [
            r#"{"kind": "correlated_scalar_pair", "rho": 1.5}"#,
            r#"{"kind": "correlated_scalar_pair", "nR": 2, "rho": 0.5}"#,
            r#"{"kind": "iid_rayleigh", "nT": 0}"#,
            r#"{"kind": "iid_rayleigh", "rho": 0.3}"#,
            r#"{"kind": "iid_rayleigh", "variances": {"Hm": 0, "He": 1}}"#,
            r#"{"kind": "fixed", "nR": 2, "Hm": [[[1, 0]]]}"#,
            r#"{"kind": "rician"}"#,
        ] {
            assert!(FadingModel::from_json(bad).is_err(), "{bad}");
        }
    }
}
