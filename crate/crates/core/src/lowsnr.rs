//! First and second derivatives of the secrecy capacity at zero SNR, the
//! transmit covariance that attains them, and the derived energy metrics.
//!
//! The first derivative is the positive part of the largest eigenvalue of
//! `Φ = Hm†Hm - (Nm/Ne) He†He`. When that eigenvalue is repeated, the
//! second derivative requires choosing how to split power across an
//! orthonormal basis `{u_i}` of its eigenspace, which is the simplex-
//! constrained quadratic program
//!
//! ```text
//! min  αᵀ M α   s.t. α ≥ 0, Σ α = 1,
//! M_ij = |u_j† Hm†Hm u_i|² - (Nm/Ne)² |u_j† He†He u_i|²
//! ```
//!
//! and `C̈(0) = -n_R · min αᵀMα`.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{
    main_link_rate, secrecy_rate, NormalizedCovariance, WiretapChannel, POSITIVE_TOL,
};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, EigenDecomposition, HermitianMatrix};
use crate::sweep::{check_snr_grid, SweepTable};

/// Default relative tolerance for clustering eigenvalues with `λ_max`.
pub const DEFAULT_MULTIPLICITY_TOL: f64 = 1e-8;

/// Largest eigenspace dimension solved by exhaustive face enumeration.
pub const EXACT_SIMPLEX_LIMIT: usize = 12;

const PG_STARTS: usize = 32;
const PG_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowSnrOptions {
    /// Eigenvalues within `multiplicity_tol * (1 + |λ_max|)` of `λ_max`
    /// belong to the maximal eigenspace.
    pub multiplicity_tol: f64,
}

impl Default for LowSnrOptions {
    fn default() -> Self {
        Self {
            multiplicity_tol: DEFAULT_MULTIPLICITY_TOL,
        }
    }
}

/// Eigenvectors spanning the eigenspace of `λ_max`, or nothing when
/// `λ_max` is not positive.
pub fn maximal_eigenspace(eig: &EigenDecomposition, rel_tol: f64) -> Vec<Vec<Complex64>> {
    let top = eig.lambda_max();
    if top <= POSITIVE_TOL {
        return Vec::new();
    }
    let window = rel_tol * (1.0 + top.abs());
    eig.values
        .iter()
        .zip(&eig.vectors)
        .take_while(|(l, _)| top - **l <= window)
        .map(|(_, v)| v.clone())
        .collect()
}

/// The symmetric matrix of the simplex-constrained quadratic program.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexQp {
    m: Vec<Vec<f64>>,
}

impl SimplexQp {
    /// Stores `(M + Mᵀ)/2`.
    pub fn new(m: Vec<Vec<f64>>) -> Result<Self> {
        let l = m.len();
        if l == 0 || m.iter().any(|r| r.len() != l) {
            return Err(Error::Shape(
                "simplex QP matrix must be square and non-empty".into(),
            ));
        }
        let mut sym = m.clone();
        for i in 0..l {
            for j in 0..l {
                sym[i][j] = 0.5 * (m[i][j] + m[j][i]);
            }
        }
        Ok(Self { m: sym })
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.m
    }

    /// `αᵀ M α`.
    pub fn value(&self, alpha: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (i, row) in self.m.iter().enumerate() {
            for (j, mij) in row.iter().enumerate() {
                acc += alpha[i] * mij * alpha[j];
            }
        }
        acc
    }

    fn gradient(&self, alpha: &[f64]) -> Vec<f64> {
        self.m
            .iter()
            .map(|row| 2.0 * row.iter().zip(alpha).map(|(a, b)| a * b).sum::<f64>())
            .collect()
    }

    fn spectral_norm(&self) -> Result<f64> {
        let l = self.dim();
        let flat: Vec<f64> = self.m.iter().flatten().copied().collect();
        let eig = HermitianMatrix::new(ComplexMatrix::from_real(l, l, &flat)?)?.eig()?;
        Ok(eig.lambda_max().abs().max(eig.lambda_min().abs()))
    }
}

/// Builds `M` over the given eigenspace basis.
pub fn quadratic_form_matrix(
    ch: &WiretapChannel,
    eigenspace: &[Vec<Complex64>],
) -> Result<SimplexQp> {
    if eigenspace.is_empty() {
        return Err(Error::Domain(
            "empty eigenspace: secrecy is not possible".into(),
        ));
    }
    let gm = HermitianMatrix::gram(ch.hm());
    let ge = HermitianMatrix::gram(ch.he());
    let r2 = ch.noise_ratio().powi(2);
    let l = eigenspace.len();
    let mut m = vec![vec![0.0; l]; l];
    for i in 0..l {
        for j in 0..l {
            let a = gm.form(&eigenspace[j], &eigenspace[i])?.norm_sqr();
            let b = ge.form(&eigenspace[j], &eigenspace[i])?.norm_sqr();
            m[i][j] = a - r2 * b;
        }
    }
    SimplexQp::new(m)
}

/// Minimizer of a simplex-constrained quadratic.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexSolution {
    pub alpha: Vec<f64>,
    pub value: f64,
    /// `false` when the projected-gradient fallback was used.
    pub exact: bool,
}

/// Global minimum of `αᵀMα` over the probability simplex.
///
/// Up to [`EXACT_SIMPLEX_LIMIT`] dimensions every face is visited: on face
/// `S` the KKT system `M_S α_S = μ 1, Σ α_S = 1` is solved and nonnegative
/// solutions are kept (singular faces are skipped; their minima lie on
/// lower faces). Larger problems fall back to multi-start projected
/// gradient descent. Equal values are resolved towards the
/// lexicographically smallest `α`.
pub fn minimize_simplex_quadratic(qp: &SimplexQp) -> Result<SimplexSolution> {
    if qp.dim() <= EXACT_SIMPLEX_LIMIT {
        Ok(enumerate_faces(qp))
    } else {
        projected_gradient(qp)
    }
}

fn enumerate_faces(qp: &SimplexQp) -> SimplexSolution {
    let l = qp.dim();
    let mut best: Option<(Vec<f64>, f64)> = None;
    for mask in 1u32..(1u32 << l) {
        let support: Vec<usize> = (0..l).filter(|i| mask & (1 << i) != 0).collect();
        let k = support.len();
        // [M_S  -1] [α_S]   [0]
        // [1ᵀ    0] [ μ ] = [1]
        let mut a = vec![vec![0.0; k + 1]; k + 1];
        let mut b = vec![0.0; k + 1];
        for (r, &i) in support.iter().enumerate() {
            for (c, &j) in support.iter().enumerate() {
                a[r][c] = qp.m[i][j];
            }
            a[r][k] = -1.0;
            a[k][r] = 1.0;
        }
        b[k] = 1.0;
        let Some(x) = solve_dense(a, b) else { continue };
        if x[..k].iter().any(|&v| v < -1e-12) {
            continue;
        }
        let mut alpha = vec![0.0; l];
        for (r, &i) in support.iter().enumerate() {
            alpha[i] = x[r].max(0.0);
        }
        let total: f64 = alpha.iter().sum();
        alpha.iter_mut().for_each(|v| *v /= total);
        let value = qp.value(&alpha);
        consider(&mut best, alpha, value);
    }
    let (alpha, value) = best.expect("vertices are always feasible");
    SimplexSolution {
        alpha,
        value,
        exact: true,
    }
}

fn consider(best: &mut Option<(Vec<f64>, f64)>, alpha: Vec<f64>, value: f64) {
    let replace = match best {
        None => true,
        Some((b_alpha, b_value)) => {
            let tol = 1e-12 * (1.0 + b_value.abs());
            if value < *b_value - tol {
                true
            } else if value <= *b_value + tol {
                alpha
                    .iter()
                    .zip(b_alpha.iter())
                    .find(|(x, y)| x != y)
                    .is_some_and(|(x, y)| x < y)
            } else {
                false
            }
        }
    };
    if replace {
        *best = Some((alpha, value));
    }
}

fn projected_gradient(qp: &SimplexQp) -> Result<SimplexSolution> {
    let l = qp.dim();
    let norm = qp.spectral_norm()?;
    let step = if norm > 0.0 { 1.0 / (2.0 * norm) } else { 1.0 };

    let mut starts = vec![vec![1.0 / l as f64; l]];
    let best_vertex = (0..l)
        .min_by(|&i, &j| qp.m[i][i].total_cmp(&qp.m[j][j]))
        .expect("l > 0");
    let mut vertex = vec![0.0; l];
    vertex[best_vertex] = 1.0;
    starts.push(vertex);
    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_ed51);
    while starts.len() < PG_STARTS {
        let raw: Vec<f64> = (0..l).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let sum: f64 = raw.iter().sum();
        starts.push(raw.into_iter().map(|v| v / sum).collect());
    }

    let mut best = None;
    for start in starts {
        let mut alpha = start;
        for _ in 0..PG_ITERATIONS {
            let g = qp.gradient(&alpha);
            let moved: Vec<f64> = alpha.iter().zip(&g).map(|(a, gi)| a - step * gi).collect();
            alpha = project_to_simplex(&moved);
        }
        let value = qp.value(&alpha);
        consider(&mut best, alpha, value);
    }
    let (alpha, value) = best.expect("at least one start");
    Ok(SimplexSolution {
        alpha,
        value,
        exact: false,
    })
}

/// Euclidean projection onto `{x ≥ 0, Σx = 1}`.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &x) in sorted.iter().enumerate() {
        cumsum += x;
        let t = (cumsum - 1.0) / (k + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

/// Gaussian elimination with partial pivoting; `None` if numerically singular.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flatten()
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            let (upper, lower) = a.split_at_mut(row);
            for (x, p) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = ((row + 1)..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Everything known about a channel at vanishing SNR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileRecord", into = "ProfileRecord")]
pub struct LowSnrProfile {
    /// First derivative `[λ_max(Φ)]^+`, nats/dimension per unit SNR.
    pub c1: f64,
    /// Second derivative at zero SNR.
    pub c2: f64,
    /// Largest eigenvalue of `Φ`, signed.
    pub lambda_max: f64,
    pub eigenspace: Vec<Vec<Complex64>>,
    pub alpha: Vec<f64>,
    /// `Σ α_i u_i u_i†`; `None` when secrecy is impossible.
    pub optimal_cov: Option<NormalizedCovariance>,
    pub eb_n0_min_db: f64,
    pub wideband_slope: f64,
    pub secrecy_possible: bool,
}

#[derive(Serialize, Deserialize)]
struct ProfileRecord {
    c1: f64,
    c2: f64,
    lambda_max: f64,
    multiplicity: usize,
    alpha: Vec<f64>,
    eigenspace: Vec<Vec<Complex64>>,
    #[serde(with = "crate::serde_ext")]
    eb_n0_min_db: f64,
    #[serde(with = "crate::serde_ext")]
    wideband_slope: f64,
    secrecy_possible: bool,
}

impl From<LowSnrProfile> for ProfileRecord {
    fn from(p: LowSnrProfile) -> Self {
        Self {
            c1: p.c1,
            c2: p.c2,
            lambda_max: p.lambda_max,
            multiplicity: p.eigenspace.len(),
            alpha: p.alpha,
            eigenspace: p.eigenspace,
            eb_n0_min_db: p.eb_n0_min_db,
            wideband_slope: p.wideband_slope,
            secrecy_possible: p.secrecy_possible,
        }
    }
}

impl TryFrom<ProfileRecord> for LowSnrProfile {
    type Error = Error;

    fn try_from(r: ProfileRecord) -> Result<Self> {
        if r.multiplicity != r.eigenspace.len() || r.alpha.len() != r.eigenspace.len() {
            return Err(Error::InvalidInput(
                "multiplicity, alpha and eigenspace lengths disagree".into(),
            ));
        }
        let optimal_cov = if r.eigenspace.is_empty() {
            None
        } else {
            Some(NormalizedCovariance::from_weighted_basis(
                &r.alpha,
                &r.eigenspace,
            )?)
        };
        Ok(Self {
            c1: r.c1,
            c2: r.c2,
            lambda_max: r.lambda_max,
            eigenspace: r.eigenspace,
            alpha: r.alpha,
            optimal_cov,
            eb_n0_min_db: r.eb_n0_min_db,
            wideband_slope: r.wideband_slope,
            secrecy_possible: r.secrecy_possible,
        })
    }
}

impl LowSnrProfile {
    pub fn multiplicity(&self) -> usize {
        self.eigenspace.len()
    }

    /// Second-order expansion `c1 snr + c2/2 snr²` in nats/dimension.
    pub fn second_order_rate(&self, snr: f64) -> f64 {
        capacity_second_order_approx(self, snr)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
    }
}

pub fn secrecy_derivatives(ch: &WiretapChannel) -> Result<LowSnrProfile> {
    secrecy_derivatives_with(ch, &LowSnrOptions::default())
}

pub fn secrecy_derivatives_with(
    ch: &WiretapChannel,
    opts: &LowSnrOptions,
) -> Result<LowSnrProfile> {
    let eig = ch.phi().eig()?;
    let lambda_max = eig.lambda_max();
    let eigenspace = maximal_eigenspace(&eig, opts.multiplicity_tol);
    if eigenspace.is_empty() {
        return Ok(LowSnrProfile {
            c1: 0.0,
            c2: 0.0,
            lambda_max,
            eigenspace,
            alpha: Vec::new(),
            optimal_cov: None,
            eb_n0_min_db: min_energy_per_secret_bit(0.0),
            wideband_slope: wideband_slope(0.0, 0.0),
            secrecy_possible: false,
        });
    }
    let c1 = lambda_max;
    let qp = quadratic_form_matrix(ch, &eigenspace)?;
    let sol = minimize_simplex_quadratic(&qp)?;
    let c2 = -(ch.n_r() as f64) * sol.value;
    let optimal_cov = NormalizedCovariance::from_weighted_basis(&sol.alpha, &eigenspace)?;
    Ok(LowSnrProfile {
        c1,
        c2,
        lambda_max,
        eigenspace,
        alpha: sol.alpha,
        optimal_cov: Some(optimal_cov),
        eb_n0_min_db: min_energy_per_secret_bit(c1),
        wideband_slope: wideband_slope(c1, c2),
        secrecy_possible: true,
    })
}

/// `10 log10(log 2 / c1)` in dB; `+∞` when `c1 = 0`.
pub fn min_energy_per_secret_bit(c1: f64) -> f64 {
    if c1 > 0.0 {
        10.0 * (LN_2 / c1).log10()
    } else {
        f64::INFINITY
    }
}

/// `2 c1² / (-c2)`: zero without secrecy, `+∞` when `c2 = 0 < c1`.
pub fn wideband_slope(c1: f64, c2: f64) -> f64 {
    if c1 <= 0.0 {
        0.0
    } else if c2 < 0.0 {
        2.0 * c1 * c1 / -c2
    } else {
        f64::INFINITY
    }
}

pub fn capacity_second_order_approx(profile: &LowSnrProfile, snr: f64) -> f64 {
    profile.c1 * snr + 0.5 * profile.c2 * snr * snr
}

/// Derivatives without an eavesdropper: `λ_max(Hm†Hm)` and
/// `-(n_R / l) λ_max²`, `l` the multiplicity of `λ_max(Hm†Hm)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoSecrecyProfile {
    pub c1: f64,
    pub c2: f64,
    pub multiplicity: usize,
    pub eb_n0_min_db: f64,
}

pub fn no_secrecy_derivatives(
    ch: &WiretapChannel,
    opts: &LowSnrOptions,
) -> Result<NoSecrecyProfile> {
    let eig = HermitianMatrix::gram(ch.hm()).eig()?;
    let top = eig.lambda_max();
    let l = maximal_eigenspace(&eig, opts.multiplicity_tol).len();
    if l == 0 {
        return Ok(NoSecrecyProfile {
            c1: 0.0,
            c2: 0.0,
            multiplicity: 0,
            eb_n0_min_db: f64::INFINITY,
        });
    }
    Ok(NoSecrecyProfile {
        c1: top,
        c2: -(ch.n_r() as f64) / l as f64 * top * top,
        multiplicity: l,
        eb_n0_min_db: min_energy_per_secret_bit(top),
    })
}

/// Transmit covariance choices compared at low SNR.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovarianceStrategy {
    /// Weighted maximal eigenspace of `Φ`.
    Optimal,
    /// Beamforming on the strongest direction of the legitimate link alone.
    MainBeamforming,
    /// `I / n_T`.
    Uniform,
}

impl CovarianceStrategy {
    /// Covariance for this strategy. Without secrecy `Optimal` beamforms on
    /// the top eigenvector of `Φ`; every covariance then has zero rate.
    pub fn covariance(
        self,
        ch: &WiretapChannel,
        profile: &LowSnrProfile,
    ) -> Result<NormalizedCovariance> {
        match self {
            CovarianceStrategy::Optimal => match &profile.optimal_cov {
                Some(k) => Ok(k.clone()),
                None => NormalizedCovariance::beamforming(&ch.phi().eig()?.vectors[0]),
            },
            CovarianceStrategy::MainBeamforming => main_beamforming(ch),
            CovarianceStrategy::Uniform => Ok(NormalizedCovariance::uniform(ch.n_t())),
        }
    }
}

/// `v v†`, `v` the top eigenvector of `Hm†Hm`.
pub fn main_beamforming(ch: &WiretapChannel) -> Result<NormalizedCovariance> {
    let eig = HermitianMatrix::gram(ch.hm()).eig()?;
    NormalizedCovariance::beamforming(&eig.vectors[0])
}

/// Secrecy rate in nats per dimension at each SNR.
pub fn rate_curve(
    ch: &WiretapChannel,
    cov: &NormalizedCovariance,
    snr_grid: &[f64],
) -> Result<SweepTable> {
    check_snr_grid(snr_grid)?;
    let mut table = SweepTable::new(&["snr", "power", "rate_nats_per_dim"]);
    for &snr in snr_grid {
        let r = secrecy_rate(ch, cov, snr)?;
        table.push(vec![snr, ch.power_for_snr(snr), r.nats()]);
    }
    Ok(table)
}

/// Secrecy rate (bits) against energy per secret bit
/// `E_b/N_0 = snr log 2 / C(snr)` in dB. Zero-rate points are omitted.
pub fn energy_rate_curve(
    ch: &WiretapChannel,
    cov: &NormalizedCovariance,
    snr_grid: &[f64],
) -> Result<SweepTable> {
    energy_curve_from(snr_grid, |snr| Ok(secrecy_rate(ch, cov, snr)?.nats()))
}

/// As [`energy_rate_curve`] for the legitimate link without secrecy.
pub fn no_secrecy_energy_curve(
    ch: &WiretapChannel,
    cov: &NormalizedCovariance,
    snr_grid: &[f64],
) -> Result<SweepTable> {
    energy_curve_from(snr_grid, |snr| Ok(main_link_rate(ch, cov, snr)?.nats()))
}

pub(crate) fn energy_curve_from(
    snr_grid: &[f64],
    mut rate_nats: impl FnMut(f64) -> Result<f64>,
) -> Result<SweepTable> {
    check_snr_grid(snr_grid)?;
    let mut table = SweepTable::new(&["snr", "eb_n0_db", "rate_bits_per_dim"]);
    for &snr in snr_grid {
        let r = rate_nats(snr)?;
        if r > 0.0 {
            table.push(vec![snr, energy_per_bit_db(snr, r), r / LN_2]);
        } else {
            table.omitted += 1;
        }
    }
    Ok(table)
}

/// `10 log10(snr log 2 / rate_nats)`.
pub fn energy_per_bit_db(snr: f64, rate_nats: f64) -> f64 {
    if rate_nats > 0.0 {
        10.0 * (snr * LN_2 / rate_nats).log10()
    } else {
        f64::INFINITY
    }
}

/// Result of optimizing over every trace-one PSD weight matrix on the
/// maximal eigenspace instead of diagonal weights in a fixed basis.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxedComparison {
    /// Minimum of `αᵀMα` over diagonal weights.
    pub diagonal_value: f64,
    /// Best value found over full weight matrices `W` (never above
    /// `diagonal_value`, since the diagonal optimum is a start point).
    pub relaxed_value: f64,
    /// Weight matrix achieving `relaxed_value`, in the eigenspace basis.
    pub weights: HermitianMatrix,
}

/// Minimizes `tr((Hm K Hm†)²) - (Nm/Ne)² tr((He K He†)²)` over
/// `K = U W U†`, `W ⪰ 0`, `tr W = 1`, by projected gradient descent from
/// the diagonal optimum, the scaled identity and a few random starts.
/// Local search only; reported for comparison.
pub fn relaxed_eigenspace_minimum(
    ch: &WiretapChannel,
    eigenspace: &[Vec<Complex64>],
) -> Result<RelaxedComparison> {
    let qp = quadratic_form_matrix(ch, eigenspace)?;
    let diag = minimize_simplex_quadratic(&qp)?;
    let l = eigenspace.len();
    let nt = ch.n_t();

    let mut u = ComplexMatrix::zeros(nt, l);
    for (j, v) in eigenspace.iter().enumerate() {
        for i in 0..nt {
            u[(i, j)] = v[i];
        }
    }
    let am = ch.hm().matmul(&u)?;
    let ae = ch.he().matmul(&u)?;
    let r2 = ch.noise_ratio().powi(2);

    let objective = |w: &HermitianMatrix| -> Result<f64> {
        let m = HermitianMatrix::congruence(&am, w)?.trace_square();
        let e = HermitianMatrix::congruence(&ae, w)?.trace_square();
        Ok(m - r2 * e)
    };
    let gradient = |w: &HermitianMatrix| -> Result<HermitianMatrix> {
        let sm = HermitianMatrix::congruence(&am, w)?;
        let se = HermitianMatrix::congruence(&ae, w)?;
        let gm = HermitianMatrix::congruence(&am.adjoint(), &sm)?;
        let ge = HermitianMatrix::congruence(&ae.adjoint(), &se)?;
        Ok(gm.sub(&ge.scale(r2))?.scale(2.0))
    };
    let lipschitz = 2.0 * (am.frobenius_norm().powi(4) + r2 * ae.frobenius_norm().powi(4));
    let step = if lipschitz > 0.0 {
        1.0 / lipschitz
    } else {
        1.0
    };

    let mut starts = vec![
        HermitianMatrix::diag(&diag.alpha),
        HermitianMatrix::identity(l).scale(1.0 / l as f64),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e1a);
    for _ in 0..6 {
        let data = (0..l * l)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let g = ComplexMatrix::new(l, l, data)?;
        let w = HermitianMatrix::new(g.matmul(&g.adjoint())?)?;
        starts.push(w.scale(1.0 / w.trace()));
    }

    let mut best_value = diag.value;
    let mut best_w = starts[0].clone();
    for mut w in starts {
        for _ in 0..2_000 {
            let g = gradient(&w)?;
            w = project_to_spectraplex(&w.sub(&g.scale(step))?)?;
        }
        let v = objective(&w)?;
        if v < best_value {
            best_value = v;
            best_w = w;
        }
    }
    Ok(RelaxedComparison {
        diagonal_value: diag.value,
        relaxed_value: best_value,
        weights: best_w,
    })
}

/// Projection onto `{W ⪰ 0, tr W = 1}`.
fn project_to_spectraplex(w: &HermitianMatrix) -> Result<HermitianMatrix> {
    let eig = w.eig()?;
    let weights = project_to_simplex(&eig.values);
    let mut out = HermitianMatrix::diag(&vec![0.0; w.dim()]);
    for (p, v) in weights.iter().zip(&eig.vectors) {
        if *p > 0.0 {
            out = out.add(&HermitianMatrix::outer(v).scale(*p))?;
        }
    }
    Ok(out)
}
