//! Dense complex matrices and the Hermitian eigensolver.
//!
//! Everything here is sized for antenna-count problems (dimension well below
//! 64), so storage is a flat row-major `Vec<Complex64>` and all products are
//! the textbook triple loop.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance on `|a_ij - conj(a_ji)|` accepted by [`HermitianMatrix::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Relative off-diagonal Frobenius norm at which the Jacobi iteration stops.
pub const JACOBI_TOL: f64 = 1e-12;

/// Maximum number of cyclic Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues at or above `-PSD_TOL * (1 + lambda_max)` are treated as zero.
pub const PSD_TOL: f64 = 1e-9;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; all rows must have the same length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// Builds a matrix with real entries, row-major.
    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            values.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn trace(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "trace of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok((0..self.rows).map(|i| self[(i, i)]).sum())
    }

    /// `tr(self * rhs)` without forming the product.
    pub fn trace_of_product(&self, rhs: &Self) -> Result<Complex64> {
        if self.cols != rhs.rows || self.rows != rhs.cols {
            return Err(Error::Shape(format!(
                "tr(AB) needs A: m x n, B: n x m; got {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * rhs[(k, i)];
            }
        }
        Ok(acc)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data
            .iter()
            .map(Complex64::norm_sqr)
            .sum::<f64>()
            .sqrt()
    }

    /// Largest `|a_ij - conj(a_ji)|`; infinite for non-square input.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>10.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Square matrix equal to its own conjugate transpose, with a real diagonal.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    /// Validates within [`HERMITIAN_TOL`], then stores the exactly Hermitian
    /// average `(A + A†)/2`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Shape(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.rows, m.cols
            )));
        }
        if m.rows == 0 {
            return Err(Error::Shape("empty matrix".into()));
        }
        let defect = m.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self::symmetrized(m))
    }

    fn symmetrized(mut m: ComplexMatrix) -> Self {
        let n = m.rows;
        for i in 0..n {
            m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                m[(i, j)] = avg;
                m[(j, i)] = avg.conj();
            }
        }
        Self(m)
    }

    /// Gram matrix `H† H`.
    pub fn gram(h: &ComplexMatrix) -> Self {
        let n = h.cols;
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v: Complex64 = (0..h.rows).map(|k| h[(k, i)].conj() * h[(k, j)]).sum();
                m[(i, j)] = v;
                m[(j, i)] = v.conj();
            }
        }
        Self::symmetrized(m)
    }

    /// `H K H†` for Hermitian `K`.
    pub fn congruence(h: &ComplexMatrix, k: &HermitianMatrix) -> Result<Self> {
        let hk = h.matmul(k.as_matrix())?;
        Ok(Self::symmetrized(hk.matmul(&h.adjoint())?))
    }

    /// Rank-one projector `u u†`.
    pub fn outer(u: &[Complex64]) -> Self {
        let n = u.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = u[i] * u[j].conj();
            }
        }
        Self::symmetrized(m)
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn diag(values: &[f64]) -> Self {
        Self(ComplexMatrix::diag(values))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.0[(i, i)].re).sum()
    }

    /// `tr(self * rhs)`, real because both factors are Hermitian.
    pub fn trace_product(&self, rhs: &HermitianMatrix) -> Result<f64> {
        Ok(self.0.trace_of_product(&rhs.0)?.re)
    }

    /// `tr(self^2)`, the squared Frobenius norm.
    pub fn trace_square(&self) -> f64 {
        self.0.as_slice().iter().map(Complex64::norm_sqr).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        Ok(Self::symmetrized(self.0.add(&rhs.0)?))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        Ok(Self::symmetrized(self.0.sub(&rhs.0)?))
    }

    /// Quadratic form `u† A v`.
    pub fn form(&self, u: &[Complex64], v: &[Complex64]) -> Result<Complex64> {
        let av = self.0.apply(v)?;
        Ok(u.iter().zip(&av).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn eig(&self) -> Result<EigenDecomposition> {
        hermitian_eig(self)
    }

    /// Largest eigenvalue.
    pub fn lambda_max(&self) -> Result<f64> {
        Ok(self.eig()?.values[0])
    }
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hermitian{:?}", self.0)
    }
}

/// Spectrum sorted non-increasing with orthonormal eigenvectors.
///
/// Each vector is rotated so its largest-magnitude component (lowest index
/// on ties) is real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
}

impl EigenDecomposition {
    pub fn lambda_max(&self) -> f64 {
        self.values[0]
    }

    pub fn lambda_min(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }

    /// `Σ λ_i v_i v_i†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for (lambda, v) in self.values.iter().zip(&self.vectors) {
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += v[i] * v[j].conj() * *lambda;
                }
            }
        }
        m
    }
}

/// Cyclic complex Jacobi eigensolver.
pub fn hermitian_eig(a: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = a.dim();
    let mut m = a.as_matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm();

    let off_norm = |m: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = scale == 0.0 || n == 1;
    let mut sweeps = 0;
    while !converged {
        if off_norm(&m) <= JACOBI_TOL * scale {
            converged = true;
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::Convergence {
            sweeps,
            off_norm: off_norm(&m),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable sort keeps index order among equal eigenvalues
    order.sort_by(|&i, &j| m[(j, j)].re.total_cmp(&m[(i, i)].re));

    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = order
        .iter()
        .map(|&i| normalize_phase(v.column(i)))
        .collect();
    Ok(EigenDecomposition { values, vectors })
}

/// One two-sided unitary rotation annihilating `m[p][q]`.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let abs = apq.norm();
    if abs == 0.0 {
        return;
    }
    let n = m.rows;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // after the phase change D = diag(.., 1 @ p, e^{-i arg apq} @ q, ..)
    // the pivot is real and a real rotation finishes the job
    let dq = (apq / abs).conj();
    let theta = (aqq - app) / (2.0 * abs);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = dq * -s;
    let g_qq = dq * c;

    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * g_pp + akq * g_qp;
        m[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        m[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// Unit-normalizes `u` and rotates its phase so the dominant component is
/// real and positive.
pub fn normalize_phase(mut u: Vec<Complex64>) -> Vec<Complex64> {
    let norm = u.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    if norm == 0.0 {
        return u;
    }
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in u.iter().enumerate() {
        let mag = z.norm() / norm;
        if mag > best_mag + 1e-12 {
            best = i;
            best_mag = mag;
        }
    }
    let phase = u[best].conj() / u[best].norm();
    for z in &mut u {
        *z = *z * phase / norm;
    }
    u[best] = Complex64::new(u[best].re, 0.0);
    u
}

/// `log det(I + c A)` in nats for positive-semidefinite `A` and `c >= 0`.
pub fn log_det_i_plus(a: &HermitianMatrix, c: f64) -> Result<f64> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::Domain(format!("scale factor must be >= 0, got {c}")));
    }
    if c == 0.0 {
        return Ok(0.0);
    }
    let eig = a.eig()?;
    let floor = -PSD_TOL * (1.0 + eig.lambda_max().abs());
    let min = eig.lambda_min();
    if min < floor {
        return Err(Error::NotPsd(min));
    }
    Ok(eig.values.iter().map(|&l| (c * l.max(0.0)).ln_1p()).sum())
}

/// `u† v`.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Squared Euclidean norm.
pub fn norm_sqr(u: &[Complex64]) -> f64 {
    u.iter().map(Complex64::norm_sqr).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
        let data = (0..rows * cols)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        ComplexMatrix::new(rows, cols, data).unwrap()
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix {
        let a = random_matrix(rng, n, n);
        HermitianMatrix::new(a.add(&a.adjoint()).unwrap().scale(0.5)).unwrap()
    }

    /// Determinant by partial-pivot LU; test oracle only.
    fn lu_det(m: &ComplexMatrix) -> Complex64 {
        let n = m.rows();
        let mut a = m.clone();
        let mut det = c(1.0, 0.0);
        for k in 0..n {
            let piv = (k..n)
                .max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm()))
                .unwrap();
            if a[(piv, k)].norm() == 0.0 {
                return c(0.0, 0.0);
            }
            if piv != k {
                for j in 0..n {
                    let t = a[(k, j)];
                    a[(k, j)] = a[(piv, j)];
                    a[(piv, j)] = t;
                }
                det = -det;
            }
            det *= a[(k, k)];
            for i in (k + 1)..n {
                let f = a[(i, k)] / a[(k, k)];
                for j in k..n {
                    let akj = a[(k, j)];
                    a[(i, j)] -= f * akj;
                }
            }
        }
        det
    }

    #[test]
    fn identity_spectrum() {
        let eig = HermitianMatrix::identity(3).eig().unwrap();
        assert_eq!(eig.values, vec![1.0, 1.0, 1.0]);
        for (i, v) in eig.vectors.iter().enumerate() {
            for (j, z) in v.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert_eq!(*z, c(expected, 0.0));
            }
        }
    }

    #[test]
    fn diagonal_spectrum_sorted() {
        let eig = HermitianMatrix::diag(&[1.0, 3.0, 3.0]).eig().unwrap();
        assert_eq!(eig.values, vec![3.0, 3.0, 1.0]);
        // ties keep index order
        assert_eq!(eig.vectors[0][1], c(1.0, 0.0));
        assert_eq!(eig.vectors[1][2], c(1.0, 0.0));
    }

    #[test]
    fn golden_three_by_three() {
        let hm =
            ComplexMatrix::from_real(3, 3, &[1.0, 0.8, 0.5, 0.3, 1.0, 0.1, 0.1, 0.2, 0.1]).unwrap();
        let he =
            ComplexMatrix::from_real(3, 3, &[0.5, 0.4, 1.0, 0.7, 0.1, 0.5, 0.3, 0.5, 0.1]).unwrap();
        let phi = HermitianMatrix::gram(&hm)
            .sub(&HermitianMatrix::gram(&he))
            .unwrap();
        let eig = phi.eig().unwrap();
        assert!((eig.values[0] - 1.6298).abs() < 1e-3);
        let u = &eig.vectors[0];
        // convention flips the printed vector so the -0.8823 entry is positive
        let printed = [-0.4677, -0.8823, 0.054];
        for (z, p) in u.iter().zip(printed) {
            assert!((z.re + p).abs() < 1e-3, "{z} vs {p}");
            assert!(z.im.abs() < 1e-12);
        }
    }

    #[test]
    fn phase_convention_on_complex_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_hermitian(&mut rng, 5);
        let eig = a.eig().unwrap();
        for v in &eig.vectors {
            let (imax, _) = v.iter().enumerate().fold((0, -1.0), |(bi, bm), (i, z)| {
                if z.norm() > bm + 1e-12 {
                    (i, z.norm())
                } else {
                    (bi, bm)
                }
            });
            assert!(v[imax].re > 0.0);
            assert_eq!(v[imax].im, 0.0);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 3.0, 1.0]).unwrap();
        assert!(matches!(
            HermitianMatrix::new(m),
            Err(Error::NotHermitian(_))
        ));
        let m = ComplexMatrix::new(
            2,
            2,
            vec![c(1.0, 0.5), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        assert!(matches!(
            HermitianMatrix::new(m),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(
            ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 3.0]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            ComplexMatrix::from_real(1, 1, &[f64::NAN]),
            Err(Error::NonFinite)
        ));
        let a = ComplexMatrix::zeros(2, 3);
        assert!(matches!(a.matmul(&a), Err(Error::Shape(_))));
        assert!(matches!(a.trace(), Err(Error::Shape(_))));
    }

    #[test]
    fn log_det_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_matrix(&mut rng, 3, 3);
        let a = HermitianMatrix::gram(&g);
        assert_eq!(log_det_i_plus(&a, 0.0).unwrap(), 0.0);
        let i2 = HermitianMatrix::identity(2);
        assert!((log_det_i_plus(&i2, 1.0).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-15);

        let expected: f64 = a
            .eig()
            .unwrap()
            .values
            .iter()
            .map(|l| (1.0 + 0.7 * l).ln())
            .sum();
        assert!((log_det_i_plus(&a, 0.7).unwrap() - expected).abs() < 1e-10);

        let neg = HermitianMatrix::diag(&[1.0, -0.1]);
        assert!(matches!(log_det_i_plus(&neg, 1.0), Err(Error::NotPsd(_))));
        assert!(matches!(log_det_i_plus(&i2, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn trace_identities() {
        assert_eq!(ComplexMatrix::identity(4).trace().unwrap(), c(4.0, 0.0));
        let hm =
            ComplexMatrix::from_real(3, 3, &[1.0, 0.8, 0.5, 0.3, 1.0, 0.1, 0.1, 0.2, 0.1]).unwrap();
        let sum_sq: f64 = hm.as_slice().iter().map(|z| z.norm_sqr()).sum();
        assert!((HermitianMatrix::gram(&hm).trace() - sum_sq).abs() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 3, 4);
            let b = random_matrix(&mut rng, 4, 3);
            let ab = a.matmul(&b).unwrap().trace().unwrap();
            let ba = b.matmul(&a).unwrap().trace().unwrap();
            assert!((ab - ba).norm() < 1e-12);
            assert!((a.trace_of_product(&b).unwrap() - ab).norm() < 1e-12);
        }
        assert!(matches!(
            ComplexMatrix::zeros(3, 4).trace_of_product(&ComplexMatrix::zeros(3, 4)),
            Err(Error::Shape(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn eig_reconstructs(seed in any::<u64>(), n in 1usize..=8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_hermitian(&mut rng, n);
            let eig = a.eig().unwrap();

            let diff = eig.reconstruct().sub(a.as_matrix()).unwrap().frobenius_norm();
            prop_assert!(diff < 1e-8, "reconstruction error {diff}");

            let sum: f64 = eig.values.iter().sum();
            prop_assert!((sum - a.trace()).abs() < 1e-10);

            for w in eig.values.windows(2) {
                prop_assert!(w[0] >= w[1]);
            }
            for i in 0..n {
                for j in 0..n {
                    let ip = inner(&eig.vectors[i], &eig.vectors[j]);
                    let expected = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((ip - c(expected, 0.0)).norm() < 1e-10);
                }
                let av = a.as_matrix().apply(&eig.vectors[i]).unwrap();
                let tol = 1e-9 * (1.0 + eig.values[0].abs());
                for (x, y) in av.iter().zip(&eig.vectors[i]) {
                    prop_assert!((x - y * eig.values[i]).norm() < tol);
                }
            }
        }

        #[test]
        fn log_det_matches_lu(seed in any::<u64>(), n in 1usize..=5, scale in 0.0f64..3.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = HermitianMatrix::gram(&random_matrix(&mut rng, n, n));
            let direct = lu_det(&ComplexMatrix::identity(n).add(&a.as_matrix().scale(scale)).unwrap());
            prop_assert!(direct.im.abs() < 1e-9 * direct.re.abs().max(1.0));
            let ld = log_det_i_plus(&a, scale).unwrap();
            prop_assert!(ld >= 0.0);
            prop_assert!((ld - direct.re.ln()).abs() < 1e-9);
        }

        #[test]
        fn weyl_bound(seed in any::<u64>(), n in 1usize..=6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_hermitian(&mut rng, n);
            let b = random_hermitian(&mut rng, n);
            let lhs = a.add(&b).unwrap().lambda_max().unwrap();
            let rhs = a.lambda_max().unwrap() + b.lambda_max().unwrap();
            prop_assert!(lhs <= rhs + 1e-9);
        }
    }
}
