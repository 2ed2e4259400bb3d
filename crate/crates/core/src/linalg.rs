//! Dense complex matrices, a cyclic Jacobi eigensolver for Hermitian
//! matrices, and power-iteration operator norms.
//!
//! Storage is column-major: entry `(i, j)` lives at `data[j * rows + i]`, so a
//! column is a contiguous slice. This matches the operator convention where
//! column `j` is the image of the `j`-th basis vector.

use num_complex::Complex64;
use serde::Serialize;

use crate::par::Exec;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is not Hermitian (max |H - H*| = {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Build from column vectors of equal length.
    pub fn from_columns(columns: Vec<Vec<Complex64>>) -> Result<Self, LinalgError> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(LinalgError::DimensionMismatch("columns of unequal length".into()));
        }
        Ok(CMatrix { rows, cols, data: columns.into_iter().flatten().collect() })
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
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

    /// Column-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn col(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Leading `rows × cols` block.
    pub fn block(&self, rows: usize, cols: usize) -> Self {
        assert!(rows <= self.rows && cols <= self.cols, "block exceeds matrix");
        Self::from_fn(rows, cols, |i, j| self[(i, j)])
    }

    pub fn scale(&self, c: Complex64) -> Self {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(CMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(CMatrix { rows: self.rows, cols: self.cols, data })
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// `self · other`, one output column per task.
    pub fn matmul(&self, other: &Self, exec: Exec) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        if self.rows == 0 {
            return Ok(out);
        }
        exec.for_each_chunk(&mut out.data, self.rows, |j, col| {
            for (k, b) in other.col(j).iter().enumerate() {
                if *b == ZERO {
                    continue;
                }
                for (o, a) in col.iter_mut().zip(self.col(k)) {
                    *o += a * b;
                }
            }
        });
        Ok(out)
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        let mut y = vec![ZERO; self.rows];
        for (j, xj) in x.iter().enumerate() {
            if *xj == ZERO {
                continue;
            }
            for (yi, a) in y.iter_mut().zip(self.col(j)) {
                *yi += a * xj;
            }
        }
        y
    }

    /// `self* · x` without forming the adjoint.
    pub fn adjoint_matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.rows, "adjoint matvec dimension mismatch");
        (0..self.cols).map(|j| self.col(j).iter().zip(x).map(|(a, xi)| a.conj() * xi).sum()).collect()
    }

    /// `self* · self`, Hermitian by construction.
    pub fn gram(&self, exec: Exec) -> Self {
        let n = self.cols;
        let entries = exec.map(n, |j| {
            (0..n)
                .map(|i| self.col(i).iter().zip(self.col(j)).map(|(a, b)| a.conj() * b).sum::<Complex64>())
                .collect::<Vec<_>>()
        });
        let mut g = Self::from_columns(entries).expect("square gram");
        g.symmetrize();
        g
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// `max |H_ij − conj(H_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut d = 0.0_f64;
        for j in 0..n {
            for i in 0..=j {
                d = d.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        d
    }

    /// Replace by `(H + H*)/2`.
    pub fn symmetrize(&mut self) {
        assert!(self.is_square(), "symmetrize needs a square matrix");
        let n = self.rows;
        for j in 0..n {
            self[(j, j)] = Complex64::new(self[(j, j)].re, 0.0);
            for i in 0..j {
                let avg = 0.5 * (self[(i, j)] + self[(j, i)].conj());
                self[(i, j)] = avg;
                self[(j, i)] = avg.conj();
            }
        }
    }

    /// Operator 2-norm estimate by power iteration on `A*A`.
    pub fn spectral_norm(&self) -> NormEstimate {
        self.spectral_norm_from(None, &PowerIteration::default())
    }

    /// Power iteration on `A*A` from an optional start vector. The estimate
    /// `‖Ax‖/‖x‖` is always a lower bound on `‖A‖`.
    pub fn spectral_norm_from(&self, start: Option<&[Complex64]>, opts: &PowerIteration) -> NormEstimate {
        let n = self.cols;
        if n == 0 || self.rows == 0 {
            return NormEstimate { value: 0.0, converged: true, iterations: 0, vector: vec![ZERO; n] };
        }
        let mut x: Vec<Complex64> = match start {
            Some(s) if s.len() == n && vec_norm(s) > 0.0 => s.to_vec(),
            // A deterministic start with every component nonzero.
            _ => (0..n).map(|i| Complex64::new(1.0, 0.25 * ((i % 7) as f64 - 3.0)) / (1.0 + i as f64)).collect(),
        };
        normalize(&mut x);
        let mut value = 0.0;
        for it in 1..=opts.max_iter {
            let y = self.matvec(&x);
            let est = vec_norm(&y);
            let mut z = self.adjoint_matvec(&y);
            let zn = vec_norm(&z);
            if zn == 0.0 {
                return NormEstimate { value: est, converged: true, iterations: it, vector: x };
            }
            z.iter_mut().for_each(|v| *v /= zn);
            let done = (est - value).abs() <= opts.rel_tol * est;
            value = est;
            x = z;
            if done {
                return NormEstimate { value, converged: true, iterations: it, vector: x };
            }
        }
        NormEstimate { value, converged: false, iterations: opts.max_iter, vector: x }
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

pub fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(x: &mut [Complex64]) {
    let n = vec_norm(x);
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration {
    pub max_iter: usize,
    pub rel_tol: f64,
}

impl Default for PowerIteration {
    fn default() -> Self {
        PowerIteration { max_iter: 2000, rel_tol: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Last right singular vector estimate, useful as a warm start.
    pub vector: Vec<Complex64>,
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: CMatrix,
    pub sweeps: usize,
}

/// Hermitian input tolerance, relative to the largest entry.
const HERMITIAN_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Sorted eigenvalues of a Hermitian matrix.
pub fn hermitian_spectrum(h: &CMatrix) -> Result<Vec<f64>, LinalgError> {
    hermitian_eigen(h).map(|e| e.values)
}

/// Cyclic Jacobi with a threshold sweep. Each rotation first phases the pivot
/// to a real number and then applies the real symmetric rotation that
/// annihilates it.
pub fn hermitian_eigen(h: &CMatrix) -> Result<HermitianEigen, LinalgError> {
    if !h.is_square() {
        return Err(LinalgError::NotSquare { rows: h.rows, cols: h.cols });
    }
    let defect = h.hermitian_defect();
    if defect > HERMITIAN_TOL * h.max_abs().max(1.0) {
        return Err(LinalgError::NotHermitian { defect });
    }
    let n = h.rows;
    let mut a = h.clone();
    a.symmetrize();
    let mut q = CMatrix::identity(n);
    let total = a.frobenius_norm();
    let mut sweeps = 0;
    if total > 0.0 {
        while sweeps < MAX_SWEEPS {
            let off: f64 =
                (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).map(|(i, j)| a[(i, j)].norm_sqr()).sum::<f64>().sqrt();
            if off <= 1e-15 * total {
                break;
            }
            sweeps += 1;
            // Early sweeps skip small pivots; later ones rotate everything.
            let threshold = if sweeps < 4 { 0.2 * off / (n * n) as f64 } else { 0.0 };
            for p in 0..n {
                for qi in p + 1..n {
                    let apq = a[(p, qi)];
                    let mag = apq.norm();
                    if mag == 0.0 || mag <= threshold {
                        continue;
                    }
                    let app = a[(p, p)].re;
                    let aqq = a[(qi, qi)].re;
                    if sweeps > 4 && mag < 1e-300_f64.max(f64::EPSILON * 1e-3 * (app.abs() + aqq.abs())) {
                        a[(p, qi)] = ZERO;
                        a[(qi, p)] = ZERO;
                        continue;
                    }
                    let phase = apq / mag;
                    let tau = (aqq - app) / (2.0 * mag);
                    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let e = phase.conj();
                    let vpp = Complex64::new(c, 0.0);
                    let vpq = Complex64::new(s, 0.0);
                    let vqp = -s * e;
                    let vqq = c * e;
                    rotate(&mut a, &mut q, p, qi, vpp, vpq, vqp, vqq);
                }
            }
        }
    }
    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a[(i, i)].re, i)).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let values = pairs.iter().map(|p| p.0).collect();
    let vectors = CMatrix::from_fn(n, n, |i, k| q[(i, pairs[k].1)]);
    Ok(HermitianEigen { values, vectors, sweeps })
}

/// `A ← V* A V`, `Q ← Q V` for the unitary `V` acting on coordinates `p, q`.
#[allow(clippy::too_many_arguments)]
fn rotate(
    a: &mut CMatrix,
    qm: &mut CMatrix,
    p: usize,
    q: usize,
    vpp: Complex64,
    vpq: Complex64,
    vqp: Complex64,
    vqq: Complex64,
) {
    let n = a.rows;
    for m in [&mut *a, &mut *qm] {
        for k in 0..n {
            let xp = m[(k, p)];
            let xq = m[(k, q)];
            m[(k, p)] = xp * vpp + xq * vqp;
            m[(k, q)] = xp * vpq + xq * vqq;
        }
    }
    for k in 0..n {
        let xp = a[(p, k)];
        let xq = a[(q, k)];
        a[(p, k)] = vpp.conj() * xp + vqp.conj() * xq;
        a[(q, k)] = vpq.conj() * xp + vqq.conj() * xq;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}
