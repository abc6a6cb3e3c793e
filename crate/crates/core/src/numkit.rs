//! Dense complex linear algebra primitives.
//!
//! Everything downstream works on small dense matrices (a few hundred rows at
//! most), so the routines here favour robustness over asymptotic speed: a
//! cyclic Jacobi sweep for Hermitian spectra, Gram-Schmidt with a second
//! orthogonalization pass for isometries, and an SVD for numerical rank.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result, C64};

/// Default relative cut for [`svd_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn scalar(n: usize, c: C64) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c;
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries for {}x{}, got {}",
                rows * cols,
                rows,
                cols,
                data.len()
            )));
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(CMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    /// Real matrix from nested rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = d;
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

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, c: C64) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `(A + A*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// `(A - A*) / (2i)`, so that `A = H + iK` with `H`, `K` Hermitian.
    pub fn skew_hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] - self[(j, i)].conj()) * C64::new(0.0, -0.5)
        })
    }

    /// `Q* A Q`.
    pub fn congruence(&self, q: &CMatrix) -> Self {
        &(&q.adjoint() * self) * q
    }

    /// `A ⊕ B`.
    pub fn direct_sum(&self, other: &CMatrix) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)];
            }
        }
        m
    }

    /// `‖A - cI‖_F` minimized over scalars `c`, attained at `c = trace/n`.
    pub fn scalar_defect(&self) -> (C64, f64) {
        let n = self.rows;
        if n == 0 {
            return (C64::new(0.0, 0.0), 0.0);
        }
        let c = self.trace() / n as f64;
        let d = (self - &CMatrix::scalar(n, c)).frobenius_norm();
        (c, d)
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Mul<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.data[i * self.cols + l];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = &rhs.data[l * rhs.cols..(l + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Cyclic Jacobi on a Hermitian matrix stored row-major in `a` (`n×n`).
///
/// On return the diagonal of `a` holds the eigenvalues (unsorted) and, when
/// `vectors` is given, its columns hold the matching orthonormal eigenvectors.
/// Only the Hermitian structure is used: the strictly lower triangle is kept
/// consistent but never trusted independently.
pub(crate) fn jacobi_hermitian(a: &mut [C64], n: usize, mut vectors: Option<&mut [C64]>) {
    if let Some(v) = vectors.as_deref_mut() {
        v.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
        for i in 0..n {
            v[i * n + i] = C64::new(1.0, 0.0);
        }
    }
    if n < 2 {
        return;
    }
    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return;
    }
    let stop = (f64::EPSILON * f64::EPSILON) * total;
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q].norm_sqr();
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                if r < 1e-300 || r <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
                    a[p * n + q] = C64::new(0.0, 0.0);
                    a[q * n + p] = C64::new(0.0, 0.0);
                    continue;
                }
                let zeta = (aqq - app) / (2.0 * r);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let e = apq / r;
                let ec = e.conj();
                // J = [[c, s], [-s·conj(e), c·conj(e)]] on coordinates (p, q).
                let jqp = -ec * s;
                let jqq = ec * c;
                for i in 0..n {
                    let hip = a[i * n + p];
                    let hiq = a[i * n + q];
                    a[i * n + p] = hip * c + hiq * jqp;
                    a[i * n + q] = hip * s + hiq * jqq;
                }
                let (jqp_c, jqq_c) = (jqp.conj(), jqq.conj());
                for j in 0..n {
                    let hpj = a[p * n + j];
                    let hqj = a[q * n + j];
                    a[p * n + j] = hpj * c + hqj * jqp_c;
                    a[q * n + j] = hpj * s + hqj * jqq_c;
                }
                a[p * n + q] = C64::new(0.0, 0.0);
                a[q * n + p] = C64::new(0.0, 0.0);
                a[p * n + p] = C64::new(app - t * r, 0.0);
                a[q * n + q] = C64::new(aqq + t * r, 0.0);
                if let Some(v) = vectors.as_deref_mut() {
                    for i in 0..n {
                        let vip = v[i * n + p];
                        let viq = v[i * n + q];
                        v[i * n + p] = vip * c + viq * jqp;
                        v[i * n + q] = vip * s + viq * jqq;
                    }
                }
            }
        }
    }
}

fn check_finite(m: &CMatrix, what: &'static str) -> Result<()> {
    if m.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Eigenvalues of the Hermitian part of `h`, sorted descending.
///
/// `h` is symmetrized first. When `tol > 0`, inputs whose anti-Hermitian part
/// exceeds `tol·‖H‖_F` are rejected.
pub fn hermitian_eigenvalues(h: &CMatrix, tol: f64) -> Result<Vec<f64>> {
    if !h.is_square() {
        return Err(Error::Dimension(format!(
            "expected a square matrix, got {}x{}",
            h.rows, h.cols
        )));
    }
    check_finite(h, "Hermitian input")?;
    let sym = h.hermitian_part();
    if tol > 0.0 {
        let asym = (h - &sym).frobenius_norm();
        if asym > tol * h.frobenius_norm().max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidArgument(format!(
                "matrix is not Hermitian (asymmetry {asym:e})"
            )));
        }
    }
    let n = sym.rows;
    let mut a = sym.into_vec();
    jacobi_hermitian(&mut a, n, None);
    let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    Ok(ev)
}

/// Eigenpairs of a Hermitian matrix, eigenvalues descending; column `j` of the
/// returned matrix is the eigenvector of the `j`-th value.
pub fn hermitian_eigen(h: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !h.is_square() {
        return Err(Error::Dimension("expected a square matrix".into()));
    }
    check_finite(h, "Hermitian input")?;
    let n = h.rows;
    let mut a = h.hermitian_part().into_vec();
    let mut v = vec![C64::new(0.0, 0.0); n * n];
    jacobi_hermitian(&mut a, n, Some(&mut v));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[y * n + y].re.total_cmp(&a[x * n + x].re));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[i * n + order[j]]);
    Ok((values, vectors))
}

/// Singular values, descending.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    check_finite(m, "matrix")?;
    if m.rows == 0 || m.cols == 0 {
        return Ok(Vec::new());
    }
    let mut sv: Vec<f64> = m.to_nalgebra().singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok(sv)
}

/// Number of singular values above `tol·σ_max`.
pub fn svd_rank(m: &CMatrix, tol: f64) -> Result<usize> {
    let sv = singular_values(m)?;
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol * smax).count())
}

/// Determinant by LU with partial pivoting.
pub fn determinant(m: &CMatrix) -> Result<C64> {
    if !m.is_square() {
        return Err(Error::Dimension("determinant of a non-square matrix".into()));
    }
    let n = m.rows;
    let mut a = m.data.clone();
    let mut det = C64::new(1.0, 0.0);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
            .unwrap();
        if a[piv * n + col].norm() == 0.0 {
            return Ok(C64::new(0.0, 0.0));
        }
        if piv != col {
            for j in 0..n {
                a.swap(piv * n + j, col * n + j);
            }
            det = -det;
        }
        let d = a[col * n + col];
        det *= d;
        for i in col + 1..n {
            let f = a[i * n + col] / d;
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for j in col..n {
                let v = a[col * n + j];
                a[i * n + j] -= f * v;
            }
        }
    }
    Ok(det)
}

/// An `n×k` matrix with orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    matrix: CMatrix,
    orthonormality_defect: f64,
}

/// `‖Q*Q − I‖_F`.
pub fn orthonormality_defect(q: &CMatrix) -> f64 {
    let g = &q.adjoint() * q;
    (&g - &CMatrix::identity(q.cols)).frobenius_norm()
}

impl Isometry {
    /// Accepts `q` if its orthonormality defect is at most `tol`.
    pub fn new(q: CMatrix, tol: f64) -> Result<Self> {
        check_finite(&q, "isometry")?;
        if q.cols == 0 || q.cols > q.rows {
            return Err(Error::Dimension(format!(
                "isometry must be n×k with 1 ≤ k ≤ n, got {}x{}",
                q.rows, q.cols
            )));
        }
        let d = orthonormality_defect(&q);
        if d > tol {
            return Err(Error::NotIsometry { defect: d });
        }
        Ok(Isometry {
            matrix: q,
            orthonormality_defect: d,
        })
    }

    /// Orthonormalizes the columns of `m` (Gram-Schmidt, two passes).
    pub fn orthonormalize(m: &CMatrix) -> Result<Self> {
        check_finite(m, "isometry")?;
        let (n, k) = (m.rows, m.cols);
        if k == 0 || k > n {
            return Err(Error::Dimension(format!("cannot orthonormalize {n}x{k} columns")));
        }
        let scale = m.frobenius_norm();
        let mut cols: Vec<Vec<C64>> = (0..k).map(|j| m.column(j)).collect();
        for j in 0..k {
            for _pass in 0..2 {
                for i in 0..j {
                    let (done, rest) = cols.split_at_mut(j);
                    let qi = &done[i];
                    let v = &mut rest[0];
                    let proj: C64 = qi.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                    for (x, y) in v.iter_mut().zip(qi) {
                        *x -= proj * y;
                    }
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm <= 1e-13 * scale || norm == 0.0 {
                return Err(Error::Numerical("columns are linearly dependent".into()));
            }
            cols[j].iter_mut().for_each(|z| *z /= norm);
        }
        let q = CMatrix::from_fn(n, k, |i, j| cols[j][i]);
        let d = orthonormality_defect(&q);
        Ok(Isometry {
            matrix: q,
            orthonormality_defect: d,
        })
    }

    /// The columns `e_{i_1}, …, e_{i_k}` of the `n×n` identity.
    pub fn coordinate(n: usize, indices: &[usize]) -> Result<Self> {
        if indices.iter().any(|&i| i >= n) {
            return Err(Error::Dimension("coordinate index out of range".into()));
        }
        let q = CMatrix::from_fn(n, indices.len(), |i, j| {
            C64::new(if indices[j] == i { 1.0 } else { 0.0 }, 0.0)
        });
        Self::new(q, 1e-12)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.rows
    }

    pub fn k(&self) -> usize {
        self.matrix.cols
    }

    pub fn orthonormality_defect(&self) -> f64 {
        self.orthonormality_defect
    }
}

/// Standard complex Gaussians keyed by `(seed, stream)`.
///
/// Each stream is an independent ChaCha8 keystream, so sample `i` of a batch
/// can be regenerated without touching samples `0..i`.
pub struct GaussianStream {
    rng: ChaCha8Rng,
}

impl GaussianStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        GaussianStream { rng }
    }

    fn unit_open(&mut self) -> f64 {
        // (0, 1]
        ((self.rng.next_u64() >> 11) as f64 + 1.0) * (1.0 / (1u64 << 53) as f64)
    }

    /// One complex sample with `E|z|² = 1` (Box-Muller).
    pub fn next_complex(&mut self) -> C64 {
        let u1 = self.unit_open();
        let u2 = self.unit_open();
        let r = (-2.0 * u1.ln()).sqrt() * std::f64::consts::FRAC_1_SQRT_2;
        let phi = 2.0 * std::f64::consts::PI * u2;
        C64::new(r * phi.cos(), r * phi.sin())
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| self.next_complex())
    }
}

/// Seeded random `n×k` isometry (QR of a complex Gaussian matrix).
pub fn random_isometry(n: usize, k: usize, seed: u64) -> Result<Isometry> {
    random_isometry_stream(n, k, seed, 0)
}

/// Random isometry from stream `stream` of `seed`; used for per-sample seeding.
pub fn random_isometry_stream(n: usize, k: usize, seed: u64, stream: u64) -> Result<Isometry> {
    if k == 0 || k > n {
        return Err(Error::Dimension(format!(
            "random isometry needs 1 ≤ k ≤ n, got n={n}, k={k}"
        )));
    }
    let mut g = GaussianStream::new(seed, stream);
    loop {
        let m = g.gaussian_matrix(n, k);
        // A rank-deficient Gaussian draw has probability zero; redraw if it happens.
        if let Ok(q) = Isometry::orthonormalize(&m) {
            return Ok(q);
        }
    }
}

/// Random unitary `n×n` matrix.
pub fn random_unitary(n: usize, seed: u64) -> CMatrix {
    random_isometry(n, n, seed).expect("n ≥ 1").into_matrix()
}
