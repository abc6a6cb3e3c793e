//! Matrix polynomials `L(λ) = Σ_j A_j λ^j` and the structural transforms
//! applied to them.

use nalgebra::{DMatrix, Schur};

use crate::numkit::{CMatrix, Isometry};
use crate::{Error, Result, C64};

/// Coefficients whose norm falls below this fraction of the total coefficient
/// mass are treated as exact zeros when a transform can lower the degree.
pub const ZERO_REL: f64 = 1e-14;

/// `n×n` matrix polynomial with coefficients `A_0, …, A_m` (index = power).
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPolynomial {
    n: usize,
    coeffs: Vec<CMatrix>,
    degree_drop: usize,
}

impl MatrixPolynomial {
    /// Validated constructor: coefficients square, equal size, finite, with a
    /// nonzero leading coefficient.
    pub fn new(coeffs: Vec<CMatrix>) -> Result<Self> {
        let n = Self::check_shapes(&coeffs)?;
        if coeffs.last().unwrap().frobenius_norm() == 0.0 {
            return Err(Error::ZeroLeading);
        }
        Ok(MatrixPolynomial {
            n,
            coeffs,
            degree_drop: 0,
        })
    }

    /// The pencil `Iλ − A`.
    pub fn pencil_from_matrix(a: &CMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension("pencil needs a square matrix".into()));
        }
        Self::new(vec![a.scale(C64::new(-1.0, 0.0)), CMatrix::identity(a.rows())])
    }

    fn check_shapes(coeffs: &[CMatrix]) -> Result<usize> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::InvalidArgument("polynomial needs at least one coefficient".into()))?;
        let n = first.rows();
        if n == 0 {
            return Err(Error::Dimension("empty coefficient matrix".into()));
        }
        for (j, a) in coeffs.iter().enumerate() {
            if a.rows() != n || a.cols() != n {
                return Err(Error::Dimension(format!(
                    "coefficient {j} is {}x{}, expected {n}x{n}",
                    a.rows(),
                    a.cols()
                )));
            }
            if !a.is_finite() {
                return Err(Error::NonFinite("polynomial coefficient"));
            }
        }
        Ok(n)
    }

    /// Drops numerically vanishing top coefficients, keeping at least `A_0`,
    /// and records how many were removed.
    fn trimmed(coeffs: Vec<CMatrix>, inherited_drop: usize) -> Self {
        let n = coeffs[0].rows();
        let mass: f64 = coeffs.iter().map(CMatrix::frobenius_norm).sum();
        let mut coeffs = coeffs;
        let before = coeffs.len();
        while coeffs.len() > 1 && coeffs.last().unwrap().frobenius_norm() <= ZERO_REL * mass {
            coeffs.pop();
        }
        if coeffs.len() == 1 && coeffs[0].frobenius_norm() <= ZERO_REL * mass {
            coeffs[0] = CMatrix::zeros(n, n);
        }
        let dropped = before - coeffs.len();
        MatrixPolynomial {
            n,
            coeffs,
            degree_drop: inherited_drop + dropped,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Effective degree (after any recorded shrink).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// How many leading coefficients vanished in the transform that produced
    /// this polynomial (0 for validated input).
    pub fn degree_drop(&self) -> usize {
        self.degree_drop
    }

    pub fn coeffs(&self) -> &[CMatrix] {
        &self.coeffs
    }

    pub fn coefficient(&self, j: usize) -> &CMatrix {
        &self.coeffs[j]
    }

    pub fn leading(&self) -> &CMatrix {
        self.coeffs.last().unwrap()
    }

    /// True when every coefficient is zero (only possible as a transform result).
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|a| a.frobenius_norm() == 0.0)
    }

    /// Horner evaluation `Σ A_j μ^j`.
    pub fn evaluate(&self, mu: C64) -> CMatrix {
        let mut acc = self.leading().clone();
        for a in self.coeffs.iter().rev().skip(1) {
            acc = &acc.scale(mu) + a;
        }
        acc
    }

    /// `s(μ) = Σ_j ‖A_j‖_F · max(1, |μ|)^j`, the natural magnitude of `L(μ)`.
    pub fn magnitude(&self, mu: C64) -> f64 {
        let r = mu.norm().max(1.0);
        let mut p = 1.0;
        let mut s = 0.0;
        for a in &self.coeffs {
            s += a.frobenius_norm() * p;
            p *= r;
        }
        s
    }

    /// Coefficients of `L(λ + α)`.
    pub fn shift(&self, alpha: C64) -> Self {
        let m = self.degree();
        let mut out: Vec<CMatrix> = vec![CMatrix::zeros(self.n, self.n); m + 1];
        // B_i = Σ_{j ≥ i} C(j, i) α^{j−i} A_j
        for (j, a) in self.coeffs.iter().enumerate() {
            let mut binom = 1.0f64;
            let mut apow = C64::new(1.0, 0.0);
            for i in (0..=j).rev() {
                // term for power i: C(j, i) α^{j−i}
                out[i] = &out[i] + &a.scale(apow * binom);
                apow *= alpha;
                let taken = (j - i) as f64 + 1.0;
                binom = binom * (i as f64) / taken;
            }
        }
        MatrixPolynomial {
            n: self.n,
            coeffs: out,
            degree_drop: self.degree_drop,
        }
    }

    /// `Σ_j A_{m−j} λ^j`; the degree shrinks when `A_0` vanishes.
    pub fn reverse(&self) -> Self {
        let coeffs: Vec<CMatrix> = self.coeffs.iter().rev().cloned().collect();
        Self::trimmed(coeffs, 0)
    }

    /// `Q* L(λ) Q`.
    pub fn compress(&self, q: &Isometry) -> Result<Self> {
        if q.n() != self.n {
            return Err(Error::Dimension(format!(
                "isometry has {} rows, polynomial size is {}",
                q.n(),
                self.n
            )));
        }
        let coeffs = self.coeffs.iter().map(|a| a.congruence(q.matrix())).collect();
        Ok(Self::trimmed(coeffs, 0))
    }

    /// Entries `b_ij(λ) = q_i* L(λ) q_j` as scalar polynomials, trimmed with
    /// the same relative zero threshold as [`compress`](Self::compress).
    pub fn scalar_entries(&self, q: &Isometry) -> Result<Vec<Vec<ScalarPoly>>> {
        if q.n() != self.n {
            return Err(Error::Dimension(format!(
                "isometry has {} rows, polynomial size is {}",
                q.n(),
                self.n
            )));
        }
        let k = q.k();
        let compressed: Vec<CMatrix> = self.coeffs.iter().map(|a| a.congruence(q.matrix())).collect();
        let mass: f64 = self.coeffs.iter().map(CMatrix::frobenius_norm).sum();
        let cut = ZERO_REL * mass;
        Ok((0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let c = compressed.iter().map(|b| b[(i, j)]).collect();
                        ScalarPoly::with_cutoff(c, cut)
                    })
                    .collect()
            })
            .collect())
    }

    /// Block companion pencil `Aλ − B` of size `mn`.
    ///
    /// `A = diag(I, …, I, A_m)`; `B` carries identities on the block
    /// superdiagonal and `−A_0, …, −A_{m−1}` in its last block row, so that
    /// `det(Aμ − B) = det L(μ)`.
    pub fn companion(&self) -> Result<Pencil> {
        let m = self.degree();
        if m == 0 {
            return Err(Error::Degree);
        }
        let n = self.n;
        let big = m * n;
        let mut a = CMatrix::identity(big);
        let mut b = CMatrix::zeros(big, big);
        let last = (m - 1) * n;
        for i in 0..n {
            for j in 0..n {
                a[(last + i, last + j)] = self.leading()[(i, j)];
            }
        }
        for blk in 0..m - 1 {
            for i in 0..n {
                b[(blk * n + i, (blk + 1) * n + i)] = C64::new(1.0, 0.0);
            }
        }
        for (blk, coeff) in self.coeffs[..m].iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    b[(last + i, blk * n + j)] = -coeff[(i, j)];
                }
            }
        }
        Ok(Pencil { a, b })
    }

    /// `L ⊕ L ⊕ … ⊕ L` (`times` copies).
    pub fn direct_sum_power(&self, times: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                let mut acc = a.clone();
                for _ in 1..times {
                    acc = acc.direct_sum(a);
                }
                acc
            })
            .collect();
        MatrixPolynomial {
            n: self.n * times,
            coeffs,
            degree_drop: self.degree_drop,
        }
    }

    /// `U* A_j U` for every coefficient.
    pub fn unitary_similarity(&self, u: &CMatrix) -> Self {
        MatrixPolynomial {
            n: self.n,
            coeffs: self.coeffs.iter().map(|a| a.congruence(u)).collect(),
            degree_drop: self.degree_drop,
        }
    }

    pub fn scaled(&self, c: C64) -> Self {
        MatrixPolynomial {
            n: self.n,
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
            degree_drop: self.degree_drop,
        }
    }
}

/// Linear pencil `Aλ − B`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pencil {
    pub a: CMatrix,
    pub b: CMatrix,
}

impl Pencil {
    pub fn evaluate(&self, mu: C64) -> CMatrix {
        &self.a.scale(mu) - &self.b
    }

    /// The pencil as a degree-one matrix polynomial `[−B, A]`.
    pub fn to_polynomial(&self) -> Result<MatrixPolynomial> {
        MatrixPolynomial::new(vec![self.b.scale(C64::new(-1.0, 0.0)), self.a.clone()])
    }
}

/// Scalar polynomial with ascending coefficients; the zero polynomial has no
/// coefficients at all.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarPoly {
    coeffs: Vec<C64>,
}

impl ScalarPoly {
    /// Trims exact trailing zeros.
    pub fn new(coeffs: Vec<C64>) -> Self {
        Self::with_cutoff(coeffs, 0.0)
    }

    /// Trims trailing coefficients with modulus `≤ cutoff`.
    pub fn with_cutoff(mut coeffs: Vec<C64>, cutoff: f64) -> Self {
        while coeffs.last().is_some_and(|c| c.norm() <= cutoff) {
            coeffs.pop();
        }
        ScalarPoly { coeffs }
    }

    pub fn zero() -> Self {
        ScalarPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Coefficient of `λ^l` (zero beyond the degree).
    pub fn coefficient(&self, l: usize) -> C64 {
        self.coeffs.get(l).copied().unwrap_or_default()
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    fn derivative_eval(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (l, &c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * z + c * l as f64;
        }
        acc
    }

    /// `Σ_l |b_l| · max(1, |z|)^l`, the scale against which `|b(z)|` is judged.
    pub fn magnitude(&self, z: C64) -> f64 {
        let r = z.norm().max(1.0);
        let mut p = 1.0;
        let mut s = 0.0;
        for c in &self.coeffs {
            s += c.norm() * p;
            p *= r;
        }
        s
    }

    /// Roots as eigenvalues of the Frobenius companion matrix, each polished
    /// by a few Newton steps. Constants (and the zero polynomial) have none.
    pub fn roots(&self) -> Result<Vec<C64>> {
        let d = match self.degree() {
            None | Some(0) => return Ok(Vec::new()),
            Some(d) => d,
        };
        let lead = self.coeffs[d];
        let mut comp = DMatrix::<C64>::zeros(d, d);
        for i in 1..d {
            comp[(i, i - 1)] = C64::new(1.0, 0.0);
        }
        for i in 0..d {
            comp[(i, d - 1)] = -self.coeffs[i] / lead;
        }
        let eig = Schur::try_new(comp, f64::EPSILON, 10_000)
            .and_then(|s| s.eigenvalues())
            .ok_or_else(|| Error::Numerical("companion eigenvalue iteration failed".into()))?;
        Ok(eig.iter().map(|&z| self.polish(z)).collect())
    }

    fn polish(&self, mut z: C64) -> C64 {
        let mut best = self.eval(z).norm();
        for _ in 0..4 {
            let d = self.derivative_eval(z);
            if d.norm() == 0.0 {
                break;
            }
            let cand = z - self.eval(z) / d;
            let r = self.eval(cand).norm();
            if r.is_nan() || r >= best {
                break;
            }
            best = r;
            z = cand;
        }
        z
    }
}
