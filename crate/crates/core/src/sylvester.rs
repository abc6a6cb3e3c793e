//! Generalized Sylvester matrices of the compressed entries `b_ij(λ) = q_i* L(λ) q_j`
//! and certified common roots.
//!
//! `μ ∈ Λ_k(L)` exactly when some isometry `Q` makes every `b_ij` vanish at
//! `μ`, so common roots of the `k²` entries are members, and the rank deficit
//! of the stacked Sylvester matrix measures the degree of their GCD.

use nalgebra::{DMatrix, DVector};

use crate::exec::Exec;
use crate::matpoly::{MatrixPolynomial, ScalarPoly};
use crate::numkit::{self, random_isometry_stream, CMatrix, Isometry, DEFAULT_RANK_TOL};
use crate::{Error, Result, C64};

/// Stacked Sylvester matrix of the nonzero compressed entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SylvesterRecord {
    /// Largest entry degree.
    pub sigma: usize,
    /// Largest degree among the entries other than the lead one (0 if none).
    pub tau: usize,
    pub matrix: CMatrix,
    pub rank: usize,
    /// `sigma + tau − rank`: the degree of the common divisor.
    pub delta: usize,
    /// Entry of degree `sigma` that fills the first band.
    pub lead_index: (usize, usize),
    /// Entries in the order their bands are stacked (lead first).
    pub block_order: Vec<(usize, usize)>,
}

/// Band order: the lead entry, then diagonal entries, then off-diagonal ones,
/// each group in index order. Zero entries are skipped.
fn block_order(polys: &[Vec<ScalarPoly>], lead: (usize, usize)) -> Vec<(usize, usize)> {
    let mut order = vec![lead];
    for (i, row) in polys.iter().enumerate() {
        if (i, i) != lead && !row[i].is_zero() {
            order.push((i, i));
        }
    }
    for (i, row) in polys.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            if i != j && (i, j) != lead && !p.is_zero() {
                order.push((i, j));
            }
        }
    }
    order
}

/// Builds the stacked band matrix: `tau` shifted copies of the lead entry's
/// coefficients (highest power first), then `sigma` shifted copies of every
/// other nonzero entry padded to degree `tau`.
pub fn build_sylvester(polys: &[Vec<ScalarPoly>]) -> Result<SylvesterRecord> {
    let mut lead: Option<((usize, usize), usize)> = None;
    for (i, row) in polys.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            if let Some(d) = p.degree() {
                if lead.is_none_or(|(_, best)| d > best) {
                    lead = Some(((i, j), d));
                }
            }
        }
    }
    let (lead_index, sigma) = lead.ok_or(Error::DegenerateAllZero)?;
    let order = block_order(polys, lead_index);
    let tau = order[1..]
        .iter()
        .map(|&(i, j)| polys[i][j].degree().unwrap())
        .max()
        .unwrap_or(0);
    let cols = sigma + tau;
    let rows = tau + (order.len() - 1) * sigma;
    let mut matrix = CMatrix::zeros(rows, cols);
    let lead_poly = &polys[lead_index.0][lead_index.1];
    for r in 0..tau {
        for l in 0..=sigma {
            matrix[(r, r + l)] = lead_poly.coefficient(sigma - l);
        }
    }
    for (b, &(i, j)) in order[1..].iter().enumerate() {
        let p = &polys[i][j];
        let base = tau + b * sigma;
        for r in 0..sigma {
            for l in 0..=tau {
                matrix[(base + r, r + l)] = p.coefficient(tau - l);
            }
        }
    }
    let rank = numkit::svd_rank(&matrix, DEFAULT_RANK_TOL)?;
    Ok(SylvesterRecord {
        sigma,
        tau,
        matrix,
        rank,
        delta: cols - rank,
        lead_index,
        block_order: order,
    })
}

/// Outcome of a common-root search for one isometry.
#[derive(Debug, Clone, PartialEq)]
pub enum CommonRoots {
    /// Certified roots (possibly none).
    Roots(Vec<C64>),
    /// Every compressed entry vanishes identically: every complex number qualifies.
    AllOfC,
}

impl CommonRoots {
    pub fn roots(&self) -> &[C64] {
        match self {
            CommonRoots::Roots(r) => r,
            CommonRoots::AllOfC => &[],
        }
    }
}

pub const DEFAULT_ROOT_TOL: f64 = 1e-8;

/// Roots shared by all entries of `Q* L(λ) Q`.
///
/// Candidates are the roots of the lowest-degree nonzero entry; a candidate
/// `ρ` is kept when every entry satisfies `|b_ij(ρ)| ≤ tol·Σ_l |b_ij^{(l)}| max(1,|ρ|)^l`
/// and `‖Q* L(ρ) Q‖_F ≤ tol·s(ρ)`.
pub fn common_roots(l: &MatrixPolynomial, k: usize, q: &Isometry, tol: f64) -> Result<CommonRoots> {
    if q.k() != k {
        return Err(Error::Dimension(format!(
            "isometry has {} columns, expected k = {k}",
            q.k()
        )));
    }
    let entries = l.scalar_entries(q)?;
    let flat: Vec<&ScalarPoly> = entries.iter().flatten().collect();
    let Some(base) = flat.iter().filter(|p| !p.is_zero()).min_by_key(|p| p.degree().unwrap()) else {
        return Ok(CommonRoots::AllOfC);
    };
    let mut roots: Vec<C64> = Vec::new();
    for rho in base.roots()? {
        if roots.iter().any(|r| (r - rho).norm() <= 1e-12 * (1.0 + rho.norm())) {
            continue;
        }
        let entries_ok = flat.iter().all(|p| p.eval(rho).norm() <= tol * p.magnitude(rho));
        if !entries_ok {
            continue;
        }
        let residual = l.evaluate(rho).congruence(q.matrix()).frobenius_norm();
        if residual <= tol * l.magnitude(rho) {
            roots.push(rho);
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(CommonRoots::Roots(roots))
}

/// A certified member found by the probe, with the isometry that certifies it.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeHit {
    pub point: C64,
    pub isometry: Isometry,
    /// `None` for coordinate isometries, otherwise the random sample index.
    pub sample: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub hits: Vec<ProbeHit>,
    /// An isometry whose compression vanishes identically, if one was met.
    pub all_of_c: Option<Isometry>,
    pub samples: usize,
}

impl ProbeReport {
    /// `false` does not prove emptiness.
    pub fn found(&self) -> bool {
        !self.hits.is_empty() || self.all_of_c.is_some()
    }
}

const MAX_COORDINATE_SUBSETS: usize = 64;
const NEWTON_STEPS: usize = 60;

fn binomial(n: usize, k: usize) -> usize {
    let mut r: usize = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

fn coordinate_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if binomial(n, k) > MAX_COORDINATE_SUBSETS {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Searches for members of `Λ_k(L)`: first through coordinate isometries
/// (when there are few), then through `n_samples` seeded random isometries,
/// each pulled towards a solution of `Q* L(ρ) Q = 0` by Gauss–Newton steps
/// before its common roots are certified.
pub fn nonemptiness_probe(
    l: &MatrixPolynomial,
    k: usize,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<ProbeReport> {
    nonemptiness_probe_with(l, k, n_samples, seed, tol, Exec::default())
}

pub fn nonemptiness_probe_with(
    l: &MatrixPolynomial,
    k: usize,
    n_samples: usize,
    seed: u64,
    tol: f64,
    exec: Exec,
) -> Result<ProbeReport> {
    let n = l.n();
    if k == 0 || k > n {
        return Err(Error::RankOutOfRange { k, n });
    }
    if n_samples == 0 {
        return Err(Error::InvalidArgument("probe needs at least one sample".into()));
    }
    let mut report = ProbeReport {
        hits: Vec::new(),
        all_of_c: None,
        samples: n_samples,
    };
    for subset in coordinate_subsets(n, k) {
        let q = Isometry::coordinate(n, &subset)?;
        record(&mut report, l, k, q, None, tol)?;
    }
    let refined: Vec<Result<Isometry>> = exec.map_indexed(n_samples, |s| {
        let q = random_isometry_stream(n, k, seed, s as u64)?;
        Ok(refine_towards_member(l, q))
    });
    for (s, q) in refined.into_iter().enumerate() {
        record(&mut report, l, k, q?, Some(s), tol)?;
    }
    Ok(report)
}

fn record(
    report: &mut ProbeReport,
    l: &MatrixPolynomial,
    k: usize,
    q: Isometry,
    sample: Option<usize>,
    tol: f64,
) -> Result<()> {
    match common_roots(l, k, &q, tol)? {
        CommonRoots::AllOfC => {
            if report.all_of_c.is_none() {
                report.all_of_c = Some(q);
            }
        }
        CommonRoots::Roots(roots) => {
            for point in roots {
                report.hits.push(ProbeHit {
                    point,
                    isometry: q.clone(),
                    sample,
                });
            }
        }
    }
    Ok(())
}

/// Gauss–Newton on `F(Q, ρ) = Q* L(ρ) Q` over the real parameters of `Q` and
/// `ρ`, with minimum-norm steps and re-orthonormalization after each step.
/// Starts from the best root of the first compressed entry.
fn refine_towards_member(l: &MatrixPolynomial, q0: Isometry) -> Isometry {
    let n = l.n();
    let k = q0.k();
    let Ok(entries) = l.scalar_entries(&q0) else {
        return q0;
    };
    let residual = |q: &CMatrix, rho: C64| l.evaluate(rho).congruence(q).frobenius_norm() / l.magnitude(rho);
    let start = entries[0][0]
        .roots()
        .unwrap_or_default()
        .into_iter()
        .min_by(|a, b| residual(q0.matrix(), *a).total_cmp(&residual(q0.matrix(), *b)));
    let Some(mut rho) = start else {
        return q0;
    };
    let mut q = q0.matrix().clone();
    let derivative = derivative_poly(l);
    let rows = 2 * k * k;
    let cols = 2 * n * k + 2;
    let mut best = (residual(&q, rho), q.clone());
    for _ in 0..NEWTON_STEPS {
        let lm = l.evaluate(rho);
        let lq = &lm * &q;
        let qa = q.adjoint();
        let ql = &qa * &lm;
        let f = &qa * &lq;
        let scale = l.magnitude(rho);
        if f.frobenius_norm() <= 1e-14 * scale {
            break;
        }
        let mut jac = DMatrix::<f64>::zeros(rows, cols);
        let mut put = |col: usize, d: &CMatrix| {
            for i in 0..k {
                for j in 0..k {
                    jac[(2 * (i * k + j), col)] = d[(i, j)].re;
                    jac[(2 * (i * k + j) + 1, col)] = d[(i, j)].im;
                }
            }
        };
        for a in 0..n {
            for b in 0..k {
                for (part, t) in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)].into_iter().enumerate() {
                    // d(Q* L Q) for Q += t·E_ab: conj(t)·e_b (LQ)_{a,:} + t·(Q*L)_{:,a} e_b*
                    let mut d = CMatrix::zeros(k, k);
                    for j in 0..k {
                        d[(b, j)] += t.conj() * lq[(a, j)];
                    }
                    for i in 0..k {
                        d[(i, b)] += t * ql[(i, a)];
                    }
                    put(2 * (a * k + b) + part, &d);
                }
            }
        }
        let dl = derivative
            .as_ref()
            .map_or_else(|| CMatrix::zeros(n, n), |p| p.evaluate(rho));
        let dfr = dl.congruence(&q);
        put(cols - 2, &dfr);
        put(cols - 1, &dfr.scale(C64::new(0.0, 1.0)));
        let mut rhs = DVector::<f64>::zeros(rows);
        for i in 0..k {
            for j in 0..k {
                rhs[2 * (i * k + j)] = -f[(i, j)].re;
                rhs[2 * (i * k + j) + 1] = -f[(i, j)].im;
            }
        }
        let svd = jac.svd(true, true);
        let smax = svd.singular_values.max();
        let Ok(step) = svd.solve(&rhs, 1e-12 * smax) else {
            break;
        };
        let mut qn = q.clone();
        for a in 0..n {
            for b in 0..k {
                let base = 2 * (a * k + b);
                qn[(a, b)] += C64::new(step[base], step[base + 1]);
            }
        }
        let Ok(iso) = Isometry::orthonormalize(&qn) else {
            break;
        };
        q = iso.into_matrix();
        rho += C64::new(step[cols - 2], step[cols - 1]);
        if !rho.is_finite() {
            break;
        }
        let r = residual(&q, rho);
        if r < best.0 {
            best = (r, q.clone());
        }
    }
    Isometry::orthonormalize(&best.1).unwrap_or(q0)
}

/// `L'(λ)`, or `None` for constant `L`.
fn derivative_poly(l: &MatrixPolynomial) -> Option<MatrixPolynomial> {
    if l.degree() == 0 {
        return None;
    }
    let coeffs: Vec<CMatrix> = l.coeffs()[1..]
        .iter()
        .enumerate()
        .map(|(j, a)| a.scale(C64::new((j + 1) as f64, 0.0)))
        .collect();
    if coeffs.last().unwrap().frobenius_norm() == 0.0 {
        return None;
    }
    MatrixPolynomial::new(coeffs).ok()
}
