//! Rank-`k` numerical range `Λ_k(A)` of a constant matrix.
//!
//! Everything here is driven by the support function
//! `h(θ) = λ_k(Re(e^{iθ}A))`: `Λ_k(A)` is the intersection of the half-planes
//! `{z : Re(e^{iθ}z) ≤ h(θ)}`, so `0 ∈ Λ_k(A)` exactly when `min_θ h(θ) ≥ 0`.

use std::collections::{HashSet, VecDeque};
use std::f64::consts::{PI, TAU};
use std::fmt;

use crate::geometry::{self, ClipPolygon, HalfPlane};
use crate::numkit::{jacobi_hermitian, CMatrix};
use crate::{Error, Result, C64};

/// Three-valued membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    In,
    Out,
    Border,
}

impl Status {
    /// `IN` or `BORDER`.
    pub fn is_member(self) -> bool {
        self != Status::Out
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::In => "IN",
            Status::Out => "OUT",
            Status::Border => "BORDER",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One evaluation `h(θ) = λ_k(Re(e^{iθ}A))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportSample {
    pub theta: f64,
    pub value: f64,
}

/// Width of the band around zero inside which membership is reported as
/// `BORDER`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Margin {
    /// Multiplied by the magnitude of the tested matrix (`1 + ‖A‖_F` for a
    /// matrix, `1 + s(μ)` for a polynomial evaluated at `μ`).
    Relative(f64),
    Absolute(f64),
}

impl Margin {
    pub fn resolve(self, scale: f64) -> f64 {
        match self {
            Margin::Relative(r) => r * (1.0 + scale),
            Margin::Absolute(m) => m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemberOptions {
    /// Finest coarse angular resolution.
    pub n_theta: usize,
    /// Golden-section stopping width in `θ`.
    pub refine_tol: f64,
    pub margin: Margin,
}

impl Default for MemberOptions {
    fn default() -> Self {
        MemberOptions {
            n_theta: 256,
            refine_tol: 1e-10,
            margin: Margin::Relative(1e-8),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemberResult {
    pub status: Status,
    /// Angle of the smallest support value seen. For `OUT` it certifies
    /// `h(theta) < −margin`.
    pub theta: f64,
    /// Smallest support value seen (an upper bound on `min_θ h`).
    pub value: f64,
    /// The resolved margin.
    pub margin: f64,
}

/// `θ ↦ λ_k(cos θ·H − sin θ·K)` with `H`, `K` the Hermitian and
/// skew-Hermitian parts of `A`.
#[derive(Debug, Clone)]
pub(crate) struct SupportFunction {
    n: usize,
    k: usize,
    h: Vec<C64>,
    s: Vec<C64>,
    lipschitz: f64,
}

impl SupportFunction {
    pub fn new(a: &CMatrix, k: usize) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension(format!(
                "expected a square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        if k == 0 || k > n {
            return Err(Error::RankOutOfRange { k, n });
        }
        if !a.is_finite() {
            return Err(Error::NonFinite("matrix"));
        }
        Ok(SupportFunction {
            n,
            k,
            h: a.hermitian_part().into_vec(),
            s: a.skew_hermitian_part().into_vec(),
            lipschitz: a.frobenius_norm() * (1.0 + 1e-12),
        })
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    fn fill(&self, theta: f64, buf: &mut Vec<C64>) {
        let (sn, cs) = theta.sin_cos();
        buf.clear();
        buf.extend(self.h.iter().zip(&self.s).map(|(&h, &s)| h * cs - s * sn));
    }

    fn kth(&self, diag: impl Iterator<Item = f64>) -> (f64, usize) {
        let mut ev: Vec<(f64, usize)> = diag.enumerate().map(|(i, v)| (v, i)).collect();
        ev.sort_by(|x, y| y.0.total_cmp(&x.0));
        ev[self.k - 1]
    }

    pub fn value(&self, theta: f64) -> f64 {
        let mut buf = Vec::with_capacity(self.n * self.n);
        self.fill(theta, &mut buf);
        jacobi_hermitian(&mut buf, self.n, None);
        let n = self.n;
        self.kth((0..n).map(|i| buf[i * n + i].re)).0
    }

    /// Value, a unit eigenvector for `λ_k` and `dh/dθ` along that vector.
    pub fn value_vector(&self, theta: f64) -> (f64, Vec<C64>, f64) {
        let n = self.n;
        let mut buf = Vec::with_capacity(n * n);
        self.fill(theta, &mut buf);
        let mut vecs = vec![C64::new(0.0, 0.0); n * n];
        jacobi_hermitian(&mut buf, n, Some(&mut vecs));
        let (value, col) = self.kth((0..n).map(|i| buf[i * n + i].re));
        let v: Vec<C64> = (0..n).map(|i| vecs[i * n + col]).collect();
        // d/dθ (cos θ H − sin θ K) = −sin θ H − cos θ K
        let (sn, cs) = theta.sin_cos();
        let mut deriv = 0.0;
        for i in 0..n {
            let mut row = C64::new(0.0, 0.0);
            for (j, vj) in v.iter().enumerate() {
                let d = -(self.h[i * n + j] * sn + self.s[i * n + j] * cs);
                row += d * vj;
            }
            deriv += (v[i].conj() * row).re;
        }
        (value, v, deriv)
    }
}

/// `λ_k(Re(e^{iθ}A))`.
pub fn support_value(a: &CMatrix, k: usize, theta: f64) -> Result<f64> {
    Ok(SupportFunction::new(a, k)?.value(theta))
}

struct Found {
    theta: f64,
    value: f64,
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;
const MAX_REFINEMENTS: usize = 64;

/// Golden-section search for a local minimum of `f` on `[lo, hi]`, stopping
/// early once `f < stop_below`.
fn golden_min(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64, stop_below: f64) -> Found {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = f(x1);
    if f1 < stop_below {
        return Found { theta: x1, value: f1 };
    }
    let mut f2 = f(x2);
    let mut iters = 0;
    while hi - lo > tol && iters < 200 {
        iters += 1;
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1);
            if f1 < stop_below {
                return Found { theta: x1, value: f1 };
            }
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2);
            if f2 < stop_below {
                return Found { theta: x2, value: f2 };
            }
        }
    }
    if f1 <= f2 {
        Found { theta: x1, value: f1 }
    } else {
        Found { theta: x2, value: f2 }
    }
}

fn wrap_angle(t: f64) -> f64 {
    let w = t.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Decides the sign of `min_θ h(θ)` against `margin`.
///
/// The `n_theta` grid is visited coarse to fine. Intervals whose Lipschitz
/// lower bound already exceeds `margin` are not subdivided further; the first
/// value below `−margin` ends the search with `OUT`. Intervals that stay
/// undecided at the finest level are refined by golden-section search.
pub(crate) fn decide_zero(f: &SupportFunction, margin: f64, opts: &MemberOptions, hint: Option<f64>) -> MemberResult {
    let n = opts.n_theta.max(4);
    let step = TAU / n as f64;
    let lip = f.lipschitz();
    let mut best = Found {
        theta: 0.0,
        value: f64::INFINITY,
    };
    let out = |theta: f64, value: f64| MemberResult {
        status: Status::Out,
        theta: wrap_angle(theta),
        value,
        margin,
    };

    if let Some(t) = hint {
        let v = f.value(t);
        if v < -margin {
            return out(t, v);
        }
        best = Found { theta: t, value: v };
    }

    let mut vals: Vec<f64> = vec![f64::NAN; n];
    let eval = |j: usize, vals: &mut [f64], best: &mut Found| -> f64 {
        let t = j as f64 * step;
        let v = f.value(t);
        vals[j] = v;
        if v < best.value {
            *best = Found { theta: t, value: v };
        }
        v
    };

    let stride = (n / 8).max(1);
    let mut starts: Vec<usize> = (0..n).step_by(stride).collect();
    // Evaluate coarse points in a spread-out order so an early OUT is found fast.
    starts.sort_by_key(|&j| (j / stride).reverse_bits());
    for &j in &starts {
        if eval(j, &mut vals, &mut best) < -margin {
            return out(best.theta, best.value);
        }
    }
    starts.sort_unstable();
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    for (i, &a) in starts.iter().enumerate() {
        let b = starts.get(i + 1).copied().unwrap_or(n);
        queue.push_back((a, b));
    }
    let mut undecided: Vec<(usize, f64)> = Vec::new();
    while let Some((a, b)) = queue.pop_front() {
        let fa = vals[a];
        let fb = vals[b % n];
        let lower = 0.5 * (fa + fb) - 0.5 * lip * (b - a) as f64 * step;
        if lower > margin {
            continue;
        }
        if b - a >= 2 {
            let mid = (a + b) / 2;
            if eval(mid, &mut vals, &mut best) < -margin {
                return out(best.theta, best.value);
            }
            queue.push_back((a, mid));
            queue.push_back((mid, b));
        } else {
            undecided.push((a, lower));
        }
    }
    if undecided.is_empty() {
        return MemberResult {
            status: Status::In,
            theta: wrap_angle(best.theta),
            value: best.value,
            margin,
        };
    }

    // Refinement: only intervals that could still hide a value below −margin
    // matter, unless every sample is above +margin (then IN needs checking).
    let need_all = best.value > margin;
    let mut centers: Vec<usize> = undecided
        .iter()
        .filter(|&&(_, lower)| need_all || lower < -margin)
        .map(|&(a, _)| {
            let b = (a + 1) % n;
            if vals[a] <= vals[b] {
                a
            } else {
                b
            }
        })
        .collect();
    centers.sort_unstable();
    centers.dedup();
    // Keep local minima of the sampled values only.
    centers.retain(|&j| {
        let l = vals[(j + n - 1) % n];
        let r = vals[(j + 1) % n];
        l >= vals[j] && r >= vals[j]
    });
    centers.sort_by(|&x, &y| vals[x].total_cmp(&vals[y]));
    centers.truncate(MAX_REFINEMENTS);
    let g = |t: f64| f.value(t);
    for j in centers {
        let t = j as f64 * step;
        let found = golden_min(&g, t - step, t + step, opts.refine_tol, -margin);
        if found.value < best.value {
            best = found;
        }
        if best.value < -margin {
            return out(best.theta, best.value);
        }
    }
    let status = if best.value > margin {
        Status::In
    } else {
        Status::Border
    };
    MemberResult {
        status,
        theta: wrap_angle(best.theta),
        value: best.value,
        margin,
    }
}

/// Decides `0 ∈ Λ_k(A)`; the default relative margin scales with `1 + ‖A‖_F`.
pub fn member_zero(a: &CMatrix, k: usize, opts: &MemberOptions) -> Result<MemberResult> {
    let f = SupportFunction::new(a, k)?;
    Ok(decide_zero(&f, opts.margin.resolve(a.frobenius_norm()), opts, None))
}

/// Decides `z ∈ Λ_k(A)` as `0 ∈ Λ_k(A − zI)`.
pub fn member_point(a: &CMatrix, k: usize, z: C64, opts: &MemberOptions) -> Result<MemberResult> {
    if !a.is_square() {
        return Err(Error::Dimension("expected a square matrix".into()));
    }
    let shifted = a - &CMatrix::scalar(a.rows(), z);
    member_zero(&shifted, k, opts)
}

/// Global minimum of the support function: all `n_theta` samples, then
/// golden-section refinement of every sampled local minimum.
pub fn min_support(a: &CMatrix, k: usize, opts: &MemberOptions) -> Result<SupportSample> {
    let f = SupportFunction::new(a, k)?;
    Ok(global_min(&|t| f.value(t), opts.n_theta.max(4), opts.refine_tol))
}

pub(crate) fn global_min(f: &impl Fn(f64) -> f64, n: usize, tol: f64) -> SupportSample {
    let step = TAU / n as f64;
    let vals: Vec<f64> = (0..n).map(|j| f(j as f64 * step)).collect();
    let mut best = SupportSample {
        theta: 0.0,
        value: f64::INFINITY,
    };
    for j in 0..n {
        let l = vals[(j + n - 1) % n];
        let r = vals[(j + 1) % n];
        if vals[j] < best.value {
            best = SupportSample {
                theta: j as f64 * step,
                value: vals[j],
            };
        }
        if vals[j] <= l && vals[j] <= r {
            let t = j as f64 * step;
            let found = golden_min(f, t - step, t + step, tol, f64::NEG_INFINITY);
            if found.value < best.value {
                best = SupportSample {
                    theta: found.theta,
                    value: found.value,
                };
            }
        }
    }
    best.theta = wrap_angle(best.theta);
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionStatus {
    Empty,
    Point,
    Segment,
    Polygon,
    Unbounded,
}

/// Outer approximation of `Λ_k(A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexRegion {
    pub status: RegionStatus,
    /// Counterclockwise; one vertex for `Point`, two for `Segment`.
    pub vertices: Vec<C64>,
    /// Half-planes `Re(e^{iθ}z) ≤ value` that cut out the region.
    pub halfplanes: Vec<SupportSample>,
}

impl ConvexRegion {
    fn empty(halfplanes: Vec<SupportSample>) -> Self {
        ConvexRegion {
            status: RegionStatus::Empty,
            vertices: Vec::new(),
            halfplanes,
        }
    }
}

const SCALAR_REL: f64 = 1e-12;
const REFINE_PASSES: usize = 8;

/// Intersection of the supporting half-planes of `Λ_k(A)` at `n_theta`
/// equally spaced angles, sharpened near every vertex by extra half-planes
/// placed where the true boundary departs from the current polygon.
///
/// The result always contains `Λ_k(A)` (up to eigensolver accuracy).
pub fn region_polygon(a: &CMatrix, k: usize, n_theta: usize) -> Result<ConvexRegion> {
    let f = SupportFunction::new(a, k)?;
    let n = a.rows();
    let norm = a.frobenius_norm();
    let (c, defect) = a.scalar_defect();
    if defect <= SCALAR_REL * norm {
        return Ok(ConvexRegion {
            status: RegionStatus::Point,
            vertices: vec![c],
            halfplanes: Vec::new(),
        });
    }
    if k == n {
        return Ok(ConvexRegion::empty(Vec::new()));
    }

    // An even count divisible by four keeps θ + π and θ ± π/2 on the grid.
    let m = n_theta.max(4).div_ceil(4) * 4;
    let step = TAU / m as f64;
    let samples: Vec<SupportSample> = (0..m)
        .map(|j| {
            let theta = j as f64 * step;
            SupportSample {
                theta,
                value: f.value(theta),
            }
        })
        .collect();
    let tol = 1e-9 * (1.0 + norm);

    let half = m / 2;
    let (mut j0, mut w0) = (0, f64::INFINITY);
    for j in 0..half {
        let w = samples[j].value + samples[j + half].value;
        if w < w0 {
            j0 = j;
            w0 = w;
        }
    }
    if w0 < -tol {
        return Ok(ConvexRegion::empty(samples));
    }
    let width = |t: f64| f.value(t) + f.value(t + PI);
    let t0 = samples[j0].theta;
    let refined = golden_min(&width, t0 - step, t0 + step, 1e-12, f64::NEG_INFINITY);
    if refined.value < -tol {
        return Ok(ConvexRegion::empty(samples));
    }
    if refined.value.min(w0) <= tol {
        let theta0 = if refined.value < w0 { refined.theta } else { t0 };
        return Ok(flat_region(&f, theta0, samples, tol));
    }
    Ok(planar_region(&f, samples, norm, tol))
}

/// Lines nearly parallel to a flat region amplify the error in its offset by
/// `1/sin δ`; they are left out of the endpoint bounds.
const FLAT_SIN: f64 = 1e-3;

/// Region contained in a line `Re(e^{iθ₀}z) = x₀`: intersect every
/// constraint with the line and report Empty, Point or Segment.
fn flat_region(f: &SupportFunction, theta0: f64, mut samples: Vec<SupportSample>, tol: f64) -> ConvexRegion {
    let hi = f.value(theta0);
    let lo = -f.value(theta0 + PI);
    let x0 = 0.5 * (hi + lo);
    let step = TAU / samples.len() as f64;
    for extra in [theta0, theta0 + PI, theta0 + 0.5 * PI, theta0 - 0.5 * PI] {
        samples.push(SupportSample {
            theta: wrap_angle(extra),
            value: f.value(extra),
        });
    }
    // Re(e^{iδ}(x₀ + it)) = x₀ cos δ − t sin δ ≤ h bounds t from below when
    // sin δ > 0 and from above when sin δ < 0.
    let bound = |theta: f64, h: f64| {
        let (sn, cs) = (theta - theta0).sin_cos();
        (sn, (x0 * cs - h) / sn)
    };
    let (mut tmin, mut tmax) = (f64::NEG_INFINITY, f64::INFINITY);
    let (mut at_min, mut at_max) = (None, None);
    for s in &samples {
        let (sn, b) = bound(s.theta, s.value);
        if sn.abs() > FLAT_SIN {
            if sn > 0.0 && b > tmin {
                tmin = b;
                at_min = Some(s.theta);
            } else if sn < 0.0 && b < tmax {
                tmax = b;
                at_max = Some(s.theta);
            }
        } else if sn.abs() < 1e-9 && x0 * (s.theta - theta0).cos() > s.value + tol {
            return ConvexRegion::empty(samples);
        }
    }
    // The binding angles generally fall between samples.
    let lower = |t: f64| {
        let (sn, b) = bound(t, f.value(t));
        if sn > FLAT_SIN {
            -b
        } else {
            f64::INFINITY
        }
    };
    let upper = |t: f64| {
        let (sn, b) = bound(t, f.value(t));
        if sn < -FLAT_SIN {
            b
        } else {
            f64::INFINITY
        }
    };
    if let Some(t) = at_min {
        let found = golden_min(&lower, t - step, t + step, 1e-13, f64::NEG_INFINITY);
        if -found.value > tmin {
            tmin = -found.value;
            samples.push(SupportSample {
                theta: wrap_angle(found.theta),
                value: f.value(found.theta),
            });
        }
    }
    if let Some(t) = at_max {
        let found = golden_min(&upper, t - step, t + step, 1e-13, f64::NEG_INFINITY);
        if found.value < tmax {
            tmax = found.value;
            samples.push(SupportSample {
                theta: wrap_angle(found.theta),
                value: f.value(found.theta),
            });
        }
    }
    let rot = C64::from_polar(1.0, -theta0);
    if tmin > tmax + tol {
        return ConvexRegion::empty(samples);
    }
    if tmax - tmin <= tol {
        let t = 0.5 * (tmin + tmax);
        return ConvexRegion {
            status: RegionStatus::Point,
            vertices: vec![rot * C64::new(x0, t)],
            halfplanes: samples,
        };
    }
    let mut ends = vec![rot * C64::new(x0, tmin), rot * C64::new(x0, tmax)];
    ends.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    ConvexRegion {
        status: RegionStatus::Segment,
        vertices: ends,
        halfplanes: samples,
    }
}

fn planar_region(f: &SupportFunction, mut samples: Vec<SupportSample>, norm: f64, tol: f64) -> ConvexRegion {
    let big = 4.0 * (norm + 1.0);
    let mut poly = ClipPolygon::square(C64::new(0.0, 0.0), big);
    for (id, s) in samples.iter().enumerate() {
        poly.clip(
            &HalfPlane {
                theta: s.theta,
                h: s.value,
            },
            id,
        );
        if poly.vertices.is_empty() {
            return ConvexRegion::empty(samples);
        }
    }
    // Support points p(θ) = e^{−iθ}(h − i h') of the sampled lines, computed lazily.
    let mut touch: Vec<Option<C64>> = vec![None; samples.len()];
    let support_point = |theta: f64| -> (f64, C64) {
        let (h, _, dh) = f.value_vector(theta);
        (h, C64::from_polar(1.0, -theta) * C64::new(h, -dh))
    };
    let cut_tol = 1e-12 * (1.0 + norm);
    let n_uniform = samples.len();
    let uniform_step = TAU / n_uniform as f64;
    let mut settled: HashSet<(usize, usize)> = HashSet::new();
    for _pass in 0..REFINE_PASSES {
        let nv = poly.vertices.len();
        let mut added: Vec<(SupportSample, C64)> = Vec::new();
        for i in 0..nv {
            let ea = poly.edge_ids[(i + nv - 1) % nv];
            let eb = poly.edge_ids[i];
            if ea == usize::MAX || eb == usize::MAX || ea == eb {
                continue;
            }
            let (ta, tb) = (samples[ea].theta, samples[eb].theta);
            let gap = (ta - tb).rem_euclid(TAU);
            if gap <= 0.0 || gap >= PI {
                continue;
            }
            for &(e, t) in &[(ea, ta), (eb, tb)] {
                if touch[e].is_none() {
                    touch[e] = Some(support_point(t).1);
                }
            }
            let chord = touch[eb].unwrap() - touch[ea].unwrap();
            let mut tc = tb + 0.5 * gap;
            if chord.norm() > 0.0 {
                let cand = 0.5 * PI - chord.arg();
                let off = (cand - tb).rem_euclid(TAU);
                if off > 1e-3 * gap && off < (1.0 - 1e-3) * gap {
                    tc = tb + off;
                }
            }
            let v = poly.vertices[i];
            let neg_excess = |t: f64| {
                -HalfPlane {
                    theta: t,
                    h: f.value(t),
                }
                .excess(v)
            };
            let prev = poly.vertices[(i + nv - 1) % nv];
            let next = poly.vertices[(i + 1) % nv];
            let on_edge = |e: usize, a: C64, b: C64| geometry::point_segment_distance(touch[e].unwrap(), a, b) <= tol;
            let tight = on_edge(ea, prev, v) && on_edge(eb, v, next);
            let tc = wrap_angle(tc);
            if tight && gap < 1.5 * uniform_step {
                // Neighbouring tight lines: cut along the chord only when the
                // boundary between the touching points is straight (a pivot
                // switch). On a curved piece the cut would just halve the
                // angular step, which the sampling already fixes.
                if chord.norm() <= tol {
                    continue;
                }
                let (h, p) = support_point(tc);
                let sagitta = geometry::cross(touch[ea].unwrap(), touch[eb].unwrap(), p).abs() / chord.norm();
                if sagitta <= tol && -neg_excess(tc) > cut_tol {
                    added.push((SupportSample { theta: tc, value: h }, p));
                }
                continue;
            }
            // Across a wide gap, or next to a line that is not tight, the
            // deepest cut can sit anywhere in the gap. The excess is
            // Lipschitz, so only the sample intervals whose bound exceeds the
            // cut tolerance are searched.
            // A vertex between the same two lines stays where it was, so a
            // search that found no cut need not be repeated.
            if !settled.insert((ea, eb)) {
                continue;
            }
            let (mut tc, mut best) = (tc, neg_excess(tc));
            let lip = v.norm() + norm;
            let mut knots = vec![(tb, 0.0)];
            let mut j = (tb / uniform_step).floor() as usize + 1;
            while (j as f64) * uniform_step < tb + gap {
                let t = j as f64 * uniform_step;
                let s = samples[j % n_uniform];
                knots.push((t, -HalfPlane { theta: t, h: s.value }.excess(v)));
                j += 1;
            }
            knots.push((tb + gap, 0.0));
            for w in knots.windows(2) {
                let ((t1, g1), (t2, g2)) = (w[0], w[1]);
                if 0.5 * (g1 + g2) - 0.5 * lip * (t2 - t1) >= -cut_tol {
                    continue;
                }
                let found = golden_min(&neg_excess, t1, t2, 1e-13, f64::NEG_INFINITY);
                if found.value < best {
                    tc = wrap_angle(found.theta);
                    best = found.value;
                }
            }
            if -best > cut_tol {
                let (h, p) = support_point(tc);
                added.push((SupportSample { theta: tc, value: h }, p));
            }
        }
        if added.is_empty() {
            break;
        }
        for (s, p) in added {
            let id = samples.len();
            samples.push(s);
            touch.push(Some(p));
            poly.clip(
                &HalfPlane {
                    theta: s.theta,
                    h: s.value,
                },
                id,
            );
            if poly.vertices.is_empty() {
                return ConvexRegion::empty(samples);
            }
        }
    }
    finish_polygon(poly.vertices, samples, tol)
}

fn finish_polygon(vertices: Vec<C64>, halfplanes: Vec<SupportSample>, tol: f64) -> ConvexRegion {
    let diam = geometry::diameter(&vertices);
    let merge = (1e-10 * diam).max(f64::MIN_POSITIVE);
    let mut v: Vec<C64> = Vec::with_capacity(vertices.len());
    for z in vertices {
        if v.last().is_none_or(|&p: &C64| (z - p).norm() > merge) {
            v.push(z);
        }
    }
    while v.len() > 1 && (v[0] - v[v.len() - 1]).norm() <= merge {
        v.pop();
    }
    // Drop vertices where the boundary does not turn.
    let flat = 1e-14 * diam * diam;
    let mut changed = true;
    while changed && v.len() >= 3 {
        changed = false;
        let len = v.len();
        for i in 0..len {
            let prev = v[(i + len - 1) % len];
            let next = v[(i + 1) % len];
            if geometry::cross(prev, v[i], next) <= flat {
                v.remove(i);
                changed = true;
                break;
            }
        }
    }
    let status = match v.len() {
        0 => RegionStatus::Empty,
        1 => RegionStatus::Point,
        2 => RegionStatus::Segment,
        _ => RegionStatus::Polygon,
    };
    if status == RegionStatus::Segment && diam <= tol {
        return ConvexRegion {
            status: RegionStatus::Point,
            vertices: vec![0.5 * (v[0] + v[1])],
            halfplanes,
        };
    }
    ConvexRegion {
        status,
        vertices: v,
        halfplanes,
    }
}

/// A vertex of a convex region with the angular width of its normal cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpVertex {
    pub vertex: C64,
    pub aperture: f64,
}

/// Vertices whose exterior normal cone is at least `aperture_min` wide.
pub fn sharp_vertices(region: &ConvexRegion, aperture_min: f64) -> Vec<SharpVertex> {
    let v = &region.vertices;
    let all: Vec<SharpVertex> = match region.status {
        RegionStatus::Empty | RegionStatus::Unbounded => Vec::new(),
        RegionStatus::Point => vec![SharpVertex {
            vertex: v[0],
            aperture: TAU,
        }],
        RegionStatus::Segment => v
            .iter()
            .map(|&z| SharpVertex {
                vertex: z,
                aperture: PI,
            })
            .collect(),
        RegionStatus::Polygon => {
            let n = v.len();
            (0..n)
                .map(|i| {
                    let inc = v[i] - v[(i + n - 1) % n];
                    let outg = v[(i + 1) % n] - v[i];
                    SharpVertex {
                        vertex: v[i],
                        aperture: (outg / inc).arg(),
                    }
                })
                .collect()
        }
    };
    all.into_iter().filter(|s| s.aperture >= aperture_min).collect()
}
