//! `Λ_k(L)` for a matrix polynomial `L`: point membership, raster and line
//! scans, connected components, boundedness, Monte-Carlo compression
//! intersections, boundary tracing, sharp points, the companion inclusion and
//! joint-tuple checks.
//!
//! Membership of `μ` is decided as `0 ∈ Λ_k(L(μ))` with the margin scaled by
//! `1 + s(μ)`, `s(μ) = Σ_j ‖A_j‖_F max(1, |μ|)^j`.

use std::collections::HashMap;

use crate::exec::Exec;
use crate::hrnr_matrix::{self, decide_zero, MemberOptions, MemberResult, Status, SupportFunction};
use crate::matpoly::{MatrixPolynomial, ScalarPoly, ZERO_REL};
use crate::numkit::{jacobi_hermitian, random_isometry_stream, CMatrix, Isometry};
use crate::{Error, Result, C64};

/// Axis-aligned rectangle of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let w = Window {
            x_min,
            x_max,
            y_min,
            y_max,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.x_min, self.x_max, self.y_min, self.y_max];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidWindow("bounds must be finite".into()));
        }
        if self.x_min >= self.x_max {
            return Err(Error::InvalidWindow(format!(
                "x_min {} must be below x_max {}",
                self.x_min, self.x_max
            )));
        }
        if self.y_min >= self.y_max {
            return Err(Error::InvalidWindow(format!(
                "y_min {} must be below y_max {}",
                self.y_min, self.y_max
            )));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn corners(&self) -> [C64; 4] {
        [
            C64::new(self.x_min, self.y_min),
            C64::new(self.x_max, self.y_min),
            C64::new(self.x_max, self.y_max),
            C64::new(self.x_min, self.y_max),
        ]
    }
}

/// Options shared by the batch scans.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScanOptions {
    pub member: MemberOptions,
    pub exec: Exec,
}

/// Ternary raster over a window. Cell `(i, j)` has centre
/// `x_min + (i + ½)Δx + i(y_min + (j + ½)Δy)` and lives at index `j·nx + i`
/// (rows of constant `y`, bottom row first).
#[derive(Debug, Clone, PartialEq)]
pub struct RegionGrid {
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    pub cells: Vec<Status>,
    pub k: usize,
    pub options: MemberOptions,
}

impl RegionGrid {
    pub fn center(&self, i: usize, j: usize) -> C64 {
        cell_center(&self.window, self.nx, self.ny, i, j)
    }

    pub fn status(&self, i: usize, j: usize) -> Status {
        self.cells[j * self.nx + i]
    }

    /// Cell containing `z`, if inside the window.
    pub fn cell_of(&self, z: C64) -> Option<(usize, usize)> {
        let w = &self.window;
        if z.re < w.x_min || z.re > w.x_max || z.im < w.y_min || z.im > w.y_max {
            return None;
        }
        let i = (((z.re - w.x_min) / w.width()) * self.nx as f64).floor() as usize;
        let j = (((z.im - w.y_min) / w.height()) * self.ny as f64).floor() as usize;
        Some((i.min(self.nx - 1), j.min(self.ny - 1)))
    }

    pub fn count(&self, status: Status) -> usize {
        self.cells.iter().filter(|&&s| s == status).count()
    }

    /// Marks the cells hit by member samples of a line scan as `BORDER`
    /// (cells already `IN` are kept). Sets of empty interior then show up in
    /// the raster and in its components.
    pub fn overlay(&mut self, samples: &[LineSample]) {
        for s in samples {
            if !s.result.status.is_member() {
                continue;
            }
            if let Some((i, j)) = self.cell_of(s.point) {
                let idx = j * self.nx + i;
                if self.cells[idx] == Status::Out {
                    self.cells[idx] = Status::Border;
                }
            }
        }
    }
}

fn cell_center(w: &Window, nx: usize, ny: usize, i: usize, j: usize) -> C64 {
    C64::new(
        w.x_min + (i as f64 + 0.5) * w.width() / nx as f64,
        w.y_min + (j as f64 + 0.5) * w.height() / ny as f64,
    )
}

fn check_rank(l: &MatrixPolynomial, k: usize) -> Result<()> {
    if k == 0 || k > l.n() {
        return Err(Error::RankOutOfRange { k, n: l.n() });
    }
    Ok(())
}

fn check_grid(window: &Window, nx: usize, ny: usize) -> Result<()> {
    window.validate()?;
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidArgument(format!(
            "resolution {nx}x{ny} must be at least 2x2"
        )));
    }
    Ok(())
}

fn member_with_hint(
    l: &MatrixPolynomial,
    k: usize,
    mu: C64,
    opts: &MemberOptions,
    hint: Option<f64>,
) -> Result<MemberResult> {
    let value = l.evaluate(mu);
    let f = SupportFunction::new(&value, k)?;
    let margin = opts.margin.resolve(l.magnitude(mu));
    Ok(decide_zero(&f, margin, opts, hint))
}

/// Decides `μ ∈ Λ_k(L)` as `0 ∈ Λ_k(L(μ))`.
pub fn member(l: &MatrixPolynomial, k: usize, mu: C64, opts: &MemberOptions) -> Result<MemberResult> {
    check_rank(l, k)?;
    if !mu.is_finite() {
        return Err(Error::NonFinite("point"));
    }
    member_with_hint(l, k, mu, opts, None)
}

/// Membership at every cell centre. Rows run independently (in parallel when
/// enabled); within a row the witness angle of each cell seeds the next.
pub fn grid_scan(
    l: &MatrixPolynomial,
    k: usize,
    window: &Window,
    nx: usize,
    ny: usize,
    opts: &ScanOptions,
) -> Result<RegionGrid> {
    check_rank(l, k)?;
    check_grid(window, nx, ny)?;
    let rows: Vec<Result<Vec<Status>>> = opts.exec.map_indexed(ny, |j| {
        let mut hint = None;
        let mut row = Vec::with_capacity(nx);
        for i in 0..nx {
            let r = member_with_hint(l, k, cell_center(window, nx, ny, i, j), &opts.member, hint)?;
            hint = Some(r.theta);
            row.push(r.status);
        }
        Ok(row)
    });
    let mut cells = Vec::with_capacity(nx * ny);
    for row in rows {
        cells.extend(row?);
    }
    Ok(RegionGrid {
        window: *window,
        nx,
        ny,
        cells,
        k,
        options: opts.member,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSample {
    pub point: C64,
    pub result: MemberResult,
}

/// Membership at `samples` equally spaced points from `z_start` to `z_end`
/// (both included).
pub fn line_scan(
    l: &MatrixPolynomial,
    k: usize,
    z_start: C64,
    z_end: C64,
    samples: usize,
    opts: &ScanOptions,
) -> Result<Vec<LineSample>> {
    check_rank(l, k)?;
    if samples < 2 {
        return Err(Error::InvalidArgument("line scan needs at least 2 samples".into()));
    }
    let last = (samples - 1) as f64;
    let out: Vec<Result<LineSample>> = opts.exec.map_indexed(samples, |s| {
        let point = z_start + (z_end - z_start) * (s as f64 / last);
        Ok(LineSample {
            point,
            result: member_with_hint(l, k, point, &opts.member, None)?,
        })
    });
    out.into_iter().collect()
}

/// 8-connected components of the member (`IN` or `BORDER`) cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabels {
    /// One label per cell, row-major; 0 for `OUT`, components numbered from 1
    /// in raster order of their first cell.
    pub labels: Vec<u32>,
    pub count: usize,
}

pub fn components(grid: &RegionGrid) -> ComponentLabels {
    let (nx, ny) = (grid.nx, grid.ny);
    let mut labels = vec![0u32; nx * ny];
    let mut count = 0u32;
    let mut stack = Vec::new();
    for start in 0..nx * ny {
        if labels[start] != 0 || !grid.cells[start].is_member() {
            continue;
        }
        count += 1;
        labels[start] = count;
        stack.push(start);
        while let Some(idx) = stack.pop() {
            let (i, j) = ((idx % nx) as isize, (idx / nx) as isize);
            for dj in -1..=1 {
                for di in -1..=1 {
                    let (a, b) = (i + di, j + dj);
                    if a < 0 || b < 0 || a >= nx as isize || b >= ny as isize {
                        continue;
                    }
                    let nb = b as usize * nx + a as usize;
                    if labels[nb] == 0 && grid.cells[nb].is_member() {
                        labels[nb] = count;
                        stack.push(nb);
                    }
                }
            }
        }
    }
    ComponentLabels {
        labels,
        count: count as usize,
    }
}

/// Certificate that `Λ_k(L)` lies in the disc `|μ| ≤ radius`.
///
/// From `λ_k(Re(e^{iθ}A_m)) = −separation < 0`: every `k`-dimensional
/// subspace contains a unit `y` with `|y*A_m y| ≥ separation`, and a common
/// zero of `y*L(μ)y` obeys the Cauchy bound
/// `|μ| ≤ 1 + max_{j<m} ‖A_j‖_F / separation`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundedCertificate {
    pub theta: f64,
    pub separation: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundedness {
    Bounded(BoundedCertificate),
    /// `0 ∈ Λ_k(A_m)` up to the margin: the sufficient test says nothing.
    Unknown(Status),
}

pub fn boundedness_check(l: &MatrixPolynomial, k: usize, opts: &MemberOptions) -> Result<Boundedness> {
    check_rank(l, k)?;
    let lead = l.leading();
    let decision = hrnr_matrix::member_zero(lead, k, opts)?;
    if decision.status != Status::Out {
        return Ok(Boundedness::Unknown(decision.status));
    }
    let best = hrnr_matrix::min_support(lead, k, opts)?;
    let (theta, separation) = if -best.value > -decision.value {
        (best.theta, -best.value)
    } else {
        (decision.theta, -decision.value)
    };
    let m = l.degree();
    let radius = if m == 0 {
        0.0
    } else {
        let lower = l.coeffs()[..m].iter().map(CMatrix::frobenius_norm).fold(0.0, f64::max);
        1.0 + lower / separation
    };
    Ok(Boundedness::Bounded(BoundedCertificate {
        theta,
        separation,
        radius,
    }))
}

/// Per-sample state carried along a raster row of the Monte-Carlo scan.
#[derive(Clone, Default)]
struct SampleCache {
    theta: Option<f64>,
    /// Unit vectors whose Rayleigh quotients enclosed the origin last time.
    triangle: Option<[Vec<C64>; 3]>,
}

struct Compressed {
    dim: usize,
    coeffs: Vec<Vec<C64>>,
    norms: Vec<f64>,
}

impl Compressed {
    fn evaluate(&self, mu: C64) -> (Vec<C64>, f64) {
        let mut acc = self.coeffs.last().unwrap().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            for (a, &b) in acc.iter_mut().zip(c) {
                *a = *a * mu + b;
            }
        }
        let r = mu.norm().max(1.0);
        let mut p = 1.0;
        let mut s = 0.0;
        for nj in &self.norms {
            s += nj * p;
            p *= r;
        }
        (acc, s)
    }
}

fn rayleigh(b: &[C64], n: usize, x: &[C64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        let mut row = C64::new(0.0, 0.0);
        for j in 0..n {
            row += b[i * n + j] * x[j];
        }
        acc += x[i].conj() * row;
    }
    acc
}

/// Largest eigenvalue of `Re(e^{iθ}B)` and, if asked, its eigenvector.
fn top_eigen(b: &[C64], n: usize, theta: f64, want_vector: bool) -> (f64, Option<Vec<C64>>) {
    let e = C64::from_polar(1.0, theta);
    let mut m = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = 0.5 * (e * b[i * n + j] + (e * b[j * n + i]).conj());
        }
    }
    if want_vector {
        let mut v = vec![C64::new(0.0, 0.0); n * n];
        jacobi_hermitian(&mut m, n, Some(&mut v));
        let top = (0..n)
            .max_by(|&x, &y| m[x * n + x].re.total_cmp(&m[y * n + y].re))
            .unwrap();
        (m[top * n + top].re, Some((0..n).map(|i| v[i * n + top]).collect()))
    } else {
        jacobi_hermitian(&mut m, n, None);
        ((0..n).map(|i| m[i * n + i].re).fold(f64::NEG_INFINITY, f64::max), None)
    }
}

fn origin_in_triangle(z: &[C64; 3]) -> bool {
    let o = C64::new(0.0, 0.0);
    let c0 = crate::geometry::cross(z[0], z[1], o);
    let c1 = crate::geometry::cross(z[1], z[2], o);
    let c2 = crate::geometry::cross(z[2], z[0], o);
    let area = crate::geometry::cross(z[0], z[1], z[2]);
    area != 0.0 && ((c0 >= 0.0 && c1 >= 0.0 && c2 >= 0.0) || (c0 <= 0.0 && c1 <= 0.0 && c2 <= 0.0))
}

/// Closest point of the hull of `pts` (at most three) to the origin; shrinks
/// `pts` to the face that realizes it. Returns `None` when the origin lies in
/// the hull.
fn closest_to_origin(pts: &mut Vec<(C64, Vec<C64>)>) -> Option<C64> {
    let seg = |a: C64, b: C64| -> (C64, f64) {
        let d = b - a;
        let len2 = d.norm_sqr();
        if len2 == 0.0 {
            return (a, 0.0);
        }
        let t = ((-a) * d.conj()).re / len2;
        let t = t.clamp(0.0, 1.0);
        (a + d * t, t)
    };
    match pts.len() {
        1 => Some(pts[0].0),
        2 => {
            let (w, t) = seg(pts[0].0, pts[1].0);
            if t <= 0.0 {
                pts.truncate(1);
            } else if t >= 1.0 {
                pts.swap_remove(0);
            }
            Some(w)
        }
        _ => {
            let z = [pts[0].0, pts[1].0, pts[2].0];
            if origin_in_triangle(&z) {
                return None;
            }
            let mut best: Option<(f64, usize, usize, C64, f64)> = None;
            for (a, b) in [(0, 1), (1, 2), (2, 0)] {
                let (w, t) = seg(z[a], z[b]);
                if best.is_none_or(|x| w.norm() < x.0) {
                    best = Some((w.norm(), a, b, w, t));
                }
            }
            let (_, a, b, w, t) = best.unwrap();
            let keep: Vec<usize> = if t <= 0.0 {
                vec![a]
            } else if t >= 1.0 {
                vec![b]
            } else {
                vec![a, b]
            };
            let old = std::mem::take(pts);
            *pts = old
                .into_iter()
                .enumerate()
                .filter(|(i, _)| keep.contains(i))
                .map(|(_, p)| p)
                .collect();
            Some(w)
        }
    }
}

const GILBERT_STEPS: usize = 60;

/// Whether `0 ∉ F(B)` can be certified: returns the separating angle with
/// `λ_max(Re(e^{iθ}B)) < −margin`, or `None` when the origin could not be
/// separated (it lies in `F(B)` or within the margin of it).
///
/// Gilbert's minimum-norm iteration on `F(B)`, whose support points are the
/// Rayleigh quotients of top eigenvectors of `Re(e^{iθ}B)`.
fn separate_origin(b: &[C64], n: usize, margin: f64, cache: &mut SampleCache) -> Option<f64> {
    if let Some(tri) = &cache.triangle {
        let z = [
            rayleigh(b, n, &tri[0]),
            rayleigh(b, n, &tri[1]),
            rayleigh(b, n, &tri[2]),
        ];
        if origin_in_triangle(&z) {
            return None;
        }
    }
    if let Some(t) = cache.theta {
        let (v, _) = top_eigen(b, n, t, false);
        if v < -margin {
            return Some(t);
        }
    }
    let mut theta = cache.theta.unwrap_or(0.0);
    let (v, x) = top_eigen(b, n, theta, true);
    if v < -margin {
        cache.theta = Some(theta);
        return Some(theta);
    }
    let x = x.unwrap();
    let mut simplex = vec![(rayleigh(b, n, &x), x)];
    for _ in 0..GILBERT_STEPS {
        let Some(w) = closest_to_origin(&mut simplex) else {
            let tri = [simplex[0].1.clone(), simplex[1].1.clone(), simplex[2].1.clone()];
            cache.triangle = Some(tri);
            return None;
        };
        let dist = w.norm();
        if dist <= margin {
            return None;
        }
        theta = (-w.conj()).arg();
        let (v, x) = top_eigen(b, n, theta, true);
        if v < -margin {
            cache.theta = Some(theta);
            return Some(theta);
        }
        // The support value bounds the distance from below; stop when the
        // gap closes without a certificate.
        if dist + v <= 1e-12 * (1.0 + dist) {
            return None;
        }
        let x = x.unwrap();
        let p = rayleigh(b, n, &x);
        if simplex.iter().any(|(q, _)| (q - p).norm() <= 1e-15 * (1.0 + p.norm())) {
            return None;
        }
        simplex.push((p, x));
    }
    None
}

/// Intersection over `n_samples` seeded `n×(n−k+1)` isometries `M` of the
/// rasters of `w(M*L(λ)M)`: a cell is `OUT` as soon as one compression has a
/// certified separation of `0` from `F(M*L(μ)M)`, `IN` otherwise.
///
/// `OUT` is only ever reported with a certificate, so every cell that
/// [`grid_scan`] reports `IN` stays `IN` here.
#[allow(clippy::too_many_arguments)]
pub fn montecarlo_region(
    l: &MatrixPolynomial,
    k: usize,
    n_samples: usize,
    window: &Window,
    nx: usize,
    ny: usize,
    seed: u64,
    opts: &ScanOptions,
) -> Result<RegionGrid> {
    check_rank(l, k)?;
    check_grid(window, nx, ny)?;
    if n_samples == 0 {
        return Err(Error::InvalidArgument(
            "Monte-Carlo scan needs at least one sample".into(),
        ));
    }
    let n = l.n();
    let dim = n - k + 1;
    let samples: Vec<Result<Compressed>> = opts.exec.map_indexed(n_samples, |s| {
        let m = random_isometry_stream(n, dim, seed, s as u64)?;
        let coeffs: Vec<CMatrix> = l.coeffs().iter().map(|a| a.congruence(m.matrix())).collect();
        Ok(Compressed {
            dim,
            norms: coeffs.iter().map(CMatrix::frobenius_norm).collect(),
            coeffs: coeffs.into_iter().map(CMatrix::into_vec).collect(),
        })
    });
    let samples: Vec<Compressed> = samples.into_iter().collect::<Result<_>>()?;
    let margin_rule = opts.member.margin;
    let rows: Vec<Vec<Status>> = opts.exec.map_indexed(ny, |j| {
        let mut caches = vec![SampleCache::default(); n_samples];
        let mut last_reject = 0usize;
        let mut row = Vec::with_capacity(nx);
        for i in 0..nx {
            let mu = cell_center(window, nx, ny, i, j);
            let order = std::iter::once(last_reject).chain((0..n_samples).filter(|&s| s != last_reject));
            let mut status = Status::In;
            for s in order {
                let c = &samples[s];
                let (b, scale) = c.evaluate(mu);
                let margin = margin_rule.resolve(scale);
                if separate_origin(&b, c.dim, margin, &mut caches[s]).is_some() {
                    status = Status::Out;
                    last_reject = s;
                    break;
                }
            }
            row.push(status);
        }
        row
    });
    Ok(RegionGrid {
        window: *window,
        nx,
        ny,
        cells: rows.into_iter().flatten().collect(),
        k,
        options: opts.member,
    })
}

/// One traced boundary curve; the member region lies on its left.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<C64>,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySample {
    pub polylines: Vec<Polyline>,
    /// The member region touches the window edge, so part of its boundary
    /// lies outside the raster and was not traced.
    pub clipped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum EdgeKey {
    /// Between lattice nodes `(i, j)` and `(i+1, j)`.
    H(usize, usize),
    /// Between lattice nodes `(i, j)` and `(i, j+1)`.
    V(usize, usize),
}

/// Marching squares on the lattice of cell centres with members inside.
/// Crossings sit at lattice-edge midpoints; saddles keep diagonal members
/// connected, matching the 8-connectivity of [`components`].
pub fn boundary_trace(grid: &RegionGrid) -> BoundarySample {
    let (nx, ny) = (grid.nx, grid.ny);
    let inside = |i: usize, j: usize| grid.cells[j * nx + i].is_member();
    let point = |key: EdgeKey| -> C64 {
        match key {
            EdgeKey::H(i, j) => 0.5 * (grid.center(i, j) + grid.center(i + 1, j)),
            EdgeKey::V(i, j) => 0.5 * (grid.center(i, j) + grid.center(i, j + 1)),
        }
    };
    let mut next: HashMap<EdgeKey, EdgeKey> = HashMap::new();
    let mut starts: Vec<EdgeKey> = Vec::new();
    for j in 0..ny.saturating_sub(1) {
        for i in 0..nx.saturating_sub(1) {
            let corner = [inside(i, j), inside(i + 1, j), inside(i + 1, j + 1), inside(i, j + 1)];
            let edges = [
                EdgeKey::H(i, j),
                EdgeKey::V(i + 1, j),
                EdgeKey::H(i, j + 1),
                EdgeKey::V(i, j),
            ];
            for t in 0..4 {
                if corner[t] && !corner[(t + 1) % 4] {
                    // Leave through edge t, enter through the next out→in edge.
                    for s in 1..4 {
                        let u = (t + s) % 4;
                        if !corner[u] && corner[(u + 1) % 4] {
                            next.insert(edges[t], edges[u]);
                            starts.push(edges[t]);
                            break;
                        }
                    }
                }
            }
        }
    }
    let ends: std::collections::HashSet<EdgeKey> = next.values().copied().collect();
    let mut used: std::collections::HashSet<EdgeKey> = std::collections::HashSet::new();
    let mut polylines = Vec::new();
    let mut clipped = false;
    let mut ordered: Vec<EdgeKey> = starts.iter().copied().filter(|s| !ends.contains(s)).collect();
    ordered.extend(starts.iter().copied().filter(|s| ends.contains(s)));
    for start in ordered {
        if used.contains(&start) {
            continue;
        }
        let mut pts = vec![point(start)];
        used.insert(start);
        let mut cur = start;
        let mut closed = false;
        while let Some(&nk) = next.get(&cur) {
            if nk == start {
                closed = true;
                break;
            }
            pts.push(point(nk));
            if !used.insert(nk) {
                break;
            }
            cur = nk;
        }
        if !closed {
            clipped = true;
        }
        polylines.push(Polyline { points: pts, closed });
    }
    let border_member =
        (0..nx).any(|i| inside(i, 0) || inside(i, ny - 1)) || (0..ny).any(|j| inside(0, j) || inside(nx - 1, j));
    BoundarySample {
        polylines,
        clipped: clipped || border_member,
    }
}

/// A boundary vertex where the traced curve turns sharply towards the region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpPoint {
    pub point: C64,
    pub turning_angle: f64,
}

/// Heuristic sharp-point detector on traced boundaries: the turning angle at
/// each vertex is measured between the chords to the vertices `window_len`
/// steps behind and ahead; local maxima at or above `angle_threshold` are
/// kept, one per `window_len` neighbourhood. Only convex turns (towards the
/// region) count.
pub fn sharp_points_poly(boundary: &BoundarySample, window_len: usize, angle_threshold: f64) -> Vec<SharpPoint> {
    let w = window_len.max(1);
    let mut out = Vec::new();
    for line in &boundary.polylines {
        let p = &line.points;
        let len = p.len();
        if len < 2 * w + 1 {
            continue;
        }
        let turning = |i: usize| -> Option<f64> {
            let (a, b) = if line.closed {
                (p[(i + len - w) % len], p[(i + w) % len])
            } else {
                if i < w || i + w >= len {
                    return None;
                }
                (p[i - w], p[i + w])
            };
            let inc = p[i] - a;
            let outg = b - p[i];
            if inc.norm() == 0.0 || outg.norm() == 0.0 {
                return None;
            }
            Some((outg / inc).arg())
        };
        let angles: Vec<Option<f64>> = (0..len).map(turning).collect();
        let mut candidates: Vec<usize> = (0..len)
            .filter(|&i| angles[i].is_some_and(|a| a >= angle_threshold))
            .collect();
        candidates.sort_by(|&x, &y| angles[y].unwrap().total_cmp(&angles[x].unwrap()).then(x.cmp(&y)));
        let mut taken: Vec<usize> = Vec::new();
        for i in candidates {
            let near = taken.iter().any(|&t| {
                let d = i.abs_diff(t);
                let d = if line.closed { d.min(len - d) } else { d };
                d <= w
            });
            if !near {
                taken.push(i);
            }
        }
        taken.sort_unstable();
        out.extend(taken.into_iter().map(|i| SharpPoint {
            point: p[i],
            turning_angle: angles[i].unwrap(),
        }));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InclusionPoint {
    pub point: C64,
    pub status_l: Status,
    /// `None` when the point is not a member of `Λ_k(L)` (nothing to check).
    pub status_companion: Option<Status>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OriginCheck {
    /// Degree one: the companion pencil is `L` itself and `0` need not be a member.
    NotApplicable,
    Checked {
        status: Status,
        pass: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct InclusionReport {
    pub points: Vec<InclusionPoint>,
    pub origin: OriginCheck,
}

impl InclusionReport {
    pub fn passed(&self) -> bool {
        self.points.iter().all(|p| p.pass) && !matches!(self.origin, OriginCheck::Checked { pass: false, .. })
    }
}

/// Checks `Λ_k(L) ∪ {0} ⊆ Λ_k(C_L)` on the given points: every member of
/// `Λ_k(L)` among them must be a member for the companion pencil, and for
/// degree `m ≥ 2` so must the origin.
pub fn companion_inclusion_check(
    l: &MatrixPolynomial,
    k: usize,
    test_points: &[C64],
    opts: &MemberOptions,
) -> Result<InclusionReport> {
    check_rank(l, k)?;
    let pencil = l.companion()?.to_polynomial()?;
    let mut points = Vec::with_capacity(test_points.len());
    for &z in test_points {
        let status_l = member(l, k, z, opts)?.status;
        let (status_companion, pass) = if status_l.is_member() {
            let s = member(&pencil, k, z, opts)?.status;
            (Some(s), s.is_member())
        } else {
            (None, true)
        };
        points.push(InclusionPoint {
            point: z,
            status_l,
            status_companion,
            pass,
        });
    }
    let origin = if l.degree() >= 2 {
        let status = member(&pencil, k, C64::new(0.0, 0.0), opts)?.status;
        OriginCheck::Checked {
            status,
            pass: status.is_member(),
        }
    } else {
        OriginCheck::NotApplicable
    };
    Ok(InclusionReport { points, origin })
}

#[derive(Debug, Clone, PartialEq)]
pub enum JointRoots {
    /// Roots of `Σ μ_j λ^j` with their membership in `Λ_k(L)`.
    Roots(Vec<(C64, MemberResult)>),
    /// The tuple is all zero: `Q` spans a common isotropic subspace and every
    /// complex number is a member.
    AllOfC,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointTuple {
    /// `μ_j = tr(Q*A_jQ)/k`, index = power.
    pub tuple: Vec<C64>,
    /// `max_j ‖Q*A_jQ − μ_j I_k‖_F`.
    pub defect: f64,
    pub roots: JointRoots,
}

/// Verifies that `Q*A_jQ = μ_j I_k` for all `j` (up to `tol`) and checks that
/// the roots of `Σ μ_j λ^j` are members of `Λ_k(L)`.
pub fn verify_joint_tuple(l: &MatrixPolynomial, q: &Isometry, tol: f64, opts: &MemberOptions) -> Result<JointTuple> {
    if q.n() != l.n() {
        return Err(Error::Dimension(format!(
            "isometry has {} rows, polynomial size is {}",
            q.n(),
            l.n()
        )));
    }
    let k = q.k();
    let mut tuple = Vec::with_capacity(l.degree() + 1);
    let mut defect: f64 = 0.0;
    for a in l.coeffs() {
        let (mu, d) = a.congruence(q.matrix()).scalar_defect();
        tuple.push(mu);
        defect = defect.max(d);
    }
    if defect > tol {
        return Err(Error::NotAJointTuple { defect });
    }
    let mass: f64 = l.coeffs().iter().map(CMatrix::frobenius_norm).sum();
    let poly = ScalarPoly::with_cutoff(tuple.clone(), ZERO_REL * mass);
    let roots = if poly.is_zero() {
        JointRoots::AllOfC
    } else {
        let mut out = Vec::new();
        for r in poly.roots()? {
            out.push((r, member(l, k, r, opts)?));
        }
        JointRoots::Roots(out)
    };
    Ok(JointTuple { tuple, defect, roots })
}
