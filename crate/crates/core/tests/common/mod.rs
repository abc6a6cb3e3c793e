//! Example polynomials and independent oracles shared by the integration tests.
#![allow(dead_code)]

use polyrange::matpoly::MatrixPolynomial;
use polyrange::numkit::CMatrix;
use polyrange::C64;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn real(rows: &[&[f64]]) -> CMatrix {
    CMatrix::from_real_rows(rows).unwrap()
}

fn complex(rows: &[&[(f64, f64)]]) -> CMatrix {
    CMatrix::from_rows(
        &rows
            .iter()
            .map(|r| r.iter().map(|&(a, b)| c(a, b)).collect())
            .collect::<Vec<_>>(),
    )
    .unwrap()
}

/// The 5×5 cubic `3Iλ³ + A_2λ² + A_1λ + A_0`.
pub fn example1() -> MatrixPolynomial {
    let a2 = complex(&[
        &[(1.0, 0.0), (2.0, 0.0), (3.0, 0.0), (4.0, 0.0), (5.0, 0.0)],
        &[(0.0, 0.0), (-1.0, 0.0), (-2.0, 0.0), (-3.0, 0.0), (-4.0, 0.0)],
        &[(0.0, 1.0), (0.0, 2.0), (0.0, 3.0), (0.0, 4.0), (0.0, 5.0)],
        &[(-2.0, 0.0), (1.0, 0.0), (2.0, 0.0), (1.0, 0.0), (2.0, 0.0)],
        &[(0.3, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)],
    ]);
    let a1 = real(&[
        &[1.0, 2.0, 0.0, 0.0, 0.0],
        &[2.0, 3.0, 4.0, 0.0, 0.0],
        &[0.0, 4.0, 5.0, 6.0, 0.0],
        &[0.0, 0.0, 6.0, 7.0, 8.0],
        &[0.0, 0.0, 0.0, 7.0, 8.0],
    ]);
    let a0 = complex(&[
        &[(4.0, 0.0), (0.0, -1.0), (1.0, 0.0), (0.0, 0.0), (-2.0, 0.0)],
        &[(0.0, 1.0), (0.0, 2.0), (0.0, -6.0), (1.0, 0.0), (0.0, 0.0)],
        &[(0.0, 0.0), (1.0, 0.0), (4.0, 0.0), (2.0, 0.0), (0.0, 0.0)],
        &[(0.0, -1.0), (0.0, 3.0), (0.0, 0.0), (2.0, 0.0), (4.0, 0.0)],
        &[(3.0, 0.0), (1.0, 0.0), (2.0, 0.0), (4.0, 0.0), (5.0, 0.0)],
    ]);
    MatrixPolynomial::new(vec![a0, a1, a2, CMatrix::scalar(5, c(3.0, 0.0))]).unwrap()
}

/// 4×4 quadratic with `0 ∉ Λ_2(A_2)`.
pub fn example2_i() -> MatrixPolynomial {
    let a2 = complex(&[
        &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)],
        &[(0.0, 0.0), (0.0, 1.0), (0.0, 0.0), (0.0, 0.0)],
        &[(2.0, 0.0), (0.0, 1.0), (0.0, 0.0), (2.0, 0.0)],
        &[(0.0, -1.0), (0.0, 0.0), (-2.0, 0.0), (8.0, 0.0)],
    ]);
    let a1 = complex(&[
        &[(0.0, 1.0), (2.0, 0.0), (0.0, 1.0), (3.0, 0.0)],
        &[(3.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)],
        &[(0.0, 0.0), (4.0, 0.0), (5.0, 0.0), (0.0, 0.0)],
        &[(0.0, 1.0), (0.0, 0.0), (0.0, 1.0), (0.0, 0.0)],
    ]);
    let a0 = real(&[
        &[1.0, 2.0, 3.0, 4.0],
        &[2.0, 3.0, 4.0, 5.0],
        &[3.0, 4.0, 5.0, 6.0],
        &[5.0, 6.0, 7.0, 8.0],
    ]);
    MatrixPolynomial::new(vec![a0, a1, a2]).unwrap()
}

/// Diagonal pencil `diag(3,0,0,4)λ + diag(0,2,−1,0)`; `Λ_2 = {0}`.
pub fn example2_ii() -> MatrixPolynomial {
    let a1 = CMatrix::diag(&[c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(4.0, 0.0)]);
    let a0 = CMatrix::diag(&[c(0.0, 0.0), c(2.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]);
    MatrixPolynomial::new(vec![a0, a1]).unwrap()
}

/// The isometry `Q = [q1 q2]` used with [`example2_ii`].
pub fn example2_ii_q() -> CMatrix {
    let s6 = 6f64.sqrt() / 4.0;
    let r3 = 1.0 / 3f64.sqrt();
    real(&[&[0.0, r3], &[-s6, r3], &[s6, r3], &[0.5, 0.0]])
}

/// `I_2 ⊗ (Bλ + I_2)` with `B = [[1, 1], [0, 0]]`.
pub fn example2_iii() -> MatrixPolynomial {
    let b = real(&[&[1.0, 1.0], &[0.0, 0.0]]);
    let a1 = b.direct_sum(&b);
    MatrixPolynomial::new(vec![CMatrix::identity(4), a1]).unwrap()
}

/// `Q = [x ⊕ 0, 0 ⊕ x]`, `x = (1, i)/√2`, so `Q*(I_2 ⊗ B)Q = zI_2` with `z = (1+i)/2`.
pub fn example2_iii_q() -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    complex(&[
        &[(h, 0.0), (0.0, 0.0)],
        &[(0.0, h), (0.0, 0.0)],
        &[(0.0, 0.0), (h, 0.0)],
        &[(0.0, 0.0), (0.0, h)],
    ])
}

/// `Dλ² + 4Iλ`, `D = diag(2i, 2i, −2i, −2i)`.
pub fn example3() -> MatrixPolynomial {
    let d = CMatrix::diag(&[c(0.0, 2.0), c(0.0, 2.0), c(0.0, -2.0), c(0.0, -2.0)]);
    MatrixPolynomial::new(vec![CMatrix::zeros(4, 4), CMatrix::scalar(4, c(4.0, 0.0)), d]).unwrap()
}

pub fn example4_eigenvalues() -> Vec<C64> {
    vec![c(3.0, 4.0), c(4.0, -1.0), c(-3.0, -2.0), c(-3.0, 0.0), c(-3.0, 3.0)]
}

pub fn example4() -> CMatrix {
    CMatrix::diag(&example4_eigenvalues())
}

// ---------------------------------------------------------------------------
// Oracles: plain planar geometry, independent of the library's clipping code.

fn orient(a: C64, b: C64, p: C64) -> f64 {
    (b.re - a.re) * (p.im - a.im) - (b.im - a.im) * (p.re - a.re)
}

/// Monotone-chain hull, counterclockwise. Points closer than `1e-9` are
/// merged; a collinear set comes back as its two extreme points.
pub fn hull(points: &[C64]) -> Vec<C64> {
    let mut pts: Vec<C64> = Vec::new();
    for &p in points {
        if !pts.iter().any(|&q: &C64| (q - p).norm() < 1e-9) {
            pts.push(p);
        }
    }
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    if pts.len() < 3 {
        return pts;
    }
    let chain = |it: &mut dyn Iterator<Item = C64>| {
        let mut out: Vec<C64> = Vec::new();
        for p in it {
            while out.len() >= 2 && orient(out[out.len() - 2], out[out.len() - 1], p) <= 1e-12 {
                out.pop();
            }
            out.push(p);
        }
        out.pop();
        out
    };
    let mut h = chain(&mut pts.iter().copied());
    h.extend(chain(&mut pts.iter().rev().copied()));
    if h.len() < 3 {
        return vec![pts[0], pts[pts.len() - 1]];
    }
    h
}

fn line_intersection(a: C64, b: C64, p: C64, q: C64) -> Option<C64> {
    let d = b - a;
    let e = q - p;
    let denom = d.re * e.im - d.im * e.re;
    if denom.abs() < 1e-14 {
        return None;
    }
    let w = p - a;
    Some(a + d * ((w.re * e.im - w.im * e.re) / denom))
}

/// `⋂` over all `(n−k+1)`-subsets of the hull of the chosen eigenvalues:
/// `Λ_k` of a normal matrix. Every vertex of such an intersection is an
/// eigenvalue or a crossing of two lines through eigenvalue pairs, so the
/// candidates lying in every hull are collected and wrapped.
pub fn normal_rank_k_range(eigs: &[C64], k: usize) -> Vec<C64> {
    let n = eigs.len();
    let size = n - k + 1;
    let hulls: Vec<Vec<C64>> = (0u32..(1 << n))
        .filter(|mask| mask.count_ones() as usize == size)
        .map(|mask| {
            hull(
                &(0..n)
                    .filter(|&i| mask & (1 << i) != 0)
                    .map(|i| eigs[i])
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let mut lines = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            lines.push((eigs[i], eigs[j]));
        }
    }
    let mut candidates: Vec<C64> = eigs.to_vec();
    for (x, &(a, b)) in lines.iter().enumerate() {
        for &(p, q) in &lines[x + 1..] {
            candidates.extend(line_intersection(a, b, p, q));
        }
    }
    let kept: Vec<C64> = candidates
        .into_iter()
        .filter(|&z| hulls.iter().all(|h| dist_to_filled(z, h) <= 1e-9))
        .collect();
    hull(&kept)
}

fn seg_dist(z: C64, a: C64, b: C64) -> f64 {
    let d = b - a;
    if d.norm() == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a).re * d.re + (z - a).im * d.im) / d.norm_sqr()).clamp(0.0, 1.0);
    (z - a - d * t).norm()
}

fn dist_to_filled(z: C64, poly: &[C64]) -> f64 {
    let n = poly.len();
    if n == 0 {
        return f64::INFINITY;
    }
    if n == 1 {
        return (z - poly[0]).norm();
    }
    if n >= 3 && (0..n).all(|i| orient(poly[i], poly[(i + 1) % n], z) >= 0.0) {
        return 0.0;
    }
    (0..n)
        .map(|i| seg_dist(z, poly[i], poly[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

/// Hausdorff distance of two filled convex polygons (vertex lists).
pub fn hausdorff(a: &[C64], b: &[C64]) -> f64 {
    let x = a.iter().map(|&z| dist_to_filled(z, b)).fold(0.0, f64::max);
    let y = b.iter().map(|&z| dist_to_filled(z, a)).fold(0.0, f64::max);
    x.max(y)
}
