//! Planar helpers on complex numbers: half-plane clipping of convex polygons,
//! convex hulls and distances.

use crate::C64;

/// The closed half-plane `{z : Re(e^{iθ} z) ≤ h}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub theta: f64,
    pub h: f64,
}

impl HalfPlane {
    /// Signed excess `Re(e^{iθ} z) − h`; positive outside.
    pub fn excess(&self, z: C64) -> f64 {
        z.re * self.theta.cos() - z.im * self.theta.sin() - self.h
    }

    /// Point of the boundary line closest to the origin.
    pub fn foot(&self) -> C64 {
        C64::from_polar(self.h, -self.theta)
    }

    /// Unit direction of the boundary line, oriented so the half-plane lies on
    /// its left.
    pub fn direction(&self) -> C64 {
        C64::from_polar(1.0, -self.theta) * C64::new(0.0, 1.0)
    }
}

/// Convex polygon whose edge `i` runs from `vertices[i]` to
/// `vertices[i+1 mod len]` along line `edge_ids[i]`.
#[derive(Debug, Clone)]
pub(crate) struct ClipPolygon {
    pub vertices: Vec<C64>,
    pub edge_ids: Vec<usize>,
}

impl ClipPolygon {
    /// Axis-aligned square centred at `c`, edge ids `usize::MAX`.
    pub fn square(c: C64, half: f64) -> Self {
        let v = vec![
            c + C64::new(-half, -half),
            c + C64::new(half, -half),
            c + C64::new(half, half),
            c + C64::new(-half, half),
        ];
        ClipPolygon {
            vertices: v,
            edge_ids: vec![usize::MAX; 4],
        }
    }

    /// Sutherland–Hodgman step against one half-plane labelled `id`.
    pub fn clip(&mut self, hp: &HalfPlane, id: usize) {
        let n = self.vertices.len();
        if n == 0 {
            return;
        }
        let mut out_v = Vec::with_capacity(n + 1);
        let mut out_e = Vec::with_capacity(n + 1);
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let e = self.edge_ids[i];
            let dp = hp.excess(p);
            let dq = hp.excess(q);
            let p_in = dp <= 0.0;
            let q_in = dq <= 0.0;
            match (p_in, q_in) {
                (true, true) => {
                    out_v.push(p);
                    out_e.push(e);
                }
                (true, false) => {
                    out_v.push(p);
                    if dp < 0.0 {
                        out_e.push(e);
                        out_v.push(p + (q - p) * (dp / (dp - dq)));
                    }
                    out_e.push(id);
                }
                (false, true) => {
                    // When q lies on the line it is emitted by the next edge.
                    if dq < 0.0 {
                        out_v.push(p + (q - p) * (dp / (dp - dq)));
                        out_e.push(e);
                    }
                }
                (false, false) => {}
            }
        }
        self.vertices = out_v;
        self.edge_ids = out_e;
    }
}

/// Twice the signed area of triangle `(a, b, c)`; positive when counterclockwise.
pub fn cross(a: C64, b: C64, c: C64) -> f64 {
    let u = b - a;
    let v = c - a;
    u.re * v.im - u.im * v.re
}

/// Convex hull (Andrew's monotone chain), counterclockwise, collinear points
/// dropped. Fewer than three distinct points come back as-is (deduplicated).
pub fn convex_hull(points: &[C64]) -> Vec<C64> {
    let mut pts: Vec<C64> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<C64> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &C64>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Distance from `z` to the segment `[a, b]`.
pub fn point_segment_distance(z: C64, a: C64, b: C64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + d * t)).norm()
}

/// Distance from `z` to a convex polygon (filled), given counterclockwise.
/// Degenerate inputs (one or two points) are treated as a point or segment.
pub fn distance_to_convex(z: C64, poly: &[C64]) -> f64 {
    match poly.len() {
        0 => f64::INFINITY,
        1 => (z - poly[0]).norm(),
        2 => point_segment_distance(z, poly[0], poly[1]),
        n => {
            let inside = (0..n).all(|i| cross(poly[i], poly[(i + 1) % n], z) >= 0.0);
            if inside {
                return 0.0;
            }
            (0..n)
                .map(|i| point_segment_distance(z, poly[i], poly[(i + 1) % n]))
                .fold(f64::INFINITY, f64::min)
        }
    }
}

/// Hausdorff distance between two filled convex polygons.
pub fn hausdorff_convex(a: &[C64], b: &[C64]) -> f64 {
    let ab = a.iter().map(|&z| distance_to_convex(z, b)).fold(0.0, f64::max);
    let ba = b.iter().map(|&z| distance_to_convex(z, a)).fold(0.0, f64::max);
    ab.max(ba)
}

/// Largest distance between two points of the set.
pub fn diameter(points: &[C64]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, &p) in points.iter().enumerate() {
        for &q in &points[i + 1..] {
            d = d.max((p - q).norm());
        }
    }
    d
}
