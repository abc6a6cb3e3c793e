//! Acceptance criteria, one PASS/FAIL line each. Runs as a plain binary so the
//! lines are always printed; the process fails if any criterion fails.

mod common;

use std::f64::consts::TAU;
use std::time::{Duration, Instant};

use common::*;
use polyrange::hrnr_matrix::{
    member_point, min_support, region_polygon, support_value, MemberOptions, RegionStatus, Status,
};
use polyrange::hrnr_poly::{
    boundedness_check, companion_inclusion_check, components, grid_scan, line_scan, member, montecarlo_region,
    Boundedness, ScanOptions, Window,
};
use polyrange::matpoly::MatrixPolynomial;
use polyrange::numkit::{random_unitary, CMatrix, GaussianStream, Isometry};
use polyrange::sylvester::{build_sylvester, common_roots, CommonRoots, DEFAULT_ROOT_TOL};
use polyrange::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(elapsed: Duration, limit_s: f64, what: &str) -> Result<(), String> {
    check(
        elapsed.as_secs_f64() < limit_s,
        format!("{what} took {:.2} s, limit {limit_s} s", elapsed.as_secs_f64()),
    )
}

fn criterion1() -> Outcome {
    let t = Instant::now();
    let a = example4();
    let region = region_polygon(&a, 2, 4096).map_err(|e| e.to_string())?;
    let empty = region_polygon(&a, 3, 4096).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    check(
        region.status == RegionStatus::Polygon,
        format!("k=2 status {:?}", region.status),
    )?;
    let oracle = normal_rank_k_range(&example4_eigenvalues(), 2);
    let h = hausdorff(&region.vertices, &oracle);
    check(h <= 1e-6, format!("Hausdorff {h:e} > 1e-6"))?;
    check(
        empty.status == RegionStatus::Empty,
        format!("k=3 status {:?}", empty.status),
    )?;
    within(elapsed, 5.0, "two polygons")?;
    Ok(format!("Hausdorff {h:.1e}, k=3 Empty, {:.2} s", elapsed.as_secs_f64()))
}

fn criterion2() -> Outcome {
    let t = Instant::now();
    let l = example2_ii();
    let opts = ScanOptions::default();
    let at_zero = member(&l, 2, c(0.0, 0.0), &opts.member).map_err(|e| e.to_string())?;
    check(
        at_zero.status.is_member(),
        format!("member(L,2,0) = {}", at_zero.status),
    )?;
    let window = Window::new(-2.0, 2.0, -2.0, 2.0).unwrap();
    let grid = grid_scan(&l, 2, &window, 21, 21, &opts).map_err(|e| e.to_string())?;
    let zero_cell = grid.cell_of(c(0.0, 0.0)).unwrap();
    let mut bad = Vec::new();
    for j in 0..21 {
        for i in 0..21 {
            if (i, j) != zero_cell && grid.status(i, j) != Status::Out {
                bad.push(grid.center(i, j));
            }
        }
    }
    let elapsed = t.elapsed();
    check(bad.is_empty(), format!("non-OUT cells away from 0: {bad:?}"))?;
    within(elapsed, 2.0, "criterion 2")?;
    Ok(format!(
        "member(L,2,0) = {}, 440 cells OUT, {:.3} s",
        at_zero.status,
        elapsed.as_secs_f64()
    ))
}

fn criterion3() -> Outcome {
    let l = example3();
    let opts = ScanOptions::default();
    let samples = line_scan(&l, 2, c(0.0, -4.0), c(0.0, 4.0), 161, &opts).map_err(|e| e.to_string())?;
    let spacing = 8.0 / 160.0;
    for s in &samples {
        let y = s.point.im;
        let member = s.result.status.is_member();
        let near_end = (y.abs() - 2.0).abs() <= spacing;
        let expected = y.abs() >= 2.0 || y == 0.0;
        if !near_end {
            check(
                member == expected,
                format!("y = {y}: {} (expected member = {expected})", s.result.status),
            )?;
        }
    }
    let window = Window::new(-1.0, 1.0, -4.5, 4.5).unwrap();
    let mut grid = grid_scan(&l, 2, &window, 20, 90, &opts).map_err(|e| e.to_string())?;
    let interior = grid.cells.iter().filter(|s| s.is_member()).count();
    grid.overlay(&samples);
    let comps = components(&grid);
    check(comps.count == 3, format!("component count {}", comps.count))?;
    Ok(format!(
        "line scan matches |y|>=2 plus y=0; {interior} member cells before fusing the line, 3 components after"
    ))
}

fn criterion4() -> Outcome {
    let l = example2_i();
    let opts = ScanOptions::default();
    let bounded = boundedness_check(&l, 2, &opts.member).map_err(|e| e.to_string())?;
    let Boundedness::Bounded(cert) = bounded else {
        return Err(format!("boundedness_check returned {bounded:?}"));
    };
    let window = Window::new(-6.0, 2.0, -4.0, 4.0).unwrap();
    let grid = grid_scan(&l, 2, &window, 200, 200, &opts).map_err(|e| e.to_string())?;
    let inside = grid.count(Status::In);
    check(inside > 0, "no IN cell")?;
    let (nx, ny) = (grid.nx, grid.ny);
    let edge_member = (0..nx).any(|i| grid.status(i, 0).is_member() || grid.status(i, ny - 1).is_member())
        || (0..ny).any(|j| grid.status(0, j).is_member() || grid.status(nx - 1, j).is_member());
    check(!edge_member, "member cells touch the window edge")?;
    for z in window.corners() {
        let r = member(&l, 2, z, &opts.member).map_err(|e| e.to_string())?;
        check(r.status == Status::Out, format!("corner {z} is {}", r.status))?;
    }
    Ok(format!(
        "Bounded (radius {:.2}), {inside} IN cells strictly inside, corners OUT",
        cert.radius
    ))
}

fn criterion5() -> Outcome {
    // Example 2 II.
    let l = example2_ii();
    let q = Isometry::new(example2_ii_q(), 1e-12).map_err(|e| e.to_string())?;
    let rec = build_sylvester(&l.scalar_entries(&q).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let s = 3.0 * 2f64.sqrt() / 4.0;
    let displayed = [[1.0, 3.0 / 8.0], [1.0, 1.0 / 3.0], [0.0, -s], [0.0, -s]];
    check(rec.matrix.rows() == 4 && rec.matrix.cols() == 2, "Example 2 II shape")?;
    let mut err: f64 = 0.0;
    for (i, row) in displayed.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            err = err.max((rec.matrix[(i, j)] - c(v, 0.0)).norm());
        }
    }
    check(err <= 1e-12, format!("Example 2 II entries differ by {err:e}"))?;
    check(
        rec.rank == 2 && rec.delta == 0,
        format!("Example 2 II rank {} delta {}", rec.rank, rec.delta),
    )?;

    // Example 2 III.
    let l = example2_iii();
    let q = Isometry::new(example2_iii_q(), 1e-12).map_err(|e| e.to_string())?;
    let rec = build_sylvester(&l.scalar_entries(&q).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    check(
        rec.rank == 1 && rec.delta == 1,
        format!("Example 2 III rank {} delta {}", rec.rank, rec.delta),
    )?;

    // Example 3.
    let l = example3();
    let q = Isometry::coordinate(4, &[0, 1]).unwrap();
    let rec = build_sylvester(&l.scalar_entries(&q).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    check(rec.delta == 2, format!("Example 3 delta {}", rec.delta))?;
    let roots = common_roots(&l, 2, &q, DEFAULT_ROOT_TOL).map_err(|e| e.to_string())?;
    let CommonRoots::Roots(roots) = roots else {
        return Err("Example 3 reported all of C".into());
    };
    check(roots.len() == 2, format!("Example 3 roots {roots:?}"))?;
    for expect in [c(0.0, 0.0), c(0.0, 2.0)] {
        check(
            roots.iter().any(|r| (r - expect).norm() < 1e-10),
            format!("missing root {expect}"),
        )?;
    }
    for &r in &roots {
        let m = member(&l, 2, r, &MemberOptions::default()).map_err(|e| e.to_string())?;
        check(m.status.is_member(), format!("root {r} is {}", m.status))?;
    }
    Ok("Example 2 II rank 2/delta 0 (entries within 1e-12), Example 2 III rank 1/delta 1, Example 3 delta 2 with roots {0, 2i}".into())
}

fn criterion6() -> Outcome {
    let t = Instant::now();
    let l = example1();
    let opts = ScanOptions::default();
    let window = Window::new(-2.0, 2.0, -2.0, 2.0).unwrap();
    let grid = grid_scan(&l, 2, &window, 150, 150, &opts).map_err(|e| e.to_string())?;
    let mut strict = false;
    let mut extra = Vec::new();
    for seed in [1u64, 2, 3] {
        let mc = montecarlo_region(&l, 2, 400, &window, 150, 150, seed, &opts).map_err(|e| e.to_string())?;
        for (idx, (&g, &m)) in grid.cells.iter().zip(&mc.cells).enumerate() {
            check(
                !(g == Status::In && m != Status::In),
                format!("seed {seed}: cell {idx} IN in the scan only"),
            )?;
        }
        let more = mc.count(Status::In)
            - grid
                .cells
                .iter()
                .zip(&mc.cells)
                .filter(|(g, m)| **g == Status::In && **m == Status::In)
                .count();
        strict |= more > 0;
        extra.push(more);
    }
    let elapsed = t.elapsed();
    check(strict, "Monte-Carlo region equals the scan for every seed")?;
    within(elapsed, 60.0, "criterion 6")?;
    Ok(format!(
        "{} IN cells, Monte-Carlo extras per seed {extra:?}, {:.2} s",
        grid.count(Status::In),
        elapsed.as_secs_f64()
    ))
}

fn random_polynomial(seed: u64, n: usize, m: usize) -> MatrixPolynomial {
    let mut g = GaussianStream::new(seed, 0);
    MatrixPolynomial::new((0..=m).map(|_| g.gaussian_matrix(n, n)).collect()).unwrap()
}

/// Status if the point is clear of the zero band by a factor 10, else `None`.
fn clear_status(l: &MatrixPolynomial, k: usize, mu: C64, opts: &MemberOptions) -> Option<Status> {
    let r = member(l, k, mu, opts).ok()?;
    let g = min_support(&l.evaluate(mu), k, opts).ok()?;
    (g.value.abs() > 10.0 * r.margin).then_some(r.status)
}

fn criterion7() -> Outcome {
    let opts = MemberOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut compared = [0usize; 3];
    let mut violations = Vec::new();
    let mut inclusion_points = 0usize;
    for inst in 0..10 {
        let n = rng.random_range(2..=5usize);
        let m = rng.random_range(1..=3usize);
        let k = rng.random_range(1..=n.min(3));
        let l = random_polynomial(1000 + inst, n, m);
        let alpha = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let shifted = l.shift(alpha);
        let reversed = l.reverse();
        let mut in_points = Vec::new();
        for _ in 0..50 {
            let mu = c(rng.random_range(-2.5..2.5), rng.random_range(-2.5..2.5));
            let Some(s) = clear_status(&l, k, mu, &opts) else {
                continue;
            };
            if s == Status::In {
                in_points.push(mu);
            }
            if k >= 2 && s == Status::In {
                compared[0] += 1;
                if !member(&l, k - 1, mu, &opts).unwrap().status.is_member() {
                    violations.push(format!("nesting: instance {inst}, mu {mu}"));
                }
            }
            if let Some(t) = clear_status(&shifted, k, mu - alpha, &opts) {
                compared[1] += 1;
                if t != s {
                    violations.push(format!("shift: instance {inst}, mu {mu}: {s} vs {t}"));
                }
            }
            if mu.norm() > 1e-3 && reversed.degree() == m {
                if let Some(t) = clear_status(&reversed, k, mu.inv(), &opts) {
                    compared[2] += 1;
                    if t != s {
                        violations.push(format!("reversal: instance {inst}, mu {mu}: {s} vs {t}"));
                    }
                }
            }
        }
        inclusion_points += in_points.len();
        let report = companion_inclusion_check(&l, k, &in_points, &opts).map_err(|e| e.to_string())?;
        if !report.passed() {
            violations.push(format!("companion inclusion: instance {inst}: {report:?}"));
        }
    }
    check(
        violations.is_empty(),
        format!("{} violations: {:?}", violations.len(), violations),
    )?;
    check(
        compared.iter().all(|&x| x > 0),
        format!("too few comparisons {compared:?}"),
    )?;
    Ok(format!(
        "nesting/shift/reversal comparisons {compared:?}, companion inclusion on {inclusion_points} IN points, zero violations"
    ))
}

fn criterion8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    let mut statuses = Vec::new();
    for inst in 0..10 {
        let n = rng.random_range(2..=6usize);
        let k = rng.random_range(1..=n.min(3));
        let eigs: Vec<C64> = (0..n)
            .map(|_| c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)))
            .collect();
        let u = random_unitary(n, 500 + inst);
        let a = (&(&u * &CMatrix::diag(&eigs)) * &u.adjoint()).clone();
        let region = region_polygon(&a, k, 4096).map_err(|e| e.to_string())?;
        let oracle = normal_rank_k_range(&eigs, k);
        statuses.push(region.status);
        if oracle.is_empty() {
            check(
                region.status == RegionStatus::Empty,
                format!(
                    "instance {inst} (n={n}, k={k}): oracle empty, got {:?} {:?} eigs {eigs:?}",
                    region.status, region.vertices
                ),
            )?;
            continue;
        }
        let h = hausdorff(&region.vertices, &oracle);
        check(
            h <= 1e-6,
            format!(
                "instance {inst} (n={n}, k={k}): Hausdorff {h:e}, {:?} {:?} vs oracle {oracle:?}, eigs {eigs:?}",
                region.status, region.vertices
            ),
        )?;
        worst = worst.max(h);
    }
    let opts = MemberOptions::default();
    let mut certificates = 0;
    for inst in 0..10 {
        let n = rng.random_range(2..=6usize);
        let k = rng.random_range(1..=n.min(3));
        let a = GaussianStream::new(900 + inst, 0).gaussian_matrix(n, n);
        for _ in 0..20 {
            let z = c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let r = member_point(&a, k, z, &opts).map_err(|e| e.to_string())?;
            if r.status == Status::Out {
                let shifted = &a - &CMatrix::scalar(n, z);
                let v = support_value(&shifted, k, r.theta).map_err(|e| e.to_string())?;
                check(v < 0.0, format!("instance {inst}: witness {} has support {v}", r.theta))?;
                check(r.theta >= 0.0 && r.theta < TAU, "witness angle out of range")?;
                certificates += 1;
            }
        }
    }
    Ok(format!(
        "normal oracle worst Hausdorff {worst:.1e} over statuses {statuses:?}; {certificates} OUT certificates verified"
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 Example 4 polygon vs eigenvalue-hull oracle", criterion1),
        ("2 Example 2 II singleton", criterion2),
        ("3 Example 3 components", criterion3),
        ("4 Example 2 I boundedness", criterion4),
        ("5 Sylvester regressions", criterion5),
        ("6 Monte-Carlo sandwich", criterion6),
        ("7 property suites", criterion7),
        ("8 matrix-level sanity", criterion8),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{:.2} s]", t.elapsed().as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
