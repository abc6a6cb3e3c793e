mod common;

use common::*;
use polyrange::exec::Exec;
use polyrange::hrnr_matrix::{member_point, min_support, MemberOptions, Status};
use polyrange::hrnr_poly::{
    boundary_trace, boundedness_check, companion_inclusion_check, components, grid_scan, line_scan, member,
    montecarlo_region, sharp_points_poly, verify_joint_tuple, Boundedness, JointRoots, OriginCheck, ScanOptions,
    Window,
};
use polyrange::matpoly::MatrixPolynomial;
use polyrange::numkit::{random_isometry, CMatrix, GaussianStream, Isometry};
use polyrange::{Error, C64};
use proptest::prelude::*;

fn scan(exec: Exec) -> ScanOptions {
    ScanOptions {
        member: MemberOptions::default(),
        exec,
    }
}

fn random_poly(seed: u64, n: usize, m: usize) -> MatrixPolynomial {
    let mut g = GaussianStream::new(seed, 0);
    MatrixPolynomial::new((0..=m).map(|_| g.gaussian_matrix(n, n)).collect()).unwrap()
}

#[test]
fn sequential_and_parallel_runs_agree_exactly() {
    let l = example2_i();
    let window = Window::new(-6.0, 2.0, -4.0, 4.0).unwrap();
    let a = grid_scan(&l, 2, &window, 40, 30, &scan(Exec::Sequential)).unwrap();
    let b = grid_scan(&l, 2, &window, 40, 30, &scan(Exec::Parallel)).unwrap();
    assert_eq!(a.cells, b.cells);
    let a = montecarlo_region(&l, 2, 50, &window, 30, 20, 4, &scan(Exec::Sequential)).unwrap();
    let b = montecarlo_region(&l, 2, 50, &window, 30, 20, 4, &scan(Exec::Parallel)).unwrap();
    assert_eq!(a.cells, b.cells);
    let a = line_scan(&l, 2, c(-6.0, 0.0), c(2.0, 0.0), 33, &scan(Exec::Sequential)).unwrap();
    let b = line_scan(&l, 2, c(-6.0, 0.0), c(2.0, 0.0), 33, &scan(Exec::Parallel)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn montecarlo_is_reproducible_per_seed() {
    let l = example1();
    let window = Window::new(-2.0, 2.0, -2.0, 2.0).unwrap();
    let opts = ScanOptions::default();
    let a = montecarlo_region(&l, 2, 40, &window, 25, 25, 11, &opts).unwrap();
    let b = montecarlo_region(&l, 2, 40, &window, 25, 25, 11, &opts).unwrap();
    assert_eq!(a.cells, b.cells);
}

#[test]
fn invalid_arguments_are_rejected() {
    let l = example2_i();
    let opts = ScanOptions::default();
    assert!(Window::new(1.0, 1.0, 0.0, 1.0).is_err());
    assert!(Window::new(0.0, f64::NAN, 0.0, 1.0).is_err());
    let window = Window::new(0.0, 1.0, 0.0, 1.0).unwrap();
    assert!(grid_scan(&l, 2, &window, 0, 5, &opts).is_err());
    assert!(matches!(
        grid_scan(&l, 5, &window, 5, 5, &opts),
        Err(Error::RankOutOfRange { k: 5, n: 4 })
    ));
    assert!(montecarlo_region(&l, 2, 0, &window, 5, 5, 0, &opts).is_err());
    assert!(line_scan(&l, 2, c(0.0, 0.0), c(1.0, 0.0), 1, &opts).is_err());
}

#[test]
fn line_scan_includes_both_ends() {
    let l = example3();
    let samples = line_scan(&l, 2, c(0.0, 2.0), c(0.0, 4.0), 5, &ScanOptions::default()).unwrap();
    let ys: Vec<f64> = samples.iter().map(|s| s.point.im).collect();
    assert_eq!(ys, vec![2.0, 2.5, 3.0, 3.5, 4.0]);
}

#[test]
fn boundedness_certificates() {
    let opts = MemberOptions::default();
    // Singular leading coefficient whose rank-2 range contains 0.
    assert!(matches!(
        boundedness_check(&example2_ii(), 2, &opts).unwrap(),
        Boundedness::Unknown(_)
    ));
    // Monic: Λ_k(I) = {1}, separated from 0 by exactly 1.
    let l = random_poly(3, 3, 2);
    let mut coeffs = l.coeffs().to_vec();
    coeffs[2] = CMatrix::identity(3);
    let monic = MatrixPolynomial::new(coeffs.clone()).unwrap();
    let Boundedness::Bounded(cert) = boundedness_check(&monic, 1, &opts).unwrap() else {
        panic!("monic polynomial not certified bounded");
    };
    assert!((cert.separation - 1.0).abs() < 1e-12);
    let lower = coeffs[0].frobenius_norm().max(coeffs[1].frobenius_norm());
    assert!((cert.radius - (1.0 + lower)).abs() < 1e-10);
    // Nothing of modulus beyond the radius is a member.
    for t in 0..16 {
        let z = C64::from_polar(cert.radius * 1.01, t as f64 * 0.4);
        assert_eq!(member(&monic, 1, z, &opts).unwrap().status, Status::Out);
    }
}

#[test]
fn origin_claim_needs_degree_two() {
    // Iλ − 5I is its own companion pencil and Λ_1 = {5}: the origin is out.
    let l = MatrixPolynomial::pencil_from_matrix(&CMatrix::scalar(2, c(5.0, 0.0))).unwrap();
    let opts = MemberOptions::default();
    assert_eq!(member(&l, 1, c(0.0, 0.0), &opts).unwrap().status, Status::Out);
    let report = companion_inclusion_check(&l, 1, &[c(5.0, 0.0)], &opts).unwrap();
    assert_eq!(report.origin, OriginCheck::NotApplicable);
    assert!(report.passed());
    let report = companion_inclusion_check(&example2_i(), 2, &[c(-2.0, 0.0)], &opts).unwrap();
    assert!(matches!(report.origin, OriginCheck::Checked { pass: true, .. }));
}

#[test]
fn joint_tuples() {
    let opts = MemberOptions::default();
    let l = example3();
    let q = Isometry::coordinate(4, &[0, 1]).unwrap();
    let jt = verify_joint_tuple(&l, &q, 1e-12, &opts).unwrap();
    assert!(jt.defect < 1e-15);
    assert!((jt.tuple[1] - c(4.0, 0.0)).norm() < 1e-15);
    assert!((jt.tuple[2] - c(0.0, 2.0)).norm() < 1e-15);
    let JointRoots::Roots(roots) = jt.roots else {
        panic!("expected finitely many roots");
    };
    assert_eq!(roots.len(), 2);
    for expect in [c(0.0, 0.0), c(0.0, 2.0)] {
        let (_, r) = roots.iter().find(|(z, _)| (z - expect).norm() < 1e-12).unwrap();
        assert!(r.status.is_member());
    }

    // A common isotropic vector: every coefficient vanishes on e_1.
    let mut g = GaussianStream::new(5, 0);
    let coeffs: Vec<CMatrix> = (0..3)
        .map(|_| CMatrix::zeros(1, 1).direct_sum(&g.gaussian_matrix(2, 2)))
        .collect();
    let iso = MatrixPolynomial::new(coeffs).unwrap();
    let e1 = Isometry::coordinate(3, &[0]).unwrap();
    assert_eq!(
        verify_joint_tuple(&iso, &e1, 1e-12, &opts).unwrap().roots,
        JointRoots::AllOfC
    );
    assert!(member(&iso, 1, c(123.0, -7.0), &opts).unwrap().status.is_member());

    let q = random_isometry(4, 2, 1).unwrap();
    assert!(matches!(
        verify_joint_tuple(&l, &q, 1e-12, &opts),
        Err(Error::NotAJointTuple { .. })
    ));
}

#[test]
fn example2_i_boundary_is_closed_inside_the_window() {
    let l = example2_i();
    let window = Window::new(-6.0, 2.0, -4.0, 4.0).unwrap();
    let grid = grid_scan(&l, 2, &window, 80, 80, &ScanOptions::default()).unwrap();
    let labels = components(&grid);
    assert!(labels.count >= 1);
    let trace = boundary_trace(&grid);
    assert!(!trace.clipped);
    assert!(trace.polylines.iter().all(|p| p.closed));
    // Cell centres on traced boundaries stay within a cell of a member/OUT change.
    let (dx, dy) = (window.width() / 80.0, window.height() / 80.0);
    for p in trace.polylines.iter().flat_map(|p| &p.points) {
        let (i, j) = grid.cell_of(*p).unwrap();
        let near = (i.saturating_sub(1)..=(i + 1).min(79))
            .flat_map(|a| (j.saturating_sub(1)..=(j + 1).min(79)).map(move |b| (a, b)))
            .map(|(a, b)| grid.status(a, b).is_member())
            .collect::<Vec<_>>();
        assert!(near.contains(&true) && near.contains(&false), "{p} dx {dx} dy {dy}");
    }
}

#[test]
fn example4_pencil_sharp_corner_survives_rasterisation() {
    // Λ_2 of diag(3+4i, 4−i, −3−2i, −3, −3+3i) has a corner at −3 that
    // the raster trace should still flag.
    let l = MatrixPolynomial::pencil_from_matrix(&example4()).unwrap();
    let window = Window::new(-3.6, 0.6, -0.9, 2.1).unwrap();
    let grid = grid_scan(&l, 2, &window, 140, 100, &ScanOptions::default()).unwrap();
    let trace = boundary_trace(&grid);
    let sharp = sharp_points_poly(&trace, 6, 1.2);
    assert!(sharp.iter().any(|s| (s.point - c(-3.0, 0.0)).norm() < 0.1), "{sharp:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn pencils_reduce_to_matrix_membership(seed in any::<u64>(), n in 1usize..5, x in -2.0..2.0f64, y in -2.0..2.0f64) {
        let a = GaussianStream::new(seed, 0).gaussian_matrix(n, n);
        let k = 1 + (seed as usize) % n;
        let l = MatrixPolynomial::pencil_from_matrix(&a).unwrap();
        let z = c(x, y);
        let opts = MemberOptions::default();
        let p = member(&l, k, z, &opts).unwrap();
        let g = min_support(&l.evaluate(z), k, &opts).unwrap();
        prop_assume!(g.value.abs() > 10.0 * p.margin);
        // The pencil margin uses s(μ); the matrix margin uses ‖A − zI‖_F.
        let m = member_point(&a, k, z, &opts).unwrap();
        prop_assert_eq!(p.status == Status::In, g.value > 0.0);
        if m.status != Status::Border {
            prop_assert_eq!(p.status, m.status);
        }
    }

    #[test]
    fn montecarlo_contains_the_scan(seed in any::<u64>(), n in 2usize..5, m in 1usize..3) {
        let l = random_poly(seed, n, m);
        let k = 1 + (seed as usize) % 2;
        let window = Window::new(-2.0, 2.0, -2.0, 2.0).unwrap();
        let opts = ScanOptions::default();
        let grid = grid_scan(&l, k, &window, 24, 24, &opts).unwrap();
        let mc = montecarlo_region(&l, k, 30, &window, 24, 24, seed, &opts).unwrap();
        for (g, s) in grid.cells.iter().zip(&mc.cells) {
            prop_assert!(*g != Status::In || *s == Status::In);
        }
    }

    #[test]
    fn compressions_give_members(seed in any::<u64>(), n in 2usize..5) {
        // Any root shared by all entries of Q*L(λ)Q is a member of Λ_k(L).
        let mut g = GaussianStream::new(seed, 0);
        let q = random_isometry(n, 1, seed).unwrap();
        let rho = g.next_complex();
        // Plant L(ρ)q = 0 by adding a rank-one correction to A_0.
        let l = random_poly(seed, n, 2);
        let v = l.evaluate(rho);
        let qv = &v * q.matrix();
        let correction = &qv * &q.matrix().adjoint();
        let mut coeffs = l.coeffs().to_vec();
        coeffs[0] = &coeffs[0] - &correction;
        let planted = MatrixPolynomial::new(coeffs).unwrap();
        let r = member(&planted, 1, rho, &MemberOptions::default()).unwrap();
        prop_assert!(r.status.is_member(), "{:?}", r);
    }
}
