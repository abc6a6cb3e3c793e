//! Higher rank numerical ranges of matrix polynomials.
//!
//! For an `n×n` matrix polynomial `L(λ) = A_m λ^m + … + A_1 λ + A_0` and a rank
//! `k`, the higher rank numerical range is the set of `λ` for which some
//! `n×k` isometry `Q` satisfies `Q* L(λ) Q = 0`. Membership of `μ` reduces to
//! asking whether `0` lies in the rank-`k` numerical range of the constant
//! matrix `L(μ)`, which is decided here by eigenvalue support functions.
//!
//! Module map:
//!
//! * [`numkit`]: dense complex matrices, Hermitian eigenvalues, rank, random isometries.
//! * [`matpoly`]: matrix polynomials and their transforms (shift, reversal, compression,
//!   companion pencil, compressed scalar entries).
//! * [`hrnr_matrix`]: rank-`k` numerical range of a constant matrix.
//! * [`hrnr_poly`]: membership, raster scans, components, boundedness, Monte-Carlo
//!   compression intersections, boundaries and sharp points for polynomials.
//! * [`sylvester`]: generalized Sylvester matrices of the compressed entries and
//!   certified common roots.

pub mod error;
pub mod exec;
pub mod geometry;
pub mod hrnr_matrix;
pub mod hrnr_poly;
pub mod matpoly;
pub mod numkit;
pub mod sylvester;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Shorthand used throughout the crate.
pub type C64 = Complex64;
