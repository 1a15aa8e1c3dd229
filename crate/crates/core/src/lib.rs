//! Exact computation of the lattice-point counts `N_{g,n}(b_1, ..., b_n)` attached to the
//! moduli space of genus-`g` curves with `n` labelled points.
//!
//! `N_{g,n}(b)` is the weighted number of connected branched covers of the sphere, branched
//! over three points, with ramification profile `(b_1, ..., b_n)` over infinity, simple
//! ramification `(2, ..., 2)` over 1, and no unramified sheet over 0.  Equivalently it counts
//! lattice points in the moduli space.  As a function of the `b_i` it is a quasi-polynomial:
//! for each even number `k` of odd entries there is a single polynomial in the squares
//! `u_i = b_i^2`, and the count vanishes when the number of odd entries is odd.
//!
//! The crate computes these counts by an exact recursion on `2g - 2 + n` ([`recursion`]),
//! reconstructs the class polynomials by exact interpolation ([`quasipoly`]), and verifies
//! the structural identities they satisfy (string/dilaton equations, vanishing ranges,
//! Euler characteristics, tau coefficient brackets, branched-cover enumeration, spectral
//! curve series) against independent computations ([`identities`], [`tau`], [`cover`],
//! [`series`]).  All arithmetic is over arbitrary-precision rationals; nothing is floating
//! point and nothing is approximate.

pub mod cover;
pub mod error;
pub mod identities;
pub mod poly;
pub mod quasipoly;
pub mod rational;
pub mod recursion;
pub mod report;
pub mod series;
pub mod tau;

pub use error::{Error, Result};
pub use poly::{GridSpec, SquaredPoly};
pub use quasipoly::{LatticeQuasiPolynomial, PolyStore};
pub use rational::Rational;
pub use recursion::{BTuple, MemoTable};
pub use report::IdentityReport;
