//! Isoperimetric deficit and asymmetry functionals on discretized shapes.
//!
//! The crate computes, on polygons and radial graphs over the circle or
//! sphere:
//!
//! - the isoperimetric deficit `D`,
//! - the Riesz potential `γ` with its maximizing center,
//! - the boundary oscillation index `β`, both through the exact identity
//!   `β² = P − (n−1)γ` and as a direct boundary integral,
//! - the Fraenkel asymmetry `α`,
//! - the combined asymmetry index `A`,
//!
//! and verifies the identities and inequalities tying them together:
//! the strong Poincaré bound `β² ≥ D + (8·n·c_n/ω_n)·a²`, the
//! deficit-vs-Sobolev-norm estimate for nearly spherical sets with the
//! sharpness of its exponent, and ball uniqueness for the penalized
//! perimeter functional minimized by a projected coefficient descent.
//!
//! The `harness` module adds corpus generation, parallel batch evaluation,
//! empirical constant estimation and CSV/JSON reporting; a CLI in the
//! companion binary crate exposes all of it.

pub mod error;
pub mod functionals;
pub mod geometry;
pub mod harness;
pub mod nearly_spherical;
pub mod optim;
pub mod point;
pub mod quadrature;
pub mod shapeflow;

pub use error::{Error, Result};
pub use functionals::{FunctionalReport, Params};
pub use geometry::{BallSpec, BoundaryQuadrature, ShapeRep};
