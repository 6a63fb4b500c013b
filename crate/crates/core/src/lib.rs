//! Exact worst-case analysis laboratory for the alternating direction method
//! of multipliers.
//!
//! The crate runs ADMM on separable convex problems built from scalar
//! piecewise-linear-plus-quadratic functions, reproduces a gallery of tight
//! worst-case instances bit-for-bit, verifies the positive-semidefinite
//! certificate matrices behind the convergence bounds, builds and solves the
//! associated semidefinite performance-estimation problems with an embedded
//! dense interior-point solver, and evaluates every closed-form rate with its
//! precondition gates.

pub mod admm;
pub mod certificates;
pub mod error;
pub mod gallery;
pub mod numkit;
pub mod pep;
pub mod planalysis;
pub mod plq;
pub mod rates;
pub mod synth;

pub use admm::{AdmmConfig, AdmmTrace, DualEval};
pub use error::{Error, Result};
pub use gallery::{ExpectedTrace, GalleryKind};
pub use numkit::{Mat, PsdReport, SymMatrix};
pub use plq::{OptimalPair, PlqFunction, SeparableProblem, SideSpec};
