//! Numerical moving-frame engine for lightlike hypersurfaces of de Sitter space.
//!
//! A hypersurface (or lower-dimensional submanifold) of conformal space is
//! lifted to the Darboux hyperquadric `Q^n ⊂ P^{n+1}`. Its tangent
//! hyperspheres sweep a lightlike hypersurface `U^n` of the exterior domain
//! `S^{n+1}_1`. This crate builds adapted frames over a parameter grid,
//! recovers the Maurer–Cartan forms by finite differences, and computes the
//! fundamental tensors, foci, invariant normalizations, screen distributions
//! and induced connections of `U^n`, for both the maximal-rank and the
//! tangentially degenerate (reduced-rank) case.
//!
//! Frame index convention: vectors `A_0 … A_{n+1}` are stored as the rows of
//! an `(n+2)×(n+2)` matrix. `A_0` lies on the quadric, `A_1 … A_{n-1}` are
//! tangent, `A_n` is the unit exterior vector of the generator and `A_{n+1}`
//! is the null vector paired with `A_0`. The tangent metric is always the
//! identity.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod ambient;
pub mod connection;
mod error;
pub mod frames;
pub mod lightlike;
pub mod linalg;
pub mod polynomial;
pub mod reduced;
pub mod surfaces;

pub use ambient::{AmbientForm, CausalClass, HomogeneousPoint};
pub use error::{Error, Result};
pub use frames::{Chart, ConnectionMatrix, FdScheme, FrameField, FrameSource, MovingFrame};
pub use lightlike::{ConformalImmersion, EuclideanLift};
