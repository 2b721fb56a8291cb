//! Lightlike tetrahedra in anti-de Sitter, Minkowski and de Sitter space,
//! generalized ideal tetrahedra in their duals, and their volumes.
//!
//! All three curvature signs are handled by one code path over the ring
//! ℂ_Λ = ℝ[ℓ]/(ℓ² + Λ) of generalized complex numbers:
//!
//! | Λ  | ℂ_Λ           | X_Λ (points)   | Y_Λ (dual)     |
//! |----|---------------|----------------|----------------|
//! | 1  | complex       | de Sitter      | hyperbolic     |
//! | 0  | dual numbers  | Minkowski      | half-pipe      |
//! | −1 | split-complex | anti-de Sitter | anti-de Sitter |
//!
//! Modules build on each other bottom-up: [`gcnum`] → [`matmodel`] →
//! [`geometry`] → [`tetrahedra`], with [`volumes`] and [`verify`] on top.

// `!(x > tol)` is used on purpose so that NaN fails the test
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision, clippy::needless_range_loop)]

pub mod error;
pub mod gcnum;
pub mod geometry;
pub mod matmodel;
pub mod quadrature;
pub mod tetrahedra;
pub mod verify;
pub mod volumes;

pub use error::{Error, Result};
pub use gcnum::{Lambda, GC};
pub use matmodel::{Isometry, Mat2, Point, Space, Tangent};
pub use tetrahedra::{Kind, Tetrahedron};
