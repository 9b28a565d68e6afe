//! Kernel for d-minimal surfaces in the simply isotropic space ℝ^{0,2,1}.
//!
//! The crate is `no_std` (it needs `alloc`) and carries no IO. Everything here
//! is a pure function of its inputs:
//!
//! * [`cxparse`]: holomorphic expressions in one complex variable (and the
//!   same grammar over two real variables `u`, `v`).
//! * [`geom021`]: the degenerate-metric kernel: fundamental forms, mean and
//!   relative Gaussian curvature, affine isometries, curves, `d^λ`.
//! * [`weier`]: Weierstrass-type generation of d-minimal surfaces from data `(F, G)`.
//! * [`singular`]: zeros of `F`, their multiplicities and the Jacobian rank there.
//! * [`reconstruct`]: graph surfaces from a prescribed Codazzi-compatible `h`.
//! * [`mink4`]: the isometric embedding into ℝ⁴₁ and flat ZMC verification.
//! * [`catalog`]: closed-form named surfaces.
#![no_std]
// `!(x > y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod catalog;
pub mod cxparse;
mod error;
pub mod geom021;
pub mod grid;
pub mod mink4;
pub mod quad;
pub mod reconstruct;
pub mod singular;
pub mod weier;

pub use error::{Error, ParseError, Result};
pub use grid::{Layout, Rect, Sampling};
pub use num_complex::Complex64;

/// A point of the complex parameter plane, `w = u + iv`.
pub type ComplexValue = Complex64;
