//! Exact-arithmetic engine for curvature, Morse-integral and
//! intersection-number computations on towers of projectivized jet bundles
//! over complex surfaces.
//!
//! The crate is organized around two independent computations of the same
//! universal intersection polynomials `F_k`, `G_k` with
//! `(a_1 u_1 + … + a_k u_k)^{k+2} = F_k(a) c_1² − G_k(a) c_2`:
//!
//! * [`chern`] expands the power in the Chow ring of the tower and reads the
//!   coefficients off directly;
//! * [`morse`] integrates the curvature of the weighted line bundles fiber
//!   by fiber, using the transfer-matrix recursion of [`recursion`].
//!
//! Agreement of the two engines is the central internal consistency check.
//! On top of them, [`cone`] maximizes `F_k/G_k` over the nef cone of
//! weights and turns a surface's Chern numbers into the lowest jet order
//! with guaranteed global invariant jet differentials.

pub mod algebra;
pub mod chern;
pub mod cone;
pub mod morse;
pub mod recursion;

pub use algebra::{MultiPoly, Rat, VarSet};
