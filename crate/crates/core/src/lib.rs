//! Exact and numeric algebra for knot contact homology.
//!
//! The crate is organized bottom-up:
//!
//! - [`ring`]: Laurent polynomials, rational functions and power series over ℚ.
//! - [`dga`]: graded free noncommutative dg-algebras with the unknot and trefoil
//!   differentials.
//! - [`augment`]: augmentation systems, Gröbner bases and elimination.
//! - [`qtorus`]: the quantum torus `e^{p̂}e^{x̂} = q e^{x̂}e^{p̂}`.
//! - [`holonomic`]: wavefunctions, operator action and recursion solving.
//! - [`diskpot`]: numerical branch tracing and the disk potential.
//! - [`gencurve`]: generalized-curve generating functions.
//! - [`parse`] and [`cli`]: text formats and the command-line front end.

pub mod ring;
pub mod dga;
pub mod augment;
pub mod qtorus;
pub mod holonomic;
pub mod diskpot;
pub mod gencurve;
pub mod parse;
pub mod cli;
