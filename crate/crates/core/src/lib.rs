//! Arithmetic core of the lattice-tiling obstruction for Steinhaus sets.
//!
//! * [`sos`] decides and constructs sums of `d` integer squares.
//! * [`forms`] holds exact integer-valued positive-definite quadratic forms.
//! * [`steinhaus`] checks whether a form qualifies (all values are sums of
//!   `d` squares, determinant not an integer square) and runs the finite
//!   verification suites for the ternary form `2x^2 + 11y^2 + 6z^2`.
//! * [`planar`] checks the two-dimensional Gram-determinant obstruction.
//! * [`formsearch`] enumerates diagonal ternary forms that qualify.
//! * [`reproduction`] bundles every finite check into one reproduction run.

pub mod forms;
pub mod formsearch;
mod json;
pub mod reproduction;
pub mod planar;
pub mod sos;
pub mod steinhaus;
