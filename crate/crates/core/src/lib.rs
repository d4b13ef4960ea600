//! Exact jet-level Wick-type deformation quantization on Kähler manifolds.

// tensor code reads closest to the index formulas with explicit index loops
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod checks;
pub mod error;
pub mod fedosov;
pub mod fock;
pub mod geometry;
pub mod toeplitz;

pub use algebra::{BaseMono, Form, HalfInt, JetPoly, Key, MultiIndex, Scalar, WeylForm, Wick, EXACT};
pub use error::Error;
