//! Numerics for the symmetric representations of SU(N).
//!
//! The crate builds the bosonic occupation-number bases of the symmetric
//! spaces `H_M`, the group action and weight generators on them, the
//! universal cloning maps `T^k` together with reduced density matrices and
//! the measure-and-prepare operator `W_k`, and the tools needed to check
//! majorization, minimal-output-entropy and Wehrl-entropy statements
//! numerically.
//!
//! Everything here is `no_std` with `alloc`; file formats, the command line
//! and parallel drivers live in the `wehrl-cli` crate.
#![no_std]

extern crate alloc;

pub mod channels;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod majorization;
pub mod quad;
pub mod random;
pub mod rep;
pub mod special;
pub mod wehrl;

pub use error::{Error, Result};
pub use fock::{OccupationVector, StateVector, SymmetricSpace};
pub use linalg::CMatrix;
pub use num_complex::Complex64;

/// Default cap on the dimension of any space a dense operation may build.
pub const DEFAULT_MAX_DIM: u64 = 20_000;
