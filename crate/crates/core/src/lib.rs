//! Exact computations around partition complexes, the uniform complex and
//! its disorder-filtration shelling, bar complexes of graded rings over a
//! non-central commutative base, and the linearization of functors.
//!
//! All arithmetic is exact. Scalars are stored as `i128` and interpreted
//! according to a [`homalg::CoeffRing`].

pub mod acceptance;
pub mod error;
pub mod homalg;
pub mod koszul;
pub mod linearize;
pub mod par;
pub mod partition;
pub mod qfunctors;
pub mod shelling;
pub mod simplicial;

pub use error::{Error, Result};
