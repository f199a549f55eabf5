//! A desk-scale laboratory for greedy approximation in finite-dimensional
//! truncations of sequence spaces.
//!
//! The crate builds bases as invertible vector families in normed coordinate
//! spaces, runs the thresholding greedy algorithm, and computes or certifies
//! conditionality constants with exact rational arithmetic wherever the norm
//! is polyhedral. Norm machinery covers l_p, sup, bounded variation, max
//! direct sums and real interpolation spaces; lower bounds come with witness
//! certificates that re-validate by direct norm evaluation.
//!
//! Start with the `examples/` directory for runnable tours of each
//! capability, or the `basislab` binary for file-driven analysis.

pub mod bases;
pub mod cert;
pub mod cli;
pub mod conditionality;
pub mod greedy;
pub mod interpolation;
pub mod io;
pub mod matrix;
pub mod report;
pub mod scalar;
pub mod spaces;
pub mod vector;

pub use cert::Certification;
pub use scalar::{Rat, Scalar};
pub use vector::CoordVector;
