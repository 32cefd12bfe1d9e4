//! Degrees-of-freedom analysis for the K-user multi-antenna broadcast channel
//! with per-user mixed channel knowledge at the transmitter.
//!
//! Two halves:
//! - `bounds` + `polytope`: generate the exact outer-bound polytope on joint
//!   (multicast) degrees of freedom and query it with rational arithmetic.
//! - `schemedsl` + `engine` + `rates`: describe linear transmission schemes in
//!   a small schedule language, execute them over random channel draws, and
//!   certify decodability by rank conditions or finite-SNR rate slopes.

pub mod core;

pub mod bounds;
pub mod cli;
pub mod engine;
pub mod polytope;
pub mod rates;
pub mod schemedsl;
