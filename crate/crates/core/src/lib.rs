//! Delone sets, local decorations, and the integrated density of states.
//!
//! The crate builds finite samples of Delone sets (lattices, cut-and-project
//! quasilattices), extracts and counts translation classes of finite patterns,
//! applies the decoration construction that plants a small graph with a
//! compactly supported eigenfunction at every occurrence of a pattern, and
//! assembles finite-range tight-binding operators on growing windows. On top
//! of that sit eigenvalue counting functions, jump detection for the
//! integrated density of states, and the packing-constant bounds relating
//! pattern frequencies to jump heights.
//!
//! With the default `parallel` feature, occurrence scans, matrix assembly and
//! per-window sweeps run on rayon; without it everything falls back to
//! sequential loops with identical results. Eigensolves are always
//! single-threaded per matrix so that repeated runs are bit-identical.

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod io;
pub mod mld;
pub mod operators;
mod par;
pub mod patterns;
pub mod spectra;

pub use error::{Error, Result};

/// Absolute coordinate tolerance for point identity. Generators emit
/// coordinates at unit scale, exact to double precision.
pub const MATCH_TOL: f64 = 1e-9;
