//! Construction and verification of gerechte designs whose regions are
//! rectangles.
//!
//! A gerechte framework of order `n` partitions an `n x n` grid into `n`
//! regions of `n` cells each. A realization is a latin square in which every
//! region holds each symbol exactly once. This crate provides:
//!
//! * [`framework`]: the region partition model, file formats, classification,
//!   reduction, refinement, alignment analysis and seeded generators.
//! * [`graph`]: bipartite multigraph edge colourings (proper and equitable).
//! * [`outline`]: outline latin squares, amalgamation and its constructive
//!   inverse.
//! * [`realize`]: the constructive realization procedures and a dispatcher.
//! * [`verify`]: independent checkers, a brute-force realization oracle and an
//!   exhaustive enumerator of small rectangular frameworks.

#![forbid(unsafe_code)]

pub mod framework;
pub mod graph;
pub mod latin;
pub mod outline;
pub mod realize;
pub mod verify;

pub use framework::{ClassLabel, Classification, RegionPartition};
pub use latin::{LatinSquare, RowLatinSquare};
pub use outline::{Composition, OutlineLatinSquare};
pub use realize::{realize, Method};
pub use verify::{verify_realization, VerificationReport};

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
