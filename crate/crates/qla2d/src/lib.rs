//! Lattice simulator for 2D electromagnetic pulse propagation and oblique
//! scattering at planar dielectric interfaces.
//!
//! The evolved state is a six-amplitude field per site (index-scaled E and
//! raw H); one timestep is an interleaved product of 32 unitary pointwise
//! collisions and single-site streamings plus two sparse potential
//! operators, whose continuum limit is the 2D Maxwell system in an
//! inhomogeneous diagonal dielectric. The lattice 2-norm of the state is
//! the electromagnetic energy, so the unitary product conserves it to
//! rounding.

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod evolution;
pub mod heatmap;
pub mod lattice;
pub mod operators;
pub mod optics;
pub mod pulse;
pub mod runner;

pub use error::{QlaError, Result};
