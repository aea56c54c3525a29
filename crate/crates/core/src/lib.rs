//! High-order random walks on pure simplicial complexes.
//!
//! Complexes are built from their maximal faces ([`complex`]), cochains and
//! the fat/full face cascade live in [`cochain`] and [`cascade`], the i-graphs
//! and their walks in [`walk`], spectra in [`spectral`], and the exact
//! expansion constants with the theorem-level checks in [`certify`].

pub mod cascade;
pub mod certify;
pub mod cochain;
pub mod complex;
pub mod cplx;
pub mod error;
pub mod generators;
pub mod rational;
pub mod search;
pub mod spectral;
pub mod trajectory;
pub mod walk;

pub use complex::{Face, SimplicialComplex};
pub use error::{HdxError, Result};
pub use rational::Rational;
