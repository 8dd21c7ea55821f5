//! Exact invariants of crossed products of Z^d-odometers and their twisted
//! versions: K-groups as colimits of exterior algebras, trace pairings,
//! gap labels, and finite rotation-algebra models.

pub mod error;
pub mod exact_algebra;
pub mod lattice;
pub mod ktheory;
pub mod twist;
pub mod pairing;
pub mod rotation;
pub mod report;
pub mod cli;

pub use error::{GellError, Result};
