//! Finite structural Ramsey theory toolkit.
//!
//! Relational structures and embeddings, classes given by forbidden induced
//! substructures, Fraisse-limit prefixes, exact arrow checks, and expansion
//! classes.

pub mod error;
pub mod classes;
pub mod expansions;
pub mod ramsey;
pub mod structures;

pub use error::{Error, Result};
