//! Presentations of classical and 2-knot groups with certified bounds on
//! algebraic unknotting invariants.

pub mod alexander;
pub mod certify;
pub mod constructors;
pub mod error;
pub mod presentation;
pub mod words;

pub use error::{Error, Result};
pub use presentation::Presentation;
pub use words::{GeneratorId, Homomorphism, Word};

/// Version string embedded in certificates.
pub const TOOL_VERSION: &str = concat!("knotgroup ", env!("CARGO_PKG_VERSION"));
