//! Morphism spaces between indecomposable objects in the derived category of
//! a gentle algebra, computed from string combinatorics and checked against
//! exact linear algebra on explicit complexes of projectives.

pub mod ar;
pub mod bands;
pub mod cli;
pub mod complex;
pub mod field;
pub mod hom;
pub mod oracle;
pub mod quiver;
pub mod words;

/// Version tag carried by every JSON document.
pub const SCHEMA_VERSION: u32 = 1;
