//! Spectral expansion bounds for edge-vertex incidence graphs, the expander
//! codes built on them, and exhaustive oracles that check every bound on
//! small instances.

pub mod bounds;
pub mod codes;
pub mod corpus;
pub mod fields;
pub mod graphs;
pub mod oracle;
pub mod spectral;

pub use codes::LinearCode;
pub use fields::{ExtSymbol, Field};
pub use graphs::{BipartiteGraph, Graph};
pub use spectral::{GraphSpectrum, Spectrum};
