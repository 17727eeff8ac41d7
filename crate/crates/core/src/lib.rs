//! Certificate-producing graph algorithms around sublinear expanders,
//! adjuster gadgets, balanced clique subdivisions and cycle spectra of
//! `K_{s,t}`-free graphs.
//!
//! Every constructive routine returns a certificate that can be re-checked by
//! an independent validator, and the [`oracle`] module holds brute-force
//! reference implementations for small instances.

pub mod cycles;
pub mod error;
pub mod expander;
pub mod gadgets;
pub mod generate;
pub mod graph;
pub mod kst;
pub mod oracle;
pub mod presets;
pub mod routing;
pub mod search;
pub mod subdivision;

pub use error::{Error, Result};
pub use graph::{Cycle, Graph, Path, VertexSet};
