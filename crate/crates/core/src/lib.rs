//! Toolchain for publishing a classification scheme as a SKOS linked
//! dataset.
//!
//! The pipeline runs [`source::parse_source`] → [`skos::build_graph`] →
//! [`entail::expand`] → [`serial`] output, with [`validate`] and
//! [`query`] available on any stage.

mod diagnostic;

pub mod entail;
pub mod query;
pub mod rdf;
pub mod sample;
pub mod serial;
pub mod skos;
pub mod source;
pub mod validate;

pub use diagnostic::Diagnostic;
pub use rdf::{Graph, Iri, Literal, PrefixMap, Term, Triple};
