//! RDF terms, triples and the indexed in-memory graph.

mod graph;
mod term;
pub mod vocab;

pub use graph::{Graph, Triple};
pub use term::{is_language_tag, BlankNode, Iri, Literal, LiteralKind, Term};
pub(crate) use term::{write_escaped_iri, write_escaped_string};
pub use vocab::PrefixMap;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RdfError {
    #[error("not an absolute IRI: {0:?}")]
    InvalidIri(String),
    #[error("invalid blank node id: {0:?}")]
    InvalidBlankNode(String),
    #[error("invalid language tag: {0:?}")]
    InvalidLanguageTag(String),
    #[error("literal in subject position: {0}")]
    LiteralSubject(String),
    #[error("predicate is not an IRI: {0}")]
    NonIriPredicate(String),
    #[error("unknown prefix {0:?}")]
    UnknownPrefix(String),
    #[error("not a CURIE: {0:?}")]
    NotACurie(String),
}
