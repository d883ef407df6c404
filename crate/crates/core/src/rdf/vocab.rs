//! Namespace constants and the prefix map used for CURIEs.

use std::collections::BTreeMap;

use super::{Iri, RdfError};

pub mod rdf {
    pub const NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
    pub const TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const XML_LITERAL: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#XMLLiteral";
}

pub mod rdfs {
    pub const NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
    pub const SUB_PROPERTY_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subPropertyOf";
    pub const CLASS: &str = "http://www.w3.org/2000/01/rdf-schema#Class";
}

pub mod xsd {
    pub const NS: &str = "http://www.w3.org/2001/XMLSchema#";
    pub const INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
}

pub mod dct {
    pub const NS: &str = "http://purl.org/dc/terms/";
    pub const SUBJECT: &str = "http://purl.org/dc/terms/subject";
}

pub mod skos {
    pub const NS: &str = "http://www.w3.org/2004/02/skos/core#";
    pub const CONCEPT: &str = "http://www.w3.org/2004/02/skos/core#Concept";
    pub const CONCEPT_SCHEME: &str = "http://www.w3.org/2004/02/skos/core#ConceptScheme";
    pub const COLLECTION: &str = "http://www.w3.org/2004/02/skos/core#Collection";
    pub const IN_SCHEME: &str = "http://www.w3.org/2004/02/skos/core#inScheme";
    pub const TOP_CONCEPT_OF: &str = "http://www.w3.org/2004/02/skos/core#topConceptOf";
    pub const HAS_TOP_CONCEPT: &str = "http://www.w3.org/2004/02/skos/core#hasTopConcept";
    pub const NOTATION: &str = "http://www.w3.org/2004/02/skos/core#notation";
    pub const PREF_LABEL: &str = "http://www.w3.org/2004/02/skos/core#prefLabel";
    pub const ALT_LABEL: &str = "http://www.w3.org/2004/02/skos/core#altLabel";
    pub const NOTE: &str = "http://www.w3.org/2004/02/skos/core#note";
    pub const BROADER: &str = "http://www.w3.org/2004/02/skos/core#broader";
    pub const NARROWER: &str = "http://www.w3.org/2004/02/skos/core#narrower";
    pub const BROADER_TRANSITIVE: &str = "http://www.w3.org/2004/02/skos/core#broaderTransitive";
    pub const RELATED: &str = "http://www.w3.org/2004/02/skos/core#related";
    pub const MEMBER: &str = "http://www.w3.org/2004/02/skos/core#member";
    pub const EXACT_MATCH: &str = "http://www.w3.org/2004/02/skos/core#exactMatch";
    pub const CLOSE_MATCH: &str = "http://www.w3.org/2004/02/skos/core#closeMatch";
    pub const NARROW_MATCH: &str = "http://www.w3.org/2004/02/skos/core#narrowMatch";
    pub const BROAD_MATCH: &str = "http://www.w3.org/2004/02/skos/core#broadMatch";
    pub const RELATED_MATCH: &str = "http://www.w3.org/2004/02/skos/core#relatedMatch";
}

/// Local names of the extension vocabulary, resolved against the
/// configured extension namespace.
pub mod ext {
    pub const SEE_ALSO: &str = "seeAlso";
    pub const SEE_MAINLY: &str = "seeMainly";
    pub const SCOPED_RELATION: &str = "scopedRelation";
    pub const SCOPED_RELATION_CLASS: &str = "ScopedRelation";
    pub const SCOPE: &str = "scope";
    pub const TARGET: &str = "target";
    pub const MATH_LABEL: &str = "mathLabel";
}

pub const MSC_BASE: &str = "http://msc2010.org/resources/MSC/2010/";

/// Registered `name → namespace IRI` pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixMap {
    entries: BTreeMap<String, String>,
}

impl PrefixMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// The prefixes every dataset in this toolchain uses, with `msc` and
    /// `ext` bound under `base`.
    pub fn standard(base: &str) -> Self {
        let mut map = PrefixMap::new();
        map.insert("rdf", rdf::NS);
        map.insert("rdfs", rdfs::NS);
        map.insert("xsd", xsd::NS);
        map.insert("skos", skos::NS);
        map.insert("dct", dct::NS);
        map.insert("msc", base);
        map.insert("ext", format!("{base}vocab#"));
        map
    }

    pub fn insert(&mut self, name: impl Into<String>, namespace: impl Into<String>) {
        self.entries.insert(name.into(), namespace.into());
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.entries.get(name).map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn expand_curie(&self, curie: &str) -> Result<Iri, RdfError> {
        let (prefix, local) = curie
            .split_once(':')
            .ok_or_else(|| RdfError::NotACurie(curie.to_owned()))?;
        let ns = self
            .get(prefix)
            .ok_or_else(|| RdfError::UnknownPrefix(prefix.to_owned()))?;
        Iri::new(format!("{ns}{local}"))
    }

    /// Longest registered namespace that prefixes `iri`, with the remaining
    /// local part. The local part is not validated here.
    pub fn shorten<'a>(&'a self, iri: &'a str) -> Option<(&'a str, &'a str)> {
        self.entries
            .iter()
            .filter(|(_, ns)| iri.starts_with(ns.as_str()))
            .max_by_key(|(_, ns)| ns.len())
            .map(|(name, ns)| (name.as_str(), &iri[ns.len()..]))
    }
}
