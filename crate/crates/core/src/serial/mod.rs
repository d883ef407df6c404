//! N-Triples, Turtle and RDF/XML output, N-Triples input, and the split
//! of an expanded dataset into one description per concept.

mod ntriples;
mod rdfxml;
mod turtle;

pub use ntriples::{parse_ntriples, to_ntriples, NTriplesError};
pub use rdfxml::to_rdfxml;
pub use turtle::to_turtle;

use std::collections::{BTreeMap, HashSet};

use crate::rdf::vocab::{rdf, skos};
use crate::rdf::{Graph, Term};

pub fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
    out
}

pub(crate) fn xml_escape_attr(s: &str) -> String {
    xml_escape(s).replace('"', "&quot;")
}

/// Output format of a dump or slice file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    NTriples,
    Turtle,
    RdfXml,
}

impl Format {
    pub fn from_extension(ext: &str) -> Option<Self> {
        match ext {
            "nt" => Some(Format::NTriples),
            "ttl" => Some(Format::Turtle),
            "rdf" => Some(Format::RdfXml),
            _ => None,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::NTriples => "nt",
            Format::Turtle => "ttl",
            Format::RdfXml => "rdf",
        }
    }

    pub fn media_type(self) -> &'static str {
        match self {
            Format::NTriples => "application/n-triples",
            Format::Turtle => "text/turtle",
            Format::RdfXml => "application/rdf+xml",
        }
    }

    pub fn serialize(self, graph: &Graph) -> String {
        match self {
            Format::NTriples => to_ntriples(graph),
            Format::Turtle => to_turtle(graph, graph.prefixes()),
            Format::RdfXml => to_rdfxml(graph),
        }
    }
}

/// Final path segment of a concept IRI, e.g. `53A45`.
pub fn concept_code(iri: &str) -> &str {
    iri.rsplit_once('/').map_or(iri, |(_, code)| code)
}

/// One slice per concept: every triple with the concept as subject, plus
/// the triples of blank nodes reachable from it through blank objects.
pub fn split_per_concept(expanded: &Graph) -> BTreeMap<String, Graph> {
    let rdf_type = Term::iri(rdf::TYPE).unwrap();
    let concept = Term::iri(skos::CONCEPT).unwrap();
    let mut slices = BTreeMap::new();
    for subject in expanded.subjects(&rdf_type, &concept) {
        let Term::Iri(iri) = subject else { continue };
        let mut slice = Graph::with_prefixes(expanded.prefixes().clone());
        let mut queue = vec![subject];
        let mut visited: HashSet<&Term> = HashSet::new();
        while let Some(node) = queue.pop() {
            if !visited.insert(node) {
                continue;
            }
            for t in expanded.matching(Some(node), None, None) {
                slice.insert(t.clone());
                if t.object().is_blank() {
                    queue.push(t.object());
                }
            }
        }
        slices.insert(concept_code(iri.as_str()).to_owned(), slice);
    }
    slices
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escape() {
        assert_eq!(xml_escape("a<b & c>d"), "a&lt;b &amp; c&gt;d");
        assert_eq!(xml_escape_attr("x\"y"), "x&quot;y");
    }

    #[test]
    fn formats() {
        for f in [Format::NTriples, Format::Turtle, Format::RdfXml] {
            assert_eq!(Format::from_extension(f.extension()), Some(f));
        }
        assert_eq!(Format::from_extension("xyz"), None);
        assert_eq!(concept_code("http://msc2010.org/resources/MSC/2010/53A45"), "53A45");
    }

    #[test]
    fn empty_graph_no_slices() {
        assert!(split_per_concept(&Graph::new()).is_empty());
    }
}
