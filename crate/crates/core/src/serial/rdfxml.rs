use std::collections::BTreeMap;
use std::fmt::Write;

use crate::rdf::{vocab, Graph, LiteralKind, Term, Triple};

use super::{xml_escape, xml_escape_attr};

fn is_ncname_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ncname(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(is_ncname_start)
        && chars.all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

/// Splits a property IRI into namespace and an NCName local part, taking the
/// longest NCName suffix.
fn split_qname(iri: &str) -> Option<(&str, &str)> {
    let mut split = None;
    for (i, c) in iri.char_indices().rev() {
        if is_ncname_start(c) {
            split = Some(i);
        }
        if !(c.is_alphanumeric() || matches!(c, '_' | '-' | '.')) {
            break;
        }
    }
    let at = split?;
    (at > 0).then(|| iri.split_at(at))
}

fn node_id(id: &str) -> String {
    if is_ncname(id) {
        id.to_owned()
    } else {
        format!("b_{id}")
    }
}

/// RDF/XML with one `rdf:Description` per subject, in canonical order.
///
/// Namespace prefixes come from the graph's prefix map where one matches
/// exactly; other namespaces get generated `nsN` prefixes.
type Statements<'a> = (&'a Term, Vec<(String, &'a Triple)>);

pub fn to_rdfxml(graph: &Graph) -> String {
    let prefixes = graph.prefixes();
    let mut ns_names: BTreeMap<String, String> = BTreeMap::new();
    ns_names.insert(vocab::rdf::NS.to_owned(), "rdf".to_owned());
    let registered: BTreeMap<&str, &str> = prefixes.iter().map(|(n, ns)| (ns, n)).collect();

    let mut by_subject: BTreeMap<String, Statements> = BTreeMap::new();
    for t in graph.iter() {
        by_subject
            .entry(t.subject().sort_key())
            .or_insert_with(|| (t.subject(), Vec::new()))
            .1
            .push((t.to_string(), t));
    }

    let mut generated = 0usize;
    let mut body = String::new();
    for (subject, triples) in by_subject.values_mut() {
        triples.sort_by(|a, b| a.0.cmp(&b.0));
        match subject {
            Term::Iri(iri) => {
                let _ = writeln!(body, "  <rdf:Description rdf:about=\"{}\">", xml_escape_attr(iri.as_str()));
            }
            Term::Blank(b) => {
                let _ = writeln!(body, "  <rdf:Description rdf:nodeID=\"{}\">", node_id(b.id()));
            }
            Term::Literal(_) => unreachable!("literal subjects are rejected on insert"),
        }
        for (_, t) in triples.iter() {
            let pred = t.predicate().as_iri().expect("predicates are IRIs").as_str();
            let Some((ns, local)) = split_qname(pred) else {
                let _ = writeln!(body, "    <!-- predicate not expressible in RDF/XML: {} -->", xml_escape(pred));
                continue;
            };
            let prefix = match ns_names.get(ns) {
                Some(p) => p.clone(),
                None => {
                    let name = match registered.get(ns) {
                        Some(n) if is_ncname(n) && !ns_names.values().any(|v| v == n) => n.to_string(),
                        _ => {
                            generated += 1;
                            format!("ns{generated}")
                        }
                    };
                    ns_names.insert(ns.to_owned(), name.clone());
                    name
                }
            };
            let qname = format!("{prefix}:{local}");
            match t.object() {
                Term::Iri(o) => {
                    let _ = writeln!(body, "    <{qname} rdf:resource=\"{}\"/>", xml_escape_attr(o.as_str()));
                }
                Term::Blank(b) => {
                    let _ = writeln!(body, "    <{qname} rdf:nodeID=\"{}\"/>", node_id(b.id()));
                }
                Term::Literal(lit) => {
                    let attrs = match lit.kind() {
                        LiteralKind::Plain => String::new(),
                        LiteralKind::Lang(tag) => format!(" xml:lang=\"{tag}\""),
                        _ if lit.is_xml_literal() => " rdf:parseType=\"Literal\"".to_owned(),
                        LiteralKind::Typed(dt) => format!(" rdf:datatype=\"{}\"", xml_escape_attr(dt.as_str())),
                    };
                    let content = if lit.is_xml_literal() {
                        lit.lexical().to_owned()
                    } else {
                        xml_escape(lit.lexical())
                    };
                    let _ = writeln!(body, "    <{qname}{attrs}>{content}</{qname}>");
                }
            }
        }
        body.push_str("  </rdf:Description>\n");
    }

    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<rdf:RDF");
    let mut decls: Vec<(&String, &String)> = ns_names.iter().map(|(ns, name)| (name, ns)).collect();
    decls.sort();
    for (name, ns) in decls {
        let _ = write!(out, "\n    xmlns:{name}=\"{}\"", xml_escape_attr(ns));
    }
    out.push_str(">\n");
    out.push_str(&body);
    out.push_str("</rdf:RDF>\n");
    out
}
