use std::collections::BTreeMap;
use std::fmt::Write;

use crate::rdf::{vocab, write_escaped_iri, write_escaped_string, Graph, LiteralKind, PrefixMap, Term};

fn is_pn_local(local: &str) -> bool {
    local.is_empty()
        || (local.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
            && !local.starts_with(['-', '.'])
            && !local.ends_with('.'))
}

fn write_iri(out: &mut String, iri: &str, prefixes: &PrefixMap) {
    match prefixes.shorten(iri) {
        Some((name, local)) if is_pn_local(local) => {
            let _ = write!(out, "{name}:{local}");
        }
        _ => {
            out.push('<');
            let _ = write_escaped_iri(out, iri);
            out.push('>');
        }
    }
}

fn write_term(out: &mut String, term: &Term, prefixes: &PrefixMap) {
    match term {
        Term::Iri(iri) => write_iri(out, iri.as_str(), prefixes),
        Term::Blank(b) => {
            let _ = write!(out, "_:{}", b.id());
        }
        Term::Literal(lit) => {
            out.push('"');
            let _ = write_escaped_string(out, lit.lexical());
            out.push('"');
            match lit.kind() {
                LiteralKind::Plain => {}
                LiteralKind::Lang(tag) => {
                    let _ = write!(out, "@{tag}");
                }
                LiteralKind::Typed(dt) => {
                    out.push_str("^^");
                    write_iri(out, dt.as_str(), prefixes);
                }
            }
        }
    }
}

/// (not-rdf:type, predicate key) -> (predicate, object key -> object)
type Predicates<'a> = BTreeMap<(bool, String), (&'a Term, BTreeMap<String, &'a Term>)>;

/// Turtle grouped by subject, with `;` between predicates and `,` between
/// objects. IRIs outside the prefix map are written in full.
pub fn to_turtle(graph: &Graph, prefixes: &PrefixMap) -> String {
    let mut out = String::new();
    for (name, ns) in prefixes.iter() {
        let _ = write!(out, "@prefix {name}: <");
        let _ = write_escaped_iri(&mut out, ns);
        out.push_str("> .\n");
    }

    // subject -> predicate -> objects, all in canonical order
    let mut tree: BTreeMap<String, (&Term, Predicates)> = BTreeMap::new();
    for t in graph.iter() {
        let (_, preds) = tree
            .entry(t.subject().sort_key())
            .or_insert_with(|| (t.subject(), BTreeMap::new()));
        // rdf:type first
        let is_type = t.predicate().as_iri().is_some_and(|i| i.as_str() == vocab::rdf::TYPE);
        let (_, objs) = preds
            .entry((!is_type, t.predicate().sort_key()))
            .or_insert_with(|| (t.predicate(), BTreeMap::new()));
        objs.insert(t.object().sort_key(), t.object());
    }

    for (subject, preds) in tree.values() {
        out.push('\n');
        write_term(&mut out, subject, prefixes);
        for (i, ((not_type, _), (pred, objs))) in preds.iter().enumerate() {
            out.push_str(if i == 0 { " " } else { " ;\n    " });
            if *not_type {
                write_term(&mut out, pred, prefixes);
            } else {
                out.push('a');
            }
            for (j, obj) in objs.values().enumerate() {
                out.push_str(if j == 0 { " " } else { " , " });
                write_term(&mut out, obj, prefixes);
            }
        }
        out.push_str(" .\n");
    }
    out
}
