//! Builds the non-redundant SKOS master graph from parsed records and the
//! auxiliary inputs.
//!
//! The master states each hierarchy link once, child to parent
//! (`skos:broader`). Inverse and transitive links are left to
//! [`crate::entail`].

mod config;
mod inputs;

pub use config::{mint_iri, SchemeConfig};
pub use inputs::{
    parse_collections, parse_external, parse_translations, parse_version_mappings, Auxiliary,
    CollectionSpec, ExternalMapping, LabelRow, MatchRelation, VersionMapping,
};

use thiserror::Error;

use crate::rdf::vocab::{ext, rdf, rdfs, skos};
use crate::rdf::{BlankNode, Graph, Iri, Literal, Term, Triple};
use crate::serial::xml_escape;
use crate::source::{CrossRef, Level, SourceError, SourceRecord};
use crate::Diagnostic;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("base IRI must be absolute and end with '/': {0:?}")]
    InvalidBase(String),
    #[error("invalid language tag {0:?}")]
    InvalidLanguage(String),
    #[error("collection id is not IRI-safe: {0:?}")]
    InvalidCollectionId(String),
    #[error(transparent)]
    Code(#[from] SourceError),
}

#[derive(Debug, Clone)]
pub struct Built {
    pub graph: Graph,
    pub diagnostics: Vec<Diagnostic>,
}

fn iri(s: &str) -> Term {
    Term::Iri(Iri::new(s).expect("vocabulary IRIs are valid"))
}

fn push(graph: &mut Graph, s: &Term, p: &Term, o: Term) {
    graph.insert(Triple::new(s.clone(), p.clone(), o).expect("builder emits well-formed triples"));
}

/// Id of the reified node for the `clause`-th cross-reference of `code`.
fn scoped_node_id(code: &str, clause: usize) -> BlankNode {
    BlankNode::new(format!("scope_{code}_{clause}")).expect("codes are blank-node safe")
}

fn is_concept(graph: &Graph, term: &Term) -> bool {
    graph
        .matching(Some(term), Some(&iri(rdf::TYPE)), Some(&iri(skos::CONCEPT)))
        .next()
        .is_some()
}

pub fn build_graph(records: &[SourceRecord], aux: &Auxiliary, config: &SchemeConfig) -> Built {
    let mut graph = Graph::with_prefixes(config.prefixes());
    let mut diagnostics = Vec::new();
    let lang = config.default_language();
    let scheme = Term::Iri(config.scheme_iri());
    let rdf_type = iri(rdf::TYPE);

    push(&mut graph, &scheme, &rdf_type, iri(skos::CONCEPT_SCHEME));

    let mut used_ext = Vec::new();
    let mut use_ext = |local: &'static str| {
        if !used_ext.contains(&local) {
            used_ext.push(local);
        }
        config.ext_term(local)
    };

    for rec in records {
        let code = rec.code.as_str();
        let concept = Term::Iri(mint_iri(config, code).expect("record codes are valid"));
        push(&mut graph, &concept, &rdf_type, iri(skos::CONCEPT));
        push(&mut graph, &concept, &iri(skos::IN_SCHEME), scheme.clone());
        push(&mut graph, &concept, &iri(skos::NOTATION), Literal::plain(code).into());

        let plain_label = if rec.has_math_markup {
            rec.label.replace('$', "")
        } else {
            rec.label.clone()
        };
        push(
            &mut graph,
            &concept,
            &iri(skos::PREF_LABEL),
            Literal::lang(plain_label, lang).expect("config language valid").into(),
        );
        if rec.has_math_markup {
            let markup = Literal::typed(xml_escape(&rec.label), Iri::new(rdf::XML_LITERAL).unwrap());
            push(&mut graph, &concept, &use_ext(ext::MATH_LABEL), markup.into());
        }

        match rec.code.parent() {
            Some(parent) => {
                let parent = Term::Iri(mint_iri(config, parent.as_str()).unwrap());
                push(&mut graph, &concept, &iri(skos::BROADER), parent);
            }
            None => debug_assert_eq!(rec.code.level(), Level::Top),
        }
        if rec.code.level() == Level::Top {
            push(&mut graph, &concept, &iri(skos::TOP_CONCEPT_OF), scheme.clone());
        }

        for (idx, xref) in rec.crossrefs.iter().enumerate() {
            let targets = xref
                .targets()
                .iter()
                .map(|t| Term::Iri(mint_iri(config, t.as_str()).unwrap()));
            match xref {
                CrossRef::SeeAlso(_) | CrossRef::SeeMainly(_) => {
                    let local = if matches!(xref, CrossRef::SeeAlso(_)) {
                        ext::SEE_ALSO
                    } else {
                        ext::SEE_MAINLY
                    };
                    let prop = use_ext(local);
                    for t in targets {
                        push(&mut graph, &concept, &prop, t);
                    }
                }
                CrossRef::ForSee { scope, .. } => {
                    let node = Term::Blank(scoped_node_id(code, idx));
                    push(&mut graph, &concept, &use_ext(ext::SCOPED_RELATION), node.clone());
                    push(&mut graph, &node, &rdf_type, use_ext(ext::SCOPED_RELATION_CLASS));
                    push(
                        &mut graph,
                        &node,
                        &use_ext(ext::SCOPE),
                        Literal::lang(scope, lang).unwrap().into(),
                    );
                    let target = use_ext(ext::TARGET);
                    for t in targets {
                        push(&mut graph, &node, &target, t);
                    }
                }
            }
        }

        if let Some(note) = &rec.note {
            push(&mut graph, &concept, &iri(skos::NOTE), Literal::lang(note, lang).unwrap().into());
        }
    }

    diagnostics.extend(add_labels(&mut graph, config, &aux.translations));

    for m in &aux.version_mappings {
        let subject = Term::Iri(mint_iri(config, m.new_code.as_str()).unwrap());
        if !is_concept(&graph, &subject) {
            diagnostics.push(Diagnostic::new(
                "version mappings",
                None,
                format!("unknown code {}", m.new_code),
            ));
            continue;
        }
        let old = Iri::new(format!("{}{}", config.old_scheme_base(&m.old_version), m.old_code)).unwrap();
        push(&mut graph, &subject, &iri(m.relation.property()), Term::Iri(old));
    }

    for c in &aux.collections {
        let coll = match config.collection_iri(&c.id) {
            Ok(i) => Term::Iri(i),
            Err(e) => {
                diagnostics.push(Diagnostic::new("collections", None, e.to_string()));
                continue;
            }
        };
        let mut members = Vec::new();
        for code in &c.members {
            match mint_iri(config, code).map(Term::Iri) {
                Ok(m) if is_concept(&graph, &m) => members.push(m),
                _ => diagnostics.push(Diagnostic::new(
                    "collections",
                    None,
                    format!("collection {}: unknown code {code}", c.id),
                )),
            }
        }
        push(&mut graph, &coll, &rdf_type, iri(skos::COLLECTION));
        for (tag, text) in &c.labels {
            match Literal::lang(text, tag) {
                Ok(l) => push(&mut graph, &coll, &iri(skos::PREF_LABEL), l.into()),
                Err(e) => diagnostics.push(Diagnostic::new("collections", None, e.to_string())),
            }
        }
        for m in members {
            push(&mut graph, &coll, &iri(skos::MEMBER), m);
        }
    }

    for x in &aux.external {
        match mint_iri(config, &x.code).map(Term::Iri) {
            Ok(subject) if is_concept(&graph, &subject) => push(
                &mut graph,
                &subject,
                &Term::Iri(x.property.clone()),
                Term::Iri(x.target.clone()),
            ),
            _ => diagnostics.push(Diagnostic::new(
                "external mappings",
                None,
                format!("unknown code {}", x.code),
            )),
        }
    }

    // Declarations only for the extension vocabulary actually in use.
    for local in used_ext {
        let term = config.ext_term(local);
        match local {
            ext::SEE_ALSO | ext::SEE_MAINLY => {
                push(&mut graph, &term, &iri(rdfs::SUB_PROPERTY_OF), iri(skos::RELATED))
            }
            ext::SCOPED_RELATION_CLASS => push(&mut graph, &term, &rdf_type, iri(rdfs::CLASS)),
            _ => {}
        }
    }

    Built { graph, diagnostics }
}

/// Adds one `skos:prefLabel` per row, refusing a second label in a language
/// the concept already has.
pub fn add_labels(graph: &mut Graph, config: &SchemeConfig, rows: &[LabelRow]) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let pref = iri(skos::PREF_LABEL);
    for row in rows {
        let concept = match mint_iri(config, &row.code).map(Term::Iri) {
            Ok(c) if is_concept(graph, &c) => c,
            _ => {
                diags.push(Diagnostic::new("translations", None, format!("unknown code {}", row.code)));
                continue;
            }
        };
        let label = match Literal::lang(&row.text, &row.lang) {
            Ok(l) => l,
            Err(e) => {
                diags.push(Diagnostic::new("translations", None, format!("{}: {e}", row.code)));
                continue;
            }
        };
        let taken = graph
            .objects(&concept, &pref)
            .filter_map(Term::as_literal)
            .any(|l| l.language() == label.language());
        if taken {
            diags.push(Diagnostic::new(
                "translations",
                None,
                format!(
                    "{} already has a prefLabel in language {:?}",
                    row.code,
                    label.language().unwrap_or_default()
                ),
            ));
            continue;
        }
        push(graph, &concept, &pref, label.into());
    }
    diags
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::parse_source;

    fn msc(code: &str) -> Term {
        Term::iri(format!("http://msc2010.org/resources/MSC/2010/{code}")).unwrap()
    }

    fn build(src: &str) -> Graph {
        let parsed = parse_source("t", src);
        let built = build_graph(&parsed.records, &Auxiliary::default(), &SchemeConfig::default());
        assert!(built.diagnostics.is_empty(), "{:?}", built.diagnostics);
        built.graph
    }

    fn t(s: Term, p: &str, o: impl Into<Term>) -> Triple {
        Triple::new(s, iri(p), o.into()).unwrap()
    }

    #[test]
    fn single_leaf() {
        let g = build("53A45 Vector and tensor analysis\n");
        let c = msc("53A45");
        let scheme = msc("");
        let expected = [
            t(c.clone(), rdf::TYPE, iri(skos::CONCEPT)),
            t(c.clone(), skos::NOTATION, Literal::plain("53A45")),
            t(
                c.clone(),
                skos::PREF_LABEL,
                Literal::lang("Vector and tensor analysis", "en").unwrap(),
            ),
            t(c.clone(), skos::BROADER, msc("53Axx")),
            t(c.clone(), skos::IN_SCHEME, scheme.clone()),
            t(scheme, rdf::TYPE, iri(skos::CONCEPT_SCHEME)),
        ];
        for e in &expected {
            assert!(g.contains(e), "missing {e}");
        }
        assert_eq!(g.len(), expected.len());
    }

    #[test]
    fn empty_build_is_just_the_scheme() {
        let g = build("");
        assert_eq!(g.len(), 1);
        assert!(g.contains(&t(msc(""), rdf::TYPE, iri(skos::CONCEPT_SCHEME))));
    }

    #[test]
    fn scoped_relation_node() {
        let g = build("53A04 Curves {For applications in physics, see 83C05}\n");
        let cfg = SchemeConfig::default();
        let node = Term::Blank(scoped_node_id("53A04", 0));
        assert!(g.contains(&t(msc("53A04"), cfg.ext(ext::SCOPED_RELATION).as_str(), node.clone())));
        assert!(g.contains(&t(
            node.clone(),
            cfg.ext(ext::SCOPE).as_str(),
            Literal::lang("applications in physics", "en").unwrap()
        )));
        assert!(g.contains(&t(node.clone(), cfg.ext(ext::TARGET).as_str(), msc("83C05"))));
        assert!(g.contains(&t(node, rdf::TYPE, cfg.ext_term(ext::SCOPED_RELATION_CLASS))));
    }

    #[test]
    fn master_is_non_redundant() {
        let g = build("53-XX Differential geometry\n53Axx Classical\n53A45 Vector [See also 53-XX]\n");
        for p in [skos::NARROWER, skos::HAS_TOP_CONCEPT, skos::BROADER_TRANSITIVE] {
            assert!(g.match_pattern(None, Some(&iri(p)), None).is_empty());
        }
        let tops = g.match_pattern(None, Some(&iri(skos::TOP_CONCEPT_OF)), None);
        assert_eq!(tops.len(), 1);
        assert_eq!(tops[0].subject(), &msc("53-XX"));
        assert_eq!(g.match_pattern(None, Some(&iri(skos::BROADER)), None).len(), 2);
        // vocabulary declaration ships with the graph
        let cfg = SchemeConfig::default();
        assert!(g.contains(&t(cfg.ext_term(ext::SEE_ALSO), rdfs::SUB_PROPERTY_OF, iri(skos::RELATED))));
    }

    #[test]
    fn math_label_has_two_forms() {
        let g = build("65D32 Quadrature in $\\mathbb{R}^n$ & $a<b$\n");
        let c = msc("65D32");
        let labels = g.match_pattern(Some(&c), Some(&iri(skos::PREF_LABEL)), None);
        assert_eq!(
            labels[0].object(),
            &Term::from(Literal::lang("Quadrature in \\mathbb{R}^n & a<b", "en").unwrap())
        );
        let cfg = SchemeConfig::default();
        let math = g.match_pattern(Some(&c), Some(&cfg.ext_term(ext::MATH_LABEL)), None);
        let lit = math[0].object().as_literal().unwrap();
        assert!(lit.is_xml_literal());
        assert_eq!(lit.language(), None);
        assert_eq!(lit.lexical(), "Quadrature in $\\mathbb{R}^n$ &amp; $a&lt;b$");
    }

    #[test]
    fn add_labels_rules() {
        let mut g = build("53-XX DG\n53Axx Classical\n53A45 Vector and tensor analysis\n");
        let cfg = SchemeConfig::default();
        let row = LabelRow {
            code: "53A45".into(),
            lang: "it".into(),
            text: "Analisi vettoriale e tensoriale".into(),
        };
        let before = g.len();
        assert!(add_labels(&mut g, &cfg, std::slice::from_ref(&row)).is_empty());
        assert_eq!(g.len(), before + 1);
        let diags = add_labels(&mut g, &cfg, std::slice::from_ref(&row));
        assert_eq!(diags.len(), 1);
        assert!(diags[0].message.contains("\"it\""));
        assert_eq!(g.len(), before + 1);
        let unknown = LabelRow {
            code: "00Z99".into(),
            ..row
        };
        let diags = add_labels(&mut g, &cfg, &[unknown]);
        assert!(diags[0].message.contains("unknown code 00Z99"));
    }

    #[test]
    fn aux_rows_for_unknown_codes_are_skipped() {
        let parsed = parse_source("t", "53-XX DG\n53Axx Classical\n");
        let aux = Auxiliary {
            version_mappings: vec![VersionMapping {
                old_code: crate::source::ClassCode::parse("53A99").unwrap(),
                relation: MatchRelation::Exact,
                new_code: crate::source::ClassCode::parse("53A99").unwrap(),
                old_version: "2000".into(),
            }],
            collections: vec![CollectionSpec {
                id: "historical".into(),
                labels: vec![("en".into(), "All historical topics".into())],
                members: vec!["53Axx".into(), "01A99".into()],
            }],
            external: vec![ExternalMapping {
                code: "53Axx".into(),
                property: Iri::new(skos::CLOSE_MATCH).unwrap(),
                target: Iri::new("http://dewey.info/class/516.36/").unwrap(),
            }],
            ..Default::default()
        };
        let cfg = SchemeConfig::default();
        let built = build_graph(&parsed.records, &aux, &cfg);
        assert_eq!(built.diagnostics.len(), 2, "{:?}", built.diagnostics);
        let coll = Term::Iri(cfg.collection_iri("historical").unwrap());
        assert_eq!(built.graph.objects(&coll, &iri(skos::MEMBER)).count(), 1);
        assert!(built.graph.contains(&t(
            msc("53Axx"),
            skos::CLOSE_MATCH,
            Term::iri("http://dewey.info/class/516.36/").unwrap()
        )));
    }

    #[test]
    fn deterministic() {
        let src = "53-XX DG\n53Axx Classical {For numerics, see 65D17}\n";
        assert_eq!(build(src), build(src));
        let a = crate::serial::to_ntriples(&build(src));
        let b = crate::serial::to_ntriples(&build(src));
        assert_eq!(a, b);
    }
}
