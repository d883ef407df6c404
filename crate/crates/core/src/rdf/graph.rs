use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use super::{PrefixMap, RdfError, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    subject: Term,
    predicate: Term,
    object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Self, RdfError> {
        if subject.is_literal() {
            return Err(RdfError::LiteralSubject(subject.to_string()));
        }
        if predicate.as_iri().is_none() {
            return Err(RdfError::NonIriPredicate(predicate.to_string()));
        }
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Term {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub fn into_parts(self) -> (Term, Term, Term) {
        (self.subject, self.predicate, self.object)
    }
}

/// N-Triples line without the trailing newline.
impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// An in-memory set of triples with subject, predicate and object indexes.
///
/// The graph is insert-only. Build it single-threaded, then share it behind
/// an [`Arc`] (see [`Graph::freeze`]) for concurrent readers.
#[derive(Clone, Default)]
pub struct Graph {
    triples: Vec<Triple>,
    members: HashSet<Triple>,
    by_subject: HashMap<Term, Vec<usize>>,
    by_predicate: HashMap<Term, Vec<usize>>,
    by_object: HashMap<Term, Vec<usize>>,
    prefixes: PrefixMap,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_prefixes(prefixes: PrefixMap) -> Self {
        Graph {
            prefixes,
            ..Self::default()
        }
    }

    pub fn prefixes(&self) -> &PrefixMap {
        &self.prefixes
    }

    pub fn set_prefixes(&mut self, prefixes: PrefixMap) {
        self.prefixes = prefixes;
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Returns `true` iff the triple was not already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        if self.members.contains(&triple) {
            return false;
        }
        let idx = self.triples.len();
        self.by_subject
            .entry(triple.subject.clone())
            .or_default()
            .push(idx);
        self.by_predicate
            .entry(triple.predicate.clone())
            .or_default()
            .push(idx);
        self.by_object
            .entry(triple.object.clone())
            .or_default()
            .push(idx);
        self.members.insert(triple.clone());
        self.triples.push(triple);
        true
    }

    /// Validating insert from loose terms.
    pub fn add(&mut self, s: impl Into<Term>, p: impl Into<Term>, o: impl Into<Term>) -> Result<bool, RdfError> {
        Ok(self.insert(Triple::new(s.into(), p.into(), o.into())?))
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.members.contains(triple)
    }

    /// Triples in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    /// Triples in canonical N-Triples order.
    pub fn sorted(&self) -> Vec<&Triple> {
        let mut all: Vec<&Triple> = self.triples.iter().collect();
        all.sort_by_cached_key(|t| t.to_string());
        all
    }

    /// Unordered pattern match; `None` positions are wildcards.
    pub fn matching<'a>(
        &'a self,
        s: Option<&Term>,
        p: Option<&Term>,
        o: Option<&Term>,
    ) -> Box<dyn Iterator<Item = &'a Triple> + 'a> {
        let candidates = [
            s.map(|t| self.by_subject.get(t)),
            p.map(|t| self.by_predicate.get(t)),
            o.map(|t| self.by_object.get(t)),
        ];
        let mut best: Option<&Vec<usize>> = None;
        for c in candidates.into_iter().flatten() {
            match c {
                // A bound position with no index entry: nothing can match.
                None => return Box::new(std::iter::empty()),
                Some(list) => {
                    if best.is_none_or(|b| list.len() < b.len()) {
                        best = Some(list);
                    }
                }
            }
        }
        let (s, p, o) = (s.cloned(), p.cloned(), o.cloned());
        let fits = move |t: &&Triple| {
            s.as_ref().is_none_or(|s| &t.subject == s)
                && p.as_ref().is_none_or(|p| &t.predicate == p)
                && o.as_ref().is_none_or(|o| &t.object == o)
        };
        match best {
            Some(list) => Box::new(list.iter().map(|&i| &self.triples[i]).filter(fits)),
            None => Box::new(self.triples.iter()),
        }
    }

    /// Pattern match in canonical order (lexicographic by serialized triple).
    pub fn match_pattern(&self, s: Option<&Term>, p: Option<&Term>, o: Option<&Term>) -> Vec<Triple> {
        let mut out: Vec<Triple> = self.matching(s, p, o).cloned().collect();
        out.sort_by_cached_key(|t| t.to_string());
        out
    }

    pub fn objects<'a>(&'a self, s: &Term, p: &Term) -> impl Iterator<Item = &'a Term> + 'a {
        self.matching(Some(s), Some(p), None).map(Triple::object)
    }

    pub fn subjects<'a>(&'a self, p: &Term, o: &Term) -> impl Iterator<Item = &'a Term> + 'a {
        self.matching(None, Some(p), Some(o)).map(Triple::subject)
    }

    /// Distinct subjects, unordered.
    pub fn subject_terms(&self) -> impl Iterator<Item = &Term> {
        self.by_subject.keys()
    }

    pub fn extend<I: IntoIterator<Item = Triple>>(&mut self, triples: I) {
        for t in triples {
            self.insert(t);
        }
    }

    pub fn freeze(self) -> Arc<Graph> {
        Arc::new(self)
    }
}

/// Set equality; prefixes are presentation only.
impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for t in self.sorted() {
            list.entry(&format_args!("{t}"));
        }
        list.finish()
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        g.extend(iter);
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{vocab, Literal};

    fn iri(s: &str) -> Term {
        Term::iri(s).unwrap()
    }

    fn label_triple() -> Triple {
        Triple::new(
            iri("http://msc2010.org/resources/MSC/2010/53A45"),
            iri(vocab::skos::PREF_LABEL),
            Literal::lang("Vector and tensor analysis", "en").unwrap().into(),
        )
        .unwrap()
    }

    #[test]
    fn insert_reports_novelty() {
        let mut g = Graph::new();
        assert!(g.insert(label_triple()));
        assert_eq!(g.len(), 1);
        assert!(!g.insert(label_triple()));
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn malformed_triples_rejected() {
        let lit: Term = Literal::plain("x").into();
        assert!(matches!(
            Triple::new(lit.clone(), iri(vocab::rdf::TYPE), lit.clone()),
            Err(RdfError::LiteralSubject(_))
        ));
        assert!(matches!(
            Triple::new(iri("urn:a"), Term::blank("b").unwrap(), lit),
            Err(RdfError::NonIriPredicate(_))
        ));
    }

    #[test]
    fn match_on_empty_graph() {
        let g = Graph::new();
        assert!(g.match_pattern(None, None, None).is_empty());
        assert!(g.match_pattern(Some(&iri("urn:a")), None, None).is_empty());
    }

    #[test]
    fn match_by_subject_and_predicate() {
        let mut g = Graph::new();
        let parent = iri("urn:53Axx");
        let narrower = iri(vocab::skos::NARROWER);
        for c in ["urn:53A45", "urn:53A04", "urn:53A05"] {
            g.add(parent.clone(), narrower.clone(), iri(c)).unwrap();
        }
        g.add(iri("urn:53A45"), iri(vocab::skos::BROADER), parent.clone())
            .unwrap();
        let hits = g.match_pattern(Some(&parent), Some(&narrower), None);
        let objs: Vec<String> = hits.iter().map(|t| t.object().to_string()).collect();
        assert_eq!(objs, ["<urn:53A04>", "<urn:53A05>", "<urn:53A45>"]);
        assert_eq!(g.match_pattern(None, None, None).len(), 4);
        assert_eq!(g.match_pattern(None, None, Some(&parent)).len(), 1);
    }
}
