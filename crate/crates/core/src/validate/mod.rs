//! Structural checks and statistics over a master or expanded graph.
//!
//! | id | checks | severity |
//! |----|--------|----------|
//! | V1 | one notation per concept, notation values unique | error |
//! | V2 | at most one prefLabel per concept and language | error |
//! | V3 | prefLabel and altLabel values disjoint | error |
//! | V4 | broader is acyclic | error |
//! | V5 | tree shape: top concepts have no broader, others exactly one | error |
//! | V6 | link targets in the concept namespace are concepts | warning |
//! | V7 | broader and narrower are mutual inverses (expanded only) | error |
//!
//! V8 is the statistics block.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::{self, Write};

use crate::rdf::vocab::{ext, rdf, skos};
use crate::rdf::{Graph, Iri, Term};
use crate::serial::concept_code;
use crate::skos::SchemeConfig;
use crate::source::{ClassCode, Level};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Master,
    Expanded,
}

impl std::str::FromStr for Phase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "master" => Ok(Phase::Master),
            "expanded" => Ok(Phase::Expanded),
            other => Err(format!("unknown phase {other:?} (expected master or expanded)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckId {
    V1,
    V2,
    V3,
    V4,
    V5,
    V6,
    V7,
}

impl CheckId {
    pub fn severity(self) -> Severity {
        match self {
            CheckId::V6 => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub check: CheckId,
    pub severity: Severity,
    /// IRI or `_:id` of the offending node.
    pub subject: String,
    pub message: String,
}

/// Level counts use the code grammar, not depth in the graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stats {
    pub concepts: usize,
    pub top: usize,
    pub intermediate: usize,
    pub leaves: usize,
    /// Concepts whose notation is not a class code.
    pub unclassified: usize,
    pub math_labels: usize,
}

impl Stats {
    pub fn math_fraction(&self) -> f64 {
        if self.concepts == 0 {
            0.0
        } else {
            self.math_labels as f64 / self.concepts as f64
        }
    }

    pub fn to_text(&self) -> String {
        format!(
            "concepts: {}\ntop: {}\nintermediate: {}\nleaves: {}\nunclassified: {}\nmath labels: {} ({:.2}%)\n",
            self.concepts,
            self.top,
            self.intermediate,
            self.leaves,
            self.unclassified,
            self.math_labels,
            self.math_fraction() * 100.0
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub phase: Phase,
    /// Ordered by check id, then subject.
    pub findings: Vec<Finding>,
    pub stats: Stats,
}

impl Report {
    pub fn errors(&self) -> usize {
        self.findings.iter().filter(|f| f.severity == Severity::Error).count()
    }

    pub fn warnings(&self) -> usize {
        self.findings.len() - self.errors()
    }

    pub fn has_errors(&self) -> bool {
        self.errors() > 0
    }

    pub fn fired(&self, check: CheckId) -> bool {
        self.findings.iter().any(|f| f.check == check)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for f in &self.findings {
            let _ = writeln!(out, "{}\t{}\t{}\t{}", f.check, f.severity, f.subject, f.message);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.findings {
            let _ = writeln!(out, "{} {}: {}: {}", f.check, f.severity, f.subject, f.message);
        }
        let _ = writeln!(out, "{} error(s), {} warning(s)", self.errors(), self.warnings());
        out.push_str(&self.stats.to_text());
        out
    }
}

fn iri(s: &str) -> Term {
    Term::Iri(Iri::new(s).expect("vocabulary IRIs are valid"))
}

fn name(t: &Term) -> String {
    match t {
        Term::Iri(i) => i.as_str().to_owned(),
        other => other.to_string(),
    }
}

struct Checker<'a> {
    graph: &'a Graph,
    config: &'a SchemeConfig,
    concepts: Vec<&'a Term>,
    concept_set: HashSet<&'a Term>,
    findings: Vec<Finding>,
}

impl<'a> Checker<'a> {
    fn report(&mut self, check: CheckId, subject: &Term, message: String) {
        self.findings.push(Finding {
            check,
            severity: check.severity(),
            subject: name(subject),
            message,
        });
    }

    fn v1_notation(&mut self) {
        let p = iri(skos::NOTATION);
        let mut owners: BTreeMap<String, Vec<&Term>> = BTreeMap::new();
        for &c in &self.concepts.clone() {
            let notations: Vec<&Term> = self.graph.objects(c, &p).collect();
            match notations.len() {
                0 => self.report(CheckId::V1, c, "no notation".into()),
                1 => {}
                n => self.report(CheckId::V1, c, format!("{n} notations")),
            }
            for n in notations {
                owners.entry(n.sort_key()).or_default().push(c);
            }
        }
        for (value, mut holders) in owners {
            if holders.len() > 1 {
                holders.sort_by_key(|t| t.sort_key());
                let names: Vec<String> = holders.iter().map(|t| name(t)).collect();
                for &h in &holders {
                    self.report(CheckId::V1, h, format!("notation {value} shared by {}", names.join(", ")));
                }
            }
        }
    }

    fn v2_pref_label(&mut self) {
        let p = iri(skos::PREF_LABEL);
        for &c in &self.concepts.clone() {
            let mut by_lang: BTreeMap<&str, usize> = BTreeMap::new();
            for o in self.graph.objects(c, &p) {
                if let Some(lit) = o.as_literal() {
                    *by_lang.entry(lit.language().unwrap_or("")).or_default() += 1;
                }
            }
            for (lang, n) in by_lang.into_iter().filter(|(_, n)| *n > 1) {
                let lang = if lang.is_empty() { "no language" } else { lang };
                self.report(CheckId::V2, c, format!("{n} prefLabels for {lang}"));
            }
        }
    }

    fn v3_label_overlap(&mut self) {
        let pref = iri(skos::PREF_LABEL);
        let alt = iri(skos::ALT_LABEL);
        for &c in &self.concepts.clone() {
            let prefs: HashSet<&Term> = self.graph.objects(c, &pref).collect();
            let mut clashes: Vec<String> = self
                .graph
                .objects(c, &alt)
                .filter(|o| prefs.contains(o))
                .map(Term::to_string)
                .collect();
            clashes.sort();
            for label in clashes {
                self.report(CheckId::V3, c, format!("{label} is both prefLabel and altLabel"));
            }
        }
    }

    /// Strongly connected components of the broader relation (Tarjan).
    fn broader_cycles(&self) -> Vec<Vec<&'a Term>> {
        let p = iri(skos::BROADER);
        let mut nodes: Vec<&Term> = Vec::new();
        let mut index_of: HashMap<&Term, usize> = HashMap::new();
        let mut edges: Vec<Vec<usize>> = Vec::new();
        let graph: &'a Graph = self.graph;
        for t in graph.iter().filter(|t| t.predicate() == &p) {
            let mut id = |term: &'a Term| {
                *index_of.entry(term).or_insert_with(|| {
                    nodes.push(term);
                    edges.push(Vec::new());
                    nodes.len() - 1
                })
            };
            let (s, o) = (id(t.subject()), id(t.object()));
            edges[s].push(o);
        }

        let n = nodes.len();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut next = 0;
        let mut sccs = Vec::new();
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            // iterative DFS: (node, next edge position)
            let mut work = vec![(root, 0usize)];
            while let Some(&mut (v, ref mut pos)) = work.last_mut() {
                if *pos == 0 && index[v] == usize::MAX {
                    index[v] = next;
                    low[v] = next;
                    next += 1;
                    stack.push(v);
                    on_stack[v] = true;
                }
                if let Some(&w) = edges[v].get(*pos) {
                    *pos += 1;
                    if index[w] == usize::MAX {
                        work.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                    continue;
                }
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("v is on the stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    if comp.len() > 1 || edges[v].contains(&v) {
                        sccs.push(comp.into_iter().map(|i| nodes[i]).collect());
                    }
                }
            }
        }
        sccs
    }

    fn v4_acyclic(&mut self) {
        for mut cycle in self.broader_cycles() {
            cycle.sort_by_key(|t| t.sort_key());
            let names: Vec<String> = cycle.iter().map(|t| name(t)).collect();
            self.report(CheckId::V4, cycle[0], format!("broader cycle through {}", names.join(", ")));
        }
    }

    fn v5_tree(&mut self) {
        let broader = iri(skos::BROADER);
        let top_of = iri(skos::TOP_CONCEPT_OF);
        let has_top = iri(skos::HAS_TOP_CONCEPT);
        let tops: HashSet<&Term> = self
            .graph
            .matching(None, Some(&top_of), None)
            .map(|t| t.subject())
            .chain(self.graph.matching(None, Some(&has_top), None).map(|t| t.object()))
            .collect();
        for &c in &self.concepts.clone() {
            let n = self.graph.objects(c, &broader).count();
            if tops.contains(c) {
                if n > 0 {
                    self.report(CheckId::V5, c, format!("top concept has {n} broader"));
                }
            } else if n != 1 {
                self.report(CheckId::V5, c, format!("non-top concept has {n} broader"));
            }
        }
    }

    fn v6_dangling(&mut self) {
        let mut props: Vec<Term> = [
            skos::RELATED,
            skos::MEMBER,
            skos::EXACT_MATCH,
            skos::CLOSE_MATCH,
            skos::NARROW_MATCH,
            skos::BROAD_MATCH,
            skos::RELATED_MATCH,
            skos::BROADER,
            skos::NARROWER,
        ]
        .into_iter()
        .map(iri)
        .collect();
        props.extend([ext::SEE_ALSO, ext::SEE_MAINLY, ext::TARGET].map(|l| self.config.ext_term(l)));
        let base = self.config.base();
        let mut found = Vec::new();
        for p in &props {
            for t in self.graph.matching(None, Some(p), None) {
                let Term::Iri(target) = t.object() else { continue };
                if target.as_str().starts_with(base) && !self.concept_set.contains(t.object()) {
                    found.push((t.subject().clone(), format!("{} target {} is not a concept", p, t.object())));
                }
            }
        }
        for (s, msg) in found {
            self.report(CheckId::V6, &s, msg);
        }
    }

    fn v7_inverse(&mut self) {
        let broader = iri(skos::BROADER);
        let narrower = iri(skos::NARROWER);
        let mut found = Vec::new();
        for t in self.graph.matching(None, Some(&broader), None) {
            if !self.graph.objects(t.object(), &narrower).any(|o| o == t.subject()) {
                found.push((t.subject().clone(), format!("broader {} without inverse narrower", t.object())));
            }
        }
        for t in self.graph.matching(None, Some(&narrower), None) {
            if !self.graph.objects(t.object(), &broader).any(|o| o == t.subject()) {
                found.push((t.subject().clone(), format!("narrower {} without inverse broader", t.object())));
            }
        }
        for (s, msg) in found {
            self.report(CheckId::V7, &s, msg);
        }
    }

    fn stats(&self) -> Stats {
        let notation = iri(skos::NOTATION);
        let math = self.config.ext_term(ext::MATH_LABEL);
        let mut stats = Stats {
            concepts: self.concepts.len(),
            ..Stats::default()
        };
        for &c in &self.concepts {
            let code = self
                .graph
                .objects(c, &notation)
                .filter_map(|o| o.as_literal().map(|l| l.lexical().to_owned()))
                .min()
                .or_else(|| c.as_iri().map(|i| concept_code(i.as_str()).to_owned()));
            match code.as_deref().map(ClassCode::parse) {
                Some(Ok(code)) => match code.level() {
                    Level::Top => stats.top += 1,
                    Level::Middle => stats.intermediate += 1,
                    Level::Leaf => stats.leaves += 1,
                },
                _ => stats.unclassified += 1,
            }
            if self.graph.objects(c, &math).next().is_some() {
                stats.math_labels += 1;
            }
        }
        stats
    }
}

/// Validates against the default scheme layout.
pub fn validate(graph: &Graph, phase: Phase) -> Report {
    validate_with(graph, phase, &SchemeConfig::default())
}

/// `config` supplies the concept namespace (for V6) and the extension
/// vocabulary.
pub fn validate_with(graph: &Graph, phase: Phase, config: &SchemeConfig) -> Report {
    let rdf_type = iri(rdf::TYPE);
    let concept = iri(skos::CONCEPT);
    let mut concepts: Vec<&Term> = graph.subjects(&rdf_type, &concept).collect();
    concepts.sort_by_cached_key(|t| t.sort_key());
    concepts.dedup();
    let mut checker = Checker {
        graph,
        config,
        concept_set: concepts.iter().copied().collect(),
        concepts,
        findings: Vec::new(),
    };
    checker.v1_notation();
    checker.v2_pref_label();
    checker.v3_label_overlap();
    checker.v4_acyclic();
    checker.v5_tree();
    checker.v6_dangling();
    if phase == Phase::Expanded {
        checker.v7_inverse();
    }
    let stats = checker.stats();
    let mut findings = checker.findings;
    findings.sort_by(|a, b| (a.check, &a.subject, &a.message).cmp(&(b.check, &b.subject, &b.message)));
    findings.dedup();
    Report { phase, findings, stats }
}

/// Concepts from which a top concept is reachable along broader; an
/// independent view of V4 and V5 used by tests.
pub fn rooted_concepts(graph: &Graph) -> BTreeSet<String> {
    let broader = iri(skos::BROADER);
    let top_of = iri(skos::TOP_CONCEPT_OF);
    let mut children: HashMap<&Term, Vec<&Term>> = HashMap::new();
    for t in graph.matching(None, Some(&broader), None) {
        children.entry(t.object()).or_default().push(t.subject());
    }
    let mut seen = BTreeSet::new();
    let mut queue: Vec<&Term> = graph.matching(None, Some(&top_of), None).map(|t| t.subject()).collect();
    while let Some(node) = queue.pop() {
        if seen.insert(name(node)) {
            queue.extend(children.get(node).into_iter().flatten().copied());
        }
    }
    seen
}
