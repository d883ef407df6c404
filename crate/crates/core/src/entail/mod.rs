//! Forward-chaining expansion of the master graph.
//!
//! Evaluation is semi-naive: each round only joins rule premises against
//! triples derived in the previous round, with the remaining premises
//! matched against the whole graph so far. The least fixpoint is reached
//! when a round derives nothing new.

mod rule;

pub use rule::{parse_rules, PatternTerm, Rule, TriplePattern};

use std::collections::HashSet;

use thiserror::Error;

use crate::rdf::{vocab, Graph, PrefixMap, Term, Triple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EntailError {
    #[error("rule {id}: {reason}")]
    InvalidRule { id: String, reason: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// The shipped ruleset, in the text rule format.
pub const BUILTIN_RULES: &str = "\
R1: skos:broader(?x, ?y) => skos:narrower(?y, ?x)
R2: skos:narrower(?x, ?y) => skos:broader(?y, ?x)
R3a: skos:broader(?x, ?y) => skos:broaderTransitive(?x, ?y)
R3b: skos:broaderTransitive(?x, ?y) & skos:broaderTransitive(?y, ?z) => skos:broaderTransitive(?x, ?z)
R4a: skos:topConceptOf(?x, ?s) => skos:hasTopConcept(?s, ?x)
R4b: skos:hasTopConcept(?s, ?x) => skos:topConceptOf(?x, ?s)
R4c: skos:topConceptOf(?x, ?s) => skos:inScheme(?x, ?s)
R5: skos:related(?x, ?y) => skos:related(?y, ?x)
R6a: ext:seeAlso(?x, ?y) => skos:related(?x, ?y)
R6b: ext:seeMainly(?x, ?y) => skos:related(?x, ?y)
R6c: ext:scopedRelation(?x, ?n) & ext:target(?n, ?y) => skos:related(?x, ?y)
R7: skos:broader(?x, ?y) & skos:inScheme(?y, ?s) => skos:inScheme(?x, ?s)
R8a: skos:exactMatch(?x, ?y) => skos:exactMatch(?y, ?x)
R8b: skos:exactMatch(?x, ?y) & skos:exactMatch(?y, ?z) => skos:exactMatch(?x, ?z)
R8c: skos:closeMatch(?x, ?y) => skos:closeMatch(?y, ?x)
R9: skos:broader(?x, ?y) => rdf:type(?x, skos:Concept) & rdf:type(?y, skos:Concept)
";

/// The builtin rules with `ext:` bound to the default extension vocabulary.
pub fn builtin_ruleset() -> Vec<Rule> {
    builtin_ruleset_with(&PrefixMap::standard(vocab::MSC_BASE))
}

/// The builtin rules resolved against `prefixes`, which must bind `skos`,
/// `rdf` and `ext`.
pub fn builtin_ruleset_with(prefixes: &PrefixMap) -> Vec<Rule> {
    parse_rules(BUILTIN_RULES, prefixes).expect("builtin rules parse")
}

type Bindings = Vec<(String, Term)>;

fn lookup<'a>(b: &'a Bindings, var: &str) -> Option<&'a Term> {
    b.iter().find(|(v, _)| v == var).map(|(_, t)| t)
}

fn resolve<'a>(pt: &'a PatternTerm, b: &'a Bindings) -> Option<&'a Term> {
    match pt {
        PatternTerm::Const(t) => Some(t),
        PatternTerm::Var(v) => lookup(b, v),
    }
}

/// Extends `b` so that `pattern` matches `triple`, or `None` on conflict.
fn unify(pattern: &TriplePattern, triple: &Triple, b: &Bindings) -> Option<Bindings> {
    let mut out = b.clone();
    for (pt, term) in pattern
        .terms()
        .into_iter()
        .zip([triple.subject(), triple.predicate(), triple.object()])
    {
        match pt {
            PatternTerm::Const(c) if c != term => return None,
            PatternTerm::Const(_) => {}
            PatternTerm::Var(v) => match lookup(&out, v) {
                Some(bound) if bound != term => return None,
                Some(_) => {}
                None => out.push((v.clone(), term.clone())),
            },
        }
    }
    Some(out)
}

fn candidates<'a>(graph: &'a Graph, pattern: &'a TriplePattern, b: &'a Bindings) -> impl Iterator<Item = &'a Triple> + 'a {
    graph.matching(
        resolve(&pattern.subject, b),
        resolve(&pattern.predicate, b),
        resolve(&pattern.object, b),
    )
}

/// Joins `premises` (skipping index `skip`) against `graph`, calling `emit`
/// for every complete binding.
fn join(graph: &Graph, premises: &[TriplePattern], skip: usize, at: usize, b: Bindings, emit: &mut dyn FnMut(&Bindings)) {
    if at == premises.len() {
        emit(&b);
        return;
    }
    if at == skip {
        return join(graph, premises, skip, at + 1, b, emit);
    }
    let pattern = &premises[at];
    for t in candidates(graph, pattern, &b) {
        if let Some(next) = unify(pattern, t, &b) {
            join(graph, premises, skip, at + 1, next, emit);
        }
    }
}

fn instantiate(pattern: &TriplePattern, b: &Bindings) -> Option<Triple> {
    let s = resolve(&pattern.subject, b)?.clone();
    let p = resolve(&pattern.predicate, b)?.clone();
    let o = resolve(&pattern.object, b)?.clone();
    // A variable may bind a literal that cannot be a subject; such
    // conclusions are dropped.
    Triple::new(s, p, o).ok()
}

/// The least superset of `graph` closed under `rules`. The input is not
/// modified.
pub fn expand(graph: &Graph, rules: &[Rule]) -> Result<Graph, EntailError> {
    for r in rules {
        r.check()?;
    }
    let mut out = graph.clone();
    let mut delta: Graph = graph.iter().cloned().collect();

    while !delta.is_empty() {
        let mut fresh: Vec<Triple> = Vec::new();
        let mut seen: HashSet<Triple> = HashSet::new();
        for rule in rules {
            let premises = rule.premises();
            for (i, first) in premises.iter().enumerate() {
                for t in candidates(&delta, first, &Vec::new()) {
                    let Some(b) = unify(first, t, &Vec::new()) else {
                        continue;
                    };
                    join(&out, premises, i, 0, b, &mut |b| {
                        for c in rule.conclusions() {
                            if let Some(derived) = instantiate(c, b) {
                                if !out.contains(&derived) && seen.insert(derived.clone()) {
                                    fresh.push(derived);
                                }
                            }
                        }
                    });
                }
            }
        }
        out.extend(fresh.iter().cloned());
        delta = fresh.into_iter().collect();
    }
    Ok(out)
}
