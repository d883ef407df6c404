#![allow(dead_code)]

use msc_skos::rdf::vocab::{rdf, skos, MSC_BASE};
use msc_skos::{Graph, Literal, Term};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn iri(s: &str) -> Term {
    Term::iri(s).unwrap()
}

pub fn concept(i: usize) -> Term {
    iri(&format!("{MSC_BASE}c{i}"))
}

/// A small SKOS-shaped graph with up to `max_concepts` concepts and random
/// hierarchy, association and mapping links, cycles included.
pub fn random_skos_graph(rng: &mut StdRng, max_concepts: usize) -> Graph {
    let n = rng.gen_range(1..=max_concepts);
    let scheme = iri(MSC_BASE);
    let ext = format!("{MSC_BASE}vocab#");
    let props = [
        skos::BROADER,
        skos::NARROWER,
        skos::RELATED,
        skos::EXACT_MATCH,
        skos::CLOSE_MATCH,
    ];
    let mut g = Graph::new();
    for i in 0..n {
        if rng.gen_bool(0.5) {
            g.add(concept(i), iri(rdf::TYPE), iri(skos::CONCEPT)).unwrap();
        }
        if rng.gen_bool(0.1) {
            g.add(concept(i), iri(skos::TOP_CONCEPT_OF), scheme.clone()).unwrap();
        }
    }
    for _ in 0..rng.gen_range(0..=2 * n) {
        let p = props.choose(rng).unwrap();
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        g.add(concept(a), iri(p), concept(b)).unwrap();
    }
    for _ in 0..rng.gen_range(0..=n / 4) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        g.add(concept(a), iri(&format!("{ext}seeAlso")), concept(b)).unwrap();
    }
    g
}

/// Up to `max_triples` triples over a tiny vocabulary so that joins hit.
pub fn random_dense_graph(rng: &mut StdRng, max_triples: usize) -> Graph {
    let nodes: Vec<Term> = (0..6).map(|i| iri(&format!("http://example.org/n{i}"))).collect();
    let preds: Vec<Term> = (0..3).map(|i| iri(&format!("http://example.org/p{i}"))).collect();
    let lits: Vec<Term> = vec![
        Literal::plain("x").into(),
        Literal::lang("x", "en").unwrap().into(),
        Literal::lang("y", "it").unwrap().into(),
    ];
    let mut g = Graph::new();
    for _ in 0..rng.gen_range(0..=max_triples) {
        let s = nodes.choose(rng).unwrap().clone();
        let p = preds.choose(rng).unwrap().clone();
        let o = if rng.gen_bool(0.7) {
            nodes.choose(rng).unwrap().clone()
        } else {
            lits.choose(rng).unwrap().clone()
        };
        g.add(s, p, o).unwrap();
    }
    g
}
