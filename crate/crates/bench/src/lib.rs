//! Inputs shared by the pipeline benchmarks.

use msc_skos::entail::{builtin_ruleset, expand};
use msc_skos::sample::{synthetic_source, Shape};
use msc_skos::skos::{build_graph, Auxiliary, SchemeConfig};
use msc_skos::source::{parse_source, SourceRecord};
use msc_skos::Graph;

/// A scheme with the given number of leaves per middle class and a fixed
/// 10 × 10 upper structure.
pub fn shape(leaves_per_middle: usize) -> Shape {
    Shape {
        top: 10,
        middle: 100,
        leaves: 100 * leaves_per_middle,
        math_every: 250,
    }
}

pub fn records(shape: Shape) -> Vec<SourceRecord> {
    parse_source("bench", &synthetic_source(shape)).records
}

pub fn master(shape: Shape) -> Graph {
    build_graph(&records(shape), &Auxiliary::default(), &SchemeConfig::default()).graph
}

pub fn expanded(shape: Shape) -> Graph {
    expand(&master(shape), &builtin_ruleset()).expect("builtin rules are valid")
}
