//! Bundled sample inputs and a generator for synthetic schemes.

use std::fmt::Write;

use crate::entail::{builtin_ruleset, expand};
use crate::serial::parse_ntriples;
use crate::skos::{build_graph, parse_translations, Auxiliary, SchemeConfig};
use crate::source::parse_source;
use crate::Graph;

/// Master source with two top classes, cross-references, a note and a math
/// label.
pub const SOURCE: &str = include_str!("../fixtures/sample.msc");
/// Italian and German labels for part of [`SOURCE`].
pub const LABELS: &str = include_str!("../fixtures/labels.tsv");
/// Three article annotations, two of them on 53A45.
pub const ARTICLES: &str = include_str!("../fixtures/articles.nt");
/// Subclass listing with article counts.
pub const LISTING: &str = include_str!("../fixtures/listing.rq");
/// One top, one middle and one leaf class.
pub const MINI: &str = include_str!("../fixtures/mini.msc");

/// Master graph of [`SOURCE`] with [`LABELS`].
pub fn master() -> Graph {
    let parsed = parse_source("sample.msc", SOURCE);
    let (translations, _) = parse_translations("labels.tsv", LABELS);
    let aux = Auxiliary {
        translations,
        ..Auxiliary::default()
    };
    build_graph(&parsed.records, &aux, &SchemeConfig::default()).graph
}

/// [`master`] closed under the builtin rules.
pub fn expanded() -> Graph {
    expand(&master(), &builtin_ruleset()).expect("builtin rules are valid")
}

pub fn articles() -> Graph {
    parse_ntriples(ARTICLES).expect("bundled articles parse")
}

/// Sizes of a generated scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub top: usize,
    pub middle: usize,
    pub leaves: usize,
    /// Every `math_every`-th leaf gets a label with a `$…$` span; 0 for none.
    pub math_every: usize,
}

impl Shape {
    /// Counts of the 2010 edition: 63 / 528 / 5606, about 0.4% math labels.
    pub const MSC2010: Shape = Shape {
        top: 63,
        middle: 528,
        leaves: 5606,
        math_every: 224,
    };

    pub fn total(&self) -> usize {
        self.top + self.middle + self.leaves
    }
}

/// Spreads `total` over `buckets` as evenly as possible, larger first.
fn spread(total: usize, buckets: usize) -> impl Iterator<Item = usize> {
    let (each, extra) = total.checked_div(buckets).map_or((0, 0), |each| (each, total % buckets));
    (0..buckets).map(move |i| each + usize::from(i < extra))
}

/// A master source of the given shape, in code order.
///
/// Panics if the shape needs more than 100 top classes, 26 middle classes
/// per top, or 99 leaves per middle class.
pub fn synthetic_source(shape: Shape) -> String {
    assert!(shape.top <= 100, "at most 100 top classes");
    assert!(shape.middle == 0 || shape.top > 0, "middle classes need a top class");
    assert!(shape.leaves == 0 || shape.middle > 0, "leaves need a middle class");
    let mut out = String::from("% synthetic scheme\n");
    let middles: Vec<usize> = spread(shape.middle, shape.top).collect();
    let mut leaf_counts = spread(shape.leaves, shape.middle);
    let mut leaf_no = 0usize;
    for (t, &m) in middles.iter().enumerate() {
        assert!(m <= 26, "at most 26 middle classes per top class");
        let _ = writeln!(out, "{t:02}-XX Subject area {t}");
        for letter in (b'A'..).take(m).map(char::from) {
            let _ = writeln!(out, "{t:02}{letter}xx Topic {t}{letter}");
            let n = leaf_counts.next().unwrap_or(0);
            assert!(n <= 99, "at most 99 leaves per middle class");
            for d in 1..=n {
                if shape.math_every > 0 && leaf_no.is_multiple_of(shape.math_every) {
                    let _ = writeln!(out, "{t:02}{letter}{d:02} Problems in $\\mathbb{{R}}^{{{d}}}$");
                } else {
                    let _ = writeln!(out, "{t:02}{letter}{d:02} Subtopic {t}{letter}{d}");
                }
                leaf_no += 1;
            }
        }
    }
    out
}
