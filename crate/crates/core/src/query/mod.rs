//! A small SELECT query language: basic graph patterns, `OPTIONAL`,
//! `FILTER langMatches(lang(?v), "range")`, `GROUP BY` and `COUNT`.

mod parser;

pub use parser::parse_query;

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::entail::{PatternTerm, TriplePattern};
use crate::rdf::{vocab, Graph, Iri, Literal, PrefixMap, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown prefix {0:?}")]
    UnknownPrefix(String),
    #[error("invalid query: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Projection {
    Var(String),
    /// `COUNT(?var)`, reported under `alias`.
    Count { var: String, alias: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Filter {
    LangMatches { var: String, range: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WhereElement {
    Bgp(Vec<TriplePattern>),
    Optional(Vec<TriplePattern>),
    Filter(Filter),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub prefixes: PrefixMap,
    pub distinct: bool,
    pub projection: Vec<Projection>,
    pub where_clause: Vec<WhereElement>,
    pub group_by: Vec<String>,
}

impl Query {
    fn pattern_vars(&self) -> BTreeSet<&str> {
        self.where_clause
            .iter()
            .flat_map(|e| match e {
                WhereElement::Bgp(ps) | WhereElement::Optional(ps) => ps.as_slice(),
                WhereElement::Filter(_) => &[],
            })
            .flat_map(TriplePattern::vars)
            .collect()
    }

    pub(crate) fn validate(&self) -> Result<(), QueryError> {
        let has_count = self
            .projection
            .iter()
            .any(|p| matches!(p, Projection::Count { .. }));
        if has_count && self.group_by.is_empty() {
            return Err(QueryError::Invalid("COUNT requires GROUP BY".into()));
        }
        let in_where = self.pattern_vars();
        let mut names = BTreeSet::new();
        for p in &self.projection {
            let name = match p {
                Projection::Var(v) => {
                    if !self.group_by.is_empty() && !self.group_by.contains(v) {
                        return Err(QueryError::Invalid(format!(
                            "projected variable ?{v} is not in GROUP BY"
                        )));
                    }
                    v
                }
                Projection::Count { var, alias } => {
                    if !in_where.contains(var.as_str()) {
                        return Err(QueryError::Invalid(format!(
                            "counted variable ?{var} does not occur in WHERE"
                        )));
                    }
                    alias
                }
            };
            if !names.insert(name) {
                return Err(QueryError::Invalid(format!("duplicate result column ?{name}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub is_count: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultTable {
    pub columns: Vec<Column>,
    /// `None` is an unbound cell.
    pub rows: Vec<Vec<Option<Term>>>,
}

type Row = BTreeMap<String, Term>;
/// Group key (as sort keys) -> (key terms, member rows).
type Groups<'a> = BTreeMap<Vec<String>, (Vec<Option<Term>>, Vec<&'a Row>)>;

fn resolve<'a>(pt: &'a PatternTerm, row: &'a Row) -> Option<&'a Term> {
    match pt {
        PatternTerm::Const(t) => Some(t),
        PatternTerm::Var(v) => row.get(v),
    }
}

fn extend(row: &Row, pattern: &TriplePattern, graph: &Graph, out: &mut Vec<Row>) {
    let s = resolve(&pattern.subject, row);
    let p = resolve(&pattern.predicate, row);
    let o = resolve(&pattern.object, row);
    'triples: for t in graph.matching(s, p, o) {
        let mut next = row.clone();
        for (pt, term) in pattern.terms().into_iter().zip([t.subject(), t.predicate(), t.object()]) {
            if let PatternTerm::Var(v) = pt {
                match next.get(v) {
                    Some(bound) if bound != term => continue 'triples,
                    Some(_) => {}
                    None => {
                        next.insert(v.clone(), term.clone());
                    }
                }
            }
        }
        out.push(next);
    }
}

/// Solutions of `patterns` compatible with `seed`, as a natural join.
fn eval_bgp(graph: &Graph, patterns: &[TriplePattern], seed: Vec<Row>) -> Vec<Row> {
    let mut rows = seed;
    for pattern in patterns {
        let mut next = Vec::new();
        for row in &rows {
            extend(row, pattern, graph, &mut next);
        }
        rows = next;
    }
    rows
}

/// Basic language-range matching: `"en"` matches `en` and `en-…`, `"*"`
/// matches any non-empty tag; case-insensitive.
pub fn lang_matches(tag: &str, range: &str) -> bool {
    if range == "*" {
        return !tag.is_empty();
    }
    if tag.len() < range.len() || range.is_empty() {
        return false;
    }
    let (head, tail) = tag.split_at(range.len());
    head.eq_ignore_ascii_case(range) && (tail.is_empty() || tail.starts_with('-'))
}

/// Errors (unbound, non-literal) count as false.
fn filter_holds(filter: &Filter, row: &Row) -> bool {
    match filter {
        Filter::LangMatches { var, range } => match row.get(var) {
            Some(Term::Literal(lit)) => lang_matches(lit.language().unwrap_or(""), range),
            _ => false,
        },
    }
}

fn integer(n: usize) -> Term {
    Literal::typed(n.to_string(), Iri::new(vocab::xsd::INTEGER).unwrap()).into()
}

fn cell_key(cell: &Option<Term>) -> String {
    cell.as_ref().map(Term::sort_key).unwrap_or_default()
}

pub fn evaluate(graph: &Graph, query: &Query) -> ResultTable {
    let mut rows = vec![Row::new()];
    let mut filters = Vec::new();
    for element in &query.where_clause {
        match element {
            WhereElement::Bgp(ps) => rows = eval_bgp(graph, ps, rows),
            WhereElement::Optional(ps) => {
                let mut out = Vec::with_capacity(rows.len());
                for row in rows {
                    let ext = eval_bgp(graph, ps, vec![row.clone()]);
                    if ext.is_empty() {
                        out.push(row);
                    } else {
                        out.extend(ext);
                    }
                }
                rows = out;
            }
            WhereElement::Filter(f) => filters.push(f),
        }
    }
    rows.retain(|r| filters.iter().all(|f| filter_holds(f, r)));

    let columns: Vec<Column> = query
        .projection
        .iter()
        .map(|p| match p {
            Projection::Var(v) => Column {
                name: v.clone(),
                is_count: false,
            },
            Projection::Count { alias, .. } => Column {
                name: alias.clone(),
                is_count: true,
            },
        })
        .collect();

    let mut table: Vec<Vec<Option<Term>>> = if query.group_by.is_empty() {
        rows.iter()
            .map(|r| {
                query
                    .projection
                    .iter()
                    .map(|p| match p {
                        Projection::Var(v) => r.get(v).cloned(),
                        Projection::Count { .. } => unreachable!("validated"),
                    })
                    .collect()
            })
            .collect()
    } else {
        // unbound is a key value of its own
        let mut groups = Groups::new();
        for r in &rows {
            let key_terms: Vec<Option<Term>> = query.group_by.iter().map(|v| r.get(v).cloned()).collect();
            let key: Vec<String> = key_terms.iter().map(cell_key).collect();
            groups.entry(key).or_insert_with(|| (key_terms, Vec::new())).1.push(r);
        }
        groups
            .into_values()
            .map(|(key, members)| {
                query
                    .projection
                    .iter()
                    .map(|p| match p {
                        Projection::Var(v) => {
                            let i = query.group_by.iter().position(|g| g == v).expect("validated");
                            key[i].clone()
                        }
                        Projection::Count { var, .. } => {
                            Some(integer(members.iter().filter(|r| r.contains_key(var)).count()))
                        }
                    })
                    .collect()
            })
            .collect()
    };

    if query.distinct {
        let mut seen = HashSet::new();
        table.retain(|row| seen.insert(row.clone()));
    }
    table.sort_by_cached_key(|row| row.iter().map(cell_key).collect::<Vec<_>>());

    ResultTable { columns, rows: table }
}

impl ResultTable {
    /// Header of `?name` columns, N-Triples cells, bare integers for counts.
    pub fn to_tsv(&self) -> String {
        let mut out = self
            .columns
            .iter()
            .map(|c| format!("?{}", c.name))
            .collect::<Vec<_>>()
            .join("\t");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .zip(&self.columns)
                .map(|(cell, col)| match cell {
                    None => String::new(),
                    Some(Term::Literal(l)) if col.is_count => l.lexical().to_owned(),
                    Some(t) => t.to_string(),
                })
                .collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }

    /// The standard SELECT results JSON object. Unbound cells are omitted.
    pub fn to_json(&self) -> Value {
        let vars: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        let bindings: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (cell, col) in row.iter().zip(&self.columns) {
                    if let Some(term) = cell {
                        obj.insert(col.name.clone(), term_json(term));
                    }
                }
                Value::Object(obj)
            })
            .collect();
        json!({ "head": { "vars": vars }, "results": { "bindings": bindings } })
    }
}

fn term_json(term: &Term) -> Value {
    match term {
        Term::Iri(i) => json!({ "type": "uri", "value": i.as_str() }),
        Term::Blank(b) => json!({ "type": "bnode", "value": b.id() }),
        Term::Literal(l) => {
            let mut obj = Map::new();
            obj.insert("type".into(), "literal".into());
            obj.insert("value".into(), l.lexical().into());
            if let Some(tag) = l.language() {
                obj.insert("xml:lang".into(), tag.into());
            }
            if let Some(dt) = l.datatype() {
                obj.insert("datatype".into(), dt.as_str().into());
            }
            Value::Object(obj)
        }
    }
}
