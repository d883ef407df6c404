use std::collections::BTreeSet;
use std::fmt;

use crate::rdf::{Iri, Literal, PrefixMap, Term};

use super::EntailError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PatternTerm {
    Const(Term),
    Var(String),
}

impl PatternTerm {
    pub fn var(name: &str) -> Self {
        PatternTerm::Var(name.to_owned())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Const(_) => None,
        }
    }
}

impl From<Term> for PatternTerm {
    fn from(t: Term) -> Self {
        PatternTerm::Const(t)
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Const(t) => write!(f, "{t}"),
            PatternTerm::Var(v) => write!(f, "?{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn new(subject: PatternTerm, predicate: PatternTerm, object: PatternTerm) -> Self {
        TriplePattern {
            subject,
            predicate,
            object,
        }
    }

    pub fn terms(&self) -> [&PatternTerm; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.terms().into_iter().filter_map(PatternTerm::as_var)
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {})", self.predicate, self.subject, self.object)
    }
}

/// Premises entail conclusions. Conclusions only recombine premise
/// bindings, so expansion over a finite graph always terminates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    id: String,
    premises: Vec<TriplePattern>,
    conclusions: Vec<TriplePattern>,
}

impl Rule {
    pub fn new(
        id: impl Into<String>,
        premises: Vec<TriplePattern>,
        conclusions: Vec<TriplePattern>,
    ) -> Result<Self, EntailError> {
        let rule = Rule {
            id: id.into(),
            premises,
            conclusions,
        };
        rule.check()?;
        Ok(rule)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn premises(&self) -> &[TriplePattern] {
        &self.premises
    }

    pub fn conclusions(&self) -> &[TriplePattern] {
        &self.conclusions
    }

    pub(super) fn check(&self) -> Result<(), EntailError> {
        let invalid = |reason: String| EntailError::InvalidRule {
            id: self.id.clone(),
            reason,
        };
        if self.premises.is_empty() {
            return Err(invalid("no premises".into()));
        }
        if self.conclusions.is_empty() {
            return Err(invalid("no conclusions".into()));
        }
        let bound: BTreeSet<&str> = self.premises.iter().flat_map(TriplePattern::vars).collect();
        for c in &self.conclusions {
            if !matches!(c.predicate, PatternTerm::Const(Term::Iri(_))) {
                return Err(invalid(format!("conclusion predicate must be an IRI in {c}")));
            }
            if let PatternTerm::Const(Term::Literal(_)) = c.subject {
                return Err(invalid(format!("literal subject in {c}")));
            }
            if let Some(v) = c.vars().find(|v| !bound.contains(v)) {
                return Err(invalid(format!("variable ?{v} does not occur in any premise")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ps: &[TriplePattern]| ps.iter().map(ToString::to_string).collect::<Vec<_>>().join(" & ");
        write!(f, "{}: {} => {}", self.id, join(&self.premises), join(&self.conclusions))
    }
}

/// Parses rules written one per line as
/// `id: pred(arg, arg) & … => pred(arg, arg) & …`.
///
/// Predicates are CURIEs or `<iri>`; arguments may also be `?var`,
/// `_:blank` or a quoted literal with an optional `@lang`. Blank lines and
/// lines starting with `#` are skipped.
pub fn parse_rules(text: &str, prefixes: &PrefixMap) -> Result<Vec<Rule>, EntailError> {
    let mut rules = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| EntailError::Parse {
            line: idx + 1,
            message,
        };
        let (id, body) = line
            .split_once(':')
            .filter(|(id, _)| !id.trim().is_empty() && !id.contains('('))
            .ok_or_else(|| err("expected `id: premises => conclusions`".into()))?;
        let (lhs, rhs) = body
            .split_once("=>")
            .ok_or_else(|| err("missing `=>`".into()))?;
        let premises = parse_conjunction(lhs, prefixes).map_err(&err)?;
        let conclusions = parse_conjunction(rhs, prefixes).map_err(&err)?;
        let rule = Rule::new(id.trim(), premises, conclusions).map_err(|e| err(e.to_string()))?;
        rules.push(rule);
    }
    Ok(rules)
}

fn parse_conjunction(text: &str, prefixes: &PrefixMap) -> Result<Vec<TriplePattern>, String> {
    split_top_level(text, '&')
        .into_iter()
        .map(|atom| parse_atom(atom.trim(), prefixes))
        .collect()
}

/// Splits on `sep` outside quotes, angle brackets and parentheses.
fn split_top_level(text: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut in_quote = false;
    let mut in_iri = false;
    let mut start = 0;
    let mut prev = '\0';
    for (i, c) in text.char_indices() {
        match c {
            '"' if !in_iri && prev != '\\' => in_quote = !in_quote,
            '<' if !in_quote => in_iri = true,
            '>' if !in_quote => in_iri = false,
            '(' if !in_quote && !in_iri => depth += 1,
            ')' if !in_quote && !in_iri => depth -= 1,
            c if c == sep && depth == 0 && !in_quote && !in_iri => {
                parts.push(&text[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
        prev = c;
    }
    parts.push(&text[start..]);
    parts
}

fn parse_atom(atom: &str, prefixes: &PrefixMap) -> Result<TriplePattern, String> {
    let open = atom.find('(').ok_or_else(|| format!("expected pred(s, o), got {atom:?}"))?;
    let inner = atom[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| format!("unclosed parenthesis in {atom:?}"))?;
    let predicate = parse_term(atom[..open].trim(), prefixes)?;
    let args = split_top_level(inner, ',');
    if args.len() != 2 {
        return Err(format!("expected two arguments in {atom:?}"));
    }
    Ok(TriplePattern::new(
        parse_term(args[0].trim(), prefixes)?,
        predicate,
        parse_term(args[1].trim(), prefixes)?,
    ))
}

fn parse_term(text: &str, prefixes: &PrefixMap) -> Result<PatternTerm, String> {
    if let Some(var) = text.strip_prefix('?') {
        if var.is_empty() || !var.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(format!("bad variable {text:?}"));
        }
        return Ok(PatternTerm::var(var));
    }
    if let Some(iri) = text.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
        return Term::iri(iri).map(Into::into).map_err(|e| e.to_string());
    }
    if let Some(id) = text.strip_prefix("_:") {
        return Term::blank(id).map(Into::into).map_err(|e| e.to_string());
    }
    if let Some(rest) = text.strip_prefix('"') {
        let close = rest.rfind('"').ok_or_else(|| format!("unterminated literal {text:?}"))?;
        let lexical = rest[..close].replace("\\\"", "\"").replace("\\\\", "\\");
        let suffix = &rest[close + 1..];
        let lit = if let Some(tag) = suffix.strip_prefix('@') {
            Literal::lang(lexical, tag).map_err(|e| e.to_string())?
        } else if let Some(dt) = suffix.strip_prefix("^^") {
            let dt = match dt.strip_prefix('<').and_then(|d| d.strip_suffix('>')) {
                Some(full) => Iri::new(full),
                None => prefixes.expand_curie(dt),
            }
            .map_err(|e| e.to_string())?;
            Literal::typed(lexical, dt)
        } else if suffix.is_empty() {
            Literal::plain(lexical)
        } else {
            return Err(format!("junk after literal {text:?}"));
        };
        return Ok(PatternTerm::Const(lit.into()));
    }
    prefixes
        .expand_curie(text)
        .map(|iri| PatternTerm::Const(Term::Iri(iri)))
        .map_err(|e| e.to_string())
}
