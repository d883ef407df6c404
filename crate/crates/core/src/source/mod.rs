//! Reader for the line-oriented master source.
//!
//! ```text
//! % comment
//! 53-XX Differential geometry
//! 53Axx Classical differential geometry
//! 53A04 Curves in Euclidean space {For numeric approximations, see 65D17}
//! 53A45 Vector and tensor analysis [See also 58A10] | Co-classify with 15A72
//! ```

mod code;
mod crossref;

pub use code::{ClassCode, Level};
pub use crossref::{extract_crossrefs, CrossRef, CrossRefKind, Extracted};

use std::collections::HashMap;

use thiserror::Error;

use crate::Diagnostic;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SourceError {
    #[error("invalid class code {0:?}")]
    InvalidCode(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceRecord {
    pub code: ClassCode,
    /// Label with cross-reference clauses removed; math kept verbatim.
    pub label: String,
    pub crossrefs: Vec<CrossRef>,
    pub has_math_markup: bool,
    pub note: Option<String>,
}

impl SourceRecord {
    /// Renders the record back to a single source line.
    pub fn to_source_line(&self) -> String {
        let mut line = format!("{} {}", self.code, self.label);
        for x in &self.crossrefs {
            line.push(' ');
            line.push_str(&x.to_string());
        }
        if let Some(note) = &self.note {
            line.push_str(" | ");
            line.push_str(note);
        }
        line
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedSource {
    pub records: Vec<SourceRecord>,
    pub diagnostics: Vec<Diagnostic>,
}

/// True iff `text` holds a `$…$` span with something between the dollars.
pub fn has_math_span(text: &str) -> bool {
    let mut parts = text.split('$');
    parts.next();
    let mut inside = true;
    let mut spans = parts.collect::<Vec<_>>();
    // the last piece is only inside a span if a closing `$` followed it
    spans.pop();
    for piece in spans {
        if inside && !piece.is_empty() {
            return true;
        }
        inside = !inside;
    }
    false
}

/// Splits off a trailing `| note`, ignoring bars inside math spans.
fn split_note(description: &str) -> (&str, Option<&str>) {
    let mut in_math = false;
    for (i, c) in description.char_indices() {
        match c {
            '$' => in_math = !in_math,
            '|' if !in_math => {
                return (&description[..i], Some(description[i + 1..].trim()));
            }
            _ => {}
        }
    }
    (description, None)
}

pub fn parse_line(line: &str) -> Result<(SourceRecord, Vec<String>), String> {
    let line = line.trim();
    let (code_text, description) = match line.split_once(char::is_whitespace) {
        Some((c, d)) => (c, d.trim()),
        None => (line, ""),
    };
    let code = ClassCode::parse(code_text).map_err(|e| e.to_string())?;
    if description.is_empty() {
        return Err(format!("{code}: missing description"));
    }
    let (description, note) = split_note(description);
    let Extracted {
        label,
        crossrefs,
        problems,
    } = extract_crossrefs(description);
    if label.is_empty() {
        return Err(format!("{code}: empty label"));
    }
    let record = SourceRecord {
        code,
        has_math_markup: has_math_span(&label),
        label,
        crossrefs,
        note: note.filter(|n| !n.is_empty()).map(str::to_owned),
    };
    Ok((record, problems))
}

/// Parses a whole master source. `name` is used in diagnostics.
///
/// Lines that cannot be read are skipped with a diagnostic. Duplicate codes
/// keep the first occurrence. Records whose parent code is absent are kept
/// and reported.
pub fn parse_source(name: &str, text: &str) -> ParsedSource {
    let mut out = ParsedSource::default();
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut lines_of: Vec<usize> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        if raw.starts_with('%') || raw.trim().is_empty() {
            continue;
        }
        let (record, problems) = match parse_line(raw) {
            Ok(r) => r,
            Err(msg) => {
                out.diagnostics.push(Diagnostic::new(name, Some(lineno), msg));
                continue;
            }
        };
        for p in problems {
            out.diagnostics
                .push(Diagnostic::new(name, Some(lineno), format!("{}: {p}", record.code)));
        }
        if let Some(first) = seen.get(record.code.as_str()) {
            out.diagnostics.push(Diagnostic::new(
                name,
                Some(lineno),
                format!("duplicate code {} (first defined on line {first})", record.code),
            ));
            continue;
        }
        seen.insert(record.code.as_str().to_owned(), lineno);
        lines_of.push(lineno);
        out.records.push(record);
    }

    for (record, &lineno) in out.records.iter().zip(&lines_of) {
        if let Some(parent) = record.code.parent() {
            if !seen.contains_key(parent.as_str()) {
                out.diagnostics.push(Diagnostic::new(
                    name,
                    Some(lineno),
                    format!("{}: parent {} not defined", record.code, parent),
                ));
            }
        }
    }
    out.diagnostics.sort_by_key(|d| d.line);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn three_levels_no_diagnostics() {
        let src = "53-XX Differential geometry\n53Axx Classical differential geometry\n53A45 Vector and tensor analysis\n";
        let parsed = parse_source("t", src);
        assert_eq!(parsed.records.len(), 3);
        assert!(parsed.diagnostics.is_empty(), "{:?}", parsed.diagnostics);
        assert_eq!(parsed.records[2].code.as_str(), "53A45");
        assert_eq!(parsed.records[2].label, "Vector and tensor analysis");
        assert_eq!(parsed.records[0].code.level(), Level::Top);
    }

    #[test]
    fn comments_only() {
        let parsed = parse_source("t", "% header\n%another\n\n   \n");
        assert!(parsed.records.is_empty());
        assert!(parsed.diagnostics.is_empty());
    }

    #[test]
    fn dangling_parent_still_emitted() {
        let parsed = parse_source("t", "99Z99 Orphan leaf\n");
        assert_eq!(parsed.records.len(), 1);
        assert_eq!(parsed.diagnostics.len(), 1);
        assert_eq!(parsed.diagnostics[0].line, Some(1));
        assert!(parsed.diagnostics[0].message.contains("99Zxx"));
    }

    #[test]
    fn bad_lines_skipped_with_line_numbers() {
        let src = "53-XX Differential geometry\n5A345 Broken\n53Axx\n53Axx Classical\n53Axx Again\n";
        let parsed = parse_source("src.msc", src);
        assert_eq!(parsed.records.len(), 2);
        let lines: Vec<_> = parsed.diagnostics.iter().map(|d| d.line.unwrap()).collect();
        assert_eq!(lines, [2, 3, 5]);
        assert!(parsed.diagnostics[0].to_string().starts_with("src.msc:2: "));
        assert!(parsed.diagnostics[2].message.contains("duplicate"));
        assert_eq!(parsed.records[1].label, "Classical");
    }

    #[test]
    fn note_and_math() {
        let (rec, problems) =
            parse_line("65D32 Quadrature formulas in $\\mathbb{R}^n$, $|x|$ bounds | Co-classify with 41A55").unwrap();
        assert!(problems.is_empty());
        assert!(rec.has_math_markup);
        assert_eq!(rec.label, "Quadrature formulas in $\\mathbb{R}^n$, $|x|$ bounds");
        assert_eq!(rec.note.as_deref(), Some("Co-classify with 41A55"));
    }

    #[test]
    fn math_span_detection() {
        assert!(has_math_span("a $x$ b"));
        assert!(!has_math_span("costs $5"));
        assert!(!has_math_span("empty $$ span"));
        assert!(!has_math_span("plain"));
        assert!(has_math_span("$$ then $y$"));
    }

    fn arb_code() -> impl Strategy<Value = String> {
        prop_oneof![
            "[0-9]{2}-XX",
            "[0-9]{2}[A-Z]xx",
            "[0-9]{2}[A-Z][0-9]{2}",
            "[0-9]{2}-[0-9]{2}",
        ]
    }

    fn arb_targets() -> impl Strategy<Value = Vec<ClassCode>> {
        prop::collection::vec(arb_code().prop_map(|c| ClassCode::parse(&c).unwrap()), 1..4)
    }

    fn arb_xref() -> impl Strategy<Value = CrossRef> {
        prop_oneof![
            arb_targets().prop_map(CrossRef::SeeAlso),
            arb_targets().prop_map(CrossRef::SeeMainly),
            ("[a-z]{1,8}( [a-z]{1,8}){0,3}", arb_targets())
                .prop_map(|(scope, targets)| CrossRef::ForSee { scope, targets }),
        ]
    }

    proptest! {
        #[test]
        fn record_round_trip(
            code in arb_code(),
            label in "[A-Za-z][A-Za-z ,()-]{0,30}[a-z]",
            math in proptest::bool::ANY,
            xrefs in prop::collection::vec(arb_xref(), 0..3),
            note in proptest::option::of("[A-Za-z][A-Za-z0-9 ]{0,20}[a-z]"),
        ) {
            let label = if math { format!("{label} $x_{{n}}$") } else { label };
            let record = SourceRecord {
                code: ClassCode::parse(&code).unwrap(),
                has_math_markup: has_math_span(&label),
                label,
                crossrefs: xrefs,
                note,
            };
            let line = record.to_source_line();
            let (back, problems) = parse_line(&line).unwrap();
            prop_assert!(problems.is_empty());
            prop_assert_eq!(back, record);
        }

        #[test]
        fn extraction_only_removes_clauses(
            before in "[A-Za-z]{1,10}( [A-Za-z]{1,10}){0,2}",
            after in "( [A-Za-z]{1,10}){0,2}",
            xref in arb_xref(),
        ) {
            let input = format!("{before} {xref}{after}");
            let ex = extract_crossrefs(&input);
            prop_assert_eq!(ex.crossrefs, vec![xref]);
            prop_assert_eq!(ex.label, format!("{before}{after}"));
        }
    }
}
