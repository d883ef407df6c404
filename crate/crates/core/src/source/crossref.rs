use std::fmt;

use super::ClassCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CrossRefKind {
    SeeAlso,
    SeeMainly,
    ForSee,
}

/// A cross-reference clause lifted out of a label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrossRef {
    SeeAlso(Vec<ClassCode>),
    SeeMainly(Vec<ClassCode>),
    /// Reference that only holds within `scope`, e.g. "numeric approximations".
    ForSee { scope: String, targets: Vec<ClassCode> },
}

impl CrossRef {
    pub fn kind(&self) -> CrossRefKind {
        match self {
            CrossRef::SeeAlso(_) => CrossRefKind::SeeAlso,
            CrossRef::SeeMainly(_) => CrossRefKind::SeeMainly,
            CrossRef::ForSee { .. } => CrossRefKind::ForSee,
        }
    }

    pub fn targets(&self) -> &[ClassCode] {
        match self {
            CrossRef::SeeAlso(t) | CrossRef::SeeMainly(t) => t,
            CrossRef::ForSee { targets, .. } => targets,
        }
    }

    pub fn scope(&self) -> Option<&str> {
        match self {
            CrossRef::ForSee { scope, .. } => Some(scope),
            _ => None,
        }
    }
}

/// Renders the clause in source syntax.
impl fmt::Display for CrossRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |targets: &[ClassCode]| {
            targets
                .iter()
                .map(ClassCode::as_str)
                .collect::<Vec<_>>()
                .join(", ")
        };
        match self {
            CrossRef::SeeAlso(t) => write!(f, "[See also {}]", list(t)),
            CrossRef::SeeMainly(t) => write!(f, "[See mainly {}]", list(t)),
            CrossRef::ForSee { scope, targets } => write!(f, "{{For {scope}, see {}}}", list(targets)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Extracted {
    pub label: String,
    pub crossrefs: Vec<CrossRef>,
    /// Clauses that looked like cross-references but could not be read.
    /// They are left in the label verbatim.
    pub problems: Vec<String>,
}

const OPENERS: [(&str, char); 3] = [("[See also ", ']'), ("[See mainly ", ']'), ("{For ", '}')];

/// Removes `[See also …]`, `[See mainly …]` and `{For …, see …}` clauses
/// from a description, returning the cleaned label and the references in
/// clause order.
pub fn extract_crossrefs(description: &str) -> Extracted {
    let mut out = Extracted::default();
    let mut label = String::with_capacity(description.len());
    let mut rest = description;

    loop {
        let next = OPENERS
            .iter()
            .filter_map(|(open, close)| rest.find(open).map(|at| (at, *open, *close)))
            .min_by_key(|(at, _, _)| *at);
        let Some((at, open, close)) = next else {
            label.push_str(rest);
            break;
        };
        let body_start = at + open.len();
        let Some(body_len) = rest[body_start..].find(close) else {
            out.problems.push(format!("unterminated clause {:?}", &rest[at..]));
            label.push_str(rest);
            break;
        };
        let clause = &rest[at..body_start + body_len + close.len_utf8()];
        let body = &rest[body_start..body_start + body_len];
        let parsed = match open {
            "[See also " => parse_code_list(body).map(CrossRef::SeeAlso),
            "[See mainly " => parse_code_list(body).map(CrossRef::SeeMainly),
            _ => parse_for_see(body),
        };
        label.push_str(&rest[..at]);
        rest = &rest[at + clause.len()..];
        match parsed {
            Ok(xref) => {
                out.crossrefs.push(xref);
                // Collapse the doubled space left where the clause was cut.
                if label.ends_with(' ') && rest.starts_with(' ') {
                    rest = &rest[1..];
                }
            }
            Err(why) => {
                out.problems.push(format!("{why} in clause {clause:?}"));
                label.push_str(clause);
            }
        }
    }

    out.label = label.trim().to_owned();
    out
}

fn parse_for_see(body: &str) -> Result<CrossRef, String> {
    let (scope, list) = body
        .rsplit_once(", see ")
        .ok_or_else(|| "missing \", see\"".to_owned())?;
    let scope = scope.trim();
    if scope.is_empty() {
        return Err("empty scope".to_owned());
    }
    Ok(CrossRef::ForSee {
        scope: scope.to_owned(),
        targets: parse_code_list(list)?,
    })
}

/// Codes separated by `, ` or ` and `. Every item must be a valid code.
fn parse_code_list(list: &str) -> Result<Vec<ClassCode>, String> {
    let normalized = list.replace(" and ", ", ");
    let mut codes = Vec::new();
    for item in normalized.split(',') {
        let item = item.trim();
        match ClassCode::parse(item) {
            Ok(code) => codes.push(code),
            Err(_) => return Err(format!("invalid target code {item:?}")),
        }
    }
    Ok(codes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn codes(list: &[&str]) -> Vec<ClassCode> {
        list.iter().map(|c| ClassCode::parse(c).unwrap()).collect()
    }

    #[test]
    fn see_also() {
        let ex = extract_crossrefs("Vector and tensor analysis [See also 58A10]");
        assert_eq!(ex.label, "Vector and tensor analysis");
        assert_eq!(ex.crossrefs, vec![CrossRef::SeeAlso(codes(&["58A10"]))]);
        assert!(ex.problems.is_empty());
    }

    #[test]
    fn scoped_for_see() {
        let ex = extract_crossrefs("Curves {For numeric approximations, see 65D17}");
        assert_eq!(ex.label, "Curves");
        assert_eq!(
            ex.crossrefs,
            vec![CrossRef::ForSee {
                scope: "numeric approximations".into(),
                targets: codes(&["65D17"]),
            }]
        );
        assert_eq!(ex.crossrefs[0].scope(), Some("numeric approximations"));
    }

    #[test]
    fn plain_label_untouched() {
        let ex = extract_crossrefs("Plain label with no clause");
        assert_eq!(ex.label, "Plain label with no clause");
        assert!(ex.crossrefs.is_empty());
        assert!(ex.problems.is_empty());
    }

    #[test]
    fn mid_label_clause_and_lists() {
        let ex = extract_crossrefs(
            "Surfaces [See mainly 53A05, 53A07 and 53C42] in space {For applications in physics, see 83C05 and 83C10}",
        );
        assert_eq!(ex.label, "Surfaces in space");
        assert_eq!(ex.crossrefs.len(), 2);
        assert_eq!(ex.crossrefs[0].kind(), CrossRefKind::SeeMainly);
        assert_eq!(ex.crossrefs[0].targets(), codes(&["53A05", "53A07", "53C42"]));
        assert_eq!(ex.crossrefs[1].scope(), Some("applications in physics"));
        assert_eq!(ex.crossrefs[1].targets(), codes(&["83C05", "83C10"]));
    }

    #[test]
    fn invalid_clause_kept_verbatim() {
        let ex = extract_crossrefs("Foo [See also nothing useful] bar");
        assert_eq!(ex.label, "Foo [See also nothing useful] bar");
        assert!(ex.crossrefs.is_empty());
        assert_eq!(ex.problems.len(), 1);
        assert!(ex.problems[0].contains("nothing useful"));
    }

    #[test]
    fn and_inside_scope_is_not_a_separator() {
        let ex = extract_crossrefs("X {For sums and products, see 11A25}");
        assert_eq!(ex.crossrefs[0].scope(), Some("sums and products"));
    }

    #[test]
    fn unterminated_clause_reported() {
        let ex = extract_crossrefs("X [See also 53A45");
        assert_eq!(ex.label, "X [See also 53A45");
        assert_eq!(ex.problems.len(), 1);
    }

    #[test]
    fn display_matches_source_syntax() {
        let x = CrossRef::ForSee {
            scope: "numeric approximations".into(),
            targets: codes(&["65D17", "65D18"]),
        };
        assert_eq!(x.to_string(), "{For numeric approximations, see 65D17, 65D18}");
        assert_eq!(CrossRef::SeeAlso(codes(&["58A10"])).to_string(), "[See also 58A10]");
    }
}
