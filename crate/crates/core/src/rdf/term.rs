use std::fmt;
use std::sync::Arc;

use super::RdfError;
use crate::rdf::vocab;

/// An absolute IRI, compared as a plain string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Iri(Arc<str>);

impl Iri {
    pub fn new(iri: impl AsRef<str>) -> Result<Self, RdfError> {
        let iri = iri.as_ref();
        if !is_absolute_iri(iri) {
            return Err(RdfError::InvalidIri(iri.to_owned()));
        }
        Ok(Iri(Arc::from(iri)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `scheme ":" rest`, where scheme is `ALPHA *( ALPHA / DIGIT / "+" / "-" / "." )`.
fn is_absolute_iri(s: &str) -> bool {
    let Some((scheme, _)) = s.split_once(':') else {
        return false;
    };
    let mut chars = scheme.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
        && !s.chars().any(|c| c.is_whitespace() || matches!(c, '<' | '>' | '"'))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlankNode(Arc<str>);

impl BlankNode {
    pub fn new(id: impl AsRef<str>) -> Result<Self, RdfError> {
        let id = id.as_ref();
        let valid = !id.is_empty()
            && !id.ends_with('.')
            && id
                .chars()
                .all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
            && !id.starts_with(['-', '.']);
        if !valid {
            return Err(RdfError::InvalidBlankNode(id.to_owned()));
        }
        Ok(BlankNode(Arc::from(id)))
    }

    pub fn id(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LiteralKind {
    Plain,
    /// Stored lowercase.
    Lang(Arc<str>),
    Typed(Iri),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    lexical: Arc<str>,
    kind: LiteralKind,
}

impl Literal {
    pub fn plain(lexical: impl AsRef<str>) -> Self {
        Literal {
            lexical: Arc::from(lexical.as_ref()),
            kind: LiteralKind::Plain,
        }
    }

    pub fn lang(lexical: impl AsRef<str>, tag: &str) -> Result<Self, RdfError> {
        if !is_language_tag(tag) {
            return Err(RdfError::InvalidLanguageTag(tag.to_owned()));
        }
        Ok(Literal {
            lexical: Arc::from(lexical.as_ref()),
            kind: LiteralKind::Lang(Arc::from(tag.to_ascii_lowercase())),
        })
    }

    pub fn typed(lexical: impl AsRef<str>, datatype: Iri) -> Self {
        Literal {
            lexical: Arc::from(lexical.as_ref()),
            kind: LiteralKind::Typed(datatype),
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn kind(&self) -> &LiteralKind {
        &self.kind
    }

    pub fn language(&self) -> Option<&str> {
        match &self.kind {
            LiteralKind::Lang(tag) => Some(tag),
            _ => None,
        }
    }

    pub fn datatype(&self) -> Option<&Iri> {
        match &self.kind {
            LiteralKind::Typed(dt) => Some(dt),
            _ => None,
        }
    }

    pub fn is_xml_literal(&self) -> bool {
        self.datatype()
            .is_some_and(|dt| dt.as_str() == vocab::rdf::XML_LITERAL)
    }
}

/// `[A-Za-z]{1,8}(-[A-Za-z0-9]{1,8})*`
pub fn is_language_tag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let first_ok = parts
        .next()
        .is_some_and(|p| (1..=8).contains(&p.len()) && p.chars().all(|c| c.is_ascii_alphabetic()));
    first_ok && parts.all(|p| (1..=8).contains(&p.len()) && p.chars().all(|c| c.is_ascii_alphanumeric()))
}

/// An RDF term.
///
/// The derived ordering is only used for internal sets; anything user-facing
/// is ordered by [`Term::sort_key`], the canonical N-Triples form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(Iri),
    Blank(BlankNode),
    Literal(Literal),
}

impl Term {
    pub fn iri(iri: impl AsRef<str>) -> Result<Self, RdfError> {
        Iri::new(iri).map(Term::Iri)
    }

    pub fn blank(id: impl AsRef<str>) -> Result<Self, RdfError> {
        BlankNode::new(id).map(Term::Blank)
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }

    /// The canonical N-Triples rendering, used for deterministic ordering.
    pub fn sort_key(&self) -> String {
        self.to_string()
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<BlankNode> for Term {
    fn from(b: BlankNode) -> Self {
        Term::Blank(b)
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Self {
        Term::Literal(l)
    }
}

/// Formats terms in canonical N-Triples syntax.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => {
                f.write_str("<")?;
                write_escaped_iri(f, iri.as_str())?;
                f.write_str(">")
            }
            Term::Blank(b) => write!(f, "_:{}", b.id()),
            Term::Literal(lit) => {
                f.write_str("\"")?;
                write_escaped_string(f, lit.lexical())?;
                f.write_str("\"")?;
                match lit.kind() {
                    LiteralKind::Plain => Ok(()),
                    LiteralKind::Lang(tag) => write!(f, "@{tag}"),
                    LiteralKind::Typed(dt) => {
                        f.write_str("^^<")?;
                        write_escaped_iri(f, dt.as_str())?;
                        f.write_str(">")
                    }
                }
            }
        }
    }
}

fn write_uchar(f: &mut impl fmt::Write, c: char) -> fmt::Result {
    let cp = c as u32;
    if cp <= 0xFFFF {
        write!(f, "\\u{cp:04X}")
    } else {
        write!(f, "\\U{cp:08X}")
    }
}

pub(crate) fn write_escaped_string(f: &mut impl fmt::Write, s: &str) -> fmt::Result {
    for c in s.chars() {
        match c {
            '\\' => f.write_str("\\\\")?,
            '"' => f.write_str("\\\"")?,
            '\n' => f.write_str("\\n")?,
            '\r' => f.write_str("\\r")?,
            '\t' => f.write_str("\\t")?,
            c if c.is_ascii() && !c.is_ascii_control() => f.write_char(c)?,
            c => write_uchar(f, c)?,
        }
    }
    Ok(())
}

pub(crate) fn write_escaped_iri(f: &mut impl fmt::Write, s: &str) -> fmt::Result {
    for c in s.chars() {
        if c.is_ascii() && !c.is_ascii_control() {
            f.write_char(c)?;
        } else {
            write_uchar(f, c)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iri_requires_scheme() {
        assert!(Iri::new("http://msc2010.org/resources/MSC/2010/53A45").is_ok());
        assert!(Iri::new("urn:x").is_ok());
        assert!(Iri::new("53A45").is_err());
        assert!(Iri::new("").is_err());
        assert!(Iri::new(":x").is_err());
        assert!(Iri::new("1http://x").is_err());
    }

    #[test]
    fn language_tags_are_case_insensitive() {
        let a = Literal::lang("Curves", "EN").unwrap();
        let b = Literal::lang("Curves", "en").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.language(), Some("en"));
        assert_eq!(Literal::lang("x", "en-US").unwrap().language(), Some("en-us"));
        assert!(Literal::lang("x", "toolongtag").is_err());
        assert!(Literal::lang("x", "en_US").is_err());
        assert!(Literal::lang("x", "").is_err());
    }

    #[test]
    fn display_escapes() {
        let t = Term::from(Literal::plain("a \"quoted\"\nline é"));
        assert_eq!(t.to_string(), r#""a \"quoted\"\nline \u00E9""#);
        let t = Term::from(Literal::typed("1", Iri::new(vocab::xsd::INTEGER).unwrap()));
        assert_eq!(
            t.to_string(),
            "\"1\"^^<http://www.w3.org/2001/XMLSchema#integer>"
        );
        assert_eq!(Term::blank("b0").unwrap().to_string(), "_:b0");
        assert_eq!(Term::from(Literal::plain("\u{1F600}")).to_string(), "\"\\U0001F600\"");
    }

    #[test]
    fn blank_node_ids() {
        assert!(BlankNode::new("scope_53-XX_0").is_ok());
        assert!(BlankNode::new("").is_err());
        assert!(BlankNode::new("a b").is_err());
        assert!(BlankNode::new("-a").is_err());
    }
}
