use thiserror::Error;

use crate::rdf::{BlankNode, Graph, Iri, Literal, Term, Triple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct NTriplesError {
    pub line: usize,
    pub message: String,
}

/// Canonical N-Triples: one triple per line, ASCII only, lines sorted.
pub fn to_ntriples(graph: &Graph) -> String {
    let mut lines: Vec<String> = graph.iter().map(|t| t.to_string()).collect();
    lines.sort_unstable();
    let mut out = String::with_capacity(lines.iter().map(|l| l.len() + 1).sum());
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out
}

pub fn parse_ntriples(text: &str) -> Result<Graph, NTriplesError> {
    let mut graph = Graph::new();
    for (idx, line) in text.lines().enumerate() {
        let mut cur = Cursor::new(line);
        cur.skip_ws();
        if cur.at_end() || cur.peek() == Some('#') {
            continue;
        }
        let triple = cur.triple().map_err(|message| NTriplesError {
            line: idx + 1,
            message,
        })?;
        graph.insert(triple);
    }
    Ok(graph)
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t' | '\r')) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        match self.bump() {
            Some(got) if got == c => Ok(()),
            Some(got) => Err(format!("expected {c:?} at column {}, found {got:?}", self.pos)),
            None => Err(format!("expected {c:?}, found end of line")),
        }
    }

    fn triple(&mut self) -> Result<Triple, String> {
        let s = self.term()?;
        self.skip_ws();
        let p = self.term()?;
        self.skip_ws();
        let o = self.term()?;
        self.skip_ws();
        self.expect('.')?;
        self.skip_ws();
        if !(self.at_end() || self.peek() == Some('#')) {
            return Err(format!("trailing content {:?}", self.rest()));
        }
        Triple::new(s, p, o).map_err(|e| e.to_string())
    }

    fn term(&mut self) -> Result<Term, String> {
        match self.peek() {
            Some('<') => self.iri().map(Term::Iri),
            Some('_') => {
                self.pos += 1;
                self.expect(':')?;
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_alphanumeric() || matches!(c, '_' | '-' | '.')) {
                    self.bump();
                }
                // a trailing '.' belongs to the statement terminator
                while self.pos > start && self.src[..self.pos].ends_with('.') {
                    self.pos -= 1;
                }
                BlankNode::new(&self.src[start..self.pos])
                    .map(Term::Blank)
                    .map_err(|e| e.to_string())
            }
            Some('"') => self.literal().map(Term::Literal),
            Some(c) => Err(format!("unexpected {c:?} at column {}", self.pos + 1)),
            None => Err("unexpected end of line".into()),
        }
    }

    fn iri(&mut self) -> Result<Iri, String> {
        self.expect('<')?;
        let mut s = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some('\\') => s.push(self.uchar()?),
                Some(c) if c == ' ' || c == '<' || c == '"' => {
                    return Err(format!("illegal {c:?} inside IRI"));
                }
                Some(c) => s.push(c),
                None => return Err("unterminated IRI".into()),
            }
        }
        Iri::new(&s).map_err(|e| e.to_string())
    }

    fn uchar(&mut self) -> Result<char, String> {
        let width = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            other => return Err(format!("bad escape {other:?}")),
        };
        let hex = self
            .rest()
            .get(..width)
            .ok_or_else(|| "truncated \\u escape".to_owned())?;
        let cp = u32::from_str_radix(hex, 16).map_err(|_| format!("bad hex {hex:?}"))?;
        self.pos += width;
        char::from_u32(cp).ok_or_else(|| format!("invalid code point {cp:X}"))
    }

    fn literal(&mut self) -> Result<Literal, String> {
        self.expect('"')?;
        let mut lex = String::new();
        loop {
            match self.bump() {
                Some('"') => break,
                Some('\\') => match self.peek() {
                    Some('u' | 'U') => lex.push(self.uchar()?),
                    Some(c) => {
                        self.bump();
                        lex.push(match c {
                            't' => '\t',
                            'b' => '\u{8}',
                            'n' => '\n',
                            'r' => '\r',
                            'f' => '\u{c}',
                            '"' => '"',
                            '\'' => '\'',
                            '\\' => '\\',
                            other => return Err(format!("bad escape \\{other}")),
                        });
                    }
                    None => return Err("unterminated literal".into()),
                },
                Some(c) => lex.push(c),
                None => return Err("unterminated literal".into()),
            }
        }
        match self.peek() {
            Some('@') => {
                self.bump();
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '-') {
                    self.bump();
                }
                Literal::lang(lex, &self.src[start..self.pos]).map_err(|e| e.to_string())
            }
            Some('^') => {
                self.bump();
                self.expect('^')?;
                Ok(Literal::typed(lex, self.iri()?))
            }
            _ => Ok(Literal::plain(lex)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::vocab::skos;

    #[test]
    fn single_line() {
        let mut g = Graph::new();
        g.add(
            Term::iri("http://msc2010.org/resources/MSC/2010/53A45").unwrap(),
            Term::iri(skos::PREF_LABEL).unwrap(),
            Literal::lang("Vector and tensor analysis", "en").unwrap(),
        )
        .unwrap();
        let nt = to_ntriples(&g);
        assert_eq!(nt.lines().count(), 1);
        assert!(nt.ends_with(" .\n"));
        assert_eq!(
            nt,
            "<http://msc2010.org/resources/MSC/2010/53A45> <http://www.w3.org/2004/02/skos/core#prefLabel> \"Vector and tensor analysis\"@en .\n"
        );
    }

    #[test]
    fn quote_is_escaped() {
        let mut g = Graph::new();
        g.add(
            Term::iri("urn:a").unwrap(),
            Term::iri(skos::NOTE).unwrap(),
            Literal::plain("say \"hi\""),
        )
        .unwrap();
        assert!(to_ntriples(&g).contains(r#""say \"hi\"""#));
        assert_eq!(parse_ntriples(&to_ntriples(&g)).unwrap(), g);
    }

    #[test]
    fn empty_input() {
        assert!(parse_ntriples("").unwrap().is_empty());
        assert!(parse_ntriples("# only a comment\n\n").unwrap().is_empty());
    }

    #[test]
    fn missing_dot_reports_line() {
        let text = "<urn:a> <urn:p> <urn:b> .\n<urn:a> <urn:p> <urn:c>\n";
        let err = parse_ntriples(text).unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn other_errors() {
        for bad in [
            "\"lit\" <urn:p> <urn:o> .",
            "<urn:s> _:b <urn:o> .",
            "<urn:s> <urn:p> \"open .",
            "<urn:s> <urn:p> <urn:o> . junk",
            "<relative> <urn:p> <urn:o> .",
            "<urn:s> <urn:p> \"x\"@ .",
        ] {
            assert!(parse_ntriples(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn reads_escapes_and_blank_nodes() {
        let text = "_:scope_53-XX_0 <urn:p> \"caf\\u00E9\\t\\U0001F600\"^^<urn:dt>.\n";
        let g = parse_ntriples(text).unwrap();
        let t = g.iter().next().unwrap();
        assert_eq!(t.subject(), &Term::blank("scope_53-XX_0").unwrap());
        let lit = t.object().as_literal().unwrap();
        assert_eq!(lit.lexical(), "café\t\u{1F600}");
        assert_eq!(lit.datatype().unwrap().as_str(), "urn:dt");
    }
}
