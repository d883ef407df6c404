use crate::entail::{PatternTerm, TriplePattern};
use crate::rdf::{vocab, Iri, Literal, PrefixMap, Term};

use super::{Filter, Projection, Query, QueryError, WhereElement};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Iri(String),
    PName(String, String),
    Var(String),
    Str(String),
    LangTag(String),
    Caret2,
    Word(String),
    Punct(char),
}


fn hex_char(hex: &str) -> Option<char> {
    if !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
        return None;
    }
    u32::from_str_radix(hex, 16).ok().and_then(char::from_u32)
}

/// Decodes `\uXXXX` and `\UXXXXXXXX` inside an IRI reference.
fn unescape_iri(body: &str) -> Option<String> {
    let mut out = String::with_capacity(body.len());
    let mut rest = body;
    while let Some(i) = rest.find('\\') {
        out.push_str(&rest[..i]);
        let len = match rest[i + 1..].chars().next()? {
            'u' => 4,
            'U' => 8,
            _ => return None,
        };
        out.push(hex_char(rest.get(i + 2..i + 2 + len)?)?);
        rest = &rest[i + 2 + len..];
    }
    out.push_str(rest);
    Some(out)
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn err(&self, at: usize, message: impl Into<String>) -> QueryError {
        syntax_error(self.src, at, message)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek_char() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else if c == '#' {
                match self.src[self.pos..].find('\n') {
                    Some(nl) => self.pos += nl + 1,
                    None => self.pos = self.src.len(),
                }
            } else {
                break;
            }
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek_char() {
            if !f(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn tokens(mut self) -> Result<Vec<(usize, Tok)>, QueryError> {
        let mut out = Vec::new();
        let mut after_string = false;
        loop {
            self.skip_trivia();
            let start = self.pos;
            let Some(c) = self.peek_char() else { break };
            let tok = match c {
                '<' => {
                    self.pos += 1;
                    let body = self.take_while(|c| c != '>' && !c.is_whitespace());
                    if self.peek_char() != Some('>') {
                        return Err(self.err(start, "unterminated IRI"));
                    }
                    self.pos += 1;
                    Tok::Iri(unescape_iri(body).ok_or_else(|| self.err(start, "invalid escape in IRI"))?)
                }
                '?' | '$' => {
                    self.pos += 1;
                    let name = self.take_while(|c| c.is_alphanumeric() || c == '_');
                    if name.is_empty() {
                        return Err(self.err(start, "empty variable name"));
                    }
                    Tok::Var(name.to_owned())
                }
                '"' | '\'' => {
                    self.pos += 1;
                    let mut s = String::new();
                    loop {
                        match self.peek_char() {
                            None | Some('\n') => return Err(self.err(start, "unterminated string")),
                            Some(q) if q == c => {
                                self.pos += 1;
                                break;
                            }
                            Some('\\') => {
                                self.pos += 1;
                                let e = self.peek_char().ok_or_else(|| self.err(start, "unterminated string"))?;
                                self.pos += e.len_utf8();
                                let decoded = match e {
                                    'n' => '\n',
                                    't' => '\t',
                                    'r' => '\r',
                                    'b' => '\u{8}',
                                    'f' => '\u{c}',
                                    'u' | 'U' => {
                                        let len = if e == 'u' { 4 } else { 8 };
                                        let hex = self.src.get(self.pos..self.pos + len).unwrap_or("");
                                        self.pos += len;
                                        hex_char(hex).ok_or_else(|| self.err(start, "invalid \\u escape"))?
                                    }
                                    other => other,
                                };
                                s.push(decoded);
                            }
                            Some(other) => {
                                self.pos += other.len_utf8();
                                s.push(other);
                            }
                        }
                    }
                    Tok::Str(s)
                }
                '@' if after_string => {
                    self.pos += 1;
                    Tok::LangTag(self.take_while(|c| c.is_ascii_alphanumeric() || c == '-').to_owned())
                }
                '^' if self.src[self.pos..].starts_with("^^") => {
                    self.pos += 2;
                    Tok::Caret2
                }
                '{' | '}' | '(' | ')' | '.' | ';' | ',' | '*' => {
                    self.pos += 1;
                    Tok::Punct(c)
                }
                c if c.is_alphabetic() || c == '_' || c == ':' => {
                    let word = self.take_while(|c| c.is_alphanumeric() || c == '_' || c == '-');
                    if self.peek_char() == Some(':') {
                        self.pos += 1;
                        let mut local = self.take_while(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'));
                        // a trailing '.' ends the statement
                        while let Some(stripped) = local.strip_suffix('.') {
                            local = stripped;
                            self.pos -= 1;
                        }
                        Tok::PName(word.to_owned(), local.to_owned())
                    } else {
                        Tok::Word(word.to_owned())
                    }
                }
                other => return Err(self.err(start, format!("unexpected character {other:?}"))),
            };
            after_string = matches!(tok, Tok::Str(_));
            out.push((start, tok));
        }
        Ok(out)
    }
}

fn syntax_error(src: &str, at: usize, message: impl Into<String>) -> QueryError {
    let before = &src[..at.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    QueryError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok)>,
    at: usize,
    prefixes: PrefixMap,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.at).map_or(self.src.len(), |(o, _)| *o)
    }

    fn err(&self, message: impl Into<String>) -> QueryError {
        syntax_error(self.src, self.offset(), message)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn is_word(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(w)) if w.eq_ignore_ascii_case(kw))
    }

    fn eat_word(&mut self, kw: &str) -> bool {
        let hit = self.is_word(kw);
        if hit {
            self.at += 1;
        }
        hit
    }

    fn expect_word(&mut self, kw: &str) -> Result<(), QueryError> {
        if self.eat_word(kw) {
            Ok(())
        } else {
            Err(self.err(format!("expected {kw}")))
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        let hit = self.peek() == Some(&Tok::Punct(c));
        if hit {
            self.at += 1;
        }
        hit
    }

    fn expect_punct(&mut self, c: char) -> Result<(), QueryError> {
        if self.eat_punct(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn var(&mut self) -> Result<String, QueryError> {
        match self.peek() {
            Some(Tok::Var(v)) => {
                let v = v.clone();
                self.at += 1;
                Ok(v)
            }
            _ => Err(self.err("expected a variable")),
        }
    }

    fn iri_from(&self, tok: &Tok) -> Result<Option<Iri>, QueryError> {
        match tok {
            Tok::Iri(s) => Iri::new(s).map(Some).map_err(|e| self.err(e.to_string())),
            Tok::PName(p, local) => {
                let ns = self
                    .prefixes
                    .get(p)
                    .ok_or_else(|| QueryError::UnknownPrefix(p.clone()))?;
                Iri::new(format!("{ns}{local}"))
                    .map(Some)
                    .map_err(|e| self.err(e.to_string()))
            }
            _ => Ok(None),
        }
    }

    fn term(&mut self, verb: bool) -> Result<PatternTerm, QueryError> {
        let tok = self.peek().cloned().ok_or_else(|| self.err("unexpected end of query"))?;
        // blank nodes in patterns are variables that cannot be projected
        if let Tok::PName(p, label) = &tok {
            if p == "_" && !verb && !label.is_empty() {
                self.at += 1;
                return Ok(PatternTerm::Var(format!("_:{label}")));
            }
        }
        if let Some(iri) = self.iri_from(&tok)? {
            self.at += 1;
            return Ok(PatternTerm::Const(Term::Iri(iri)));
        }
        match tok {
            Tok::Var(v) => {
                self.at += 1;
                Ok(PatternTerm::Var(v))
            }
            Tok::Word(w) if verb && w == "a" => {
                self.at += 1;
                Ok(PatternTerm::Const(Term::iri(vocab::rdf::TYPE).unwrap()))
            }
            Tok::Str(s) if !verb => {
                self.at += 1;
                let lit = match self.peek().cloned() {
                    Some(Tok::LangTag(tag)) => {
                        self.at += 1;
                        Literal::lang(s, &tag).map_err(|e| self.err(e.to_string()))?
                    }
                    Some(Tok::Caret2) => {
                        self.at += 1;
                        let dt_tok = self.next().ok_or_else(|| self.err("expected datatype"))?;
                        let dt = self.iri_from(&dt_tok)?.ok_or_else(|| self.err("expected datatype IRI"))?;
                        Literal::typed(s, dt)
                    }
                    _ => Literal::plain(s),
                };
                Ok(PatternTerm::Const(lit.into()))
            }
            _ => Err(self.err(if verb { "expected a predicate" } else { "expected a term" })),
        }
    }

    /// `s p o (, o)* (; p o (, o)*)*`
    fn triples_same_subject(&mut self, out: &mut Vec<TriplePattern>) -> Result<(), QueryError> {
        let subject = self.term(false)?;
        loop {
            let predicate = self.term(true)?;
            loop {
                let object = self.term(false)?;
                out.push(TriplePattern::new(subject.clone(), predicate.clone(), object));
                if !self.eat_punct(',') {
                    break;
                }
            }
            if !self.eat_punct(';') {
                break;
            }
            // a dangling ';' before '.' or '}'
            if matches!(self.peek(), Some(Tok::Punct('.' | '}'))) {
                break;
            }
        }
        Ok(())
    }

    fn starts_triple(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Var(_) | Tok::Iri(_) | Tok::PName(..) | Tok::Str(_))
        )
    }

    fn triples_block(&mut self) -> Result<Vec<TriplePattern>, QueryError> {
        let mut out = Vec::new();
        while self.starts_triple() {
            self.triples_same_subject(&mut out)?;
            if !self.eat_punct('.') {
                break;
            }
        }
        Ok(out)
    }

    fn filter(&mut self) -> Result<Filter, QueryError> {
        if self.eat_punct('(') {
            let f = self.filter()?;
            self.expect_punct(')')?;
            return Ok(f);
        }
        self.expect_word("langMatches")?;
        self.expect_punct('(')?;
        self.expect_word("lang")?;
        self.expect_punct('(')?;
        let var = self.var()?;
        self.expect_punct(')')?;
        self.expect_punct(',')?;
        let range = match self.next() {
            Some(Tok::Str(s)) => s,
            _ => {
                self.at -= 1;
                return Err(self.err("expected a language range string"));
            }
        };
        self.expect_punct(')')?;
        Ok(Filter::LangMatches { var, range })
    }

    fn group(&mut self) -> Result<Vec<WhereElement>, QueryError> {
        let mut elements = Vec::new();
        loop {
            if self.starts_triple() {
                let block = self.triples_block()?;
                match elements.last_mut() {
                    Some(WhereElement::Bgp(prev)) => prev.extend(block),
                    _ => elements.push(WhereElement::Bgp(block)),
                }
            } else if self.eat_word("OPTIONAL") {
                self.expect_punct('{')?;
                let block = self.triples_block()?;
                self.expect_punct('}')?;
                elements.push(WhereElement::Optional(block));
                self.eat_punct('.');
            } else if self.eat_word("FILTER") {
                elements.push(WhereElement::Filter(self.filter()?));
                self.eat_punct('.');
            } else {
                return Ok(elements);
            }
        }
    }

    fn projection(&mut self) -> Result<Vec<Projection>, QueryError> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Var(_)) => out.push(Projection::Var(self.var()?)),
                Some(Tok::Word(w)) if w.eq_ignore_ascii_case("COUNT") => {
                    self.at += 1;
                    self.expect_punct('(')?;
                    let var = self.var()?;
                    self.expect_punct(')')?;
                    out.push(Projection::Count {
                        alias: format!("count_{var}"),
                        var,
                    });
                }
                Some(Tok::Punct('(')) => {
                    self.at += 1;
                    self.expect_word("COUNT")?;
                    self.expect_punct('(')?;
                    let var = self.var()?;
                    self.expect_punct(')')?;
                    self.expect_word("AS")?;
                    let alias = self.var()?;
                    self.expect_punct(')')?;
                    out.push(Projection::Count { var, alias });
                }
                _ => break,
            }
        }
        if out.is_empty() {
            return Err(self.err("expected at least one projected variable"));
        }
        Ok(out)
    }

    fn query(mut self) -> Result<Query, QueryError> {
        while self.eat_word("PREFIX") {
            let (name, local) = match self.next() {
                Some(Tok::PName(p, l)) => (p, l),
                _ => {
                    self.at -= 1;
                    return Err(self.err("expected prefix name"));
                }
            };
            if !local.is_empty() {
                return Err(self.err("prefix declaration must end with ':'"));
            }
            let iri = match self.next() {
                Some(Tok::Iri(i)) => i,
                _ => {
                    self.at -= 1;
                    return Err(self.err("expected namespace IRI"));
                }
            };
            self.prefixes.insert(name, iri);
        }
        self.expect_word("SELECT")?;
        let distinct = self.eat_word("DISTINCT");
        let projection = self.projection()?;
        self.eat_word("WHERE");
        self.expect_punct('{')?;
        let where_clause = self.group()?;
        self.expect_punct('}')?;
        let mut group_by = Vec::new();
        if self.eat_word("GROUP") {
            self.expect_word("BY")?;
            while let Some(Tok::Var(_)) = self.peek() {
                group_by.push(self.var()?);
            }
            if group_by.is_empty() {
                return Err(self.err("expected grouping variables"));
            }
        }
        if self.peek().is_some() {
            return Err(self.err("unexpected trailing input"));
        }
        let q = Query {
            prefixes: self.prefixes,
            distinct,
            projection,
            where_clause,
            group_by,
        };
        q.validate()?;
        Ok(q)
    }
}

pub fn parse_query(text: &str) -> Result<Query, QueryError> {
    let toks = Lexer { src: text, pos: 0 }.tokens()?;
    Parser {
        src: text,
        toks,
        at: 0,
        prefixes: PrefixMap::new(),
    }
    .query()
}
