use std::fmt;

use super::SourceError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Top,
    Middle,
    Leaf,
}

/// A syntactically valid five-character class code.
///
/// The hierarchy is implicit in the numbering: `53A45` sits under `53Axx`,
/// which sits under `53-XX`. Special leaves of the form `53-01` hang directly
/// under their top-level class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassCode {
    text: String,
    level: Level,
}

impl ClassCode {
    pub fn parse(text: &str) -> Result<Self, SourceError> {
        let level = classify(text).ok_or_else(|| SourceError::InvalidCode(text.to_owned()))?;
        Ok(ClassCode {
            text: text.to_owned(),
            level,
        })
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn parent(&self) -> Option<ClassCode> {
        let b = self.text.as_bytes();
        let (text, level) = match self.level {
            Level::Top => return None,
            Level::Middle => (format!("{}-XX", &self.text[..2]), Level::Top),
            Level::Leaf if b[2] == b'-' => (format!("{}-XX", &self.text[..2]), Level::Top),
            Level::Leaf => (format!("{}xx", &self.text[..3]), Level::Middle),
        };
        Some(ClassCode { text, level })
    }
}

impl fmt::Display for ClassCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

fn classify(text: &str) -> Option<Level> {
    let b = text.as_bytes();
    if b.len() != 5 || !b[0].is_ascii_digit() || !b[1].is_ascii_digit() {
        return None;
    }
    match (b[2], b[3], b[4]) {
        (b'-', b'X', b'X') => Some(Level::Top),
        (b'-', d1, d2) if d1.is_ascii_digit() && d2.is_ascii_digit() => Some(Level::Leaf),
        (l, b'x', b'x') if l.is_ascii_uppercase() => Some(Level::Middle),
        (l, d1, d2) if l.is_ascii_uppercase() && d1.is_ascii_digit() && d2.is_ascii_digit() => {
            Some(Level::Leaf)
        }
        _ => None,
    }
}
