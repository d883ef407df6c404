use crate::rdf::{is_language_tag, vocab, Iri, PrefixMap, Term};
use crate::source::ClassCode;

use super::BuildError;

/// Where the scheme's IRIs live.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeConfig {
    base: String,
    scheme: String,
    ext_vocab: String,
    default_language: String,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig::new(vocab::MSC_BASE).expect("default base is valid")
    }
}

impl SchemeConfig {
    /// Config with the scheme IRI equal to `base` and the extension
    /// vocabulary at `{base}vocab#`.
    pub fn new(base: &str) -> Result<Self, BuildError> {
        if !base.ends_with('/') || Iri::new(base).is_err() {
            return Err(BuildError::InvalidBase(base.to_owned()));
        }
        Ok(SchemeConfig {
            base: base.to_owned(),
            scheme: base.to_owned(),
            ext_vocab: format!("{base}vocab#"),
            default_language: "en".to_owned(),
        })
    }

    pub fn with_scheme(mut self, scheme: &str) -> Result<Self, BuildError> {
        Iri::new(scheme).map_err(|_| BuildError::InvalidBase(scheme.to_owned()))?;
        self.scheme = scheme.to_owned();
        Ok(self)
    }

    pub fn with_ext_vocab(mut self, ns: &str) -> Result<Self, BuildError> {
        Iri::new(ns).map_err(|_| BuildError::InvalidBase(ns.to_owned()))?;
        self.ext_vocab = ns.to_owned();
        Ok(self)
    }

    pub fn with_default_language(mut self, tag: &str) -> Result<Self, BuildError> {
        if !is_language_tag(tag) {
            return Err(BuildError::InvalidLanguage(tag.to_owned()));
        }
        self.default_language = tag.to_ascii_lowercase();
        Ok(self)
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn scheme_iri(&self) -> Iri {
        Iri::new(&self.scheme).expect("validated at construction")
    }

    pub fn default_language(&self) -> &str {
        &self.default_language
    }

    pub fn ext(&self, local: &str) -> Iri {
        Iri::new(format!("{}{local}", self.ext_vocab)).expect("validated at construction")
    }

    pub fn ext_term(&self, local: &str) -> Term {
        Term::Iri(self.ext(local))
    }

    /// Base of an earlier scheme version, as a sibling path of the base:
    /// `…/MSC/2010/` gives `…/MSC/2000/` for `"2000"`.
    pub fn old_scheme_base(&self, version: &str) -> String {
        let trimmed = self.base.trim_end_matches('/');
        match trimmed.rsplit_once('/') {
            Some((parent, _)) => format!("{parent}/{version}/"),
            None => format!("{trimmed}/{version}/"),
        }
    }

    pub fn collection_iri(&self, id: &str) -> Result<Iri, BuildError> {
        let safe = !id.is_empty()
            && id
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_'));
        if !safe {
            return Err(BuildError::InvalidCollectionId(id.to_owned()));
        }
        Ok(Iri::new(format!("{}collection/{id}", self.base)).expect("base validated"))
    }

    pub fn prefixes(&self) -> PrefixMap {
        let mut map = PrefixMap::standard(&self.base);
        map.insert("ext", self.ext_vocab.clone());
        map
    }
}

/// `base + code`, verbatim.
pub fn mint_iri(config: &SchemeConfig, code: &str) -> Result<Iri, BuildError> {
    let code = ClassCode::parse(code)?;
    Ok(Iri::new(format!("{}{}", config.base, code)).expect("base validated"))
}
