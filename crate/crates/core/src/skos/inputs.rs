//! Tab-separated auxiliary inputs: translations, version mappings,
//! collections and external mappings. `#` starts a comment line.

use crate::rdf::{Iri, PrefixMap};
use crate::source::ClassCode;
use crate::Diagnostic;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelRow {
    pub code: String,
    pub lang: String,
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchRelation {
    Exact,
    Close,
    Narrow,
    Broad,
}

impl MatchRelation {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "exact" => Some(MatchRelation::Exact),
            "close" => Some(MatchRelation::Close),
            "narrow" => Some(MatchRelation::Narrow),
            "broad" => Some(MatchRelation::Broad),
            _ => None,
        }
    }

    pub fn property(self) -> &'static str {
        use crate::rdf::vocab::skos;
        match self {
            MatchRelation::Exact => skos::EXACT_MATCH,
            MatchRelation::Close => skos::CLOSE_MATCH,
            MatchRelation::Narrow => skos::NARROW_MATCH,
            MatchRelation::Broad => skos::BROAD_MATCH,
        }
    }
}

/// `new_code relation old_code`, the old code living in an earlier scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VersionMapping {
    pub old_code: ClassCode,
    pub relation: MatchRelation,
    pub new_code: ClassCode,
    pub old_version: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollectionSpec {
    pub id: String,
    /// `(lang, label)`
    pub labels: Vec<(String, String)>,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalMapping {
    pub code: String,
    pub property: Iri,
    pub target: Iri,
}

/// Everything besides the master source that goes into the graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Auxiliary {
    pub translations: Vec<LabelRow>,
    pub version_mappings: Vec<VersionMapping>,
    pub collections: Vec<CollectionSpec>,
    pub external: Vec<ExternalMapping>,
}

fn rows<'a>(text: &'a str) -> impl Iterator<Item = (usize, Vec<&'a str>)> + 'a {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split('\t').map(str::trim).collect()))
        }
    })
}

fn arity(name: &str, line: usize, fields: &[&str], want: usize, diags: &mut Vec<Diagnostic>) -> bool {
    if fields.len() != want || fields.iter().any(|f| f.is_empty()) {
        diags.push(Diagnostic::new(
            name,
            Some(line),
            format!("expected {want} non-empty tab-separated fields, found {}", fields.len()),
        ));
        return false;
    }
    true
}

/// `code ⟶ lang ⟶ label`
pub fn parse_translations(name: &str, text: &str) -> (Vec<LabelRow>, Vec<Diagnostic>) {
    let mut out = Vec::new();
    let mut diags = Vec::new();
    for (line, f) in rows(text) {
        if arity(name, line, &f, 3, &mut diags) {
            out.push(LabelRow {
                code: f[0].to_owned(),
                lang: f[1].to_owned(),
                text: f[2].to_owned(),
            });
        }
    }
    (out, diags)
}

/// `old-code ⟶ relation ⟶ new-code ⟶ version`
pub fn parse_version_mappings(name: &str, text: &str) -> (Vec<VersionMapping>, Vec<Diagnostic>) {
    let mut out = Vec::new();
    let mut diags = Vec::new();
    for (line, f) in rows(text) {
        if !arity(name, line, &f, 4, &mut diags) {
            continue;
        }
        let parsed = (|| {
            let old_code = ClassCode::parse(f[0]).map_err(|e| e.to_string())?;
            let relation =
                MatchRelation::parse(f[1]).ok_or_else(|| format!("unknown relation {:?}", f[1]))?;
            let new_code = ClassCode::parse(f[2]).map_err(|e| e.to_string())?;
            if !matches!(f[3], "2000" | "1991") {
                return Err(format!("unknown scheme version {:?}", f[3]));
            }
            Ok(VersionMapping {
                old_code,
                relation,
                new_code,
                old_version: f[3].to_owned(),
            })
        })();
        match parsed {
            Ok(m) => out.push(m),
            Err(msg) => diags.push(Diagnostic::new(name, Some(line), msg)),
        }
    }
    (out, diags)
}

/// `collection-id ⟶ lang ⟶ label ⟶ member-code`, one row per member.
/// Rows sharing an id are merged in first-seen order.
pub fn parse_collections(name: &str, text: &str) -> (Vec<CollectionSpec>, Vec<Diagnostic>) {
    let mut out: Vec<CollectionSpec> = Vec::new();
    let mut diags = Vec::new();
    for (line, f) in rows(text) {
        if !arity(name, line, &f, 4, &mut diags) {
            continue;
        }
        let idx = match out.iter().position(|c| c.id == f[0]) {
            Some(i) => i,
            None => {
                out.push(CollectionSpec {
                    id: f[0].to_owned(),
                    labels: Vec::new(),
                    members: Vec::new(),
                });
                out.len() - 1
            }
        };
        let spec = &mut out[idx];
        let label = (f[1].to_owned(), f[2].to_owned());
        if !spec.labels.contains(&label) {
            spec.labels.push(label);
        }
        if !spec.members.iter().any(|m| m == f[3]) {
            spec.members.push(f[3].to_owned());
        }
    }
    (out, diags)
}

/// `code ⟶ property-curie ⟶ target-iri`; the target may be bare or in `<…>`.
pub fn parse_external(name: &str, text: &str, prefixes: &PrefixMap) -> (Vec<ExternalMapping>, Vec<Diagnostic>) {
    let mut out = Vec::new();
    let mut diags = Vec::new();
    for (line, f) in rows(text) {
        if !arity(name, line, &f, 3, &mut diags) {
            continue;
        }
        let property = match f[1].strip_prefix('<').and_then(|s| s.strip_suffix('>')) {
            Some(full) => Iri::new(full),
            None => prefixes.expand_curie(f[1]),
        };
        let target = Iri::new(f[2].trim_start_matches('<').trim_end_matches('>'));
        match (property, target) {
            (Ok(property), Ok(target)) => out.push(ExternalMapping {
                code: f[0].to_owned(),
                property,
                target,
            }),
            (Err(e), _) | (_, Err(e)) => diags.push(Diagnostic::new(name, Some(line), e.to_string())),
        }
    }
    (out, diags)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translations_skip_bad_rows() {
        let (rows, diags) = parse_translations("labels.tsv", "# c\n53A45\tit\tAnalisi vettoriale\n53A45\tru\n");
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].lang, "it");
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].line, Some(3));
    }

    #[test]
    fn version_rows() {
        let (maps, diags) = parse_version_mappings(
            "v",
            "53A45\texact\t53A45\t2000\n53A45\tsideways\t53A45\t2000\n53A45\texact\t53A45\t1999\n",
        );
        assert_eq!(maps.len(), 1);
        assert_eq!(maps[0].relation, MatchRelation::Exact);
        assert_eq!(diags.len(), 2);
    }

    #[test]
    fn collections_merge_rows() {
        let (cols, diags) = parse_collections(
            "c",
            "historical\ten\tAll historical topics\t01A05\nhistorical\ten\tAll historical topics\t53A45\n",
        );
        assert!(diags.is_empty());
        assert_eq!(cols.len(), 1);
        assert_eq!(cols[0].members, ["01A05", "53A45"]);
        assert_eq!(cols[0].labels.len(), 1);
    }

    #[test]
    fn external_curie_and_iri() {
        let prefixes = PrefixMap::standard(crate::rdf::vocab::MSC_BASE);
        let (ext, diags) = parse_external(
            "e",
            "53-XX\tskos:closeMatch\thttp://dewey.info/class/516.36/\n53-XX\tfoo:bar\thttp://x/\n",
            &prefixes,
        );
        assert_eq!(ext.len(), 1);
        assert_eq!(ext[0].property.as_str(), crate::rdf::vocab::skos::CLOSE_MATCH);
        assert_eq!(diags.len(), 1);
        assert!(diags[0].message.contains("foo"));
    }
}
