use std::collections::BTreeMap;
use std::fmt::Write;

use msc_skos::rdf::vocab::{ext, skos};
use msc_skos::serial::concept_code;
use msc_skos::{Graph, Term};

pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

fn iri(s: &str) -> Term {
    Term::iri(s).expect("vocabulary IRIs are valid")
}

/// Context for rendering links between concept pages.
pub struct Site<'a> {
    pub graph: &'a Graph,
    pub prefix: &'a str,
    /// Codes that have a page.
    pub is_page: &'a dyn Fn(&str) -> bool,
}

impl Site<'_> {
    fn english_label(&self, concept: &Term) -> Option<String> {
        let mut labels: Vec<(String, String)> = self
            .graph
            .objects(concept, &iri(skos::PREF_LABEL))
            .filter_map(Term::as_literal)
            .map(|l| (l.language().unwrap_or("").to_owned(), l.lexical().to_owned()))
            .collect();
        labels.sort();
        labels
            .iter()
            .find(|(lang, _)| lang == "en")
            .or(labels.first())
            .map(|(_, text)| text.clone())
    }

    fn link(&self, target: &Term) -> String {
        match target {
            Term::Iri(i) => {
                let code = concept_code(i.as_str());
                if (self.is_page)(code) {
                    let label = self.english_label(target).unwrap_or_default();
                    format!(
                        "<a href=\"{}{}.html\">{}</a> {}",
                        escape(self.prefix),
                        escape(code),
                        escape(code),
                        escape(&label)
                    )
                } else {
                    format!("<a href=\"{0}\">{0}</a>", escape(i.as_str()))
                }
            }
            other => escape(&other.to_string()),
        }
    }

    fn list(&self, out: &mut String, title: &str, items: Vec<String>) {
        if items.is_empty() {
            return;
        }
        let _ = writeln!(out, "<h2>{title}</h2>\n<ul>");
        for item in items {
            let _ = writeln!(out, "  <li>{item}</li>");
        }
        out.push_str("</ul>\n");
    }

    fn linked(&self, concept: &Term, property: &str) -> Vec<String> {
        let mut targets: Vec<&Term> = self.graph.objects(concept, &iri(property)).collect();
        targets.sort_by_cached_key(|t| t.sort_key());
        targets.into_iter().map(|t| self.link(t)).collect()
    }

    /// Page for one concept; `slice` holds its description.
    pub fn concept_page(&self, code: &str, concept: &Term, slice: &Graph) -> String {
        let title = self.english_label(concept).unwrap_or_default();
        let mut out = String::new();
        let _ = writeln!(
            out,
            "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>{} {}</title>",
            escape(code),
            escape(&title)
        );
        for (ext, mt) in [("rdf", "application/rdf+xml"), ("ttl", "text/turtle"), ("nt", "application/n-triples")] {
            let _ = writeln!(
                out,
                "<link rel=\"alternate\" type=\"{mt}\" href=\"{}{}.{ext}\">",
                escape(self.prefix),
                escape(code)
            );
        }
        let _ = writeln!(out, "</head>\n<body>\n<h1>{} {}</h1>", escape(code), escape(&title));
        let _ = writeln!(
            out,
            "<p><a href=\"{0}\">{0}</a></p>",
            escape(concept.as_iri().map(|i| i.as_str()).unwrap_or_default())
        );

        let notations: Vec<String> = slice
            .objects(concept, &iri(skos::NOTATION))
            .filter_map(Term::as_literal)
            .map(|l| escape(l.lexical()))
            .collect();
        self.list(&mut out, "Notation", notations);

        let mut labels: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for p in [skos::PREF_LABEL, skos::ALT_LABEL] {
            for l in slice.objects(concept, &iri(p)).filter_map(Term::as_literal) {
                let kind = if p == skos::PREF_LABEL { "" } else { " (alternative)" };
                labels
                    .entry(l.language().unwrap_or("").to_owned())
                    .or_default()
                    .push(format!("{}{kind}", escape(l.lexical())));
            }
        }
        let label_items = labels
            .into_iter()
            .flat_map(|(lang, texts)| texts.into_iter().map(move |t| format!("<span lang=\"{lang}\">[{lang}] {t}</span>")))
            .collect();
        self.list(&mut out, "Labels", label_items);

        self.list(&mut out, "Broader", self.linked(concept, skos::BROADER));
        self.list(&mut out, "Narrower", self.linked(concept, skos::NARROWER));
        self.list(&mut out, "Related", self.linked(concept, skos::RELATED));

        let mut scoped = Vec::new();
        for node in slice.iter().filter(|t| t.subject() == concept).map(|t| t.object()).filter(|o| o.is_blank()) {
            let scope: Vec<String> = slice
                .iter()
                .filter(|t| t.subject() == node)
                .filter_map(|t| {
                    let p = t.predicate().as_iri()?.as_str();
                    let lit = t.object().as_literal()?;
                    p.ends_with(ext::SCOPE).then(|| escape(lit.lexical()))
                })
                .collect();
            let targets: Vec<String> = slice
                .iter()
                .filter(|t| t.subject() == node && t.object().as_iri().is_some())
                .filter(|t| t.predicate().as_iri().is_some_and(|p| p.as_str().ends_with(ext::TARGET)))
                .map(|t| self.link(t.object()))
                .collect();
            if !targets.is_empty() {
                scoped.push(format!("for {}, see {}", scope.join(", "), targets.join(", ")));
            }
        }
        scoped.sort();
        self.list(&mut out, "Scoped references", scoped);

        let notes: Vec<String> = slice
            .objects(concept, &iri(skos::NOTE))
            .filter_map(Term::as_literal)
            .map(|l| escape(l.lexical()))
            .collect();
        self.list(&mut out, "Notes", notes);

        out.push_str("</body>\n</html>\n");
        out
    }
}
