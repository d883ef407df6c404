use msc_skos::serial::Format;

/// What a concept request is answered with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Rdf(Format),
    Html,
}

impl Representation {
    pub const SUPPORTED: [&'static str; 4] =
        ["application/rdf+xml", "text/turtle", "application/n-triples", "text/html"];

    pub fn media_type(self) -> &'static str {
        match self {
            Representation::Rdf(f) => f.media_type(),
            Representation::Html => "text/html",
        }
    }

    pub fn from_extension(ext: &str) -> Option<Self> {
        match ext {
            "html" => Some(Representation::Html),
            other => Format::from_extension(other).map(Representation::Rdf),
        }
    }

    fn from_media_type(mt: &str) -> Option<Self> {
        match mt {
            "application/rdf+xml" => Some(Representation::Rdf(Format::RdfXml)),
            "text/turtle" => Some(Representation::Rdf(Format::Turtle)),
            "application/n-triples" => Some(Representation::Rdf(Format::NTriples)),
            "text/html" | "*/*" | "text/*" => Some(Representation::Html),
            "application/*" => Some(Representation::Rdf(Format::RdfXml)),
            _ => None,
        }
    }
}

/// Picks a representation from an `Accept` header: the supported range
/// with the highest q-value, earliest on ties. Absent or empty headers get
/// HTML. `None` means nothing acceptable.
pub fn negotiate(accept: Option<&str>) -> Option<Representation> {
    let Some(accept) = accept.filter(|a| !a.trim().is_empty()) else {
        return Some(Representation::Html);
    };
    let mut best: Option<(f32, Representation)> = None;
    for range in accept.split(',') {
        let mut parts = range.split(';');
        let media = parts.next().unwrap_or("").trim().to_ascii_lowercase();
        let q = parts
            .filter_map(|p| p.trim().strip_prefix("q=").and_then(|v| v.trim().parse::<f32>().ok()))
            .next()
            .unwrap_or(1.0);
        if q <= 0.0 {
            continue;
        }
        if let Some(rep) = Representation::from_media_type(&media) {
            if best.is_none_or(|(bq, _)| q > bq) {
                best = Some((q, rep));
            }
        }
    }
    best.map(|(_, rep)| rep)
}
