//! HTTP publication of an expanded dataset: one description per concept
//! with content negotiation, a query endpoint, and whole-dataset dumps.
//!
//! | route | response |
//! |-------|----------|
//! | `GET {prefix}{code}[.rdf\|.ttl\|.nt\|.html]` | concept description |
//! | `GET\|POST /sparql` | query results as JSON |
//! | `GET /dump.{nt,ttl,rdf}` | expanded dataset |
//! | `GET /dump.master.nt` | master dataset |
//! | `GET /health` | `ok` |

mod config;
mod html;
mod negotiate;

pub use config::{ConfigError, ServerConfig};
pub use negotiate::{negotiate, Representation};

use std::collections::{BTreeMap, HashMap, HashSet};
use std::future::Future;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::body::Body;
use axum::extract::{Form, FromRequest, Path as UrlPath, Query, Request, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use msc_skos::query::{evaluate, parse_query};
use msc_skos::serial::{concept_code, parse_ntriples, split_per_concept, Format, NTriplesError};
use msc_skos::skos::SchemeConfig;
use msc_skos::{Graph, Term};
use thiserror::Error;
use tokio::net::TcpListener;

#[derive(Debug, Error)]
pub enum ServerError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        source: NTriplesError,
    },
    #[error("bind {addr}: {source}")]
    Bind { addr: String, source: std::io::Error },
    #[error("server: {0}")]
    Serve(std::io::Error),
}

pub const SPARQL_RESULTS: &str = "application/sparql-results+json";

/// Everything served, fixed at startup.
pub struct Dataset {
    expanded: Graph,
    master: Option<String>,
    slices: BTreeMap<String, (Term, Graph)>,
    dumps: HashMap<Format, String>,
}

impl Dataset {
    /// `master` is served verbatim as N-Triples when given.
    pub fn new(mut expanded: Graph, master: Option<&Graph>) -> Self {
        if expanded.prefixes().is_empty() {
            expanded.set_prefixes(SchemeConfig::default().prefixes());
        }
        let slices = split_per_concept(&expanded)
            .into_iter()
            .map(|(code, slice)| {
                let concept = slice
                    .iter()
                    .map(|t| t.subject())
                    .find(|s| s.as_iri().is_some_and(|i| concept_code(i.as_str()) == code))
                    .expect("slices hold their concept")
                    .clone();
                (code, (concept, slice))
            })
            .collect();
        let dumps = [Format::NTriples, Format::Turtle, Format::RdfXml]
            .into_iter()
            .map(|f| (f, f.serialize(&expanded)))
            .collect();
        Dataset {
            master: master.map(|m| Format::NTriples.serialize(m)),
            expanded,
            slices,
            dumps,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.expanded
    }

    pub fn slice(&self, code: &str) -> Option<&Graph> {
        self.slices.get(code).map(|(_, g)| g)
    }

    pub fn dump(&self, format: Format) -> &str {
        &self.dumps[&format]
    }

    /// Writes `dump.nt`, `dump.ttl`, `dump.rdf` and, if present,
    /// `dump.master.nt` into `dir`.
    pub fn write_dumps(&self, dir: &Path) -> Result<(), ServerError> {
        let io = |path: PathBuf| move |source| ServerError::Io { path, source };
        std::fs::create_dir_all(dir).map_err(io(dir.to_owned()))?;
        for (format, text) in &self.dumps {
            let path = dir.join(format!("dump.{}", format.extension()));
            std::fs::write(&path, text).map_err(io(path.clone()))?;
        }
        if let Some(master) = &self.master {
            let path = dir.join("dump.master.nt");
            std::fs::write(&path, master).map_err(io(path.clone()))?;
        }
        Ok(())
    }
}

fn read_ntriples(path: &Path) -> Result<Graph, ServerError> {
    let text = std::fs::read_to_string(path).map_err(|source| ServerError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_ntriples(&text).map_err(|source| ServerError::Parse {
        path: path.to_owned(),
        source,
    })
}

/// Loads and merges the configured data files.
pub fn load(config: &ServerConfig) -> Result<Dataset, ServerError> {
    let mut graph = Graph::new();
    for path in &config.data {
        let part = read_ntriples(path)?;
        log::info!("{}: {} triples", path.display(), part.len());
        graph.extend(part.iter().cloned());
    }
    let master = config.master.as_deref().map(read_ntriples).transpose()?;
    Ok(Dataset::new(graph, master.as_ref()))
}

struct AppState {
    dataset: Arc<Dataset>,
    prefix: String,
    pages: HashSet<String>,
}

fn typed(status: StatusCode, content_type: &'static str, body: impl Into<Body>) -> Response {
    (status, [(header::CONTENT_TYPE, content_type)], body.into()).into_response()
}

fn text(status: StatusCode, body: impl Into<String>) -> Response {
    typed(status, "text/plain; charset=utf-8", body.into())
}

async fn concept(State(st): State<Arc<AppState>>, UrlPath(file): UrlPath<String>, headers: HeaderMap) -> Response {
    let (code, explicit) = match file.rsplit_once('.') {
        Some((code, ext)) => match Representation::from_extension(ext) {
            Some(rep) => (code, Some(rep)),
            None => return text(StatusCode::NOT_FOUND, "not found\n"),
        },
        None => (file.as_str(), None),
    };
    let Some((term, slice)) = st.dataset.slices.get(code) else {
        return text(StatusCode::NOT_FOUND, format!("unknown class {code}\n"));
    };
    let rep = match explicit {
        Some(rep) => rep,
        None => {
            let accept = headers.get(header::ACCEPT).and_then(|v| v.to_str().ok());
            match negotiate(accept) {
                Some(rep) => rep,
                None => {
                    return text(
                        StatusCode::NOT_ACCEPTABLE,
                        format!("supported types: {}\n", Representation::SUPPORTED.join(", ")),
                    )
                }
            }
        }
    };
    let body = match rep {
        Representation::Rdf(format) => format.serialize(slice),
        Representation::Html => {
            let is_page = |c: &str| st.pages.contains(c);
            let site = html::Site {
                graph: st.dataset.graph(),
                prefix: &st.prefix,
                is_page: &is_page,
            };
            site.concept_page(code, term, slice)
        }
    };
    typed(StatusCode::OK, rep.media_type(), body)
}

fn run_query(st: &AppState, query: Option<&str>) -> Response {
    let Some(query) = query.filter(|q| !q.trim().is_empty()) else {
        return text(StatusCode::BAD_REQUEST, "missing query\n");
    };
    match parse_query(query) {
        Ok(q) => {
            let table = evaluate(st.dataset.graph(), &q);
            typed(StatusCode::OK, SPARQL_RESULTS, table.to_json().to_string())
        }
        Err(e) => text(StatusCode::BAD_REQUEST, format!("{e}\n")),
    }
}

async fn sparql_get(State(st): State<Arc<AppState>>, Query(params): Query<HashMap<String, String>>) -> Response {
    run_query(&st, params.get("query").map(String::as_str))
}

/// Accepts a form-encoded `query` field or a raw query body.
async fn sparql_post(State(st): State<Arc<AppState>>, req: Request) -> Response {
    let is_form = req
        .headers()
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|ct| ct.starts_with("application/x-www-form-urlencoded"));
    if is_form {
        match Form::<HashMap<String, String>>::from_request(req, &()).await {
            Ok(Form(params)) => run_query(&st, params.get("query").map(String::as_str)),
            Err(e) => text(StatusCode::BAD_REQUEST, format!("{e}\n")),
        }
    } else {
        match String::from_request(req, &()).await {
            Ok(body) => run_query(&st, Some(&body)),
            Err(e) => text(StatusCode::BAD_REQUEST, format!("{e}\n")),
        }
    }
}

fn dump_route(format: Format) -> axum::routing::MethodRouter<Arc<AppState>> {
    get(move |State(st): State<Arc<AppState>>| async move {
        typed(StatusCode::OK, format.media_type(), st.dataset.dump(format).to_owned())
    })
}

async fn master_dump(State(st): State<Arc<AppState>>) -> Response {
    match &st.dataset.master {
        Some(m) => typed(StatusCode::OK, Format::NTriples.media_type(), m.clone()),
        None => text(StatusCode::NOT_FOUND, "no master dataset configured\n"),
    }
}

/// The application; `prefix` must start and end with `/`.
pub fn router(dataset: Arc<Dataset>, prefix: &str) -> Router {
    let pages = dataset.slices.keys().cloned().collect();
    let state = Arc::new(AppState {
        dataset,
        prefix: prefix.to_owned(),
        pages,
    });
    Router::new()
        .route(&format!("{prefix}{{file}}"), get(concept))
        .route("/sparql", get(sparql_get).post(sparql_post))
        .route("/dump.nt", dump_route(Format::NTriples))
        .route("/dump.ttl", dump_route(Format::Turtle))
        .route("/dump.rdf", dump_route(Format::RdfXml))
        .route("/dump.master.nt", get(master_dump))
        .route("/health", get(|| async { "ok" }))
        .fallback(|| async { text(StatusCode::NOT_FOUND, "not found\n") })
        .with_state(state)
}

/// Serves on `listener` until `shutdown` resolves, then drains in-flight
/// requests.
pub async fn serve_on(
    listener: TcpListener,
    dataset: Arc<Dataset>,
    prefix: &str,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> Result<(), ServerError> {
    axum::serve(listener, router(dataset, prefix))
        .with_graceful_shutdown(shutdown)
        .await
        .map_err(ServerError::Serve)
}

/// Loads the data, writes dumps if configured, and serves until Ctrl-C.
pub async fn serve(config: &ServerConfig) -> Result<(), ServerError> {
    let dataset = Arc::new(load(config)?);
    if let Some(dir) = &config.dump_dir {
        dataset.write_dumps(dir)?;
        log::info!("dumps written to {}", dir.display());
    }
    let addr = format!("{}:{}", config.bind, config.port);
    let listener = TcpListener::bind(&addr)
        .await
        .map_err(|source| ServerError::Bind { addr: addr.clone(), source })?;
    log::info!("listening on http://{addr}{} ({} concepts)", config.prefix, dataset.slices.len());
    serve_on(listener, dataset, &config.prefix, async {
        let _ = tokio::signal::ctrl_c().await;
        log::info!("shutting down");
    })
    .await
}

pub use tokio::runtime::Runtime;

/// A multi-threaded runtime for [`serve`].
pub fn runtime() -> std::io::Result<Runtime> {
    tokio::runtime::Builder::new_multi_thread().enable_all().build()
}
