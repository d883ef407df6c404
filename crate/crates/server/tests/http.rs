use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use msc_skos::rdf::vocab::skos;
use msc_skos::sample;
use msc_skos::serial::parse_ntriples;
use msc_skos::Graph;
use msc_skos_server::{router, Dataset, SPARQL_RESULTS};
use serde_json::Value;
use tower::ServiceExt;

const PREFIX: &str = "/resources/MSC/2010/";

fn dataset() -> Arc<Dataset> {
    let mut g = sample::expanded();
    g.extend(sample::articles().iter().cloned());
    Arc::new(Dataset::new(g, Some(&sample::master())))
}

fn app() -> Router {
    router(dataset(), PREFIX)
}

async fn send(app: Router, req: Request<Body>) -> (StatusCode, String, String) {
    let resp = app.oneshot(req).await.unwrap();
    let status = resp.status();
    let ct = resp
        .headers()
        .get(header::CONTENT_TYPE)
        .map(|v| v.to_str().unwrap().to_owned())
        .unwrap_or_default();
    let body = resp.into_body().collect().await.unwrap().to_bytes();
    (status, ct, String::from_utf8(body.to_vec()).unwrap())
}

async fn get(path: &str, accept: Option<&str>) -> (StatusCode, String, String) {
    let mut req = Request::get(path);
    if let Some(a) = accept {
        req = req.header(header::ACCEPT, a);
    }
    send(app(), req.body(Body::empty()).unwrap()).await
}

fn from_rdfxml(text: &str) -> Graph {
    let lines: Vec<String> = oxrdfxml::RdfXmlParser::new()
        .for_slice(text.as_bytes())
        .map(|t| {
            let t: oxrdf::Triple = t.unwrap();
            format!("{t} .")
        })
        .collect();
    parse_ntriples(&lines.join("\n")).unwrap()
}

#[tokio::test]
async fn concept_as_rdfxml() {
    let (status, ct, body) = get(&format!("{PREFIX}53A45"), Some("application/rdf+xml")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(ct, "application/rdf+xml");
    assert!(body.contains("<skos:prefLabel xml:lang=\"en\">Vector and tensor analysis</skos:prefLabel>"));
    let d = dataset();
    assert_eq!(&from_rdfxml(&body), d.slice("53A45").unwrap());
}

#[tokio::test]
async fn negotiation_and_extensions() {
    let (_, ct, _) = get(&format!("{PREFIX}53A45"), None).await;
    assert_eq!(ct, "text/html");
    let (_, ct, body) = get(&format!("{PREFIX}53A45"), Some("text/turtle")).await;
    assert_eq!(ct, "text/turtle");
    assert!(body.contains("msc:53A45 a skos:Concept"));
    let (_, ct, body) = get(&format!("{PREFIX}53A45.nt"), Some("text/html")).await;
    assert_eq!(ct, "application/n-triples");
    assert_eq!(&parse_ntriples(&body).unwrap(), dataset().slice("53A45").unwrap());
    let (status, _, body) = get(&format!("{PREFIX}53A45"), Some("image/png")).await;
    assert_eq!(status, StatusCode::NOT_ACCEPTABLE);
    assert!(body.contains("application/rdf+xml"));
}

#[tokio::test]
async fn unknown_resources() {
    assert_eq!(get(&format!("{PREFIX}99Z99"), None).await.0, StatusCode::NOT_FOUND);
    assert_eq!(get(&format!("{PREFIX}53A45.json"), None).await.0, StatusCode::NOT_FOUND);
    assert_eq!(get("/dump.xyz", None).await.0, StatusCode::NOT_FOUND);
    assert_eq!(get("/health", None).await, (StatusCode::OK, "text/plain; charset=utf-8".into(), "ok".into()));
}

#[tokio::test]
async fn html_links_resolve() {
    let (status, _, page) = get(&format!("{PREFIX}53Axx.html"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(page.contains(&format!("href=\"{PREFIX}53A45.html\"")));
    assert!(page.contains(&format!("href=\"{PREFIX}53-XX.html\"")));
    let links: Vec<&str> = page
        .split("href=\"")
        .skip(1)
        .map(|s| &s[..s.find('"').unwrap()])
        .filter(|h| h.starts_with(PREFIX))
        .collect();
    assert!(links.len() >= 5);
    for link in links {
        assert_eq!(get(link, None).await.0, StatusCode::OK, "{link}");
    }
}

#[tokio::test]
async fn html_shows_all_languages_and_notes() {
    let (_, _, page) = get(&format!("{PREFIX}53A45.html"), None).await;
    assert!(page.contains("Analisi vettoriale e tensoriale"));
    assert!(page.contains("Vektor- und Tensoranalysis"));
    assert!(page.contains("<h2>Related</h2>"));
    let (_, _, page) = get(&format!("{PREFIX}65D30.html"), None).await;
    assert!(page.contains("Includes cubature formulas"));
    let (_, _, page) = get(&format!("{PREFIX}53-XX.html"), None).await;
    assert!(page.contains("for differential topology, see"));
}

async fn sparql_post(query: &str) -> (StatusCode, String, String) {
    let req = Request::post("/sparql")
        .header(header::CONTENT_TYPE, "application/sparql-query")
        .body(Body::from(query.to_owned()))
        .unwrap();
    send(app(), req).await
}

#[tokio::test]
async fn listing_over_http() {
    let (status, ct, body) = sparql_post(sample::LISTING).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(ct, SPARQL_RESULTS);
    let json: Value = serde_json::from_str(&body).unwrap();
    let rows = json["results"]["bindings"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let counts: Vec<&str> = rows.iter().map(|r| r["count_article"]["value"].as_str().unwrap()).collect();
    assert_eq!(counts, ["0", "0", "2"]);
    assert_eq!(rows[2]["notation"]["value"], "53A45");
    assert_eq!(rows[2]["label"]["xml:lang"], "en");
}

#[tokio::test]
async fn sparql_get_and_errors() {
    let q = "PREFIX skos: <http://www.w3.org/2004/02/skos/core#> SELECT ?s WHERE { ?s skos:topConceptOf ?sch }";
    let encoded: String = q
        .bytes()
        .map(|b| match b {
            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' => (b as char).to_string(),
            _ => format!("%{b:02X}"),
        })
        .collect();
    let url = format!("/sparql?query={encoded}");
    let (status, _, body) = get(&url, None).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    let json: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(json["results"]["bindings"].as_array().unwrap().len(), 3);

    assert_eq!(get("/sparql", None).await.0, StatusCode::BAD_REQUEST);
    let (status, _, body) = sparql_post("SELECT ?x WHERE {").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(body.contains("syntax error"));

    let form = Request::post("/sparql")
        .header(header::CONTENT_TYPE, "application/x-www-form-urlencoded")
        .body(Body::from("query=SELECT+%3Fs+WHERE+%7B+%3Fs+%3Fp+%3Fo+%7D"))
        .unwrap();
    assert_eq!(send(app(), form).await.0, StatusCode::OK);
}

#[tokio::test]
async fn dumps() {
    let d = dataset();
    let (status, ct, body) = get("/dump.nt", None).await;
    assert_eq!((status, ct.as_str()), (StatusCode::OK, "application/n-triples"));
    assert_eq!(&parse_ntriples(&body).unwrap(), d.graph());
    let (_, ct, body) = get("/dump.rdf", None).await;
    assert_eq!(ct, "application/rdf+xml");
    assert_eq!(&from_rdfxml(&body), d.graph());
    assert_eq!(get("/dump.ttl", None).await.1, "text/turtle");
    let (status, _, master) = get("/dump.master.nt", None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(!master.contains(skos::NARROWER));
    assert_eq!(get("/dump.nt", None).await.2, get("/dump.nt", None).await.2);
}

#[tokio::test]
async fn served_over_tcp_with_shutdown() {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let (tx, rx) = tokio::sync::oneshot::channel::<()>();
    let server = tokio::spawn(msc_skos_server::serve_on(listener, dataset(), PREFIX, async {
        let _ = rx.await;
    }));
    use tokio::io::{AsyncReadExt, AsyncWriteExt};
    let mut stream = tokio::net::TcpStream::connect(addr).await.unwrap();
    stream
        .write_all(b"GET /health HTTP/1.1\r\nHost: x\r\nConnection: close\r\n\r\n")
        .await
        .unwrap();
    let mut resp = String::new();
    stream.read_to_string(&mut resp).await.unwrap();
    assert!(resp.starts_with("HTTP/1.1 200"), "{resp}");
    assert!(resp.ends_with("ok"));
    tx.send(()).unwrap();
    server.await.unwrap().unwrap();
}
