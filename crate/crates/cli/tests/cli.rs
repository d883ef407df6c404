use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msc-skos"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn pipeline(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let f = fixtures();
    let master = dir.join("master.nt");
    let expanded = dir.join("expanded.nt");
    let slices = dir.join("slices");
    for args in [
        vec!["convert", s(&f.join("sample.msc")), "--labels", s(&f.join("labels.tsv")), "-o", s(&master)],
        vec!["expand", s(&master), "-o", s(&expanded)],
        vec!["split", s(&expanded), "-d", s(&slices), "--format", "ttl"],
    ] {
        let out = run(&args);
        assert!(out.status.success(), "{args:?}: {}", stderr(&out));
    }
    let mut files: Vec<(String, Vec<u8>)> = [master, expanded]
        .iter()
        .chain(std::fs::read_dir(&slices).unwrap().map(|e| e.unwrap().path()).collect::<Vec<_>>().iter())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn pipeline_twice_is_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (fa, fb) = (pipeline(a.path()), pipeline(b.path()));
    assert_eq!(fa.len(), 16);
    assert_eq!(fa, fb);
}

#[test]
fn expanded_sample_validates() {
    let dir = tempfile::tempdir().unwrap();
    pipeline(dir.path());
    let out = run(&["validate", s(&dir.path().join("expanded.nt")), "--phase", "expanded"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("0 error(s), 0 warning(s)"));
}

#[test]
fn cyclic_graph_fails_validation() {
    let out = run(&["validate", s(&fixtures().join("defects/v4_cycle.nt"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("V4 error"));
    let out = run(&["validate", s(&fixtures().join("defects/v4_cycle.nt")), "--tsv"]);
    assert!(stdout(&out).lines().all(|l| l.split('\t').count() == 4));
}

#[test]
fn query_table_and_json() {
    let dir = tempfile::tempdir().unwrap();
    pipeline(dir.path());
    let expanded = dir.path().join("expanded.nt");
    let (articles, listing) = (fixtures().join("articles.nt"), fixtures().join("listing.rq"));
    let args = ["query", s(&expanded), s(&articles), "-q", s(&listing)];
    let table = stdout(&run(&args));
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "?subclass\t?notation\t?label\t?count_article");
    assert!(lines[3].ends_with("\"Vector and tensor analysis\"@en\t2"));

    let mut json_args = args.to_vec();
    json_args.push("--json");
    let json: serde_json::Value = serde_json::from_str(&stdout(&run(&json_args))).unwrap();
    assert_eq!(json["results"]["bindings"][2]["count_article"]["value"], "2");
}

#[test]
fn stats_only() {
    let dir = tempfile::tempdir().unwrap();
    pipeline(dir.path());
    let out = stdout(&run(&["stats", s(&dir.path().join("master.nt"))]));
    assert!(out.starts_with("concepts: 14\ntop: 3\nintermediate: 3\nleaves: 8\n"), "{out}");
    assert!(!out.contains("error(s)"));
}

#[test]
fn diagnostics_carry_location() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("bad.msc");
    std::fs::write(&src, "53-XX Geometry\n5A345 Broken\n53A45 Orphan\n").unwrap();
    let out_path = dir.path().join("m.nt");
    let out = run(&["convert", s(&src), "-o", s(&out_path)]);
    assert!(out.status.success());
    let err = stderr(&out);
    assert!(err.contains("bad.msc:2:"), "{err}");
    assert!(err.contains("bad.msc:3:"), "{err}");
    assert!(out_path.exists());

    let strict_path = dir.path().join("strict.nt");
    let out = run(&["convert", s(&src), "-o", s(&strict_path), "--strict"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!strict_path.exists());
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.nt");
    std::fs::write(&bad, "<http://a> <http://b> <http://c> .\n<http://a> <http://b> \"x\"\n").unwrap();
    let out = run(&["validate", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    assert_eq!(run(&["validate"]).status.code(), Some(2));
    assert_eq!(run(&["expand", "/nonexistent.nt", "-o", "x.nt"]).status.code(), Some(2));
    let empty = dir.path().join("empty.msc");
    std::fs::write(&empty, "% nothing\n").unwrap();
    assert_eq!(run(&["convert", s(&empty), "-o", s(&dir.path().join("e.nt"))]).status.code(), Some(2));
}

#[test]
fn extra_rules_are_applied() {
    let dir = tempfile::tempdir().unwrap();
    pipeline(dir.path());
    let rules = dir.path().join("extra.rules");
    std::fs::write(&rules, "X1: skos:notation(?c, ?n) => skos:altLabel(?c, ?n)\n").unwrap();
    let out_path = dir.path().join("x.nt");
    let out = run(&["expand", s(&dir.path().join("master.nt")), "-o", s(&out_path), "--rules", s(&rules)]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.contains("53A45> <http://www.w3.org/2004/02/skos/core#altLabel> \"53A45\" ."));
    assert!(text.contains("narrower"));

    std::fs::write(&rules, "X2: skos:broader(?x, ?y) => skos:related(?x, ?z)\n").unwrap();
    let out = run(&["expand", s(&dir.path().join("master.nt")), "-o", s(&out_path), "--rules", s(&rules)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn serve_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("server.conf");
    std::fs::write(&cfg, "port = 80\n").unwrap();
    let out = run(&["serve", "--config", s(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("data"));
}

#[test]
fn serve_writes_dumps_before_listening() {
    let dir = tempfile::tempdir().unwrap();
    pipeline(dir.path());
    let dumps = dir.path().join("dumps");
    let cfg = dir.path().join("server.conf");
    // a port that cannot be bound makes serve exit right after writing dumps
    std::fs::write(
        &cfg,
        format!(
            "bind = 256.0.0.1\ndata = {}\nmaster = {}\ndump-dir = {}\n",
            s(&dir.path().join("expanded.nt")),
            s(&dir.path().join("master.nt")),
            s(&dumps)
        ),
    )
    .unwrap();
    let out = run(&["serve", "--config", s(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
    for name in ["dump.nt", "dump.ttl", "dump.rdf", "dump.master.nt"] {
        assert!(dumps.join(name).exists(), "{name}");
    }
}
