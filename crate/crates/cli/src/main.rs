//! `msc-skos`: convert, expand, split, validate, query and serve a
//! classification scheme as SKOS.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use msc_skos::entail::{builtin_ruleset_with, expand, parse_rules};
use msc_skos::query::{evaluate, parse_query};
use msc_skos::serial::{parse_ntriples, split_per_concept, to_ntriples, Format};
use msc_skos::skos::{
    build_graph, parse_collections, parse_external, parse_translations, parse_version_mappings, Auxiliary,
    SchemeConfig,
};
use msc_skos::source::parse_source;
use msc_skos::validate::{validate_with, Phase};
use msc_skos::{Diagnostic, Graph};
use msc_skos_server::ServerConfig;

#[derive(Parser)]
#[command(name = "msc-skos", version, about = "Classification scheme to SKOS linked data")]
struct Cli {
    /// Base IRI of concepts; must end with '/'.
    #[arg(long, global = true, default_value = msc_skos::rdf::vocab::MSC_BASE)]
    base: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a master source and write the non-redundant SKOS graph.
    Convert {
        source: PathBuf,
        /// Translated labels (TSV: code, language, label).
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Mappings to earlier editions (TSV: old code, relation, new code, edition).
        #[arg(long)]
        mappings: Option<PathBuf>,
        /// Collections (TSV: id, language, label, member codes).
        #[arg(long)]
        collections: Option<PathBuf>,
        /// Links to other vocabularies (TSV: code, property, target).
        #[arg(long)]
        external: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
        /// Treat any diagnostic as fatal.
        #[arg(long)]
        strict: bool,
    },
    /// Close a master graph under the builtin rules.
    Expand {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Extra rules, added to the builtin set.
        #[arg(long)]
        rules: Option<PathBuf>,
    },
    /// Write one file per concept.
    Split {
        input: PathBuf,
        #[arg(short = 'd', long = "dir")]
        dir: PathBuf,
        #[arg(long, value_enum, default_value_t = OutFormat::Nt)]
        format: OutFormat,
    },
    /// Check structure; exits with 1 on any error-severity finding.
    Validate {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = PhaseArg::Master)]
        phase: PhaseArg,
        /// Findings as check-id, severity, subject, message columns.
        #[arg(long)]
        tsv: bool,
    },
    /// Run a query over one or more N-Triples files.
    Query {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(short, long)]
        query: PathBuf,
        /// Print the JSON results form instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Print concept counts by level and the math-label fraction.
    Stats { input: PathBuf },
    /// Publish a dataset over HTTP.
    Serve {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Nt,
    Ttl,
    Rdf,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Nt => Format::NTriples,
            OutFormat::Ttl => Format::Turtle,
            OutFormat::Rdf => Format::RdfXml,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PhaseArg {
    Master,
    Expanded,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load(path: &Path) -> Result<Graph> {
    parse_ntriples(&read(path)?).with_context(|| path.display().to_string())
}

fn report(diags: &[Diagnostic]) {
    for d in diags {
        eprintln!("{d}");
    }
}

fn aux_input<T>(
    path: &Option<PathBuf>,
    diags: &mut Vec<Diagnostic>,
    parse: impl Fn(&str, &str) -> (Vec<T>, Vec<Diagnostic>),
) -> Result<Vec<T>> {
    let Some(path) = path else { return Ok(Vec::new()) };
    let (rows, d) = parse(&path.display().to_string(), &read(path)?);
    diags.extend(d);
    Ok(rows)
}

/// Ok(true) means success; Ok(false) means validation errors.
fn run(cli: Cli) -> Result<bool> {
    let config = SchemeConfig::new(&cli.base)?;
    match cli.command {
        Command::Convert {
            source,
            labels,
            mappings,
            collections,
            external,
            output,
            strict,
        } => {
            let parsed = parse_source(&source.display().to_string(), &read(&source)?);
            let mut diags = parsed.diagnostics;
            let prefixes = config.prefixes();
            let aux = Auxiliary {
                translations: aux_input(&labels, &mut diags, parse_translations)?,
                version_mappings: aux_input(&mappings, &mut diags, parse_version_mappings)?,
                collections: aux_input(&collections, &mut diags, parse_collections)?,
                external: aux_input(&external, &mut diags, |n, t| parse_external(n, t, &prefixes))?,
            };
            let built = build_graph(&parsed.records, &aux, &config);
            diags.extend(built.diagnostics);
            report(&diags);
            if parsed.records.is_empty() {
                bail!("{}: no class records", source.display());
            }
            if strict && !diags.is_empty() {
                bail!("{} diagnostic(s); nothing written", diags.len());
            }
            write(&output, &to_ntriples(&built.graph))?;
            log::info!("{}: {} triples", output.display(), built.graph.len());
        }
        Command::Expand { input, output, rules } => {
            let master = load(&input)?;
            let prefixes = config.prefixes();
            let mut ruleset = builtin_ruleset_with(&prefixes);
            if let Some(path) = rules {
                let extra = parse_rules(&read(&path)?, &prefixes).with_context(|| path.display().to_string())?;
                ruleset.extend(extra);
            }
            let expanded = expand(&master, &ruleset)?;
            write(&output, &to_ntriples(&expanded))?;
            log::info!("{}: {} -> {} triples", output.display(), master.len(), expanded.len());
        }
        Command::Split { input, dir, format } => {
            let mut graph = load(&input)?;
            graph.set_prefixes(config.prefixes());
            let format = Format::from(format);
            fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
            let slices = split_per_concept(&graph);
            for (code, slice) in &slices {
                write(&dir.join(format!("{code}.{}", format.extension())), &format.serialize(slice))?;
            }
            log::info!("{}: {} files", dir.display(), slices.len());
        }
        Command::Validate { input, phase, tsv } => {
            let phase = match phase {
                PhaseArg::Master => Phase::Master,
                PhaseArg::Expanded => Phase::Expanded,
            };
            let r = validate_with(&load(&input)?, phase, &config);
            print!("{}", if tsv { r.to_tsv() } else { r.to_text() });
            return Ok(!r.has_errors());
        }
        Command::Query { inputs, query, json } => {
            let mut graph = Graph::new();
            for input in &inputs {
                graph.extend(load(input)?.iter().cloned());
            }
            let q = parse_query(&read(&query)?).with_context(|| query.display().to_string())?;
            let table = evaluate(&graph, &q);
            if json {
                println!("{}", serde_json::to_string_pretty(&table.to_json())?);
            } else {
                print!("{}", table.to_tsv());
            }
        }
        Command::Stats { input } => {
            let r = validate_with(&load(&input)?, Phase::Master, &config);
            print!("{}", r.stats.to_text());
        }
        Command::Serve { config: path } => {
            let server_config = ServerConfig::parse(&read(&path)?).with_context(|| path.display().to_string())?;
            let runtime = msc_skos_server::runtime().context("cannot start the async runtime")?;
            runtime.block_on(msc_skos_server::serve(&server_config))?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
