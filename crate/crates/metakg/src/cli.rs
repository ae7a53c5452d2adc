//! Command-line entry point. Exit status: 0 on success, 1 on errors, 2 when
//! a batch stage finished but some documents failed.

use std::io::Read;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use metakg_core::model::{make_iri, Term};
use metakg_core::store::{export_dot, multi_category_report, shared_variable_report, BgpQuery};
use serde::Serialize;

use crate::api::{run_query, similar_nodes, MAX_ROWS};
use crate::config::{Backend, PipelineConfig};
use crate::pipeline::{load_embeddings, load_graph, Pipeline};
use crate::report::category_table;
use crate::service::{router, serve, AppState};

#[derive(Debug, Parser)]
#[command(name = "metakg", version, about = "Build and explore a knowledge graph of dataset descriptions")]
pub struct Cli {
    /// TOML pipeline configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub workdir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Repeat for more detail.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportKind {
    Categories,
    SharedVariables,
    MultiCategory,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fetch the documents listed in a manifest and rebuild their text.
    Ingest {
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Working directory receiving raw/ and docs/.
        #[arg(long)]
        dest: Option<PathBuf>,
        #[arg(long)]
        delay_min: Option<f64>,
        #[arg(long)]
        delay_max: Option<f64>,
    },
    /// Translate ingested documents to English.
    Translate {
        #[arg(long, value_enum)]
        backend: Option<Backend>,
        #[arg(long)]
        lexicon: Option<PathBuf>,
    },
    /// Extract entities and keywords into metadata tables.
    Extract {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Run the R2RML mapping over the metadata tables.
    Map {
        #[arg(long)]
        mapping: Option<PathBuf>,
        #[arg(long)]
        tables: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a basic graph pattern given as JSON (`-` reads stdin).
    Query {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        bgp: PathBuf,
    },
    /// Summary reports over the graph.
    Report {
        #[arg(value_enum, default_value = "categories")]
        kind: ReportKind,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        /// DOT only: IRI to centre the drawing on.
        #[arg(long)]
        focus: Option<String>,
        #[arg(long, default_value_t = 1)]
        radius: usize,
    },
    /// Mine Horn rules.
    Mine {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        min_hc: Option<f64>,
        #[arg(long)]
        min_std: Option<f64>,
        #[arg(long)]
        min_support: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply mined rules and write the new triples.
    Infer {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        rules: Option<PathBuf>,
        #[arg(long)]
        threshold: Option<f64>,
        /// Repeat until no new triple appears.
        #[arg(long)]
        fixpoint: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train node embeddings.
    Embed {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        dims: Option<usize>,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Nearest nodes by embedding cosine.
    Similar {
        /// Node IRI or dataset id.
        #[arg(long)]
        node: String,
        #[arg(short, default_value_t = 10)]
        k: usize,
        #[arg(long)]
        embeddings: Option<PathBuf>,
        /// Only list datasets, as the HTTP API does.
        #[arg(long)]
        datasets: bool,
    },
    /// Serve the JSON API.
    Serve {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        rules: Option<PathBuf>,
        #[arg(long)]
        embeddings: Option<PathBuf>,
        #[arg(long)]
        bind: Option<String>,
        #[arg(long)]
        port: Option<u16>,
    },
    /// Run every enabled stage and write report.json.
    All,
}

/// Whether a finished command had per-document failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Complete,
    Partial,
}

fn print_json(value: &impl Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn existing(path: PathBuf) -> Option<PathBuf> {
    path.is_file().then_some(path)
}

fn write_stage_report(p: &Pipeline, stage: &str, value: &impl Serialize) -> Result<()> {
    std::fs::create_dir_all(&p.work.root)?;
    let path = p.work.root.join(format!("{stage}.report.json"));
    std::fs::write(&path, serde_json::to_string_pretty(value)? + "\n")
        .with_context(|| format!("cannot write {}", path.display()))
}

fn load_config(cli: &Cli) -> Result<PipelineConfig> {
    let mut config = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(w) = &cli.workdir {
        config.workdir = w.clone();
    }
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    Ok(config)
}

pub fn run(cli: Cli) -> Result<Outcome> {
    let mut config = load_config(&cli)?;
    if let Command::Ingest { dest: Some(d), .. } = &cli.command {
        config.workdir = d.clone();
    }
    let work = crate::pipeline::Workdir::new(&config.workdir);
    let or = |flag: &Option<PathBuf>, default: PathBuf| flag.clone().unwrap_or(default);

    match cli.command {
        Command::Ingest { manifest, delay_min, delay_max, .. } => {
            if let Some(m) = manifest {
                config.ingest.manifest = Some(m);
            }
            config.ingest.delay_min = delay_min.unwrap_or(config.ingest.delay_min);
            config.ingest.delay_max = delay_max.unwrap_or(config.ingest.delay_max);
            let p = Pipeline::new(config)?;
            let summary = p.ingest()?;
            write_stage_report(&p, "ingest", &summary)?;
            println!("{} of {} documents ingested", summary.documents, summary.entries);
            for f in &summary.failures {
                eprintln!("{}: {:?} {}", f.doc_id, f.status, f.message.as_deref().unwrap_or(""));
            }
            Ok(if summary.failures.is_empty() { Outcome::Complete } else { Outcome::Partial })
        }
        Command::Translate { backend, lexicon } => {
            if lexicon.is_some() {
                config.translate.lexicon = lexicon;
            }
            let backend = backend.unwrap_or(config.translate.backend);
            let p = Pipeline::new(config)?;
            let summary = p.translate(backend)?;
            write_stage_report(&p, "translate", &summary)?;
            println!("{} documents translated", summary.documents);
            for f in &summary.failures {
                eprintln!("{f}");
            }
            Ok(if summary.failures.is_empty() { Outcome::Complete } else { Outcome::Partial })
        }
        Command::Extract { input, out, k } => {
            config.extract.keywords_k = k.unwrap_or(config.extract.keywords_k);
            let p = Pipeline::new(config)?;
            let summary = p.extract(&or(&input, work.docs()), &or(&out, work.tables()))?;
            write_stage_report(&p, "extract", &summary)?;
            println!("{} documents, {} variables, {} keywords", summary.documents, summary.variables, summary.keywords);
            Ok(Outcome::Complete)
        }
        Command::Map { mapping, tables, out } => {
            let mapping = mapping
                .or_else(|| config.map.mapping.clone())
                .context("no mapping given (--mapping or map.mapping)")?;
            let p = Pipeline::new(config)?;
            let summary = p.map(&mapping, &or(&tables, work.tables()), &or(&out, work.graph()))?;
            write_stage_report(&p, "map", &summary)?;
            println!("{} triples ({} emitted)", summary.unique, summary.emitted);
            Ok(Outcome::Complete)
        }
        Command::Query { graph, bgp } => {
            let text = if bgp.as_os_str() == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s)?;
                s
            } else {
                std::fs::read_to_string(&bgp).with_context(|| format!("cannot read {}", bgp.display()))?
            };
            let query = BgpQuery::from_json(&text).with_context(|| format!("invalid query {}", bgp.display()))?;
            let store = load_graph(&or(&graph, work.graph()))?;
            print_json(&run_query(&store, &query, MAX_ROWS))?;
            Ok(Outcome::Complete)
        }
        Command::Report { kind, graph, json, focus, radius } => {
            let p = Pipeline::new(config)?;
            let graph = or(&graph, work.graph());
            report(&p, kind, &graph, json, focus.as_deref(), radius)?;
            Ok(Outcome::Complete)
        }
        Command::Mine { graph, max_len, min_hc, min_std, min_support, out } => {
            let m = &mut config.mine;
            m.max_len = max_len.unwrap_or(m.max_len);
            m.min_head_coverage = min_hc.unwrap_or(m.min_head_coverage);
            m.min_std_confidence = min_std.unwrap_or(m.min_std_confidence);
            m.min_support = min_support.unwrap_or(m.min_support);
            let p = Pipeline::new(config)?;
            let summary = p.mine(&or(&graph, work.graph()), &or(&out, work.rules()))?;
            write_stage_report(&p, "mine", &summary)?;
            println!("{} rules", summary.rules);
            Ok(Outcome::Complete)
        }
        Command::Infer { graph, rules, threshold, fixpoint, out } => {
            let threshold = threshold.unwrap_or(config.mine.apply_threshold);
            if !(0.0..=1.0).contains(&threshold) {
                bail!("threshold {threshold} is outside [0, 1]");
            }
            let p = Pipeline::new(config)?;
            let n = p.infer(
                &or(&graph, work.graph()),
                &or(&rules, work.rules()),
                &or(&out, work.inferred()),
                threshold,
                fixpoint,
            )?;
            write_stage_report(&p, "infer", &n)?;
            println!("{n} triples inferred");
            Ok(Outcome::Complete)
        }
        Command::Embed { graph, dims, epochs, out } => {
            config.embed.dims = dims.unwrap_or(config.embed.dims);
            config.embed.epochs = epochs.unwrap_or(config.embed.epochs);
            let p = Pipeline::new(config)?;
            let summary = p.embed(&or(&graph, work.graph()), &or(&out, work.embeddings()))?;
            write_stage_report(&p, "embed", &summary)?;
            println!("{} nodes, final loss {:.4}", summary.nodes, summary.final_epoch_loss);
            Ok(Outcome::Complete)
        }
        Command::Similar { node, k, embeddings, datasets } => {
            let p = Pipeline::new(config)?;
            let table = load_embeddings(&or(&embeddings, work.embeddings()))?;
            let iri = if make_iri(&node).is_ok() { node } else { p.ns.dataset(&node) };
            print_json(&similar_nodes(&table, &p.ns, &iri, k, datasets)?)?;
            Ok(Outcome::Complete)
        }
        Command::Serve { graph, rules, embeddings, bind, port } => {
            let p = Pipeline::new(config)?;
            let service = &p.config.service;
            let state = AppState::load(
                &or(&graph, work.graph()),
                rules.or_else(|| existing(work.rules())).as_deref(),
                embeddings.or_else(|| existing(work.embeddings())).as_deref(),
                p.ns.clone(),
            )?;
            let host = bind.unwrap_or_else(|| service.bind.clone());
            let addr: SocketAddr = format!("{host}:{}", port.unwrap_or(service.port))
                .parse()
                .with_context(|| format!("invalid bind address {host}"))?;
            let app = router(Arc::new(state), &service.cors_origin)?;
            tokio::runtime::Runtime::new()?.block_on(serve(app, addr))?;
            Ok(Outcome::Complete)
        }
        Command::All => {
            let p = Pipeline::new(config)?;
            let report = p.all()?;
            println!(
                "{} triples, {} rules; report in {}",
                report.map.as_ref().map_or(0, |m| m.unique),
                report.mine.as_ref().map_or(0, |m| m.rules),
                p.work.report().display()
            );
            Ok(if report.has_failures() { Outcome::Partial } else { Outcome::Complete })
        }
    }
}

fn report(p: &Pipeline, kind: ReportKind, graph: &Path, json: bool, focus: Option<&str>, radius: usize) -> Result<()> {
    let store = load_graph(graph)?;
    match kind {
        ReportKind::Categories => {
            let table = category_table(&store, &p.ns);
            if json {
                print_json(&table)?;
            } else {
                print!("{}", table.to_text());
            }
        }
        ReportKind::SharedVariables => {
            let pairs = shared_variable_report(&store, &p.ns);
            if json {
                print_json(&pairs)?;
            } else {
                let id = |iri: &str| p.ns.dataset_id(iri).unwrap_or(iri).to_string();
                for s in &pairs {
                    println!("{}\t{}\t{}", id(&s.dataset_a), id(&s.dataset_b), s.variables.join(","));
                }
            }
        }
        ReportKind::MultiCategory => {
            let multi = multi_category_report(&store);
            if json {
                print_json(&multi)?;
            } else {
                for (d, n) in &multi {
                    println!("{}\t{n}", p.ns.dataset_id(d).unwrap_or(d));
                }
            }
        }
        ReportKind::Dot => {
            let focus: Option<Term> = focus.map(make_iri).transpose()?;
            print!("{}", export_dot(&store, focus.as_ref(), radius, &p.ns));
        }
    }
    Ok(())
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).parse_default_env().init();
    match run(cli) {
        Ok(Outcome::Complete) => ExitCode::SUCCESS,
        Ok(Outcome::Partial) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
