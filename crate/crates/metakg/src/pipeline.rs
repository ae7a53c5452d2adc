//! Pipeline stages over a working directory. Each stage reads the previous
//! stage's files, so stages can be rerun one at a time.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use metakg_core::embed::{embed_store, EmbeddingTable};
use metakg_core::extract::{
    build_metadata_tables, extract_corpus, parse_stoplist, ExtractConfig, Gazetteer, DEFAULT_STOPLIST,
};
use metakg_core::ingest::{
    build_document, fetch_documents, load_manifest, raw_file_name, DelayPolicy, DescriptionDocument, FetchRecord,
    FetchStatus,
};
use metakg_core::mapping::{dedup_in_order, execute_mapping, parse_mapping};
use metakg_core::mine::{apply_rules, format_rules, mine_rules, parse_rules, HornRule};
use metakg_core::model::{parse_ntriples, serialize_ntriples, LocalNamespace};
use metakg_core::store::TripleStore;
use metakg_core::translate::{
    translate_document, DictionaryTranslator, RetryPolicy, TranslationCache, Translator, CACHE_FILE,
};

use crate::config::{Backend, PipelineConfig};
use crate::net::{HttpFetcher, HttpTranslator};
use crate::report::{
    graph_summary, EmbedSummary, ExtractSummary, IngestSummary, MapSummary, MineSummary, PipelineReport,
    TranslateSummary,
};

pub const PROVENANCE_FILE: &str = "provenance.tsv";

/// File layout of a working directory.
#[derive(Debug, Clone)]
pub struct Workdir {
    pub root: PathBuf,
}

impl Workdir {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Workdir { root: root.into() }
    }

    pub fn raw(&self) -> PathBuf {
        self.root.join("raw")
    }

    pub fn docs(&self) -> PathBuf {
        self.root.join("docs")
    }

    pub fn tables(&self) -> PathBuf {
        self.root.join("tables")
    }

    pub fn graph(&self) -> PathBuf {
        self.root.join("graph.nt")
    }

    pub fn rules(&self) -> PathBuf {
        self.root.join("rules.txt")
    }

    pub fn inferred(&self) -> PathBuf {
        self.root.join("inferred.nt")
    }

    pub fn provenance(&self) -> PathBuf {
        self.root.join(PROVENANCE_FILE)
    }

    pub fn embeddings(&self) -> PathBuf {
        self.root.join("embeddings.txt")
    }

    pub fn report(&self) -> PathBuf {
        self.root.join("report.json")
    }

    pub fn cache(&self) -> PathBuf {
        self.root.join(CACHE_FILE)
    }

    pub fn doc_file(&self, doc_id: &str) -> PathBuf {
        self.docs().join(format!("{doc_id}.doc.json"))
    }
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn load_graph(path: &Path) -> Result<TripleStore> {
    let triples = parse_ntriples(&read(path)?).with_context(|| format!("invalid N-Triples in {}", path.display()))?;
    Ok(TripleStore::load(&triples))
}

pub fn load_rules(path: &Path) -> Result<Vec<HornRule>> {
    parse_rules(&read(path)?).with_context(|| format!("invalid rules file {}", path.display()))
}

pub fn load_embeddings(path: &Path) -> Result<EmbeddingTable> {
    EmbeddingTable::from_text(&read(path)?).with_context(|| format!("invalid embeddings file {}", path.display()))
}

/// Description documents in the working directory, ordered by doc_id.
pub fn load_documents(dir: &Path) -> Result<Vec<DescriptionDocument>> {
    let mut docs = Vec::new();
    let entries = std::fs::read_dir(dir).with_context(|| format!("cannot read {}", dir.display()))?;
    for entry in entries {
        let path = entry?.path();
        if path.to_string_lossy().ends_with(".doc.json") {
            let doc: DescriptionDocument =
                serde_json::from_str(&read(&path)?).with_context(|| format!("invalid document {}", path.display()))?;
            docs.push(doc);
        }
    }
    docs.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    Ok(docs)
}

pub struct Pipeline {
    pub config: PipelineConfig,
    pub work: Workdir,
    pub ns: LocalNamespace,
}

impl Pipeline {
    pub fn new(config: PipelineConfig) -> Result<Self> {
        let ns = LocalNamespace::new(&config.namespace).context("invalid namespace")?;
        Ok(Pipeline { work: Workdir::new(&config.workdir), config, ns })
    }

    pub fn ingest(&self) -> Result<IngestSummary> {
        let manifest_path = self.config.ingest.manifest.as_deref().context("ingest.manifest is not configured")?;
        let manifest = load_manifest(manifest_path)?;
        let base = manifest_path.parent().unwrap_or(Path::new("."));
        let delay = DelayPolicy {
            min_s: self.config.ingest.delay_min,
            max_s: self.config.ingest.delay_max,
            seed: self.config.seed,
        };
        let fetcher = HttpFetcher::default();
        let fetched =
            fetch_documents(&manifest, base, delay, &self.work.raw(), Some(&fetcher), &mut std::thread::sleep)?;

        let docs_dir = self.work.docs();
        if docs_dir.is_dir() {
            for entry in std::fs::read_dir(&docs_dir)? {
                let path = entry?.path();
                if path.to_string_lossy().ends_with(".doc.json") {
                    std::fs::remove_file(&path)?;
                }
            }
        }
        let fetched_at = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
        let layout = self.config.layout();
        let mut failures = Vec::new();
        let mut documents = 0;
        for (entry, record) in manifest.entries.iter().zip(&fetched.records) {
            if record.status != FetchStatus::Ok {
                failures.push(record.clone());
                continue;
            }
            let raw = read(&self.work.raw().join(raw_file_name(&entry.doc_id)))?;
            let sha = record.sha256.as_deref().unwrap_or_default();
            match build_document(entry, &raw, sha, &fetched_at, &layout, &self.config.ingest.variable_headers) {
                Ok(doc) => {
                    write(&self.work.doc_file(&doc.doc_id), serde_json::to_string_pretty(&doc)? + "\n")?;
                    documents += 1;
                }
                Err(e) => {
                    log::warn!("{}: {e}", entry.doc_id);
                    failures.push(FetchRecord {
                        doc_id: entry.doc_id.clone(),
                        status: FetchStatus::ExtractionFailed,
                        sha256: record.sha256.clone(),
                        message: Some(e.to_string()),
                    });
                }
            }
        }
        log::info!("ingest: {documents} of {} documents", manifest.entries.len());
        Ok(IngestSummary {
            entries: manifest.entries.len(),
            documents,
            remote_requests: fetched.remote_requests,
            failures,
        })
    }

    fn translator(&self, backend: Backend) -> Result<Box<dyn Translator>> {
        Ok(match backend {
            Backend::Dict => {
                let path = self.config.translate.lexicon.as_deref().context("translate.lexicon is not configured")?;
                Box::new(DictionaryTranslator::from_tsv(&read(path)?)?)
            }
            Backend::Http => Box::new(HttpTranslator::from_env().map_err(anyhow::Error::msg)?),
        })
    }

    /// Translates every document in place. A document that fails is left
    /// untranslated and reported.
    pub fn translate(&self, backend: Backend) -> Result<TranslateSummary> {
        let engine = self.translator(backend)?;
        let mut cache = TranslationCache::open(&self.work.cache())?;
        let retry = RetryPolicy { retries: self.config.translate.retries, ..RetryPolicy::default() };
        let mut summary = TranslateSummary::default();
        for doc in load_documents(&self.work.docs())? {
            match translate_document(&doc, engine.as_ref(), &mut cache, &retry) {
                Ok(done) => {
                    if done != doc {
                        write(&self.work.doc_file(&doc.doc_id), serde_json::to_string_pretty(&done)? + "\n")?;
                    }
                    summary.documents += 1;
                }
                Err(e) => {
                    log::warn!("{e}");
                    summary.failures.push(e.to_string());
                }
            }
        }
        cache.save()?;
        log::info!("translate: cache hits {} misses {}", cache.hits, cache.misses);
        Ok(summary)
    }

    fn extract_config(&self) -> Result<ExtractConfig> {
        let gazetteer = match &self.config.extract.gazetteer {
            Some(p) => Gazetteer::from_json(&read(p)?)?,
            None => Gazetteer::default(),
        };
        let stoplist = match &self.config.extract.stoplist {
            Some(p) => parse_stoplist(&read(p)?),
            None => parse_stoplist(DEFAULT_STOPLIST),
        };
        Ok(ExtractConfig { gazetteer, stoplist, keywords_k: self.config.extract.keywords_k })
    }

    pub fn extract(&self, docs_dir: &Path, tables_dir: &Path) -> Result<ExtractSummary> {
        let docs = load_documents(docs_dir)?;
        if docs.is_empty() {
            bail!("no documents in {}; run ingest first", docs_dir.display());
        }
        let extractions = extract_corpus(&docs, &self.extract_config()?);
        let tables = build_metadata_tables(&docs, &extractions)?;
        tables.write(tables_dir).context("cannot write tables")?;
        Ok(ExtractSummary {
            documents: docs.len(),
            variables: tables.variables.rows.len(),
            keywords: tables.keywords.rows.len(),
            warnings: tables.warnings,
        })
    }

    pub fn map(&self, mapping: &Path, tables_dir: &Path, out: &Path) -> Result<MapSummary> {
        let doc = parse_mapping(&read(mapping)?).with_context(|| format!("invalid mapping {}", mapping.display()))?;
        let (triples, stats) = execute_mapping(&doc, tables_dir)?;
        let emitted = triples.len();
        let unique = dedup_in_order(triples);
        write(out, serialize_ntriples(&unique))?;
        log::info!("map: {emitted} triples emitted, {} unique, {:?}", unique.len(), stats.elapsed);
        Ok(MapSummary { emitted, unique: unique.len(), per_map: stats.per_map })
    }

    pub fn mine(&self, graph: &Path, out: &Path) -> Result<MineSummary> {
        self.config.mine.validate()?;
        let store = load_graph(graph)?;
        let outcome = mine_rules(&store, &self.config.mine);
        write(out, format_rules(&outcome.rules))?;
        Ok(MineSummary { rules: outcome.rules.len(), skipped_literal_triples: outcome.skipped_literal_triples })
    }

    /// Writes the new triples to `out` and a `triple<TAB>rule` line for each
    /// to `provenance.tsv` beside it.
    pub fn infer(&self, graph: &Path, rules: &Path, out: &Path, threshold: f64, fixpoint: bool) -> Result<usize> {
        let store = load_graph(graph)?;
        let rules = load_rules(rules)?;
        let inferred = apply_rules(&store, &rules, threshold, fixpoint);
        write(out, serialize_ntriples(inferred.iter().map(|i| &i.triple)))?;
        let provenance: String =
            inferred.iter().map(|i| format!("{}\t{}\n", serialize_ntriples([&i.triple]).trim_end(), i.rule)).collect();
        write(&out.with_file_name(PROVENANCE_FILE), provenance)?;
        Ok(inferred.len())
    }

    pub fn embed(&self, graph: &Path, out: &Path) -> Result<EmbedSummary> {
        let store = load_graph(graph)?;
        let table = embed_store(&store, &self.config.walk(), &self.config.sgns())?;
        write(out, table.to_text())?;
        Ok(EmbedSummary {
            nodes: table.nodes.len(),
            dims: table.dims,
            first_epoch_loss: table.epoch_loss.first().copied().unwrap_or(0.0),
            final_epoch_loss: table.epoch_loss.last().copied().unwrap_or(0.0),
        })
    }

    /// Runs every enabled stage and writes `report.json`.
    pub fn all(&self) -> Result<PipelineReport> {
        self.config.check_inputs()?;
        std::fs::create_dir_all(&self.work.root)
            .with_context(|| format!("cannot create {}", self.work.root.display()))?;
        let stages = &self.config.stages;
        let mut report = PipelineReport { ingest: Some(self.ingest()?), ..Default::default() };
        if stages.translate {
            report.translate = Some(self.translate(self.config.translate.backend)?);
        }
        let w = &self.work;
        report.extract = Some(self.extract(&w.docs(), &w.tables())?);
        let mapping = self.config.map.mapping.as_deref().context("map.mapping is not configured")?;
        report.map = Some(self.map(mapping, &w.tables(), &w.graph())?);
        if stages.mine {
            report.mine = Some(self.mine(&w.graph(), &w.rules())?);
            if stages.infer {
                let threshold = self.config.mine.apply_threshold;
                report.inferred = Some(self.infer(&w.graph(), &w.rules(), &w.inferred(), threshold, false)?);
            }
        }
        if stages.embed {
            report.embed = Some(self.embed(&w.graph(), &w.embeddings())?);
        }
        report.graph = Some(graph_summary(&load_graph(&self.work.graph())?, &self.ns));
        write(&self.work.report(), serde_json::to_string_pretty(&report)? + "\n")?;
        Ok(report)
    }
}
