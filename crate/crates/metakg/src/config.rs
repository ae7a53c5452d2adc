//! Pipeline configuration. Relative paths in a config file resolve against
//! the file's directory; command-line flags override file values.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use metakg_core::embed::{SgnsConfig, WalkConfig};
use metakg_core::ingest::{LayoutConfig, DEFAULT_VARIABLE_HEADERS};
use metakg_core::mine::MiningConfig;
use metakg_core::model::vocab::DEFAULT_LOCAL_NAMESPACE;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Dict,
    Http,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IngestSection {
    pub manifest: Option<PathBuf>,
    pub delay_min: f64,
    pub delay_max: f64,
    pub line_overlap: f64,
    pub paragraph_gap: f64,
    pub variable_headers: Vec<String>,
}

impl Default for IngestSection {
    fn default() -> Self {
        let layout = LayoutConfig::default();
        IngestSection {
            manifest: None,
            delay_min: 1.0,
            delay_max: 5.0,
            line_overlap: layout.line_overlap,
            paragraph_gap: layout.paragraph_gap,
            variable_headers: DEFAULT_VARIABLE_HEADERS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TranslateSection {
    pub backend: Backend,
    pub lexicon: Option<PathBuf>,
    pub retries: u32,
}

impl Default for TranslateSection {
    fn default() -> Self {
        TranslateSection { backend: Backend::Dict, lexicon: None, retries: 3 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtractSection {
    pub gazetteer: Option<PathBuf>,
    pub stoplist: Option<PathBuf>,
    pub keywords_k: usize,
}

impl Default for ExtractSection {
    fn default() -> Self {
        ExtractSection { gazetteer: None, stoplist: None, keywords_k: 8 }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MapSection {
    pub mapping: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmbedSection {
    pub dims: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub alpha: f64,
    pub walks_per_node: usize,
    pub walk_length: usize,
    pub window: usize,
}

impl Default for EmbedSection {
    fn default() -> Self {
        let (w, s) = (WalkConfig::default(), SgnsConfig::default());
        EmbedSection {
            dims: s.dims,
            negatives: s.negatives,
            epochs: s.epochs,
            alpha: s.alpha,
            walks_per_node: w.walks_per_node,
            walk_length: w.walk_length,
            window: w.window,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Stages {
    pub translate: bool,
    pub mine: bool,
    pub infer: bool,
    pub embed: bool,
}

impl Default for Stages {
    fn default() -> Self {
        Stages { translate: true, mine: true, infer: true, embed: true }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceSection {
    pub bind: String,
    pub port: u16,
    pub cors_origin: String,
}

impl Default for ServiceSection {
    fn default() -> Self {
        ServiceSection { bind: "127.0.0.1".into(), port: 8080, cors_origin: "*".into() }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub workdir: PathBuf,
    pub seed: u64,
    pub namespace: String,
    pub ingest: IngestSection,
    pub translate: TranslateSection,
    pub extract: ExtractSection,
    pub map: MapSection,
    pub mine: MiningConfig,
    pub embed: EmbedSection,
    pub stages: Stages,
    pub service: ServiceSection,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            workdir: PathBuf::from("work"),
            seed: 7,
            namespace: DEFAULT_LOCAL_NAMESPACE.into(),
            ingest: IngestSection::default(),
            translate: TranslateSection::default(),
            extract: ExtractSection::default(),
            map: MapSection::default(),
            mine: MiningConfig::default(),
            embed: EmbedSection::default(),
            stages: Stages::default(),
            service: ServiceSection::default(),
        }
    }
}

fn resolve(base: &Path, p: &mut PathBuf) {
    if p.is_relative() {
        *p = base.join(&*p);
    }
}

impl PipelineConfig {
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut config: PipelineConfig = toml::from_str(text)?;
        resolve(base, &mut config.workdir);
        for p in [
            config.ingest.manifest.as_mut(),
            config.translate.lexicon.as_mut(),
            config.extract.gazetteer.as_mut(),
            config.extract.stoplist.as_mut(),
            config.map.mapping.as_mut(),
        ]
        .into_iter()
        .flatten()
        {
            resolve(base, p);
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base).with_context(|| format!("invalid config {}", path.display()))
    }

    pub fn layout(&self) -> LayoutConfig {
        LayoutConfig { line_overlap: self.ingest.line_overlap, paragraph_gap: self.ingest.paragraph_gap }
    }

    pub fn walk(&self) -> WalkConfig {
        WalkConfig {
            walks_per_node: self.embed.walks_per_node,
            walk_length: self.embed.walk_length,
            window: self.embed.window,
            seed: self.seed,
        }
    }

    pub fn sgns(&self) -> SgnsConfig {
        SgnsConfig {
            dims: self.embed.dims,
            negatives: self.embed.negatives,
            epochs: self.embed.epochs,
            alpha: self.embed.alpha,
            seed: self.seed,
        }
    }

    /// Checks that every file an enabled stage needs is configured and exists.
    pub fn check_inputs(&self) -> Result<()> {
        let mut missing = Vec::new();
        let mut need = |name: &str, p: &Option<PathBuf>| match p {
            None => missing.push(format!("{name} is not configured")),
            Some(p) if !p.is_file() => missing.push(format!("{name} {} does not exist", p.display())),
            _ => {}
        };
        need("ingest.manifest", &self.ingest.manifest);
        need("map.mapping", &self.map.mapping);
        if self.stages.translate && self.translate.backend == Backend::Dict {
            need("translate.lexicon", &self.translate.lexicon);
        }
        for (name, p) in [("extract.gazetteer", &self.extract.gazetteer), ("extract.stoplist", &self.extract.stoplist)]
        {
            if p.is_some() {
                need(name, p);
            }
        }
        if !missing.is_empty() {
            bail!("{}", missing.join("; "));
        }
        self.mine.validate()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_paths_follow_the_config_file() {
        let c = PipelineConfig::parse(
            "workdir = \"out\"\nseed = 3\n[ingest]\nmanifest = \"m.json\"\n[mine]\nmax_len = 2\n",
            Path::new("/etc/kg"),
        )
        .unwrap();
        assert_eq!(c.workdir, PathBuf::from("/etc/kg/out"));
        assert_eq!(c.ingest.manifest, Some(PathBuf::from("/etc/kg/m.json")));
        assert_eq!(c.mine.max_len, 2);
        assert_eq!(c.mine.min_support, MiningConfig::default().min_support);
        assert_eq!(c.sgns().seed, 3);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(PipelineConfig::parse("[mine]\nmax_length = 2\n", Path::new(".")).is_err());
    }

    #[test]
    fn missing_inputs_are_listed() {
        let err = PipelineConfig::default().check_inputs().unwrap_err().to_string();
        assert!(err.contains("ingest.manifest") && err.contains("map.mapping"), "{err}");
    }
}
