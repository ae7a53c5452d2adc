//! Fixture locations and helpers for running the pipeline and the binary.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

use metakg::config::PipelineConfig;
use metakg::pipeline::Pipeline;

pub fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

pub fn fixture_config() -> PathBuf {
    repo_root().join("fixtures/corpus/fixture.toml")
}

/// Fresh, empty directory under the cargo test scratch area.
pub fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    if dir.exists() {
        std::fs::remove_dir_all(&dir).unwrap();
    }
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Fixture pipeline configuration writing into `workdir`.
pub fn fixture_pipeline(workdir: &Path) -> Pipeline {
    let mut config = PipelineConfig::load(&fixture_config()).unwrap();
    config.workdir = workdir.to_path_buf();
    Pipeline::new(config).unwrap()
}

/// Working directory holding one complete fixture run, shared by the tests
/// of one test binary.
pub fn fixture_workdir(name: &str) -> &'static Path {
    static DIR: OnceLock<PathBuf> = OnceLock::new();
    DIR.get_or_init(|| {
        let dir = scratch(name);
        fixture_pipeline(&dir).all().unwrap();
        dir
    })
}

pub fn metakg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metakg")).args(args).output().unwrap()
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
