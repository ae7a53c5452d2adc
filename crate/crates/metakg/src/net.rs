//! Network backends: document fetching and the external MT service.

use std::time::Duration;

use metakg_core::ingest::Fetcher;
use metakg_core::translate::Translator;
use serde::{Deserialize, Serialize};

const USER_AGENT: &str = concat!("metakg/", env!("CARGO_PKG_VERSION"));

fn agent(timeout: Duration) -> ureq::Agent {
    ureq::Agent::config_builder().timeout_global(Some(timeout)).user_agent(USER_AGENT).build().into()
}

pub struct HttpFetcher {
    agent: ureq::Agent,
}

impl HttpFetcher {
    pub fn new(timeout: Duration) -> Self {
        HttpFetcher { agent: agent(timeout) }
    }
}

impl Default for HttpFetcher {
    fn default() -> Self {
        Self::new(Duration::from_secs(60))
    }
}

impl Fetcher for HttpFetcher {
    fn fetch(&self, url: &str) -> Result<Vec<u8>, String> {
        let mut resp = self.agent.get(url).call().map_err(|e| e.to_string())?;
        resp.body_mut().with_config().limit(64 * 1024 * 1024).read_to_vec().map_err(|e| e.to_string())
    }
}

#[derive(Serialize)]
struct MtRequest<'a> {
    text: &'a str,
    source: &'a str,
    target: &'a str,
}

#[derive(Deserialize)]
struct MtResponse {
    translation: String,
}

/// Client for a JSON MT endpoint: POST `{text, source, target}`, expects
/// `{translation}`. The key, when set, is sent as a bearer token.
pub struct HttpTranslator {
    endpoint: String,
    api_key: Option<String>,
    agent: ureq::Agent,
}

impl HttpTranslator {
    pub fn new(endpoint: &str, api_key: Option<String>) -> Self {
        HttpTranslator { endpoint: endpoint.to_string(), api_key, agent: agent(Duration::from_secs(30)) }
    }

    /// Reads `MT_ENDPOINT` and `MT_API_KEY`.
    pub fn from_env() -> Result<Self, String> {
        let endpoint = std::env::var("MT_ENDPOINT").map_err(|_| "MT_ENDPOINT is not set".to_string())?;
        Ok(Self::new(&endpoint, std::env::var("MT_API_KEY").ok()))
    }
}

impl Translator for HttpTranslator {
    fn translate(&self, text: &str, source: &str, target: &str) -> Result<String, String> {
        let mut req = self.agent.post(&self.endpoint);
        if let Some(key) = &self.api_key {
            req = req.header("Authorization", &format!("Bearer {key}"));
        }
        let mut resp = req.send_json(MtRequest { text, source, target }).map_err(|e| e.to_string())?;
        let body: MtResponse = resp.body_mut().read_json().map_err(|e| e.to_string())?;
        Ok(body.translation)
    }
}
