//! Dutch to English translation behind a pluggable backend with a persistent cache.

mod cache;
mod dictionary;

use std::time::Duration;

use thiserror::Error;

pub use cache::{cache_key, TranslationCache, CACHE_FILE};
pub use dictionary::DictionaryTranslator;

use crate::ingest::DescriptionDocument;

#[derive(Debug, Error)]
pub enum TranslateError {
    #[error("text to translate is empty")]
    EmptyText,
    #[error("source and target language are both {0:?}")]
    SameLanguage(String),
    #[error("backend failed after {attempts} attempts: {message}")]
    Backend { attempts: u32, message: String },
    #[error("{context}: {source}")]
    Document {
        context: String,
        #[source]
        source: Box<TranslateError>,
    },
    #[error("lexicon line {line}: {message}")]
    Lexicon { line: usize, message: String },
    #[error("translation cache {path}: {message}")]
    Cache { path: String, message: String },
}

/// A translation engine. Implementations return an error string on failure;
/// retrying is handled by the caller.
pub trait Translator {
    fn translate(&self, text: &str, source: &str, target: &str) -> Result<String, String>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationRequest {
    pub text: String,
    pub source_lang: String,
    pub target_lang: String,
}

impl TranslationRequest {
    pub fn nl_en(text: &str) -> Self {
        TranslationRequest { text: text.to_string(), source_lang: "nl".into(), target_lang: "en".into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub retries: u32,
    /// Delay before the first retry; doubled for each further retry.
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy { retries: 3, base_delay: Duration::from_secs(1) }
    }
}

/// Looks the request up in the cache, calling the backend only on a miss.
pub fn translate(
    req: &TranslationRequest,
    backend: &dyn Translator,
    cache: &mut TranslationCache,
    retry: &RetryPolicy,
) -> Result<String, TranslateError> {
    if req.text.trim().is_empty() {
        return Err(TranslateError::EmptyText);
    }
    if req.source_lang == req.target_lang {
        return Err(TranslateError::SameLanguage(req.source_lang.clone()));
    }
    if let Some(hit) = cache.get(&req.source_lang, &req.target_lang, &req.text) {
        return Ok(hit.to_string());
    }
    let mut attempt = 0;
    let translated = loop {
        attempt += 1;
        match backend.translate(&req.text, &req.source_lang, &req.target_lang) {
            Ok(t) => break t,
            Err(message) if attempt > retry.retries => {
                return Err(TranslateError::Backend { attempts: attempt, message });
            }
            Err(message) => {
                let delay = retry.base_delay * 2u32.pow(attempt - 1);
                log::warn!("translation attempt {attempt} failed ({message}), retrying in {delay:?}");
                std::thread::sleep(delay);
            }
        }
    };
    cache.insert(&req.source_lang, &req.target_lang, &req.text, &translated);
    Ok(translated)
}

/// Fills the English title, paragraphs and variable labels. Already
/// translated documents are returned unchanged; variable names are kept.
pub fn translate_document(
    doc: &DescriptionDocument,
    backend: &dyn Translator,
    cache: &mut TranslationCache,
    retry: &RetryPolicy,
) -> Result<DescriptionDocument, TranslateError> {
    if doc.is_translated() {
        return Ok(doc.clone());
    }
    let wrap = |context: String| move |e: TranslateError| TranslateError::Document { context, source: Box::new(e) };
    let mut run = |text: &str, context: String| -> Result<String, TranslateError> {
        if text.trim().is_empty() {
            return Ok(String::new());
        }
        translate(&TranslationRequest::nl_en(text), backend, cache, retry).map_err(wrap(context))
    };
    let mut out = doc.clone();
    out.title_en = Some(run(&doc.title_nl, format!("{} title", doc.doc_id))?);
    let mut paragraphs = Vec::with_capacity(doc.paragraphs_nl.len());
    for (i, p) in doc.paragraphs_nl.iter().enumerate() {
        paragraphs.push(run(p, format!("{} paragraph {i}", doc.doc_id))?);
    }
    out.paragraphs_en = Some(paragraphs);
    for v in &mut out.variable_rows {
        v.label_en = Some(run(&v.label_nl, format!("{} variable {}", doc.doc_id, v.name))?);
    }
    Ok(out)
}
