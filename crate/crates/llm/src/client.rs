//! Chat-completion querying with retries and an on-disk response cache.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    /// First backoff; doubles on every further attempt.
    pub backoff_base_ms: u64,
    pub backoff_max_ms: u64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self { max_attempts: 4, backoff_base_ms: 500, backoff_max_ms: 30_000 }
    }
}

impl RetryPolicy {
    pub fn delay(&self, attempt: u32) -> Duration {
        let factor = 1u64.checked_shl(attempt.saturating_sub(1)).unwrap_or(u64::MAX);
        Duration::from_millis(self.backoff_base_ms.saturating_mul(factor).min(self.backoff_max_ms))
    }
}

/// Which backend serves a model preset.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendKind {
    #[default]
    Http,
    /// Answers every game with its truth groups.
    TruthEcho,
    /// Answers with a seeded random partition of the pool.
    RandomGroups,
    /// Always returns `canned_text`.
    Canned,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelConfig {
    pub kind: BackendKind,
    /// Chat-completions URL, e.g. `https://api.openai.com/v1/chat/completions`.
    pub endpoint: String,
    pub model: String,
    /// Name of the environment variable holding the API key.
    pub api_key_env: Option<String>,
    pub temperature: Option<f64>,
    pub top_p: Option<f64>,
    pub top_k: Option<u32>,
    pub max_tokens: Option<u32>,
    pub retry: RetryPolicy,
    pub parallelism: usize,
    pub timeout_secs: u64,
    pub mock_seed: u64,
    pub canned_text: Option<String>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            kind: BackendKind::Http,
            endpoint: String::new(),
            model: String::new(),
            api_key_env: None,
            temperature: None,
            top_p: None,
            top_k: None,
            max_tokens: None,
            retry: RetryPolicy::default(),
            parallelism: 1,
            timeout_secs: 120,
            mock_seed: 0,
            canned_text: None,
        }
    }
}

impl ModelConfig {
    pub fn mock(kind: BackendKind, model: &str) -> Self {
        Self { kind, model: model.to_string(), ..Self::default() }
    }

    /// Sampling defaults used for the open 8B instruct models.
    pub fn open_model_preset(endpoint: &str, model: &str) -> Self {
        Self {
            endpoint: endpoint.to_string(),
            model: model.to_string(),
            temperature: Some(0.6),
            top_p: Some(0.9),
            top_k: Some(50),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.parallelism < 1 {
            return Err("parallelism must be at least 1".into());
        }
        if self.retry.max_attempts < 1 {
            return Err("retry.max_attempts must be at least 1".into());
        }
        if self.kind == BackendKind::Http && self.endpoint.is_empty() {
            return Err("http backend needs an endpoint".into());
        }
        Ok(())
    }

    /// Stable hash of everything that determines the completion: model,
    /// sampling settings, prompt, and a caller-chosen salt.
    pub fn fingerprint(&self, prompt: &str, salt: &str) -> String {
        let canonical = json!({
            "kind": self.kind,
            "model": self.model,
            "temperature": self.temperature,
            "top_p": self.top_p,
            "top_k": self.top_k,
            "max_tokens": self.max_tokens,
            "mock_seed": self.mock_seed,
            "prompt": prompt,
            "salt": salt,
        });
        hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
    }
}

/// One failed call to a backend.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CallError {
    #[error("HTTP {code}: {body}")]
    Status { code: u16, body: String },
    #[error("transport: {0}")]
    Transport(String),
    #[error("malformed reply: {0}")]
    Malformed(String),
    #[error("authentication: {0}")]
    Auth(String),
}

impl CallError {
    pub fn is_retryable(&self) -> bool {
        match self {
            CallError::Status { code, .. } => *code == 408 || *code == 429 || *code >= 500,
            CallError::Transport(_) => true,
            CallError::Malformed(_) | CallError::Auth(_) => false,
        }
    }
}

#[derive(Debug, Error)]
pub enum LlmError {
    #[error("authentication failed: {0}")]
    Auth(String),
    #[error("gave up after {attempts} attempts: {last}")]
    Exhausted { attempts: u32, last: CallError },
    #[error(transparent)]
    Call(CallError),
    #[error("cache {path}: {source}")]
    Cache {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Something that turns a prompt into completion text.
pub trait ChatBackend: Send + Sync {
    fn complete(&self, cfg: &ModelConfig, prompt: &str) -> Result<String, CallError>;
}

/// A completion kept verbatim for audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawResponse {
    pub game_id: String,
    pub fingerprint: String,
    pub text: String,
    pub latency_ms: u64,
    pub attempts: u32,
}

/// Sends `prompt`, retrying transient failures with exponential backoff.
/// Authentication failures and other client errors are not retried.
pub fn query_model(
    backend: &dyn ChatBackend,
    cfg: &ModelConfig,
    game_id: &str,
    prompt: &str,
    salt: &str,
) -> Result<RawResponse, LlmError> {
    let start = Instant::now();
    let max = cfg.retry.max_attempts.max(1);
    let mut attempt = 0;
    loop {
        attempt += 1;
        match backend.complete(cfg, prompt) {
            Ok(text) => {
                return Ok(RawResponse {
                    game_id: game_id.to_string(),
                    fingerprint: cfg.fingerprint(prompt, salt),
                    text,
                    latency_ms: start.elapsed().as_millis() as u64,
                    attempts: attempt,
                })
            }
            Err(CallError::Auth(msg)) => return Err(LlmError::Auth(msg)),
            Err(CallError::Status { code, body }) if code == 401 || code == 403 => {
                return Err(LlmError::Auth(format!("HTTP {code}: {body}")))
            }
            Err(e) if e.is_retryable() && attempt < max => std::thread::sleep(cfg.retry.delay(attempt)),
            Err(e) if e.is_retryable() => return Err(LlmError::Exhausted { attempts: attempt, last: e }),
            Err(e) => return Err(LlmError::Call(e)),
        }
    }
}

/// Content-addressed store of responses, one JSON file per fingerprint.
#[derive(Debug, Clone)]
pub struct ResponseCache {
    dir: PathBuf,
}

impl ResponseCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self, LlmError> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|source| LlmError::Cache { path: dir.clone(), source })?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, fingerprint: &str) -> PathBuf {
        self.dir.join(format!("{fingerprint}.json"))
    }

    pub fn get(&self, fingerprint: &str) -> Option<RawResponse> {
        let text = std::fs::read_to_string(self.path(fingerprint)).ok()?;
        serde_json::from_str(&text).ok()
    }

    /// Writes through a temporary file and rename so readers never see a
    /// partial entry.
    pub fn put(&self, response: &RawResponse) -> Result<(), LlmError> {
        let path = self.path(&response.fingerprint);
        let tmp = self.dir.join(format!(".{}.tmp", response.fingerprint));
        let err = |source| LlmError::Cache { path: path.clone(), source };
        let text = serde_json::to_string_pretty(response).expect("response serializes");
        std::fs::write(&tmp, text).map_err(err)?;
        std::fs::rename(&tmp, &path).map_err(err)
    }
}

/// A model preset bound to its backend and optional cache.
#[derive(Clone)]
pub struct ModelClient {
    pub name: String,
    pub config: ModelConfig,
    backend: Arc<dyn ChatBackend>,
    cache: Option<ResponseCache>,
}

impl std::fmt::Debug for ModelClient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModelClient").field("name", &self.name).field("config", &self.config).finish()
    }
}

impl ModelClient {
    pub fn new(name: impl Into<String>, config: ModelConfig, backend: Arc<dyn ChatBackend>) -> Self {
        Self { name: name.into(), config, backend, cache: None }
    }

    pub fn with_cache(mut self, cache: ResponseCache) -> Self {
        self.cache = Some(cache);
        self
    }

    /// Cached query; the flag reports whether the cache served it.
    pub fn query(&self, game_id: &str, prompt: &str, salt: &str) -> Result<(RawResponse, bool), LlmError> {
        let fingerprint = self.config.fingerprint(prompt, salt);
        if let Some(hit) = self.cache.as_ref().and_then(|c| c.get(&fingerprint)) {
            return Ok((hit, true));
        }
        let response = query_model(self.backend.as_ref(), &self.config, game_id, prompt, salt)?;
        if let Some(cache) = &self.cache {
            cache.put(&response)?;
        }
        Ok((response, false))
    }

    pub fn is_cached(&self, prompt: &str, salt: &str) -> bool {
        let fp = self.config.fingerprint(prompt, salt);
        self.cache.as_ref().is_some_and(|c| c.get(&fp).is_some())
    }
}

/// Backend speaking the chat-completions JSON protocol over HTTP.
pub struct HttpBackend {
    agent: ureq::Agent,
}

impl HttpBackend {
    pub fn new(timeout: Duration) -> Self {
        let config = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(timeout))
            .build();
        Self { agent: config.into() }
    }

    pub fn request_body(cfg: &ModelConfig, prompt: &str) -> serde_json::Value {
        let mut body = json!({
            "model": cfg.model,
            "messages": [{"role": "user", "content": prompt}],
        });
        let obj = body.as_object_mut().expect("object");
        if let Some(t) = cfg.temperature {
            obj.insert("temperature".into(), json!(t));
        }
        if let Some(p) = cfg.top_p {
            obj.insert("top_p".into(), json!(p));
        }
        if let Some(k) = cfg.top_k {
            obj.insert("top_k".into(), json!(k));
        }
        if let Some(m) = cfg.max_tokens {
            obj.insert("max_tokens".into(), json!(m));
        }
        body
    }
}

impl ChatBackend for HttpBackend {
    fn complete(&self, cfg: &ModelConfig, prompt: &str) -> Result<String, CallError> {
        let mut request = self.agent.post(&cfg.endpoint).header("Content-Type", "application/json");
        if let Some(var) = &cfg.api_key_env {
            let key = std::env::var(var).map_err(|_| CallError::Auth(format!("environment variable {var} not set")))?;
            request = request.header("Authorization", &format!("Bearer {key}"));
        }
        let mut response = request
            .send_json(Self::request_body(cfg, prompt))
            .map_err(|e| CallError::Transport(e.to_string()))?;
        let code = response.status().as_u16();
        let body = response.body_mut().read_to_string().map_err(|e| CallError::Transport(e.to_string()))?;
        if !(200..300).contains(&code) {
            return Err(CallError::Status { code, body });
        }
        let value: serde_json::Value = serde_json::from_str(&body).map_err(|e| CallError::Malformed(e.to_string()))?;
        value["choices"][0]["message"]["content"]
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| CallError::Malformed("missing choices[0].message.content".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backoff_doubles_and_caps() {
        let p = RetryPolicy { max_attempts: 5, backoff_base_ms: 100, backoff_max_ms: 350 };
        assert_eq!(p.delay(1), Duration::from_millis(100));
        assert_eq!(p.delay(2), Duration::from_millis(200));
        assert_eq!(p.delay(3), Duration::from_millis(350));
        assert_eq!(p.delay(80), Duration::from_millis(350));
    }

    #[test]
    fn fingerprint_depends_on_sampling() {
        let a = ModelConfig::mock(BackendKind::Canned, "m");
        let mut b = a.clone();
        assert_eq!(a.fingerprint("p", ""), b.fingerprint("p", ""));
        b.temperature = Some(0.6);
        assert_ne!(a.fingerprint("p", ""), b.fingerprint("p", ""));
        assert_ne!(a.fingerprint("p", ""), a.fingerprint("p", "retry"));
        assert_eq!(a.fingerprint("p", "").len(), 64);
    }

    #[test]
    fn request_body_shape() {
        let cfg = ModelConfig::open_model_preset("http://x", "llama");
        let body = HttpBackend::request_body(&cfg, "hi");
        assert_eq!(body["messages"][0]["role"], "user");
        assert_eq!(body["messages"][0]["content"], "hi");
        assert_eq!(body["temperature"], 0.6);
        assert_eq!(body["top_k"], 50);
    }

    #[test]
    fn config_validation() {
        let mut cfg = ModelConfig::mock(BackendKind::Canned, "m");
        assert!(cfg.validate().is_ok());
        cfg.parallelism = 0;
        assert!(cfg.validate().is_err());
        let cfg = ModelConfig::default();
        assert!(cfg.validate().is_err());
    }
}
