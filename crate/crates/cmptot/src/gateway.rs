//! Chat-completions transport: request construction, retries, response
//! parsing, token accounting, response caching, and deterministic
//! record/replay for hermetic tests.
//!
//! The wire format is an OpenAI-compatible `POST /v1/chat/completions`.
//! Replay mode serves responses from a cassette and never opens a
//! connection; a cassette miss is a hard error so tests stay hermetic.
//! Repeated identical requests are distinct cassette entries consumed in
//! order, which preserves the independence of repeated comparison votes.

use std::collections::{HashMap, VecDeque};
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Condvar, Mutex};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub role: Role,
    pub content: String,
}

impl Message {
    pub fn system(content: impl Into<String>) -> Self {
        Self { role: Role::System, content: content.into() }
    }

    pub fn user(content: impl Into<String>) -> Self {
        Self { role: Role::User, content: content.into() }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        Self { role: Role::Assistant, content: content.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub model: String,
    pub messages: Vec<Message>,
    pub temperature: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_tokens: Option<u32>,
}

impl ChatRequest {
    pub fn new(model: impl Into<String>, messages: Vec<Message>) -> Result<Self, GatewayError> {
        if messages.is_empty() {
            return Err(GatewayError::EmptyRequest);
        }
        Ok(Self { model: model.into(), messages, temperature: 0.7, max_tokens: None })
    }

    pub fn with_temperature(mut self, t: f64) -> Self {
        self.temperature = t;
        self
    }

    pub fn with_max_tokens(mut self, n: u32) -> Self {
        self.max_tokens = Some(n);
        self
    }
}

/// First-choice text plus usage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatOutcome {
    pub text: String,
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

/// Stable digest of (model, messages, temperature, max_tokens); the
/// serialization is field-ordered, so message order matters.
pub fn cache_key(req: &ChatRequest) -> String {
    let bytes = serde_json::to_vec(req).expect("request serializes");
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    hex::encode(hasher.finalize())
}

/// Running token totals for one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UsageLedger {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

impl UsageLedger {
    pub fn add(&mut self, prompt: u64, completion: u64) {
        self.prompt_tokens += prompt;
        self.completion_tokens += completion;
    }

    pub fn cost(&self, prices: &Prices) -> f64 {
        self.prompt_tokens as f64 * prices.prompt_per_token
            + self.completion_tokens as f64 * prices.completion_per_token
    }
}

/// Per-token prices are config inputs, not constants, so cost-per-case
/// reports stay computable for any provider.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prices {
    pub prompt_per_token: f64,
    pub completion_per_token: f64,
}

impl Default for Prices {
    fn default() -> Self {
        Self { prompt_per_token: 0.0, completion_per_token: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetryPolicy {
    pub max_retries: u32,
    pub base_delay_ms: u64,
    pub max_delay_ms: u64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self { max_retries: 3, base_delay_ms: 200, max_delay_ms: 5_000 }
    }
}

impl RetryPolicy {
    fn delay(&self, attempt: u32) -> Duration {
        let ms = self.base_delay_ms.saturating_mul(1u64 << attempt.min(20));
        Duration::from_millis(ms.min(self.max_delay_ms))
    }
}

#[derive(Debug, Error)]
pub enum GatewayError {
    #[error("request must contain at least one message")]
    EmptyRequest,
    #[error("authentication failed: {0}")]
    Auth(String),
    #[error("rate limited (429), retries exhausted")]
    RateLimited,
    #[error("server returned status {status}: {body}")]
    Http { status: u16, body: String },
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("malformed response: {0}")]
    MalformedResponse(String),
    #[error("cassette has no entry left for key {key}")]
    CassetteMiss { key: String },
    #[error("cassette I/O error at {path}: {source}")]
    CassetteIo {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cassette parse error at {path}:{line}: {reason}")]
    CassetteParse { path: String, line: usize, reason: String },
}

impl GatewayError {
    fn retryable(&self) -> bool {
        matches!(
            self,
            GatewayError::RateLimited
                | GatewayError::Transport(_)
                | GatewayError::Http { status: 500..=599, .. }
        )
    }
}

/// One recorded exchange.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CassetteEntry {
    pub key: String,
    pub request: ChatRequest,
    pub response: ChatOutcome,
}

/// Recorded exchanges keyed by request digest; identical requests form a
/// queue and replay in recording order.
#[derive(Debug, Default)]
pub struct Cassette {
    queues: HashMap<String, VecDeque<ChatOutcome>>,
    entries: usize,
}

impl Cassette {
    pub fn load(path: &Path) -> Result<Self, GatewayError> {
        let text = std::fs::read_to_string(path).map_err(|source| GatewayError::CassetteIo {
            path: path.display().to_string(),
            source,
        })?;
        let mut cassette = Cassette::default();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let entry: CassetteEntry =
                serde_json::from_str(line).map_err(|e| GatewayError::CassetteParse {
                    path: path.display().to_string(),
                    line: i + 1,
                    reason: e.to_string(),
                })?;
            cassette.queues.entry(entry.key).or_default().push_back(entry.response);
            cassette.entries += 1;
        }
        Ok(cassette)
    }

    pub fn len(&self) -> usize {
        self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries == 0
    }

    fn take(&mut self, key: &str) -> Option<ChatOutcome> {
        let out = self.queues.get_mut(key)?.pop_front();
        if out.is_some() {
            self.entries -= 1;
        }
        out
    }
}

struct HttpBackend {
    base_url: String,
    api_key: String,
    agent: ureq::Agent,
}

#[derive(Debug, Deserialize)]
struct WireChoiceMessage {
    content: String,
}

#[derive(Debug, Deserialize)]
struct WireChoice {
    message: WireChoiceMessage,
}

#[derive(Debug, Deserialize, Default)]
struct WireUsage {
    #[serde(default)]
    prompt_tokens: u64,
    #[serde(default)]
    completion_tokens: u64,
}

#[derive(Debug, Deserialize)]
struct WireResponse {
    choices: Vec<WireChoice>,
    #[serde(default)]
    usage: WireUsage,
}

impl HttpBackend {
    fn call_once(&self, req: &ChatRequest) -> Result<ChatOutcome, GatewayError> {
        let url = format!("{}/v1/chat/completions", self.base_url.trim_end_matches('/'));
        let response = self
            .agent
            .post(&url)
            .set("Authorization", &format!("Bearer {}", self.api_key))
            .set("Content-Type", "application/json")
            .send_json(req);
        let response = match response {
            Ok(r) => r,
            Err(ureq::Error::Status(401 | 403, resp)) => {
                let body = resp.into_string().unwrap_or_default();
                return Err(GatewayError::Auth(body));
            }
            Err(ureq::Error::Status(429, _)) => return Err(GatewayError::RateLimited),
            Err(ureq::Error::Status(status, resp)) => {
                let body = resp.into_string().unwrap_or_default();
                return Err(GatewayError::Http { status, body });
            }
            Err(ureq::Error::Transport(t)) => return Err(GatewayError::Transport(t.to_string())),
        };
        let wire: WireResponse = response
            .into_json()
            .map_err(|e| GatewayError::MalformedResponse(e.to_string()))?;
        let first = wire
            .choices
            .into_iter()
            .next()
            .ok_or_else(|| GatewayError::MalformedResponse("no choices".into()))?;
        Ok(ChatOutcome {
            text: first.message.content,
            prompt_tokens: wire.usage.prompt_tokens,
            completion_tokens: wire.usage.completion_tokens,
        })
    }

    fn call(&self, req: &ChatRequest, retry: &RetryPolicy) -> Result<ChatOutcome, GatewayError> {
        let mut attempt = 0;
        loop {
            match self.call_once(req) {
                Ok(out) => return Ok(out),
                Err(err) if err.retryable() && attempt < retry.max_retries => {
                    std::thread::sleep(retry.delay(attempt));
                    attempt += 1;
                }
                Err(err) => return Err(err),
            }
        }
    }
}

enum ModeState {
    Live(HttpBackend),
    Replay(Mutex<Cassette>),
    Record { http: HttpBackend, writer: Mutex<BufWriter<File>>, path: String },
}

struct Limiter {
    permits: Mutex<usize>,
    cv: Condvar,
}

impl Limiter {
    fn acquire(&self) {
        let mut permits = self.permits.lock().unwrap();
        while *permits == 0 {
            permits = self.cv.wait(permits).unwrap();
        }
        *permits -= 1;
    }

    fn release(&self) {
        *self.permits.lock().unwrap() += 1;
        self.cv.notify_one();
    }
}

/// Transport to a chat-completion service with a shared, contention-safe
/// usage ledger. Safe for concurrent in-flight requests; the configurable
/// limit bounds concurrency.
pub struct Gateway {
    mode: ModeState,
    retry: RetryPolicy,
    cache_enabled: bool,
    force_cache: bool,
    cache: Mutex<HashMap<String, ChatOutcome>>,
    ledger: Mutex<UsageLedger>,
    limiter: Option<Limiter>,
    in_flight: AtomicUsize,
    peak_in_flight: AtomicUsize,
}

impl Gateway {
    fn with_mode(mode: ModeState) -> Self {
        Self {
            mode,
            retry: RetryPolicy::default(),
            cache_enabled: false,
            force_cache: false,
            cache: Mutex::new(HashMap::new()),
            ledger: Mutex::new(UsageLedger::default()),
            limiter: None,
            in_flight: AtomicUsize::new(0),
            peak_in_flight: AtomicUsize::new(0),
        }
    }

    pub fn live(base_url: impl Into<String>, api_key: impl Into<String>) -> Self {
        Self::with_mode(ModeState::Live(HttpBackend {
            base_url: base_url.into(),
            api_key: api_key.into(),
            agent: ureq::Agent::new(),
        }))
    }

    /// Replay from a cassette; never touches the network.
    pub fn replay(cassette_path: &Path) -> Result<Self, GatewayError> {
        let cassette = Cassette::load(cassette_path)?;
        Ok(Self::with_mode(ModeState::Replay(Mutex::new(cassette))))
    }

    /// Live transport that appends every exchange to a cassette file.
    pub fn record(
        base_url: impl Into<String>,
        api_key: impl Into<String>,
        cassette_path: &Path,
    ) -> Result<Self, GatewayError> {
        let file = OpenOptions::new().create(true).append(true).open(cassette_path).map_err(
            |source| GatewayError::CassetteIo {
                path: cassette_path.display().to_string(),
                source,
            },
        )?;
        Ok(Self::with_mode(ModeState::Record {
            http: HttpBackend {
                base_url: base_url.into(),
                api_key: api_key.into(),
                agent: ureq::Agent::new(),
            },
            writer: Mutex::new(BufWriter::new(file)),
            path: cassette_path.display().to_string(),
        }))
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    /// Enables the response cache. Only temperature-0 requests are served
    /// from cache so sampled outputs stay independent.
    pub fn with_cache(mut self, enabled: bool) -> Self {
        self.cache_enabled = enabled;
        self
    }

    /// Caches even at temperature > 0. Off unless explicitly forced.
    pub fn with_force_cache(mut self, force: bool) -> Self {
        self.force_cache = force;
        self
    }

    pub fn with_concurrency_limit(mut self, limit: usize) -> Self {
        self.limiter = Some(Limiter { permits: Mutex::new(limit.max(1)), cv: Condvar::new() });
        self
    }

    pub fn ledger(&self) -> UsageLedger {
        *self.ledger.lock().unwrap()
    }

    /// Highest number of simultaneously in-flight requests observed.
    pub fn peak_in_flight(&self) -> usize {
        self.peak_in_flight.load(Ordering::Relaxed)
    }

    fn cacheable(&self, req: &ChatRequest) -> bool {
        self.cache_enabled && (req.temperature == 0.0 || self.force_cache)
    }

    pub fn chat(&self, req: &ChatRequest) -> Result<ChatOutcome, GatewayError> {
        if req.messages.is_empty() {
            return Err(GatewayError::EmptyRequest);
        }
        let key = cache_key(req);
        if self.cacheable(req) {
            if let Some(hit) = self.cache.lock().unwrap().get(&key) {
                // Cache hits cost no tokens and do not touch the ledger.
                return Ok(hit.clone());
            }
        }

        if let Some(limiter) = &self.limiter {
            limiter.acquire();
        }
        let now = self.in_flight.fetch_add(1, Ordering::SeqCst) + 1;
        self.peak_in_flight.fetch_max(now, Ordering::SeqCst);

        let result = self.dispatch(&key, req);

        self.in_flight.fetch_sub(1, Ordering::SeqCst);
        if let Some(limiter) = &self.limiter {
            limiter.release();
        }

        let outcome = result?;
        self.ledger.lock().unwrap().add(outcome.prompt_tokens, outcome.completion_tokens);
        if self.cacheable(req) {
            self.cache.lock().unwrap().insert(key, outcome.clone());
        }
        Ok(outcome)
    }

    fn dispatch(&self, key: &str, req: &ChatRequest) -> Result<ChatOutcome, GatewayError> {
        match &self.mode {
            ModeState::Live(http) => http.call(req, &self.retry),
            ModeState::Replay(cassette) => cassette
                .lock()
                .unwrap()
                .take(key)
                .ok_or_else(|| GatewayError::CassetteMiss { key: key.to_string() }),
            ModeState::Record { http, writer, path } => {
                let outcome = http.call(req, &self.retry)?;
                let entry = CassetteEntry {
                    key: key.to_string(),
                    request: req.clone(),
                    response: outcome.clone(),
                };
                let mut w = writer.lock().unwrap();
                let io_err = |source| GatewayError::CassetteIo { path: path.clone(), source };
                serde_json::to_writer(&mut *w, &entry)
                    .map_err(|e| io_err(std::io::Error::other(e)))?;
                w.write_all(b"\n").map_err(io_err)?;
                w.flush().map_err(io_err)?;
                Ok(outcome)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(text: &str) -> ChatRequest {
        ChatRequest::new("test-model", vec![Message::user(text)]).unwrap()
    }

    #[test]
    fn cache_key_properties() {
        let a = req("hello");
        assert_eq!(cache_key(&a), cache_key(&a.clone()));
        assert_ne!(cache_key(&a), cache_key(&req("world")));
        assert_ne!(cache_key(&a), cache_key(&a.clone().with_temperature(0.0)));
        let two = ChatRequest::new(
            "test-model",
            vec![Message::user("a"), Message::user("b")],
        )
        .unwrap();
        let swapped = ChatRequest::new(
            "test-model",
            vec![Message::user("b"), Message::user("a")],
        )
        .unwrap();
        assert_ne!(cache_key(&two), cache_key(&swapped));
    }

    #[test]
    fn empty_request_rejected() {
        assert!(matches!(
            ChatRequest::new("m", vec![]),
            Err(GatewayError::EmptyRequest)
        ));
    }

    #[test]
    fn ledger_accounting() {
        let mut ledger = UsageLedger::default();
        ledger.add(10, 5);
        ledger.add(10, 5);
        assert_eq!(ledger.prompt_tokens, 20);
        assert_eq!(ledger.completion_tokens, 10);
        let prices = Prices { prompt_per_token: 0.001, completion_per_token: 0.002 };
        assert!((ledger.cost(&prices) - 0.04).abs() < 1e-12);
    }

    #[test]
    fn replay_serves_in_order_and_misses_hard() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let r = req("same");
        let key = cache_key(&r);
        let mut lines = String::new();
        for i in 0..2 {
            let entry = CassetteEntry {
                key: key.clone(),
                request: r.clone(),
                response: ChatOutcome {
                    text: format!("reply {i}"),
                    prompt_tokens: 10,
                    completion_tokens: 5,
                },
            };
            lines.push_str(&serde_json::to_string(&entry).unwrap());
            lines.push('\n');
        }
        std::fs::write(&path, lines).unwrap();

        let gw = Gateway::replay(&path).unwrap();
        assert_eq!(gw.chat(&r).unwrap().text, "reply 0");
        assert_eq!(gw.chat(&r).unwrap().text, "reply 1");
        // Identical requests are independent recordings; a third call has
        // nothing left and must fail hermetically.
        assert!(matches!(gw.chat(&r), Err(GatewayError::CassetteMiss { .. })));
        let ledger = gw.ledger();
        assert_eq!((ledger.prompt_tokens, ledger.completion_tokens), (20, 10));
    }

    #[test]
    fn replay_unknown_key_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        std::fs::write(&path, "").unwrap();
        let gw = Gateway::replay(&path).unwrap();
        assert!(matches!(gw.chat(&req("x")), Err(GatewayError::CassetteMiss { .. })));
    }

    #[test]
    fn retry_delays_are_capped() {
        let p = RetryPolicy { max_retries: 10, base_delay_ms: 100, max_delay_ms: 500 };
        assert_eq!(p.delay(0), Duration::from_millis(100));
        assert_eq!(p.delay(1), Duration::from_millis(200));
        assert_eq!(p.delay(4), Duration::from_millis(500));
        assert_eq!(p.delay(20), Duration::from_millis(500));
    }

    #[test]
    fn retryable_classification() {
        assert!(GatewayError::RateLimited.retryable());
        assert!(GatewayError::Transport("t".into()).retryable());
        assert!(GatewayError::Http { status: 503, body: String::new() }.retryable());
        assert!(!GatewayError::Http { status: 400, body: String::new() }.retryable());
        assert!(!GatewayError::Auth("no".into()).retryable());
    }
}
