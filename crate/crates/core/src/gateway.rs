//! Evaluation subjects: remote chat-completion endpoints and a deterministic
//! synthetic subject with a planted memorization profile.
//!
//! Remote wire format (request body POSTed to `endpoint`):
//!
//! ```json
//! {"model": "...", "messages": [{"role": "user", "content": "..."}],
//!  "temperature": 0.0, "max_tokens": 2048}
//! ```
//!
//! The completion text is read from `choices[0].message.content`; `usage`
//! (`prompt_tokens`, `completion_tokens`) is recorded when present.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::catalog::{ComplexityInterval, InputKind, TaskId, TaskRole, TaskSpec};
use crate::instance::{ProblemInstance, Split};
use crate::oracle::{self, AnswerValue, CandidateAnswer};
use crate::prompting::{render_answer, PromptKind, PromptRequest};
use crate::seeds;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GatewayError {
    #[error("transport failure after {attempts} attempt(s){}: {message}",
        .status.map(|s| format!(" (last status {s})")).unwrap_or_default())]
    Transport { attempts: u32, status: Option<u16>, message: String },

    #[error("malformed response payload: {0}")]
    Protocol(String),

    #[error("subject configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenUsage {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionRecord {
    pub request: String,
    pub response: String,
    pub latency_ms: u64,
    pub attempts: u32,
    pub usage: Option<TokenUsage>,
}

impl CompletionRecord {
    pub fn request_digest(&self) -> String {
        hex::encode(Sha256::digest(self.request.as_bytes()))
    }
}

pub trait Subject: Send + Sync {
    fn id(&self) -> &str;

    /// Maximum number of requests in flight.
    fn concurrency(&self) -> usize;

    fn complete(&self, prompt: &PromptRequest) -> Result<CompletionRecord, GatewayError>;
}

/// Completes every prompt with at most `cap` in flight; results come back
/// in prompt order.
pub fn complete_batch(
    subject: &dyn Subject,
    prompts: &[PromptRequest],
    cap: usize,
) -> Vec<Result<CompletionRecord, GatewayError>> {
    let cap = cap.max(1).min(prompts.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<CompletionRecord, GatewayError>>>> =
        Mutex::new(vec![None; prompts.len()]);
    std::thread::scope(|scope| {
        for _ in 0..cap {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(prompt) = prompts.get(i) else { break };
                let out = subject.complete(prompt);
                slots.lock().expect("slots lock")[i] = Some(out);
            });
        }
    });
    slots
        .into_inner()
        .expect("slots lock")
        .into_iter()
        .map(|r| r.expect("every prompt completed"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub initial_backoff_ms: u64,
    pub multiplier: f64,
    pub max_backoff_ms: u64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self { max_attempts: 5, initial_backoff_ms: 1000, multiplier: 2.0, max_backoff_ms: 60_000 }
    }
}

impl RetryPolicy {
    /// Delay before attempt `attempt + 1`, given `attempt` failures so far.
    pub fn backoff(&self, attempt: u32) -> Duration {
        let exp = self.multiplier.powi(attempt.saturating_sub(1) as i32);
        let ms = (self.initial_backoff_ms as f64 * exp).min(self.max_backoff_ms as f64);
        Duration::from_millis(ms as u64)
    }
}

fn default_solve_temperature() -> f64 {
    0.0
}
fn default_generate_temperature() -> f64 {
    1.0
}
fn default_max_tokens() -> u32 {
    2048
}
fn default_timeout_secs() -> u64 {
    120
}
fn default_concurrency() -> usize {
    8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemoteConfig {
    pub id: String,
    pub endpoint: String,
    pub model: String,
    /// Name of the environment variable holding the bearer token.
    pub api_key_env: Option<String>,
    #[serde(default = "default_solve_temperature")]
    pub solve_temperature: f64,
    #[serde(default = "default_generate_temperature")]
    pub generate_temperature: f64,
    #[serde(default = "default_max_tokens")]
    pub max_tokens: u32,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
    #[serde(default = "default_concurrency")]
    pub concurrency: usize,
    #[serde(default)]
    pub retry: RetryPolicy,
}

impl RemoteConfig {
    /// Defaults for everything but the endpoint; no credential.
    pub fn new(id: impl Into<String>, endpoint: impl Into<String>, model: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            endpoint: endpoint.into(),
            model: model.into(),
            api_key_env: None,
            solve_temperature: default_solve_temperature(),
            generate_temperature: default_generate_temperature(),
            max_tokens: default_max_tokens(),
            timeout_secs: default_timeout_secs(),
            concurrency: default_concurrency(),
            retry: RetryPolicy::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubjectConfig {
    Remote(RemoteConfig),
    Synthetic(SyntheticConfig),
}

impl SubjectConfig {
    pub fn id(&self) -> &str {
        match self {
            SubjectConfig::Remote(c) => &c.id,
            SubjectConfig::Synthetic(c) => &c.id,
        }
    }

    pub fn build(&self) -> Result<Box<dyn Subject>, GatewayError> {
        Ok(match self {
            SubjectConfig::Remote(c) => Box::new(RemoteSubject::new(c.clone())?),
            SubjectConfig::Synthetic(c) => Box::new(SyntheticSubject::new(c.clone())?),
        })
    }
}

pub struct RemoteSubject {
    config: RemoteConfig,
    api_key: Option<String>,
    client: reqwest::blocking::Client,
    /// Shared "not before" instant set by rate-limit responses.
    gate: Mutex<Option<Instant>>,
}

#[derive(Serialize)]
struct ChatMessage<'a> {
    role: &'a str,
    content: &'a str,
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    messages: [ChatMessage<'a>; 1],
    temperature: f64,
    max_tokens: u32,
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<ChatChoice>,
    usage: Option<TokenUsage>,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: ChatReply,
}

#[derive(Deserialize)]
struct ChatReply {
    content: Option<String>,
}

impl RemoteSubject {
    pub fn new(config: RemoteConfig) -> Result<Self, GatewayError> {
        let api_key = match &config.api_key_env {
            Some(var) => Some(std::env::var(var).map_err(|_| {
                GatewayError::Config(format!("environment variable {var} is not set"))
            })?),
            None => None,
        };
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(config.timeout_secs))
            .build()
            .map_err(|e| GatewayError::Config(e.to_string()))?;
        Ok(Self { config, api_key, client, gate: Mutex::new(None) })
    }

    fn wait_for_gate(&self) {
        let until = *self.gate.lock().expect("gate lock");
        if let Some(t) = until {
            let now = Instant::now();
            if t > now {
                std::thread::sleep(t - now);
            }
        }
    }

    fn hold_gate(&self, delay: Duration) {
        let mut gate = self.gate.lock().expect("gate lock");
        let until = Instant::now() + delay;
        if gate.is_none_or(|g| g < until) {
            *gate = Some(until);
        }
    }
}

fn retry_after(resp: &reqwest::blocking::Response) -> Option<Duration> {
    let v = resp.headers().get(reqwest::header::RETRY_AFTER)?.to_str().ok()?;
    v.trim().parse::<f64>().ok().map(Duration::from_secs_f64)
}

impl Subject for RemoteSubject {
    fn id(&self) -> &str {
        &self.config.id
    }

    fn concurrency(&self) -> usize {
        self.config.concurrency
    }

    fn complete(&self, prompt: &PromptRequest) -> Result<CompletionRecord, GatewayError> {
        let temperature = match prompt.kind {
            PromptKind::Solve => self.config.solve_temperature,
            PromptKind::Generate => self.config.generate_temperature,
        };
        let body = ChatRequest {
            model: &self.config.model,
            messages: [ChatMessage { role: "user", content: &prompt.text }],
            temperature,
            max_tokens: self.config.max_tokens,
        };
        let policy = &self.config.retry;
        let mut last_status = None;
        let mut last_message = String::new();
        let max_attempts = policy.max_attempts.max(1);
        for attempt in 1..=max_attempts {
            self.wait_for_gate();
            let started = Instant::now();
            let mut req = self.client.post(&self.config.endpoint).json(&body);
            if let Some(key) = &self.api_key {
                req = req.bearer_auth(key);
            }
            match req.send() {
                Ok(resp) if resp.status().is_success() => {
                    let text = resp
                        .text()
                        .map_err(|e| GatewayError::Protocol(format!("reading body: {e}")))?;
                    let latency_ms = started.elapsed().as_millis() as u64;
                    let parsed: ChatResponse = serde_json::from_str(&text)
                        .map_err(|e| GatewayError::Protocol(e.to_string()))?;
                    let content = parsed
                        .choices
                        .into_iter()
                        .next()
                        .and_then(|c| c.message.content)
                        .ok_or_else(|| {
                            GatewayError::Protocol("no choices[0].message.content".into())
                        })?;
                    return Ok(CompletionRecord {
                        request: prompt.text.clone(),
                        response: content,
                        latency_ms,
                        attempts: attempt,
                        usage: parsed.usage,
                    });
                }
                Ok(resp) => {
                    let status = resp.status();
                    last_status = Some(status.as_u16());
                    last_message = status.canonical_reason().unwrap_or("error").to_string();
                    let retryable = status.as_u16() == 429
                        || status.as_u16() == 408
                        || status.is_server_error();
                    if !retryable {
                        return Err(GatewayError::Transport {
                            attempts: attempt,
                            status: last_status,
                            message: last_message,
                        });
                    }
                    if attempt < max_attempts {
                        let delay = if status.as_u16() == 429 {
                            retry_after(&resp).unwrap_or_else(|| policy.backoff(attempt))
                        } else {
                            policy.backoff(attempt)
                        };
                        if status.as_u16() == 429 {
                            self.hold_gate(delay);
                        } else {
                            std::thread::sleep(delay);
                        }
                    }
                }
                Err(e) => {
                    last_message = e.to_string();
                    if attempt < max_attempts {
                        std::thread::sleep(policy.backoff(attempt));
                    }
                }
            }
        }
        Err(GatewayError::Transport {
            attempts: max_attempts,
            status: last_status,
            message: last_message,
        })
    }
}

/// Per-level correctness probabilities for a synthetic subject.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemorizationProfile {
    /// Level whose ID-OOD gap is the unique maximum; `None` for flat profiles.
    pub planted_critical_level: Option<ComplexityInterval>,
    /// Indexed by anchor level.
    pub p_id: [f64; 5],
    pub p_ood: [f64; 5],
    /// Planted complexity ordinal (anchor-level index scale) per probe task.
    #[serde(default)]
    pub probe_ordinals: BTreeMap<TaskId, f64>,
    pub seed: u64,
}

impl MemorizationProfile {
    /// A generalization valley: ID accuracy declines gently with level and the
    /// gap is 0.6 at `planted`, 0.1 elsewhere.
    pub fn valley(planted: ComplexityInterval, seed: u64) -> Self {
        let peak = planted.anchor_index().expect("planted level must be an anchor level");
        let p_id = [1.0, 0.95, 0.9, 0.85, 0.8];
        let mut p_ood = [0.0; 5];
        for (i, p) in p_ood.iter_mut().enumerate() {
            *p = p_id[i] - if i == peak { 0.6 } else { 0.1 };
        }
        Self {
            planted_critical_level: Some(planted),
            p_id,
            p_ood,
            probe_ordinals: BTreeMap::new(),
            seed,
        }
    }

    /// Same accuracy on both splits at every level.
    pub fn flat(p: f64, seed: u64) -> Self {
        Self {
            planted_critical_level: None,
            p_id: [p; 5],
            p_ood: [p; 5],
            probe_ordinals: BTreeMap::new(),
            seed,
        }
    }

    pub fn with_probe(mut self, task: TaskId, ordinal: f64) -> Self {
        self.probe_ordinals.insert(task, ordinal);
        self
    }

    pub fn gap(&self, level: usize) -> f64 {
        (self.p_id[level] - self.p_ood[level]).max(0.0)
    }

    pub fn validate(&self) -> Result<(), GatewayError> {
        let bad = |m: String| Err(GatewayError::Config(m));
        for p in self.p_id.iter().chain(&self.p_ood) {
            if !(0.0..=1.0).contains(p) {
                return bad(format!("probability {p} outside [0, 1]"));
            }
        }
        for (t, x) in &self.probe_ordinals {
            if t.spec().role != TaskRole::Probe || !(0.0..=4.0).contains(x) {
                return bad(format!("invalid probe ordinal {x} for {t}"));
            }
        }
        if let Some(level) = self.planted_critical_level {
            let Some(peak) = level.anchor_index() else {
                return bad(format!("{level} is not an anchor level"));
            };
            for i in (0..5).filter(|&i| i != peak) {
                if self.gap(i) >= self.gap(peak) {
                    return bad(format!("gap at {level} is not the unique maximum"));
                }
            }
        }
        Ok(())
    }

    fn curve(&self, split: Split) -> &[f64; 5] {
        match split {
            Split::Ood => &self.p_ood,
            _ => &self.p_id,
        }
    }

    /// Correctness probability for one task on one split. Probe tasks read
    /// the anchor curve at their planted ordinal.
    pub fn probability(&self, task: TaskId, split: Split) -> f64 {
        let curve = self.curve(split);
        let spec = task.spec();
        match spec.complexity.anchor_index() {
            Some(i) if spec.role == TaskRole::Anchor => curve[i],
            _ => {
                let x = self.probe_ordinals.get(&task).copied().unwrap_or(2.0).clamp(0.0, 4.0);
                let lo = x.floor() as usize;
                let hi = (lo + 1).min(4);
                let t = x - lo as f64;
                curve[lo] + (curve[hi] - curve[lo]) * t
            }
        }
    }
}

fn default_familiar_range() -> [u64; 2] {
    [0, 100]
}
fn default_per_response() -> usize {
    25
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub id: String,
    pub profile: MemorizationProfile,
    /// Inclusive element range for generated inputs.
    #[serde(default = "default_familiar_range")]
    pub familiar_range: [u64; 2],
    /// Instances emitted per generation response.
    #[serde(default = "default_per_response")]
    pub instances_per_response: usize,
    #[serde(default = "default_concurrency")]
    pub concurrency: usize,
}

impl SyntheticConfig {
    pub fn new(id: impl Into<String>, profile: MemorizationProfile) -> Self {
        Self {
            id: id.into(),
            profile,
            familiar_range: default_familiar_range(),
            instances_per_response: default_per_response(),
            concurrency: default_concurrency(),
        }
    }
}

pub struct SyntheticSubject {
    config: SyntheticConfig,
}

impl SyntheticSubject {
    pub fn new(config: SyntheticConfig) -> Result<Self, GatewayError> {
        config.profile.validate()?;
        if config.familiar_range[0] > config.familiar_range[1] {
            return Err(GatewayError::Config("empty familiar range".into()));
        }
        Ok(Self { config })
    }

    pub fn config(&self) -> &SyntheticConfig {
        &self.config
    }
}

impl Subject for SyntheticSubject {
    fn id(&self) -> &str {
        &self.config.id
    }

    fn concurrency(&self) -> usize {
        self.config.concurrency
    }

    fn complete(&self, prompt: &PromptRequest) -> Result<CompletionRecord, GatewayError> {
        let task = prompt.task.spec();
        let response = match (&prompt.kind, &prompt.instance) {
            (PromptKind::Generate, _) => synthetic_generate(
                &self.config,
                task,
                self.config.instances_per_response,
                prompt.sequence,
            ),
            (PromptKind::Solve, Some(instance)) => {
                synthetic_solve(&self.config.profile, task, instance)
            }
            (PromptKind::Solve, None) => {
                return Err(GatewayError::Protocol("solve prompt without an instance".into()))
            }
        };
        Ok(CompletionRecord {
            request: prompt.text.clone(),
            response,
            latency_ms: 0,
            attempts: 1,
            usage: None,
        })
    }
}

fn bracket(v: &[u64]) -> String {
    format!("[{}]", v.iter().map(u64::to_string).collect::<Vec<_>>().join(", "))
}

/// A generation transcript of `count` bracketed inputs drawn from the
/// familiar range. `stream` selects an independent deterministic draw.
pub fn synthetic_generate(
    config: &SyntheticConfig,
    task: &TaskSpec,
    count: usize,
    stream: u64,
) -> String {
    let mut rng = seeds::rng(config.profile.seed, &["generate", task.id.as_str(), &stream.to_string()]);
    let [lo, hi] = config.familiar_range;
    let lengths = task.input_schema.length_bounds.clone();
    let mut out = String::from("Sure! Here are some test inputs:\n");
    for n in 1..=count {
        let len = rng.random_range(lengths.clone());
        let item = match task.input_schema.kind {
            InputKind::ListPair => {
                let first = draw(&mut rng, len, lo, hi);
                let other = rng.random_range(lengths.clone());
                let mut second = draw(&mut rng, other, lo, hi);
                let seg = rng.random_range(1..=first.len().min(second.len()).min(4));
                let from = rng.random_range(0..=first.len() - seg);
                let to = rng.random_range(0..=second.len() - seg);
                second[to..to + seg].copy_from_slice(&first[from..from + seg]);
                format!("[{}, {}]", bracket(&first), bracket(&second))
            }
            InputKind::AdjacencyMatrix => {
                let mut m = vec![vec![0u64; len]; len];
                for i in 0..len {
                    for j in i + 1..len {
                        let d = rng.random_range(lo.max(1)..=hi.max(1));
                        m[i][j] = d;
                        m[j][i] = d;
                    }
                }
                bracket_rows(&m)
            }
            _ => {
                let mut list = draw(&mut rng, len, lo, hi);
                match task.id {
                    TaskId::FindMode => {
                        let v = list[0];
                        let copies = rng.random_range(2..=3.min(len));
                        let mut positions: Vec<usize> = (1..len).collect();
                        positions.shuffle(&mut rng);
                        for &p in positions.iter().take(copies - 1) {
                            list[p] = v;
                        }
                        list.shuffle(&mut rng);
                    }
                    TaskId::RemoveDuplicates => {
                        let dups = rng.random_range(1..=3.min(len - 1));
                        for _ in 0..dups {
                            let from = rng.random_range(0..len);
                            let to = rng.random_range(0..len);
                            list[to] = list[from];
                        }
                    }
                    _ => {}
                }
                bracket(&list)
            }
        };
        out.push_str(&format!("{n}. {item}\n"));
    }
    if matches!(task.input_schema.kind, InputKind::NumberList | InputKind::ListPlusK | InputKind::ListPlusTarget | InputKind::ListPlusRange) {
        out.push_str("Each list follows the pattern [x1, x2, x3, x4].\n");
    }
    out
}

fn draw(rng: &mut impl Rng, len: usize, lo: u64, hi: u64) -> Vec<u64> {
    (0..len).map(|_| rng.random_range(lo..=hi)).collect()
}

fn bracket_rows(m: &[Vec<u64>]) -> String {
    format!("[{}]", m.iter().map(|r| bracket(r)).collect::<Vec<_>>().join(", "))
}

/// A shape-valid answer that the verifier rejects.
pub(crate) fn wrong_answer(instance: &ProblemInstance, correct: &CandidateAnswer) -> AnswerValue {
    let rejected = |v: &AnswerValue| {
        !oracle::verify(instance, &CandidateAnswer::new(instance.task, v.clone())).is_correct()
    };
    match &correct.value {
        AnswerValue::Scalar(x) => (1..)
            .map(|d| AnswerValue::Scalar(x + d))
            .find(|v| rejected(v))
            .expect("some scalar differs from the answer"),
        AnswerValue::Tour(t) => {
            let n = t.len();
            let mut rest: Vec<u64> = (1..n as u64).collect();
            loop {
                let cand = AnswerValue::Tour(std::iter::once(0).chain(rest.iter().copied()).collect());
                if rejected(&cand) {
                    return cand;
                }
                if !next_perm(&mut rest) {
                    // every tour is optimal; repeat a city
                    return AnswerValue::Tour(vec![0; n]);
                }
            }
        }
        list_value => {
            let base = list_value.numbers();
            let rebuild = |v: Vec<u64>| match list_value {
                AnswerValue::Multiset(_) => AnswerValue::multiset(v),
                _ => AnswerValue::OrderedList(v),
            };
            for d in 1..=3u64 {
                for j in (0..base.len()).rev() {
                    let mut v = base.clone();
                    v[j] += d;
                    let cand = rebuild(v);
                    if rejected(&cand) {
                        return cand;
                    }
                }
            }
            rebuild(Vec::new())
        }
    }
}

fn next_perm(v: &mut [u64]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// A chain-of-thought style response. Correctness is a pure function of the
/// profile seed and the instance digest.
pub fn synthetic_solve(profile: &MemorizationProfile, task: &TaskSpec, instance: &ProblemInstance) -> String {
    let intro = format!(
        "We need to solve the task on the input with {} elements. Going through the numbers one at a time and keeping track of candidates.",
        instance.length()
    );
    let Ok(correct) = oracle::solve(instance) else {
        return format!("{intro} I could not find a valid answer.");
    };
    let p = profile.probability(task.id, instance.split);
    let u = seeds::unit(profile.seed, &["solve", &instance.digest(), instance.split.as_str()]);
    let value = if u < p { correct.value.clone() } else { wrong_answer(instance, &correct) };
    format!("{intro}\nAfter checking every step, the result is settled.\nThe answer is {}", render_answer(&value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::TaskId;
    use crate::instance::Payload;
    use crate::prompting::{build_solve_prompt, extract_final_answer};

    fn subject(profile: MemorizationProfile) -> SyntheticSubject {
        SyntheticSubject::new(SyntheticConfig::new("synthetic", profile)).unwrap()
    }

    fn grade(s: &SyntheticSubject, instance: &ProblemInstance) -> bool {
        let task = instance.task.spec();
        let rec = s.complete(&build_solve_prompt(task, instance)).unwrap();
        let ext = extract_final_answer(&rec.response, task);
        ext.answer.is_some_and(|a| oracle::verify(instance, &a).is_correct())
    }

    fn max_instance(v: &[u64], split: Split) -> ProblemInstance {
        ProblemInstance::new(TaskId::FindMaximum, split, Payload::NumberList { list: v.to_vec() })
    }

    #[test]
    fn forced_outcomes() {
        let always = subject(MemorizationProfile::flat(1.0, 3));
        let never = subject(MemorizationProfile::flat(0.0, 3));
        let x = max_instance(&[74, 29, 63, 40, 88], Split::Id);
        assert!(grade(&always, &x));
        assert!(!grade(&never, &x));
        let rec = never.complete(&build_solve_prompt(x.task.spec(), &x)).unwrap();
        assert!(rec.response.contains("The answer is 89"));
    }

    #[test]
    fn request_is_not_mutated() {
        let s = subject(MemorizationProfile::flat(0.5, 3));
        let x = max_instance(&[1, 2, 3, 4], Split::Ood);
        let p = build_solve_prompt(x.task.spec(), &x);
        assert_eq!(s.complete(&p).unwrap().request, p.text);
    }

    #[test]
    fn valley_profile_invariant() {
        for level in ComplexityInterval::ANCHOR_LEVELS {
            let p = MemorizationProfile::valley(level, 1);
            p.validate().unwrap();
        }
        let mut broken = MemorizationProfile::valley(ComplexityInterval::LINEAR, 1);
        broken.p_ood[3] = 0.0;
        assert!(broken.validate().is_err());
    }

    #[test]
    fn probe_probability_interpolates() {
        let p = MemorizationProfile::valley(ComplexityInterval::LINEAR, 1)
            .with_probe(TaskId::LongestIncreasingSubsequence, 1.5);
        let expected = (p.p_ood[1] + p.p_ood[2]) / 2.0;
        let got = p.probability(TaskId::LongestIncreasingSubsequence, Split::Ood);
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn wrong_answers_are_rejected() {
        let tsp = ProblemInstance::new(
            TaskId::Tsp,
            Split::Ood,
            Payload::AdjacencyMatrix {
                matrix: vec![vec![0, 1, 1, 1], vec![1, 0, 1, 1], vec![1, 1, 0, 1], vec![1, 1, 1, 0]],
            },
        );
        let correct = oracle::solve(&tsp).unwrap();
        let wrong = wrong_answer(&tsp, &correct);
        assert!(!oracle::verify(&tsp, &CandidateAnswer::new(TaskId::Tsp, wrong)).is_correct());
    }

    #[test]
    fn backoff_schedule() {
        let p = RetryPolicy { max_attempts: 5, initial_backoff_ms: 100, multiplier: 2.0, max_backoff_ms: 350 };
        assert_eq!(p.backoff(1), Duration::from_millis(100));
        assert_eq!(p.backoff(2), Duration::from_millis(200));
        assert_eq!(p.backoff(3), Duration::from_millis(350));
    }

    #[test]
    fn batch_preserves_order() {
        let s = subject(MemorizationProfile::flat(1.0, 9));
        let prompts: Vec<PromptRequest> = (0..20u64)
            .map(|i| {
                let x = max_instance(&[i, i + 1, i + 2, i + 3], Split::Id);
                build_solve_prompt(x.task.spec(), &x)
            })
            .collect();
        let a: Vec<_> = complete_batch(&s, &prompts, 1).into_iter().map(|r| r.unwrap()).collect();
        let b: Vec<_> = complete_batch(&s, &prompts, 8).into_iter().map(|r| r.unwrap()).collect();
        assert_eq!(a, b);
        assert!(a[5].response.ends_with("The answer is 8"));
    }
}
