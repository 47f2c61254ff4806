//! End-to-end pipeline: synthesize, evaluate, score, probe.
//!
//! Output layout under `output_dir`:
//!
//! ```text
//! manifest.json
//! <subject>/harvest/<task>.transcripts.jsonl   raw generation transcripts
//! <subject>/harvest/<task>.stats.json          harvest and parse counters
//! <subject>/harvest/<task>.distribution.json   element counts and ID element set
//! <subject>/splits/<task>.{id,ood}.jsonl       finalized splits
//! <subject>/records.jsonl                      evaluation records (append-only)
//! reports/{scores,levels,tasks,probe}.csv, reports/summary.txt
//! ```
//!
//! Every stage is idempotent: rerunning with an unchanged config reuses
//! what is already on disk.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::catalog::{TaskId, TaskRole};
use crate::error::{Error, Result};
use crate::gateway::{complete_batch, Subject, SubjectConfig};
use crate::instance::{ProblemInstance, Split};
use crate::metrics::{self, EvalRecord, ProbeRow, SubjectReport};
use crate::oracle::{self, AnswerVerdict, Outcome};
use crate::prompting::{build_solve_prompt, extract_final_answer, ExtractionStatus};
use crate::synthesis::{self, DatasetSplit, SynthesisConfig, DEFAULT_TOP_P};

fn default_top_p() -> f64 {
    DEFAULT_TOP_P
}
fn default_universal() -> [u64; 2] {
    [0, 9999]
}

/// A complete, serializable experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub output_dir: PathBuf,
    pub seed: u64,
    /// 500 harvested examples and 32 instances per split unless overridden.
    #[serde(default)]
    pub desk_scale: bool,
    pub split_size: Option<usize>,
    pub min_instances: Option<usize>,
    #[serde(default = "default_top_p")]
    pub top_p: f64,
    #[serde(default = "default_universal")]
    pub universal: [u64; 2],
    /// Task selection; every task when absent.
    pub tasks: Option<Vec<TaskId>>,
    /// Caps in-flight requests below each subject's own limit.
    pub concurrency: Option<usize>,
    pub subjects: Vec<SubjectConfig>,
    /// Runtime restriction to one subject; not part of the experiment.
    #[serde(skip)]
    pub only_subject: Option<String>,
}

impl RunConfig {
    /// Full-scale defaults with no subjects.
    pub fn new(output_dir: impl Into<PathBuf>, seed: u64) -> Self {
        Self {
            output_dir: output_dir.into(),
            seed,
            desk_scale: false,
            split_size: None,
            min_instances: None,
            top_p: default_top_p(),
            universal: default_universal(),
            tasks: None,
            concurrency: None,
            subjects: Vec::new(),
            only_subject: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    fn check(&self) -> Result<()> {
        if self.subjects.is_empty() {
            return Err(Error::Config("no subjects configured".into()));
        }
        let mut ids: Vec<&str> = self.subjects.iter().map(SubjectConfig::id).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("subject ids must be unique".into()));
        }
        if let Some(bad) = ids.iter().find(|id| {
            id.is_empty() || !id.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c))
        }) {
            return Err(Error::Config(format!("subject id {bad:?} is not a safe directory name")));
        }
        if !(self.top_p > 0.0 && self.top_p <= 1.0) {
            return Err(Error::Config(format!("top_p {} outside (0, 1]", self.top_p)));
        }
        if self.universal[0] > self.universal[1] {
            return Err(Error::Config("universal range is empty".into()));
        }
        if self.split_size == Some(0) || self.min_instances == Some(0) {
            return Err(Error::Config("split_size and min_instances must be positive".into()));
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(serde_json::to_vec(self).expect("config serializes")))
    }

    pub fn selected_tasks(&self) -> Vec<TaskId> {
        match &self.tasks {
            Some(t) => TaskId::ALL.into_iter().filter(|id| t.contains(id)).collect(),
            None => TaskId::ALL.to_vec(),
        }
    }

    pub fn synthesis(&self) -> SynthesisConfig {
        let base = if self.desk_scale { SynthesisConfig::desk(self.seed) } else { SynthesisConfig { seed: self.seed, ..SynthesisConfig::default() } };
        SynthesisConfig {
            split_size: self.split_size.unwrap_or(base.split_size),
            min_instances: self.min_instances.unwrap_or(base.min_instances),
            top_p: self.top_p,
            universal: self.universal[0]..=self.universal[1],
            ..base
        }
    }

    /// Restricts stages to the named subject without changing the config
    /// digest.
    pub fn select_subject(&mut self, id: &str) -> Result<()> {
        if !self.subjects.iter().any(|s| s.id() == id) {
            return Err(Error::Config(format!("no subject named {id:?} in config")));
        }
        self.only_subject = Some(id.to_string());
        Ok(())
    }

    pub fn active_subjects(&self) -> impl Iterator<Item = &SubjectConfig> {
        self.subjects.iter().filter(|s| self.only_subject.as_deref().is_none_or(|id| s.id() == id))
    }

    fn cap(&self, subject: &dyn Subject) -> usize {
        let own = subject.concurrency().max(1);
        self.concurrency.map_or(own, |c| c.clamp(1, own))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageMarker {
    pub completed_at: u64,
    pub artifacts: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageFailure {
    pub stage: String,
    pub message: String,
    pub at: u64,
}

/// Run bookkeeping. Timestamps are unix seconds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_digest: String,
    pub created_at: u64,
    /// Keyed `<stage>/<subject>` or `<stage>` for cross-subject stages.
    pub stages: BTreeMap<String, StageMarker>,
    pub failure: Option<StageFailure>,
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

fn rel(root: &Path, p: &Path) -> String {
    p.strip_prefix(root).unwrap_or(p).to_string_lossy().into_owned()
}

impl RunManifest {
    fn path(cfg: &RunConfig) -> PathBuf {
        cfg.output_dir.join("manifest.json")
    }

    /// Loads the manifest for `cfg`, creating it on first use. An output
    /// directory written under a different config is refused.
    pub fn open(cfg: &RunConfig) -> Result<Self> {
        let path = Self::path(cfg);
        let digest = cfg.digest();
        if path.exists() {
            let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            let m: RunManifest = serde_json::from_str(&text)?;
            if m.config_digest != digest {
                return Err(Error::Config(format!(
                    "{} was produced by a different config; use a fresh output_dir",
                    cfg.output_dir.display()
                )));
            }
            return Ok(m);
        }
        fs::create_dir_all(&cfg.output_dir).map_err(|e| Error::io(&cfg.output_dir, e))?;
        write_atomic(&cfg.output_dir.join("config.toml"), &cfg.to_toml())?;
        let m = RunManifest { config_digest: digest, created_at: now(), stages: BTreeMap::new(), failure: None };
        m.save(cfg)?;
        Ok(m)
    }

    fn save(&self, cfg: &RunConfig) -> Result<()> {
        write_atomic(&Self::path(cfg), &serde_json::to_string_pretty(self)?)
    }

    pub fn is_done(&self, stage: &str) -> bool {
        self.stages.contains_key(stage)
    }

    fn mark(&mut self, cfg: &RunConfig, stage: String, artifacts: Vec<String>) -> Result<()> {
        self.stages.insert(stage, StageMarker { completed_at: now(), artifacts });
        self.failure = None;
        self.save(cfg)
    }

    fn fail(&mut self, cfg: &RunConfig, stage: &str, err: &Error) {
        self.failure = Some(StageFailure { stage: stage.into(), message: err.to_string(), at: now() });
        // the original error matters more than a failed bookkeeping write
        let _ = self.save(cfg);
    }
}

/// Paths for one subject's artifacts.
pub struct SubjectLayout {
    pub root: PathBuf,
}

impl SubjectLayout {
    pub fn new(cfg: &RunConfig, subject: &str) -> Self {
        Self { root: cfg.output_dir.join(subject) }
    }

    pub fn transcripts(&self, task: TaskId) -> PathBuf {
        self.root.join("harvest").join(format!("{task}.transcripts.jsonl"))
    }

    pub fn stats(&self, task: TaskId) -> PathBuf {
        self.root.join("harvest").join(format!("{task}.stats.json"))
    }

    pub fn distribution(&self, task: TaskId) -> PathBuf {
        self.root.join("harvest").join(format!("{task}.distribution.json"))
    }

    pub fn split(&self, task: TaskId, split: Split) -> PathBuf {
        self.root.join("splits").join(format!("{task}.{}.jsonl", split.as_str()))
    }

    pub fn records(&self) -> PathBuf {
        self.root.join("records.jsonl")
    }
}

pub fn reports_dir(cfg: &RunConfig) -> PathBuf {
    cfg.output_dir.join("reports")
}

fn with_stage<T>(m: &mut RunManifest, cfg: &RunConfig, stage: &str, f: impl FnOnce(&mut RunManifest) -> Result<T>) -> Result<T> {
    let out = f(m);
    if let Err(e) = &out {
        m.fail(cfg, stage, e);
    }
    out
}

#[derive(Serialize)]
struct StatsFile<'a> {
    harvest: &'a synthesis::HarvestStats,
    extraction_skipped: usize,
    ood_skipped: usize,
}

#[derive(Serialize)]
struct DistributionFile<'a> {
    total: u64,
    top_p: f64,
    id_set: Vec<u64>,
    counts: &'a BTreeMap<u64, u64>,
}

/// Harvests and synthesizes ID and OOD splits for every selected task of
/// every subject. Returns the split files written or already present.
pub fn cmd_synthesize(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let mut manifest = RunManifest::open(cfg)?;
    let syn = cfg.synthesis();
    let mut files = Vec::new();
    for sc in cfg.active_subjects() {
        let layout = SubjectLayout::new(cfg, sc.id());
        let stage = format!("synthesize/{}", sc.id());
        let split_files: Vec<PathBuf> = cfg
            .selected_tasks()
            .into_iter()
            .flat_map(|t| [layout.split(t, Split::Id), layout.split(t, Split::Ood)])
            .collect();
        if manifest.is_done(&stage) && split_files.iter().all(|p| p.exists()) {
            files.extend(split_files);
            continue;
        }
        with_stage(&mut manifest, cfg, &stage, |m| {
            let subject = sc.build()?;
            let syn = SynthesisConfig { concurrency: cfg.cap(subject.as_ref()), ..syn.clone() };
            let mut harvest_files = Vec::new();
            for task in cfg.selected_tasks() {
                let (id_path, ood_path) = (layout.split(task, Split::Id), layout.split(task, Split::Ood));
                if id_path.exists() && ood_path.exists() {
                    continue;
                }
                let out = synthesis::synthesize_task(subject.as_ref(), task.spec(), &syn)?;
                let mut transcripts = String::new();
                for t in &out.harvest.transcripts {
                    transcripts.push_str(&serde_json::to_string(t)?);
                    transcripts.push('\n');
                }
                write_atomic(&layout.transcripts(task), &transcripts)?;
                let stats = StatsFile {
                    harvest: &out.harvest.stats,
                    extraction_skipped: out.extraction_skipped,
                    ood_skipped: out.ood_skipped,
                };
                write_atomic(&layout.stats(task), &serde_json::to_string_pretty(&stats)?)?;
                let dist = DistributionFile {
                    total: out.distribution.total,
                    top_p: out.distribution.top_p,
                    id_set: out.distribution.id_set().into_iter().collect(),
                    counts: &out.distribution.counts,
                };
                write_atomic(&layout.distribution(task), &serde_json::to_string(&dist)?)?;
                harvest_files.push(rel(&cfg.output_dir, &layout.transcripts(task)));
                // both splits are final before either is written
                write_atomic(&id_path, &out.id.to_jsonl())?;
                write_atomic(&ood_path, &out.ood.to_jsonl())?;
            }
            m.mark(cfg, format!("harvest/{}", sc.id()), harvest_files)?;
            let artifacts = split_files.iter().map(|p| rel(&cfg.output_dir, p)).collect();
            m.mark(cfg, stage.clone(), artifacts)
        })?;
        files.extend(split_files);
    }
    Ok(files)
}

/// Limits for one evaluation call.
#[derive(Debug, Clone, Copy, Default)]
pub struct EvaluateOptions {
    /// Stop after appending this many new records.
    pub max_new_records: Option<usize>,
}

type RecordKey = (TaskId, Split, usize);

/// Records in file order; a later record for the same instance replaces an
/// earlier one.
pub fn load_records(path: &Path) -> Result<Vec<EvalRecord>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut latest: BTreeMap<RecordKey, (usize, EvalRecord)> = BTreeMap::new();
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let r: EvalRecord = serde_json::from_str(line)
            .map_err(|source| Error::Record { path: path.to_path_buf(), line: i + 1, source })?;
        latest.insert((r.task, r.split, r.index), (i, r));
    }
    let mut out: Vec<(usize, EvalRecord)> = latest.into_values().collect();
    out.sort_by_key(|(i, _)| *i);
    Ok(out.into_iter().map(|(_, r)| r).collect())
}

fn grade(subject: &str, task: TaskId, split: Split, index: usize, instance: &ProblemInstance, result: std::result::Result<crate::gateway::CompletionRecord, crate::gateway::GatewayError>) -> EvalRecord {
    let mut rec = EvalRecord {
        subject: subject.to_string(),
        task,
        split,
        index,
        digest: instance.digest(),
        verdict: None,
        extraction: None,
        answer: None,
        response: None,
        attempts: 0,
        error: None,
    };
    match result {
        Ok(c) => {
            let ext = extract_final_answer(&c.response, task.spec());
            let verdict = match &ext.answer {
                Some(a) => oracle::verify(instance, a),
                None => AnswerVerdict {
                    outcome: Outcome::Malformed,
                    detail: match ext.status {
                        ExtractionStatus::NoMarker => "no final-answer marker".into(),
                        _ => "final answer could not be parsed".into(),
                    },
                },
            };
            rec.verdict = Some(verdict);
            rec.extraction = Some(ext.status);
            rec.answer = ext.answer.map(|a| a.value);
            rec.response = Some(c.response);
            rec.attempts = c.attempts;
        }
        Err(e) => {
            rec.attempts = match &e {
                crate::gateway::GatewayError::Transport { attempts, .. } => *attempts,
                _ => 1,
            };
            rec.error = Some(e.to_string());
        }
    }
    rec
}

/// Loads every selected split of one subject, in catalog order, ID first.
pub fn load_splits(cfg: &RunConfig, subject: &str) -> Result<Vec<DatasetSplit>> {
    let layout = SubjectLayout::new(cfg, subject);
    let mut out = Vec::new();
    for task in cfg.selected_tasks() {
        for split in [Split::Id, Split::Ood] {
            let path = layout.split(task, split);
            if !path.exists() {
                return Err(Error::Config(format!("missing split file {}; run synthesize first", path.display())));
            }
            out.push(DatasetSplit::load(&path)?);
        }
    }
    Ok(out)
}

/// Prompts every instance once and appends graded records. Instances that
/// already have a complete record are skipped; failed ones are retried.
/// Returns the number of records appended.
pub fn cmd_evaluate(cfg: &RunConfig, opts: EvaluateOptions) -> Result<usize> {
    let mut manifest = RunManifest::open(cfg)?;
    let mut appended = 0;
    for sc in cfg.active_subjects() {
        let stage = format!("evaluate/{}", sc.id());
        if manifest.is_done(&stage) {
            continue;
        }
        let budget = opts.max_new_records.map(|m| m.saturating_sub(appended));
        if budget == Some(0) {
            break;
        }
        let n = with_stage(&mut manifest, cfg, &stage, |m| {
            let (n, complete) = evaluate_subject(cfg, sc, budget)?;
            if complete {
                let layout = SubjectLayout::new(cfg, sc.id());
                m.mark(cfg, stage.clone(), vec![rel(&cfg.output_dir, &layout.records())])?;
            }
            Ok(n)
        })?;
        appended += n;
    }
    Ok(appended)
}

fn evaluate_subject(cfg: &RunConfig, sc: &SubjectConfig, budget: Option<usize>) -> Result<(usize, bool)> {
    let layout = SubjectLayout::new(cfg, sc.id());
    let splits = load_splits(cfg, sc.id())?;
    let done: BTreeMap<RecordKey, String> = load_records(&layout.records())?
        .into_iter()
        .filter(EvalRecord::is_complete)
        .map(|r| ((r.task, r.split, r.index), r.digest))
        .collect();
    let mut pending: Vec<(TaskId, Split, usize, &ProblemInstance)> = Vec::new();
    for s in &splits {
        for (i, x) in s.instances.iter().enumerate() {
            match done.get(&(s.task, s.split, i)) {
                Some(d) if *d == x.digest() => {}
                Some(_) => {
                    return Err(Error::Config(format!(
                        "records for {} {} no longer match the split file",
                        s.task, s.split
                    )))
                }
                None => pending.push((s.task, s.split, i, x)),
            }
        }
    }
    let total_pending = pending.len();
    if let Some(b) = budget {
        pending.truncate(b);
    }
    if pending.is_empty() {
        return Ok((0, total_pending == 0));
    }
    let subject = sc.build()?;
    let cap = cfg.cap(subject.as_ref());
    let path = layout.records();
    fs::create_dir_all(&layout.root).map_err(|e| Error::io(&layout.root, e))?;
    let mut file = fs::OpenOptions::new().create(true).append(true).open(&path).map_err(|e| Error::io(&path, e))?;
    let mut appended = 0;
    let mut failures = 0;
    for chunk in pending.chunks(cap * 4) {
        let prompts: Vec<_> = chunk.iter().map(|(t, _, _, x)| build_solve_prompt(t.spec(), x)).collect();
        let mut lines = String::new();
        for ((task, split, index, x), res) in chunk.iter().zip(complete_batch(subject.as_ref(), &prompts, cap)) {
            let rec = grade(sc.id(), *task, *split, *index, x, res);
            failures += usize::from(!rec.is_complete());
            lines.push_str(&serde_json::to_string(&rec)?);
            lines.push('\n');
        }
        file.write_all(lines.as_bytes()).map_err(|e| Error::io(&path, e))?;
        file.flush().map_err(|e| Error::io(&path, e))?;
        appended += chunk.len();
    }
    Ok((appended, failures == 0 && appended == total_pending))
}

/// Complete records of one subject.
pub fn subject_records(cfg: &RunConfig, subject: &str) -> Result<Vec<EvalRecord>> {
    let recs = load_records(&SubjectLayout::new(cfg, subject).records())?;
    Ok(recs.into_iter().filter(EvalRecord::is_complete).collect())
}

/// Per-subject level reports, written as `scores.csv`, `levels.csv` and
/// `tasks.csv`.
pub fn cmd_score(cfg: &RunConfig) -> Result<Vec<SubjectReport>> {
    let mut manifest = RunManifest::open(cfg)?;
    with_stage(&mut manifest, cfg, "score", |m| {
        let mut reports = Vec::new();
        for sc in cfg.active_subjects() {
            let records = subject_records(cfg, sc.id())?;
            reports.push(metrics::subject_report(sc.id(), &records)?);
        }
        let dir = reports_dir(cfg);
        write_atomic(&dir.join("scores.csv"), &metrics::scores_csv(&reports)?)?;
        write_atomic(&dir.join("levels.csv"), &metrics::levels_csv(&reports)?)?;
        write_atomic(&dir.join("tasks.csv"), &metrics::tasks_csv(&reports)?)?;
        let arts = ["scores.csv", "levels.csv", "tasks.csv"].map(|f| format!("reports/{f}")).to_vec();
        if !m.is_done("score") {
            m.mark(cfg, "score".into(), arts)?;
        }
        Ok(reports)
    })
}

/// Probe-task complexity estimates against each subject's anchor curve,
/// written as `probe.csv`.
pub fn cmd_probe(cfg: &RunConfig) -> Result<Vec<ProbeRow>> {
    let mut manifest = RunManifest::open(cfg)?;
    with_stage(&mut manifest, cfg, "probe", |m| {
        let mut rows = Vec::new();
        for sc in cfg.active_subjects() {
            let records = subject_records(cfg, sc.id())?;
            let report = metrics::subject_report(sc.id(), &records)?;
            rows.extend(metrics::probe_rows(&report, &records)?);
        }
        write_atomic(&reports_dir(cfg).join("probe.csv"), &metrics::probe_csv(&rows)?)?;
        if !m.is_done("probe") {
            m.mark(cfg, "probe".into(), vec!["reports/probe.csv".into()])?;
        }
        Ok(rows)
    })
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub reports: Vec<SubjectReport>,
    pub probes: Vec<ProbeRow>,
}

/// Runs every stage, then writes `reports/summary.txt`. The probe stage is
/// skipped when no probe task is selected.
pub fn report_all(cfg: &RunConfig) -> Result<RunSummary> {
    cmd_synthesize(cfg)?;
    cmd_evaluate(cfg, EvaluateOptions::default())?;
    let m = RunManifest::open(cfg)?;
    let pending: Vec<String> = cfg
        .active_subjects()
        .map(|s| s.id().to_string())
        .filter(|id| !m.is_done(&format!("evaluate/{id}")))
        .collect();
    if !pending.is_empty() {
        return Err(Error::Incomplete(pending));
    }
    let reports = cmd_score(cfg)?;
    let has_probe = cfg.selected_tasks().iter().any(|t| t.spec().role == TaskRole::Probe);
    let probes = if has_probe { cmd_probe(cfg)? } else { Vec::new() };
    write_atomic(&reports_dir(cfg).join("summary.txt"), &metrics::summary_text(&reports, &probes))?;
    Ok(RunSummary { reports, probes })
}
