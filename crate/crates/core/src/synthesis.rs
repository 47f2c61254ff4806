//! ID/OOD dataset synthesis.
//!
//! Pipeline per task: harvest generations from the subject, parse them into
//! ID instances, count element frequencies, take the top-p element set,
//! sample OOD elements from its complement within the universal range, build
//! length-matched OOD instances, then validate, deduplicate and subsample
//! both splits.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::ops::RangeInclusive;
use std::path::Path;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{InputKind, TaskId, TaskSpec};
use crate::error::{Error, Result};
use crate::gateway::{complete_batch, GatewayError, Subject};
use crate::instance::{Payload, ProblemInstance, Split};
use crate::oracle;
use crate::prompting::build_generation_prompt;
use crate::seeds;

pub const DEFAULT_TOP_P: f64 = 0.9;
pub const DEFAULT_UNIVERSAL: RangeInclusive<u64> = 0..=9999;
pub const DEFAULT_SPLIT_SIZE: usize = 256;
pub const DEFAULT_MIN_INSTANCES: usize = 10_000;
/// Width of the open interval built around a realized sum for in-range tasks.
pub const RANGE_WINDOW: u64 = 10;

/// One generation round trip, as persisted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub sequence: u64,
    pub request_digest: String,
    pub response: String,
    pub attempts: u32,
    pub latency_ms: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarvestStats {
    pub min_instances: usize,
    pub requests: usize,
    pub failed_requests: usize,
    pub parsed: usize,
    pub skipped: usize,
    /// Fewer than `min_instances` parseable examples were collected.
    pub shortfall: bool,
}

#[derive(Debug, Clone)]
pub struct Harvest {
    pub task: TaskId,
    pub transcripts: Vec<Transcript>,
    pub stats: HarvestStats,
    /// The last gateway failure, if any request failed.
    pub last_error: Option<GatewayError>,
}

/// Requests issued per harvest are capped at this multiple of `min_instances`.
const MAX_REQUESTS_PER_INSTANCE: usize = 4;

/// Issues the task's generation prompt until at least `min_instances`
/// parseable examples have been collected.
///
/// Requests go out in rounds of `concurrency`; the kept transcripts are the
/// shortest prefix (by sequence number) that reaches the target, so the
/// corpus does not depend on the concurrency cap.
pub fn harvest_id_corpus(
    subject: &dyn Subject,
    task: &TaskSpec,
    min_instances: usize,
    concurrency: usize,
) -> Harvest {
    let min_instances = min_instances.max(1);
    let prompt = build_generation_prompt(task);
    let max_requests = min_instances.saturating_mul(MAX_REQUESTS_PER_INSTANCE).max(16);
    let round = concurrency.max(1);
    let mut transcripts = Vec::new();
    let mut stats = HarvestStats { min_instances, ..HarvestStats::default() };
    let mut last_error = None;
    let mut next = 0u64;
    while stats.parsed < min_instances && (next as usize) < max_requests {
        let n = round.min(max_requests - next as usize);
        let batch: Vec<_> = (next..next + n as u64).map(|s| prompt.clone().with_sequence(s)).collect();
        next += n as u64;
        let mut round_failures = 0;
        for (req, out) in batch.iter().zip(complete_batch(subject, &batch, round)) {
            if stats.parsed >= min_instances {
                break;
            }
            stats.requests += 1;
            match out {
                Ok(rec) => {
                    let parsed = parse_fragments(&rec.response, task);
                    stats.parsed += parsed.found.len();
                    stats.skipped += parsed.skipped;
                    transcripts.push(Transcript {
                        sequence: req.sequence,
                        request_digest: rec.request_digest(),
                        response: rec.response,
                        attempts: rec.attempts,
                        latency_ms: rec.latency_ms,
                    });
                }
                Err(e) => {
                    stats.failed_requests += 1;
                    round_failures += 1;
                    last_error = Some(e);
                }
            }
        }
        if round_failures == n {
            // nothing came back this round; the subject is unavailable
            break;
        }
    }
    stats.shortfall = stats.parsed < min_instances;
    Harvest { task: task.id, transcripts, stats, last_error }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(u64),
    List(Vec<Node>, bool),
}

/// Bracketed groups in `text`. A group containing anything other than
/// digits, commas, whitespace and nested groups is flagged malformed.
fn bracket_groups(text: &str) -> Vec<Node> {
    let mut stack: Vec<(Vec<Node>, bool)> = Vec::new();
    let mut top = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some((_, c)) = chars.next() {
        match c {
            '[' => stack.push((Vec::new(), false)),
            ']' => {
                if let Some((items, bad)) = stack.pop() {
                    let node = Node::List(items, bad);
                    match stack.last_mut() {
                        Some((parent, _)) => parent.push(node),
                        None => top.push(node),
                    }
                }
            }
            _ if stack.is_empty() => {}
            d if d.is_ascii_digit() => {
                let mut v = d.to_digit(10).unwrap() as u64;
                let mut overflow = false;
                while let Some(&(_, n)) = chars.peek() {
                    let Some(x) = n.to_digit(10) else { break };
                    match v.checked_mul(10).and_then(|v| v.checked_add(x as u64)) {
                        Some(nv) => v = nv,
                        None => overflow = true,
                    }
                    chars.next();
                }
                let (items, bad) = stack.last_mut().expect("inside a group");
                if overflow {
                    *bad = true;
                } else {
                    items.push(Node::Num(v));
                }
            }
            ',' => {}
            w if w.is_whitespace() => {}
            _ => stack.last_mut().expect("inside a group").1 = true,
        }
    }
    top
}

fn flat_numbers(items: &[Node]) -> Option<Vec<u64>> {
    items
        .iter()
        .map(|n| match n {
            Node::Num(v) => Some(*v),
            Node::List(..) => None,
        })
        .collect()
}

fn rows(items: &[Node]) -> Option<Vec<Vec<u64>>> {
    items
        .iter()
        .map(|n| match n {
            Node::List(inner, false) => flat_numbers(inner),
            _ => None,
        })
        .collect()
}

enum Fragment {
    List(Vec<u64>),
    Pair(Vec<u64>, Vec<u64>),
    Matrix(Vec<Vec<u64>>),
}

struct Parsed {
    found: Vec<Fragment>,
    skipped: usize,
}

fn collect_lists(node: &Node, out: &mut Parsed) {
    let Node::List(items, bad) = node else { return };
    if items.iter().any(|n| matches!(n, Node::List(..))) {
        for child in items {
            collect_lists(child, out);
        }
        return;
    }
    match flat_numbers(items) {
        Some(v) if !bad && !v.is_empty() => out.found.push(Fragment::List(v)),
        _ => out.skipped += 1,
    }
}

fn parse_fragments(text: &str, task: &TaskSpec) -> Parsed {
    let mut out = Parsed { found: Vec::new(), skipped: 0 };
    for group in bracket_groups(text) {
        match task.input_schema.kind {
            InputKind::ListPair => match &group {
                Node::List(items, false) => match rows(items) {
                    Some(mut r) if r.len() == 2 && r.iter().all(|l| !l.is_empty()) => {
                        let second = r.pop().unwrap();
                        let first = r.pop().unwrap();
                        out.found.push(Fragment::Pair(first, second));
                    }
                    _ => out.skipped += 1,
                },
                _ => out.skipped += 1,
            },
            InputKind::AdjacencyMatrix => {
                let matrix = match &group {
                    Node::List(items, false) => rows(items),
                    _ => None,
                };
                let ok = matrix.filter(|m| {
                    !m.is_empty()
                        && ProblemInstance::new(
                            task.id,
                            Split::Id,
                            Payload::AdjacencyMatrix { matrix: m.clone() },
                        )
                        .validate()
                        .is_ok()
                });
                match ok {
                    Some(m) => out.found.push(Fragment::Matrix(m)),
                    None => out.skipped += 1,
                }
            }
            _ => collect_lists(&group, &mut out),
        }
    }
    out
}

/// Instances parsed from harvest transcripts, plus the count of malformed
/// fragments that were skipped.
#[derive(Debug, Clone, Default)]
pub struct Extracted {
    pub instances: Vec<ProblemInstance>,
    pub skipped: usize,
}

/// Parses bracketed lists, list pairs or matrices per the task's input kind.
///
/// Generation prompts only ask for the data lists, so auxiliary scalars
/// (k, targets, ranges) are attached by the same construction used for OOD
/// instances, keyed by `seed` and the list contents.
pub fn extract_instances(transcripts: &[Transcript], task: &TaskSpec, seed: u64) -> Extracted {
    let mut out = Extracted::default();
    for t in transcripts {
        let parsed = parse_fragments(&t.response, task);
        out.skipped += parsed.skipped;
        for frag in parsed.found {
            let payload = match frag {
                Fragment::Pair(first, second) => Some(Payload::ListPair { first, second }),
                Fragment::Matrix(matrix) => Some(Payload::AdjacencyMatrix { matrix }),
                Fragment::List(list) => {
                    let key = format!("{list:?}");
                    let mut rng = seeds::rng(seed, &["id-aux", task.id.as_str(), &key]);
                    attach_aux(task, list, &mut rng)
                }
            };
            match payload {
                Some(p) => out.instances.push(ProblemInstance::new(task.id, Split::Id, p)),
                None => out.skipped += 1,
            }
        }
    }
    out
}

/// Element frequencies of a corpus and its top-p element set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementDistribution {
    pub counts: BTreeMap<u64, u64>,
    pub total: u64,
    pub top_p: f64,
}

impl ElementDistribution {
    pub fn from_counts(counts: BTreeMap<u64, u64>, top_p: f64) -> Result<Self> {
        if !(top_p > 0.0 && top_p <= 1.0) {
            return Err(Error::Config(format!("top-p {top_p} outside (0, 1]")));
        }
        let total: u64 = counts.values().sum();
        if total == 0 {
            return Err(Error::EmptyInput("element counts"));
        }
        Ok(Self { counts, total, top_p })
    }

    /// Elements by descending count, ties by ascending value.
    pub fn ranked(&self) -> Vec<(u64, u64)> {
        let mut v: Vec<(u64, u64)> = self.counts.iter().map(|(&e, &c)| (e, c)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        v
    }

    /// The smallest ranked prefix whose mass reaches `top_p`.
    pub fn id_set(&self) -> BTreeSet<u64> {
        let mut set = BTreeSet::new();
        let mut mass = 0u64;
        for (e, c) in self.ranked() {
            if mass as f64 >= self.top_p * self.total as f64 {
                break;
            }
            set.insert(e);
            mass += c;
        }
        set
    }
}

pub fn build_distribution(instances: &[ProblemInstance], top_p: f64) -> Result<ElementDistribution> {
    if instances.is_empty() {
        return Err(Error::EmptyInput("no instances to build a distribution from"));
    }
    let mut counts = BTreeMap::new();
    for e in instances.iter().flat_map(ProblemInstance::elements) {
        *counts.entry(e).or_insert(0u64) += 1;
    }
    ElementDistribution::from_counts(counts, top_p)
}

/// Uniform draws from a universal range minus an excluded set.
#[derive(Debug, Clone)]
pub struct ComplementSampler {
    values: Vec<u64>,
}

impl ComplementSampler {
    pub fn new(universal: RangeInclusive<u64>, excluded: &BTreeSet<u64>) -> Result<Self> {
        let values: Vec<u64> = universal.clone().filter(|v| !excluded.contains(v)).collect();
        if values.is_empty() {
            return Err(Error::EmptyComplement { lo: *universal.start(), hi: *universal.end() });
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, v: u64) -> bool {
        self.values.binary_search(&v).is_ok()
    }

    pub fn sample(&self, rng: &mut impl Rng) -> u64 {
        self.values[rng.random_range(0..self.values.len())]
    }

    fn sample_n(&self, rng: &mut impl Rng, n: usize) -> Vec<u64> {
        (0..n).map(|_| self.sample(rng)).collect()
    }

    /// Up to `n` pairwise distinct values, none in `avoid`.
    fn sample_distinct(&self, rng: &mut impl Rng, n: usize, avoid: &[u64]) -> Option<Vec<u64>> {
        let mut out: Vec<u64> = Vec::with_capacity(n);
        for _ in 0..n * 50 {
            if out.len() == n {
                break;
            }
            let v = self.sample(rng);
            if !avoid.contains(&v) && !out.contains(&v) {
                out.push(v);
            }
        }
        (out.len() == n).then_some(out)
    }

    fn sample_with_residue(&self, rng: &mut impl Rng, modulus: u64, residue: u64) -> Option<u64> {
        (0..500).map(|_| self.sample(rng)).find(|v| v % modulus == residue)
    }
}

pub fn sample_ood_elements(
    dist: &ElementDistribution,
    universal: RangeInclusive<u64>,
    n: usize,
    seed: u64,
) -> Result<Vec<u64>> {
    let sampler = ComplementSampler::new(universal, &dist.id_set())?;
    let mut rng = seeds::rng(seed, &["ood-elements"]);
    Ok(sampler.sample_n(&mut rng, n))
}

fn sum_arity(task: TaskId) -> Option<usize> {
    use TaskId::*;
    match task {
        TwoSum => Some(2),
        ThreeSumMultipleTen | ThreeSumInRange | ThreeSum => Some(3),
        FourSumMultipleTen | FourSumInRange | FourSum => Some(4),
        _ => None,
    }
}

/// Random witness positions: `r` distinct ones, or a non-empty subset.
fn witness_positions(rng: &mut impl Rng, len: usize, arity: Option<usize>) -> Vec<usize> {
    match arity {
        Some(r) => index::sample(rng, len, r.min(len)).into_vec(),
        None => {
            let size = rng.random_range(1..=len);
            index::sample(rng, len, size).into_vec()
        }
    }
}

/// Adds the auxiliary scalars a list task needs, constructed from random
/// positions so that a witness exists.
fn attach_aux(task: &TaskSpec, list: Vec<u64>, rng: &mut impl Rng) -> Option<Payload> {
    use TaskId::*;
    let arity = sum_arity(task.id);
    Some(match task.input_schema.kind {
        InputKind::ListPlusK => {
            let k = rng.random_range(1..=list.len().max(1)) as u64;
            Payload::ListPlusK { list, k }
        }
        InputKind::ListPlusTarget => {
            if list.len() < arity.unwrap_or(1) {
                return None;
            }
            let pos = witness_positions(rng, list.len(), arity);
            let target = pos.iter().map(|&i| list[i]).sum();
            Payload::ListPlusTarget { list, target }
        }
        InputKind::ListPlusRange => {
            if list.len() < arity.unwrap_or(1) {
                return None;
            }
            let pos = witness_positions(rng, list.len(), arity);
            let s: u64 = pos.iter().map(|&i| list[i]).sum();
            if s == 0 {
                return None;
            }
            let a = s - rng.random_range(1..=(RANGE_WINDOW - 1).min(s));
            Payload::ListPlusRange { list, a, b: a + RANGE_WINDOW }
        }
        _ => {
            debug_assert!(!matches!(task.id, TwoSum | ThreeSum | FourSum | SubsetSum));
            Payload::NumberList { list }
        }
    })
}

/// An OOD list for `task` whose elements all come from `source`, with the
/// constructions that keep it solvable.
fn build_ood_payload(
    task: &TaskSpec,
    shape: &[usize],
    source: &ComplementSampler,
    rng: &mut ChaCha8Rng,
) -> Option<Payload> {
    use TaskId::*;
    let len = shape[0];
    match task.input_schema.kind {
        InputKind::ListPair => {
            let first = source.sample_n(rng, len);
            let second_len = shape.get(1).copied().unwrap_or(len);
            let mut second = source.sample_n(rng, second_len);
            let seg = rng.random_range(1..=len.min(second_len).min(4));
            let from = rng.random_range(0..=len - seg);
            let to = rng.random_range(0..=second_len - seg);
            second[to..to + seg].copy_from_slice(&first[from..from + seg]);
            return Some(Payload::ListPair { first, second });
        }
        InputKind::AdjacencyMatrix => {
            let mut matrix = vec![vec![0u64; len]; len];
            for i in 0..len {
                for j in i + 1..len {
                    let d = source.sample(rng);
                    matrix[i][j] = d;
                    matrix[j][i] = d;
                }
            }
            return Some(Payload::AdjacencyMatrix { matrix });
        }
        _ => {}
    }
    let mut list = source.sample_n(rng, len);
    match task.id {
        FindMode => {
            let copies = rng.random_range(2..=3.min(len));
            let v = source.sample(rng);
            let mut fill = source.sample_distinct(rng, len - copies, &[v])?;
            fill.extend(std::iter::repeat_n(v, copies));
            fill.shuffle(rng);
            list = fill;
        }
        RemoveDuplicates => {
            for _ in 0..rng.random_range(1..=(len / 3).max(1)) {
                let from = rng.random_range(0..len);
                let to = rng.random_range(0..len);
                list[to] = list[from];
            }
        }
        ThreeSumMultipleTen | FourSumMultipleTen | SubsetSumMultipleTen => {
            let pos = witness_positions(rng, len, sum_arity(task.id));
            let (&last, rest) = pos.split_last()?;
            let partial: u64 = rest.iter().map(|&i| list[i]).sum();
            list[last] = source.sample_with_residue(rng, 10, (10 - partial % 10) % 10)?;
        }
        _ => {}
    }
    attach_aux(task, list, rng)
}

/// Instances built from OOD elements, plus the number of attempts that
/// failed to produce a solvable instance.
#[derive(Debug, Clone, Default)]
pub struct OodBuild {
    pub instances: Vec<ProblemInstance>,
    pub skipped: usize,
}

const OOD_RETRIES: usize = 8;

/// Builds `count` OOD candidates. Each takes its shape from an ID instance
/// drawn with replacement.
pub fn build_ood_instances(
    id_instances: &[ProblemInstance],
    source: &ComplementSampler,
    task: &TaskSpec,
    count: usize,
    seed: u64,
) -> Result<OodBuild> {
    if id_instances.is_empty() {
        return Err(Error::EmptyInput("ID split has no instances to match lengths against"));
    }
    let mut rng = seeds::rng(seed, &["ood-build", task.id.as_str()]);
    let mut out = OodBuild::default();
    for _ in 0..count {
        let shape = id_instances[rng.random_range(0..id_instances.len())].shape();
        let built = (0..OOD_RETRIES).find_map(|_| {
            let p = build_ood_payload(task, &shape, source, &mut rng)?;
            let x = ProblemInstance::new(task.id, Split::Ood, p);
            oracle::is_solvable(&x).then_some(x)
        });
        match built {
            Some(x) => out.instances.push(x),
            None => out.skipped += 1,
        }
    }
    Ok(out)
}

/// Drops schema-invalid, unsolvable and repeated instances, keeping the
/// first occurrence of each payload.
pub fn validate_and_dedup(instances: Vec<ProblemInstance>, task: &TaskSpec) -> Vec<ProblemInstance> {
    let mut seen = HashSet::new();
    instances
        .into_iter()
        .filter(|x| x.task == task.id && oracle::is_solvable(x) && seen.insert(x.payload.clone()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub subject: String,
    pub harvest: HarvestStats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSplit {
    pub task: TaskId,
    pub split: Split,
    pub instances: Vec<ProblemInstance>,
    pub seed: u64,
    pub provenance: Provenance,
}

/// Uniform subsample of exactly `size` instances, kept in input order.
pub fn finalize_split(
    instances: Vec<ProblemInstance>,
    task: TaskId,
    split: Split,
    size: usize,
    seed: u64,
    provenance: Provenance,
) -> Result<DatasetSplit> {
    if instances.len() < size {
        return Err(Error::Shortfall { task, split, needed: size, available: instances.len() });
    }
    let mut rng = seeds::rng(seed, &["finalize", task.as_str(), split.as_str()]);
    let mut keep = index::sample(&mut rng, instances.len(), size).into_vec();
    keep.sort_unstable();
    let mut slots: Vec<Option<ProblemInstance>> = instances.into_iter().map(Some).collect();
    let instances = keep
        .into_iter()
        .map(|i| slots[i].take().expect("indices are distinct").with_split(split))
        .collect();
    Ok(DatasetSplit { task, split, instances, seed, provenance })
}

#[derive(Serialize, Deserialize)]
struct SplitLine {
    task_id: TaskId,
    split: Split,
    payload: Payload,
    length: usize,
    seed: u64,
    provenance: Provenance,
}

impl DatasetSplit {
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for x in &self.instances {
            let line = SplitLine {
                task_id: x.task,
                split: x.split,
                payload: x.payload.clone(),
                length: x.length(),
                seed: self.seed,
                provenance: self.provenance.clone(),
            };
            out.push_str(&serde_json::to_string(&line).expect("split line serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str, path: &Path) -> Result<Self> {
        let mut lines = Vec::new();
        for (i, l) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let line: SplitLine = serde_json::from_str(l)
                .map_err(|source| Error::Record { path: path.to_path_buf(), line: i + 1, source })?;
            lines.push(line);
        }
        let first = lines.first().ok_or(Error::EmptyInput("split file has no instances"))?;
        let (task, split, seed, provenance) =
            (first.task_id, first.split, first.seed, first.provenance.clone());
        let instances = lines
            .into_iter()
            .map(|l| ProblemInstance::new(l.task_id, l.split, l.payload))
            .collect();
        Ok(Self { task, split, instances, seed, provenance })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_jsonl(&text, path)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisConfig {
    pub min_instances: usize,
    pub split_size: usize,
    pub top_p: f64,
    pub universal: RangeInclusive<u64>,
    pub seed: u64,
    pub concurrency: usize,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        Self {
            min_instances: DEFAULT_MIN_INSTANCES,
            split_size: DEFAULT_SPLIT_SIZE,
            top_p: DEFAULT_TOP_P,
            universal: DEFAULT_UNIVERSAL,
            seed: 0,
            concurrency: 8,
        }
    }
}

impl SynthesisConfig {
    /// 500 harvested examples and 32 instances per split.
    pub fn desk(seed: u64) -> Self {
        Self { min_instances: 500, split_size: 32, seed, ..Self::default() }
    }
}

/// Everything synthesized for one task.
#[derive(Debug, Clone)]
pub struct TaskSynthesis {
    pub harvest: Harvest,
    pub distribution: ElementDistribution,
    pub id: DatasetSplit,
    pub ood: DatasetSplit,
    pub extraction_skipped: usize,
    pub ood_skipped: usize,
}

/// Runs the whole pipeline for one task. A harvest that fails outright is a
/// gateway error; nothing is finalized in that case.
pub fn synthesize_task(
    subject: &dyn Subject,
    task: &TaskSpec,
    cfg: &SynthesisConfig,
) -> Result<TaskSynthesis> {
    let harvest = harvest_id_corpus(subject, task, cfg.min_instances, cfg.concurrency);
    if harvest.stats.shortfall {
        if let Some(e) = &harvest.last_error {
            return Err(Error::Gateway(e.clone()));
        }
    }
    let extracted = extract_instances(&harvest.transcripts, task, cfg.seed);
    let corpus = validate_and_dedup(extracted.instances, task);
    let distribution = build_distribution(&corpus, cfg.top_p)?;
    let source = ComplementSampler::new(cfg.universal.clone(), &distribution.id_set())?;
    let provenance = Provenance { subject: subject.id().to_string(), harvest: harvest.stats.clone() };

    let id = finalize_split(corpus, task.id, Split::Id, cfg.split_size, cfg.seed, provenance.clone())?;
    let built = build_ood_instances(&id.instances, &source, task, cfg.split_size * 2, cfg.seed)?;
    let candidates = validate_and_dedup(built.instances, task);
    let ood = finalize_split(candidates, task.id, Split::Ood, cfg.split_size, cfg.seed, provenance)?;
    Ok(TaskSynthesis {
        harvest,
        distribution,
        id,
        ood,
        extraction_skipped: extracted.skipped,
        ood_skipped: built.skipped,
    })
}
