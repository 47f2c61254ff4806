#![allow(dead_code, clippy::needless_range_loop)]

use std::path::Path;

use algoeval::catalog::InputKind;
use algoeval::gateway::{MemorizationProfile, SubjectConfig, SyntheticConfig};
use algoeval::runner::RunConfig;
use algoeval::{Payload, ProblemInstance, Split, TaskId};
use rand::seq::index;
use rand::Rng;

/// A schema-valid random instance with at most `max_len` elements per list.
/// Small element ranges are mixed in so that duplicates and sums collide.
pub fn random_instance(task: TaskId, rng: &mut impl Rng, max_len: usize) -> ProblemInstance {
    let spec = task.spec();
    let bounds = &spec.input_schema.length_bounds;
    let hi_len = max_len.min(*bounds.end());
    let mut len = || rng.random_range(*bounds.start()..=hi_len);
    let (l1, l2) = (len(), len());
    let top = if rng.random_bool(0.5) { 20 } else { 9999 };
    let mut draw = |n: usize| -> Vec<u64> { (0..n).map(|_| rng.random_range(0..=top)).collect() };
    let list = draw(l1);
    let second = draw(l2);
    let payload = match spec.input_schema.kind {
        InputKind::NumberList => Payload::NumberList { list },
        InputKind::ListPlusK => {
            let k = rng.random_range(1..=list.len() as u64);
            Payload::ListPlusK { list, k }
        }
        InputKind::ListPlusTarget => {
            let target = if rng.random_bool(0.5) {
                let r = rng.random_range(1..=list.len());
                index::sample(rng, list.len(), r).iter().map(|i| list[i]).sum()
            } else {
                rng.random_range(0..=4 * top)
            };
            Payload::ListPlusTarget { list, target }
        }
        InputKind::ListPlusRange => {
            let a = rng.random_range(0..=3 * top);
            let b = a + rng.random_range(1..=top.min(50));
            Payload::ListPlusRange { list, a, b }
        }
        InputKind::ListPair => Payload::ListPair { first: list, second },
        InputKind::AdjacencyMatrix => {
            let n = l1;
            let mut m = vec![vec![0u64; n]; n];
            for i in 0..n {
                for j in i + 1..n {
                    let d = rng.random_range(0..=top);
                    m[i][j] = d;
                    m[j][i] = d;
                }
            }
            Payload::AdjacencyMatrix { matrix: m }
        }
    };
    ProblemInstance::new(task, Split::Unassigned, payload)
}

pub fn synthetic_config(dir: &Path, seed: u64, subjects: Vec<(&str, MemorizationProfile)>) -> RunConfig {
    let subjects = subjects
        .into_iter()
        .map(|(id, p)| SubjectConfig::Synthetic(SyntheticConfig::new(id, p)))
        .collect();
    RunConfig {
        output_dir: dir.to_path_buf(),
        seed,
        desk_scale: true,
        split_size: None,
        min_instances: None,
        top_p: 0.9,
        universal: [0, 9999],
        tasks: None,
        concurrency: None,
        subjects,
        only_subject: None,
    }
}

/// Every file under `root`, relative path to contents, skipping `skip`.
pub fn snapshot(root: &Path, skip: &[&str]) -> std::collections::BTreeMap<String, Vec<u8>> {
    let mut out = std::collections::BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
                continue;
            }
            let rel = p.strip_prefix(root).unwrap().to_string_lossy().into_owned();
            if !skip.contains(&rel.as_str()) {
                out.insert(rel, std::fs::read(&p).unwrap());
            }
        }
    }
    out
}
