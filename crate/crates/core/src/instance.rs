//! Concrete problem instances.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::catalog::{InputKind, TaskId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Id,
    Ood,
    Unassigned,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Id => "id",
            Split::Ood => "ood",
            Split::Unassigned => "unassigned",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Id => "ID",
            Split::Ood => "OOD",
            Split::Unassigned => "unassigned",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    NumberList { list: Vec<u64> },
    ListPlusK { list: Vec<u64>, k: u64 },
    ListPlusTarget { list: Vec<u64>, target: u64 },
    /// `a` and `b` bound an open interval.
    ListPlusRange { list: Vec<u64>, a: u64, b: u64 },
    ListPair { first: Vec<u64>, second: Vec<u64> },
    AdjacencyMatrix { matrix: Vec<Vec<u64>> },
}

impl Payload {
    pub fn kind(&self) -> InputKind {
        match self {
            Payload::NumberList { .. } => InputKind::NumberList,
            Payload::ListPlusK { .. } => InputKind::ListPlusK,
            Payload::ListPlusTarget { .. } => InputKind::ListPlusTarget,
            Payload::ListPlusRange { .. } => InputKind::ListPlusRange,
            Payload::ListPair { .. } => InputKind::ListPair,
            Payload::AdjacencyMatrix { .. } => InputKind::AdjacencyMatrix,
        }
    }

    /// The primary list for list-shaped payloads.
    pub fn list(&self) -> Option<&[u64]> {
        match self {
            Payload::NumberList { list }
            | Payload::ListPlusK { list, .. }
            | Payload::ListPlusTarget { list, .. }
            | Payload::ListPlusRange { list, .. } => Some(list),
            Payload::ListPair { first, .. } => Some(first),
            Payload::AdjacencyMatrix { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub task: TaskId,
    pub split: Split,
    pub payload: Payload,
}

impl ProblemInstance {
    pub fn new(task: TaskId, split: Split, payload: Payload) -> Self {
        Self { task, split, payload }
    }

    pub fn with_split(mut self, split: Split) -> Self {
        self.split = split;
        self
    }

    /// List length, first-list length for pairs, or city count.
    pub fn length(&self) -> usize {
        match &self.payload {
            Payload::AdjacencyMatrix { matrix } => matrix.len(),
            p => p.list().map_or(0, <[u64]>::len),
        }
    }

    /// Every list length in the payload: one entry, or two for list pairs.
    pub fn shape(&self) -> Vec<usize> {
        match &self.payload {
            Payload::ListPair { first, second } => vec![first.len(), second.len()],
            _ => vec![self.length()],
        }
    }

    /// The numeric data elements. Auxiliary scalars (k, target, a, b) are
    /// excluded, as is the structural zero diagonal of adjacency matrices;
    /// each symmetric distance is reported once.
    pub fn elements(&self) -> Vec<u64> {
        match &self.payload {
            Payload::ListPair { first, second } => first.iter().chain(second).copied().collect(),
            Payload::AdjacencyMatrix { matrix } => {
                let mut out = Vec::new();
                for (i, row) in matrix.iter().enumerate() {
                    out.extend(row.iter().skip(i + 1).copied());
                }
                out
            }
            p => p.list().map(<[u64]>::to_vec).unwrap_or_default(),
        }
    }

    /// Hex SHA-256 over the task id and payload.
    pub fn digest(&self) -> String {
        #[derive(Serialize)]
        struct Key<'a> {
            task: TaskId,
            payload: &'a Payload,
        }
        let bytes = serde_json::to_vec(&Key { task: self.task, payload: &self.payload })
            .expect("payload serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    /// Checks the payload against the task's input schema.
    pub fn validate(&self) -> Result<(), String> {
        let spec = self.task.spec();
        let schema = &spec.input_schema;
        if self.payload.kind() != schema.kind {
            return Err(format!(
                "payload kind {:?} does not match schema kind {:?}",
                self.payload.kind(),
                schema.kind
            ));
        }
        for len in self.shape() {
            if len == 0 {
                return Err("empty list".into());
            }
            if !schema.length_bounds.contains(&len) {
                return Err(format!(
                    "length {len} outside {}..={}",
                    schema.length_bounds.start(),
                    schema.length_bounds.end()
                ));
            }
        }
        if let Some(e) = self.elements().into_iter().find(|e| !schema.element_bounds.contains(e)) {
            return Err(format!("element {e} outside element bounds"));
        }
        match &self.payload {
            Payload::ListPlusK { list, k } if *k == 0 || *k as usize > list.len() => {
                Err(format!("k = {k} is not a rank within a list of {}", list.len()))
            }
            Payload::ListPlusRange { a, b, .. } if a >= b => {
                Err(format!("empty open range ({a}, {b})"))
            }
            Payload::AdjacencyMatrix { matrix } => {
                let n = matrix.len();
                for (i, row) in matrix.iter().enumerate() {
                    if row.len() != n {
                        return Err(format!("row {i} has {} entries, expected {n}", row.len()));
                    }
                    if row[i] != 0 {
                        return Err(format!("non-zero diagonal at {i}"));
                    }
                    for j in 0..i {
                        if row[j] != matrix[j][i] {
                            return Err(format!("matrix not symmetric at ({i}, {j})"));
                        }
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list(task: TaskId, v: &[u64]) -> ProblemInstance {
        ProblemInstance::new(task, Split::Unassigned, Payload::NumberList { list: v.to_vec() })
    }

    #[test]
    fn validation() {
        assert!(list(TaskId::FindMaximum, &[74, 29, 63, 40, 88]).validate().is_ok());
        assert!(list(TaskId::FindMaximum, &[]).validate().is_err());
        assert!(list(TaskId::FindMaximum, &[1, 2]).validate().is_err());
        assert!(list(TaskId::FindMaximum, &[1, 2, 3, 10_000]).validate().is_err());
        assert!(list(TaskId::TwoSum, &[1, 2, 3, 4]).validate().is_err());
        let topk = ProblemInstance::new(
            TaskId::FindTopK,
            Split::Id,
            Payload::ListPlusK { list: vec![1, 2, 3, 4], k: 5 },
        );
        assert!(topk.validate().is_err());
    }

    #[test]
    fn matrix_checks() {
        let m = |rows: Vec<Vec<u64>>| {
            ProblemInstance::new(TaskId::Tsp, Split::Id, Payload::AdjacencyMatrix { matrix: rows })
        };
        let ok = m(vec![
            vec![0, 1, 2, 3],
            vec![1, 0, 4, 5],
            vec![2, 4, 0, 6],
            vec![3, 5, 6, 0],
        ]);
        assert!(ok.validate().is_ok());
        assert_eq!(ok.elements(), vec![1, 2, 3, 4, 5, 6]);
        let asym = m(vec![
            vec![0, 1, 2, 3],
            vec![9, 0, 4, 5],
            vec![2, 4, 0, 6],
            vec![3, 5, 6, 0],
        ]);
        assert!(asym.validate().unwrap_err().contains("symmetric"));
    }

    #[test]
    fn digest_ignores_split() {
        let a = list(TaskId::SortNumbers, &[3, 1, 2, 5]);
        let b = a.clone().with_split(Split::Ood);
        assert_eq!(a.digest(), b.digest());
        assert_ne!(a.digest(), list(TaskId::SortNumbers, &[3, 1, 2, 6]).digest());
    }
}
