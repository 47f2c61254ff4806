//! The task catalog: 17 anchor tasks grouped into five complexity levels and
//! three probe tasks whose solvers span a wide complexity range.
//!
//! Catalog order is stable: anchor tasks level by level (the order in which
//! they appear in the level table), then the probes LCE, LIS, LCS.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the six time-complexity classes, ordered by ordinal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexityClass {
    Linear,
    Linearithmic,
    Quadratic,
    Cubic,
    Quartic,
    Exponential,
}

impl ComplexityClass {
    pub const ALL: [ComplexityClass; 6] = [
        ComplexityClass::Linear,
        ComplexityClass::Linearithmic,
        ComplexityClass::Quadratic,
        ComplexityClass::Cubic,
        ComplexityClass::Quartic,
        ComplexityClass::Exponential,
    ];

    pub fn ordinal(self) -> u8 {
        self as u8
    }

    pub fn from_ordinal(ordinal: u8) -> Option<Self> {
        Self::ALL.get(ordinal as usize).copied()
    }

    /// The growth term inside `O(..)`.
    pub fn term(self) -> &'static str {
        match self {
            ComplexityClass::Linear => "N",
            ComplexityClass::Linearithmic => "N log N",
            ComplexityClass::Quadratic => "N^2",
            ComplexityClass::Cubic => "N^3",
            ComplexityClass::Quartic => "N^4",
            ComplexityClass::Exponential => "2^N",
        }
    }

    /// Rank among the polynomial-degree steps N, N^2, N^3, N^4, 2^N.
    /// `N log N` shares the rank of `N`: it is a refinement between N and N^2,
    /// not a separate step.
    fn step(self) -> u8 {
        match self {
            ComplexityClass::Linear | ComplexityClass::Linearithmic => 0,
            ComplexityClass::Quadratic => 1,
            ComplexityClass::Cubic => 2,
            ComplexityClass::Quartic => 3,
            ComplexityClass::Exponential => 4,
        }
    }
}

impl fmt::Display for ComplexityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O({})", self.term())
    }
}

/// A complexity range `O([lower, upper])`; a single class when both ends agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComplexityInterval {
    lower: ComplexityClass,
    upper: ComplexityClass,
}

impl ComplexityInterval {
    pub const LINEAR: Self = Self::exact(ComplexityClass::Linear);
    pub const LINEAR_TO_QUADRATIC: Self =
        Self::span(ComplexityClass::Linear, ComplexityClass::Quadratic);
    pub const QUADRATIC_TO_CUBIC: Self =
        Self::span(ComplexityClass::Quadratic, ComplexityClass::Cubic);
    pub const CUBIC_TO_QUARTIC: Self =
        Self::span(ComplexityClass::Cubic, ComplexityClass::Quartic);
    pub const EXPONENTIAL: Self = Self::exact(ComplexityClass::Exponential);

    /// The five anchor levels in increasing order of complexity.
    pub const ANCHOR_LEVELS: [ComplexityInterval; 5] = [
        Self::LINEAR,
        Self::LINEAR_TO_QUADRATIC,
        Self::QUADRATIC_TO_CUBIC,
        Self::CUBIC_TO_QUARTIC,
        Self::EXPONENTIAL,
    ];

    const fn exact(class: ComplexityClass) -> Self {
        Self { lower: class, upper: class }
    }

    const fn span(lower: ComplexityClass, upper: ComplexityClass) -> Self {
        Self { lower, upper }
    }

    pub fn new(lower: ComplexityClass, upper: ComplexityClass) -> Result<Self> {
        if lower > upper {
            return Err(Error::Catalog(format!(
                "interval lower bound {lower} exceeds upper bound {upper}"
            )));
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> ComplexityClass {
        self.lower
    }

    pub fn upper(&self) -> ComplexityClass {
        self.upper
    }

    /// True when the interval covers at most two adjacent degree steps.
    pub fn is_adjacent_span(&self) -> bool {
        self.upper.step() - self.lower.step() <= 1
    }

    /// Position among [`Self::ANCHOR_LEVELS`], if this is an anchor level.
    pub fn anchor_index(&self) -> Option<usize> {
        Self::ANCHOR_LEVELS.iter().position(|l| l == self)
    }

    pub fn from_anchor_index(index: usize) -> Option<Self> {
        Self::ANCHOR_LEVELS.get(index).copied()
    }
}

impl fmt::Display for ComplexityInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lower == self.upper {
            write!(f, "O({})", self.lower.term())
        } else {
            write!(f, "O([{},{}])", self.lower.term(), self.upper.term())
        }
    }
}

impl FromStr for ComplexityInterval {
    type Err = Error;

    /// Accepts the rendered form (`O([N^2,N^3])`), with optional spaces, a
    /// half-open `)` upper bracket, and the superscript digits `²³⁴`.
    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '²' => "^2".to_string(),
                '³' => "^3".to_string(),
                '⁴' => "^4".to_string(),
                other => other.to_string(),
            })
            .collect();
        let parse_term = |t: &str| -> Option<ComplexityClass> {
            ComplexityClass::ALL
                .into_iter()
                .find(|c| c.term().replace(' ', "") == t)
        };
        let bad = || Error::Catalog(format!("unrecognised complexity interval `{s}`"));
        let inner = norm
            .strip_prefix("O(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        if let Some(range) = inner.strip_prefix('[') {
            let range = range.trim_end_matches([']', ')']);
            let (lo, hi) = range.split_once(',').ok_or_else(bad)?;
            let lo = parse_term(lo).ok_or_else(bad)?;
            let hi = parse_term(hi).ok_or_else(bad)?;
            Self::new(lo, hi)
        } else {
            parse_term(inner).map(Self::exact).ok_or_else(bad)
        }
    }
}

impl Serialize for ComplexityInterval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ComplexityInterval {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Stable task identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskId {
    FindMinimum,
    FindMaximum,
    FindMode,
    FindTopK,
    TwoSum,
    SortNumbers,
    RemoveDuplicates,
    ThreeSumMultipleTen,
    ThreeSumInRange,
    ThreeSum,
    FourSumMultipleTen,
    FourSumInRange,
    FourSum,
    SubsetSumMultipleTen,
    SubsetSumInRange,
    SubsetSum,
    Tsp,
    LongestConsecutiveElements,
    LongestIncreasingSubsequence,
    LongestCommonSubarray,
}

impl TaskId {
    pub const ALL: [TaskId; 20] = [
        TaskId::FindMinimum,
        TaskId::FindMaximum,
        TaskId::FindMode,
        TaskId::FindTopK,
        TaskId::TwoSum,
        TaskId::SortNumbers,
        TaskId::RemoveDuplicates,
        TaskId::ThreeSumMultipleTen,
        TaskId::ThreeSumInRange,
        TaskId::ThreeSum,
        TaskId::FourSumMultipleTen,
        TaskId::FourSumInRange,
        TaskId::FourSum,
        TaskId::SubsetSumMultipleTen,
        TaskId::SubsetSumInRange,
        TaskId::SubsetSum,
        TaskId::Tsp,
        TaskId::LongestConsecutiveElements,
        TaskId::LongestIncreasingSubsequence,
        TaskId::LongestCommonSubarray,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TaskId::FindMinimum => "find_minimum",
            TaskId::FindMaximum => "find_maximum",
            TaskId::FindMode => "find_mode",
            TaskId::FindTopK => "find_top_k",
            TaskId::TwoSum => "two_sum",
            TaskId::SortNumbers => "sort_numbers",
            TaskId::RemoveDuplicates => "remove_duplicates",
            TaskId::ThreeSumMultipleTen => "three_sum_multiple_ten",
            TaskId::ThreeSumInRange => "three_sum_in_range",
            TaskId::ThreeSum => "three_sum",
            TaskId::FourSumMultipleTen => "four_sum_multiple_ten",
            TaskId::FourSumInRange => "four_sum_in_range",
            TaskId::FourSum => "four_sum",
            TaskId::SubsetSumMultipleTen => "subset_sum_multiple_ten",
            TaskId::SubsetSumInRange => "subset_sum_in_range",
            TaskId::SubsetSum => "subset_sum",
            TaskId::Tsp => "tsp",
            TaskId::LongestConsecutiveElements => "longest_consecutive_elements",
            TaskId::LongestIncreasingSubsequence => "longest_increasing_subsequence",
            TaskId::LongestCommonSubarray => "longest_common_subarray",
        }
    }

    pub fn spec(self) -> &'static TaskSpec {
        &CATALOG[self as usize]
    }
}

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TaskId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TaskId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Catalog(format!("unknown task id `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskRole {
    Anchor,
    Probe,
}

/// Shape of a task's inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputKind {
    NumberList,
    /// A list and a rank `k` (find top-k).
    ListPlusK,
    /// A list and a target sum `k`.
    ListPlusTarget,
    /// A list and an open range `(a, b)`.
    ListPlusRange,
    ListPair,
    AdjacencyMatrix,
}

/// Answer shape demanded from the subject.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnswerShape {
    Scalar,
    /// Order matters (sorted output, deduplicated output, subsequences).
    OrderedList,
    /// A sub-multiset of the input; order is not graded.
    Multiset,
    Tour,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputSchema {
    pub kind: InputKind,
    /// Inclusive bounds on list length (each list, for pairs) or city count.
    pub length_bounds: RangeInclusive<usize>,
    /// Inclusive bounds on element values.
    pub element_bounds: RangeInclusive<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskSpec {
    pub id: TaskId,
    pub title: &'static str,
    pub description: &'static str,
    pub complexity: ComplexityInterval,
    pub input_schema: InputSchema,
    pub answer_shape: AnswerShape,
    pub answer_format: &'static str,
    pub role: TaskRole,
}

pub const DEFAULT_LENGTH_BOUNDS: RangeInclusive<usize> = 4..=16;
pub const TSP_CITY_BOUNDS: RangeInclusive<usize> = 4..=7;
pub const DEFAULT_ELEMENT_BOUNDS: RangeInclusive<u64> = 0..=9999;

const SCALAR_FORMAT: &str =
    "<ANSWER> should be a single non-negative integer written with digits only, e.g. 42";
const LIST_FORMAT: &str = "<ANSWER> should be a list of non-negative integers separated by \
commas and enclosed in square brackets, e.g. [1, 2, 3]";
const TOUR_FORMAT: &str = "<ANSWER> should be a list of city indices separated by commas and \
enclosed in square brackets, starting with city 0 and listing every city exactly once, \
e.g. [0, 2, 1, 3]";

fn schema(kind: InputKind) -> InputSchema {
    let length_bounds = match kind {
        InputKind::AdjacencyMatrix => TSP_CITY_BOUNDS,
        _ => DEFAULT_LENGTH_BOUNDS,
    };
    InputSchema { kind, length_bounds, element_bounds: DEFAULT_ELEMENT_BOUNDS }
}

struct Row {
    id: TaskId,
    title: &'static str,
    description: &'static str,
    complexity: ComplexityInterval,
    kind: InputKind,
    answer: AnswerShape,
    role: TaskRole,
}

const fn row(
    id: TaskId,
    title: &'static str,
    description: &'static str,
    complexity: ComplexityInterval,
    kind: InputKind,
    answer: AnswerShape,
    role: TaskRole,
) -> Row {
    Row { id, title, description, complexity, kind, answer, role }
}

const LIN: ComplexityInterval = ComplexityInterval::LINEAR;
const LIN_QUAD: ComplexityInterval = ComplexityInterval::LINEAR_TO_QUADRATIC;
const QUAD_CUBIC: ComplexityInterval = ComplexityInterval::QUADRATIC_TO_CUBIC;
const CUBIC_QUARTIC: ComplexityInterval = ComplexityInterval::CUBIC_TO_QUARTIC;
const EXP: ComplexityInterval = ComplexityInterval::EXPONENTIAL;

use AnswerShape as A;
use InputKind as K;
use TaskRole::{Anchor, Probe};

const ROWS: [Row; 20] = [
    row(TaskId::FindMinimum, "finding minimum",
        "Given a list of numbers separated by spaces, find the smallest number.",
        LIN, K::NumberList, A::Scalar, Anchor),
    row(TaskId::FindMaximum, "finding maximum",
        "Given a list of numbers separated by spaces, find the largest number.",
        LIN, K::NumberList, A::Scalar, Anchor),
    row(TaskId::FindMode, "finding mode",
        "Given a list of numbers separated by spaces, find the mode of the numbers.",
        LIN, K::NumberList, A::Scalar, Anchor),
    row(TaskId::FindTopK, "finding top k",
        "Given a list of numbers l separated by spaces and a positive integer k, find the kth largest number.",
        LIN_QUAD, K::ListPlusK, A::Scalar, Anchor),
    row(TaskId::TwoSum, "finding two numbers adding up to a specific sum",
        "Given a list of numbers l separated by spaces and a target value k, find two numbers in the list that add up to the target value.",
        LIN_QUAD, K::ListPlusTarget, A::Multiset, Anchor),
    row(TaskId::SortNumbers, "sorting numbers",
        "Given a list of numbers separated by spaces, sort the numbers in ascending order.",
        LIN_QUAD, K::NumberList, A::OrderedList, Anchor),
    row(TaskId::RemoveDuplicates, "removing duplicate numbers",
        "Given a list of numbers separated by spaces, remove duplicate numbers so that every number appears only once, and output the remaining numbers in their original order.",
        LIN_QUAD, K::NumberList, A::OrderedList, Anchor),
    row(TaskId::ThreeSumMultipleTen, "finding three numbers adding up to be multiple of 10",
        "Given a list of numbers separated by spaces, find three numbers in the list that add up to be a multiple of 10.",
        QUAD_CUBIC, K::NumberList, A::Multiset, Anchor),
    row(TaskId::ThreeSumInRange, "finding three numbers adding up to be in a specific range",
        "Given a list of numbers l separated by spaces and two numbers a and b, find three numbers in the list that add up to a value that is in the range (a, b).",
        QUAD_CUBIC, K::ListPlusRange, A::Multiset, Anchor),
    row(TaskId::ThreeSum, "finding three numbers adding up to a specific sum",
        "Given a list of numbers l separated by spaces and a target value k, find three numbers in the list that add up to the target value.",
        QUAD_CUBIC, K::ListPlusTarget, A::Multiset, Anchor),
    row(TaskId::FourSumMultipleTen, "finding four numbers adding up to be multiple of 10",
        "Given a list of numbers separated by spaces, find four numbers in the list that add up to be a multiple of 10.",
        CUBIC_QUARTIC, K::NumberList, A::Multiset, Anchor),
    row(TaskId::FourSumInRange, "finding four numbers adding up to be in a specific range",
        "Given a list of numbers l separated by spaces and two numbers a and b, find four numbers in the list that add up to a value that is in the range (a, b).",
        CUBIC_QUARTIC, K::ListPlusRange, A::Multiset, Anchor),
    row(TaskId::FourSum, "finding four numbers adding up to a specific sum",
        "Given a list of numbers l separated by spaces and a target value k, find four numbers in the list that add up to the target value.",
        CUBIC_QUARTIC, K::ListPlusTarget, A::Multiset, Anchor),
    row(TaskId::SubsetSumMultipleTen, "finding a subset adding up to be multiple of 10",
        "Given a list of numbers separated by spaces, find a subset in the list that adds up to be a multiple of 10.",
        EXP, K::NumberList, A::Multiset, Anchor),
    row(TaskId::SubsetSumInRange, "finding a subset adding up to be in a specific range",
        "Given a list of numbers l separated by spaces and two numbers a and b, find a subset in the list that adds up to a value that is in the range (a, b).",
        EXP, K::ListPlusRange, A::Multiset, Anchor),
    row(TaskId::SubsetSum, "finding the subset of numbers adding up to a specific sum",
        "Given a list of numbers l separated by spaces and a target value k, find a set of numbers in the list that add up to the target value.",
        EXP, K::ListPlusTarget, A::Multiset, Anchor),
    row(TaskId::Tsp, "Traveling Salesman Problem (TSP)",
        "Given a list of cities and the distances between each pair of cities, your goal is to find the shortest path that visits every city once and returns to the starting city. The inputs include 1) n: the number of cities; 2) D: an adjacency matrix of size n x n where D_ij is the distance between city i and city j. The output should be a list of integers representing the order of cities to visit. The cities are indexed from 0 to n-1. City 0 is always the starting city.",
        EXP, K::AdjacencyMatrix, A::Tour, Anchor),
    row(TaskId::LongestConsecutiveElements, "finding the longest consecutive elements",
        "Given a list of numbers separated by spaces, return the longest consecutive number sequence in ascending order. A consecutive sequence is a sequence of numbers where each number is exactly 1 greater than the previous number.",
        ComplexityInterval::span(ComplexityClass::Linear, ComplexityClass::Exponential),
        K::NumberList, A::OrderedList, Probe),
    row(TaskId::LongestIncreasingSubsequence, "finding the longest increasing subsequence",
        "Given a list of numbers separated by spaces, return the longest strictly increasing subsequence. A subsequence is a list that can be derived from another list by deleting some or no elements without changing the order of the remaining elements.",
        ComplexityInterval::span(ComplexityClass::Linearithmic, ComplexityClass::Exponential),
        K::NumberList, A::OrderedList, Probe),
    row(TaskId::LongestCommonSubarray, "finding the longest common subarray",
        "Given two integer arrays l_1 and l_2, return the longest common subarray that appears in both arrays. A subarray is a contiguous sequence of numbers within an array.",
        ComplexityInterval::span(ComplexityClass::Quadratic, ComplexityClass::Exponential),
        K::ListPair, A::OrderedList, Probe),
];

static CATALOG: std::sync::LazyLock<Vec<TaskSpec>> = std::sync::LazyLock::new(|| {
    ROWS.iter()
        .map(|r| TaskSpec {
            id: r.id,
            title: r.title,
            description: r.description,
            complexity: r.complexity,
            input_schema: schema(r.kind),
            answer_shape: r.answer,
            answer_format: match r.answer {
                A::Scalar => SCALAR_FORMAT,
                A::OrderedList | A::Multiset => LIST_FORMAT,
                A::Tour => TOUR_FORMAT,
            },
            role: r.role,
        })
        .collect()
});

/// All tasks in catalog order, optionally restricted to one role.
pub fn list_tasks(role: Option<TaskRole>) -> Vec<&'static TaskSpec> {
    CATALOG
        .iter()
        .filter(|t| role.is_none_or(|r| t.role == r))
        .collect()
}

/// The anchor tasks of one level.
pub fn tasks_for_level(level: ComplexityInterval) -> Result<Vec<&'static TaskSpec>> {
    if level.anchor_index().is_none() {
        return Err(Error::Catalog(format!(
            "{level} is not an anchor level; expected one of {}",
            ComplexityInterval::ANCHOR_LEVELS.map(|l| l.to_string()).join(", ")
        )));
    }
    Ok(list_tasks(Some(TaskRole::Anchor))
        .into_iter()
        .filter(|t| t.complexity == level)
        .collect())
}

pub fn render_description(task: &TaskSpec) -> &'static str {
    task.description
}

/// One line of the machine-readable catalog manifest.
#[derive(Debug, Serialize)]
struct ManifestRecord<'a> {
    id: TaskId,
    title: &'a str,
    description: &'a str,
    interval: ComplexityInterval,
    role: TaskRole,
    schema: &'a InputSchema,
    answer_shape: AnswerShape,
    answer_format: &'a str,
}

/// The catalog as line-delimited JSON, one record per task.
pub fn manifest_jsonl() -> String {
    let mut out = String::new();
    for t in list_tasks(None) {
        let rec = ManifestRecord {
            id: t.id,
            title: t.title,
            description: t.description,
            interval: t.complexity,
            role: t.role,
            schema: &t.input_schema,
            answer_shape: t.answer_shape,
            answer_format: t.answer_format,
        };
        out.push_str(&serde_json::to_string(&rec).expect("manifest record serializes"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn ids(tasks: &[&TaskSpec]) -> Vec<TaskId> {
        tasks.iter().map(|t| t.id).collect()
    }

    #[test]
    fn counts_by_role() {
        assert_eq!(list_tasks(None).len(), 20);
        assert_eq!(list_tasks(Some(TaskRole::Anchor)).len(), 17);
        let probes: HashSet<_> = ids(&list_tasks(Some(TaskRole::Probe))).into_iter().collect();
        assert_eq!(
            probes,
            HashSet::from([
                TaskId::LongestCommonSubarray,
                TaskId::LongestIncreasingSubsequence,
                TaskId::LongestConsecutiveElements,
            ])
        );
    }

    #[test]
    fn level_table_rows() {
        use TaskId::*;
        let table: [(ComplexityInterval, Vec<TaskId>); 5] = [
            (ComplexityInterval::LINEAR, vec![FindMinimum, FindMaximum, FindMode]),
            (
                ComplexityInterval::LINEAR_TO_QUADRATIC,
                vec![FindTopK, TwoSum, SortNumbers, RemoveDuplicates],
            ),
            (
                ComplexityInterval::QUADRATIC_TO_CUBIC,
                vec![ThreeSumMultipleTen, ThreeSumInRange, ThreeSum],
            ),
            (
                ComplexityInterval::CUBIC_TO_QUARTIC,
                vec![FourSumMultipleTen, FourSumInRange, FourSum],
            ),
            (
                ComplexityInterval::EXPONENTIAL,
                vec![SubsetSumMultipleTen, SubsetSumInRange, SubsetSum, Tsp],
            ),
        ];
        let mut seen = 0;
        for (level, expected) in &table {
            let got = ids(&tasks_for_level(*level).unwrap());
            assert_eq!(&got, expected, "row {level}");
            seen += got.len();
            for t in tasks_for_level(*level).unwrap() {
                assert_eq!(t.complexity, *level);
            }
        }
        assert_eq!(seen, 17);
    }

    #[test]
    fn unknown_level_rejected() {
        let probe_range =
            ComplexityInterval::new(ComplexityClass::Linear, ComplexityClass::Exponential).unwrap();
        let err = tasks_for_level(probe_range).unwrap_err();
        assert!(err.to_string().contains("not an anchor level"));
    }

    #[test]
    fn anchor_spans_are_adjacent() {
        for t in list_tasks(Some(TaskRole::Anchor)) {
            assert!(t.complexity.is_adjacent_span(), "{}", t.id);
        }
        for t in list_tasks(Some(TaskRole::Probe)) {
            assert!(!t.complexity.is_adjacent_span(), "{}", t.id);
        }
    }

    #[test]
    fn probe_ranges() {
        use ComplexityClass::*;
        let range = |id: TaskId| {
            let c = id.spec().complexity;
            (c.lower(), c.upper())
        };
        assert_eq!(range(TaskId::LongestIncreasingSubsequence), (Linearithmic, Exponential));
        assert_eq!(range(TaskId::LongestCommonSubarray), (Quadratic, Exponential));
        assert_eq!(range(TaskId::LongestConsecutiveElements), (Linear, Exponential));
    }

    #[test]
    fn ids_unique_and_roundtrip() {
        let mut seen = HashSet::new();
        for (i, t) in list_tasks(None).iter().enumerate() {
            assert!(seen.insert(t.id.as_str()));
            assert_eq!(TaskId::ALL[i], t.id);
            assert_eq!(t.id.as_str().parse::<TaskId>().unwrap(), t.id);
        }
    }

    #[test]
    fn descriptions() {
        assert_eq!(
            render_description(TaskId::FindMaximum.spec()),
            "Given a list of numbers separated by spaces, find the largest number."
        );
        let tsp = render_description(TaskId::Tsp.spec());
        assert!(tsp.contains("n: the number of cities"));
        assert!(tsp.contains("D: an adjacency matrix"));
        assert!(tsp.contains("City 0 is always the starting city."));
        let two = render_description(TaskId::TwoSum.spec());
        assert!(two.contains("list of numbers l") && two.contains("target value k"));
    }

    #[test]
    fn interval_labels_parse_back() {
        for level in ComplexityInterval::ANCHOR_LEVELS {
            assert_eq!(level.to_string().parse::<ComplexityInterval>().unwrap(), level);
        }
        assert_eq!(
            "O([N², N³))".parse::<ComplexityInterval>().unwrap(),
            ComplexityInterval::QUADRATIC_TO_CUBIC
        );
        assert_eq!(ComplexityInterval::LINEAR_TO_QUADRATIC.to_string(), "O([N,N^2])");
        assert!("O(N!)".parse::<ComplexityInterval>().is_err());
        assert!(ComplexityInterval::new(ComplexityClass::Cubic, ComplexityClass::Linear).is_err());
    }

    #[test]
    fn ordinals_dense() {
        for (i, c) in ComplexityClass::ALL.iter().enumerate() {
            assert_eq!(c.ordinal() as usize, i);
            assert_eq!(ComplexityClass::from_ordinal(i as u8), Some(*c));
        }
        assert_eq!(ComplexityClass::from_ordinal(6), None);
    }

    #[test]
    fn manifest_has_one_line_per_task() {
        let m = manifest_jsonl();
        let lines: Vec<_> = m.lines().collect();
        assert_eq!(lines.len(), 20);
        let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(first["id"], "find_minimum");
        assert_eq!(first["interval"], "O(N)");
    }
}
