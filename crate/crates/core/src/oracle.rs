//! Exhaustive reference solvers and answer verifiers.
//!
//! Every solver enumerates the full search space (pairs, k-tuples, subsets,
//! permutations) and is only meant for the small instances the generator
//! produces. Verifiers accept any valid witness for the sum tasks and demand
//! the optimum for the optimization tasks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog::{AnswerShape, TaskId};
use crate::error::{Error, Result};
use crate::instance::{Payload, ProblemInstance};

/// Largest list the subset enumerators accept.
pub const MAX_SUBSET_LEN: usize = 20;
/// Largest city count the tour enumerator accepts.
pub const MAX_TSP_CITIES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "shape", content = "value", rename_all = "snake_case")]
pub enum AnswerValue {
    Scalar(u64),
    OrderedList(Vec<u64>),
    /// Stored sorted so that equality ignores order.
    Multiset(Vec<u64>),
    Tour(Vec<u64>),
}

impl AnswerValue {
    pub fn multiset(mut values: Vec<u64>) -> Self {
        values.sort_unstable();
        AnswerValue::Multiset(values)
    }

    pub fn shape(&self) -> AnswerShape {
        match self {
            AnswerValue::Scalar(_) => AnswerShape::Scalar,
            AnswerValue::OrderedList(_) => AnswerShape::OrderedList,
            AnswerValue::Multiset(_) => AnswerShape::Multiset,
            AnswerValue::Tour(_) => AnswerShape::Tour,
        }
    }

    /// Builds a value of the given shape from parsed integers.
    pub fn from_numbers(shape: AnswerShape, numbers: Vec<u64>) -> Option<Self> {
        Some(match shape {
            AnswerShape::Scalar => match numbers.as_slice() {
                [x] => AnswerValue::Scalar(*x),
                _ => return None,
            },
            AnswerShape::OrderedList => AnswerValue::OrderedList(numbers),
            AnswerShape::Multiset => AnswerValue::multiset(numbers),
            AnswerShape::Tour => AnswerValue::Tour(numbers),
        })
    }

    pub fn numbers(&self) -> Vec<u64> {
        match self {
            AnswerValue::Scalar(x) => vec![*x],
            AnswerValue::OrderedList(v) | AnswerValue::Multiset(v) | AnswerValue::Tour(v) => {
                v.clone()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CandidateAnswer {
    pub task: TaskId,
    pub value: AnswerValue,
}

impl CandidateAnswer {
    pub fn new(task: TaskId, value: AnswerValue) -> Self {
        Self { task, value }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Correct,
    Incorrect,
    Malformed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerVerdict {
    pub outcome: Outcome,
    pub detail: String,
}

impl AnswerVerdict {
    fn correct() -> Self {
        Self { outcome: Outcome::Correct, detail: "ok".into() }
    }

    fn incorrect(detail: impl Into<String>) -> Self {
        Self { outcome: Outcome::Incorrect, detail: detail.into() }
    }

    fn malformed(detail: impl Into<String>) -> Self {
        Self { outcome: Outcome::Malformed, detail: detail.into() }
    }

    pub fn is_correct(&self) -> bool {
        self.outcome == Outcome::Correct
    }
}

/// Condition a sum-task witness has to meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SumRule {
    MultipleOfTen,
    /// Open interval.
    InRange(u64, u64),
    Equals(u64),
}

impl SumRule {
    fn holds(self, sum: u64) -> bool {
        match self {
            SumRule::MultipleOfTen => sum.is_multiple_of(10),
            SumRule::InRange(a, b) => a < sum && sum < b,
            SumRule::Equals(k) => sum == k,
        }
    }
}

/// Witness size (`None` = any non-empty subset) and the rule for a sum task.
fn sum_task(instance: &ProblemInstance) -> Option<(Option<usize>, SumRule)> {
    use TaskId::*;
    let size = match instance.task {
        TwoSum => Some(2),
        ThreeSum | ThreeSumInRange | ThreeSumMultipleTen => Some(3),
        FourSum | FourSumInRange | FourSumMultipleTen => Some(4),
        SubsetSum | SubsetSumInRange | SubsetSumMultipleTen => None,
        _ => return None,
    };
    let rule = match &instance.payload {
        Payload::ListPlusTarget { target, .. } => SumRule::Equals(*target),
        Payload::ListPlusRange { a, b, .. } => SumRule::InRange(*a, *b),
        Payload::NumberList { .. } => SumRule::MultipleOfTen,
        _ => return None,
    };
    Some((size, rule))
}

fn total(values: impl IntoIterator<Item = u64>) -> u64 {
    values.into_iter().fold(0u64, u64::saturating_add)
}

/// First index combination of `size` positions (lexicographic) meeting `rule`.
fn find_combination(list: &[u64], size: usize, rule: SumRule) -> Option<Vec<u64>> {
    let n = list.len();
    if size > n {
        return None;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        if rule.holds(total(idx.iter().map(|&i| list[i]))) {
            return Some(idx.iter().map(|&i| list[i]).collect());
        }
        // advance to the next combination
        let mut i = size;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] != i + n - size {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Subsets of positions as bitmasks, in increasing order, excluding the empty set.
fn masks(n: usize) -> impl Iterator<Item = u32> {
    assert!(n <= MAX_SUBSET_LEN, "subset enumeration limited to {MAX_SUBSET_LEN} elements");
    1..(1u32 << n)
}

fn pick(list: &[u64], mask: u32) -> impl Iterator<Item = u64> + '_ {
    list.iter()
        .enumerate()
        .filter(move |(i, _)| mask & (1 << i) != 0)
        .map(|(_, &v)| v)
}

fn find_subset(list: &[u64], rule: SumRule) -> Option<Vec<u64>> {
    masks(list.len())
        .find(|&m| rule.holds(total(pick(list, m))))
        .map(|m| pick(list, m).collect())
}

fn closed_tour_length(matrix: &[Vec<u64>], tour: &[usize]) -> u64 {
    let n = tour.len();
    total((0..n).map(|i| matrix[tour[i]][tour[(i + 1) % n]]))
}

/// Lexicographically next permutation in place; false after the last one.
fn next_permutation(v: &mut [usize]) -> bool {
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

/// Shortest closed tour from city 0 by enumerating all (n-1)! orders.
fn shortest_tour(matrix: &[Vec<u64>]) -> (Vec<usize>, u64) {
    let n = matrix.len();
    assert!(n <= MAX_TSP_CITIES, "tour enumeration limited to {MAX_TSP_CITIES} cities");
    let mut rest: Vec<usize> = (1..n).collect();
    let mut best: Option<(Vec<usize>, u64)> = None;
    loop {
        let tour: Vec<usize> = std::iter::once(0).chain(rest.iter().copied()).collect();
        let len = closed_tour_length(matrix, &tour);
        if best.as_ref().is_none_or(|(_, b)| len < *b) {
            best = Some((tour, len));
        }
        if !next_permutation(&mut rest) {
            break;
        }
    }
    best.expect("at least one tour")
}

fn is_strictly_increasing(v: &[u64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

fn is_subsequence(needle: &[u64], hay: &[u64]) -> bool {
    let mut it = hay.iter();
    needle.iter().all(|x| it.any(|y| y == x))
}

fn is_subarray(needle: &[u64], hay: &[u64]) -> bool {
    needle.is_empty() || hay.windows(needle.len()).any(|w| w == needle)
}

fn longest_increasing_subsequence(list: &[u64]) -> Vec<u64> {
    let mut best: Vec<u64> = Vec::new();
    for m in masks(list.len()) {
        if (m.count_ones() as usize) <= best.len() {
            continue;
        }
        let sub: Vec<u64> = pick(list, m).collect();
        if is_strictly_increasing(&sub) {
            best = sub;
        }
    }
    best
}

fn longest_consecutive_run(list: &[u64]) -> Vec<u64> {
    let mut best: Vec<u64> = Vec::new();
    let mut starts: Vec<u64> = list.to_vec();
    starts.sort_unstable();
    starts.dedup();
    for &start in &starts {
        let mut run = vec![start];
        while let Some(next) = run.last().and_then(|v| v.checked_add(1)) {
            if !list.contains(&next) {
                break;
            }
            run.push(next);
        }
        if run.len() > best.len() {
            best = run;
        }
    }
    best
}

fn longest_common_subarray(first: &[u64], second: &[u64]) -> Vec<u64> {
    let mut best: &[u64] = &[];
    for start in 0..first.len() {
        for end in start + 1..=first.len() {
            let cand = &first[start..end];
            if cand.len() > best.len() && is_subarray(cand, second) {
                best = cand;
            }
        }
    }
    best.to_vec()
}

fn unique_mode(list: &[u64]) -> Option<u64> {
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for &v in list {
        *counts.entry(v).or_default() += 1;
    }
    let top = *counts.values().max()?;
    let mut modes = counts.iter().filter(|(_, &c)| c == top);
    let (&mode, _) = modes.next()?;
    modes.next().is_none().then_some(mode)
}

fn kth_largest(list: &[u64], k: u64) -> Option<u64> {
    let mut sorted = list.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted.get((k as usize).checked_sub(1)?).copied()
}

fn remove_duplicates(list: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(list.len());
    for &v in list {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

fn matrix_of(instance: &ProblemInstance) -> Option<&[Vec<u64>]> {
    match &instance.payload {
        Payload::AdjacencyMatrix { matrix } => Some(matrix),
        _ => None,
    }
}

/// One canonical correct answer.
pub fn solve(instance: &ProblemInstance) -> Result<CandidateAnswer> {
    instance
        .validate()
        .map_err(|reason| Error::InvalidInstance { task: instance.task, reason })?;
    let task = instance.task;
    let none = || Error::NoSolution(task);
    let list = instance.payload.list().unwrap_or(&[]);
    use TaskId::*;
    let value = match task {
        FindMinimum => AnswerValue::Scalar(*list.iter().min().ok_or_else(none)?),
        FindMaximum => AnswerValue::Scalar(*list.iter().max().ok_or_else(none)?),
        FindMode => AnswerValue::Scalar(unique_mode(list).ok_or_else(none)?),
        FindTopK => {
            let Payload::ListPlusK { k, .. } = &instance.payload else { return Err(none()) };
            AnswerValue::Scalar(kth_largest(list, *k).ok_or_else(none)?)
        }
        SortNumbers => {
            let mut v = list.to_vec();
            v.sort_unstable();
            AnswerValue::OrderedList(v)
        }
        RemoveDuplicates => AnswerValue::OrderedList(remove_duplicates(list)),
        Tsp => {
            let matrix = matrix_of(instance).ok_or_else(none)?;
            let (tour, _) = shortest_tour(matrix);
            AnswerValue::Tour(tour.into_iter().map(|c| c as u64).collect())
        }
        LongestConsecutiveElements => AnswerValue::OrderedList(longest_consecutive_run(list)),
        LongestIncreasingSubsequence => {
            AnswerValue::OrderedList(longest_increasing_subsequence(list))
        }
        LongestCommonSubarray => {
            let Payload::ListPair { first, second } = &instance.payload else {
                return Err(none());
            };
            let best = longest_common_subarray(first, second);
            if best.is_empty() {
                return Err(none());
            }
            AnswerValue::OrderedList(best)
        }
        _ => {
            let (size, rule) = sum_task(instance).ok_or_else(none)?;
            let witness = match size {
                Some(r) => find_combination(list, r, rule),
                None => find_subset(list, rule),
            };
            AnswerValue::multiset(witness.ok_or_else(none)?)
        }
    };
    Ok(CandidateAnswer::new(task, value))
}

pub fn is_solvable(instance: &ProblemInstance) -> bool {
    solve(instance).is_ok()
}

/// True when `witness` can be drawn position-by-position from `pool`.
fn is_sub_multiset(witness: &[u64], pool: &[u64]) -> bool {
    let mut counts: BTreeMap<u64, isize> = BTreeMap::new();
    for &v in pool {
        *counts.entry(v).or_default() += 1;
    }
    witness.iter().all(|v| {
        let c = counts.entry(*v).or_default();
        *c -= 1;
        *c >= 0
    })
}

fn verify_tour(matrix: &[Vec<u64>], tour: &[u64]) -> AnswerVerdict {
    let n = matrix.len();
    let mut tour: Vec<u64> = tour.to_vec();
    // a closing return to city 0 is tolerated
    if tour.len() == n + 1 && tour.first() == Some(&0) && tour.last() == Some(&0) {
        tour.pop();
    }
    if tour.first() != Some(&0) {
        return AnswerVerdict::incorrect("tour does not start at city 0");
    }
    let mut seen = tour.clone();
    seen.sort_unstable();
    if seen != (0..n as u64).collect::<Vec<_>>() {
        return AnswerVerdict::incorrect(format!("not a permutation of cities 0..{}", n - 1));
    }
    let tour: Vec<usize> = tour.into_iter().map(|c| c as usize).collect();
    let (_, best) = shortest_tour(matrix);
    let len = closed_tour_length(matrix, &tour);
    if len == best {
        AnswerVerdict::correct()
    } else {
        AnswerVerdict::incorrect(format!("tour length {len}, optimum {best}"))
    }
}

fn verify_optimal_witness(
    witness: &[u64],
    optimum: usize,
    structural: Result<(), &'static str>,
) -> AnswerVerdict {
    if let Err(why) = structural {
        return AnswerVerdict::incorrect(why);
    }
    if witness.len() != optimum {
        return AnswerVerdict::incorrect(format!(
            "length {} but the optimum is {optimum}",
            witness.len()
        ));
    }
    AnswerVerdict::correct()
}

/// Grades a candidate answer against the task statement.
pub fn verify(instance: &ProblemInstance, answer: &CandidateAnswer) -> AnswerVerdict {
    let spec = instance.task.spec();
    if answer.task != instance.task {
        return AnswerVerdict::malformed(format!(
            "answer for {} graded against {}",
            answer.task, instance.task
        ));
    }
    if answer.value.shape() != spec.answer_shape {
        return AnswerVerdict::malformed(format!(
            "expected {:?} answer, got {:?}",
            spec.answer_shape,
            answer.value.shape()
        ));
    }
    if let Err(reason) = instance.validate() {
        return AnswerVerdict::incorrect(format!("instance is not schema-valid: {reason}"));
    }
    let list = instance.payload.list().unwrap_or(&[]);
    let got = answer.value.numbers();
    use TaskId::*;
    match instance.task {
        FindMinimum | FindMaximum | FindMode | FindTopK | SortNumbers | RemoveDuplicates => {
            match solve(instance) {
                Ok(expected) if expected.value == answer.value => AnswerVerdict::correct(),
                Ok(expected) => AnswerVerdict::incorrect(format!(
                    "expected {:?}, got {:?}",
                    expected.value.numbers(),
                    got
                )),
                Err(_) => AnswerVerdict::incorrect("instance has no well-defined answer"),
            }
        }
        Tsp => verify_tour(matrix_of(instance).unwrap_or(&[]), &got),
        LongestConsecutiveElements => {
            let structural = if got.is_empty() {
                Err("empty sequence")
            } else if !got.windows(2).all(|w| w[1] == w[0] + 1) {
                Err("elements are not consecutive")
            } else if !got.iter().all(|v| list.contains(v)) {
                Err("sequence uses values absent from the list")
            } else {
                Ok(())
            };
            verify_optimal_witness(&got, longest_consecutive_run(list).len(), structural)
        }
        LongestIncreasingSubsequence => {
            let structural = if got.is_empty() {
                Err("empty subsequence")
            } else if !is_strictly_increasing(&got) {
                Err("not strictly increasing")
            } else if !is_subsequence(&got, list) {
                Err("not a subsequence of the list")
            } else {
                Ok(())
            };
            verify_optimal_witness(&got, longest_increasing_subsequence(list).len(), structural)
        }
        LongestCommonSubarray => {
            let Payload::ListPair { first, second } = &instance.payload else {
                return AnswerVerdict::incorrect("not a list pair");
            };
            let optimum = longest_common_subarray(first, second).len();
            if optimum == 0 {
                return AnswerVerdict::incorrect("lists share no element");
            }
            let structural = if got.is_empty() {
                Err("empty subarray")
            } else if !is_subarray(&got, first) || !is_subarray(&got, second) {
                Err("not a contiguous subarray of both lists")
            } else {
                Ok(())
            };
            verify_optimal_witness(&got, optimum, structural)
        }
        _ => {
            let Some((size, rule)) = sum_task(instance) else {
                return AnswerVerdict::incorrect("unsupported payload");
            };
            match size {
                Some(r) if got.len() != r => {
                    return AnswerVerdict::incorrect(format!(
                        "expected {r} numbers, got {}",
                        got.len()
                    ))
                }
                None if got.is_empty() => return AnswerVerdict::incorrect("empty subset"),
                _ => {}
            }
            if !is_sub_multiset(&got, list) {
                return AnswerVerdict::incorrect("numbers are not drawn from the list");
            }
            let sum = total(got.iter().copied());
            if rule.holds(sum) {
                AnswerVerdict::correct()
            } else {
                AnswerVerdict::incorrect(format!("sum {sum} violates {rule:?}"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Split;

    fn inst(task: TaskId, payload: Payload) -> ProblemInstance {
        ProblemInstance::new(task, Split::Unassigned, payload)
    }

    fn nl(task: TaskId, v: &[u64]) -> ProblemInstance {
        inst(task, Payload::NumberList { list: v.to_vec() })
    }

    fn ans(task: TaskId, v: AnswerValue) -> CandidateAnswer {
        CandidateAnswer::new(task, v)
    }

    #[test]
    fn find_maximum() {
        let x = nl(TaskId::FindMaximum, &[74, 29, 63, 40, 88]);
        assert_eq!(solve(&x).unwrap().value, AnswerValue::Scalar(88));
        let v = verify(&x, &ans(TaskId::FindMaximum, AnswerValue::Scalar(63)));
        assert_eq!(v.outcome, Outcome::Incorrect);
    }

    #[test]
    fn two_sum_example() {
        let x = inst(
            TaskId::TwoSum,
            Payload::ListPlusTarget { list: vec![73, 41, 29, 12, 55, 4], target: 41 },
        );
        // pairs by brute force: only 29 + 12 = 41
        assert_eq!(solve(&x).unwrap().value, AnswerValue::multiset(vec![29, 12]));
    }

    #[test]
    fn two_sum_unsolvable() {
        let x = inst(
            TaskId::TwoSum,
            Payload::ListPlusTarget { list: vec![1, 2, 3, 4], target: 100 },
        );
        assert!(matches!(solve(&x), Err(Error::NoSolution(TaskId::TwoSum))));
        assert!(!is_solvable(&x));
    }

    #[test]
    fn three_sum_any_witness() {
        let x = inst(
            TaskId::ThreeSum,
            Payload::ListPlusTarget { list: vec![75, 30, 60, 45, 90, 15], target: 105 },
        );
        let v = verify(&x, &ans(TaskId::ThreeSum, AnswerValue::multiset(vec![30, 60, 15])));
        assert!(v.is_correct(), "{v:?}");
        // 45 + 45 + 15 = 105 but 45 occurs once
        let v = verify(&x, &ans(TaskId::ThreeSum, AnswerValue::multiset(vec![45, 45, 15])));
        assert_eq!(v.outcome, Outcome::Incorrect);
        let v = verify(&x, &ans(TaskId::ThreeSum, AnswerValue::multiset(vec![90, 15])));
        assert_eq!(v.outcome, Outcome::Incorrect);
    }

    #[test]
    fn duplicate_values_may_both_be_used() {
        let x = inst(
            TaskId::TwoSum,
            Payload::ListPlusTarget { list: vec![5, 5, 1, 2], target: 10 },
        );
        assert!(verify(&x, &ans(TaskId::TwoSum, AnswerValue::multiset(vec![5, 5]))).is_correct());
    }

    #[test]
    fn in_range_is_open() {
        // 7 + 12 + 17 .. the list has the sums needed around a=71, b=81
        let x = inst(
            TaskId::ThreeSumInRange,
            Payload::ListPlusRange { list: vec![7, 12, 17, 22, 27, 32], a: 71, b: 81 },
        );
        // 22 + 27 + 32 = 81: boundary, rejected
        let v = verify(&x, &ans(TaskId::ThreeSumInRange, AnswerValue::multiset(vec![22, 27, 32])));
        assert_eq!(v.outcome, Outcome::Incorrect);
        // 17 + 27 + 32 = 76
        let v = verify(&x, &ans(TaskId::ThreeSumInRange, AnswerValue::multiset(vec![17, 27, 32])));
        assert!(v.is_correct());
    }

    #[test]
    fn subset_multiple_ten() {
        let x = nl(TaskId::SubsetSumMultipleTen, &[2, 8, 18, 28, 38, 48]);
        assert!(is_solvable(&x));
        let v = verify(&x, &ans(TaskId::SubsetSumMultipleTen, AnswerValue::multiset(vec![2, 8])));
        assert!(v.is_correct());
        let v = verify(&x, &ans(TaskId::SubsetSumMultipleTen, AnswerValue::multiset(vec![])));
        assert_eq!(v.outcome, Outcome::Incorrect);
    }

    #[test]
    fn tsp_example() {
        let d = vec![
            vec![0, 12, 25, 18, 30],
            vec![12, 0, 15, 22, 20],
            vec![25, 15, 0, 28, 35],
            vec![18, 22, 28, 0, 17],
            vec![30, 20, 35, 17, 0],
        ];
        let x = inst(TaskId::Tsp, Payload::AdjacencyMatrix { matrix: d });
        let a = solve(&x).unwrap();
        assert!(verify(&x, &a).is_correct());
        // minimum over all 24 tours is 95 (0-2-1-4-3 and its reverse)
        let AnswerValue::Tour(t) = &a.value else { panic!() };
        let tour: Vec<usize> = t.iter().map(|&c| c as usize).collect();
        assert_eq!(closed_tour_length(x.payload_matrix(), &tour), 95);
        let closed = ans(TaskId::Tsp, AnswerValue::Tour(vec![0, 2, 1, 4, 3, 0]));
        assert!(verify(&x, &closed).is_correct());
        let reversed = ans(TaskId::Tsp, AnswerValue::Tour(vec![0, 3, 4, 1, 2]));
        assert!(verify(&x, &reversed).is_correct());
        let bad = ans(TaskId::Tsp, AnswerValue::Tour(vec![0, 1, 2, 3, 4]));
        assert_eq!(verify(&x, &bad).outcome, Outcome::Incorrect);
        let not_perm = ans(TaskId::Tsp, AnswerValue::Tour(vec![0, 1, 1, 3, 4]));
        assert_eq!(verify(&x, &not_perm).outcome, Outcome::Incorrect);
    }

    impl ProblemInstance {
        fn payload_matrix(&self) -> &[Vec<u64>] {
            matrix_of(self).unwrap()
        }
    }

    #[test]
    fn lis_example() {
        let x = nl(TaskId::LongestIncreasingSubsequence, &[2, 4, 3, 5, 1, 7, 6, 8, 0]);
        let a = |v: Vec<u64>| ans(TaskId::LongestIncreasingSubsequence, AnswerValue::OrderedList(v));
        assert!(verify(&x, &a(vec![2, 3, 5, 6, 8])).is_correct());
        assert!(verify(&x, &a(vec![2, 4, 5, 7, 8])).is_correct());
        assert_eq!(verify(&x, &a(vec![2, 3, 5, 8])).outcome, Outcome::Incorrect);
        assert_eq!(verify(&x, &a(vec![2, 3, 4, 6, 8])).outcome, Outcome::Incorrect);
        assert_eq!(solve(&x).unwrap().value.numbers().len(), 5);
    }

    #[test]
    fn lce_and_lcs() {
        let x = nl(TaskId::LongestConsecutiveElements, &[45, 12, 46, 13, 14, 15, 47, 48]);
        assert_eq!(solve(&x).unwrap().value, AnswerValue::OrderedList(vec![12, 13, 14, 15]));
        let alt = ans(
            TaskId::LongestConsecutiveElements,
            AnswerValue::OrderedList(vec![45, 46, 47, 48]),
        );
        assert!(verify(&x, &alt).is_correct());

        let y = inst(
            TaskId::LongestCommonSubarray,
            Payload::ListPair { first: vec![7, 14, 21, 28], second: vec![14, 21, 28, 35] },
        );
        assert_eq!(solve(&y).unwrap().value, AnswerValue::OrderedList(vec![14, 21, 28]));
        let gapped = ans(TaskId::LongestCommonSubarray, AnswerValue::OrderedList(vec![14, 28]));
        assert_eq!(verify(&y, &gapped).outcome, Outcome::Incorrect);

        let disjoint = inst(
            TaskId::LongestCommonSubarray,
            Payload::ListPair { first: vec![1, 2, 3, 4], second: vec![5, 6, 7, 8] },
        );
        assert!(!is_solvable(&disjoint));
    }

    #[test]
    fn mode_ties_unsolvable() {
        assert_eq!(
            solve(&nl(TaskId::FindMode, &[9, 17, 25, 9, 25, 9, 17])).unwrap().value,
            AnswerValue::Scalar(9)
        );
        assert!(!is_solvable(&nl(TaskId::FindMode, &[1, 2, 3, 4])));
        assert!(!is_solvable(&nl(TaskId::FindMode, &[1, 1, 2, 2])));
    }

    #[test]
    fn top_k_and_ordering_tasks() {
        let x = inst(
            TaskId::FindTopK,
            Payload::ListPlusK { list: vec![100, 90, 80, 70, 60, 50], k: 3 },
        );
        assert_eq!(solve(&x).unwrap().value, AnswerValue::Scalar(80));
        let s = nl(TaskId::SortNumbers, &[58, 31, 74, 15, 47, 3]);
        assert_eq!(
            solve(&s).unwrap().value,
            AnswerValue::OrderedList(vec![3, 15, 31, 47, 58, 74])
        );
        let r = nl(TaskId::RemoveDuplicates, &[8, 12, 45, 78, 90, 23, 45, 78]);
        assert_eq!(
            solve(&r).unwrap().value,
            AnswerValue::OrderedList(vec![8, 12, 45, 78, 90, 23])
        );
        let wrong_order = ans(
            TaskId::RemoveDuplicates,
            AnswerValue::OrderedList(vec![8, 12, 23, 45, 78, 90]),
        );
        assert_eq!(verify(&r, &wrong_order).outcome, Outcome::Incorrect);
    }

    #[test]
    fn shape_mismatch_is_malformed() {
        let x = nl(TaskId::FindMaximum, &[1, 2, 3, 4]);
        let v = verify(&x, &ans(TaskId::FindMaximum, AnswerValue::OrderedList(vec![4])));
        assert_eq!(v.outcome, Outcome::Malformed);
        let v = verify(&x, &ans(TaskId::FindMinimum, AnswerValue::Scalar(1)));
        assert_eq!(v.outcome, Outcome::Malformed);
    }

    #[test]
    fn combinations() {
        let list = [1, 2, 4, 8, 16, 32];
        assert_eq!(find_combination(&list, 3, SumRule::Equals(56)), Some(vec![8, 16, 32]));
        assert_eq!(find_combination(&list, 3, SumRule::Equals(60)), None);
        assert_eq!(find_combination(&list, 7, SumRule::MultipleOfTen), None);
    }
}
