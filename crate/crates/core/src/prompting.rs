//! Prompt construction and final-answer extraction.

use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::catalog::{InputKind, TaskId, TaskSpec};
use crate::instance::{Payload, ProblemInstance};
use crate::oracle::{AnswerValue, CandidateAnswer};

pub const TEMPLATE_VERSION: &str = "v1";

pub const GENERATE_NUMBER_LISTS: &str = include_str!("../templates/v1/generate_number_lists.txt");
pub const GENERATE_LIST_PAIRS: &str = include_str!("../templates/v1/generate_list_pairs.txt");
pub const GENERATE_MATRICES: &str = include_str!("../templates/v1/generate_matrices.txt");
pub const ZERO_SHOT_COT: &str = include_str!("../templates/v1/zero_shot_cot.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptKind {
    Generate,
    Solve,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptRequest {
    pub kind: PromptKind,
    pub task: TaskId,
    pub text: String,
    /// Present for solve prompts.
    pub instance: Option<ProblemInstance>,
    /// Position of this request within its batch. Not part of the prompt text;
    /// lets deterministic subjects vary repeated identical prompts.
    pub sequence: u64,
}

impl PromptRequest {
    pub fn with_sequence(mut self, sequence: u64) -> Self {
        self.sequence = sequence;
        self
    }
}

/// Placeholder text is substituted mid-sentence, so a closing period on the
/// substituted text would double up with the template's own.
fn sentence_body(s: &str) -> &str {
    s.strip_suffix('.').unwrap_or(s)
}

pub fn build_generation_prompt(task: &TaskSpec) -> PromptRequest {
    let template = match task.input_schema.kind {
        InputKind::ListPair => GENERATE_LIST_PAIRS,
        InputKind::AdjacencyMatrix => GENERATE_MATRICES,
        _ => GENERATE_NUMBER_LISTS,
    };
    let text = template
        .replace("{task_title}", task.title)
        .replace("{task_description}", sentence_body(task.description));
    PromptRequest { kind: PromptKind::Generate, task: task.id, text, instance: None, sequence: 0 }
}

fn spaced(list: &[u64]) -> String {
    list.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

fn bracketed(list: &[u64]) -> String {
    format!("[{}]", list.iter().map(u64::to_string).collect::<Vec<_>>().join(", "))
}

/// The input as it appears in a solve prompt.
pub fn render_input(instance: &ProblemInstance) -> String {
    match &instance.payload {
        Payload::NumberList { list } => spaced(list),
        Payload::ListPlusK { list, k } => format!("l = {}, k = {k}", spaced(list)),
        Payload::ListPlusTarget { list, target } => format!("l = {}, k = {target}", spaced(list)),
        Payload::ListPlusRange { list, a, b } => {
            format!("l = {}, a = {a}, b = {b}", spaced(list))
        }
        Payload::ListPair { first, second } => {
            format!("l_1 = {}, l_2 = {}", spaced(first), spaced(second))
        }
        Payload::AdjacencyMatrix { matrix } => {
            let rows: Vec<String> = matrix.iter().map(|r| bracketed(r)).collect();
            format!("n = {}, D = [{}]", matrix.len(), rows.join(", "))
        }
    }
}

pub fn build_solve_prompt(task: &TaskSpec, instance: &ProblemInstance) -> PromptRequest {
    let text = ZERO_SHOT_COT
        .replace("{instruction}", sentence_body(task.description))
        .replace("{input}", &render_input(instance))
        .replace("{answer_format_requirements}", task.answer_format);
    PromptRequest {
        kind: PromptKind::Solve,
        task: task.id,
        text,
        instance: Some(instance.clone()),
        sequence: 0,
    }
}

/// An answer written in the format the solve prompt asks for.
pub fn render_answer(value: &AnswerValue) -> String {
    match value {
        AnswerValue::Scalar(x) => x.to_string(),
        AnswerValue::OrderedList(v) | AnswerValue::Multiset(v) | AnswerValue::Tour(v) => {
            bracketed(v)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtractionStatus {
    Extracted,
    NoMarker,
    Unparseable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionResult {
    pub status: ExtractionStatus,
    pub answer: Option<CandidateAnswer>,
    /// Byte range of the marker that was parsed.
    pub marker_span: Option<(usize, usize)>,
}

static MARKER: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)\bthe\s+(?:final\s+)?answer\s+is\b").expect("marker regex")
});

const DECORATION: &[char] = &['*', '_', '`', '$', '"', '\'', '<', '>', '(', ')', '{', '}', '\\'];

fn strip_lead(s: &str) -> &str {
    let mut s = s.trim_start_matches(|c: char| c.is_whitespace() || c == ':' || c == '=');
    loop {
        let before = s.len();
        s = s.trim_start_matches(|c: char| DECORATION.contains(&c) || c.is_whitespace() || c == ':');
        for prefix in ["boxed{", "text{", "mathbf{"] {
            if let Some(rest) = s.strip_prefix(prefix) {
                s = rest;
            }
        }
        if s.len() == before {
            return s;
        }
    }
}

fn clean_token(t: &str) -> &str {
    t.trim_matches(|c: char| DECORATION.contains(&c) || ".,;:!?".contains(c))
}

fn parse_number(t: &str) -> Option<u64> {
    let t = clean_token(t);
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    t.parse().ok()
}

/// `[...]` with nested brackets flattened; `None` if unterminated or if any
/// token is not a non-negative integer.
fn parse_bracketed(s: &str) -> Option<Vec<u64>> {
    let mut depth = 0usize;
    let mut end = None;
    for (i, c) in s.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => {
                depth = depth.checked_sub(1)?;
                if depth == 0 {
                    end = Some(i);
                    break;
                }
            }
            _ => {}
        }
    }
    let inner = &s[1..end?];
    inner
        .split(|c: char| c == ',' || c == ';' || c == '[' || c == ']' || c.is_whitespace())
        .filter(|t| !clean_token(t).is_empty())
        .map(parse_number)
        .collect()
}

/// Leading run of integers on the first line, separated by commas,
/// whitespace or "and"; stops at the first other word.
fn parse_bare(s: &str) -> Vec<u64> {
    let line = s.lines().next().unwrap_or("");
    let mut out = Vec::new();
    for token in line.split(|c: char| c == ',' || c.is_whitespace()) {
        if clean_token(token).is_empty() || token.eq_ignore_ascii_case("and") {
            continue;
        }
        match parse_number(token) {
            Some(n) => out.push(n),
            None => break,
        }
        // a sentence-ending period closes the answer
        if token.ends_with('.') {
            break;
        }
    }
    out
}

/// Parses the payload after the last answer marker. Never panics; every
/// response maps to exactly one status.
pub fn extract_final_answer(response: &str, task: &TaskSpec) -> ExtractionResult {
    let Some(m) = MARKER.find_iter(response).last() else {
        return ExtractionResult { status: ExtractionStatus::NoMarker, answer: None, marker_span: None };
    };
    let span = Some((m.start(), m.end()));
    let rest = strip_lead(&response[m.end()..]);
    let numbers = if rest.starts_with('[') {
        parse_bracketed(rest)
    } else {
        Some(parse_bare(rest)).filter(|v| !v.is_empty())
    };
    let value = numbers.and_then(|n| AnswerValue::from_numbers(task.answer_shape, n));
    match value {
        Some(v) => ExtractionResult {
            status: ExtractionStatus::Extracted,
            answer: Some(CandidateAnswer::new(task.id, v)),
            marker_span: span,
        },
        None => ExtractionResult { status: ExtractionStatus::Unparseable, answer: None, marker_span: span },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Split;
    use crate::oracle::solve;

    #[test]
    fn generation_templates_by_kind() {
        let p = build_generation_prompt(TaskId::FindMaximum.spec());
        assert!(p.text.starts_with("Randomly generate number lists"));
        assert!(p.text.contains("task of finding maximum. The task description is: Given a list of numbers separated by spaces, find the largest number. Enclose"));
        let p = build_generation_prompt(TaskId::LongestCommonSubarray.spec());
        assert!(p.text.contains("[[x1, x2], [x3, x4]]"));
        let p = build_generation_prompt(TaskId::Tsp.spec());
        assert!(p.text.contains("Make sure the matrix is symmetric"));
        assert!(p.text.contains("solving the task of Traveling Salesman Problem (TSP)."));
    }

    #[test]
    fn solve_prompt() {
        let x = ProblemInstance::new(
            TaskId::FindMaximum,
            Split::Id,
            Payload::NumberList { list: vec![74, 29, 63, 40, 88] },
        );
        let p = build_solve_prompt(TaskId::FindMaximum.spec(), &x);
        assert!(p.text.contains("with the following input: 74 29 63 40 88. IMPORTANT"));
        assert!(p.text.contains("\"The answer is <ANSWER>\""));
        assert!(p.text.ends_with("Let's think step by step."));
        assert_eq!(p, build_solve_prompt(TaskId::FindMaximum.spec(), &x));
    }

    #[test]
    fn input_forms() {
        let x = ProblemInstance::new(
            TaskId::Tsp,
            Split::Id,
            Payload::AdjacencyMatrix { matrix: vec![vec![0, 3], vec![3, 0]] },
        );
        assert_eq!(render_input(&x), "n = 2, D = [[0, 3], [3, 0]]");
        let y = ProblemInstance::new(
            TaskId::ThreeSumInRange,
            Split::Id,
            Payload::ListPlusRange { list: vec![7, 12, 17], a: 71, b: 81 },
        );
        assert_eq!(render_input(&y), "l = 7 12 17, a = 71, b = 81");
    }

    #[test]
    fn extract_basic() {
        let max = TaskId::FindMaximum.spec();
        let r = extract_final_answer("... so the biggest is 88. The answer is 88", max);
        assert_eq!(r.status, ExtractionStatus::Extracted);
        assert_eq!(r.answer.unwrap().value, AnswerValue::Scalar(88));

        let three = TaskId::ThreeSum.spec();
        let r = extract_final_answer("The answer is [3, 5, 7]", three);
        assert_eq!(r.answer.unwrap().value, AnswerValue::multiset(vec![7, 5, 3]));

        let r = extract_final_answer("I could not decide.", max);
        assert_eq!(r.status, ExtractionStatus::NoMarker);
        assert!(r.marker_span.is_none());
    }

    #[test]
    fn last_marker_wins() {
        let max = TaskId::FindMaximum.spec();
        let text = "The answer is 63? No. Checking again, the answer is **88**.";
        let r = extract_final_answer(text, max);
        assert_eq!(r.answer.unwrap().value, AnswerValue::Scalar(88));
        let (s, _) = r.marker_span.unwrap();
        assert_eq!(&text[s..s + 3], "the");
    }

    #[test]
    fn round_trip_oracle_answers() {
        let x = ProblemInstance::new(
            TaskId::Tsp,
            Split::Id,
            Payload::AdjacencyMatrix {
                matrix: vec![
                    vec![0, 1, 2, 3],
                    vec![1, 0, 4, 5],
                    vec![2, 4, 0, 6],
                    vec![3, 5, 6, 0],
                ],
            },
        );
        let a = solve(&x).unwrap();
        let text = format!("Let me compute. The answer is {}", render_answer(&a.value));
        assert_eq!(extract_final_answer(&text, TaskId::Tsp.spec()).answer.unwrap(), a);
    }
}
