//! Accuracy, gap, generalization score, critical complexity and probe
//! inference.
//!
//! Accuracies are exact rationals; floats appear only in exported tables
//! and in the piecewise-linear anchor curve.

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::catalog::{tasks_for_level, ComplexityInterval, TaskId, TaskRole};
use crate::error::{Error, Result};
use crate::instance::Split;
use crate::oracle::{AnswerValue, AnswerVerdict, Outcome};
use crate::prompting::ExtractionStatus;

/// One graded (or failed) evaluation attempt.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub subject: String,
    pub task: TaskId,
    pub split: Split,
    /// Position of the instance within its split file.
    pub index: usize,
    pub digest: String,
    /// `None` when the gateway failed; such records are retried on resume.
    pub verdict: Option<AnswerVerdict>,
    pub extraction: Option<ExtractionStatus>,
    pub answer: Option<AnswerValue>,
    pub response: Option<String>,
    pub attempts: u32,
    pub error: Option<String>,
}

impl EvalRecord {
    pub fn is_complete(&self) -> bool {
        self.verdict.is_some()
    }

    pub fn is_correct(&self) -> bool {
        self.verdict.as_ref().is_some_and(AnswerVerdict::is_correct)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub correct: usize,
    pub incorrect: usize,
    pub malformed: usize,
}

impl Tally {
    pub fn attempted(&self) -> usize {
        self.correct + self.incorrect + self.malformed
    }
}

pub fn tally<'a>(records: impl IntoIterator<Item = &'a EvalRecord>, task: TaskId, split: Split) -> Tally {
    let mut t = Tally::default();
    for r in records.into_iter().filter(|r| r.task == task && r.split == split) {
        match r.verdict.as_ref().map(|v| v.outcome) {
            Some(Outcome::Correct) => t.correct += 1,
            Some(Outcome::Incorrect) => t.incorrect += 1,
            Some(Outcome::Malformed) => t.malformed += 1,
            None => {}
        }
    }
    t
}

/// Correct over attempted for one task and split.
pub fn accuracy(records: &[EvalRecord], task: TaskId, split: Split) -> Result<Rational64> {
    let t = tally(records, task, split);
    if t.attempted() == 0 {
        return Err(Error::Coverage(vec![(task, split)]));
    }
    Ok(Rational64::new(t.correct as i64, t.attempted() as i64))
}

pub fn gap(a_id: Rational64, a_ood: Rational64) -> Rational64 {
    (a_id - a_ood).max(Rational64::from_integer(0))
}

/// `A_ood - max(0, A_id - A_ood)`, in [-1, 1].
pub fn generalization_score(a_id: Rational64, a_ood: Rational64) -> Rational64 {
    a_ood - gap(a_id, a_ood)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskAccuracy {
    pub task: TaskId,
    pub a_id: Rational64,
    pub a_ood: Rational64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelReport {
    pub level: ComplexityInterval,
    pub a_id: Rational64,
    pub a_ood: Rational64,
    pub gap: Rational64,
    pub score: Rational64,
    pub tasks: Vec<TaskAccuracy>,
}

impl LevelReport {
    pub fn from_accuracies(level: ComplexityInterval, a_id: Rational64, a_ood: Rational64) -> Self {
        Self { level, a_id, a_ood, gap: gap(a_id, a_ood), score: generalization_score(a_id, a_ood), tasks: Vec::new() }
    }
}

fn missing_pairs(records: &[EvalRecord], tasks: impl IntoIterator<Item = TaskId>) -> Vec<(TaskId, Split)> {
    let mut missing = Vec::new();
    for task in tasks {
        for split in [Split::Id, Split::Ood] {
            if tally(records, task, split).attempted() == 0 {
                missing.push((task, split));
            }
        }
    }
    missing
}

/// Per-level accuracies are unweighted means of the level's task accuracies.
pub fn level_report(records: &[EvalRecord], level: ComplexityInterval) -> Result<LevelReport> {
    let tasks = tasks_for_level(level)?;
    let missing = missing_pairs(records, tasks.iter().map(|t| t.id));
    if !missing.is_empty() {
        return Err(Error::Coverage(missing));
    }
    let mut per_task = Vec::new();
    for t in &tasks {
        per_task.push(TaskAccuracy {
            task: t.id,
            a_id: accuracy(records, t.id, Split::Id)?,
            a_ood: accuracy(records, t.id, Split::Ood)?,
        });
    }
    let n = Rational64::from_integer(per_task.len() as i64);
    let a_id = per_task.iter().map(|t| t.a_id).sum::<Rational64>() / n;
    let a_ood = per_task.iter().map(|t| t.a_ood).sum::<Rational64>() / n;
    Ok(LevelReport { tasks: per_task, ..LevelReport::from_accuracies(level, a_id, a_ood) })
}

/// Level with the largest gap; ties go to the lowest level.
pub fn critical_complexity(reports: &[LevelReport]) -> ComplexityInterval {
    let mut best = &reports[0];
    for r in &reports[1..] {
        if r.gap > best.gap {
            best = r;
        }
    }
    best.level
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubjectReport {
    pub subject: String,
    pub levels: Vec<LevelReport>,
    pub critical: ComplexityInterval,
}

/// All five level reports for one subject. Missing coverage anywhere is
/// reported in a single error.
pub fn subject_report(subject: &str, records: &[EvalRecord]) -> Result<SubjectReport> {
    let anchors = ComplexityInterval::ANCHOR_LEVELS
        .iter()
        .flat_map(|&l| tasks_for_level(l).expect("anchor level"))
        .map(|t| t.id);
    let missing = missing_pairs(records, anchors);
    if !missing.is_empty() {
        return Err(Error::Coverage(missing));
    }
    let levels = ComplexityInterval::ANCHOR_LEVELS
        .iter()
        .map(|&l| level_report(records, l))
        .collect::<Result<Vec<_>>>()?;
    let critical = critical_complexity(&levels);
    Ok(SubjectReport { subject: subject.to_string(), levels, critical })
}

pub fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Piecewise-linear OOD accuracy over complexity position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnchorCurve {
    points: Vec<(f64, f64)>,
}

impl AnchorCurve {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput("anchor curve has no points"));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Config("anchor curve positions must be strictly increasing".into()));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Linear interpolation, held flat beyond the end points.
    pub fn value_at(&self, x: f64) -> f64 {
        let p = &self.points;
        if x <= p[0].0 {
            return p[0].1;
        }
        for w in p.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if x <= x1 {
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            }
        }
        p[p.len() - 1].1
    }

    /// Running minimum, so the curve never rises.
    pub fn smoothed(&self) -> Self {
        let mut low = f64::INFINITY;
        let points = self
            .points
            .iter()
            .map(|&(x, y)| {
                low = low.min(y);
                (x, low)
            })
            .collect();
        Self { points }
    }
}

/// The curve's positions are anchor-level indices 0..=4. The two lowest
/// levels share the lower bound N, so lower-bound ordinals would collide.
pub fn build_anchor_curve(report: &SubjectReport) -> AnchorCurve {
    let points = report
        .levels
        .iter()
        .map(|l| (l.level.anchor_index().expect("anchor level") as f64, to_f64(l.a_ood)))
        .collect();
    AnchorCurve::new(points).expect("five increasing positions")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeEstimate {
    pub ordinal: f64,
    /// Anchor level nearest to `ordinal`.
    pub nearest: ComplexityInterval,
}

/// Leftmost position where the smoothed curve meets `probe_accuracy`.
/// Clamps to the first position above the curve maximum and to the last
/// below its minimum.
pub fn infer_probe_complexity(curve: &AnchorCurve, probe_accuracy: f64) -> ProbeEstimate {
    let p = curve.smoothed().points;
    let (first, last) = (p[0], p[p.len() - 1]);
    let ordinal = if probe_accuracy >= first.1 {
        first.0
    } else if probe_accuracy < last.1 {
        last.0
    } else {
        let mut x = last.0;
        for w in p.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if probe_accuracy <= y0 && probe_accuracy >= y1 {
                x = if y0 == y1 { x0 } else { x0 + (y0 - probe_accuracy) / (y0 - y1) * (x1 - x0) };
                break;
            }
        }
        x
    };
    let idx = ordinal.round().clamp(0.0, 4.0) as usize;
    ProbeEstimate { ordinal, nearest: ComplexityInterval::from_anchor_index(idx).expect("index in range") }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub subject: String,
    pub task: TaskId,
    pub probe_accuracy: f64,
    pub estimate: ProbeEstimate,
}

/// Probe estimates for every probe task with OOD records.
pub fn probe_rows(report: &SubjectReport, records: &[EvalRecord]) -> Result<Vec<ProbeRow>> {
    let curve = build_anchor_curve(report);
    let probes: Vec<TaskId> = TaskId::ALL.into_iter().filter(|t| t.spec().role == TaskRole::Probe).collect();
    let missing: Vec<_> = probes
        .iter()
        .filter(|&&t| tally(records, t, Split::Ood).attempted() == 0)
        .map(|&t| (t, Split::Ood))
        .collect();
    if !missing.is_empty() {
        return Err(Error::Coverage(missing));
    }
    probes
        .into_iter()
        .map(|task| {
            let acc = to_f64(accuracy(records, task, Split::Ood)?);
            Ok(ProbeRow {
                subject: report.subject.clone(),
                task,
                probe_accuracy: acc,
                estimate: infer_probe_complexity(&curve, acc),
            })
        })
        .collect()
}

fn fmt3(x: f64) -> String {
    format!("{x:.3}")
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// One row per subject: five level scores then the critical complexity.
pub fn scores_csv(reports: &[SubjectReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["model".to_string()];
    header.extend(ComplexityInterval::ANCHOR_LEVELS.iter().map(ToString::to_string));
    header.push("critical_complexity".into());
    w.write_record(&header)?;
    for r in reports {
        let mut row = vec![r.subject.clone()];
        row.extend(r.levels.iter().map(|l| fmt3(to_f64(l.score))));
        row.push(r.critical.to_string());
        w.write_record(&row)?;
    }
    finish(w)
}

/// Per-level plot series: accuracies, gap and score.
pub fn levels_csv(reports: &[SubjectReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["model", "level", "level_index", "a_id", "a_ood", "gap", "score"])?;
    for r in reports {
        for (i, l) in r.levels.iter().enumerate() {
            w.write_record([
                r.subject.clone(),
                l.level.to_string(),
                i.to_string(),
                fmt3(to_f64(l.a_id)),
                fmt3(to_f64(l.a_ood)),
                fmt3(to_f64(l.gap)),
                fmt3(to_f64(l.score)),
            ])?;
        }
    }
    finish(w)
}

/// Per-task accuracies behind each level.
pub fn tasks_csv(reports: &[SubjectReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["model", "level", "task", "a_id", "a_ood", "gap"])?;
    for r in reports {
        for l in &r.levels {
            for t in &l.tasks {
                w.write_record([
                    r.subject.clone(),
                    l.level.to_string(),
                    t.task.to_string(),
                    fmt3(to_f64(t.a_id)),
                    fmt3(to_f64(t.a_ood)),
                    fmt3(to_f64(gap(t.a_id, t.a_ood))),
                ])?;
            }
        }
    }
    finish(w)
}

pub fn probe_csv(rows: &[ProbeRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["model", "task", "ood_accuracy", "inferred_position", "nearest_level"])?;
    for r in rows {
        w.write_record([
            r.subject.clone(),
            r.task.to_string(),
            fmt3(r.probe_accuracy),
            fmt3(r.estimate.ordinal),
            r.estimate.nearest.to_string(),
        ])?;
    }
    finish(w)
}

/// Human-readable summary of subject reports and probe rows.
pub fn summary_text(reports: &[SubjectReport], probes: &[ProbeRow]) -> String {
    let mut by_subject: BTreeMap<&str, Vec<&ProbeRow>> = BTreeMap::new();
    for p in probes {
        by_subject.entry(&p.subject).or_default().push(p);
    }
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!("subject {}\n", r.subject));
        out.push_str(&format!("  {:<14} {:>6} {:>6} {:>6} {:>6}\n", "level", "A_id", "A_ood", "gap", "score"));
        for l in &r.levels {
            out.push_str(&format!(
                "  {:<14} {:>6} {:>6} {:>6} {:>6}\n",
                l.level.to_string(),
                fmt3(to_f64(l.a_id)),
                fmt3(to_f64(l.a_ood)),
                fmt3(to_f64(l.gap)),
                fmt3(to_f64(l.score)),
            ));
        }
        out.push_str(&format!("  critical complexity: {}\n", r.critical));
        for p in by_subject.get(r.subject.as_str()).into_iter().flatten() {
            out.push_str(&format!(
                "  probe {}: OOD accuracy {} -> position {} ({})\n",
                p.task,
                fmt3(p.probe_accuracy),
                fmt3(p.estimate.ordinal),
                p.estimate.nearest
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Outcome;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn record(task: TaskId, split: Split, outcome: Option<Outcome>) -> EvalRecord {
        EvalRecord {
            subject: "s".into(),
            task,
            split,
            index: 0,
            digest: String::new(),
            verdict: outcome.map(|outcome| AnswerVerdict { outcome, detail: String::new() }),
            extraction: None,
            answer: None,
            response: None,
            attempts: 1,
            error: None,
        }
    }

    #[test]
    fn accuracy_counts_attempted() {
        let mut recs: Vec<_> = (0..256)
            .map(|i| record(TaskId::FindMaximum, Split::Id, Some(if i < 200 { Outcome::Correct } else { Outcome::Malformed })))
            .collect();
        recs.push(record(TaskId::FindMaximum, Split::Id, None));
        assert_eq!(accuracy(&recs, TaskId::FindMaximum, Split::Id).unwrap(), r(200, 256));
        assert_eq!(to_f64(r(200, 256)), 0.78125);
        assert!(matches!(accuracy(&recs, TaskId::FindMaximum, Split::Ood), Err(Error::Coverage(_))));
    }

    #[test]
    fn score_examples() {
        let l = LevelReport::from_accuracies(ComplexityInterval::LINEAR, r(1, 1), r(1, 1));
        assert_eq!((l.gap, l.score), (r(0, 1), r(1, 1)));
        let l = LevelReport::from_accuracies(ComplexityInterval::LINEAR, r(9, 10), r(1, 2));
        assert_eq!((l.gap, l.score), (r(2, 5), r(1, 10)));
        let l = LevelReport::from_accuracies(ComplexityInterval::LINEAR, r(3, 10), r(3, 5));
        assert_eq!((l.gap, l.score), (r(0, 1), r(3, 5)));
    }

    #[test]
    fn critical_argmax_and_ties() {
        let reports = |gaps: [i64; 5]| -> Vec<LevelReport> {
            ComplexityInterval::ANCHOR_LEVELS
                .iter()
                .zip(gaps)
                .map(|(&l, g)| LevelReport::from_accuracies(l, r(1, 1), r(10 - g, 10)))
                .collect()
        };
        assert_eq!(critical_complexity(&reports([1, 5, 3, 2, 1])), ComplexityInterval::LINEAR_TO_QUADRATIC);
        assert_eq!(critical_complexity(&reports([2, 2, 2, 2, 2])), ComplexityInterval::LINEAR);
        assert_eq!(critical_complexity(&reports([0, 0, 0, 4, 1])), ComplexityInterval::CUBIC_TO_QUARTIC);
    }

    #[test]
    fn level_coverage_names_missing_pairs() {
        let recs = vec![record(TaskId::FindMinimum, Split::Id, Some(Outcome::Correct))];
        let Err(Error::Coverage(missing)) = level_report(&recs, ComplexityInterval::LINEAR) else {
            panic!("expected coverage error");
        };
        assert!(missing.contains(&(TaskId::FindMinimum, Split::Ood)));
        assert!(!missing.contains(&(TaskId::FindMinimum, Split::Id)));
    }

    #[test]
    fn curve_interpolation_and_inference() {
        let c = AnchorCurve::new(vec![(0.0, 0.9), (1.0, 0.7), (2.0, 0.4), (3.0, 0.2), (4.0, 0.05)]).unwrap();
        assert_eq!(c.value_at(2.0), 0.4);
        assert!((c.value_at(0.5) - 0.8).abs() < 1e-12);

        let c = AnchorCurve::new(vec![(0.0, 0.9), (2.0, 0.5), (4.0, 0.1)]).unwrap();
        assert_eq!(infer_probe_complexity(&c, 0.5).ordinal, 2.0);
        assert!((infer_probe_complexity(&c, 0.7).ordinal - 1.0).abs() < 1e-12);
        assert_eq!(infer_probe_complexity(&c, 0.95).ordinal, 0.0);
        assert_eq!(infer_probe_complexity(&c, 0.0).ordinal, 4.0);
        assert!(AnchorCurve::new(vec![(1.0, 0.5), (1.0, 0.4)]).is_err());
    }

    #[test]
    fn smoothing_removes_rises() {
        let c = AnchorCurve::new(vec![(0.0, 0.8), (1.0, 0.3), (2.0, 0.6), (3.0, 0.2)]).unwrap();
        let ys: Vec<f64> = c.smoothed().points().iter().map(|p| p.1).collect();
        assert_eq!(ys, vec![0.8, 0.3, 0.3, 0.2]);
        // flat stretch: leftmost point wins
        assert_eq!(infer_probe_complexity(&c, 0.3).ordinal, 1.0);
    }
}
