//! Single-stream evaluation: one score per input line, one status line out.

use std::io::{BufRead, Write};

use anyhow::{bail, Context, Result};
use arcfdr_core::simulate::ProcedureKind;
use arcfdr_core::{
    DeadlineSchedule, ELond, Lond, Lord, OnlineBh, OnlineBr, OnlineEbh, OnlineProcedure, OnlineSbh, RLond,
    RejectionSet, Saffron, Score, ShapeFunction, StepReport, Toad, WeightSequence, ETOAD,
};

/// Everything needed to build the procedure for `stream`.
#[derive(Debug, Clone)]
pub struct StreamSpec {
    pub kind: ProcedureKind,
    pub weights: WeightSequence,
    pub alpha: f64,
    /// Deadline lag for e-toad and toad; `None` keeps decisions open.
    pub deadline_lag: Option<usize>,
    /// `K` of the BY shape used by r-lond and obr.
    pub by_k: Option<usize>,
    pub lambda: f64,
}

pub fn build_procedure(spec: &StreamSpec) -> Result<Box<dyn OnlineProcedure>> {
    let (w, a) = (spec.weights.clone(), spec.alpha);
    let deadlines = || match spec.deadline_lag {
        Some(l) => DeadlineSchedule::Lag(l),
        None => DeadlineSchedule::Infinite,
    };
    let by = || -> Result<ShapeFunction> {
        match spec.by_k {
            Some(k) => Ok(ShapeFunction::by(k)?),
            None => bail!("{} needs --by-k (or --uniform to take K from the weights)", spec.kind),
        }
    };
    Ok(match spec.kind {
        ProcedureKind::OnlineEbh => Box::new(OnlineEbh::new(w, a)?),
        ProcedureKind::ELond => Box::new(ELond::new(w, a)?),
        ProcedureKind::EToad => Box::new(ETOAD::new(w, a, deadlines())?),
        ProcedureKind::OnlineBh => Box::new(OnlineBh::new(w, a)?),
        ProcedureKind::Lond => Box::new(Lond::new(w, a)?),
        ProcedureKind::RLond => Box::new(RLond::new(w, a, by()?)?),
        ProcedureKind::OnlineBr => Box::new(OnlineBr::new(w, a, by()?)?),
        ProcedureKind::Toad => Box::new(Toad::new(w, a, deadlines(), ShapeFunction::Identity)?),
        ProcedureKind::OnlineSbh => Box::new(OnlineSbh::new(w, a, spec.lambda)?),
        ProcedureKind::Lord => Box::new(Lord::new(w, a)?),
        ProcedureKind::Saffron => Box::new(Saffron::new(w, a, spec.lambda)?),
        k => bail!("{k} needs a model for its boosting factors and is only available in simulate"),
    })
}

/// `t=<t> k*=<k> rejected={..}`, plus ` new={..}` when anything joined.
pub fn format_step(report: &StepReport, rejected: &RejectionSet) -> String {
    let mut line = format!("t={} k*={} rejected={}", report.time, report.k_star, rejected);
    if !report.newly_rejected.is_empty() {
        let new: Vec<String> = report.newly_rejected.iter().map(|i| i.to_string()).collect();
        line.push_str(&format!(" new={{{}}}", new.join(",")));
    }
    line
}

/// Feeds every score line of `input` to `procedure`. Blank lines and `#`
/// comments are skipped; the first malformed line aborts the stream.
pub fn run_stream<R: BufRead, W: Write>(procedure: &mut dyn OnlineProcedure, input: R, mut out: W) -> Result<usize> {
    let kind = procedure.state().kind();
    let mut steps = 0;
    for (n, line) in input.lines().enumerate() {
        let line = line.with_context(|| format!("reading line {}", n + 1))?;
        let text = line.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let value: f64 = text.parse().with_context(|| format!("line {}: {text:?} is not a number", n + 1))?;
        let score = Score::new(kind, value).with_context(|| format!("line {}", n + 1))?;
        let report = procedure.step(score).with_context(|| format!("line {}", n + 1))?;
        writeln!(out, "{}", format_step(&report, &procedure.rejection_set()))?;
        out.flush()?;
        steps += 1;
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kind: ProcedureKind, k: usize, alpha: f64) -> StreamSpec {
        StreamSpec {
            kind,
            weights: WeightSequence::uniform(k).unwrap(),
            alpha,
            deadline_lag: None,
            by_k: Some(k),
            lambda: 0.5,
        }
    }

    fn run(kind: ProcedureKind, k: usize, alpha: f64, input: &str) -> Result<String> {
        let mut p = build_procedure(&spec(kind, k, alpha))?;
        let mut out = Vec::new();
        run_stream(p.as_mut(), input.as_bytes(), &mut out)?;
        Ok(String::from_utf8(out).unwrap())
    }

    #[test]
    fn e_value_example() {
        let out = run(ProcedureKind::OnlineEbh, 2, 0.1, "40\n1\n").unwrap();
        assert_eq!(out, "t=1 k*=1 rejected={1} new={1}\nt=2 k*=1 rejected={1}\n");
    }

    #[test]
    fn comments_and_blank_lines() {
        let out = run(ProcedureKind::OnlineEbh, 2, 0.1, "# header\n\n40 # first\n").unwrap();
        assert_eq!(out, "t=1 k*=1 rejected={1} new={1}\n");
    }

    #[test]
    fn malformed_line_aborts() {
        assert!(run(ProcedureKind::OnlineEbh, 2, 0.1, "40\nabc\n1\n").is_err());
        assert!(run(ProcedureKind::OnlineBh, 2, 0.1, "1.5\n").is_err());
        assert!(run(ProcedureKind::OnlineEbh, 2, 0.1, "-1\n").is_err());
    }

    #[test]
    fn boosted_kinds_are_rejected() {
        assert!(build_procedure(&spec(ProcedureKind::BoostPlus, 2, 0.1)).is_err());
    }
}
