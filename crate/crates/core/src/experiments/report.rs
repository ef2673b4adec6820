//! CSV, JSON and plain-text renderings of experiment results.
//!
//! Wall-clock times are emitted only with [`ReportOptions::timing`]; without
//! it the output depends on nothing but the configuration and master seed.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

use super::config::OutputFormat;
use super::{LcsExperiment, SisExperiment, SisExperimentSummary, SweepReport};
use crate::budget::Verdict;
use crate::Result;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReportOptions {
    pub timing: bool,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    trial: usize,
    seed_hi: u64,
    seed_lo: u64,
    outcome: &'a str,
    value: Option<usize>,
    nodes: u64,
    millis: Option<u64>,
    classification: &'a str,
}

fn sis_outcome(v: Verdict) -> &'static str {
    match v {
        Verdict::True => "found",
        Verdict::False => "absent",
        Verdict::Unknown => "unknown",
    }
}

fn millis(opts: ReportOptions, d: std::time::Duration) -> Option<u64> {
    opts.timing.then_some(d.as_millis() as u64)
}

fn lcs_rows(e: &LcsExperiment, opts: ReportOptions) -> impl Iterator<Item = CsvRow<'_>> {
    e.records.iter().map(move |r| CsvRow {
        trial: r.trial_index,
        seed_hi: r.seeds.0.master,
        seed_lo: r.seeds.0.stream,
        outcome: if r.optimal { "optimal" } else { "bound" },
        value: Some(r.size),
        nodes: r.nodes_explored,
        millis: millis(opts, r.elapsed),
        classification: r.classification.as_str(),
    })
}

fn sis_rows(e: &SisExperiment, opts: ReportOptions) -> impl Iterator<Item = CsvRow<'_>> {
    e.records.iter().map(move |r| CsvRow {
        trial: r.trial_index,
        seed_hi: r.seeds.0.master,
        seed_lo: r.seeds.0.stream,
        outcome: sis_outcome(r.found),
        value: Some(e.summary.n),
        nodes: r.nodes_explored,
        millis: millis(opts, r.elapsed),
        classification: e.summary.predicted_side.as_str(),
    })
}

fn write_csv<'a, W: Write>(rows: impl Iterator<Item = CsvRow<'a>>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut any = false;
    for row in rows {
        w.serialize(row)?;
        any = true;
    }
    if !any {
        w.write_record([
            "trial",
            "seed_hi",
            "seed_lo",
            "outcome",
            "value",
            "nodes",
            "millis",
            "classification",
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn with_millis<T: Serialize>(
    item: &T,
    elapsed: std::time::Duration,
    opts: ReportOptions,
) -> Result<Value> {
    let mut v = serde_json::to_value(item)?;
    if let (Some(ms), Value::Object(map)) = (millis(opts, elapsed), &mut v) {
        map.insert("millis".into(), json!(ms));
    }
    Ok(v)
}

fn budget_json(e: &super::RunSettings) -> Value {
    json!({
        "max_nodes": e.budget.max_nodes,
        "max_time_ms": e.budget.max_time.map(|d| d.as_millis() as u64),
    })
}

fn lcs_json(e: &LcsExperiment, opts: ReportOptions) -> Result<Value> {
    let trials = e
        .records
        .iter()
        .map(|r| with_millis(r, r.elapsed, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "config": {
            "kind": "lcs",
            "N": e.big_n,
            "trials": e.records.len(),
            "seed": e.settings.master_seed,
            "budget": budget_json(&e.settings),
        },
        "prediction": e.prediction,
        "trials": trials,
        "aggregate": e.summary,
    }))
}

fn sis_json(e: &SisExperiment, opts: ReportOptions) -> Result<Value> {
    let trials = e
        .records
        .iter()
        .map(|r| with_millis(r, r.elapsed, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "config": {
            "kind": "sis",
            "n": e.summary.n,
            "N": e.summary.big_n,
            "trials": e.records.len(),
            "seed": e.settings.master_seed,
            "budget": budget_json(&e.settings),
        },
        "prediction": e.prediction,
        "trials": trials,
        "aggregate": e.summary,
    }))
}

fn write_json<W: Write>(v: &Value, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn fmt_opt_f64(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.3}"))
}

fn sis_summary_line(s: &SisExperimentSummary) -> String {
    let (lo, hi) = s.interval.map_or(("-".into(), "-".into()), |i| {
        (format!("{:.3}", i.low), format!("{:.3}", i.high))
    });
    format!(
        "{:>4} {:>6} {:>7} {:>9} {:>8} {:>7} {:>7} {:>7}  {}{}",
        s.n,
        s.trials,
        s.successes,
        s.failures,
        s.unknowns,
        fmt_opt_f64(s.p_hat),
        lo,
        hi,
        s.predicted_side.as_str(),
        if s.inconclusive {
            " (inconclusive)"
        } else {
            ""
        },
    )
}

const SIS_HEADER: &str =
    "   n trials success   failure  unknown   p_hat  ci_low ci_high  predicted";

pub fn write_lcs<W: Write>(
    e: &LcsExperiment,
    format: OutputFormat,
    opts: ReportOptions,
    mut out: W,
) -> Result<()> {
    match format {
        OutputFormat::Csv => write_csv(lcs_rows(e, opts), out),
        OutputFormat::Json => write_json(&lcs_json(e, opts)?, out),
        OutputFormat::Text => {
            let p = &e.prediction;
            writeln!(
                out,
                "N = {}  x = {:.4}  eps = {:.4}  window = [{}, {}]",
                e.big_n, p.x, p.eps, p.lo, p.hi
            )?;
            writeln!(out, "trial      L  optimal          nodes  classification")?;
            for r in &e.records {
                writeln!(
                    out,
                    "{:>5} {:>6}  {:>7} {:>14}  {}",
                    r.trial_index,
                    r.size,
                    r.optimal,
                    r.nodes_explored,
                    r.classification.as_str()
                )?;
            }
            let s = &e.summary;
            writeln!(
                out,
                "in_window {}  below_by_1 {}  above_by_1 {}  farther {}  unknown {}",
                s.in_window, s.below_by_1, s.above_by_1, s.farther, s.unknown
            )?;
            Ok(())
        }
    }
}

pub fn write_sis<W: Write>(
    e: &SisExperiment,
    format: OutputFormat,
    opts: ReportOptions,
    mut out: W,
) -> Result<()> {
    match format {
        OutputFormat::Csv => write_csv(sis_rows(e, opts), out),
        OutputFormat::Json => write_json(&sis_json(e, opts)?, out),
        OutputFormat::Text => {
            let p = &e.prediction;
            writeln!(
                out,
                "N = {}  y = {:.4}  eps = {:.4}  contain <= {}  exclude >= {}",
                p.big_n, p.y, p.eps, p.n_contain, p.n_exclude
            )?;
            writeln!(out, "{SIS_HEADER}")?;
            writeln!(out, "{}", sis_summary_line(&e.summary))?;
            Ok(())
        }
    }
}

pub fn write_sweep<W: Write>(
    r: &SweepReport,
    format: OutputFormat,
    opts: ReportOptions,
    mut out: W,
) -> Result<()> {
    match format {
        OutputFormat::Csv => write_csv(r.experiments.iter().flat_map(|e| sis_rows(e, opts)), out),
        OutputFormat::Json => {
            let experiments = r
                .experiments
                .iter()
                .map(|e| sis_json(e, opts))
                .collect::<Result<Vec<_>>>()?;
            write_json(
                &json!({
                    "N": r.big_n,
                    "prediction": r.prediction,
                    "transition": r.transition,
                    "experiments": experiments,
                }),
                out,
            )
        }
        OutputFormat::Text => {
            let p = &r.prediction;
            writeln!(
                out,
                "N = {}  y = {:.4}  eps = {:.4}  contain <= {}  exclude >= {}",
                p.big_n, p.y, p.eps, p.n_contain, p.n_exclude
            )?;
            writeln!(out, "{SIS_HEADER}")?;
            for e in &r.experiments {
                writeln!(out, "{}", sis_summary_line(&e.summary))?;
            }
            match r.transition {
                Some(n) => writeln!(
                    out,
                    "empirical transition: largest n with p_hat >= 1/2 is {n}"
                )?,
                None => writeln!(out, "empirical transition: no n with p_hat >= 1/2")?,
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{run_lcs_trials, run_sis_trials, RunSettings};
    use crate::SearchBudget;

    fn settings() -> RunSettings {
        RunSettings {
            master_seed: 3,
            workers: 1,
            budget: SearchBudget::unlimited(),
        }
    }

    #[test]
    fn csv_header_and_rows() {
        let e = run_lcs_trials(6, 2, settings()).unwrap();
        let mut buf = Vec::new();
        write_lcs(&e, OutputFormat::Csv, ReportOptions::default(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("trial,seed_hi,seed_lo,outcome,value,nodes,millis,classification")
        );
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(&row[..4], &["0", "3", "0", "optimal"]);
        assert_eq!(row[6], "");
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn timing_adds_millis() {
        let e = run_sis_trials(3, 8, 2, settings()).unwrap();
        let mut buf = Vec::new();
        write_sis(
            &e,
            OutputFormat::Csv,
            ReportOptions { timing: true },
            &mut buf,
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        assert!(row[6].parse::<u64>().is_ok());
    }

    #[test]
    fn json_has_config_trials_aggregate() {
        let e = run_sis_trials(3, 8, 2, settings()).unwrap();
        let mut buf = Vec::new();
        write_sis(&e, OutputFormat::Json, ReportOptions::default(), &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["config"]["N"], 8);
        assert_eq!(v["trials"].as_array().unwrap().len(), 2);
        assert!(v["aggregate"]["p_hat"].is_number());
        assert!(v["trials"][0].get("millis").is_none());
    }
}
