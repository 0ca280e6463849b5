//! Report output. CSV uses fixed three-decimal formatting; JSON carries
//! full precision plus the configuration that produced the numbers.

use std::str::FromStr;

use serde::Serialize;
use serde_json::json;

use crate::classic::mean_average_precision;
use crate::error::{Error, Result};
use crate::experiment::{ClassicReport, NormalizedRun, SeriesPoint};
use crate::ideal::IdealRanking;
use crate::model::EvalConfig;
use crate::scoring::ScoreReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Input(format!("unknown output format {other:?}"))),
        }
    }
}

/// Anything the tools can emit.
#[derive(Debug, Clone, Copy)]
pub enum ReportSet<'a> {
    Scores(&'a [ScoreReport]),
    Ideals(&'a [IdealRanking]),
    Normalized {
        runs: &'a [NormalizedRun],
        config: &'a EvalConfig,
    },
    /// Long-form plot data; `group_label` names the group column (`b`, `run`).
    Series {
        points: &'a [SeriesPoint],
        group_label: &'a str,
    },
    Classic(&'a [ClassicReport]),
}

pub const ZERO_IDEAL_POLICY: &str = "a rank whose ideal gain is 0 normalizes to 0";

fn fmt3(v: f64) -> String {
    // normalizes -0.0
    format!("{:.3}", v + 0.0)
}

fn fmt_threshold(t: f64) -> String {
    format!("{t}")
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is utf-8")
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn score_rows_csv<'a>(reports: impl Iterator<Item = &'a ScoreReport> + Clone) -> Result<String> {
    let n = reports.clone().map(|r| r.theme_totals.len()).max().unwrap_or(0);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![
        "topic_id".to_string(),
        "rank".into(),
        "doc_id".into(),
        "face_total".into(),
    ];
    header.extend((1..=n).map(|i| format!("theme_{i}")));
    header.extend(["contrib_sum", "usability", "doc_score", "cum_rel"].map(String::from));
    w.write_record(&header)?;
    for report in reports {
        for row in &report.rows {
            let mut rec = vec![
                report.topic_id.clone(),
                row.rank.to_string(),
                row.doc_id.clone(),
                fmt3(row.face_total),
            ];
            rec.extend((0..n).map(|i| {
                row.theme_contribs
                    .values()
                    .get(i)
                    .map_or_else(String::new, |v| fmt3(*v))
            }));
            rec.extend([row.contrib_sum, row.usability, row.doc_score, row.cum_utility].map(fmt3));
            w.write_record(&rec)?;
        }
    }
    Ok(finish(w))
}

fn normalized_csv(runs: &[NormalizedRun]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "topic_id",
        "rank",
        "doc_id",
        "search_cg",
        "ideal_doc_id",
        "ideal_cg",
        "ncg",
    ])?;
    for run in runs {
        for j in 0..run.search.len() {
            w.write_record([
                run.topic_id.clone(),
                (j + 1).to_string(),
                run.run_order[j].clone(),
                fmt3(run.search.values[j]),
                run.ideal_order.get(j).cloned().unwrap_or_default(),
                fmt3(run.ideal.values[j]),
                fmt3(run.normalized.values[j]),
            ])?;
        }
    }
    Ok(finish(w))
}

fn series_csv(points: &[SeriesPoint], group_label: &str) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([group_label, "topic_id", "series", "rank", "value"])?;
    for p in points {
        w.write_record([
            p.group.clone(),
            p.topic_id.clone(),
            p.series.clone(),
            p.rank.to_string(),
            fmt3(p.value),
        ])?;
    }
    Ok(finish(w))
}

fn classic_csv(reports: &[ClassicReport]) -> Result<String> {
    let thresholds: Vec<f64> = reports.first().map(|r| r.thresholds.clone()).unwrap_or_default();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = [
        "topic_id",
        "rank",
        "doc_id",
        "avg_rel",
        "total_rel",
        "total_cg",
        "avg_cg",
    ]
    .map(String::from)
    .to_vec();
    header.extend(thresholds.iter().map(|t| format!("p_at_rank_ge_{}", fmt_threshold(*t))));
    header.extend(["icg", "dcg", "idcg", "ndcg"].map(String::from));
    w.write_record(&header)?;
    for rep in reports {
        for (j, row) in rep.rows.iter().enumerate() {
            let mut rec = vec![
                rep.topic_id.clone(),
                row.rank.to_string(),
                row.doc_id.clone(),
                fmt3(row.avg_rel),
                fmt3(row.total_rel),
                fmt3(row.total_cg),
                fmt3(row.avg_cg),
            ];
            rec.extend(rep.precision.iter().map(|p| fmt3(p[j])));
            rec.extend([rep.ideal_cg[j], rep.dcg[j], rep.ideal_dcg[j], rep.ndcg[j]].map(fmt3));
            w.write_record(&rec)?;
        }
    }
    Ok(finish(w))
}

/// Renders a report set. Output is byte-identical for identical input.
pub fn write_report(set: ReportSet<'_>, format: Format) -> Result<String> {
    match (set, format) {
        (ReportSet::Scores(reports), Format::Csv) => score_rows_csv(reports.iter()),
        (ReportSet::Scores(reports), Format::Json) => Ok(to_json(&json!({ "reports": reports }))),
        (ReportSet::Ideals(ideals), Format::Csv) => score_rows_csv(ideals.iter().map(|i| &i.report)),
        (ReportSet::Ideals(ideals), Format::Json) => Ok(to_json(&json!({ "ideals": ideals }))),
        (ReportSet::Normalized { runs, .. }, Format::Csv) => normalized_csv(runs),
        (ReportSet::Normalized { runs, config }, Format::Json) => Ok(to_json(&json!({
            "config": config,
            "zero_ideal_policy": ZERO_IDEAL_POLICY,
            "topics": runs,
        }))),
        (ReportSet::Series { points, group_label }, Format::Csv) => series_csv(points, group_label),
        (ReportSet::Series { points, group_label }, Format::Json) => Ok(to_json(&json!({
            "group_label": group_label,
            "points": points,
        }))),
        (ReportSet::Classic(reports), Format::Csv) => classic_csv(reports),
        (ReportSet::Classic(reports), Format::Json) => {
            let thresholds: Vec<f64> = reports.first().map(|r| r.thresholds.clone()).unwrap_or_default();
            let map: Vec<_> = thresholds
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let aps: Vec<f64> = reports.iter().map(|r| r.average_precision[i]).collect();
                    json!({ "threshold": t, "map": mean_average_precision(&aps) })
                })
                .collect();
            Ok(to_json(&json!({ "reports": reports, "mean_average_precision": map })))
        }
    }
}
