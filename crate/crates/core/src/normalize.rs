//! Cumulated gain vectors and their rank-wise normalization by the ideal.

use std::collections::BTreeSet;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::ideal::IdealRanking;
use crate::model::{safe_div, DocumentRep, EvalConfig};
use crate::scoring::{attr_fact, ScoreReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GainKind {
    Observed,
    Ideal,
    Normalized,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainVector {
    pub values: Vec<f64>,
    pub kind: GainKind,
}

impl GainVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn last(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// 1-based ranks whose value exceeds 1. Only meaningful for normalized vectors.
    pub fn ranks_above_one(&self) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v > 1.0)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

/// Usability-weighted cross-theme gain of a document whose theme vector has
/// already been discounted for overlap in its ranking context.
pub fn doc_gain(d: &DocumentRep, config: &EvalConfig) -> f64 {
    d.trel().sum() * attr_fact(d, config)
}

fn prefix_sums(values: impl Iterator<Item = f64>) -> Vec<f64> {
    values
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect()
}

/// Cumulated gain of the first `k` ranks of a scored result.
pub fn gain_vector(report: &ScoreReport, k: usize) -> Result<GainVector> {
    if k > report.len() {
        return Err(Error::Range { k, len: report.len() });
    }
    Ok(GainVector {
        values: prefix_sums(report.rows[..k].iter().map(|r| r.doc_score)),
        kind: GainKind::Observed,
    })
}

/// Cumulated gain of the ideal ranking at cutoff `k`. Past the end of the
/// corpus no document can add gain, so the final value is carried forward.
pub fn ideal_gain_vector(ideal: &IdealRanking, k: usize) -> GainVector {
    let len = ideal.report.len();
    let mut values = prefix_sums(ideal.report.rows[..k.min(len)].iter().map(|r| r.doc_score));
    let plateau = values.last().copied().unwrap_or(0.0);
    values.resize(k, plateau);
    GainVector {
        values,
        kind: GainKind::Ideal,
    }
}

/// Rank-wise `sg / ig`. A zero ideal component yields 0. Values above 1 are
/// kept (not clamped) and logged.
pub fn norm_vector(sg: &GainVector, ig: &GainVector) -> Result<GainVector> {
    check_dim(ig.len(), sg.len())?;
    let out = GainVector {
        values: sg
            .values
            .iter()
            .zip(&ig.values)
            .map(|(s, i)| safe_div(*s, *i))
            .collect(),
        kind: GainKind::Normalized,
    };
    let above = out.ranks_above_one();
    if !above.is_empty() {
        warn!("normalized gain exceeds 1 at ranks {above:?}");
    }
    Ok(out)
}

/// Cumulated gain restricted to a subset of themes (0-based indices), using
/// the same usability and rank weighting as the full document score.
pub fn theme_slice_gain(report: &ScoreReport, themes: &BTreeSet<usize>) -> Result<GainVector> {
    let n = report.theme_totals.len();
    if themes.is_empty() {
        return Err(Error::Input("theme subset is empty".into()));
    }
    if let Some(bad) = themes.iter().find(|i| **i >= n) {
        return Err(Error::Input(format!("theme index {} out of range 1..={n}", bad + 1)));
    }
    let per_rank = report.rows.iter().map(|row| {
        let mass: f64 = themes.iter().map(|i| row.theme_contribs[*i]).sum();
        mass * row.weight()
    });
    Ok(GainVector {
        values: prefix_sums(per_rank),
        kind: GainKind::Observed,
    })
}

/// Arithmetic mean at each rank over the vectors that reach that rank.
pub fn mean_curve(vectors: &[GainVector]) -> Option<GainVector> {
    let first = vectors.first()?;
    let len = vectors.iter().map(GainVector::len).max().unwrap_or(0);
    let values = (0..len)
        .map(|j| {
            let (sum, count) = vectors
                .iter()
                .filter_map(|v| v.values.get(j))
                .fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
            sum / count as f64
        })
        .collect();
    Some(GainVector {
        values,
        kind: first.kind,
    })
}
