//! Traditional single-grade metrics over a collapsed relevance score:
//! CG, DCG, nDCG, precision at rank, and average precision.
//!
//! A document's mono-dimensional relevance is the sum of its theme scores
//! (optionally over a subset of themes); its average relevance divides that
//! sum by the number of themes considered. Binary relevance is
//! `avg_rel >= threshold`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{safe_div, DocumentRep, RankedList, RelevanceCorpus};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonoRow {
    pub rank: usize,
    pub doc_id: String,
    pub total_rel: f64,
    pub avg_rel: f64,
    pub total_cg: f64,
    pub avg_cg: f64,
}

fn theme_indices(corpus: &RelevanceCorpus, themes: Option<&BTreeSet<usize>>) -> Result<Vec<usize>> {
    let n = corpus.n_themes();
    match themes {
        None => Ok((0..n).collect()),
        Some(set) if set.is_empty() => Err(Error::Input("theme subset is empty".into())),
        Some(set) => {
            if let Some(bad) = set.iter().find(|i| **i >= n) {
                return Err(Error::Input(format!("theme index {} out of range 1..={n}", bad + 1)));
            }
            Ok(set.iter().copied().collect())
        }
    }
}

fn mono_rows<'a>(docs: impl Iterator<Item = &'a DocumentRep>, themes: &[usize]) -> Vec<MonoRow> {
    let n = themes.len() as f64;
    let mut cg = 0.0;
    docs.enumerate()
        .map(|(i, d)| {
            let total_rel: f64 = themes.iter().map(|t| d.trel()[*t]).sum();
            cg += total_rel;
            MonoRow {
                rank: i + 1,
                doc_id: d.doc_id().to_string(),
                total_rel,
                avg_rel: total_rel / n,
                total_cg: cg,
                avg_cg: cg / n,
            }
        })
        .collect()
}

/// Collapses each ranked document to its summed theme relevance.
/// `themes` holds 0-based theme indices; `None` means all themes.
pub fn collapse_mono(
    ranking: &RankedList,
    corpus: &RelevanceCorpus,
    themes: Option<&BTreeSet<usize>>,
) -> Result<Vec<MonoRow>> {
    let idx = theme_indices(corpus, themes)?;
    let docs: Vec<_> = ranking.entries().iter().map(|id| corpus.resolve(id)).collect();
    Ok(mono_rows(docs.iter().map(|d| d.as_ref()), &idx))
}

/// Corpus documents ordered by descending summed relevance, ties by id.
pub fn ideal_mono(corpus: &RelevanceCorpus, themes: Option<&BTreeSet<usize>>) -> Result<Vec<MonoRow>> {
    if corpus.is_empty() {
        return Err(Error::Domain(format!(
            "relevance corpus for topic {} is empty",
            corpus.topic_id()
        )));
    }
    let idx = theme_indices(corpus, themes)?;
    let total = |d: &DocumentRep| idx.iter().map(|t| d.trel()[*t]).sum::<f64>();
    let mut docs: Vec<_> = corpus.docs().collect();
    // stable sort keeps the corpus's ascending-id order among equal totals
    docs.sort_by(|a, b| total(b).total_cmp(&total(a)));
    Ok(mono_rows(docs.into_iter(), &idx))
}

fn is_relevant(row: &MonoRow, threshold: f64) -> bool {
    row.avg_rel >= threshold
}

/// Precision at each rank with `avg_rel >= threshold` as the relevance cut.
pub fn precision_at(rows: &[MonoRow], threshold: f64) -> Vec<f64> {
    let mut hits = 0usize;
    rows.iter()
        .map(|row| {
            if is_relevant(row, threshold) {
                hits += 1;
            }
            hits as f64 / row.rank as f64
        })
        .collect()
}

fn check_base(base: f64) -> Result<()> {
    if base > 1.0 && base.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("DCG log base {base} must be > 1")))
    }
}

fn discounted(gains: impl Iterator<Item = f64>, base: f64) -> Vec<f64> {
    let mut acc = 0.0;
    gains
        .enumerate()
        .map(|(i, g)| {
            let rank = (i + 1) as f64;
            let div = if rank <= base { 1.0 } else { rank.ln() / base.ln() };
            acc += g / div;
            acc
        })
        .collect()
}

/// Discounted cumulated gain: `DCG_j = sum_{i<=j} rel_i / max(1, log_base i)`.
pub fn dcg(rows: &[MonoRow], base: f64) -> Result<Vec<f64>> {
    check_base(base)?;
    Ok(discounted(rows.iter().map(|r| r.total_rel), base))
}

/// Ideal DCG over the corpus, cut or carried forward to length `k`.
pub fn ideal_dcg(corpus: &RelevanceCorpus, themes: Option<&BTreeSet<usize>>, base: f64, k: usize) -> Result<Vec<f64>> {
    check_base(base)?;
    let ideal = ideal_mono(corpus, themes)?;
    let gains = ideal.iter().map(|r| r.total_rel).chain(std::iter::repeat(0.0)).take(k);
    Ok(discounted(gains, base))
}

/// DCG normalized rank-wise by the corpus ideal. 0/0 gives 0.
pub fn ndcg(
    rows: &[MonoRow],
    corpus: &RelevanceCorpus,
    themes: Option<&BTreeSet<usize>>,
    base: f64,
) -> Result<Vec<f64>> {
    let observed = dcg(rows, base)?;
    let ideal = ideal_dcg(corpus, themes, base, rows.len())?;
    Ok(observed.iter().zip(&ideal).map(|(o, i)| safe_div(*o, *i)).collect())
}

/// Binary average precision of the ranking. The denominator is the number of
/// corpus documents whose average relevance reaches `threshold`.
pub fn average_precision(
    rows: &[MonoRow],
    corpus: &RelevanceCorpus,
    themes: Option<&BTreeSet<usize>>,
    threshold: f64,
) -> Result<f64> {
    let idx = theme_indices(corpus, themes)?;
    let n = idx.len() as f64;
    let judged_relevant = corpus
        .docs()
        .filter(|d| idx.iter().map(|t| d.trel()[*t]).sum::<f64>() / n >= threshold)
        .count();
    if judged_relevant == 0 {
        return Ok(0.0);
    }
    let precision = precision_at(rows, threshold);
    let sum: f64 = rows
        .iter()
        .zip(&precision)
        .filter(|(row, _)| is_relevant(row, threshold))
        .map(|(_, p)| p)
        .sum();
    Ok(sum / judged_relevant as f64)
}

/// Mean of per-topic average precision values; 0 for no topics.
pub fn mean_average_precision(aps: &[f64]) -> f64 {
    if aps.is_empty() {
        0.0
    } else {
        aps.iter().sum::<f64>() / aps.len() as f64
    }
}
