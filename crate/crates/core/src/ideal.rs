//! Greedy ideal ranking of a relevance corpus.
//!
//! Starting from an empty cumulation, each rank takes the remaining
//! document whose residual score (usability times overlap-discounted
//! contribution, given what is already ranked) is largest. Ties go to the
//! lexicographically smallest doc id. Every document is placed, so the ideal
//! is as long as the corpus. Cost is O(k^2 n) for k documents and n themes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{null_struct, vec_add, EvalConfig, RankedList, RelevanceCorpus, ThemeVector};
use crate::scoring::{score_ranking, step, ScoreReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealRanking {
    pub ordering: Vec<String>,
    /// The ideal order scored under the same config.
    pub report: ScoreReport,
}

impl IdealRanking {
    pub fn as_ranked_list(&self) -> RankedList {
        RankedList::new(self.report.topic_id.clone(), self.ordering.iter().cloned())
            .expect("ideal ordering has unique ids")
    }

    /// Ranks (1-based) at which some remaining document would have scored
    /// strictly higher than the one placed. Empty for a greedy ordering.
    pub fn greedy_violations(&self, corpus: &RelevanceCorpus, config: &EvalConfig) -> Result<Vec<usize>> {
        let mut crr = null_struct(corpus.n_themes())?;
        let mut placed = std::collections::HashSet::new();
        let mut out = Vec::new();
        for (idx, id) in self.ordering.iter().enumerate() {
            let rank = idx + 1;
            let chosen = step(&crr, &corpus.resolve(id), rank, config)?;
            for other in corpus.docs() {
                if placed.contains(other.doc_id()) || other.doc_id() == id {
                    continue;
                }
                if step(&crr, other, rank, config)?.doc_score > chosen.doc_score {
                    out.push(rank);
                    break;
                }
            }
            placed.insert(id.as_str());
            crr = vec_add(&crr, &chosen.delta)?;
        }
        Ok(out)
    }
}

/// Builds the greedy ideal ranking of `corpus` under `config`.
pub fn ideal_ranking(corpus: &RelevanceCorpus, config: &EvalConfig) -> Result<IdealRanking> {
    if corpus.is_empty() {
        return Err(Error::Domain(format!(
            "cannot build an ideal ranking for topic {}: relevance corpus is empty",
            corpus.topic_id()
        )));
    }
    config.validate_for(corpus.n_themes())?;

    // ascending id order, so strict `>` below keeps the smallest id on ties
    let mut remaining: Vec<_> = corpus.docs().collect();
    let mut crr: ThemeVector = null_struct(corpus.n_themes())?;
    let mut ordering = Vec::with_capacity(remaining.len());

    while !remaining.is_empty() {
        let rank = ordering.len() + 1;
        let mut best: Option<(usize, f64, ThemeVector)> = None;
        for (i, doc) in remaining.iter().enumerate() {
            let s = step(&crr, doc, rank, config)?;
            if best.as_ref().is_none_or(|(_, score, _)| s.doc_score > *score) {
                best = Some((i, s.doc_score, s.delta));
            }
        }
        let (i, _, delta) = best.expect("remaining is non-empty");
        crr = vec_add(&crr, &delta)?;
        ordering.push(remaining.remove(i).doc_id().to_string());
    }

    let list = RankedList::new(corpus.topic_id(), ordering.iter().cloned())?;
    let report = score_ranking(&list, corpus, config)?;
    Ok(IdealRanking { ordering, report })
}
