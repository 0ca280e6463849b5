//! Rank-wise scoring of a search result.
//!
//! Each document adds its theme relevance to a running per-theme mass
//! (`crr`). A theme's new relevance is divided by `max(1, log_b crr[i])`,
//! so content that repeats themes already well covered earns less. The
//! running mass itself is usability-free; a document's usability factor
//! (the product of its attribute factors) scales only its own score:
//!
//! ```text
//! delta[i]  = drel[i] / max(1, log_b crr[i])
//! crr      <- crr + delta
//! doc_score = attr_fact(d) * sum(delta)        (/ rank discount, if enabled)
//! cum       = cum + doc_score
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::model::{null_struct, vec_add, DocumentRep, EvalConfig, RankedList, RelevanceCorpus, ThemeVector};

/// Product of the document's attribute factors, or 1 when attributes are
/// switched off. An empty attribute list yields 1.
pub fn attr_fact(d: &DocumentRep, config: &EvalConfig) -> f64 {
    if !config.attributes_on {
        return 1.0;
    }
    d.attrs().values().iter().product()
}

/// Divisor applied to a theme's new relevance given the mass already
/// cumulated on that theme. Never below 1; discounting starts only once
/// the mass exceeds `b`.
pub fn overlap_divisor(cum_mass: f64, b: f64, overlap_on: bool) -> Result<f64> {
    if b.is_nan() || b <= 1.0 {
        return Err(Error::Config(format!("overlap base b = {b} must be > 1")));
    }
    if !overlap_on || cum_mass <= b {
        return Ok(1.0);
    }
    Ok(cum_mass.ln() / b.ln())
}

/// Discount for a document placed at `rank` (1-based) when the rank
/// discount is enabled: `max(1, log_base rank)`.
pub fn rank_discount(rank: usize, config: &EvalConfig) -> f64 {
    let base = config.rank_discount_base;
    let r = rank as f64;
    if r <= base {
        1.0
    } else {
        r.ln() / base.ln()
    }
}

/// Overlap-discounted increment a document adds to the cumulated relevance.
/// Usability is not applied here.
pub fn contrib(crr: &ThemeVector, d: &DocumentRep, config: &EvalConfig) -> Result<ThemeVector> {
    check_dim(crr.len(), d.trel().len())?;
    let delta = crr
        .iter()
        .zip(d.trel().iter())
        .enumerate()
        .map(|(i, (mass, rel))| {
            let div = overlap_divisor(mass, config.overlap_base(i), config.overlap_on)?;
            Ok(rel / div)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ThemeVector::from_raw(delta))
}

/// One ranking step evaluated against the running `crr`.
#[derive(Debug, Clone)]
pub(crate) struct Step {
    pub delta: ThemeVector,
    pub usability: f64,
    pub rank_divisor: f64,
    pub doc_score: f64,
}

pub(crate) fn step(crr: &ThemeVector, d: &DocumentRep, rank: usize, config: &EvalConfig) -> Result<Step> {
    let delta = contrib(crr, d, config)?;
    let usability = attr_fact(d, config);
    let rank_divisor = if config.rank_discount_on {
        rank_discount(rank, config)
    } else {
        1.0
    };
    let doc_score = usability * delta.sum() / rank_divisor;
    Ok(Step {
        delta,
        usability,
        rank_divisor,
        doc_score,
    })
}

/// One rank of a scored result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankRow {
    pub rank: usize,
    pub doc_id: String,
    pub judged: bool,
    /// Sum of the raw theme scores.
    pub face_total: f64,
    /// Overlap-discounted per-theme contributions, without usability.
    pub theme_contribs: ThemeVector,
    pub contrib_sum: f64,
    pub usability: f64,
    /// 1 unless the rank discount is enabled.
    pub rank_divisor: f64,
    pub doc_score: f64,
    pub cum_utility: f64,
}

impl RankRow {
    /// Factor that turns usability-free contributions into this row's score.
    pub fn weight(&self) -> f64 {
        self.usability / self.rank_divisor
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub topic_id: String,
    pub rows: Vec<RankRow>,
    /// Final cumulated relevance per theme (usability-free).
    pub theme_totals: ThemeVector,
    pub theme_totals_sum: f64,
    pub config_echo: EvalConfig,
    pub unjudged_count: usize,
}

impl ScoreReport {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn doc_scores(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.doc_score).collect()
    }

    pub fn cum_utility(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.cum_utility).collect()
    }

    pub fn ordering(&self) -> Vec<&str> {
        self.rows.iter().map(|r| r.doc_id.as_str()).collect()
    }
}

/// Scores `ranking` against `corpus`, rank by rank.
pub fn score_ranking(ranking: &RankedList, corpus: &RelevanceCorpus, config: &EvalConfig) -> Result<ScoreReport> {
    let n = corpus.n_themes();
    config.validate_for(n)?;

    let mut crr = null_struct(n)?;
    let mut cum = 0.0;
    let mut unjudged_count = 0;
    let mut rows = Vec::with_capacity(ranking.len());

    for (idx, doc_id) in ranking.entries().iter().enumerate() {
        let rank = idx + 1;
        let judged = corpus.contains(doc_id);
        if !judged {
            unjudged_count += 1;
        }
        let doc = corpus.resolve(doc_id);
        let s = step(&crr, &doc, rank, config)?;
        crr = vec_add(&crr, &s.delta)?;
        cum += s.doc_score;
        rows.push(RankRow {
            rank,
            doc_id: doc_id.clone(),
            judged,
            face_total: doc.face_total(),
            contrib_sum: s.delta.sum(),
            theme_contribs: s.delta,
            usability: s.usability,
            rank_divisor: s.rank_divisor,
            doc_score: s.doc_score,
            cum_utility: cum,
        });
    }

    Ok(ScoreReport {
        topic_id: ranking.topic_id().to_string(),
        rows,
        theme_totals_sum: crr.sum(),
        theme_totals: crr,
        config_echo: config.clone(),
        unjudged_count,
    })
}
