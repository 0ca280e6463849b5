//! Multi-topic evaluation passes: pairing runs with corpora, normalization
//! against the ideal, overlap-base sweeps and run comparisons. Results are
//! plain records; formatting lives in [`crate::io`].

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classic::{average_precision, collapse_mono, dcg, ideal_dcg, ideal_mono, precision_at, MonoRow};
use crate::error::{Error, Result};
use crate::ideal::ideal_ranking;
use crate::model::{EvalConfig, RankedList, RelevanceCorpus};
use crate::normalize::{gain_vector, ideal_gain_vector, mean_curve, norm_vector, theme_slice_gain, GainVector};
use crate::scoring::{score_ranking, ScoreReport};

/// Corpora keyed by topic id.
#[derive(Debug, Clone, Default)]
pub struct TopicSet {
    corpora: HashMap<String, RelevanceCorpus>,
    order: Vec<String>,
}

impl TopicSet {
    pub fn new(corpora: impl IntoIterator<Item = RelevanceCorpus>) -> Result<Self> {
        let mut set = Self::default();
        for c in corpora {
            let id = c.topic_id().to_string();
            if set.corpora.contains_key(&id) {
                return Err(Error::Input(format!("topic {id} given more than once")));
            }
            set.order.push(id.clone());
            set.corpora.insert(id, c);
        }
        Ok(set)
    }

    pub fn get(&self, topic_id: &str) -> Option<&RelevanceCorpus> {
        self.corpora.get(topic_id)
    }

    /// Corpora in the order they were supplied.
    pub fn iter(&self) -> impl Iterator<Item = &RelevanceCorpus> {
        self.order.iter().map(|id| &self.corpora[id])
    }

    /// Pairs each ranked list with its topic's corpus.
    pub fn pair<'a>(&'a self, runs: &'a [RankedList]) -> Result<Vec<(&'a RankedList, &'a RelevanceCorpus)>> {
        runs.iter()
            .map(|r| {
                self.get(r.topic_id())
                    .map(|c| (r, c))
                    .ok_or_else(|| Error::Input(format!("run topic {} has no relevance corpus", r.topic_id())))
            })
            .collect()
    }
}

/// Scores every topic of a run.
pub fn score_run(runs: &[RankedList], topics: &TopicSet, config: &EvalConfig) -> Result<Vec<ScoreReport>> {
    topics
        .pair(runs)?
        .into_par_iter()
        .map(|(r, c)| score_ranking(r, c, config))
        .collect()
}

/// Observed, ideal and normalized gain for one topic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedRun {
    pub topic_id: String,
    pub run_order: Vec<String>,
    pub ideal_order: Vec<String>,
    pub search: GainVector,
    pub ideal: GainVector,
    pub normalized: GainVector,
    pub unjudged_count: usize,
    pub ranks_above_one: Vec<usize>,
}

/// Normalizes `ranking` by the ideal ranking of `corpus`. The cutoff `k`
/// defaults to the ranking length and may not exceed it.
pub fn normalize_run(
    ranking: &RankedList,
    corpus: &RelevanceCorpus,
    config: &EvalConfig,
    k: Option<usize>,
) -> Result<NormalizedRun> {
    if ranking.topic_id() != corpus.topic_id() {
        return Err(Error::Input(format!(
            "run topic {} does not match corpus topic {}",
            ranking.topic_id(),
            corpus.topic_id()
        )));
    }
    let k = k.unwrap_or(ranking.len());
    let report = score_ranking(ranking, corpus, config)?;
    let search = gain_vector(&report, k)?;
    let ideal = ideal_ranking(corpus, config)?;
    let ig = ideal_gain_vector(&ideal, k);
    let normalized = norm_vector(&search, &ig)?;
    Ok(NormalizedRun {
        topic_id: corpus.topic_id().to_string(),
        run_order: ranking.entries()[..k].to_vec(),
        ideal_order: ideal.ordering.into_iter().take(k).collect(),
        ranks_above_one: normalized.ranks_above_one(),
        search,
        ideal: ig,
        normalized,
        unjudged_count: report.rows[..k].iter().filter(|r| !r.judged).count(),
    })
}

pub fn normalize_all(
    runs: &[RankedList],
    topics: &TopicSet,
    config: &EvalConfig,
    k: Option<usize>,
) -> Result<Vec<NormalizedRun>> {
    topics
        .pair(runs)?
        .into_par_iter()
        .map(|(r, c)| normalize_run(r, c, config, k.map(|k| k.min(r.len()))))
        .collect()
}

/// One point of long-form plot data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    /// Sweep: the overlap base; compare: the run name.
    pub group: String,
    pub topic_id: String,
    pub series: String,
    pub rank: usize,
    pub value: f64,
}

fn push_series(out: &mut Vec<SeriesPoint>, group: &str, topic: &str, series: &str, values: &[f64]) {
    out.extend(values.iter().enumerate().map(|(i, v)| SeriesPoint {
        group: group.to_string(),
        topic_id: topic.to_string(),
        series: series.to_string(),
        rank: i + 1,
        value: *v,
    }));
}

fn prefix(values: impl Iterator<Item = f64>) -> Vec<f64> {
    values
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect()
}

/// Scores each topic once per overlap base. Per base and topic the series are
/// `utility` (cumulated document score), `relevance` (cumulated usability-free
/// theme mass) and one `theme:<name>` curve per selected theme.
pub fn sweep(
    runs: &[RankedList],
    topics: &TopicSet,
    base_config: &EvalConfig,
    b_values: &[f64],
    themes: Option<&BTreeSet<usize>>,
    k: Option<usize>,
) -> Result<Vec<SeriesPoint>> {
    if b_values.is_empty() {
        return Err(Error::Config("sweep needs at least one b value".into()));
    }
    let configs: Vec<EvalConfig> = b_values
        .iter()
        .map(|b| {
            let cfg = EvalConfig {
                b: *b,
                ..base_config.clone()
            };
            cfg.validate().map(|_| cfg)
        })
        .collect::<Result<_>>()?;
    let pairs = topics.pair(runs)?;

    let chunks: Vec<Vec<SeriesPoint>> = configs
        .par_iter()
        .map(|cfg| {
            let mut out = Vec::new();
            let group = format_b(cfg.b);
            for (run, corpus) in &pairs {
                let run = match k {
                    Some(k) => run.truncated(k),
                    None => (*run).clone(),
                };
                let report = score_ranking(&run, corpus, cfg)?;
                let topic = corpus.topic_id();
                push_series(&mut out, &group, topic, "utility", &report.cum_utility());
                push_series(
                    &mut out,
                    &group,
                    topic,
                    "relevance",
                    &prefix(report.rows.iter().map(|r| r.contrib_sum)),
                );
                let selected: Vec<usize> = match themes {
                    Some(set) => set.iter().copied().collect(),
                    None => (0..corpus.n_themes()).collect(),
                };
                for t in selected {
                    let slice = theme_slice_gain(&report, &BTreeSet::from([t]))?;
                    let name = format!("theme:{}", corpus.manifest().theme_names[t]);
                    push_series(&mut out, &group, topic, &name, &slice.values);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

fn format_b(b: f64) -> String {
    format!("{b}")
}

/// Gain curves of several runs side by side. Per run and topic the series
/// are `cg`, `icg` and `ncg`; when a run covers several topics, `mean_cg` and
/// `mean_ncg` rows (topic id `*`) average them rank by rank.
pub fn compare(
    runs: &[(String, Vec<RankedList>)],
    topics: &TopicSet,
    config: &EvalConfig,
    k: Option<usize>,
) -> Result<Vec<SeriesPoint>> {
    let per_run: Vec<Vec<SeriesPoint>> = runs
        .par_iter()
        .map(|(name, lists)| {
            let normalized = normalize_all(lists, topics, config, k)?;
            let mut out = Vec::new();
            for n in &normalized {
                push_series(&mut out, name, &n.topic_id, "cg", &n.search.values);
                push_series(&mut out, name, &n.topic_id, "icg", &n.ideal.values);
                push_series(&mut out, name, &n.topic_id, "ncg", &n.normalized.values);
            }
            if normalized.len() > 1 {
                let cg: Vec<GainVector> = normalized.iter().map(|n| n.search.clone()).collect();
                let ncg: Vec<GainVector> = normalized.iter().map(|n| n.normalized.clone()).collect();
                if let Some(m) = mean_curve(&cg) {
                    push_series(&mut out, name, "*", "mean_cg", &m.values);
                }
                if let Some(m) = mean_curve(&ncg) {
                    push_series(&mut out, name, "*", "mean_ncg", &m.values);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(per_run.into_iter().flatten().collect())
}

/// Traditional metrics for one topic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicReport {
    pub topic_id: String,
    pub rows: Vec<MonoRow>,
    pub thresholds: Vec<f64>,
    /// One precision-at-rank vector per threshold.
    pub precision: Vec<Vec<f64>>,
    /// One average precision per threshold.
    pub average_precision: Vec<f64>,
    pub ideal_cg: Vec<f64>,
    pub dcg: Vec<f64>,
    pub ideal_dcg: Vec<f64>,
    pub ndcg: Vec<f64>,
    pub dcg_base: f64,
}

pub fn classic_report(
    ranking: &RankedList,
    corpus: &RelevanceCorpus,
    themes: Option<&BTreeSet<usize>>,
    thresholds: &[f64],
    dcg_base: f64,
) -> Result<ClassicReport> {
    if let Some(t) = thresholds.iter().find(|t| t.is_nan() || **t < 0.0) {
        return Err(Error::Input(format!("relevance threshold {t} must be >= 0")));
    }
    let rows = collapse_mono(ranking, corpus, themes)?;
    let k = rows.len();
    let observed = dcg(&rows, dcg_base)?;
    let ideal = ideal_dcg(corpus, themes, dcg_base, k)?;
    let ideal_rows = ideal_mono(corpus, themes)?;
    let plateau = ideal_rows.last().map_or(0.0, |r| r.total_cg);
    let ideal_cg: Vec<f64> = (0..k)
        .map(|i| ideal_rows.get(i).map_or(plateau, |r| r.total_cg))
        .collect();
    Ok(ClassicReport {
        topic_id: ranking.topic_id().to_string(),
        precision: thresholds.iter().map(|t| precision_at(&rows, *t)).collect(),
        average_precision: thresholds
            .iter()
            .map(|t| average_precision(&rows, corpus, themes, *t))
            .collect::<Result<_>>()?,
        ndcg: observed
            .iter()
            .zip(&ideal)
            .map(|(o, i)| if *i == 0.0 { 0.0 } else { o / i })
            .collect(),
        thresholds: thresholds.to_vec(),
        ideal_cg,
        dcg: observed,
        ideal_dcg: ideal,
        rows,
        dcg_base,
    })
}

pub fn classic_all(
    runs: &[RankedList],
    topics: &TopicSet,
    themes: Option<&BTreeSet<usize>>,
    thresholds: &[f64],
    dcg_base: f64,
) -> Result<Vec<ClassicReport>> {
    topics
        .pair(runs)?
        .into_par_iter()
        .map(|(r, c)| classic_report(r, c, themes, thresholds, dcg_base))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testdata::{ranking, rc_prime, S1};

    fn topics() -> TopicSet {
        TopicSet::new([rc_prime()]).unwrap()
    }

    #[test]
    fn pairing_rejects_unknown_topic() {
        let other = RankedList::new("T9", ["d1"]).unwrap();
        assert!(topics().pair(std::slice::from_ref(&other)).is_err());
        assert!(TopicSet::new([rc_prime(), rc_prime()]).is_err());
    }

    #[test]
    fn normalize_ideal_against_itself() {
        let rc = rc_prime();
        let cfg = EvalConfig::with_b(1.5);
        let ideal = ideal_ranking(&rc, &cfg).unwrap();
        let n = normalize_run(&ideal.as_ranked_list(), &rc, &cfg, None).unwrap();
        assert!(n.normalized.values.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn normalize_rejects_topic_mismatch() {
        let other = RankedList::new("T2", ["d1"]).unwrap();
        assert!(normalize_run(&other, &rc_prime(), &EvalConfig::default(), None).is_err());
    }

    #[test]
    fn normalize_longer_than_corpus() {
        let rc = rc_prime().restrict(["d1", "d2"]);
        let run = ranking(&["d1", "x", "d2"]);
        let n = normalize_run(&run, &rc, &EvalConfig::default(), None).unwrap();
        assert_eq!(n.ideal.len(), 3);
        assert_eq!(n.unjudged_count, 1);
        assert_eq!(n.ideal_order.len(), 2);
    }

    #[test]
    fn sweep_reports_both_sums() {
        let cfg = EvalConfig::default();
        let runs = [ranking(&S1)];
        let points = sweep(&runs, &topics(), &cfg, &[1.1, 2.0], None, Some(6)).unwrap();
        let last = |b: &str| {
            points
                .iter()
                .filter(|p| p.group == b && p.series == "relevance" && p.rank == 6)
                .map(|p| p.value)
                .next()
                .unwrap()
        };
        assert!((last("1.1") - 11.49).abs() < 0.01);
        assert!((last("2") - 18.569).abs() < 5e-4);
        assert!(sweep(&runs, &topics(), &cfg, &[1.0], None, None).is_err());
        assert!(sweep(&runs, &topics(), &cfg, &[], None, None).is_err());
    }

    #[test]
    fn sweep_single_value_matches_score() {
        let cfg = EvalConfig::with_b(2.0);
        let runs = [ranking(&S1)];
        let points = sweep(&runs, &topics(), &cfg, &[2.0], None, None).unwrap();
        let report = score_ranking(&runs[0], &rc_prime(), &cfg).unwrap();
        let utility: Vec<f64> = points
            .iter()
            .filter(|p| p.series == "utility")
            .map(|p| p.value)
            .collect();
        assert_eq!(utility, report.cum_utility());
    }

    #[test]
    fn compare_identical_runs() {
        let cfg = EvalConfig::with_b(1.5);
        let runs = vec![
            ("a".to_string(), vec![ranking(&S1)]),
            ("b".to_string(), vec![ranking(&S1)]),
        ];
        let points = compare(&runs, &topics(), &cfg, None).unwrap();
        let curve = |g: &str| -> Vec<f64> {
            points
                .iter()
                .filter(|p| p.group == g && p.series == "ncg")
                .map(|p| p.value)
                .collect()
        };
        assert_eq!(curve("a"), curve("b"));
        assert!((curve("a")[9] - 0.92).abs() <= 0.005);
    }

    #[test]
    fn compare_means_over_topics() {
        let mut t2 = rc_prime().manifest().clone();
        t2.topic_id = "T2".into();
        let rc2 = RelevanceCorpus::new(t2, rc_prime().docs().cloned()).unwrap();
        let topics = TopicSet::new([rc_prime(), rc2]).unwrap();
        let lists = vec![ranking(&S1), RankedList::new("T2", S1).unwrap()];
        let points = compare(&[("r".into(), lists)], &topics, &EvalConfig::with_b(1.5), None).unwrap();
        let mean: Vec<f64> = points
            .iter()
            .filter(|p| p.series == "mean_ncg")
            .map(|p| p.value)
            .collect();
        let single: Vec<f64> = points
            .iter()
            .filter(|p| p.series == "ncg" && p.topic_id == "T1")
            .map(|p| p.value)
            .collect();
        assert_eq!(mean.len(), 10);
        for (a, b) in mean.iter().zip(&single) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn classic_s1() {
        let rep = classic_report(&ranking(&S1), &rc_prime(), None, &[1.0, 2.0], 2.0).unwrap();
        assert_eq!(rep.precision[1][9], 0.1);
        assert_eq!(rep.ideal_cg[0], 10.0);
        assert_eq!(rep.ideal_cg[9], 39.0);
        assert!(classic_report(&ranking(&S1), &rc_prime(), None, &[-1.0], 2.0).is_err());
    }
}
