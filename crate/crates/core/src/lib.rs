//! Evaluation of ranked retrieval results with multidimensional graded
//! relevance.
//!
//! Documents are judged per content theme on a graded scale and carry
//! usability attribute factors in `[0, 1]`. A ranking is scored by
//! cumulating theme relevance rank by rank, dividing each new contribution by
//! the logarithm of the mass already collected on that theme, and weighting
//! each document by the product of its attribute factors. Scores are
//! normalized against a greedily built ideal ranking. Switching the overlap
//! and attribute discounts off recovers plain cumulated gain; enabling the
//! rank discount gives DCG-style weighting.
//!
//! ```
//! use mdcu::{score_ranking, AttributeVector, DocumentRep, EvalConfig, RankedList,
//!            RelevanceCorpus, ThemeVector, TopicManifest};
//!
//! let doc = |id: &str, t: &[f64], a: &[f64]| {
//!     DocumentRep::new(id, ThemeVector::new(t.to_vec()).unwrap(),
//!                      AttributeVector::new(a.to_vec()).unwrap()).unwrap()
//! };
//! let corpus = RelevanceCorpus::new(
//!     TopicManifest::generic("T1", 2, 1),
//!     [doc("a", &[3.0, 1.0], &[1.0]), doc("b", &[3.0, 0.0], &[0.5])],
//! ).unwrap();
//! let run = RankedList::new("T1", ["a", "b"]).unwrap();
//! let report = score_ranking(&run, &corpus, &EvalConfig::with_b(2.0)).unwrap();
//! // b's theme-1 relevance is divided by log2(3)
//! assert!((report.rows[1].doc_score - 0.5 * 3.0 / 3f64.log2()).abs() < 1e-12);
//! ```

pub mod classic;
pub mod error;
pub mod experiment;
pub mod ideal;
pub mod io;
pub mod model;
pub mod normalize;
pub mod scoring;

#[cfg(test)]
mod testdata;

pub use error::{Error, Result};
pub use ideal::{ideal_ranking, IdealRanking};
pub use model::{
    null_struct, vec_add, vec_div, vec_mul, AttributeVector, DocumentRep, EvalConfig, RankedList, RelevanceCorpus,
    ThemeVector, TopicManifest,
};
pub use normalize::{doc_gain, gain_vector, ideal_gain_vector, norm_vector, theme_slice_gain, GainKind, GainVector};
pub use scoring::{attr_fact, contrib, overlap_divisor, rank_discount, score_ranking, RankRow, ScoreReport};
