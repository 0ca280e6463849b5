#![allow(dead_code)]

use std::path::PathBuf;

use mdcu::io::{read_corpus, read_run};
use mdcu::{RankedList, RelevanceCorpus};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

/// The ten-document corpus, optionally with one of the attribute variants.
pub fn corpus(variant: &str) -> RelevanceCorpus {
    let loaded = read_corpus(fixture("rc_prime.manifest.json"), fixture(&format!("{variant}.csv"))).unwrap();
    assert!(loaded.warnings.is_empty(), "{:?}", loaded.warnings);
    loaded.value
}

pub fn rc_prime() -> RelevanceCorpus {
    corpus("rc_prime")
}

pub fn run(name: &str) -> RankedList {
    let loaded = read_run(fixture(&format!("{name}.run"))).unwrap();
    assert!(loaded.warnings.is_empty());
    assert_eq!(loaded.value.len(), 1);
    loaded.value.into_iter().next().unwrap()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Independent re-statement of the scoring recurrence over plain arrays,
/// used as an enumeration oracle. Returns cumulative utility per rank.
pub fn oracle_cum(docs: &[(&[f64], &[f64])], b: f64, attributes: bool) -> Vec<f64> {
    let n = docs.first().map_or(0, |d| d.0.len());
    let mut mass = vec![0.0; n];
    let mut cum = 0.0;
    let mut out = Vec::with_capacity(docs.len());
    for (trel, attrs) in docs {
        let v: f64 = if attributes { attrs.iter().product() } else { 1.0 };
        let mut gained = 0.0;
        for i in 0..n {
            let div = if mass[i] > b { mass[i].log(b) } else { 1.0 };
            let inc = trel[i] / div;
            mass[i] += inc;
            gained += inc;
        }
        cum += v * gained;
        out.push(cum);
    }
    out
}

pub mod strategies {
    use mdcu::{AttributeVector, DocumentRep, RankedList, RelevanceCorpus, ThemeVector, TopicManifest};
    use proptest::prelude::*;

    /// Half-point theme grades in `[0, 3]` and attribute factors in tenths.
    pub fn corpus(max_docs: usize) -> impl Strategy<Value = RelevanceCorpus> {
        (1usize..=4, 0usize..=3, 1usize..=max_docs).prop_flat_map(|(n, m, k)| {
            prop::collection::vec(
                (prop::collection::vec(0u8..=6, n), prop::collection::vec(0u8..=10, m)),
                k,
            )
            .prop_map(move |rows| build(n, m, &rows))
        })
    }

    fn build(n: usize, m: usize, rows: &[(Vec<u8>, Vec<u8>)]) -> RelevanceCorpus {
        let docs = rows.iter().enumerate().map(|(j, (t, a))| {
            DocumentRep::new(
                format!("d{}", j + 1),
                ThemeVector::new(t.iter().map(|v| f64::from(*v) / 2.0).collect()).unwrap(),
                AttributeVector::new(a.iter().map(|v| f64::from(*v) / 10.0).collect()).unwrap(),
            )
            .unwrap()
        });
        RelevanceCorpus::new(TopicManifest::generic("T1", n, m), docs).unwrap()
    }

    /// A corpus with a shuffled ranking over all its documents plus,
    /// optionally, one unjudged document.
    pub fn corpus_and_run(max_docs: usize) -> impl Strategy<Value = (RelevanceCorpus, RankedList)> {
        (corpus(max_docs), any::<bool>()).prop_flat_map(|(c, stray)| {
            let mut ids: Vec<String> = c.docs().map(|d| d.doc_id().to_string()).collect();
            if stray {
                ids.push("unjudged".into());
            }
            (Just(c), Just(ids).prop_shuffle()).prop_map(|(c, ids)| (c, RankedList::new("T1", ids).unwrap()))
        })
    }

    pub fn base() -> impl Strategy<Value = f64> {
        prop_oneof![1.05f64..3.0, 3.0f64..50.0]
    }
}
