//! The ten-document example corpus and its sample rankings, for unit tests.

use crate::model::{AttributeVector, DocumentRep, RankedList, RelevanceCorpus, ThemeVector, TopicManifest};

pub(crate) const RC_PRIME: [(&str, [f64; 4], [f64; 3]); 10] = [
    ("d1", [0.0, 1.0, 3.0, 2.0], [1.0, 1.0, 1.0]),
    ("d2", [2.0, 0.0, 0.0, 2.0], [0.9, 0.7, 0.9]),
    ("d3", [1.0, 0.0, 2.0, 0.0], [1.0, 0.9, 1.0]),
    ("d4", [0.0, 0.0, 3.0, 1.0], [0.8, 0.9, 0.7]),
    ("d5", [1.0, 2.0, 0.0, 2.0], [1.0, 1.0, 1.0]),
    ("d6", [0.0, 0.0, 0.0, 2.0], [1.0, 0.8, 1.0]),
    ("d7", [0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0]),
    ("d8", [1.0, 1.0, 1.0, 0.0], [0.3, 1.0, 1.0]),
    ("d9", [0.0, 0.0, 0.0, 2.0], [0.9, 0.9, 0.9]),
    ("d10", [3.0, 3.0, 3.0, 1.0], [1.0, 1.0, 1.0]),
];

pub(crate) const S1: [&str; 10] = ["d1", "d2", "d3", "d4", "d5", "d6", "d7", "d8", "d9", "d10"];
pub(crate) const S2: [&str; 10] = ["d6", "d7", "d8", "d9", "d10", "d1", "d2", "d3", "d4", "d5"];
pub(crate) const S3: [&str; 6] = ["d7", "d6", "d9", "d8", "d3", "d2"];

pub(crate) fn rc_prime() -> RelevanceCorpus {
    let docs = RC_PRIME.iter().map(|(id, t, a)| {
        DocumentRep::new(
            *id,
            ThemeVector::new(t.to_vec()).unwrap(),
            AttributeVector::new(a.to_vec()).unwrap(),
        )
        .unwrap()
    });
    RelevanceCorpus::new(TopicManifest::generic("T1", 4, 3), docs).unwrap()
}

pub(crate) fn ranking(ids: &[&str]) -> RankedList {
    RankedList::new("T1", ids.iter().copied()).unwrap()
}
