//! Run files: whitespace-separated `topic_id Q0 doc_id rank score run_tag`.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::corpus::Loaded;
use crate::model::RankedList;

struct Entry {
    rank: u64,
    seq: usize,
    doc_id: String,
}

/// Parses a run into one ranked list per topic, topics in order of first
/// appearance. Ranks that are not exactly `1..k` are re-sorted and renumbered
/// with a warning. Score and tag columns are optional and ignored.
pub fn parse_run(text: &str, path: &Path) -> Result<Loaded<Vec<RankedList>>> {
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut topics: Vec<String> = Vec::new();
    let mut entries: HashMap<String, Vec<Entry>> = HashMap::new();
    let mut seen: HashSet<(String, String)> = HashSet::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = trimmed.split_whitespace().collect();
        if cols.len() < 4 {
            return Err(err(
                line,
                format!(
                    "expected `topic_id Q0 doc_id rank score run_tag`, found {} columns",
                    cols.len()
                ),
            ));
        }
        let (topic, doc) = (cols[0].to_string(), cols[2].to_string());
        let rank: u64 = cols[3]
            .parse()
            .ok()
            .filter(|r| *r >= 1)
            .ok_or_else(|| err(line, format!("rank {:?} is not a positive integer", cols[3])))?;
        if let Some(score) = cols.get(4) {
            score
                .parse::<f64>()
                .map_err(|_| err(line, format!("score {score:?} is not a number")))?;
        }
        if !seen.insert((topic.clone(), doc.clone())) {
            return Err(err(line, format!("document {doc} listed twice for topic {topic}")));
        }
        let list = entries.entry(topic.clone()).or_insert_with(|| {
            topics.push(topic.clone());
            Vec::new()
        });
        list.push(Entry {
            rank,
            seq: list.len(),
            doc_id: doc,
        });
    }

    let mut warnings = Vec::new();
    let mut lists = Vec::with_capacity(topics.len());
    for topic in topics {
        let mut list = entries.remove(&topic).unwrap_or_default();
        list.sort_by_key(|e| (e.rank, e.seq));
        let contiguous = list.iter().enumerate().all(|(i, e)| e.rank == i as u64 + 1);
        if !contiguous {
            warnings.push(format!(
                "{}: ranks for topic {topic} are not 1..{}; documents re-sorted by rank and renumbered",
                path.display(),
                list.len()
            ));
        }
        lists.push(RankedList::new(topic, list.into_iter().map(|e| e.doc_id))?);
    }
    Ok(Loaded { value: lists, warnings })
}

pub fn read_run(path: impl AsRef<Path>) -> Result<Loaded<Vec<RankedList>>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_run(&text, path)
}

/// Writes ranked lists in run format; the score column is `k - rank + 1`.
pub fn write_run(lists: &[RankedList], run_tag: &str) -> String {
    let mut out = String::new();
    for list in lists {
        let k = list.len();
        for (i, doc) in list.entries().iter().enumerate() {
            let _ = writeln!(out, "{} Q0 {} {} {} {}", list.topic_id(), doc, i + 1, k - i, run_tag);
        }
    }
    out
}
