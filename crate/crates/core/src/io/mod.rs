//! On-disk formats: topic manifests, relevance corpora, run files and reports.

pub mod corpus;
pub mod report;
pub mod run;

pub use corpus::{parse_corpus, parse_manifest, read_corpus, read_manifest, write_corpus, write_manifest, Loaded};
pub use report::{write_report, Format, ReportSet};
pub use run::{parse_run, read_run, write_run};
