//! Topic manifests (JSON) and relevance corpora (CSV).
//!
//! Corpus layout: a header `doc_id,<theme columns>,<attribute columns>`
//! followed by one row per assessed document. Lines starting with `#` are
//! ignored. Decimal points only.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AttributeVector, DocumentRep, RelevanceCorpus, ThemeVector, TopicManifest};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum ScaleMax {
    Uniform(f64),
    PerTheme(Vec<f64>),
}

/// On-disk manifest. `theme_scale_max` may be a single number or one per theme.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestFile {
    topic_id: String,
    theme_names: Vec<String>,
    #[serde(default)]
    attribute_names: Vec<String>,
    #[serde(default)]
    theme_scale_max: Option<ScaleMax>,
    #[serde(default)]
    overlap_base_default: Option<f64>,
    #[serde(default)]
    per_theme_b: Option<Vec<f64>>,
}

impl From<ManifestFile> for TopicManifest {
    fn from(f: ManifestFile) -> Self {
        let n = f.theme_names.len();
        let theme_scale_max = match f.theme_scale_max {
            None => vec![TopicManifest::DEFAULT_SCALE_MAX; n],
            Some(ScaleMax::Uniform(v)) => vec![v; n],
            Some(ScaleMax::PerTheme(v)) => v,
        };
        TopicManifest {
            topic_id: f.topic_id,
            theme_names: f.theme_names,
            attribute_names: f.attribute_names,
            theme_scale_max,
            overlap_base_default: f.overlap_base_default.unwrap_or(TopicManifest::DEFAULT_OVERLAP_BASE),
            per_theme_b: f.per_theme_b,
        }
    }
}

/// A parsed file together with any non-fatal findings.
#[derive(Debug, Clone)]
pub struct Loaded<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn parse_manifest(text: &str, path: &Path) -> Result<TopicManifest> {
    let file: ManifestFile = serde_json::from_str(text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    let manifest = TopicManifest::from(file);
    manifest.validate()?;
    Ok(manifest)
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<TopicManifest> {
    let path = path.as_ref();
    parse_manifest(&read_text(path)?, path)
}

pub fn write_manifest(manifest: &TopicManifest) -> String {
    let mut s = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    s.push('\n');
    s
}

fn parse_err(path: &Path, line: u64, message: String) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line: line as usize,
        message,
    }
}

/// Parses corpus CSV text against a manifest. `path` only labels errors.
pub fn parse_corpus(manifest: TopicManifest, text: &str, path: &Path) -> Result<Loaded<RelevanceCorpus>> {
    manifest.validate()?;
    let (n, m) = (manifest.n_themes(), manifest.n_attributes());
    let width = 1 + n + m;
    let mut warnings = Vec::new();

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());

    let mut records = reader.records();
    let header = match records.next() {
        None => {
            return Ok(Loaded {
                value: RelevanceCorpus::new(manifest, [])?,
                warnings,
            })
        }
        Some(h) => h?,
    };
    let header_line = header.position().map_or(1, |p| p.line());
    if header.len() != width {
        return Err(parse_err(
            path,
            header_line,
            format!(
                "header has {} columns; manifest declares 1 + {n} themes + {m} attributes = {width}",
                header.len()
            ),
        ));
    }
    if &header[0] != "doc_id" {
        return Err(parse_err(
            path,
            header_line,
            format!("first header column must be doc_id, found {:?}", &header[0]),
        ));
    }
    let columns: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let generic = TopicManifest::generic(&manifest.topic_id, n, m);
    let named: Vec<&String> = manifest.theme_names.iter().chain(&manifest.attribute_names).collect();
    let generic_names: Vec<&String> = generic.theme_names.iter().chain(&generic.attribute_names).collect();
    if columns.iter().collect::<Vec<_>>() != named && columns.iter().collect::<Vec<_>>() != generic_names {
        warnings.push(format!(
            "{}: header columns do not match manifest names; using column positions",
            path.display()
        ));
    }

    let mut docs = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for record in records {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != width {
            return Err(parse_err(
                path,
                line,
                format!("expected {width} columns, found {}", record.len()),
            ));
        }
        let doc_id = record[0].to_string();
        if doc_id.is_empty() {
            return Err(parse_err(path, line, "empty doc_id".into()));
        }
        if !seen.insert(doc_id.clone()) {
            return Err(parse_err(path, line, format!("duplicate doc_id {doc_id}")));
        }
        let mut cells = Vec::with_capacity(n + m);
        for (j, cell) in record.iter().enumerate().skip(1) {
            let v: f64 = cell.parse().map_err(|_| {
                parse_err(
                    path,
                    line,
                    format!("column {}: {cell:?} is not a number", columns[j - 1]),
                )
            })?;
            let is_theme = j <= n;
            if is_theme && !(v >= 0.0 && v.is_finite()) {
                return Err(parse_err(
                    path,
                    line,
                    format!("column {}: theme value {v} must be >= 0", columns[j - 1]),
                ));
            }
            if !is_theme && !(0.0..=1.0).contains(&v) {
                return Err(parse_err(
                    path,
                    line,
                    format!("column {}: attribute value {v} is outside [0, 1]", columns[j - 1]),
                ));
            }
            cells.push(v);
        }
        let attrs = cells.split_off(n);
        docs.push(DocumentRep::new(
            doc_id,
            ThemeVector::new(cells)?,
            AttributeVector::new(attrs)?,
        )?);
    }

    let corpus = RelevanceCorpus::new(manifest, docs)?;
    warnings.extend(corpus.scale_warnings());
    Ok(Loaded {
        value: corpus,
        warnings,
    })
}

pub fn read_corpus(manifest_path: impl AsRef<Path>, corpus_path: impl AsRef<Path>) -> Result<Loaded<RelevanceCorpus>> {
    let manifest = read_manifest(manifest_path)?;
    let corpus_path: PathBuf = corpus_path.as_ref().to_path_buf();
    parse_corpus(manifest, &read_text(&corpus_path)?, &corpus_path)
}

/// Serializes a corpus with manifest column names, full precision.
pub fn write_corpus(corpus: &RelevanceCorpus) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let manifest = corpus.manifest();
    let header: Vec<&str> = std::iter::once("doc_id")
        .chain(manifest.theme_names.iter().map(String::as_str))
        .chain(manifest.attribute_names.iter().map(String::as_str))
        .collect();
    w.write_record(&header)?;
    for d in corpus.docs() {
        let row: Vec<String> = std::iter::once(d.doc_id().to_string())
            .chain(d.trel().iter().map(|v| v.to_string()))
            .chain(d.attrs().values().iter().map(|v| v.to_string()))
            .collect();
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is utf-8"))
}
