//! Domain types: theme and attribute vectors, document representations,
//! relevance corpora, ranked lists and evaluation settings.

use std::borrow::Cow;
use std::collections::{BTreeMap, HashSet};
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// Per-theme relevance mass. Used both for a document's graded theme
/// relevance and for the running cumulated relevance of a ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThemeVector(Vec<f64>);

impl ThemeVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(Error::Input(format!(
                "theme value {v} at position {} must be a finite real >= 0",
                i + 1
            )));
        }
        Ok(Self(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().copied()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    /// Builds a vector from values already known to be non-negative.
    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| *v >= 0.0));
        Self(values)
    }
}

impl Index<usize> for ThemeVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Per-attribute usability factors, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AttributeVector(Vec<f64>);

impl AttributeVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Input(format!(
                "attribute value {v} at position {} is outside [0, 1]",
                i + 1
            )));
        }
        Ok(Self(values))
    }

    pub fn zeros(m: usize) -> Self {
        Self(vec![0.0; m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

/// A vector of `n` zeros; the starting point of every cumulation.
pub fn null_struct(n: usize) -> Result<ThemeVector> {
    if n == 0 {
        return Err(Error::Dimension { expected: 1, found: 0 });
    }
    Ok(ThemeVector(vec![0.0; n]))
}

fn zip_with(a: &ThemeVector, b: &ThemeVector, f: impl Fn(f64, f64) -> f64) -> Result<ThemeVector> {
    check_dim(a.len(), b.len())?;
    Ok(ThemeVector(a.iter().zip(b.iter()).map(|(x, y)| f(x, y)).collect()))
}

/// Componentwise sum.
pub fn vec_add(a: &ThemeVector, b: &ThemeVector) -> Result<ThemeVector> {
    zip_with(a, b, |x, y| x + y)
}

/// Componentwise product.
pub fn vec_mul(a: &ThemeVector, b: &ThemeVector) -> Result<ThemeVector> {
    zip_with(a, b, |x, y| x * y)
}

/// Componentwise quotient. A zero denominator yields 0.
pub fn vec_div(a: &ThemeVector, b: &ThemeVector) -> Result<ThemeVector> {
    zip_with(a, b, safe_div)
}

pub(crate) fn safe_div(x: f64, y: f64) -> f64 {
    if y == 0.0 {
        0.0
    } else {
        x / y
    }
}

/// One assessed document: its id, graded theme relevance and usability
/// attributes. The document text itself is never inspected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentRep {
    doc_id: String,
    trel: ThemeVector,
    attrs: AttributeVector,
}

impl DocumentRep {
    pub fn new(doc_id: impl Into<String>, trel: ThemeVector, attrs: AttributeVector) -> Result<Self> {
        let doc_id = doc_id.into();
        if doc_id.is_empty() {
            return Err(Error::Input("empty document id".into()));
        }
        Ok(Self { doc_id, trel, attrs })
    }

    /// Representation of a document nobody assessed: zero relevance on every
    /// theme and zero on every attribute.
    pub fn unjudged(doc_id: impl Into<String>, n: usize, m: usize) -> Self {
        Self {
            doc_id: doc_id.into(),
            trel: ThemeVector(vec![0.0; n]),
            attrs: AttributeVector::zeros(m),
        }
    }

    pub fn doc_id(&self) -> &str {
        &self.doc_id
    }

    pub fn trel(&self) -> &ThemeVector {
        &self.trel
    }

    pub fn attrs(&self) -> &AttributeVector {
        &self.attrs
    }

    /// Sum of the raw theme scores.
    pub fn face_total(&self) -> f64 {
        self.trel.sum()
    }
}

/// Per-topic description of the themes and attributes being assessed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicManifest {
    pub topic_id: String,
    pub theme_names: Vec<String>,
    pub attribute_names: Vec<String>,
    /// Nominal maximum of each theme's assessment scale.
    pub theme_scale_max: Vec<f64>,
    pub overlap_base_default: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_theme_b: Option<Vec<f64>>,
}

impl TopicManifest {
    pub const DEFAULT_SCALE_MAX: f64 = 3.0;
    pub const DEFAULT_OVERLAP_BASE: f64 = 2.0;

    /// Manifest with generic names `theme_1..theme_n`, `attr_1..attr_m`.
    pub fn generic(topic_id: impl Into<String>, n: usize, m: usize) -> Self {
        Self {
            topic_id: topic_id.into(),
            theme_names: (1..=n).map(|i| format!("theme_{i}")).collect(),
            attribute_names: (1..=m).map(|i| format!("attr_{i}")).collect(),
            theme_scale_max: vec![Self::DEFAULT_SCALE_MAX; n],
            overlap_base_default: Self::DEFAULT_OVERLAP_BASE,
            per_theme_b: None,
        }
    }

    pub fn n_themes(&self) -> usize {
        self.theme_names.len()
    }

    pub fn n_attributes(&self) -> usize {
        self.attribute_names.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.topic_id.trim().is_empty() {
            return Err(Error::Input("manifest topic_id is empty".into()));
        }
        if self.theme_names.is_empty() {
            return Err(Error::Input("manifest must declare at least one theme".into()));
        }
        check_dim(self.n_themes(), self.theme_scale_max.len())?;
        if let Some(max) = self.theme_scale_max.iter().find(|v| v.is_nan() || **v <= 0.0) {
            return Err(Error::Input(format!("theme_scale_max {max} must be > 0")));
        }
        if self.overlap_base_default.is_nan() || self.overlap_base_default <= 1.0 {
            return Err(Error::Config(format!(
                "overlap_base_default {} must be > 1",
                self.overlap_base_default
            )));
        }
        if let Some(per_theme) = &self.per_theme_b {
            check_dim(self.n_themes(), per_theme.len())?;
            if let Some(b) = per_theme.iter().find(|b| b.is_nan() || **b <= 1.0) {
                return Err(Error::Config(format!("per_theme_b entry {b} must be > 1")));
            }
        }
        Ok(())
    }
}

/// The assessed documents of one topic. Anything not listed is unjudged.
#[derive(Debug, Clone, PartialEq)]
pub struct RelevanceCorpus {
    manifest: TopicManifest,
    docs: BTreeMap<String, DocumentRep>,
}

impl RelevanceCorpus {
    pub fn new(manifest: TopicManifest, docs: impl IntoIterator<Item = DocumentRep>) -> Result<Self> {
        manifest.validate()?;
        let (n, m) = (manifest.n_themes(), manifest.n_attributes());
        let mut map = BTreeMap::new();
        for doc in docs {
            check_dim(n, doc.trel.len())?;
            check_dim(m, doc.attrs.len())?;
            if map.contains_key(&doc.doc_id) {
                return Err(Error::Input(format!("duplicate document id {}", doc.doc_id)));
            }
            map.insert(doc.doc_id.clone(), doc);
        }
        Ok(Self { manifest, docs: map })
    }

    pub fn manifest(&self) -> &TopicManifest {
        &self.manifest
    }

    pub fn topic_id(&self) -> &str {
        &self.manifest.topic_id
    }

    pub fn n_themes(&self) -> usize {
        self.manifest.n_themes()
    }

    pub fn n_attributes(&self) -> usize {
        self.manifest.n_attributes()
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn contains(&self, doc_id: &str) -> bool {
        self.docs.contains_key(doc_id)
    }

    /// Documents in ascending id order.
    pub fn docs(&self) -> impl Iterator<Item = &DocumentRep> {
        self.docs.values()
    }

    /// Looks up a document; unassessed ids resolve to all-zero vectors.
    pub fn resolve(&self, doc_id: &str) -> Cow<'_, DocumentRep> {
        match self.docs.get(doc_id) {
            Some(doc) => Cow::Borrowed(doc),
            None => Cow::Owned(DocumentRep::unjudged(doc_id, self.n_themes(), self.n_attributes())),
        }
    }

    /// Keeps only the listed documents (unknown ids are ignored).
    pub fn restrict<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> Self {
        let keep: HashSet<&str> = ids.into_iter().collect();
        Self {
            manifest: self.manifest.clone(),
            docs: self
                .docs
                .iter()
                .filter(|(id, _)| keep.contains(id.as_str()))
                .map(|(id, d)| (id.clone(), d.clone()))
                .collect(),
        }
    }

    /// Human-readable notes for theme values above the declared scale maximum.
    pub fn scale_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for doc in self.docs.values() {
            for (i, (v, max)) in doc.trel.iter().zip(self.manifest.theme_scale_max.iter()).enumerate() {
                if v > *max {
                    out.push(format!(
                        "document {} theme {} value {v} exceeds scale maximum {max}",
                        doc.doc_id, self.manifest.theme_names[i]
                    ));
                }
            }
        }
        out
    }
}

/// A search result: document ids in rank order, rank 1 first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedList {
    topic_id: String,
    entries: Vec<String>,
}

impl RankedList {
    pub fn new<S: Into<String>>(topic_id: impl Into<String>, entries: impl IntoIterator<Item = S>) -> Result<Self> {
        let entries: Vec<String> = entries.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for id in &entries {
            if id.is_empty() {
                return Err(Error::Input("empty document id in ranking".into()));
            }
            if !seen.insert(id.as_str()) {
                return Err(Error::Input(format!("document {id} appears twice in ranking")));
            }
        }
        Ok(Self {
            topic_id: topic_id.into(),
            entries,
        })
    }

    pub fn topic_id(&self) -> &str {
        &self.topic_id
    }

    pub fn entries(&self) -> &[String] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The first `k` entries (or all, if shorter).
    pub fn truncated(&self, k: usize) -> Self {
        Self {
            topic_id: self.topic_id.clone(),
            entries: self.entries.iter().take(k).cloned().collect(),
        }
    }
}

/// Switches and parameters for one evaluation pass: the overlap,
/// attribute and rank discounts, each independently toggled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Logarithm base of the overlap discount.
    pub b: f64,
    /// Per-theme overrides of `b`.
    #[serde(default)]
    pub per_theme_b: Option<Vec<f64>>,
    pub overlap_on: bool,
    pub attributes_on: bool,
    pub rank_discount_on: bool,
    pub rank_discount_base: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            b: 2.0,
            per_theme_b: None,
            overlap_on: true,
            attributes_on: true,
            rank_discount_on: false,
            rank_discount_base: 2.0,
        }
    }
}

impl EvalConfig {
    pub fn with_b(b: f64) -> Self {
        Self { b, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.b <= 1.0 || !self.b.is_finite() {
            return Err(Error::Config(format!("overlap base b = {} must be > 1", self.b)));
        }
        if let Some(per_theme) = &self.per_theme_b {
            if let Some(b) = per_theme.iter().find(|b| **b <= 1.0 || !b.is_finite()) {
                return Err(Error::Config(format!("per-theme overlap base {b} must be > 1")));
            }
        }
        if self.rank_discount_base <= 1.0 || !self.rank_discount_base.is_finite() {
            return Err(Error::Config(format!(
                "rank discount base {} must be > 1",
                self.rank_discount_base
            )));
        }
        Ok(())
    }

    /// Validates the config and checks the per-theme override against `n` themes.
    pub fn validate_for(&self, n: usize) -> Result<()> {
        self.validate()?;
        if let Some(per_theme) = &self.per_theme_b {
            check_dim(n, per_theme.len())?;
        }
        Ok(())
    }

    /// Overlap base in effect for theme `i` (0-based).
    pub fn overlap_base(&self, i: usize) -> f64 {
        self.per_theme_b
            .as_ref()
            .and_then(|v| v.get(i).copied())
            .unwrap_or(self.b)
    }
}
