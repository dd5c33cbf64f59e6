//! Entity-mention Jaccard similarity and averaged word-embedding cosine.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::text::{normalize, tokens};

/// Normalized mention → entity ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MentionDictionary {
    entries: BTreeMap<String, BTreeSet<String>>,
}

impl MentionDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, mention: &str, entity: &str) {
        let key = normalize(mention);
        if key.is_empty() || entity.trim().is_empty() {
            return;
        }
        self.entries
            .entry(key)
            .or_default()
            .insert(entity.trim().to_string());
    }

    pub fn entities(&self, mention: &str) -> Option<&BTreeSet<String>> {
        self.entries.get(&normalize(mention))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn from_reader<R: BufRead>(origin: &str, input: R) -> Result<Self> {
        let mut dict = Self::new();
        for (n, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::parse(origin, format!("line {}", n + 1), e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 2 {
                return Err(Error::parse(
                    origin,
                    format!("line {}", n + 1),
                    format!("expected 2 tab-separated columns, found {}", cols.len()),
                ));
            }
            dict.insert(cols[0], cols[1]);
        }
        Ok(dict)
    }
}

impl<'a> FromIterator<(&'a str, &'a str)> for MentionDictionary {
    fn from_iter<I: IntoIterator<Item = (&'a str, &'a str)>>(iter: I) -> Self {
        let mut dict = Self::new();
        for (m, e) in iter {
            dict.insert(m, e);
        }
        dict
    }
}

/// Reads a `mention<TAB>entity_id` file.
pub fn load_mention_dictionary(path: &Path) -> Result<MentionDictionary> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    MentionDictionary::from_reader(&path.display().to_string(), std::io::BufReader::new(file))
}

fn jaccard<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

/// Jaccard index of the entity sets of both mentions. If either mention is
/// missing from the dictionary, Jaccard of their normalized token sets.
pub fn entity_similarity(m1: &str, m2: &str, dict: &MentionDictionary) -> f64 {
    if normalize(m1) == normalize(m2) {
        return 1.0;
    }
    match (dict.entities(m1), dict.entities(m2)) {
        (Some(a), Some(b)) => jaccard(a, b),
        _ => {
            let a: BTreeSet<String> = tokens(m1).into_iter().collect();
            let b: BTreeSet<String> = tokens(m2).into_iter().collect();
            jaccard(&a, &b)
        }
    }
}

/// Word vectors of a single dimension. Zero vectors are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingStore<F = f64> {
    dim: usize,
    vectors: HashMap<String, Vec<F>>,
}

impl<F: Real> EmbeddingStore<F> {
    pub fn new(dim: usize) -> Self {
        EmbeddingStore {
            dim,
            vectors: HashMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Adds a vector unless the word is already present. Returns whether it
    /// was stored.
    pub fn insert(&mut self, word: &str, vector: Vec<F>) -> Result<bool> {
        if vector.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "vector for {word:?} has dimension {}, expected {}",
                vector.len(),
                self.dim
            )));
        }
        if self.vectors.contains_key(word) || vector.iter().all(|x| x.is_zero()) {
            return Ok(false);
        }
        self.vectors.insert(word.to_string(), vector);
        Ok(true)
    }

    /// Exact word first, then its lowercase form.
    pub fn get(&self, word: &str) -> Option<&[F]> {
        self.vectors
            .get(word)
            .or_else(|| self.vectors.get(&word.to_lowercase()))
            .map(Vec::as_slice)
    }

    /// Mean of the in-vocabulary word vectors of `phrase`.
    pub fn phrase_vector(&self, phrase: &str) -> Option<Vec<F>> {
        let mut acc = vec![F::zero(); self.dim];
        let mut n = 0usize;
        for w in phrase.split_whitespace() {
            let w = w.trim_matches(|c: char| c.is_ascii_punctuation());
            if let Some(v) = self.get(w) {
                for (a, x) in acc.iter_mut().zip(v) {
                    *a = *a + *x;
                }
                n += 1;
            }
        }
        if n == 0 {
            return None;
        }
        let n = F::from_count(n);
        Some(acc.into_iter().map(|x| x / n).collect())
    }

    pub fn from_reader<R: BufRead>(origin: &str, input: R) -> Result<Self> {
        let mut store: Option<Self> = None;
        for (n, line) in input.lines().enumerate() {
            let lineno = n + 1;
            let err = |msg: String| Error::parse(origin, format!("line {lineno}"), msg);
            let line = line.map_err(|e| err(e.to_string()))?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if n == 0 && fields.len() == 2 && fields.iter().all(|f| f.parse::<usize>().is_ok()) {
                let dim: usize = fields[1].parse().expect("checked above");
                if dim == 0 {
                    return Err(err("header declares dimension 0".into()));
                }
                store = Some(Self::new(dim));
                continue;
            }
            if fields.len() < 2 {
                return Err(err("expected a word followed by its vector".into()));
            }
            let values: Vec<F> = fields[1..]
                .iter()
                .map(|f| f.parse::<F>().map_err(|_| err(format!("bad number {f:?}"))))
                .collect::<Result<_>>()?;
            let store = store.get_or_insert_with(|| Self::new(values.len()));
            if values.len() != store.dim {
                return Err(err(format!(
                    "vector has {} components, expected {}",
                    values.len(),
                    store.dim
                )));
            }
            store.insert(fields[0], values)?;
        }
        store.ok_or_else(|| Error::parse(origin, "line 1", "no vectors"))
    }
}

/// Reads word2vec text format, with or without the `count dim` header line.
pub fn load_embeddings<F: Real>(path: &Path) -> Result<EmbeddingStore<F>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    EmbeddingStore::from_reader(&path.display().to_string(), std::io::BufReader::new(file))
}

pub fn cosine<F: Real>(a: &[F], b: &[F]) -> F {
    let mut dot = F::zero();
    let mut na = F::zero();
    let mut nb = F::zero();
    for (x, y) in a.iter().zip(b) {
        dot = dot + *x * *y;
        na = na + *x * *x;
        nb = nb + *y * *y;
    }
    if na.is_zero() || nb.is_zero() {
        return F::zero();
    }
    let c = dot / (na.sqrt() * nb.sqrt());
    c.max(-F::one()).min(F::one())
}

/// Cosine of the averaged word vectors, in `[-1, 1]`. Equal normalized
/// strings give 1; a phrase with no known word gives 0 otherwise.
pub fn phrase_similarity<F: Real>(p1: &str, p2: &str, emb: &EmbeddingStore<F>) -> F {
    if normalize(p1) == normalize(p2) {
        return F::one();
    }
    match (emb.phrase_vector(p1), emb.phrase_vector(p2)) {
        (Some(a), Some(b)) => cosine(&a, &b),
        _ => F::zero(),
    }
}

/// [`phrase_similarity`] clamped to `[0, 1]` for use as a weight.
pub fn phrase_weight<F: Real>(p1: &str, p2: &str, emb: &EmbeddingStore<F>) -> F {
    phrase_similarity(p1, p2, emb).max(F::zero())
}

/// Both similarity resources. Either may be empty.
#[derive(Debug, Clone)]
pub struct SimilarityModel<F = f64> {
    pub mentions: MentionDictionary,
    pub embeddings: EmbeddingStore<F>,
}

impl<F: Real> Default for SimilarityModel<F> {
    fn default() -> Self {
        SimilarityModel {
            mentions: MentionDictionary::new(),
            embeddings: EmbeddingStore::new(1),
        }
    }
}

impl<F: Real> SimilarityModel<F> {
    pub fn new(mentions: MentionDictionary, embeddings: EmbeddingStore<F>) -> Self {
        SimilarityModel {
            mentions,
            embeddings,
        }
    }

    pub fn entity(&self, a: &str, b: &str) -> f64 {
        entity_similarity(a, b, &self.mentions)
    }

    /// Clamped phrase similarity as `f64`.
    pub fn phrase(&self, a: &str, b: &str) -> f64 {
        phrase_weight(a, b, &self.embeddings).to_f64_lossy()
    }
}
