//! Per-question document pools.
//!
//! Documents arrive already annotated (POS tags and named-entity tags per
//! token) as one JSON file each. [`fallback_annotate`] provides a small
//! heuristic annotator so demos and tests can run without an external NLP
//! toolkit.

mod annotate;
mod strata;

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use annotate::fallback_annotate;
pub use strata::{sample_strata, StrataConfig, StrataSample};

/// POS tag given to merged named-entity tokens and resolved pronouns.
pub const MERGED_ENTITY_POS: &str = "NNP";
/// NE tag used when a mention carries no label of its own.
pub const DEFAULT_NE_TAG: &str = "ENTITY";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    pub pos: String,
    #[serde(rename = "ne", default, skip_serializing_if = "Option::is_none")]
    pub ne_tag: Option<String>,
    #[serde(skip)]
    pub index: usize,
}

impl Token {
    pub fn new(text: impl Into<String>, pos: impl Into<String>, ne_tag: Option<&str>) -> Self {
        Token {
            text: text.into(),
            pos: pos.into(),
            ne_tag: ne_tag.map(str::to_string),
            index: 0,
        }
    }

    pub fn is_verb(&self) -> bool {
        self.pos.starts_with("VB")
    }

    pub fn is_noun(&self) -> bool {
        self.pos.starts_with("NN")
    }

    pub fn is_preposition(&self) -> bool {
        self.pos == "IN"
    }
}

/// A named-entity span. `end` is exclusive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EntityMention {
    pub sentence: usize,
    pub start: usize,
    pub end: usize,
    pub surface: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedDocument {
    pub doc_id: String,
    pub rank: Option<u32>,
    pub sentences: Vec<Vec<Token>>,
    pub entity_mentions: Vec<EntityMention>,
}

#[derive(Serialize, Deserialize)]
struct DocumentFile {
    doc_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rank: Option<u32>,
    #[serde(default)]
    sentences: Vec<Vec<Token>>,
    /// Optional explicit mentions. When absent they are derived from the
    /// per-token NE tags.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mentions: Option<Vec<EntityMention>>,
}

impl AnnotatedDocument {
    /// Builds a document whose mentions are the maximal runs of tokens sharing
    /// an NE tag. `B-`/`I-` prefixed tags start and continue runs.
    pub fn new(doc_id: impl Into<String>, rank: Option<u32>, sentences: Vec<Vec<Token>>) -> Self {
        let mut doc = AnnotatedDocument {
            doc_id: doc_id.into(),
            rank,
            sentences,
            entity_mentions: Vec::new(),
        };
        doc.reindex();
        doc.entity_mentions = derive_mentions(&doc.sentences);
        doc
    }

    /// Builds a document with explicit mention spans.
    pub fn with_mentions(
        doc_id: impl Into<String>,
        rank: Option<u32>,
        sentences: Vec<Vec<Token>>,
        mut mentions: Vec<EntityMention>,
    ) -> Result<Self> {
        let doc_id = doc_id.into();
        for m in &mentions {
            let len = sentences.get(m.sentence).map(Vec::len);
            if m.start >= m.end || len.is_none_or(|len| m.end > len) || m.surface.trim().is_empty()
            {
                return Err(Error::InvalidInput(format!(
                    "mention {m:?} of {doc_id} lies outside its sentence"
                )));
            }
        }
        mentions.sort();
        let mut doc = AnnotatedDocument {
            doc_id,
            rank,
            sentences,
            entity_mentions: mentions,
        };
        doc.reindex();
        Ok(doc)
    }

    fn reindex(&mut self) {
        for sentence in &mut self.sentences {
            for (i, tok) in sentence.iter_mut().enumerate() {
                tok.index = i;
            }
        }
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Vec::len).sum()
    }

    pub fn from_json_str(origin: &str, json: &str) -> Result<Self> {
        let file: DocumentFile = serde_json::from_str(json).map_err(|e| {
            Error::parse(
                origin,
                format!("line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        if let Some(tok) = file.sentences.iter().flatten().find(|t| t.text.is_empty()) {
            return Err(Error::parse(
                origin,
                "token",
                format!("empty token text (pos {})", tok.pos),
            ));
        }
        match file.mentions {
            Some(mentions) => {
                Self::with_mentions(file.doc_id, file.rank, file.sentences, mentions).map_err(|e| {
                    Error::parse(origin, "mentions", e.to_string())
                })
            }
            None => Ok(Self::new(file.doc_id, file.rank, file.sentences)),
        }
    }

    pub fn to_json(&self) -> String {
        let derived = derive_mentions(&self.sentences);
        let file = DocumentFile {
            doc_id: self.doc_id.clone(),
            rank: self.rank,
            sentences: self.sentences.clone(),
            mentions: (derived != self.entity_mentions).then(|| self.entity_mentions.clone()),
        };
        serde_json::to_string_pretty(&file).expect("documents always serialize")
    }

    /// Collapses every multi-token mention into one token carrying the mention
    /// surface, tagged [`MERGED_ENTITY_POS`].
    pub fn merge_entities(&self) -> AnnotatedDocument {
        let mut sentences = Vec::with_capacity(self.sentences.len());
        let mut mentions = Vec::with_capacity(self.entity_mentions.len());
        for (si, sentence) in self.sentences.iter().enumerate() {
            let in_sentence: Vec<&EntityMention> = self
                .entity_mentions
                .iter()
                .filter(|m| m.sentence == si)
                .collect();
            let mut out = Vec::with_capacity(sentence.len());
            let mut i = 0;
            while i < sentence.len() {
                if let Some(m) = in_sentence.iter().find(|m| m.start == i) {
                    let tag = sentence[m.start..m.end]
                        .iter()
                        .find_map(|t| t.ne_tag.as_deref())
                        .map(strip_bio)
                        .unwrap_or(DEFAULT_NE_TAG);
                    mentions.push(EntityMention {
                        sentence: si,
                        start: out.len(),
                        end: out.len() + 1,
                        surface: m.surface.clone(),
                    });
                    out.push(Token::new(m.surface.clone(), MERGED_ENTITY_POS, Some(tag)));
                    i = m.end;
                } else {
                    out.push(sentence[i].clone());
                    i += 1;
                }
            }
            sentences.push(out);
        }
        let mut doc = AnnotatedDocument {
            doc_id: self.doc_id.clone(),
            rank: self.rank,
            sentences,
            entity_mentions: mentions,
        };
        doc.reindex();
        doc
    }

    /// Single-sentence documents, keeping doc id and rank.
    pub fn sentence_slices(&self) -> Vec<AnnotatedDocument> {
        (0..self.sentences.len())
            .map(|si| {
                let mentions = self
                    .entity_mentions
                    .iter()
                    .filter(|m| m.sentence == si)
                    .map(|m| EntityMention {
                        sentence: 0,
                        ..m.clone()
                    })
                    .collect();
                AnnotatedDocument {
                    doc_id: self.doc_id.clone(),
                    rank: self.rank,
                    sentences: vec![self.sentences[si].clone()],
                    entity_mentions: mentions,
                }
            })
            .collect()
    }
}

fn strip_bio(tag: &str) -> &str {
    tag.strip_prefix("B-")
        .or_else(|| tag.strip_prefix("I-"))
        .unwrap_or(tag)
}

fn derive_mentions(sentences: &[Vec<Token>]) -> Vec<EntityMention> {
    let mut out = Vec::new();
    for (si, sentence) in sentences.iter().enumerate() {
        let mut i = 0;
        while i < sentence.len() {
            let Some(tag) = sentence[i].ne_tag.as_deref().filter(|t| !t.is_empty() && *t != "O")
            else {
                i += 1;
                continue;
            };
            let label = strip_bio(tag);
            let mut j = i + 1;
            while j < sentence.len() {
                match sentence[j].ne_tag.as_deref() {
                    Some(t) if !t.starts_with("B-") && t != "O" && strip_bio(t) == label => j += 1,
                    _ => break,
                }
            }
            let surface = sentence[i..j]
                .iter()
                .map(|t| t.text.as_str())
                .collect::<Vec<_>>()
                .join(" ");
            out.push(EntityMention {
                sentence: si,
                start: i,
                end: j,
                surface,
            });
            i = j;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentSet {
    pub question_id: String,
    pub documents: Vec<AnnotatedDocument>,
}

impl DocumentSet {
    pub fn new(question_id: impl Into<String>, documents: Vec<AnnotatedDocument>) -> Result<Self> {
        let mut seen = HashSet::new();
        for d in &documents {
            if !seen.insert(d.doc_id.as_str()) {
                return Err(Error::InvalidInput(format!("duplicate doc_id {}", d.doc_id)));
            }
        }
        Ok(DocumentSet {
            question_id: question_id.into(),
            documents,
        })
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Same pool without `doc_id`.
    pub fn without(&self, doc_id: &str) -> DocumentSet {
        DocumentSet {
            question_id: self.question_id.clone(),
            documents: self
                .documents
                .iter()
                .filter(|d| d.doc_id != doc_id)
                .cloned()
                .collect(),
        }
    }
}

/// Loads every `*.json` document in `corpus_root/question_id/`, ordered by
/// rank (unranked last) and then by file name.
pub fn load_corpus(question_id: &str, corpus_root: &Path) -> Result<DocumentSet> {
    let dir = corpus_root.join(question_id);
    load_directory(question_id, &dir)
}

pub fn load_directory(question_id: &str, dir: &Path) -> Result<DocumentSet> {
    if !dir.is_dir() {
        return Err(Error::NotFound(format!(
            "corpus directory {} does not exist",
            dir.display()
        )));
    }
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    if files.is_empty() {
        return Err(Error::NotFound(format!(
            "no documents in {}",
            dir.display()
        )));
    }
    files.sort();
    let mut docs = Vec::with_capacity(files.len());
    for path in &files {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        docs.push(AnnotatedDocument::from_json_str(
            &path.display().to_string(),
            &text,
        )?);
    }
    // stable: ties keep file-name order
    docs.sort_by_key(|d| d.rank.unwrap_or(u32::MAX));
    DocumentSet::new(question_id, docs)
}

/// Writes the set so that [`load_corpus`] reads it back in the same order.
pub fn save_corpus(set: &DocumentSet, corpus_root: &Path) -> Result<PathBuf> {
    let dir = corpus_root.join(&set.question_id);
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    for (i, doc) in set.documents.iter().enumerate() {
        let safe: String = doc
            .doc_id
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
            .collect();
        let path = dir.join(format!("{i:05}_{safe}.json"));
        fs::write(&path, doc.to_json()).map_err(|e| Error::io(&path, e))?;
    }
    Ok(dir)
}

const PRONOUNS: &[&str] = &["he", "she", "him", "her", "his", "hers"];

pub fn is_resolvable_pronoun(word: &str) -> bool {
    PRONOUNS.contains(&word.to_lowercase().as_str())
}

/// Replaces he/she/him/her/his/hers by the surface of the nearest preceding
/// entity mention anywhere earlier in the document. The replacement token is
/// tagged like its antecedent and becomes a single-token mention.
pub fn resolve_pronouns(doc: &AnnotatedDocument) -> AnnotatedDocument {
    let mut out = doc.clone();
    let mut mentions = doc.entity_mentions.clone();
    let mut antecedent: Option<(String, String)> = None;

    for (si, sentence) in out.sentences.iter_mut().enumerate() {
        for (ti, tok) in sentence.iter_mut().enumerate() {
            if is_resolvable_pronoun(&tok.text) && !doc.entity_mentions.iter().any(|m| covers(m, si, ti)) {
                if let Some((surface, tag)) = &antecedent {
                    tok.text = surface.clone();
                    tok.pos = MERGED_ENTITY_POS.to_string();
                    tok.ne_tag = Some(tag.clone());
                    mentions.push(EntityMention {
                        sentence: si,
                        start: ti,
                        end: ti + 1,
                        surface: surface.clone(),
                    });
                }
                continue;
            }
            // A mention becomes the antecedent once its last token has passed.
            if let Some(m) = doc
                .entity_mentions
                .iter()
                .find(|m| m.sentence == si && m.end == ti + 1)
            {
                if !is_resolvable_pronoun(&m.surface) {
                    let tag = doc.sentences[si][m.start..m.end]
                        .iter()
                        .find_map(|t| t.ne_tag.as_deref())
                        .map(strip_bio)
                        .unwrap_or(DEFAULT_NE_TAG)
                        .to_string();
                    antecedent = Some((m.surface.clone(), tag));
                }
            }
        }
    }
    mentions.sort();
    out.entity_mentions = mentions;
    out
}

fn covers(m: &EntityMention, sentence: usize, token: usize) -> bool {
    m.sentence == sentence && m.start <= token && token < m.end
}
