//! Pattern-based SPO extraction with proximity scores, and Hearst-pattern
//! type assertions.
//!
//! Arguments are maximal noun-phrase chunks over entity-merged tokens.
//! Predicates are either a verb (optionally followed by a preposition) or a
//! run of nouns followed by a preposition. An S-P or P-O pair separated by
//! `n` intruding words scores `1 / (n + 1)`; repeated occurrences add up.

mod hearst;

use std::collections::HashMap;
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{AnnotatedDocument, DocumentSet, Token};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::text::{is_auxiliary, normalize};

pub use hearst::{extract_types, HearstPattern, TypeAssertion};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArgKind {
    NamedEntity,
    NounPhrase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PredicateKind {
    VerbMediated,
    NounMediated,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Provenance {
    pub doc_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentence: Option<usize>,
}

impl Provenance {
    pub fn new(doc_id: impl Into<String>, sentence: usize) -> Self {
        Provenance {
            doc_id: doc_id.into(),
            sentence: Some(sentence),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Triple {
    pub s: String,
    pub p: String,
    pub o: String,
    pub s_kind: ArgKind,
    pub o_kind: ArgKind,
    pub p_kind: PredicateKind,
    pub sp_score: f64,
    pub po_score: f64,
    pub provenance: Vec<Provenance>,
}

impl Triple {
    pub fn key(&self) -> (String, String, String) {
        (normalize(&self.s), normalize(&self.p), normalize(&self.o))
    }

    pub fn documents(&self) -> Vec<&str> {
        let mut docs: Vec<&str> = self.provenance.iter().map(|p| p.doc_id.as_str()).collect();
        docs.sort_unstable();
        docs.dedup();
        docs
    }
}

/// Sum of `1 / (count + 1)` over the occurrences, in the given order.
pub fn compute_pair_score<S: Scalar>(intruding_counts: &[usize]) -> Result<S> {
    if intruding_counts.is_empty() {
        return Err(Error::EmptyOccurrences);
    }
    Ok(intruding_counts
        .iter()
        .fold(S::zero(), |acc, &c| acc + S::one() / S::from_count(c + 1)))
}

/// A token span `[start, end)` within one sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct Chunk {
    pub span: Span,
    pub surface: String,
    pub kind: ArgKind,
}

fn in_np(tok: &Token) -> bool {
    let lower = tok.text.to_lowercase();
    if lower == "such" || lower == "other" {
        return false;
    }
    tok.pos == "DT" || tok.pos == "CD" || tok.pos.starts_with("JJ") || tok.is_noun()
}

fn join(tokens: &[Token]) -> String {
    tokens
        .iter()
        .map(|t| t.text.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Maximal runs of DT/CD/JJ*/NN* tokens, cut back to end on a noun, with
/// leading determiners removed.
pub(crate) fn np_chunks(tokens: &[Token]) -> Vec<Chunk> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        if !in_np(&tokens[i]) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j < tokens.len() && in_np(&tokens[j]) {
            j += 1;
        }
        let run_end = j;
        let mut start = i;
        while start < run_end && tokens[start].pos == "DT" {
            start += 1;
        }
        let mut end = run_end;
        while end > start && !tokens[end - 1].is_noun() {
            end -= 1;
        }
        if end > start {
            let kind = if end - start == 1 && tokens[start].ne_tag.is_some() {
                ArgKind::NamedEntity
            } else {
                ArgKind::NounPhrase
            };
            out.push(Chunk {
                span: Span { start, end },
                surface: join(&tokens[start..end]),
                kind,
            });
        }
        i = run_end;
    }
    out
}

fn verb_predicates(tokens: &[Token]) -> Vec<Span> {
    tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| t.is_verb() && !is_auxiliary(&t.text))
        .map(|(i, _)| {
            let with_prep = tokens
                .get(i + 1)
                .is_some_and(|n| n.pos == "IN" || n.pos == "TO");
            Span {
                start: i,
                end: if with_prep { i + 2 } else { i + 1 },
            }
        })
        .collect()
}

fn is_plain_noun(tok: &Token) -> bool {
    tok.is_noun() && tok.ne_tag.is_none()
}

fn noun_predicates(tokens: &[Token]) -> Vec<Span> {
    let mut out = Vec::new();
    for j in 1..tokens.len() {
        if tokens[j].is_preposition() && is_plain_noun(&tokens[j - 1]) {
            let mut start = j - 1;
            while start > 0 && is_plain_noun(&tokens[start - 1]) {
                start -= 1;
            }
            out.push(Span { start, end: j + 1 });
        }
    }
    out
}

fn is_word(tok: &Token) -> bool {
    tok.pos.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
}

fn intruding(tokens: &[Token], from: usize, to: usize) -> usize {
    tokens[from..to].iter().filter(|t| is_word(t)).count()
}

/// One sighting of a triple before duplicates are merged.
#[derive(Debug, Clone)]
pub(crate) struct Occurrence {
    s: String,
    p: String,
    o: String,
    s_kind: ArgKind,
    o_kind: ArgKind,
    p_kind: PredicateKind,
    sp_gap: usize,
    po_gap: usize,
    provenance: Provenance,
}

fn sentence_occurrences(doc_id: &str, sentence: usize, tokens: &[Token]) -> Vec<Occurrence> {
    let chunks = np_chunks(tokens);
    let verbs = verb_predicates(tokens);
    let nouns = noun_predicates(tokens);
    let mut out = Vec::new();

    let mut emit = |x: &Chunk, pred: Span, y: &Chunk, p_kind| {
        out.push(Occurrence {
            s: x.surface.clone(),
            p: join(&tokens[pred.start..pred.end]),
            o: y.surface.clone(),
            s_kind: x.kind,
            o_kind: y.kind,
            p_kind,
            sp_gap: intruding(tokens, x.span.end, pred.start),
            po_gap: intruding(tokens, pred.end, y.span.start),
            provenance: Provenance::new(doc_id, sentence),
        });
    };

    for (a, x) in chunks.iter().enumerate() {
        for y in &chunks[a + 1..] {
            let (lo, hi) = (x.span.end, y.span.start);
            // every non-auxiliary verb between X and Y; exactly one may mediate
            let mut between = verbs.iter().filter(|v| v.start >= lo && v.start < hi);
            if let (Some(v), None) = (between.next(), between.next()) {
                if v.end <= hi {
                    emit(x, *v, y, PredicateKind::VerbMediated);
                }
            }
            let mut between = nouns.iter().filter(|n| n.start >= lo && n.end <= hi);
            if let (Some(n), None) = (between.next(), between.next()) {
                emit(x, *n, y, PredicateKind::NounMediated);
            }
        }
    }
    out
}

pub(crate) fn document_occurrences(doc: &AnnotatedDocument) -> Vec<Occurrence> {
    let merged = doc.merge_entities();
    merged
        .sentences
        .iter()
        .enumerate()
        .flat_map(|(si, tokens)| sentence_occurrences(&doc.doc_id, si, tokens))
        .collect()
}

/// Groups occurrences by case-insensitive (s, p, o), in first-seen order. The
/// surface strings and argument kinds of the first occurrence are kept.
pub(crate) fn merge_occurrences(occurrences: Vec<Occurrence>) -> Vec<Triple> {
    let mut index: HashMap<(String, String, String), usize> = HashMap::new();
    let mut groups: Vec<(Occurrence, Vec<usize>, Vec<usize>, Vec<Provenance>)> = Vec::new();
    for occ in occurrences {
        let key = (normalize(&occ.s), normalize(&occ.p), normalize(&occ.o));
        match index.get(&key) {
            Some(&g) => {
                let entry = &mut groups[g];
                entry.1.push(occ.sp_gap);
                entry.2.push(occ.po_gap);
                entry.3.push(occ.provenance);
            }
            None => {
                index.insert(key, groups.len());
                let (sp, po, prov) = (vec![occ.sp_gap], vec![occ.po_gap], vec![occ.provenance.clone()]);
                groups.push((occ, sp, po, prov));
            }
        }
    }
    groups
        .into_iter()
        .map(|(first, sp, po, provenance)| Triple {
            s: first.s,
            p: first.p,
            o: first.o,
            s_kind: first.s_kind,
            o_kind: first.o_kind,
            p_kind: first.p_kind,
            sp_score: compute_pair_score(&sp).expect("non-empty group"),
            po_score: compute_pair_score(&po).expect("non-empty group"),
            provenance,
        })
        .collect()
}

/// All verb- and noun-mediated triples of one document, duplicates merged.
/// Pronouns should already be resolved.
pub fn extract_triples(doc: &AnnotatedDocument) -> Vec<Triple> {
    merge_occurrences(document_occurrences(doc))
}

/// Merges already-scored triples, summing scores of duplicates.
pub fn merge_triples(triples: impl IntoIterator<Item = Triple>) -> Vec<Triple> {
    let mut index: HashMap<(String, String, String), usize> = HashMap::new();
    let mut out: Vec<Triple> = Vec::new();
    for t in triples {
        match index.get(&t.key()) {
            Some(&i) => {
                out[i].sp_score += t.sp_score;
                out[i].po_score += t.po_score;
                out[i].provenance.extend(t.provenance);
            }
            None => {
                index.insert(t.key(), out.len());
                out.push(t);
            }
        }
    }
    out
}

/// Triples and type assertions of a whole document pool.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Extraction {
    pub triples: Vec<Triple>,
    pub types: Vec<TypeAssertion>,
}

/// Extracts every document in parallel; the merge runs in document order so
/// the result does not depend on scheduling.
pub fn extract_corpus(docs: &DocumentSet) -> Extraction {
    let per_doc: Vec<(Vec<Occurrence>, Vec<TypeAssertion>)> = docs
        .documents
        .par_iter()
        .map(|d| (document_occurrences(d), extract_types(d)))
        .collect();
    let mut occurrences = Vec::new();
    let mut types = Vec::new();
    for (occ, ty) in per_doc {
        occurrences.extend(occ);
        types.extend(ty);
    }
    Extraction {
        triples: merge_occurrences(occurrences),
        types,
    }
}

#[derive(Serialize, Deserialize)]
struct TripleRecord {
    s: String,
    p: String,
    o: String,
    sp: f64,
    po: f64,
    docs: Vec<String>,
    #[serde(default = "default_arg_kind")]
    s_kind: ArgKind,
    #[serde(default = "default_arg_kind")]
    o_kind: ArgKind,
    #[serde(default = "default_pred_kind")]
    p_kind: PredicateKind,
}

fn default_arg_kind() -> ArgKind {
    ArgKind::NounPhrase
}

fn default_pred_kind() -> PredicateKind {
    PredicateKind::VerbMediated
}

/// One JSON object per line: `{"s", "p", "o", "sp", "po", "docs"}`.
pub fn write_triples_jsonl<W: Write>(triples: &[Triple], mut out: W) -> std::io::Result<()> {
    for t in triples {
        let record = TripleRecord {
            s: t.s.clone(),
            p: t.p.clone(),
            o: t.o.clone(),
            sp: t.sp_score,
            po: t.po_score,
            docs: t.documents().into_iter().map(str::to_string).collect(),
            s_kind: t.s_kind,
            o_kind: t.o_kind,
            p_kind: t.p_kind,
        };
        serde_json::to_writer(&mut out, &record)?;
        writeln!(out)?;
    }
    Ok(())
}

pub fn read_triples_jsonl<R: BufRead>(origin: &str, input: R) -> Result<Vec<Triple>> {
    let mut out = Vec::new();
    for (n, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::parse(origin, format!("line {}", n + 1), e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let r: TripleRecord = serde_json::from_str(&line)
            .map_err(|e| Error::parse(origin, format!("line {}", n + 1), e.to_string()))?;
        if r.sp <= 0.0 || r.po <= 0.0 || r.s.is_empty() || r.p.is_empty() || r.o.is_empty() {
            return Err(Error::parse(
                origin,
                format!("line {}", n + 1),
                "triple needs non-empty slots and positive scores",
            ));
        }
        out.push(Triple {
            s: r.s,
            p: r.p,
            o: r.o,
            s_kind: r.s_kind,
            o_kind: r.o_kind,
            p_kind: r.p_kind,
            sp_score: r.sp,
            po_score: r.po,
            provenance: r
                .docs
                .into_iter()
                .map(|doc_id| Provenance {
                    doc_id,
                    sentence: None,
                })
                .collect(),
        });
    }
    Ok(out)
}
