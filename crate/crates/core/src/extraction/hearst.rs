use serde::{Deserialize, Serialize};

use super::{np_chunks, Chunk, Provenance};
use crate::corpus::{AnnotatedDocument, Token};
use crate::text::normalize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HearstPattern {
    /// X such as Y1, Y2 and Y3
    SuchAs,
    /// such X as Y1, Y2
    SuchXAs,
    /// Y1, Y2 and other X
    AndOther,
    /// Y1, Y2 or other X
    OrOther,
    /// X, including Y1, Y2
    Including,
    /// X, especially Y1
    Especially,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeAssertion {
    pub entity: String,
    pub type_phrase: String,
    pub provenance: Provenance,
    pub pattern: HearstPattern,
}

fn word(tokens: &[Token], i: usize) -> Option<String> {
    tokens.get(i).map(|t| t.text.to_lowercase())
}

fn is_word(tokens: &[Token], i: usize, w: &str) -> bool {
    word(tokens, i).is_some_and(|x| x == w)
}

fn is_conj(tokens: &[Token], i: usize) -> bool {
    is_word(tokens, i, "and") || is_word(tokens, i, "or")
}

fn chunk_at<'c>(chunks: &'c [Chunk], tokens: &[Token], mut p: usize) -> Option<&'c Chunk> {
    while tokens.get(p).is_some_and(|t| t.pos == "DT") {
        p += 1;
    }
    chunks.iter().find(|c| c.span.start == p)
}

fn chunk_ending(chunks: &[Chunk], e: usize) -> Option<&Chunk> {
    chunks.iter().find(|c| c.span.end == e)
}

/// Noun phrases listed from position `p` onwards, separated by commas and a
/// final conjunction.
fn forward_list<'c>(chunks: &'c [Chunk], tokens: &[Token], p: usize) -> Vec<&'c Chunk> {
    let mut out = Vec::new();
    let Some(mut cur) = chunk_at(chunks, tokens, p) else {
        return out;
    };
    loop {
        out.push(cur);
        let mut q = cur.span.end;
        let mut separated = false;
        if tokens.get(q).is_some_and(|t| t.text == ",") {
            q += 1;
            separated = true;
        }
        if is_conj(tokens, q) {
            q += 1;
            separated = true;
        }
        if !separated {
            break;
        }
        match chunk_at(chunks, tokens, q) {
            Some(next) => cur = next,
            None => break,
        }
    }
    out
}

/// Noun phrases listed before position `e`, nearest first.
fn backward_list<'c>(chunks: &'c [Chunk], tokens: &[Token], mut e: usize) -> Vec<&'c Chunk> {
    let mut out = Vec::new();
    if e > 0 && tokens[e - 1].text == "," {
        e -= 1;
    }
    let Some(mut cur) = chunk_ending(chunks, e) else {
        return out;
    };
    loop {
        out.push(cur);
        let mut q = cur.span.start;
        while q > 0 && tokens[q - 1].pos == "DT" {
            q -= 1;
        }
        let mut separated = false;
        if q > 0 && is_conj(tokens, q - 1) {
            q -= 1;
            separated = true;
        }
        if q > 0 && tokens[q - 1].text == "," {
            q -= 1;
            separated = true;
        }
        if !separated {
            break;
        }
        match chunk_ending(chunks, q) {
            Some(prev) => cur = prev,
            None => break,
        }
    }
    out.reverse();
    out
}

fn sentence_types(doc_id: &str, si: usize, tokens: &[Token]) -> Vec<TypeAssertion> {
    let chunks = np_chunks(tokens);
    let mut out = Vec::new();
    let mut emit = |ys: Vec<&Chunk>, x: &Chunk, pattern| {
        for y in ys {
            if normalize(&y.surface) != normalize(&x.surface) {
                out.push(TypeAssertion {
                    entity: y.surface.clone(),
                    type_phrase: x.surface.clone(),
                    provenance: Provenance::new(doc_id, si),
                    pattern,
                });
            }
        }
    };

    for i in 0..tokens.len() {
        let w = word(tokens, i).unwrap_or_default();
        match w.as_str() {
            "such" if is_word(tokens, i + 1, "as") => {
                if let Some(x) = chunk_ending(&chunks, i) {
                    emit(forward_list(&chunks, tokens, i + 2), x, HearstPattern::SuchAs);
                }
            }
            "such" => {
                if let Some(x) = chunk_at(&chunks, tokens, i + 1) {
                    if is_word(tokens, x.span.end, "as") {
                        let ys = forward_list(&chunks, tokens, x.span.end + 1);
                        emit(ys, x, HearstPattern::SuchXAs);
                    }
                }
            }
            "and" | "or" if is_word(tokens, i + 1, "other") => {
                if let Some(x) = chunk_at(&chunks, tokens, i + 2) {
                    let pattern = if w == "and" {
                        HearstPattern::AndOther
                    } else {
                        HearstPattern::OrOther
                    };
                    emit(backward_list(&chunks, tokens, i), x, pattern);
                }
            }
            "including" | "especially" => {
                let e = if i > 0 && tokens[i - 1].text == "," { i - 1 } else { i };
                if let Some(x) = chunk_ending(&chunks, e) {
                    let pattern = if w == "including" {
                        HearstPattern::Including
                    } else {
                        HearstPattern::Especially
                    };
                    emit(forward_list(&chunks, tokens, i + 1), x, pattern);
                }
            }
            _ => {}
        }
    }
    out
}

/// Type assertions from Hearst patterns, one per (listed entity, type) pair.
pub fn extract_types(doc: &AnnotatedDocument) -> Vec<TypeAssertion> {
    let merged = doc.merge_entities();
    merged
        .sentences
        .iter()
        .enumerate()
        .flat_map(|(si, tokens)| sentence_types(&doc.doc_id, si, tokens))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::fallback_annotate;

    fn pairs(text: &str) -> Vec<(String, String, HearstPattern)> {
        extract_types(&fallback_annotate(text))
            .into_iter()
            .map(|a| (a.entity, a.type_phrase, a.pattern))
            .collect()
    }

    fn pair(e: &str, t: &str, p: HearstPattern) -> (String, String, HearstPattern) {
        (e.to_string(), t.to_string(), p)
    }

    #[test]
    fn such_as_list() {
        use HearstPattern::SuchAs;
        assert_eq!(
            pairs("footballers such as Umtiti, Matuidi and Pogba"),
            [
                pair("Umtiti", "footballers", SuchAs),
                pair("Matuidi", "footballers", SuchAs),
                pair("Pogba", "footballers", SuchAs),
            ]
        );
    }

    #[test]
    fn and_other() {
        assert_eq!(
            pairs("Lyon and other French clubs"),
            [pair("Lyon", "French clubs", HearstPattern::AndOther)]
        );
        assert_eq!(
            pairs("He met Monaco, Lille or other teams."),
            [
                pair("Monaco", "teams", HearstPattern::OrOther),
                pair("Lille", "teams", HearstPattern::OrOther),
            ]
        );
    }

    #[test]
    fn such_x_as_and_including() {
        assert_eq!(
            pairs("He won such trophies as the Cup."),
            [pair("Cup", "trophies", HearstPattern::SuchXAs)]
        );
        assert_eq!(
            pairs("He played in tournaments, including Euro 2016 and the World Cup."),
            [
                pair("Euro 2016", "tournaments", HearstPattern::Including),
                pair("World Cup", "tournaments", HearstPattern::Including),
            ]
        );
        assert_eq!(
            pairs("He admired defenders, especially Thuram."),
            [pair("Thuram", "defenders", HearstPattern::Especially)]
        );
    }

    #[test]
    fn no_trigger_no_types() {
        assert!(pairs("Umtiti plays for Barcelona.").is_empty());
    }
}
