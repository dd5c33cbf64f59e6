//! Heuristic stand-in for an external tagger. Good enough for fixtures and
//! demos; real corpora should come pre-annotated.

use super::{AnnotatedDocument, EntityMention, Token, DEFAULT_NE_TAG};

const LEXICON: &[(&str, &str)] = &[
    ("a", "DT"), ("an", "DT"), ("the", "DT"), ("this", "DT"), ("these", "DT"),
    ("those", "DT"), ("every", "DT"), ("each", "DT"), ("some", "DT"), ("any", "DT"),
    ("all", "DT"), ("both", "DT"), ("no", "DT"),
    ("of", "IN"), ("in", "IN"), ("on", "IN"), ("at", "IN"), ("for", "IN"), ("with", "IN"),
    ("by", "IN"), ("from", "IN"), ("as", "IN"), ("into", "IN"), ("about", "IN"),
    ("against", "IN"), ("between", "IN"), ("through", "IN"), ("during", "IN"),
    ("before", "IN"), ("after", "IN"), ("over", "IN"), ("under", "IN"), ("near", "IN"),
    ("since", "IN"), ("until", "IN"), ("like", "IN"), ("than", "IN"), ("because", "IN"),
    ("while", "IN"), ("if", "IN"), ("per", "IN"), ("via", "IN"), ("among", "IN"),
    ("within", "IN"), ("without", "IN"), ("across", "IN"), ("along", "IN"),
    ("behind", "IN"), ("beyond", "IN"), ("toward", "IN"), ("towards", "IN"), ("upon", "IN"),
    ("that", "IN"),
    ("to", "TO"),
    ("and", "CC"), ("or", "CC"), ("but", "CC"), ("nor", "CC"),
    ("he", "PRP"), ("she", "PRP"), ("it", "PRP"), ("they", "PRP"), ("we", "PRP"),
    ("i", "PRP"), ("you", "PRP"), ("him", "PRP"), ("them", "PRP"), ("us", "PRP"),
    ("me", "PRP"), ("hers", "PRP"),
    ("his", "PRP$"), ("her", "PRP$"), ("its", "PRP$"), ("their", "PRP$"), ("our", "PRP$"),
    ("my", "PRP$"), ("your", "PRP$"),
    ("who", "WP"), ("whom", "WP"), ("what", "WP"), ("which", "WDT"),
    ("where", "WRB"), ("when", "WRB"), ("how", "WRB"), ("why", "WRB"),
    ("is", "VBZ"), ("are", "VBP"), ("am", "VBP"), ("was", "VBD"), ("were", "VBD"),
    ("be", "VB"), ("been", "VBN"), ("being", "VBG"), ("has", "VBZ"), ("have", "VBP"),
    ("had", "VBD"), ("do", "VBP"), ("does", "VBZ"), ("did", "VBD"),
    ("can", "MD"), ("could", "MD"), ("may", "MD"), ("might", "MD"), ("shall", "MD"),
    ("should", "MD"), ("will", "MD"), ("would", "MD"), ("must", "MD"),
    ("not", "RB"), ("also", "RB"), ("very", "RB"), ("together", "RB"), ("later", "RB"),
    ("then", "RB"), ("once", "RB"), ("still", "RB"), ("often", "RB"), ("again", "RB"),
    ("never", "RB"), ("already", "RB"), ("soon", "RB"),
    ("such", "JJ"), ("other", "JJ"), ("many", "JJ"), ("several", "JJ"),
    ("born", "VBN"), ("won", "VBD"), ("met", "VBD"), ("made", "VBD"), ("wrote", "VBD"),
    ("began", "VBD"), ("became", "VBD"), ("left", "VBD"), ("took", "VBD"), ("grew", "VBD"),
    ("plays", "VBZ"), ("play", "VBP"), ("flows", "VBZ"), ("lives", "VBZ"), ("joins", "VBZ"),
    ("scores", "VBZ"), ("runs", "VBZ"), ("leads", "VBZ"), ("includes", "VBZ"),
    ("including", "VBG"), ("especially", "RB"),
];

fn lookup(word: &str) -> Option<&'static str> {
    let lower = word.to_lowercase();
    LEXICON.iter().find(|(w, _)| *w == lower).map(|(_, t)| *t)
}

fn is_capitalized(word: &str) -> bool {
    word.chars().next().is_some_and(char::is_uppercase)
}

fn is_number(word: &str) -> bool {
    word.chars().any(|c| c.is_ascii_digit())
        && word.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | ',' | '-'))
}

fn suffix_tag(lower: &str) -> &'static str {
    if lower.len() > 4 && lower.ends_with("ly") {
        "RB"
    } else if lower.len() > 4 && lower.ends_with("ing") {
        "VBG"
    } else if lower.len() > 3 && lower.ends_with("ed") {
        "VBD"
    } else if ["al", "ous", "ful", "ive", "ic", "able", "ible", "less", "ish"]
        .iter()
        .any(|s| lower.len() > s.len() + 2 && lower.ends_with(s))
        || lower.contains("-year-old")
    {
        "JJ"
    } else if lower.len() > 3 && lower.ends_with('s') && !lower.ends_with("ss") {
        "NNS"
    } else {
        "NN"
    }
}

fn split_sentences(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start = 0;
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    for (k, &(i, c)) in chars.iter().enumerate() {
        if matches!(c, '.' | '!' | '?') {
            let next_is_space = chars.get(k + 1).is_none_or(|(_, n)| n.is_whitespace());
            if next_is_space {
                let end = i + c.len_utf8();
                let s = text[start..end].trim();
                if !s.is_empty() {
                    out.push(s);
                }
                start = end;
            }
        }
    }
    let rest = text[start..].trim();
    if !rest.is_empty() {
        out.push(rest);
    }
    out
}

/// Whitespace split; commas become their own tokens and other punctuation
/// around words is dropped. Inner hyphens and apostrophes are kept.
fn split_words(sentence: &str) -> Vec<String> {
    let mut out = Vec::new();
    for raw in sentence.split_whitespace() {
        let trailing_comma = raw.trim_end_matches(['.', '!', '?', '"', ')']).ends_with(',');
        let word = raw.trim_matches(|c: char| c.is_ascii_punctuation());
        if let Some(stem) = word.strip_suffix("'s") {
            if !stem.is_empty() {
                out.push(stem.to_string());
            }
            out.push("'s".to_string());
        } else if !word.is_empty() {
            out.push(word.to_string());
        }
        if trailing_comma {
            out.push(",".to_string());
        }
    }
    out
}

/// Splits sentences on `.`, `!` or `?` followed by whitespace, tags tokens
/// from a small lexicon plus suffix rules (default `NN`), and marks capitalized
/// runs as named entities. A capitalized word at the start of a sentence only
/// counts when the next word is capitalized too.
pub fn fallback_annotate(raw_text: &str) -> AnnotatedDocument {
    let mut sentences = Vec::new();
    let mut mentions = Vec::new();
    for (si, sentence) in split_sentences(raw_text).into_iter().enumerate() {
        let words = split_words(sentence);
        let mut tokens: Vec<Token> = words
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let pos = if w == "," {
                    ","
                } else if w == "'s" {
                    "POS"
                } else if let Some(tag) = lookup(w) {
                    tag
                } else if is_number(w) {
                    "CD"
                } else if is_capitalized(w) && i > 0 {
                    "NNP"
                } else {
                    suffix_tag(&w.to_lowercase())
                };
                Token::new(w.clone(), pos, None)
            })
            .collect();

        let capital = |i: usize| is_capitalized(&words[i]) && lookup(&words[i]).is_none();
        let mut i = 0;
        while i < words.len() {
            if !capital(i) {
                i += 1;
                continue;
            }
            let mut j = i + 1;
            while j < words.len() && (capital(j) || is_number(&words[j]) && capital(j - 1)) {
                j += 1;
            }
            if i == 0 && j == 1 {
                i = j;
                continue;
            }
            for t in &mut tokens[i..j] {
                t.pos = "NNP".into();
                t.ne_tag = Some(DEFAULT_NE_TAG.into());
            }
            mentions.push(EntityMention {
                sentence: si,
                start: i,
                end: j,
                surface: words[i..j].join(" "),
            });
            i = j;
        }
        sentences.push(tokens);
    }
    AnnotatedDocument::with_mentions("doc", None, sentences, mentions)
        .expect("spans come from the tokenizer")
}
