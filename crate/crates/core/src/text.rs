//! String normalization and small word lists shared across modules.

use unicode_normalization::UnicodeNormalization;

/// Lowercase, NFC, collapsed internal whitespace, and no leading or trailing
/// punctuation.
pub fn normalize(s: &str) -> String {
    let nfc: String = s.nfc().collect();
    let lowered = nfc.to_lowercase();
    let collapsed = lowered.split_whitespace().collect::<Vec<_>>().join(" ");
    collapsed
        .trim_matches(|c: char| c.is_ascii_punctuation() || c.is_whitespace() || is_quote(c))
        .to_string()
}

fn is_quote(c: char) -> bool {
    matches!(c, '\u{2018}' | '\u{2019}' | '\u{201c}' | '\u{201d}')
}

/// Normalized word tokens of `s`, with punctuation stripped from each word.
pub fn tokens(s: &str) -> Vec<String> {
    normalize(s)
        .split_whitespace()
        .map(|w| {
            w.trim_matches(|c: char| c.is_ascii_punctuation() || is_quote(c))
                .to_string()
        })
        .filter(|w| !w.is_empty())
        .collect()
}

/// True when `needle` occurs in `haystack` in order, not necessarily contiguously.
pub fn is_subsequence<T: PartialEq>(needle: &[T], haystack: &[T]) -> bool {
    let mut it = haystack.iter();
    needle.iter().all(|n| it.any(|h| h == n))
}

pub const QUESTION_WORDS: &[&str] = &[
    "who", "whom", "whose", "what", "which", "where", "when", "why", "how", "name", "list",
];

const STOPWORDS: &[&str] = &[
    "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any",
    "are", "as", "at", "be", "because", "been", "before", "being", "below", "between", "both",
    "but", "by", "can", "could", "did", "do", "does", "doing", "down", "during", "each", "else",
    "ever", "few", "for", "from", "further", "had", "has", "have", "having", "he", "her", "here",
    "hers", "herself", "him", "himself", "his", "i", "if", "in", "into", "is", "it", "its",
    "itself", "just", "may", "me", "might", "more", "most", "must", "my", "myself", "no", "nor",
    "not", "now", "of", "off", "on", "once", "only", "or", "other", "our", "ours", "out", "over",
    "own", "same", "shall", "she", "should", "so", "some", "such", "than", "that", "the", "their",
    "theirs", "them", "themselves", "then", "there", "these", "they", "this", "those", "through",
    "to", "too", "under", "until", "up", "us", "very", "was", "we", "were", "while", "will",
    "with", "would", "you", "your", "yours", "yourself", "together", "one", "ones", "also",
    "did", "does", "done", "got", "get", "gets",
];

pub fn is_stopword(word: &str) -> bool {
    STOPWORDS.contains(&word)
}

pub fn is_question_word(word: &str) -> bool {
    QUESTION_WORDS.contains(&word)
}

pub const AUXILIARY_VERBS: &[&str] = &[
    "is", "are", "was", "were", "be", "been", "being", "am", "can", "could", "may", "might",
    "shall", "should", "will", "would", "must", "do", "does", "did", "has", "have", "had",
];

pub fn is_auxiliary(word: &str) -> bool {
    AUXILIARY_VERBS.contains(&word.to_lowercase().as_str())
}
