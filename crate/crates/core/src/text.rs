use unicode_normalization::UnicodeNormalization;

/// Canonical form of a word slot: surrounding whitespace trimmed, then NFC.
/// Comparison after normalization is exact and case-sensitive.
pub fn normalize_word(word: &str) -> String {
    word.trim().nfc().collect()
}

/// Key used for topic uniqueness checks, which ignore case.
pub fn topic_key(topic: &str) -> String {
    normalize_word(topic).to_lowercase()
}

/// Removes duplicates after normalization, keeping first occurrences in order.
/// Empty entries are dropped.
pub fn dedup_words<S: AsRef<str>>(words: &[S]) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(words.len());
    for w in words {
        let w = normalize_word(w.as_ref());
        if !w.is_empty() && seen.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}
