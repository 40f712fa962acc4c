//! Pretrained word-vector tables and phrase embedding by token averaging.

use std::collections::HashMap;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::EmbeddingError;
use crate::scalar::Scalar;

/// Token to vector lookup loaded from a text vector file.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable<F> {
    dimension: usize,
    language: String,
    vocabulary: HashMap<String, Vec<F>>,
}

impl<F: Scalar> EmbeddingTable<F> {
    /// Builds a table from `(token, vector)` pairs. The first occurrence of a
    /// token wins.
    pub fn from_entries(
        language: impl Into<String>,
        entries: impl IntoIterator<Item = (String, Vec<F>)>,
    ) -> Result<Self, EmbeddingError> {
        let mut vocabulary = HashMap::new();
        let mut dimension = None;
        for (token, v) in entries {
            let d = *dimension.get_or_insert(v.len());
            if v.len() != d {
                return Err(EmbeddingError::DimensionMismatch { left: d, right: v.len() });
            }
            vocabulary.entry(token).or_insert(v);
        }
        match dimension {
            Some(dimension) if dimension > 0 => Ok(Self { dimension, language: language.into(), vocabulary }),
            _ => Err(EmbeddingError::Empty),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn language(&self) -> &str {
        &self.language
    }

    pub fn len(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocabulary.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<&[F]> {
        self.vocabulary.get(token).map(Vec::as_slice)
    }

    /// Embeds a word or phrase as the mean of its in-vocabulary token vectors.
    pub fn embed(&self, phrase: &str) -> PhraseVector<F> {
        embed_phrase(self, phrase, Tokenizer::default())
    }
}

/// Reads a text vector file: a `count dim` header, then `token v1 .. v_dim`
/// per line. At most `limit` rows are read when given.
pub fn load_vectors<F: Scalar>(
    path: &Path,
    limit: Option<usize>,
    language: &str,
) -> Result<EmbeddingTable<F>, EmbeddingError> {
    let io = |source| EmbeddingError::Io { path: path.to_path_buf(), source };
    let file = std::fs::File::open(path).map_err(io)?;
    let mut lines = BufReader::new(file).lines();

    let header = lines.next().transpose().map_err(io)?.unwrap_or_default();
    let parts: Vec<&str> = header.split_whitespace().collect();
    let (count, dim) = match parts.as_slice() {
        [c, d] => match (c.parse::<usize>(), d.parse::<usize>()) {
            (Ok(c), Ok(d)) if d > 0 => (c, d),
            _ => return Err(EmbeddingError::BadHeader(header)),
        },
        _ => return Err(EmbeddingError::BadHeader(header)),
    };
    let wanted = limit.map_or(count, |l| l.min(count));

    let mut entries = Vec::with_capacity(wanted.min(1 << 20));
    for (idx, line) in lines.enumerate() {
        if entries.len() == wanted {
            break;
        }
        let line = line.map_err(io)?;
        let line_no = idx + 2;
        let mut fields = line.split(' ').filter(|s| !s.is_empty());
        let Some(token) = fields.next() else { continue };
        let values: Vec<&str> = fields.collect();
        if values.len() != dim {
            return Err(EmbeddingError::RowArity { line: line_no, expected: dim, found: values.len() });
        }
        let vector = values
            .iter()
            .map(|v| v.parse::<F>().map_err(|_| EmbeddingError::BadValue { line: line_no, value: v.to_string() }))
            .collect::<Result<Vec<F>, _>>()?;
        entries.push((token.to_string(), vector));
    }
    if entries.len() < wanted {
        return Err(EmbeddingError::HeaderMismatch { declared: count, found: entries.len() });
    }
    EmbeddingTable::from_entries(language, entries)
}

/// Mean token vector of a phrase; the zero vector with `oov` set when no
/// token was found.
#[derive(Debug, Clone, PartialEq)]
pub struct PhraseVector<F> {
    pub values: Vec<F>,
    pub oov: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Tokenizer {
    /// Whitespace split with exact-match lookup only.
    Whitespace,
    /// Whitespace split; a missing token is retried with edge punctuation
    /// stripped, then lowercased, then (for CJK text) character by character.
    #[default]
    WhitespaceWithFallback,
}

fn is_cjk(c: char) -> bool {
    matches!(c as u32,
        0x3040..=0x30FF      // kana
        | 0x3400..=0x4DBF    // ext A
        | 0x4E00..=0x9FFF    // unified ideographs
        | 0xAC00..=0xD7AF    // hangul
        | 0xF900..=0xFAFF
        | 0x20000..=0x2FA1F)
}

fn lookup_token<'a, F: Scalar>(table: &'a EmbeddingTable<F>, token: &str, out: &mut Vec<&'a [F]>) {
    if let Some(v) = table.get(token) {
        out.push(v);
        return;
    }
    let stripped = token.trim_matches(|c: char| !c.is_alphanumeric());
    if stripped.is_empty() {
        return;
    }
    if let Some(v) = table.get(stripped) {
        out.push(v);
        return;
    }
    let lower = stripped.to_lowercase();
    if let Some(v) = table.get(&lower) {
        out.push(v);
        return;
    }
    if stripped.chars().any(is_cjk) {
        let mut buf = [0u8; 4];
        for c in stripped.chars() {
            if let Some(v) = table.get(c.encode_utf8(&mut buf)) {
                out.push(v);
            }
        }
    }
}

pub fn embed_phrase<F: Scalar>(table: &EmbeddingTable<F>, phrase: &str, tokenizer: Tokenizer) -> PhraseVector<F> {
    let mut found: Vec<&[F]> = Vec::new();
    for token in phrase.split_whitespace() {
        match tokenizer {
            Tokenizer::Whitespace => found.extend(table.get(token)),
            Tokenizer::WhitespaceWithFallback => lookup_token(table, token, &mut found),
        }
    }
    let mut values = vec![F::zero(); table.dimension];
    if found.is_empty() {
        return PhraseVector { values, oov: true };
    }
    for v in &found {
        for (acc, x) in values.iter_mut().zip(v.iter()) {
            *acc += *x;
        }
    }
    let count = F::from_count(found.len());
    values.iter_mut().for_each(|x| *x /= count);
    PhraseVector { values, oov: false }
}

pub fn dot<F: Scalar>(u: &[F], v: &[F]) -> F {
    u.iter().zip(v).map(|(a, b)| *a * *b).sum()
}

pub fn norm<F: Scalar>(u: &[F]) -> F {
    dot(u, u).sqrt()
}

/// Scales `u` to unit length; the zero vector is returned unchanged.
pub fn normalized<F: Scalar>(u: &[F]) -> Vec<F> {
    let n = norm(u);
    if n > F::zero() {
        u.iter().map(|x| *x / n).collect()
    } else {
        u.to_vec()
    }
}

/// Cosine similarity, defined as 0 when either vector has zero norm.
pub fn cosine<F: Scalar>(u: &[F], v: &[F]) -> Result<F, EmbeddingError> {
    if u.len() != v.len() {
        return Err(EmbeddingError::DimensionMismatch { left: u.len(), right: v.len() });
    }
    let (nu, nv) = (norm(u), norm(v));
    if nu == F::zero() || nv == F::zero() {
        return Ok(F::zero());
    }
    let c = dot(u, v) / (nu * nv);
    Ok(c.max(-F::one()).min(F::one()))
}
