//! Regex extraction of `<TOPIC>: ['w1', 'w2', ...]` groups from free text.

use std::collections::HashSet;
use std::sync::LazyLock;

use regex::Regex;
use thiserror::Error;
use wordgroup_core::text::topic_key;
use wordgroup_core::ParsedAnswer;

static GROUP: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"<([^<>\n]{1,200})>\**\s*:\s*\[([^\[\]]*)\]").expect("valid regex"));
static QUOTED_SEPARATOR: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r#"['"]\s*,\s*['"]"#).expect("valid regex"));

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("no groups found in response")]
    NoGroups,
}

fn unquote(item: &str) -> String {
    item.trim()
        .trim_matches(|c| c == '\'' || c == '"')
        .trim()
        .replace("\\'", "'")
        .replace("\\\"", "\"")
}

/// Splits the inside of a list literal into items. Quoted lists are split
/// on quote-comma-quote boundaries so apostrophes inside words survive;
/// unquoted lists are split on commas.
pub fn split_list(inner: &str) -> Vec<String> {
    let t = inner.trim().trim_end_matches(',').trim();
    if t.is_empty() {
        return Vec::new();
    }
    let starts_quoted = t.starts_with('\'') || t.starts_with('"');
    let pieces: Vec<String> = if starts_quoted {
        let mut chars = t.chars();
        chars.next();
        let body = chars.as_str();
        let body = body.strip_suffix(['\'', '"']).unwrap_or(body);
        QUOTED_SEPARATOR.split(body).map(unquote).collect()
    } else {
        t.split(',').map(unquote).collect()
    };
    pieces.into_iter().filter(|p| !p.is_empty()).collect()
}

/// Extracts every group in order. A topic seen earlier in the current block
/// starts a new block, which marks a restated or corrected answer.
pub fn parse_answer(raw: &str) -> Result<ParsedAnswer, ParseError> {
    let mut groups = Vec::new();
    let mut block_count = 0;
    let mut seen: HashSet<String> = HashSet::new();
    for cap in GROUP.captures_iter(raw) {
        let topic = cap[1].trim().to_string();
        if topic.is_empty() {
            continue;
        }
        let key = topic_key(&topic);
        if block_count == 0 || !seen.insert(key.clone()) {
            block_count += 1;
            seen.clear();
            seen.insert(key);
        }
        groups.push((topic, split_list(&cap[2])));
    }
    let mut answer = ParsedAnswer::new(groups, raw);
    if answer.groups.is_empty() {
        return Err(ParseError::NoGroups);
    }
    answer.block_count = block_count;
    Ok(answer)
}

/// Renders groups in the answer format the prompts ask for.
pub fn render_answer<S: AsRef<str>>(groups: &[(S, Vec<String>)]) -> String {
    groups
        .iter()
        .map(|(t, ws)| format!("<{}>: {}", t.as_ref(), crate::prompt::py_list(ws)))
        .collect::<Vec<_>>()
        .join(", ")
}
