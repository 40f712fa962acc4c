//! Prompt templates and their placeholder substitution.
//!
//! Game prompts carry three placeholders: `#*#` (pool size), `$*$` (group
//! count) and `{}` (the pool rendered as a Python list literal).

use wordgroup_core::Game;

const TEMPLATE_2: &str = include_str!("../assets/prompt_2_groups.txt");
const TEMPLATE_3: &str = include_str!("../assets/prompt_3_groups.txt");
const TEMPLATE_4: &str = include_str!("../assets/prompt_4_groups.txt");
const REFORMAT: &str = include_str!("../assets/reformat.txt");
const OVERLAP: &str = include_str!("../assets/overlap_proposals.txt");

pub const WORD_COUNT_TOKEN: &str = "#*#";
pub const GROUP_COUNT_TOKEN: &str = "$*$";
pub const POOL_TOKEN: &str = "{}";

/// Marker preceding the pool list in every game prompt.
pub const POOL_MARKER: &str = "Now, given the pool: ";
/// Text following the pool list in every game prompt.
pub const POOL_END_MARKER: &str = ". The answer must be";
pub const TOPICS_MARKER: &str = "Here is the list of topics: ";
pub const WORDS_MARKER: &str = " . Here is the pool of words from which you can select from: ";
pub const WORDS_END_MARKER: &str = ". Output solely";

/// Template for a game with `m` groups. Counts outside 2..=4 fall back to
/// the nearest template.
pub fn game_template(m: usize) -> &'static str {
    match m {
        0..=2 => TEMPLATE_2,
        3 => TEMPLATE_3,
        _ => TEMPLATE_4,
    }
    .trim_end_matches('\n')
}

pub fn reformat_template() -> &'static str {
    REFORMAT.trim_end_matches('\n')
}

pub fn overlap_template() -> &'static str {
    OVERLAP.trim_end_matches('\n')
}

/// Python `repr` of a string: single quotes unless the text contains a
/// single quote and no double quote.
pub fn py_repr(s: &str) -> String {
    let quote = if s.contains('\'') && !s.contains('"') { '"' } else { '\'' };
    let mut out = String::with_capacity(s.len() + 2);
    out.push(quote);
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c == quote => {
                out.push('\\');
                out.push(c);
            }
            c => out.push(c),
        }
    }
    out.push(quote);
    out
}

/// Renders words as a Python list literal, `['a', 'b']`.
pub fn py_list<S: AsRef<str>>(words: &[S]) -> String {
    let items: Vec<String> = words.iter().map(|w| py_repr(w.as_ref())).collect();
    format!("[{}]", items.join(", "))
}

/// Renders strings as a double-quoted list, `["a", "b"]`.
pub fn quoted_list<S: AsRef<str>>(items: &[S]) -> String {
    let items: Vec<String> =
        items.iter().map(|s| serde_json::to_string(s.as_ref()).expect("string serializes")).collect();
    format!("[{}]", items.join(", "))
}

/// Replaces placeholders in one left-to-right pass, so substituted text is
/// never rescanned.
pub fn substitute(template: &str, replacements: &[(&str, &str)]) -> String {
    let mut out = String::with_capacity(template.len() + 256);
    let mut rest = template;
    'outer: while !rest.is_empty() {
        for (token, value) in replacements {
            if let Some(tail) = rest.strip_prefix(token) {
                out.push_str(value);
                rest = tail;
                continue 'outer;
            }
        }
        let c = rest.chars().next().expect("non-empty");
        out.push(c);
        rest = &rest[c.len_utf8()..];
    }
    out
}

/// The solving prompt for a game.
pub fn build_prompt(game: &Game) -> String {
    let x = game.pool.len().to_string();
    let m = game.m.to_string();
    let pool = py_list(&game.pool);
    substitute(
        game_template(game.m),
        &[(WORD_COUNT_TOKEN, x.as_str()), (GROUP_COUNT_TOKEN, m.as_str()), (POOL_TOKEN, pool.as_str())],
    )
}

/// Wraps an unparseable response in the reformatting request.
pub fn build_reformat_prompt(raw: &str) -> String {
    format!("{}\n{}", reformat_template(), raw)
}

/// The candidate-proposal prompt listing a game's topics and pool.
pub fn build_overlap_prompt(game: &Game) -> String {
    let topics = quoted_list(&game.topics());
    let words = quoted_list(&game.pool);
    substitute(overlap_template(), &[("LIST_TOPICS", topics.as_str()), ("LIST_WORDS", words.as_str())])
}
