//! Word grouping datasets: the topic + four words atoms games are sampled from.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::DatasetError;
use crate::text::{normalize_word, topic_key};

/// Number of words every grouping carries.
pub const GROUPING_SIZE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tag {
    GeneralKnowledge,
    CulturalPopCulture,
    Linguistic,
}

impl Tag {
    pub const ALL: [Tag; 3] = [Tag::GeneralKnowledge, Tag::CulturalPopCulture, Tag::Linguistic];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::GeneralKnowledge => "general_knowledge",
            Tag::CulturalPopCulture => "cultural_pop_culture",
            Tag::Linguistic => "linguistic",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One topic and its member words, as written by an annotator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordGrouping {
    pub id: String,
    pub language: String,
    pub topic: String,
    #[serde(default)]
    pub topic_translation: Option<String>,
    pub words: Vec<String>,
    pub culturally_related: bool,
    #[serde(default)]
    pub tags: Vec<Tag>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroupingDataset {
    pub subset_name: String,
    pub groupings: Vec<WordGrouping>,
}

impl GroupingDataset {
    pub fn new(subset_name: impl Into<String>, groupings: Vec<WordGrouping>) -> Self {
        Self { subset_name: subset_name.into(), groupings }
    }

    pub fn len(&self) -> usize {
        self.groupings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groupings.is_empty()
    }

    /// Serializes the dataset as grouping JSONL, one record per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for g in &self.groupings {
            out.push_str(&serde_json::to_string(g).expect("grouping serializes"));
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<(), DatasetError> {
        let mut f = std::fs::File::create(path).map_err(|e| DatasetError::io(path, e))?;
        f.write_all(self.to_jsonl().as_bytes()).map_err(|e| DatasetError::io(path, e))
    }
}

/// Loads a grouping JSONL file. The subset name is the file stem.
/// Records are parsed but not validated; see [`validate_dataset`].
pub fn load_groupings(path: &Path) -> Result<GroupingDataset, DatasetError> {
    let file = std::fs::File::open(path).map_err(|e| DatasetError::io(path, e))?;
    let subset = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parse_groupings(subset, BufReader::new(file)).map_err(|e| match e {
        DatasetError::Io { source, .. } => DatasetError::io(path, source),
        other => other,
    })
}

pub fn parse_groupings<R: BufRead>(
    subset_name: impl Into<String>,
    reader: R,
) -> Result<GroupingDataset, DatasetError> {
    let mut groupings = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| DatasetError::io(Path::new("<reader>"), e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: WordGrouping = serde_json::from_str(&line).map_err(|e| {
            DatasetError::Malformed { line: idx + 1, message: e.to_string() }
        })?;
        groupings.push(record);
    }
    Ok(GroupingDataset::new(subset_name, groupings))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    WordCount { found: usize },
    EmptyWord { index: usize },
    DuplicateWord { word: String },
    EmptyTopic,
    MultipleTags { count: usize },
    DuplicateTopic { topic: String, first_id: String },
    DuplicateId,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::WordCount { found } => {
                write!(f, "expected {GROUPING_SIZE} words, found {found}")
            }
            Rule::EmptyWord { index } => write!(f, "word {index} is empty"),
            Rule::DuplicateWord { word } => write!(f, "word {word:?} appears twice"),
            Rule::EmptyTopic => f.write_str("topic is empty"),
            Rule::MultipleTags { count } => write!(f, "{count} tags, at most one allowed"),
            Rule::DuplicateTopic { topic, first_id } => {
                write!(f, "topic {topic:?} already used by {first_id}")
            }
            Rule::DuplicateId => f.write_str("id already used"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub grouping_id: String,
    #[serde(flatten)]
    pub rule: Rule,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Groupings without a tag. Informational only.
    pub untagged: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every grouping invariant plus dataset-wide topic uniqueness.
/// Topics are compared after normalization, ignoring case.
pub fn validate_dataset(d: &GroupingDataset) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut topics: HashMap<String, &str> = HashMap::new();
    let mut ids = HashSet::new();

    for g in &d.groupings {
        let mut push = |rule| {
            report.violations.push(Violation { grouping_id: g.id.clone(), rule });
        };
        if !ids.insert(g.id.as_str()) {
            push(Rule::DuplicateId);
        }
        if g.words.len() != GROUPING_SIZE {
            push(Rule::WordCount { found: g.words.len() });
        }
        let mut seen = HashSet::new();
        for (i, w) in g.words.iter().enumerate() {
            let w = normalize_word(w);
            if w.is_empty() {
                push(Rule::EmptyWord { index: i });
            } else if !seen.insert(w.clone()) {
                push(Rule::DuplicateWord { word: w });
            }
        }
        if g.tags.len() > 1 {
            push(Rule::MultipleTags { count: g.tags.len() });
        }
        let key = topic_key(&g.topic);
        if key.is_empty() {
            push(Rule::EmptyTopic);
        } else if let Some(first) = topics.get(&key) {
            push(Rule::DuplicateTopic { topic: g.topic.clone(), first_id: first.to_string() });
        } else {
            topics.insert(key, &g.id);
        }
        if g.tags.is_empty() {
            report.untagged.push(g.id.clone());
        }
    }
    report
}
