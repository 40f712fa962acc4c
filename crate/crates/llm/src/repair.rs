//! Parse-or-repair flow: a response that yields no groups gets exactly one
//! reformatting pass through a repair model.

use serde::{Deserialize, Serialize};
use wordgroup_core::ParsedAnswer;

use crate::client::{LlmError, ModelClient, RawResponse};
use crate::parse::parse_answer;
use crate::prompt::build_reformat_prompt;

/// Asks the repair model to restate `raw` in the answer format.
pub fn reformat_answer(repair: &ModelClient, game_id: &str, raw: &str) -> Result<(RawResponse, bool), LlmError> {
    repair.query(game_id, &build_reformat_prompt(raw), "")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Repaired {
    pub answer: ParsedAnswer,
    /// The repair model's response, when a repair was attempted.
    pub repair_response: Option<RawResponse>,
    /// No groups could be recovered; the game scores zero.
    pub failed: bool,
}

/// Parses `raw`; on failure, makes one repair query and parses its text.
/// Without a repair model a parse failure is final.
pub fn parse_or_repair(raw: &str, game_id: &str, repair: Option<&ModelClient>) -> Result<Repaired, LlmError> {
    if let Ok(answer) = parse_answer(raw) {
        return Ok(Repaired { answer, repair_response: None, failed: false });
    }
    let Some(client) = repair else {
        return Ok(Repaired { answer: ParsedAnswer::empty(raw), repair_response: None, failed: true });
    };
    let (response, _) = reformat_answer(client, game_id, raw)?;
    let repaired = match parse_answer(&response.text) {
        Ok(mut answer) => {
            answer.raw_text = raw.to_string();
            answer.was_reformatted = true;
            Repaired { answer, repair_response: Some(response), failed: false }
        }
        Err(_) => Repaired { answer: ParsedAnswer::empty(raw), repair_response: Some(response), failed: true },
    };
    Ok(repaired)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::client::{BackendKind, ModelConfig};
    use crate::mock::ScriptedBackend;

    fn repair_client(reply: &str) -> (ModelClient, Arc<ScriptedBackend>) {
        let backend = Arc::new(ScriptedBackend::new(vec![Ok(reply.to_string())]));
        let client = ModelClient::new("repair", ModelConfig::mock(BackendKind::Canned, "repair"), backend.clone());
        (client, backend)
    }

    #[test]
    fn parseable_text_skips_repair() {
        let (client, backend) = repair_client("<A>: ['x']");
        let r = parse_or_repair("<T>: ['a', 'b']", "g", Some(&client)).unwrap();
        assert!(!r.failed && !r.answer.was_reformatted);
        assert_eq!(backend.calls(), 0);
    }

    #[test]
    fn messy_text_is_repaired_once() {
        let (client, backend) = repair_client("<Fruit>: ['apple', 'pear'], <Pets>: ['dog', 'cat']");
        let messy = "Fruit - apple, pear\nPets - dog, cat";
        let r = parse_or_repair(messy, "g", Some(&client)).unwrap();
        assert!(r.answer.was_reformatted && !r.failed);
        assert_eq!(r.answer.groups.len(), 2);
        assert_eq!(r.answer.raw_text, messy);
        assert_eq!(backend.calls(), 1);
        assert!(backend.prompts()[0].ends_with(messy));
    }

    #[test]
    fn prose_repair_fails_after_one_attempt() {
        let (client, backend) = repair_client("Sorry, I cannot help with that.");
        let r = parse_or_repair("no groups here", "g", Some(&client)).unwrap();
        assert!(r.failed && r.answer.groups.is_empty());
        assert_eq!(backend.calls(), 1);
    }

    #[test]
    fn no_repair_model_means_failure() {
        let r = parse_or_repair("nothing", "g", None).unwrap();
        assert!(r.failed && r.repair_response.is_none());
    }
}
