//! Offline backends for tests and networkless runs.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use wordgroup_core::Game;

use crate::client::{BackendKind, CallError, ChatBackend, HttpBackend, ModelConfig};
use crate::parse::render_answer;
use crate::prompt::{py_list, quoted_list, POOL_END_MARKER, POOL_MARKER, WORDS_END_MARKER, WORDS_MARKER};

/// Games addressable by the pool literal their prompts embed.
#[derive(Debug, Default, Clone)]
pub struct GameRegistry {
    by_pool: HashMap<String, Arc<Game>>,
}

impl GameRegistry {
    pub fn new<'a>(games: impl IntoIterator<Item = &'a Game>) -> Self {
        let mut by_pool = HashMap::new();
        for g in games {
            let game = Arc::new(g.clone());
            by_pool.insert(py_list(&g.pool), game.clone());
            by_pool.insert(quoted_list(&g.pool), game);
        }
        Self { by_pool }
    }

    /// The game whose pool appears in `prompt`, and whether the prompt is an
    /// overlap proposal request.
    pub fn lookup(&self, prompt: &str) -> Option<(&Game, bool)> {
        if let Some(pool) = between(prompt, POOL_MARKER, POOL_END_MARKER) {
            if let Some(g) = self.by_pool.get(pool) {
                return Some((g, false));
            }
        }
        let pool = between(prompt, WORDS_MARKER, WORDS_END_MARKER)?;
        self.by_pool.get(pool).map(|g| (g.as_ref(), true))
    }
}

fn between<'a>(text: &'a str, start: &str, end: &str) -> Option<&'a str> {
    let from = text.rfind(start)? + start.len();
    let len = text[from..].find(end)?;
    Some(&text[from..from + len])
}

/// A topic-to-words mapping rendered as a Python dictionary.
pub fn render_proposals<S: AsRef<str>>(entries: &[(S, Vec<String>)]) -> String {
    let items: Vec<String> = entries
        .iter()
        .map(|(t, ws)| format!("{}: {}", serde_json::to_string(t.as_ref()).expect("string"), quoted_list(ws)))
        .collect();
    format!("{{{}}}", items.join(", "))
}

/// Always answers with the same text.
#[derive(Debug, Clone)]
pub struct CannedBackend(pub String);

impl ChatBackend for CannedBackend {
    fn complete(&self, _cfg: &ModelConfig, _prompt: &str) -> Result<String, CallError> {
        Ok(self.0.clone())
    }
}

/// Answers each game with its truth groups, and each overlap request with
/// the disjoint truth mapping.
#[derive(Debug, Clone)]
pub struct TruthEchoBackend {
    registry: Arc<GameRegistry>,
}

impl TruthEchoBackend {
    pub fn new(registry: Arc<GameRegistry>) -> Self {
        Self { registry }
    }
}

impl ChatBackend for TruthEchoBackend {
    fn complete(&self, _cfg: &ModelConfig, prompt: &str) -> Result<String, CallError> {
        let (game, overlap) =
            self.registry.lookup(prompt).ok_or_else(|| CallError::Malformed("unknown game in prompt".into()))?;
        let groups: Vec<(&str, Vec<String>)> = game.groups.iter().map(|g| (g.topic.as_str(), g.words.clone())).collect();
        Ok(if overlap { render_proposals(&groups) } else { render_answer(&groups) })
    }
}

/// Partitions the pool into m random groups of n. The shuffle is seeded by
/// the configured seed and the prompt, so answers do not depend on call
/// order.
#[derive(Debug, Clone)]
pub struct RandomGroupsBackend {
    registry: Arc<GameRegistry>,
    seed: u64,
}

impl RandomGroupsBackend {
    pub fn new(registry: Arc<GameRegistry>, seed: u64) -> Self {
        Self { registry, seed }
    }
}

impl ChatBackend for RandomGroupsBackend {
    fn complete(&self, _cfg: &ModelConfig, prompt: &str) -> Result<String, CallError> {
        let (game, overlap) =
            self.registry.lookup(prompt).ok_or_else(|| CallError::Malformed("unknown game in prompt".into()))?;
        let digest = Sha256::digest(prompt.as_bytes());
        let mut bytes = [0u8; 8];
        bytes.copy_from_slice(&digest[..8]);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ u64::from_le_bytes(bytes));
        let mut pool = game.pool.clone();
        pool.shuffle(&mut rng);
        let groups: Vec<(String, Vec<String>)> = pool
            .chunks(game.n.max(1))
            .enumerate()
            .map(|(i, ws)| {
                let topic = if overlap { game.groups.get(i).map_or_else(|| format!("Group {}", i + 1), |g| g.topic.clone()) } else { format!("Group {}", i + 1) };
                (topic, ws.to_vec())
            })
            .collect();
        Ok(if overlap { render_proposals(&groups) } else { render_answer(&groups) })
    }
}

/// Replays a fixed sequence of results, repeating the last one, and counts
/// calls.
#[derive(Debug)]
pub struct ScriptedBackend {
    script: Vec<Result<String, CallError>>,
    calls: AtomicUsize,
    prompts: Mutex<Vec<String>>,
}

impl ScriptedBackend {
    pub fn new(script: Vec<Result<String, CallError>>) -> Self {
        assert!(!script.is_empty(), "script must not be empty");
        Self { script, calls: AtomicUsize::new(0), prompts: Mutex::new(Vec::new()) }
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }

    pub fn prompts(&self) -> Vec<String> {
        self.prompts.lock().expect("lock").clone()
    }
}

impl ChatBackend for ScriptedBackend {
    fn complete(&self, _cfg: &ModelConfig, prompt: &str) -> Result<String, CallError> {
        let i = self.calls.fetch_add(1, Ordering::SeqCst);
        self.prompts.lock().expect("lock").push(prompt.to_string());
        self.script[i.min(self.script.len() - 1)].clone()
    }
}

/// Builds the backend a config asks for. Mock kinds that answer per game
/// need the registry of games they will see.
pub fn backend_for(cfg: &ModelConfig, registry: &Arc<GameRegistry>) -> Arc<dyn ChatBackend> {
    match cfg.kind {
        BackendKind::Http => Arc::new(HttpBackend::new(std::time::Duration::from_secs(cfg.timeout_secs))),
        BackendKind::TruthEcho => Arc::new(TruthEchoBackend::new(registry.clone())),
        BackendKind::RandomGroups => Arc::new(RandomGroupsBackend::new(registry.clone(), cfg.mock_seed)),
        BackendKind::Canned => Arc::new(CannedBackend(cfg.canned_text.clone().unwrap_or_default())),
    }
}
