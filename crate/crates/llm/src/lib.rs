//! Model-facing side of word grouping evaluation: prompt rendering, chat
//! completion querying with retries and caching, answer parsing with a
//! single reformat pass, and candidate-proposal probing.

pub mod client;
pub mod mock;
pub mod parse;
pub mod probe;
pub mod prompt;
pub mod repair;

pub use client::{
    query_model, BackendKind, CallError, ChatBackend, HttpBackend, LlmError, ModelClient, ModelConfig, RawResponse,
    ResponseCache, RetryPolicy,
};
pub use mock::{backend_for, GameRegistry};
pub use parse::{parse_answer, ParseError};
pub use probe::{probe_overlap, EmbeddingProber, ProbeError, ProbeOutcome};
pub use prompt::{build_overlap_prompt, build_prompt, build_reformat_prompt};
pub use repair::{parse_or_repair, reformat_answer, Repaired};
