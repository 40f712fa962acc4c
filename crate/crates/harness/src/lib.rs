//! Pipeline behind the `wordgroup` command: suite generation, model
//! evaluation, difficulty profiling, report tables and TA calibration.

pub mod calibrate;
pub mod config;
pub mod difficulty;
pub mod evaluate;
pub mod records;
pub mod report;
pub mod suite;

pub use config::Config;
pub use evaluate::{cmd_evaluate, EvalOptions, EvalSummary, SplitSelection};
pub use records::ResultRecord;
pub use report::{build_report, cmd_report, ReportBundle};
