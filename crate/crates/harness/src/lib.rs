//! Experiment orchestration for the MinAtar baselines: multi-seed runs over
//! power-of-two step-size sweeps, final-100-episode summaries, step-size
//! selection, latency benchmarks and replay tooling.
//!
//! ```
//! use minatar_agents::AgentKind;
//! use minatar_core::GameId;
//! use minatar_harness::{run, summarize_final100, ExperimentSpec, Seeds};
//!
//! let spec = ExperimentSpec {
//!     seeds: Seeds::Count(2),
//!     ..ExperimentSpec::new(GameId::Freeway, AgentKind::Random, 2500)
//! };
//! let records = run(&spec).unwrap();
//! assert!(records.iter().all(|r| r.episodes.len() == 1));
//! let summary = summarize_final100(&records);
//! assert_eq!(summary.rows[0].seeds, 2);
//! ```

pub mod bench;
pub mod output;
pub mod replay;
mod run;
mod spec;
mod stats;

pub use bench::{bench_agent, bench_env, LatencyStats};
pub use replay::{load_replay, record_replay, RecordPolicy};
pub use run::{
    cells, run, run_cell, run_cells, Cell, CellKey, CellStatus, CellTiming, Episode, RunRecord,
};
pub use spec::{parse_alpha_range, ExperimentSpec, OutputPaths, Seeds, SpecError};
pub use stats::{
    final_mean, mean_stderr, select_alpha, summarize_final100, AlphaSummary, Summary, FINAL_WINDOW,
    Z95,
};
