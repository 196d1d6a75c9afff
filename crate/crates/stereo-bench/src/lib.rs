//! Stereo correspondence toolkit and benchmark harness.
//!
//! Six disparity-estimation strategies (block matching, block matching with
//! per-row dynamic programming, grid belief propagation, gradient-feature
//! matching, HOG descriptor matching, and a fixed-window aggregated cost)
//! over three matching costs (SAD, MSE, NCC), plus ingestion for
//! Middlebury-style datasets and a correlation-based scoring harness.
//!
//! The pipeline mirrors the `stereo-bench` binary: discover scenes, convert
//! to grayscale doubles, downscale, estimate disparity per configured
//! (method, cost) combination, then score against ground truth.
//!
//! ```no_run
//! use stereo_bench::bench::{run_benchmark, RunConfig};
//!
//! let mut cfg = RunConfig::default();
//! cfg.dataset_root = "data/middlebury2014".into();
//! cfg.output_dir = "out".into();
//! let report = run_benchmark(&cfg)?;
//! println!("{}", report.summary_text);
//! # Ok::<(), stereo_bench::Error>(())
//! ```

pub mod bench;
pub mod cost;
mod error;
pub mod eval;
pub mod imaging;
pub mod ingest;
pub mod matching;

pub use error::{Error, Result};
