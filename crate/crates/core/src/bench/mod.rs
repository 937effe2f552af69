//! Benchmark harness: test functions, node generators, the benchmark runner
//! and the CSV file formats used by the `shepbern` tool.

pub mod functions;
pub mod io;
pub mod nodes;
pub mod runner;

pub use functions::{Polynomial, TestFunction};
pub use io::{load_model, read_report, save_model, write_plot, write_report, NodeFile};
pub use nodes::{generate_nodes, NodeKind};
pub use runner::{default_grid, run_benchmark, BenchParams, ErrorReport, NodeSpec, Operator};
