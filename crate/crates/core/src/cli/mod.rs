//! Command-line front end: expression language, context configuration,
//! verification harness and multiplication benchmark.

pub mod app;
pub mod bench;
pub mod config;
pub mod eval;
pub mod parse;
pub mod verify;

pub use bench::{run_bench, BenchConfig, BenchReport, BenchRow};
pub use config::{build_context, parse_field, parse_sigma};
pub use eval::{eval, eval_str};
pub use parse::{parse_expr, Expr, Symbol};
pub use verify::{run_verify, PropertyResult, PropertyStatus, VerificationReport, VerifyConfig};
