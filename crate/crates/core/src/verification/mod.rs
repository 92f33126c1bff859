//! Independent oracles, instance generation and batch cross-checking.

pub mod check;
pub mod generator;
pub mod oracle;
pub mod suite;

pub use check::{agreed_quantile, cross_check, cross_check_with_grid, CheckReport, NamedCheck};
pub use generator::{generate_instance, InstanceGenConfig};
pub use oracle::{clt_band, grid_oracle_quantile, monte_carlo_quantile, GridOracleConfig};
pub use suite::{run_suite, SuiteOutcome};
