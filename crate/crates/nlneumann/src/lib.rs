//! Solver, convergence harness, reference tables and file formats for the
//! nonlocal Neumann discretization in [`nlneumann_core`].

pub mod config;
pub mod harness;
pub mod reference;
pub mod report;
pub mod solver;
pub mod verify;

pub use nlneumann_core as core;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] nlneumann_core::Error),
    #[error(transparent)]
    Solver(#[from] solver::SolverError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("io error on {path}: {source}")]
    Io { path: std::path::PathBuf, source: std::io::Error },
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
