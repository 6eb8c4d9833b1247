//! Study runner behind the `san-avail` command: study specs, grid execution
//! on either backend, and CSV output.

mod output;
mod run;
mod spec;

use thiserror::Error;

pub use output::{sci, write_atomic, write_csv, write_long_csv};
pub use run::{run_study, solve, ResultRow, RunOptions};
pub use spec::{Backend, Engine, StudySpec};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Catalog(#[from] san_avail::catalog::CatalogError),
    #[error(transparent)]
    Sim(#[from] san_avail::sim::SimError),
    #[error("invalid study spec: {0}")]
    Spec(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl RunError {
    /// Whether the error lies in what was asked for rather than in a model.
    pub fn is_usage(&self) -> bool {
        use san_avail::catalog::CatalogError as C;
        match self {
            RunError::Catalog(C::San(_)) => false,
            RunError::Catalog(_) | RunError::Sim(_) | RunError::Spec(_) => true,
            RunError::Io { .. } | RunError::Csv(_) => false,
        }
    }
}
