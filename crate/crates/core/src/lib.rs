pub mod cli;
pub mod config;
pub mod convergence;
pub mod corpus;
pub mod error;
pub mod functionals;
pub mod ideals;
pub mod num;
pub mod sets;
pub mod tauberian;
pub mod verdict;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use ideals::Ideal;
pub use sets::SymbolicSet;
pub use verdict::Verdict;
