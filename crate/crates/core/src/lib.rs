pub mod bath;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod gaussian;
pub mod linalg;
pub mod liouvillian;
pub mod measures;
pub mod runner;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{DensityMatrix, OperatorMatrix};
