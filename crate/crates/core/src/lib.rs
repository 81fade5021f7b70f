pub mod certify;
pub mod cnf;
pub mod dimacs;
pub mod error;
pub mod graph;
pub mod obdd;
pub mod order;
pub mod random;
pub mod sat;
pub mod theta;

pub use error::{Error, Result};
