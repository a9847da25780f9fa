pub mod bases;
pub mod cli;
pub mod convergence;
pub mod domains;
pub mod error;
pub mod measures;
pub mod quadrature;
pub mod specfun;
pub mod sum;

pub use error::{Error, Result};
