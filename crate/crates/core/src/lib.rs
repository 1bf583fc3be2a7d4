pub mod cli;
pub mod error;
pub mod experiment;
pub mod field;
pub mod io;
pub mod lseries;
pub mod poly;
pub mod qsqrt;
pub mod quadchar;
pub mod real;
pub mod resonator;
pub mod sum;
pub mod verify;

pub use error::{Error, Result};
pub use field::FieldSpec;
pub use poly::Poly;
