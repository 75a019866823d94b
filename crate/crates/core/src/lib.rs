pub mod error;
pub mod info;
pub mod io;
mod linalg;
pub mod netinfer;
pub mod physio;
pub mod seed;
pub mod significance;
pub mod simgen;
pub mod var;

pub use error::{Error, Result};
