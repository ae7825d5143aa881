pub mod error;
pub mod exec;
pub mod galois;
pub mod gallery;
pub mod identify;
pub mod io;
pub mod linalg;
pub mod pair;
pub mod points;
pub mod poly;
pub mod ring;
pub mod validate;

pub use error::{Error, Result};
