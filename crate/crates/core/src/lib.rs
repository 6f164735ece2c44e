pub mod algebra;
pub mod cli;
pub mod constructible;
pub mod error;
pub mod json;
pub mod mckay;
pub mod motivic;
pub mod snc;

pub use error::{Error, Result};
