pub mod algebra;
pub mod bialg;
pub mod classify;
pub mod error;
pub mod exact;
pub mod jordan;
pub mod pencil;

pub use error::{Error, Result};
