//! Exact Dold-Kan correspondence over the integers.

pub mod algebra;
pub mod chain;
pub mod doldkan;
pub mod enriched;
pub mod error;
pub mod io;
pub mod modules_over;
pub mod random;
pub mod simplicial;
pub mod suite;
pub mod util;

pub use error::{Error, Result};
