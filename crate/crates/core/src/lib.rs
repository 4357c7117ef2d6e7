pub mod asymptotic;
pub mod error;
pub mod exact;
pub mod experiments;
pub mod exppoly;
pub mod montecarlo;
pub mod network;
pub mod quad;
pub mod series;
pub mod special;

pub use error::{Error, Result};
