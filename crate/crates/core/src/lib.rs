//! Number entanglement and related entanglement measures for
//! charge-conserving mixed states.

pub mod analytic;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod freefermion;
pub mod hilbert;
pub mod linalg;
pub mod locc;
pub mod models;
pub mod negativity;
pub mod sampling;

pub use error::{Error, Result};
