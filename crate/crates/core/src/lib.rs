//! Exact stability computations for log Fano pairs on weighted projective planes.

pub mod azflag;
pub mod cli;
pub mod error;
pub mod exactalg;
pub mod kclass;
pub mod lct;
pub mod vgit;
pub mod wps;

pub use error::{Error, Result};
pub use exactalg::Rat;
