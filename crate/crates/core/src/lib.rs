pub mod cli;
pub mod config;
pub mod error;
pub mod exactnum;
pub mod io;
pub mod lawrence;
pub mod projgeom;
pub mod surface;

pub use error::{Error, Result};
