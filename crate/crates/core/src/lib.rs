#![no_std]

extern crate alloc;

pub mod error;
pub mod connection;
pub mod exponent;
pub mod matching;
pub mod mp;
pub mod ode;
pub mod oracles;
pub mod scattering;
pub mod series;
pub mod spectra;
pub mod wavefunction;

pub use error::{Error, Result};
