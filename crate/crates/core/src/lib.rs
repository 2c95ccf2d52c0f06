pub mod error;
pub mod qfield;
pub mod cyclo;
pub mod geometry;
pub mod quasicrystal;
pub mod density;
pub mod gaps;
pub mod cli;
