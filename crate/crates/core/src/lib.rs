//! Noncommutative L_p analysis and Fourier analysis on finite quantum groups.

pub mod ergodic;
pub mod error;
pub mod fdalgebra;
pub mod fourier;
pub mod freeprod;
pub mod group;
pub mod improving;
pub mod io;
pub mod linalg;
pub mod qgroup;
pub mod selftest;
pub mod tol;

pub use error::{Error, Result};
