//! Numerical tolerances.
//!
//! Algebraic identities (products, traces, unitality) are compared at
//! [`Tolerances::algebraic`]; spectral quantities (eigenvalues, singular
//! values, operator norms) at [`Tolerances::spectral`].

use serde::{Deserialize, Serialize};

pub const ALGEBRAIC: f64 = 1e-10;
pub const SPECTRAL: f64 = 1e-8;
/// Eigenvalues of `x*x` above this negative value are clamped to zero.
pub const CLAMP: f64 = 1e-12;
/// Rank decisions for null spaces and kernel intersections.
pub const RANK: f64 = 1e-10;

/// Environment variable that overrides the default algebraic tolerance.
pub const TOL_ENV: &str = "QGLP_TOL";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub algebraic: f64,
    pub spectral: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            algebraic: ALGEBRAIC,
            spectral: SPECTRAL,
        }
    }
}

impl Tolerances {
    /// Defaults, with the algebraic tolerance taken from `QGLP_TOL` when set.
    pub fn from_env() -> Self {
        let mut t = Tolerances::default();
        if let Some(v) = std::env::var(TOL_ENV).ok().and_then(|s| s.parse::<f64>().ok()) {
            if v > 0.0 {
                t.algebraic = v;
            }
        }
        t
    }
}
