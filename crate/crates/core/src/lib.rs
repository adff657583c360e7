//! Entanglement measures for multi-qudit states and numerical checks of
//! concurrence/negativity monogamy relations.
//!
//! The crate is `no_std` (it needs `alloc`). Enable the `parallel` feature to
//! run convex-roof restarts on the rayon pool; results do not depend on the
//! schedule.
//!
//! Layout:
//! - [`tensor`]: dense complex matrices, pure and mixed states, partial
//!   trace/transpose, Schmidt coefficients, Hermitian eigensolver.
//! - [`states`]: GHZ, W, antisymmetric, W-class and the saturating families,
//!   plus seeded random states.
//! - [`measures`]: concurrence, negativity, linear entropy and the convex-roof
//!   engine (CREN, CRENOA, concurrence of assistance).
//! - [`monogamy`]: inequality checkers with certified verdicts and the
//!   closed-form example suites.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

mod error;
pub mod measures;
pub mod monogamy;
pub mod states;
pub mod tensor;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Numerical tolerances shared across modules.
pub mod tol {
    /// Structural invariants: normalization, Hermiticity, trace.
    pub const STRUCTURAL: f64 = 1e-10;
    /// Spectral routines: eigen reconstruction, decomposition residuals.
    pub const SPECTRAL: f64 = 1e-8;
    /// Eigenvalues in `[-EIGEN_CLIP, 0)` are treated as zero.
    pub const EIGEN_CLIP: f64 = 1e-9;
    /// Input amplitudes off-norm by at most this much are renormalized.
    pub const RENORMALIZE: f64 = 1e-6;
    /// Eigenvalues at or below this are outside the support of a density matrix.
    pub const RANK: f64 = 1e-12;
}

/// Float functions that `core` does not provide without `std`.
pub(crate) mod math {
    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        num_traits::Float::sqrt(x)
    }

    #[inline]
    pub fn sin_cos(x: f64) -> (f64, f64) {
        num_traits::Float::sin_cos(x)
    }
}
