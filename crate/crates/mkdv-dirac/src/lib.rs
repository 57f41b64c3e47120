//! Soliton and elliptic electrostatic potentials for graphene, with
//! numerically verified zero-energy Dirac bound states.
//!
//! The crate builds one-dimensional potentials V(x) from solutions of the
//! mKdV and combined KdV–mKdV equations (solitons, the N-soliton determinant
//! formula, periodic elliptic waves), independently checks by finite
//! differences that each profile solves its governing equation, and then
//! confirms by shooting or monodromy analysis that the zero-energy Dirac
//! system
//!
//! ```text
//!   (V - ε) ψ_A - i (ψ_B' + k_y ψ_B) = 0
//!   (V - ε) ψ_B - i (ψ_A' - k_y ψ_A) = 0,      ε = 0, ħ = v_F = 1,
//! ```
//!
//! binds states at the momenta k_y each construction predicts.
//!
//! Numbered runnable examples live in `examples/`; the `mkdv-dirac` binary is
//! a thin CLI over [`cli::run`].

pub mod cli;
pub mod dirac;
pub mod elliptic;
pub mod error;
mod linalg;
pub mod potentials;
pub mod svg;
pub mod verify;

pub use error::{Error, Result};
pub use potentials::{
    combined_one_soliton, n_soliton, one_soliton, periodic_cn, periodic_one_gap, two_soliton,
    CombinedParams, Family, NSolitonParams, PeriodicCnParams, PeriodicOneGapParams, PotentialSpec,
    TwoSolitonParams,
};
