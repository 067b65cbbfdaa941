//! Generalized su(2) coherent states `|z⟩_r` on a Landau level.
//!
//! The level-`n` subspace `H_n` is spanned by `e_k = |n-k, -n+2k⟩`, which in
//! two-mode occupation numbers is `(n_a, n_b) = (n-k, k)`. The crate builds
//! the states, their overlaps and the radial measure resolving the identity on
//! `H_n`, and evaluates the photon-statistics and squeezing observables along
//! two independent routes: hypergeometric closed forms and a brute-force
//! two-mode Fock-space oracle.

pub mod error;
pub mod fock;
pub mod measure;
pub mod observables;
pub mod specfun;
pub mod states;

pub use error::{Error, Result};
