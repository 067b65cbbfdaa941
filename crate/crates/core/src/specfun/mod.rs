//! Special-function kernel: Pochhammer symbols, terminating hypergeometric
//! series, complex log-gamma, inverse Mellin densities and semi-infinite
//! quadrature.

pub mod gamma;
pub mod hypergeometric;
pub mod mellin;
pub mod pochhammer;
pub mod quadrature;

pub use gamma::{gamma, ln_gamma, log_gamma_complex};
pub use hypergeometric::{pfq, SeriesArgument, SeriesValue, TerminatingSeries, TerminationRule};
pub use mellin::{
    inverse_mellin_density, inverse_mellin_estimate, log_mellin_weight, saddle_abscissa, DensityEstimate, MellinDensity, MellinSpec,
};
pub use pochhammer::{binomial, binomial_f64, factorial, int, pochhammer, pochhammer_f64, ratio, Rational};
pub use quadrature::{integrate_semi_infinite, integrate_semi_infinite_with, QuadratureEstimate};
