//! Small dense matrix functionals and special functions.

mod compound;
mod euler;
mod matrix;
mod mixed;
mod pfaffian;
mod quadrature;
mod skew;
mod special;

pub use compound::{compound_trace, elementary_symmetric};
pub use euler::{binomial, binomial_inverse_by_euler, euler_secant, factorial, RationalMatrix};
pub use matrix::{block_skew_diagonal, standard_j, SkewMatrix, SymMatrix};
pub use mixed::{mixed_discriminant, mixed_discriminant_polarized};
pub use pfaffian::{pfaffian, pfaffian_by_elimination};
pub use quadrature::integrate;
pub use skew::{skew_canonical, SkewCanonical, SkewSpectrum};
pub use special::{ball_volume, beta, beta_continued, gamma, log_beta, ln_gamma};
