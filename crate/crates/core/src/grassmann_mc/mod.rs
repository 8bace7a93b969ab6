//! Haar sampling on real Grassmannians of `R^{2n}` with its standard
//! symplectic form, and the statistics of Kähler angles.

mod angles;
mod engine;
mod experiments;
mod stats;
mod subspace;

pub use angles::{kahler_angles, KahlerAngles};
pub use engine::{pairwise_reduce, run_batches, stream_rng, BATCH_SIZE};
pub use experiments::{
    adjudicate_moment, moment_closed_form, moment_integral, test_uniform_simplex, MarginalKs, MomentAdjudication,
    MomentCheck, Normalization, UniformSimplexReport,
};
pub use stats::{kolmogorov_survival, ks_p_value, ks_statistic, order_statistic_cdf, McEstimate, RunningMoments};
pub use subspace::{sample_subspace, sigma_omega, symplectic_gram, Subspace};

/// `min(k, n - k)` for a `2k`-plane in `R^{2n}`.
pub fn kappa(n: usize, k: usize) -> usize {
    k.min(n.saturating_sub(k))
}
