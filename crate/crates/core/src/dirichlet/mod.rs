//! Dirichlet-level operations: exceedance probabilities by closed form,
//! numerical integration and sampling; agglomeration; posterior updates.

mod alpha;
mod exceedance;
mod posterior;
mod sampling;

pub use alpha::{AlphaVector, Partition};
pub use exceedance::{
    ep_auto, ep_bivariate, ep_integrand, ep_integration, threshold_probability, EpMethod,
    ExceedanceVector,
};
pub use posterior::{agglomerate, counts_from_percentages, dirichlet_mode, posterior_from_counts};
pub use sampling::{
    ep_sampling, sample_dirichlet, sample_gamma, task_rng, GammaSampler, SamplingConfig,
};
