//! Exceedance probabilities of the Dirichlet distribution.
//!
//! `φ_j`, the probability that component `j` of a Dirichlet variate is the
//! largest, is computed by one-dimensional integration over a product of
//! gamma CDFs ([`ep_integration`]), by the beta-function closed form for two
//! categories ([`ep_bivariate`]), or by Monte-Carlo sampling
//! ([`ep_sampling`]). The [`bms`] module applies them to random-effects
//! Bayesian model selection.

pub mod bms;
pub mod dirichlet;
pub mod error;
pub mod quadrature;
pub mod special;

pub use dirichlet::{
    agglomerate, counts_from_percentages, dirichlet_mode, ep_auto, ep_bivariate, ep_integrand,
    ep_integration, ep_sampling, posterior_from_counts, sample_dirichlet, sample_gamma, task_rng,
    threshold_probability, AlphaVector, EpMethod, ExceedanceVector, GammaSampler, Partition,
    SamplingConfig,
};
pub use error::{Error, Result};
pub use quadrature::{Estimate, QuadratureConfig, QuadratureError};
