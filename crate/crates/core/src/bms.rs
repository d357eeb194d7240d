//! Random-effects Bayesian model selection.
//!
//! Given log model evidences `lme[i][j] = log p(y_i | m_j)` for `N` subjects
//! and `M` models, the variational fixed point
//!
//! ```text
//! u_ij = exp(lme_ij + ψ(α_j) - ψ(Σ α))
//! β_j  = Σ_i u_ij / Σ_j' u_ij'
//! α    = α_0 + β
//! ```
//!
//! yields a Dirichlet posterior over model frequencies.
//!
//! Evidences of realistic magnitude overflow the literal exponential, so each
//! row is shifted by its maximum before exponentiating. The normalized
//! responsibilities are invariant to per-row constants, so the shift is exact.

use crate::dirichlet::{agglomerate, ep_auto, AlphaVector, ExceedanceVector, Partition};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureConfig;
use crate::special::digamma;

/// Row-major `N × M` matrix of finite log model evidences, `M >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogEvidenceMatrix {
    subjects: usize,
    models: usize,
    data: Vec<f64>,
}

impl LogEvidenceMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let subjects = rows.len();
        if subjects == 0 {
            return Err(Error::Contract("log-evidence matrix has no rows".into()));
        }
        let models = rows[0].len();
        if models < 2 {
            return Err(Error::Contract(format!(
                "log-evidence matrix needs at least 2 models, got {models}"
            )));
        }
        let mut data = Vec::with_capacity(subjects * models);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != models {
                return Err(Error::Contract(format!(
                    "row {} has {} entries, expected {models}",
                    i + 1,
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::Contract(format!(
                    "row {}, column {} is not finite",
                    i + 1,
                    j + 1
                )));
            }
            data.extend(row);
        }
        Ok(Self {
            subjects,
            models,
            data,
        })
    }

    pub fn subjects(&self) -> usize {
        self.subjects
    }

    pub fn models(&self) -> usize {
        self.models
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.models..(i + 1) * self.models]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.models)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VbConfig {
    /// Stop once the max-norm change of α falls below this.
    pub tol: f64,
    pub max_iter: usize,
    /// Used for the exceedance probabilities of the posterior.
    pub quadrature: QuadratureConfig,
}

impl Default for VbConfig {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iter: 1000,
            quadrature: QuadratureConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BmsResult {
    pub alpha_post: AlphaVector,
    /// Posterior expected model frequencies `α_j / α_s`.
    pub expected_freq: Vec<f64>,
    pub exceedance: ExceedanceVector,
    pub iterations: usize,
    pub converged: bool,
}

fn check_lengths(lme: &LogEvidenceMatrix, alpha: &AlphaVector, alpha0: &AlphaVector) -> Result<()> {
    let m = lme.models();
    if alpha.k() != m || alpha0.k() != m {
        return Err(Error::Contract(format!(
            "matrix has {m} models but alpha has {} and alpha0 has {} components",
            alpha.k(),
            alpha0.k()
        )));
    }
    Ok(())
}

/// One sweep of the variational fixed point.
pub fn vb_step(lme: &LogEvidenceMatrix, alpha: &AlphaVector, alpha0: &AlphaVector) -> Result<AlphaVector> {
    check_lengths(lme, alpha, alpha0)?;
    let m = lme.models();
    let psi_sum = digamma(alpha.sum())?;
    let log_prior = alpha
        .iter()
        .map(|&a| Ok(digamma(a)? - psi_sum))
        .collect::<Result<Vec<f64>>>()?;

    let mut beta = vec![0.0; m];
    let mut u = vec![0.0; m];
    for row in lme.rows() {
        for ((u, &l), &p) in u.iter_mut().zip(row).zip(&log_prior) {
            *u = l + p;
        }
        let max = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut total = 0.0;
        for v in u.iter_mut() {
            *v = (*v - max).exp();
            total += *v;
        }
        for (b, v) in beta.iter_mut().zip(&u) {
            *b += v / total;
        }
    }
    AlphaVector::new(alpha0.iter().zip(&beta).map(|(a, b)| a + b).collect())
}

/// Iterate [`vb_step`] from `α = α_0` until the max-norm change drops below
/// `cfg.tol` or `cfg.max_iter` sweeps have run. Hitting the sweep cap is not
/// an error; the result carries `converged = false`.
pub fn vb_estimate(lme: &LogEvidenceMatrix, alpha0: &AlphaVector, cfg: &VbConfig) -> Result<BmsResult> {
    if !(cfg.tol > 0.0) {
        return Err(Error::Contract(format!("tolerance must be positive, got {}", cfg.tol)));
    }
    if cfg.max_iter == 0 {
        return Err(Error::Contract("max_iter must be at least 1".into()));
    }
    check_lengths(lme, alpha0, alpha0)?;

    let mut alpha = alpha0.clone();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iter {
        let next = vb_step(lme, &alpha, alpha0)?;
        iterations += 1;
        let change = next
            .iter()
            .zip(alpha.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        alpha = next;
        if change < cfg.tol {
            converged = true;
            break;
        }
    }

    let exceedance = ep_auto(&alpha, &cfg.quadrature)?;
    Ok(BmsResult {
        expected_freq: alpha.expected(),
        alpha_post: alpha,
        exceedance,
        iterations,
        converged,
    })
}

/// Exceedance probabilities of model families: the posterior is agglomerated
/// over `part` before computing EPs.
pub fn family_ep(result: &BmsResult, part: &Partition, quad: &QuadratureConfig) -> Result<ExceedanceVector> {
    ep_auto(&agglomerate(&result.alpha_post, part)?, quad)
}
