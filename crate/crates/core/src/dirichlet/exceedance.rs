//! Exceedance probabilities `φ_j = P(r_j > r_i for all i ≠ j)` for
//! `r ~ Dir(α)`.
//!
//! With `r_j = q_j / Σ q_i` and independent `q_i ~ Gamma(α_i, 1)`,
//!
//! ```text
//! φ_j = ∫_0^∞ [ Π_{i≠j} P(α_i, q) ] · q^(α_j - 1) e^-q / Γ(α_j) dq
//! ```
//!
//! where `P` is the regularized lower incomplete gamma function. For `k = 2`
//! the integral reduces to a regularized incomplete beta function.

use std::fmt;

use super::alpha::AlphaVector;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_semi_infinite, QuadratureConfig};
use crate::special::{ln_gamma, reg_inc_beta, reg_lower_inc_gamma};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpMethod {
    ClosedForm,
    Integration,
    Sampling,
}

impl EpMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            EpMethod::ClosedForm => "closed_form",
            EpMethod::Integration => "integration",
            EpMethod::Sampling => "sampling",
        }
    }
}

impl fmt::Display for EpMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Exceedance probabilities with per-entry diagnostics.
///
/// `diagnostics[j]` is the quadrature error estimate for integration, the
/// binomial standard error for sampling, and zero for the closed form.
/// Integration results are not renormalized; see [`sum_deviation`](Self::sum_deviation).
#[derive(Debug, Clone, PartialEq)]
pub struct ExceedanceVector {
    pub phi: Vec<f64>,
    pub method: EpMethod,
    pub diagnostics: Vec<f64>,
}

impl ExceedanceVector {
    pub fn k(&self) -> usize {
        self.phi.len()
    }

    /// `Σ φ_j - 1`.
    pub fn sum_deviation(&self) -> f64 {
        self.phi.iter().sum::<f64>() - 1.0
    }
}

/// Closed form for two categories: `φ_1 = 1 - I_{1/2}(α_1, α_2)`.
pub fn ep_bivariate(alpha: &AlphaVector) -> Result<ExceedanceVector> {
    if alpha.k() != 2 {
        return Err(Error::Contract(format!(
            "closed-form exceedance needs k = 2, got k = {}",
            alpha.k()
        )));
    }
    let phi1 = 1.0 - reg_inc_beta(0.5, alpha[0], alpha[1])?;
    Ok(ExceedanceVector {
        phi: vec![phi1, 1.0 - phi1],
        method: EpMethod::ClosedForm,
        diagnostics: vec![0.0, 0.0],
    })
}

/// Integrand of the exceedance integral for category `j`: the Gamma(α_j, 1)
/// density at `q` times the product of Gamma CDFs of all other categories.
///
/// The density is assembled in log space; the CDF product is accumulated in
/// linear space where each factor lies in `[0, 1]`.
pub fn ep_integrand(q: f64, alpha_j: f64, alpha_others: &[f64]) -> Result<f64> {
    if !(q >= 0.0) {
        return Err(Error::domain("ep_integrand", format!("q = {q}, need q >= 0")));
    }
    if !(alpha_j > 0.0) || !alpha_j.is_finite() {
        return Err(Error::domain("ep_integrand", format!("alpha_j = {alpha_j}")));
    }
    let ln_norm = ln_gamma(alpha_j)?;
    integrand_with_norm(q, alpha_j, ln_norm, alpha_others)
}

fn integrand_with_norm(q: f64, alpha_j: f64, ln_norm: f64, alpha_others: &[f64]) -> Result<f64> {
    if q == 0.0 {
        // every P(α_i, 0) vanishes
        if !alpha_others.is_empty() {
            return Ok(0.0);
        }
        return Ok(if alpha_j > 1.0 {
            0.0
        } else if alpha_j == 1.0 {
            1.0
        } else {
            f64::INFINITY
        });
    }
    if q.is_infinite() {
        return Ok(0.0);
    }
    let ln_density = (alpha_j - 1.0) * q.ln() - q - ln_norm;
    if ln_density < -745.2 {
        return Ok(0.0);
    }
    let mut prod = 1.0;
    for &a in alpha_others {
        prod *= reg_lower_inc_gamma(a, q)?;
        if prod == 0.0 {
            return Ok(0.0);
        }
    }
    Ok(prod * ln_density.exp())
}

/// Exceedance probabilities by numerical integration, valid for any `k >= 2`.
///
/// Each integral is split at `q = α_j` into a finite part and a semi-infinite
/// tail.
pub fn ep_integration(alpha: &AlphaVector, cfg: &QuadratureConfig) -> Result<ExceedanceVector> {
    let k = alpha.k();
    if k < 2 {
        return Err(Error::Contract(format!(
            "integration needs k >= 2, got k = {k}"
        )));
    }
    let mut phi = Vec::with_capacity(k);
    let mut diagnostics = Vec::with_capacity(k);
    let mut others = Vec::with_capacity(k - 1);
    for j in 0..k {
        others.clear();
        others.extend(alpha.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &a)| a));
        let (value, error) = integrate_component(alpha[j], &others, cfg)
            .map_err(|e| match e {
                ComponentError::Quadrature(source) => Error::Integration { component: j, source },
                ComponentError::Special(e) => e,
            })?;
        phi.push(value);
        diagnostics.push(error);
    }
    Ok(ExceedanceVector {
        phi,
        method: EpMethod::Integration,
        diagnostics,
    })
}

enum ComponentError {
    Quadrature(crate::quadrature::QuadratureError),
    Special(Error),
}

fn integrate_component(
    alpha_j: f64,
    others: &[f64],
    cfg: &QuadratureConfig,
) -> std::result::Result<(f64, f64), ComponentError> {
    let ln_norm = ln_gamma(alpha_j).map_err(ComponentError::Special)?;
    // the quadrature callback cannot return errors; park the first one here
    let mut failure: Option<Error> = None;
    let mut f = |q: f64| match integrand_with_norm(q, alpha_j, ln_norm, others) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            f64::NAN
        }
    };
    let head = integrate(&mut f, 0.0, alpha_j, cfg);
    let tail = head
        .as_ref()
        .ok()
        .map(|_| integrate_semi_infinite(&mut f, alpha_j, cfg));
    if let Some(e) = failure {
        return Err(ComponentError::Special(e));
    }
    let head = head.map_err(ComponentError::Quadrature)?;
    let tail = tail
        .expect("tail is evaluated whenever head succeeds")
        .map_err(ComponentError::Quadrature)?;
    Ok((head.value + tail.value, head.error + tail.error))
}

/// `[1]` for one category, the closed form for two, integration otherwise.
pub fn ep_auto(alpha: &AlphaVector, cfg: &QuadratureConfig) -> Result<ExceedanceVector> {
    match alpha.k() {
        1 => Ok(ExceedanceVector {
            phi: vec![1.0],
            method: EpMethod::ClosedForm,
            diagnostics: vec![0.0],
        }),
        2 => ep_bivariate(alpha),
        _ => ep_integration(alpha, cfg),
    }
}

/// `P(r_j > t)` from the Beta(α_j, α_s - α_j) marginal of `r_j`. `j` is 0-based.
pub fn threshold_probability(alpha: &AlphaVector, j: usize, t: f64) -> Result<f64> {
    let k = alpha.k();
    if k < 2 {
        return Err(Error::Contract(format!("threshold probability needs k >= 2, got {k}")));
    }
    if j >= k {
        return Err(Error::Contract(format!(
            "category index {} out of range 1..={k}",
            j + 1
        )));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain("threshold_probability", format!("t = {t}, need 0 <= t <= 1")));
    }
    let rest = alpha.sum() - alpha[j];
    Ok(1.0 - reg_inc_beta(t, alpha[j], rest)?)
}
