//! Gamma and Dirichlet sampling, and the Monte-Carlo exceedance estimator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Open01, StandardNormal};

use super::alpha::AlphaVector;
use super::exceedance::{EpMethod, ExceedanceVector};
use crate::error::{Error, Result};

/// Attempts before an all-zero gamma draw is reported as an error.
const MAX_UNDERFLOW_RETRIES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplingConfig {
    pub samples: usize,
    pub seed: u64,
    /// ChaCha stream; batch jobs use the task index so that every task gets
    /// an independent, scheduling-free generator.
    pub stream: u64,
}

impl SamplingConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            stream: 0,
        }
    }

    pub fn for_task(self, task: u64) -> Self {
        Self {
            stream: task,
            ..self
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        task_rng(self.seed, self.stream)
    }
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self::new(1_000_000, 0)
    }
}

/// Generator for task `task` under master seed `seed`.
pub fn task_rng(seed: u64, task: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}

/// Gamma(shape, 1) sampler.
///
/// Marsaglia–Tsang squeeze/rejection for `shape >= 1`; for `shape < 1` a
/// Gamma(shape + 1) draw is scaled by `U^(1/shape)`.
#[derive(Debug, Clone, Copy)]
pub struct GammaSampler {
    d: f64,
    c: f64,
    inv_shape: Option<f64>,
}

impl GammaSampler {
    pub fn new(shape: f64) -> Result<Self> {
        if !(shape > 0.0) || !shape.is_finite() {
            return Err(Error::domain("sample_gamma", format!("shape = {shape}, need shape > 0")));
        }
        let (base, inv_shape) = if shape < 1.0 {
            (shape + 1.0, Some(1.0 / shape))
        } else {
            (shape, None)
        };
        let d = base - 1.0 / 3.0;
        Ok(Self {
            d,
            c: 1.0 / (9.0 * d).sqrt(),
            inv_shape,
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let g = self.marsaglia_tsang(rng);
        match self.inv_shape {
            Some(inv) => {
                let u: f64 = rng.sample(Open01);
                g * u.powf(inv)
            }
            None => g,
        }
    }

    fn marsaglia_tsang<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let x: f64 = rng.sample(StandardNormal);
            let v = 1.0 + self.c * x;
            if v <= 0.0 {
                continue;
            }
            let v = v * v * v;
            let u: f64 = rng.sample(Open01);
            let x2 = x * x;
            if u < 1.0 - 0.0331 * x2 * x2 {
                return self.d * v;
            }
            if u.ln() < 0.5 * x2 + self.d * (1.0 - v + v.ln()) {
                return self.d * v;
            }
        }
    }
}

/// One draw from Gamma(shape, 1).
pub fn sample_gamma<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> Result<f64> {
    Ok(GammaSampler::new(shape)?.sample(rng))
}

fn gamma_samplers(alpha: &AlphaVector) -> Vec<GammaSampler> {
    alpha
        .iter()
        .map(|&a| GammaSampler::new(a).expect("AlphaVector components are positive"))
        .collect()
}

/// Fill `out` with independent gamma draws, redrawing when every draw underflowed.
fn draw_gammas<R: Rng + ?Sized>(
    samplers: &[GammaSampler],
    rng: &mut R,
    out: &mut [f64],
) -> Result<f64> {
    for _ in 0..MAX_UNDERFLOW_RETRIES {
        let mut total = 0.0;
        for (slot, s) in out.iter_mut().zip(samplers) {
            *slot = s.sample(rng);
            total += *slot;
        }
        if total > 0.0 {
            return Ok(total);
        }
    }
    Err(Error::SamplingUnderflow {
        attempts: MAX_UNDERFLOW_RETRIES,
    })
}

/// One point on the simplex drawn from Dir(α) by normalizing gamma draws.
pub fn sample_dirichlet<R: Rng + ?Sized>(alpha: &AlphaVector, rng: &mut R) -> Result<Vec<f64>> {
    let samplers = gamma_samplers(alpha);
    let mut q = vec![0.0; alpha.k()];
    let total = draw_gammas(&samplers, rng, &mut q)?;
    q.iter_mut().for_each(|v| *v /= total);
    Ok(q)
}

/// Index of the strict maximum; ties go to the lowest index.
pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Monte-Carlo exceedance probabilities: the frequency with which each
/// category is the largest over `cfg.samples` Dirichlet draws.
///
/// Normalizing by the gamma total does not change the argmax, so the
/// comparison runs on the raw gamma draws.
pub fn ep_sampling(alpha: &AlphaVector, cfg: &SamplingConfig) -> Result<ExceedanceVector> {
    let k = alpha.k();
    if k < 2 {
        return Err(Error::Contract(format!("sampling needs k >= 2, got k = {k}")));
    }
    if cfg.samples == 0 {
        return Err(Error::Contract("sample count must be at least 1".into()));
    }
    let mut rng = cfg.rng();
    let samplers = gamma_samplers(alpha);
    let mut q = vec![0.0; k];
    let mut counts = vec![0u64; k];
    for _ in 0..cfg.samples {
        draw_gammas(&samplers, &mut rng, &mut q)?;
        counts[argmax(&q)] += 1;
    }
    let s = cfg.samples as f64;
    let phi: Vec<f64> = counts.iter().map(|&c| c as f64 / s).collect();
    let diagnostics = phi.iter().map(|&p| (p * (1.0 - p) / s).sqrt()).collect();
    Ok(ExceedanceVector {
        phi,
        method: EpMethod::Sampling,
        diagnostics,
    })
}
