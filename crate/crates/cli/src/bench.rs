//! Integration versus sampling timing on a reproducible synthetic batch.

use std::time::Instant;

use direp_core::{ep_integration, ep_sampling, task_rng, AlphaVector, GammaSampler, SamplingConfig};
use serde::Serialize;

use crate::args::{BenchArgs, Format};
use crate::report;
use crate::CliError;

/// Subjects behind each synthetic posterior; the gamma perturbations of one
/// alpha vector add up to this on average.
const SYNTHETIC_SUBJECTS: f64 = 22.0;

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub k: usize,
    pub batch_size: usize,
    pub integration_seconds: f64,
    pub sampling_seconds: f64,
    pub samples: usize,
    /// `sampling_seconds / integration_seconds`
    pub ratio: f64,
    pub max_abs_discrepancy: f64,
}

/// `α_j = 1 + g_j` with `g_j ~ Gamma(1, 1) · N / k`, mimicking posteriors
/// from a VB estimate over `N` subjects.
pub fn synthetic_alphas(k: usize, batch: usize, seed: u64) -> Vec<AlphaVector> {
    // stream 0 is reserved for alpha generation; sampling uses 1..=batch
    let mut rng = task_rng(seed, 0);
    let g = GammaSampler::new(1.0).expect("unit shape is valid");
    let scale = SYNTHETIC_SUBJECTS / k as f64;
    (0..batch)
        .map(|_| {
            let v = (0..k).map(|_| 1.0 + scale * g.sample(&mut rng)).collect();
            AlphaVector::new(v).expect("components exceed 1")
        })
        .collect()
}

pub fn run_bench(k: usize, batch: usize, samples: usize, seed: u64, quad: &direp_core::QuadratureConfig) -> Result<BenchReport, CliError> {
    if k < 3 {
        return Err(CliError::Input(format!(
            "--k must be at least 3 (k = 2 has a closed form), got {k}"
        )));
    }
    if batch == 0 || samples == 0 {
        return Err(CliError::Input("--batch and --samples must be positive".into()));
    }
    let alphas = synthetic_alphas(k, batch, seed);

    let start = Instant::now();
    let integrated = alphas
        .iter()
        .enumerate()
        .map(|(i, a)| ep_integration(a, quad).map_err(|e| CliError::from_core(e, &format!("alpha {}", i + 1))))
        .collect::<Result<Vec<_>, _>>()?;
    let integration_seconds = start.elapsed().as_secs_f64();

    let base = SamplingConfig::new(samples, seed);
    let start = Instant::now();
    let sampled = alphas
        .iter()
        .enumerate()
        .map(|(i, a)| {
            ep_sampling(a, &base.for_task(i as u64 + 1))
                .map_err(|e| CliError::from_core(e, &format!("alpha {}", i + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let sampling_seconds = start.elapsed().as_secs_f64();

    let max_abs_discrepancy = integrated
        .iter()
        .zip(&sampled)
        .flat_map(|(x, y)| x.phi.iter().zip(&y.phi).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max);

    Ok(BenchReport {
        k,
        batch_size: batch,
        integration_seconds,
        sampling_seconds,
        samples,
        ratio: sampling_seconds / integration_seconds,
        max_abs_discrepancy,
    })
}

pub fn render(rep: &BenchReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rep).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => format!(
            "k,batch_size,integration_seconds,sampling_seconds,samples,ratio,max_abs_discrepancy\n\
             {},{},{:.6},{:.6},{},{:.6},{}\n",
            rep.k,
            rep.batch_size,
            rep.integration_seconds,
            rep.sampling_seconds,
            rep.samples,
            rep.ratio,
            report::diag(rep.max_abs_discrepancy)
        ),
    }
}

pub fn cmd_bench(args: &BenchArgs) -> Result<String, CliError> {
    let quad = args.common.quadrature();
    quad.validate().map_err(|e| CliError::Input(e.to_string()))?;
    let rep = run_bench(args.k, args.batch, args.samples, args.seed, &quad)?;
    Ok(render(&rep, args.common.format))
}
