use direp_core::bms::{family_ep, vb_estimate, LogEvidenceMatrix, VbConfig};
use direp_core::{
    agglomerate, counts_from_percentages, ep_auto, ep_integration, ep_sampling,
    posterior_from_counts, AlphaVector, ExceedanceVector, QuadratureConfig, SamplingConfig,
};
use rayon::prelude::*;

use crate::args::{AgglomArgs, BmsArgs, EpArgs, Method, PollArgs};
use crate::parse::{parse_alpha, parse_groups, parse_numbers, read_alpha_file, read_lme_file};
use crate::report::{self, AgglomRecord, BmsRecord, EpRecord, PollRecord};
use crate::CliError;

fn exceedance(
    alpha: &AlphaVector,
    method: Method,
    quad: &QuadratureConfig,
    sampling: Option<SamplingConfig>,
) -> direp_core::Result<ExceedanceVector> {
    match method {
        Method::Auto => ep_auto(alpha, quad),
        Method::Integration => ep_integration(alpha, quad),
        Method::Sampling => ep_sampling(alpha, &sampling.expect("seed checked before dispatch")),
    }
}

/// Rows run in parallel; sampling row `i` (0-based) draws from stream `i`
/// of the master seed, so output does not depend on scheduling.
pub fn cmd_ep(args: &EpArgs) -> Result<String, CliError> {
    let (rows, single) = match (&args.alpha, &args.input) {
        (Some(text), _) => (vec![parse_alpha(text)?], true),
        (None, Some(path)) => (read_alpha_file(path)?, false),
        (None, None) => return Err(CliError::Input("one of --alpha or --input is required".into())),
    };
    let sampling = match (args.method, args.seed) {
        (Method::Sampling, None) => {
            return Err(CliError::Input("--seed is required with --method sampling".into()))
        }
        (Method::Sampling, Some(seed)) => Some(SamplingConfig::new(args.samples, seed)),
        _ => None,
    };
    let quad = args.common.quadrature();
    quad.validate().map_err(|e| CliError::Input(e.to_string()))?;

    let results: Vec<_> = rows
        .par_iter()
        .enumerate()
        .map(|(i, alpha)| {
            let cfg = sampling.map(|s| s.for_task(i as u64));
            exceedance(alpha, args.method, &quad, cfg)
        })
        .collect();

    let mut records = Vec::with_capacity(rows.len());
    for (i, (alpha, res)) in rows.iter().zip(results).enumerate() {
        let ep = res.map_err(|e| CliError::from_core(e, &format!("row {}", i + 1)))?;
        records.push(EpRecord::new(i + 1, alpha, &ep));
    }
    Ok(report::render_ep(&records, single, args.common.format))
}

pub fn cmd_agglom(args: &AgglomArgs) -> Result<String, CliError> {
    let alpha = parse_alpha(&args.alpha)?;
    let part = parse_groups(&args.groups, alpha.k())?;
    let quad = args.common.quadrature();
    let merged = agglomerate(&alpha, &part).map_err(|e| CliError::from_core(e, ""))?;
    let ep = ep_auto(&merged, &quad).map_err(|e| CliError::from_core(e, ""))?;
    Ok(report::render_agglom(
        &AgglomRecord::new(&part, &merged, &ep),
        args.common.format,
    ))
}

const PERCENT_SLACK: f64 = 0.5;

pub fn cmd_poll(args: &PollArgs) -> Result<String, CliError> {
    let percent = parse_numbers(&args.percent, "percent")?;
    if !(args.n >= 0.0) || !args.n.is_finite() {
        return Err(CliError::Input(format!("--n must be a nonnegative number, got {}", args.n)));
    }
    let total: f64 = percent.iter().sum();
    if (total - 100.0).abs() > PERCENT_SLACK {
        eprintln!("warning: percentages sum to {total}, not 100");
    }
    let prior = match &args.prior {
        Some(text) => parse_alpha(text)?,
        None => AlphaVector::uniform(percent.len()).map_err(|e| CliError::from_core(e, ""))?,
    };
    let counts = counts_from_percentages(&percent, args.n);
    let post = posterior_from_counts(&prior, &counts, args.round)
        .map_err(|e| CliError::from_core(e, "posterior"))?;
    let ep = ep_auto(&post, &args.common.quadrature()).map_err(|e| CliError::from_core(e, ""))?;
    let rec = PollRecord {
        alpha: post.to_vec(),
        method: ep.method.as_str(),
        sum_deviation: ep.sum_deviation(),
        phi: ep.phi,
        error: ep.diagnostics,
    };
    Ok(report::render_poll(&rec, args.common.format))
}

pub fn cmd_bms(args: &BmsArgs) -> Result<String, CliError> {
    let matrices = read_lme_file(&args.lme)?
        .into_iter()
        .enumerate()
        .map(|(i, rows)| {
            LogEvidenceMatrix::from_rows(rows)
                .map_err(|e| CliError::from_core(e, &format!("matrix {}", i + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let cfg = VbConfig {
        tol: args.tol,
        max_iter: args.max_iter,
        quadrature: args.common.quadrature(),
    };
    let families = match &args.families {
        Some(text) => Some(
            matrices
                .iter()
                .map(|m| parse_groups(text, m.models()))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        None => None,
    };

    let records = matrices
        .par_iter()
        .enumerate()
        .map(|(i, lme)| {
            let context = format!("matrix {}", i + 1);
            let alpha0 = AlphaVector::uniform(lme.models()).map_err(|e| CliError::from_core(e, &context))?;
            let res = vb_estimate(lme, &alpha0, &cfg).map_err(|e| CliError::from_core(e, &context))?;
            let fam = match &families {
                Some(parts) => Some(
                    family_ep(&res, &parts[i], &cfg.quadrature)
                        .map_err(|e| CliError::from_core(e, &context))?,
                ),
                None => None,
            };
            Ok(BmsRecord::new(i + 1, lme.subjects(), &res, fam.as_ref()))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(report::render_bms(&records, args.common.format))
}
