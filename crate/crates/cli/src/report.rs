//! Report rendering. CSV prints probabilities with 6 decimals and error
//! diagnostics in 6-digit scientific notation; JSON carries full precision.

use std::fmt::Write;

use direp_core::bms::BmsResult;
use direp_core::{AlphaVector, ExceedanceVector, Partition};
use serde::Serialize;

use crate::args::Format;

pub fn prob(x: f64) -> String {
    format!("{x:.6}")
}

pub fn diag(x: f64) -> String {
    format!("{x:.6e}")
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report values serialize");
    s.push('\n');
    s
}

#[derive(Debug, Serialize)]
pub struct EpRecord {
    pub row: usize,
    pub alpha: Vec<f64>,
    pub method: &'static str,
    pub phi: Vec<f64>,
    pub error: Vec<f64>,
    pub sum_deviation: f64,
}

impl EpRecord {
    pub fn new(row: usize, alpha: &AlphaVector, ep: &ExceedanceVector) -> Self {
        Self {
            row,
            alpha: alpha.to_vec(),
            method: ep.method.as_str(),
            phi: ep.phi.clone(),
            error: ep.diagnostics.clone(),
            sum_deviation: ep.sum_deviation(),
        }
    }
}

#[derive(Serialize)]
struct EpBatch<'a> {
    rows: &'a [EpRecord],
}

/// A single record renders as one JSON object, a batch as `{"rows": [...]}`.
pub fn render_ep(records: &[EpRecord], single: bool, format: Format) -> String {
    match format {
        Format::Json if single => json(&records[0]),
        Format::Json => json(&EpBatch { rows: records }),
        Format::Csv => {
            let mut out = String::from("row,method,index,phi,error,sum_deviation\n");
            for r in records {
                for (i, (p, e)) in r.phi.iter().zip(&r.error).enumerate() {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        r.row,
                        r.method,
                        i + 1,
                        prob(*p),
                        diag(*e),
                        diag(r.sum_deviation)
                    );
                }
            }
            out
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AgglomRecord {
    pub groups: Vec<Vec<usize>>,
    pub alpha: Vec<f64>,
    pub method: &'static str,
    pub phi: Vec<f64>,
    pub error: Vec<f64>,
    pub sum_deviation: f64,
}

impl AgglomRecord {
    pub fn new(part: &Partition, alpha: &AlphaVector, ep: &ExceedanceVector) -> Self {
        Self {
            groups: part
                .groups()
                .iter()
                .map(|g| g.iter().map(|i| i + 1).collect())
                .collect(),
            alpha: alpha.to_vec(),
            method: ep.method.as_str(),
            phi: ep.phi.clone(),
            error: ep.diagnostics.clone(),
            sum_deviation: ep.sum_deviation(),
        }
    }
}

pub fn render_agglom(rec: &AgglomRecord, format: Format) -> String {
    match format {
        Format::Json => json(rec),
        Format::Csv => {
            let mut out = String::from("group,members,alpha,phi,error\n");
            for (g, members) in rec.groups.iter().enumerate() {
                let members: Vec<String> = members.iter().map(|i| i.to_string()).collect();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    g + 1,
                    members.join("+"),
                    rec.alpha[g],
                    prob(rec.phi[g]),
                    diag(rec.error[g])
                );
            }
            out
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PollRecord {
    pub alpha: Vec<f64>,
    pub method: &'static str,
    pub phi: Vec<f64>,
    pub error: Vec<f64>,
    pub sum_deviation: f64,
}

pub fn render_poll(rec: &PollRecord, format: Format) -> String {
    match format {
        Format::Json => json(rec),
        Format::Csv => {
            let mut out = String::from("index,alpha,phi,error\n");
            for (i, a) in rec.alpha.iter().enumerate() {
                let _ = writeln!(out, "{},{},{},{}", i + 1, a, prob(rec.phi[i]), diag(rec.error[i]));
            }
            out
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BmsRecord {
    pub matrix: usize,
    pub subjects: usize,
    pub models: usize,
    pub alpha_post: Vec<f64>,
    pub expected_freq: Vec<f64>,
    pub exceedance: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_exceedance: Option<Vec<f64>>,
    pub iterations: usize,
    pub converged: bool,
}

impl BmsRecord {
    pub fn new(matrix: usize, subjects: usize, res: &BmsResult, families: Option<&ExceedanceVector>) -> Self {
        Self {
            matrix,
            subjects,
            models: res.alpha_post.k(),
            alpha_post: res.alpha_post.to_vec(),
            expected_freq: res.expected_freq.clone(),
            exceedance: res.exceedance.phi.clone(),
            family_exceedance: families.map(|f| f.phi.clone()),
            iterations: res.iterations,
            converged: res.converged,
        }
    }
}

#[derive(Serialize)]
struct BmsBatch<'a> {
    matrices: &'a [BmsRecord],
}

/// CSV uses a long layout: `matrix,quantity,index,value`.
pub fn render_bms(records: &[BmsRecord], format: Format) -> String {
    match format {
        Format::Json => json(&BmsBatch { matrices: records }),
        Format::Csv => {
            let mut out = String::from("matrix,quantity,index,value\n");
            for r in records {
                let mut vector = |name: &str, values: &[f64]| {
                    for (i, v) in values.iter().enumerate() {
                        let _ = writeln!(out, "{},{name},{},{}", r.matrix, i + 1, prob(*v));
                    }
                };
                vector("alpha_post", &r.alpha_post);
                vector("expected_freq", &r.expected_freq);
                vector("exceedance", &r.exceedance);
                if let Some(f) = &r.family_exceedance {
                    vector("family_exceedance", f);
                }
                let _ = writeln!(out, "{},iterations,,{}", r.matrix, r.iterations);
                let _ = writeln!(out, "{},converged,,{}", r.matrix, r.converged);
            }
            out
        }
    }
}
