//! Text input formats: comma-separated number lists, alpha batch files,
//! log-evidence CSV files and group specifications.

use std::path::Path;

use direp_core::{AlphaVector, Partition};

use crate::CliError;

pub fn parse_numbers(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .enumerate()
        .map(|(i, field)| {
            let field = field.trim();
            field.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                CliError::Input(format!("{what}: entry {} ({field:?}) is not a finite number", i + 1))
            })
        })
        .collect()
}

pub fn parse_alpha(text: &str) -> Result<AlphaVector, CliError> {
    let values = parse_numbers(text, "alpha")?;
    AlphaVector::new(values).map_err(|e| CliError::Input(e.to_string()))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn is_skipped(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

/// One alpha vector per non-empty line; lines starting with '#' are skipped.
pub fn parse_alpha_rows(text: &str) -> Result<Vec<AlphaVector>, CliError> {
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if is_skipped(line) {
            continue;
        }
        let row = parse_alpha(line).map_err(|e| CliError::Input(format!("line {}: {e}", n + 1)))?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Input("input contains no alpha vectors".into()));
    }
    Ok(rows)
}

pub fn read_alpha_file(path: &Path) -> Result<Vec<AlphaVector>, CliError> {
    parse_alpha_rows(&read(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Rows of one or more log-evidence matrices. A line consisting of `---`
/// ends the current matrix.
pub fn parse_lme_matrices(text: &str) -> Result<Vec<Vec<Vec<f64>>>, CliError> {
    let mut matrices = Vec::new();
    let mut current: Vec<Vec<f64>> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        if line.trim() == "---" {
            if current.is_empty() {
                return Err(CliError::Input(format!("line {line_no}: empty matrix before separator")));
            }
            matrices.push(std::mem::take(&mut current));
            continue;
        }
        if is_skipped(line) {
            continue;
        }
        let row = parse_numbers(line, "log evidence")
            .map_err(|e| CliError::Input(format!("line {line_no}: {e}")))?;
        if let Some(first) = current.first() {
            if first.len() != row.len() {
                return Err(CliError::Input(format!(
                    "line {line_no}: row {} of matrix {} has {} columns, expected {}",
                    current.len() + 1,
                    matrices.len() + 1,
                    row.len(),
                    first.len()
                )));
            }
        }
        current.push(row);
    }
    if !current.is_empty() {
        matrices.push(current);
    }
    if matrices.is_empty() {
        return Err(CliError::Input("no log-evidence rows found".into()));
    }
    Ok(matrices)
}

pub fn read_lme_file(path: &Path) -> Result<Vec<Vec<Vec<f64>>>, CliError> {
    parse_lme_matrices(&read(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// `"1,3;2,4;5,6"` → partition of `0..k` with 0-based groups.
pub fn parse_groups(text: &str, k: usize) -> Result<Partition, CliError> {
    let groups = text
        .split(';')
        .enumerate()
        .map(|(g, group)| {
            group
                .split(',')
                .map(|field| {
                    let field = field.trim();
                    match field.parse::<usize>() {
                        Ok(i) if i >= 1 => Ok(i - 1),
                        _ => Err(CliError::Input(format!(
                            "group {}: {field:?} is not a 1-based index",
                            g + 1
                        ))),
                    }
                })
                .collect::<Result<Vec<usize>, CliError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Partition::new(groups, k).map_err(|e| CliError::Input(e.to_string()))
}
