use super::alpha::{AlphaVector, Partition};
use crate::error::{Error, Result};

/// Sum the concentration parameters within each group of `part`.
///
/// If `r ~ Dir(α)` then the vector of group sums of `r` is Dirichlet with
/// these summed parameters.
pub fn agglomerate(alpha: &AlphaVector, part: &Partition) -> Result<AlphaVector> {
    if part.k() != alpha.k() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} indices but alpha has {} components",
            part.k(),
            alpha.k()
        )));
    }
    let summed = part
        .groups()
        .iter()
        .map(|g| g.iter().map(|&i| alpha[i]).sum())
        .collect();
    AlphaVector::new(summed)
}

/// Multinomial-Dirichlet update `α_n = α_0 + n`.
///
/// With `round` set, every posterior component is rounded half away from
/// zero, as in tables of rounded poll posteriors.
pub fn posterior_from_counts(alpha0: &AlphaVector, counts: &[f64], round: bool) -> Result<AlphaVector> {
    if counts.len() != alpha0.k() {
        return Err(Error::Contract(format!(
            "{} counts for {} categories",
            counts.len(),
            alpha0.k()
        )));
    }
    if let Some(i) = counts.iter().position(|c| !(*c >= 0.0) || !c.is_finite()) {
        return Err(Error::Contract(format!(
            "count {} is {}; counts must be finite and nonnegative",
            i + 1,
            counts[i]
        )));
    }
    let post = alpha0
        .iter()
        .zip(counts)
        .map(|(a, n)| if round { (a + n).round() } else { a + n })
        .collect();
    AlphaVector::new(post)
}

/// Counts implied by poll percentages: `p_j / 100 · n`.
pub fn counts_from_percentages(percent: &[f64], respondents: f64) -> Vec<f64> {
    percent.iter().map(|p| p / 100.0 * respondents).collect()
}

/// Interior mode `(α_j - 1) / (α_s - k)`; requires every `α_j > 1`.
pub fn dirichlet_mode(alpha: &AlphaVector) -> Result<Vec<f64>> {
    if let Some((index, &value)) = alpha.iter().enumerate().find(|(_, a)| **a <= 1.0) {
        return Err(Error::ModeUndefined { index, value });
    }
    let denom = alpha.sum() - alpha.k() as f64;
    Ok(alpha.iter().map(|a| (a - 1.0) / denom).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(v: &[f64]) -> AlphaVector {
        AlphaVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn agglomerate_election_blocks() {
        let a = alpha(&[401.0, 331.0, 51.0, 131.0, 31.0, 61.0]);
        let part = Partition::new(vec![vec![0, 2], vec![1, 3], vec![4, 5]], 6).unwrap();
        assert_eq!(agglomerate(&a, &part).unwrap().as_slice(), &[452.0, 462.0, 92.0]);
    }

    #[test]
    fn agglomerate_trivial_and_full() {
        let a = alpha(&[1.0, 2.0, 3.0]);
        assert_eq!(agglomerate(&a, &Partition::singletons(3)).unwrap(), a);
        let all = Partition::new(vec![vec![0, 1, 2]], 3).unwrap();
        assert_eq!(agglomerate(&a, &all).unwrap().as_slice(), &[6.0]);
        assert!(agglomerate(&a, &Partition::singletons(4)).is_err());
    }

    #[test]
    fn poll_posteriors_match_rounded_tables() {
        let prior = AlphaVector::uniform(6).unwrap();
        let counts = counts_from_percentages(&[41.0, 34.0, 7.0, 7.0, 8.0, 3.0], 1299.0);
        let post = posterior_from_counts(&prior, &counts, true).unwrap();
        assert_eq!(post.as_slice(), &[534.0, 443.0, 92.0, 92.0, 105.0, 40.0]);

        let counts = counts_from_percentages(&[40.0, 33.0, 5.0, 13.0, 3.0, 6.0], 1001.0);
        let post = posterior_from_counts(&prior, &counts, true).unwrap();
        assert_eq!(post.as_slice(), &[401.0, 331.0, 51.0, 131.0, 31.0, 61.0]);

        let exact = posterior_from_counts(&prior, &counts, false).unwrap();
        assert!((exact[0] - 401.4).abs() < 1e-9);
    }

    #[test]
    fn posterior_edge_cases() {
        let prior = alpha(&[0.5, 2.5]);
        assert_eq!(posterior_from_counts(&prior, &[0.0, 0.0], false).unwrap(), prior);
        assert!(posterior_from_counts(&prior, &[1.0], false).is_err());
        assert!(posterior_from_counts(&prior, &[1.0, -1.0], false).is_err());
        // 2.5 rounds away from zero
        assert_eq!(posterior_from_counts(&prior, &[0.0, 0.0], true).unwrap().as_slice(), &[1.0, 3.0]);
    }

    #[test]
    fn mode_examples() {
        assert_eq!(dirichlet_mode(&alpha(&[2.0, 2.0])).unwrap(), vec![0.5, 0.5]);
        let m = dirichlet_mode(&alpha(&[534.0, 443.0, 92.0, 92.0, 105.0, 40.0])).unwrap();
        assert!((m[0] - 533.0 / 1300.0).abs() < 1e-15);
        let m = dirichlet_mode(&alpha(&[2.0, 3.0])).unwrap();
        assert!((m[0] - 1.0 / 3.0).abs() < 1e-15 && (m[1] - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(
            dirichlet_mode(&alpha(&[2.0, 1.0])),
            Err(Error::ModeUndefined { index: 1, value: 1.0 })
        );
    }
}
