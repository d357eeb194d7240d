use std::ops::Deref;

use crate::error::{Error, Result};

/// Concentration parameters of a Dirichlet distribution: `k >= 1` strictly
/// positive, finite reals.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaVector(Vec<f64>);

impl AlphaVector {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidAlpha("at least one component is required".into()));
        }
        if let Some((i, &a)) = alpha
            .iter()
            .enumerate()
            .find(|(_, a)| !(**a > 0.0) || !a.is_finite())
        {
            return Err(Error::InvalidAlpha(format!(
                "component {} is {a}; every component must be positive and finite",
                i + 1
            )));
        }
        Ok(Self(alpha))
    }

    /// The flat prior `[1, …, 1]`.
    pub fn uniform(k: usize) -> Result<Self> {
        Self::new(vec![1.0; k])
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// `α_s = Σ α_j`.
    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Posterior mean `α_j / α_s`.
    pub fn expected(&self) -> Vec<f64> {
        let s = self.sum();
        self.0.iter().map(|a| a / s).collect()
    }
}

impl Deref for AlphaVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for AlphaVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

/// An ordered partition of the 0-based indices `0..k` into nonempty,
/// disjoint groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    groups: Vec<Vec<usize>>,
    k: usize,
}

impl Partition {
    /// Validates `groups` against `0..k`. Messages name offending indices
    /// 1-based.
    pub fn new(groups: Vec<Vec<usize>>, k: usize) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::InvalidPartition("no groups given".into()));
        }
        if let Some(g) = groups.iter().position(|g| g.is_empty()) {
            return Err(Error::InvalidPartition(format!("group {} is empty", g + 1)));
        }

        let mut seen = vec![0usize; k];
        let mut out_of_range = Vec::new();
        for &i in groups.iter().flatten() {
            match seen.get_mut(i) {
                Some(c) => *c += 1,
                None => out_of_range.push(i + 1),
            }
        }
        let one_based = |pred: &dyn Fn(usize) -> bool| -> Vec<usize> {
            (0..k).filter(|&i| pred(seen[i])).map(|i| i + 1).collect()
        };
        let duplicated = one_based(&|c| c > 1);
        let missing = one_based(&|c| c == 0);

        let mut problems = Vec::new();
        if !out_of_range.is_empty() {
            problems.push(format!("indices out of range 1..={k}: {out_of_range:?}"));
        }
        if !duplicated.is_empty() {
            problems.push(format!("duplicated indices: {duplicated:?}"));
        }
        if !missing.is_empty() {
            problems.push(format!("missing indices: {missing:?}"));
        }
        if !problems.is_empty() {
            return Err(Error::InvalidPartition(problems.join("; ")));
        }
        Ok(Self { groups, k })
    }

    /// Every index in its own group.
    pub fn singletons(k: usize) -> Self {
        Self {
            groups: (0..k).map(|i| vec![i]).collect(),
            k,
        }
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Size of the index set this partition covers.
    pub fn k(&self) -> usize {
        self.k
    }
}
