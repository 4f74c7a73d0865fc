//! Weighted lattice paths: one step is tensoring with `T(1)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::format::Csv;
use crate::level::Level;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    /// Big quantum group, nodes `0, 1, 2, ...`.
    Big,
    /// Small quantum group, nodes `0..=3l-2`.
    Small,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKind::Big => "big",
            StepKind::Small => "small",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepSet {
    pub l: Level,
    pub kind: StepKind,
}

impl StepSet {
    pub fn new(l: Level, kind: StepKind) -> Self {
        Self { l, kind }
    }

    /// Largest node, `None` for the unbounded big lattice.
    pub fn max_node(&self) -> Option<usize> {
        match self.kind {
            StepKind::Big => None,
            StepKind::Small => Some(3 * self.l.get() - 2),
        }
    }

    pub fn contains(&self, node: usize) -> bool {
        self.max_node().is_none_or(|m| node <= m)
    }

    /// Weighted out-edges `(target, weight)` of `node`.
    pub fn edges(&self, node: usize) -> Result<Vec<(usize, u32)>> {
        if !self.contains(node) {
            return Err(Error::OutsideDomain(node));
        }
        let l = self.l.get();
        let k = node;
        let edges = match self.kind {
            StepKind::Big => {
                if k % l == l - 1 {
                    vec![(k + 1, 1)]
                } else if k.is_multiple_of(l) && k > 0 {
                    vec![(k + 1, 1), (k - 1, 2)]
                } else if k % l == l - 2 && k >= 3 * l - 2 {
                    let m = (k + 2) / l;
                    vec![(k + 1, 1), (k - 1, 1), ((m - 2) * l - 1, 1)]
                } else if k == 0 {
                    vec![(1, 1)]
                } else {
                    vec![(k + 1, 1), (k - 1, 1)]
                }
            }
            StepKind::Small => {
                if k == 0 {
                    vec![(1, 1)]
                } else if k == 2 * l - 2 {
                    vec![(2 * l - 1, 2), (2 * l - 3, 1)]
                } else if k == 3 * l - 2 {
                    vec![(3 * l - 3, 1), (l - 1, 2)]
                } else if k % l == l - 1 {
                    vec![(k + 1, 1)]
                } else if k.is_multiple_of(l) {
                    vec![(k + 1, 1), (k - 1, 2)]
                } else {
                    vec![(k + 1, 1), (k - 1, 1)]
                }
            }
        };
        Ok(edges)
    }
}

/// Weighted path counts after `n` steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCountVector {
    pub n: usize,
    pub counts: BTreeMap<usize, BigInt>,
}

impl PathCountVector {
    pub fn delta(node: usize) -> Self {
        Self {
            n: 0,
            counts: BTreeMap::from([(node, BigInt::one())]),
        }
    }

    pub fn get(&self, node: usize) -> BigInt {
        self.counts.get(&node).cloned().unwrap_or_default()
    }
}

/// One DP layer: `counts'(y) = sum over edges x -> y of weight * counts(x)`.
pub fn evolve(steps: &StepSet, v: &PathCountVector) -> Result<PathCountVector> {
    let mut next: BTreeMap<usize, BigInt> = BTreeMap::new();
    for (x, c) in &v.counts {
        for (y, w) in steps.edges(*x)? {
            *next.entry(y).or_default() += c * w;
        }
    }
    next.retain(|_, c| !c.is_zero());
    Ok(PathCountVector {
        n: v.n + 1,
        counts: next,
    })
}

/// Layers `0..=n` starting from `start`.
pub fn path_layers(steps: &StepSet, n: usize, start: usize) -> Result<Vec<PathCountVector>> {
    let mut layers = vec![PathCountVector::delta(start)];
    steps.edges(start)?;
    for _ in 0..n {
        let next = evolve(steps, layers.last().unwrap())?;
        layers.push(next);
    }
    Ok(layers)
}

pub fn evolve_n(steps: &StepSet, n: usize, start: usize) -> Result<PathCountVector> {
    let mut v = PathCountVector::delta(start);
    steps.edges(start)?;
    for _ in 0..n {
        v = evolve(steps, &v)?;
    }
    Ok(v)
}

/// Weighted number of `n`-step paths from `start` to `end`.
pub fn count_paths(steps: &StepSet, n: usize, start: usize, end: usize) -> Result<BigInt> {
    if !steps.contains(end) {
        return Err(Error::OutsideDomain(end));
    }
    Ok(evolve_n(steps, n, start)?.get(end))
}

/// Full DP table as CSV: one row per step count, one column per node.
pub fn dp_table_csv(steps: &StepSet, n: usize, start: usize) -> Result<String> {
    let layers = path_layers(steps, n, start)?;
    let width = steps.max_node().unwrap_or(start + n);
    let mut header = vec!["N".to_string()];
    header.extend((0..=width).map(|k| k.to_string()));
    let mut csv = Csv::new(&header);
    for layer in &layers {
        let mut row = vec![layer.n.to_string()];
        row.extend((0..=width).map(|k| layer.get(k).to_string()));
        csv.row(&row);
    }
    Ok(csv.finish())
}
