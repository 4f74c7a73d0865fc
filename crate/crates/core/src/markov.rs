//! Markov chains induced by tensoring with `T(1)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bigq::{ln_tilting_char, tilting_dim};
use crate::error::{Error, Result};
use crate::format::{format_g12, Csv};
use crate::level::Level;
use crate::measure::{rat_to_f64, Measure, Weights};
use crate::paths::{StepKind, StepSet};
use crate::smallq::{small_dim, small_qdim};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    /// Big group, `d_n = ch_T(n)(e^t)`.
    BigCharacter { t: f64 },
    /// Big group, `d_n = dim T(n)`.
    BigPlancherel,
    /// Small group, `d_n = dim T(n)`.
    SmallPlancherel,
    /// Small group, `d_n` the quantum dimension at `q = exp(i*pi/l)`.
    SmallQuantum,
}

impl Model {
    pub fn is_big(&self) -> bool {
        matches!(self, Model::BigCharacter { .. } | Model::BigPlancherel)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Model::BigPlancherel | Model::SmallPlancherel)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::BigCharacter { .. } => "big-character",
            Model::BigPlancherel => "big-plancherel",
            Model::SmallPlancherel => "small-plancherel",
            Model::SmallQuantum => "small-quantum",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    /// Parses a model name; `big-character` starts at `t = 0`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "big-character" => Ok(Model::BigCharacter { t: 0.0 }),
            "big-plancherel" => Ok(Model::BigPlancherel),
            "small-plancherel" => Ok(Model::SmallPlancherel),
            "small-quantum" => Ok(Model::SmallQuantum),
            other => Err(Error::InvalidArgument(format!("unknown model {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Rows {
    Exact(BTreeMap<usize, Vec<(usize, BigRational)>>),
    Approx(BTreeMap<usize, Vec<(usize, f64)>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionKernel {
    pub model: Model,
    pub l: Level,
    /// Big models only: rows exist for nodes `< cutoff`.
    pub cutoff: Option<usize>,
    pub rows: Rows,
}

const ROW_TOL: f64 = 1e-12;

/// `Prob(n -> m) = d_m w(n -> m) / (d_n d_1)`.
///
/// Big models need a `cutoff`; rows are produced for nodes `0..cutoff`.
pub fn transition_kernel(
    model: Model,
    l: Level,
    cutoff: Option<usize>,
) -> Result<TransitionKernel> {
    let (kind, nodes): (StepKind, Vec<usize>) = match model {
        Model::BigCharacter { .. } | Model::BigPlancherel => {
            let c = cutoff.ok_or_else(|| {
                Error::InvalidArgument(format!("model {model} needs a node cutoff"))
            })?;
            (StepKind::Big, (0..c).collect())
        }
        Model::SmallPlancherel => (StepKind::Small, (0..l.small_nodes()).collect()),
        Model::SmallQuantum => (StepKind::Small, (0..l.get() - 1).collect()),
    };
    let steps = StepSet::new(l, kind);
    let cutoff = if model.is_big() { cutoff } else { None };

    let rows = if model.is_exact() {
        let dim = |n: usize| -> BigInt {
            match kind {
                StepKind::Big => tilting_dim(l, n).into(),
                StepKind::Small => small_dim(l, n).into(),
            }
        };
        let mut rows = BTreeMap::new();
        for n in nodes {
            let denom = dim(n) * dim(1);
            let row: Vec<(usize, BigRational)> = steps
                .edges(n)?
                .into_iter()
                .map(|(m, w)| (m, BigRational::new(dim(m) * w, denom.clone())))
                .collect();
            let sum: BigRational = row.iter().map(|(_, p)| p).sum();
            if !sum.is_one() {
                return Err(Error::NonStochasticRow {
                    node: n,
                    sum: rat_to_f64(&sum),
                });
            }
            rows.insert(n, row);
        }
        Rows::Exact(rows)
    } else {
        let mut rows = BTreeMap::new();
        for n in nodes {
            let row: Vec<(usize, f64)> = match model {
                Model::BigCharacter { t } => {
                    let base = ln_tilting_char(l, n, t) + ln_tilting_char(l, 1, t);
                    steps
                        .edges(n)?
                        .into_iter()
                        .map(|(m, w)| (m, w as f64 * (ln_tilting_char(l, m, t) - base).exp()))
                        .collect()
                }
                _ => {
                    let base = small_qdim(l, n) * small_qdim(l, 1);
                    steps
                        .edges(n)?
                        .into_iter()
                        .filter(|(m, _)| small_qdim(l, *m) > 0.0)
                        .map(|(m, w)| (m, w as f64 * small_qdim(l, m) / base))
                        .collect()
                }
            };
            let sum: f64 = row.iter().map(|(_, p)| p).sum();
            if (sum - 1.0).abs() > ROW_TOL {
                return Err(Error::NonStochasticRow { node: n, sum });
            }
            rows.insert(n, row);
        }
        Rows::Approx(rows)
    };
    Ok(TransitionKernel {
        model,
        l,
        cutoff,
        rows,
    })
}

impl TransitionKernel {
    pub fn states(&self) -> Vec<usize> {
        match &self.rows {
            Rows::Exact(r) => r.keys().copied().collect(),
            Rows::Approx(r) => r.keys().copied().collect(),
        }
    }

    pub fn prob(&self, from: usize, to: usize) -> f64 {
        match &self.rows {
            Rows::Exact(r) => r
                .get(&from)
                .and_then(|row| row.iter().find(|(m, _)| *m == to))
                .map(|(_, p)| rat_to_f64(p))
                .unwrap_or(0.0),
            Rows::Approx(r) => r
                .get(&from)
                .and_then(|row| row.iter().find(|(m, _)| *m == to))
                .map(|(_, p)| *p)
                .unwrap_or(0.0),
        }
    }

    pub fn prob_exact(&self, from: usize, to: usize) -> Option<BigRational> {
        match &self.rows {
            Rows::Exact(r) => Some(
                r.get(&from)
                    .and_then(|row| row.iter().find(|(m, _)| *m == to))
                    .map(|(_, p)| p.clone())
                    .unwrap_or_else(BigRational::zero),
            ),
            Rows::Approx(_) => None,
        }
    }

    fn missing(&self, node: usize) -> Error {
        match self.cutoff {
            Some(cutoff) => Error::CutoffExceeded {
                cutoff,
                needed: node + 1,
            },
            None => Error::OutsideDomain(node),
        }
    }

    fn rows_f64(&self) -> BTreeMap<usize, Vec<(usize, f64)>> {
        match &self.rows {
            Rows::Exact(r) => r
                .iter()
                .map(|(n, row)| (*n, row.iter().map(|(m, p)| (*m, rat_to_f64(p))).collect()))
                .collect(),
            Rows::Approx(r) => r.clone(),
        }
    }

    /// One step `p -> pP`, in floating point.
    pub fn apply_f64(&self, p: &BTreeMap<usize, f64>) -> Result<BTreeMap<usize, f64>> {
        let rows = self.rows_f64();
        apply_rows(&rows, p, |n| self.missing(n))
    }

    pub fn to_csv(&self) -> String {
        let mut csv = Csv::new(&["from", "to", "prob", "exact"]);
        match &self.rows {
            Rows::Exact(r) => {
                for (n, row) in r {
                    for (m, p) in row {
                        csv.row(&[
                            n.to_string(),
                            m.to_string(),
                            format_g12(rat_to_f64(p)),
                            p.to_string(),
                        ]);
                    }
                }
            }
            Rows::Approx(r) => {
                for (n, row) in r {
                    for (m, p) in row {
                        csv.row(&[n.to_string(), m.to_string(), format_g12(*p), String::new()]);
                    }
                }
            }
        }
        csv.finish()
    }
}

fn apply_rows(
    rows: &BTreeMap<usize, Vec<(usize, f64)>>,
    p: &BTreeMap<usize, f64>,
    missing: impl Fn(usize) -> Error,
) -> Result<BTreeMap<usize, f64>> {
    let mut next = BTreeMap::new();
    for (n, mass) in p {
        if *mass == 0.0 {
            continue;
        }
        let row = rows.get(n).ok_or_else(|| missing(*n))?;
        for (m, q) in row {
            *next.entry(*m).or_insert(0.0) += mass * q;
        }
    }
    Ok(next)
}

/// Apply the kernel `n` times to `init`. Exact when both kernel and measure are exact.
pub fn iterate(kernel: &TransitionKernel, init: &Measure, n: usize) -> Result<Measure> {
    let temperature = match kernel.model {
        Model::BigCharacter { t } => Some(t),
        _ => init.temperature,
    };
    let out = match (&kernel.rows, &init.weights) {
        (Rows::Exact(rows), Weights::Exact(p0)) => {
            let mut p = p0.clone();
            for _ in 0..n {
                let mut next: BTreeMap<usize, BigRational> = BTreeMap::new();
                for (x, mass) in &p {
                    if mass.is_zero() {
                        continue;
                    }
                    let row = rows.get(x).ok_or_else(|| kernel.missing(*x))?;
                    for (y, q) in row {
                        *next.entry(*y).or_insert_with(BigRational::zero) += mass * q;
                    }
                }
                next.retain(|_, v| !v.is_zero());
                p = next;
            }
            Measure::exact(p)
        }
        _ => {
            let rows = kernel.rows_f64();
            let mut p = init.to_f64();
            for _ in 0..n {
                p = apply_rows(&rows, &p, |x| kernel.missing(x))?;
            }
            Measure::approx(p)
        }
    };
    Ok(Measure { temperature, ..out })
}

/// Default convergence tolerance for [`stationary`].
pub const STATIONARY_TOL: f64 = 1e-13;
const MAX_POWER_ITERATIONS: usize = 2_000_000;

/// Left fixed vector of `P` by power iteration on `(I + P)/2`.
pub fn stationary(kernel: &TransitionKernel, tol: f64) -> Result<Measure> {
    if kernel.model.is_big() {
        return Err(Error::InfiniteStateSpace);
    }
    let rows = kernel.rows_f64();
    let states = kernel.states();
    let uniform = 1.0 / states.len() as f64;
    let mut p: BTreeMap<usize, f64> = states.iter().map(|s| (*s, uniform)).collect();
    let mut change = f64::INFINITY;
    for _ in 0..MAX_POWER_ITERATIONS {
        let stepped = apply_rows(&rows, &p, |x| kernel.missing(x))?;
        let next: BTreeMap<usize, f64> = states
            .iter()
            .map(|s| (*s, 0.5 * (p[s] + stepped.get(s).copied().unwrap_or(0.0))))
            .collect();
        change = states.iter().map(|s| (next[s] - p[s]).abs()).sum();
        p = next;
        if change < tol {
            let total: f64 = p.values().sum();
            p.values_mut().for_each(|v| *v /= total);
            return Ok(Measure::approx(p));
        }
    }
    Err(Error::NonConvergence {
        iterations: MAX_POWER_ITERATIONS,
        change,
    })
}

/// `||pi P - pi||_1`.
pub fn stationarity_residual(kernel: &TransitionKernel, pi: &Measure) -> Result<f64> {
    let p = pi.to_f64();
    let stepped = kernel.apply_f64(&p)?;
    Ok(p.keys()
        .chain(stepped.keys())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .map(|s| (stepped.get(s).unwrap_or(&0.0) - p.get(s).unwrap_or(&0.0)).abs())
        .sum())
}

/// The explicit stationary vectors of the small-group chains.
pub fn closed_form_stationary(model: Model, l: Level) -> Result<Measure> {
    let li = l.get();
    match model {
        Model::SmallPlancherel => {
            let l2 = BigInt::from(li * li);
            let weights = (0..l.small_nodes())
                .map(|k| {
                    let p = if k == li - 1 || k == 2 * li - 1 {
                        BigRational::new(BigInt::one(), BigInt::from(2 * li))
                    } else if (li..=2 * li - 2).contains(&k) {
                        BigRational::new(BigInt::from(2 * li - 1 - k), l2.clone())
                    } else if (2 * li..=3 * li - 2).contains(&k) {
                        BigRational::new(BigInt::from(3 * li - 1 - k), l2.clone())
                    } else {
                        BigRational::zero()
                    };
                    (k, p)
                })
                .collect();
            Ok(Measure::exact(weights))
        }
        Model::SmallQuantum => {
            let weights = (0..li - 1)
                .map(|j| {
                    let s = (std::f64::consts::PI * (j + 1) as f64 / li as f64).sin();
                    (j, 2.0 * s * s / li as f64)
                })
                .collect();
            Ok(Measure::approx(weights))
        }
        _ => Err(Error::InfiniteStateSpace),
    }
}

/// Distribution as CSV with columns `label,prob`.
pub fn measure_csv(m: &Measure) -> String {
    let mut csv = Csv::new(&["label", "prob"]);
    for (k, p) in m.to_f64() {
        csv.row(&[k.to_string(), format_g12(p)]);
    }
    csv.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigq::{character_measure, plancherel_measure_big};
    use crate::smallq::{quantum_plancherel, small_plancherel};

    fn lv(l: i64) -> Level {
        Level::new(l).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_plancherel_entries() {
        let k = transition_kernel(Model::SmallPlancherel, lv(3), None).unwrap();
        assert_eq!(k.prob_exact(0, 1), Some(rat(1, 1)));
        assert_eq!(k.prob_exact(2, 3), Some(rat(1, 1)));
        assert_eq!(k.prob_exact(7, 2), Some(rat(1, 2)));
        assert_eq!(k.prob_exact(7, 6), Some(rat(1, 2)));
        assert_eq!(k.prob_exact(5, 6), Some(rat(1, 1)));
    }

    #[test]
    fn small_plancherel_matches_printed_list() {
        for li in [3i64, 5, 7, 9] {
            let l = li as usize;
            let ker = transition_kernel(Model::SmallPlancherel, lv(li), None).unwrap();
            for k in 0..3 * l - 1 {
                let up = if k + 2 <= l {
                    rat(k as i64 + 2, 2 * (k as i64 + 1))
                } else if k == l - 1 || k == 2 * l - 1 {
                    rat(1, 1)
                } else if k == 3 * l - 2 {
                    rat(0, 1)
                } else {
                    rat(1, 2)
                };
                let down = if k + 2 <= l {
                    rat(k as i64, 2 * (k as i64 + 1))
                } else if k == l - 1 || k == 2 * l - 1 {
                    rat(0, 1)
                } else {
                    rat(1, 2)
                };
                let k_up = if k == 3 * l - 2 { k } else { k + 1 };
                if k_up != k {
                    assert_eq!(ker.prob_exact(k, k_up).unwrap(), up, "l={l} k={k} up");
                }
                if k > 0 {
                    assert_eq!(ker.prob_exact(k, k - 1).unwrap(), down, "l={l} k={k} down");
                }
            }
        }
    }

    #[test]
    fn small_quantum_matches_printed_list() {
        for li in [3i64, 5, 7] {
            let l = li as usize;
            let ker = transition_kernel(Model::SmallQuantum, lv(li), None).unwrap();
            let q = |n: usize| (std::f64::consts::PI * n as f64 / l as f64).sin();
            let q1 = 2.0 * (std::f64::consts::PI / l as f64).cos();
            for k in 0..l - 1 {
                if k + 3 <= l {
                    assert!((ker.prob(k, k + 1) - q(k + 2) / (q(k + 1) * q1)).abs() < 1e-12);
                    if k > 0 {
                        assert!((ker.prob(k, k - 1) - q(k) / (q(k + 1) * q1)).abs() < 1e-12);
                    }
                } else {
                    assert_eq!(ker.prob(k, k + 1), 0.0);
                    assert!((ker.prob(k, k - 1) - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn big_models_need_cutoff() {
        assert!(transition_kernel(Model::BigPlancherel, lv(3), None).is_err());
        let k = transition_kernel(Model::BigPlancherel, lv(3), Some(4)).unwrap();
        assert!(matches!(
            iterate(&k, &Measure::delta(0), 5),
            Err(Error::CutoffExceeded { cutoff: 4, .. })
        ));
        assert!(iterate(&k, &Measure::delta(0), 3).is_ok());
    }

    #[test]
    fn iterate_examples() {
        let k = transition_kernel(Model::SmallPlancherel, lv(3), None).unwrap();
        let p = iterate(&k, &Measure::delta(0), 5).unwrap();
        assert_eq!(p, small_plancherel(lv(3), 5));
        let k = transition_kernel(Model::BigCharacter { t: 0.5 }, lv(3), Some(40)).unwrap();
        let p = iterate(&k, &Measure::delta(0), 5).unwrap();
        assert!(p.max_abs_diff(&character_measure(lv(3), 5, 0.5)) < 1e-12);
        let init = Measure::delta(2);
        assert_eq!(iterate(&k, &init, 0).unwrap().to_f64(), init.to_f64());
    }

    #[test]
    fn iterate_reproduces_measures() {
        for l in [lv(3), lv(5)] {
            let sp = transition_kernel(Model::SmallPlancherel, l, None).unwrap();
            let bp = transition_kernel(Model::BigPlancherel, l, Some(30)).unwrap();
            let sq = transition_kernel(Model::SmallQuantum, l, None).unwrap();
            for n in [0, 1, 7, 25] {
                assert_eq!(
                    iterate(&sp, &Measure::delta(0), n).unwrap(),
                    small_plancherel(l, n)
                );
                assert_eq!(
                    iterate(&bp, &Measure::delta(0), n).unwrap().weights,
                    plancherel_measure_big(l, n).weights
                );
                assert!(
                    iterate(&sq, &Measure::delta(0), n)
                        .unwrap()
                        .max_abs_diff(&quantum_plancherel(l, n))
                        < 1e-12
                );
            }
        }
    }

    #[test]
    fn stationary_examples() {
        let k = transition_kernel(Model::SmallPlancherel, lv(3), None).unwrap();
        let pi = stationary(&k, STATIONARY_TOL).unwrap();
        let want = [
            0.0,
            0.0,
            1.0 / 6.0,
            2.0 / 9.0,
            1.0 / 9.0,
            1.0 / 6.0,
            2.0 / 9.0,
            1.0 / 9.0,
        ];
        for (j, w) in want.iter().enumerate() {
            assert!((pi.get(j) - w).abs() < 1e-10, "node {j}");
        }
        let k = transition_kernel(Model::SmallQuantum, lv(3), None).unwrap();
        let pi = stationary(&k, STATIONARY_TOL).unwrap();
        assert!((pi.get(0) - 0.5).abs() < 1e-10 && (pi.get(1) - 0.5).abs() < 1e-10);
        let k = transition_kernel(Model::SmallQuantum, lv(5), None).unwrap();
        let pi = stationary(&k, STATIONARY_TOL).unwrap();
        for (j, w) in [0.1382, 0.3618, 0.3618, 0.1382].iter().enumerate() {
            assert!((pi.get(j) - w).abs() < 1e-4);
        }
        let big = transition_kernel(Model::BigPlancherel, lv(3), Some(10)).unwrap();
        assert_eq!(stationary(&big, 1e-10), Err(Error::InfiniteStateSpace));
    }

    #[test]
    fn closed_forms() {
        let p = closed_form_stationary(Model::SmallPlancherel, lv(5)).unwrap();
        assert_eq!(p.exact_total(), Some(rat(1, 1)));
        assert_eq!(p.get_exact(4), Some(rat(1, 10)));
        assert_eq!(p.get_exact(9), Some(rat(1, 10)));
        assert_eq!(p.get_exact(5), Some(rat(4, 25)));
        assert_eq!(p.get_exact(13), Some(rat(1, 25)));
        assert_eq!(p.get_exact(3), Some(rat(0, 1)));
        let q = closed_form_stationary(Model::SmallQuantum, lv(3)).unwrap();
        assert!((q.get(0) - 0.5).abs() < 1e-15 && (q.get(1) - 0.5).abs() < 1e-15);
        for l in [3i64, 5, 7, 9, 11] {
            let q = closed_form_stationary(Model::SmallQuantum, lv(l)).unwrap();
            assert!((q.total() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn stationary_matches_closed_form() {
        for l in [3i64, 5, 7, 9] {
            for model in [Model::SmallPlancherel, Model::SmallQuantum] {
                let k = transition_kernel(model, lv(l), None).unwrap();
                let pi = stationary(&k, STATIONARY_TOL).unwrap();
                let cf = closed_form_stationary(model, lv(l)).unwrap();
                assert!(pi.max_abs_diff(&cf) < 1e-8, "{model} l={l}");
                assert!(stationarity_residual(&k, &pi).unwrap() < 10.0 * STATIONARY_TOL);
            }
        }
    }

    #[test]
    fn csv_export() {
        let k = transition_kernel(Model::SmallPlancherel, lv(3), None).unwrap();
        let csv = k.to_csv();
        assert!(csv.starts_with("from,to,prob,exact\n0,1,1,1\n"));
        assert!(csv.contains("\n7,2,0.5,1/2\n"));
        assert_eq!(measure_csv(&Measure::delta(3)), "label,prob\n3,1\n");
    }
}
