//! Large-N asymptotics of multiplicities and measures, limit densities, and a
//! harness measuring the distance between exact measures and their limits.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::bigq::{character_measure_from, plancherel_from, tilting_mult_table};
use crate::error::{Error, Result};
use crate::format::{format_g12, Csv};
use crate::level::Level;
use crate::measure::Measure;

/// `N = 2l N1 + N0`, `k = l k1 + k0`, with the parity flag `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParitySplit {
    pub l: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub k: usize,
    #[serde(rename = "N1")]
    pub n1: usize,
    #[serde(rename = "N0")]
    pub n0: usize,
    pub k1: usize,
    pub k0: usize,
    /// 0 iff `k0 = N0 (mod 2)`, equivalently iff `k1` is even.
    pub gamma: usize,
    /// `k1 / (2 N1)`.
    pub xi: f64,
    /// `(k1 - gamma) / (2 N1)`, the argument used by the asymptotic formulas.
    pub xi_shifted: f64,
}

pub fn parity_split(l: Level, n: usize, k: usize) -> Result<ParitySplit> {
    if n % 2 != k % 2 {
        return Err(Error::ParityMismatch { n, k });
    }
    let li = l.get();
    let (n1, n0) = (n / (2 * li), n % (2 * li));
    if n1 == 0 {
        return Err(Error::InvalidArgument(format!(
            "N={n} is below 2l={}; asymptotics need N1 >= 1",
            2 * li
        )));
    }
    let (k1, k0) = (k / li, k % li);
    let gamma = usize::from(k0 % 2 != n0 % 2);
    Ok(ParitySplit {
        l: li,
        n,
        k,
        n1,
        n0,
        k1,
        k0,
        gamma,
        xi: k1 as f64 / (2 * n1) as f64,
        xi_shifted: (k1 as f64 - gamma as f64) / (2 * n1) as f64,
    })
}

fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Rate function `S(xi)`.
pub fn rate_s(xi: f64) -> f64 {
    -xlnx((1.0 - xi) / 2.0) - xlnx((1.0 + xi) / 2.0)
}

/// `ln(2 sinh x)` for `x > 0`.
fn ln_2sinh(x: f64) -> f64 {
    x + (-(-2.0 * x).exp_m1()).ln()
}

/// `ln(2 cosh x)`.
fn ln_2cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p()
}

/// `ln mu_{k0}(xi, N0, gamma)`.
fn ln_mu(s: &ParitySplit) -> Result<f64> {
    let xi = s.xi_shifted;
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::Singular(xi));
    }
    let l = s.l as f64;
    let n0 = s.n0 as f64;
    let g = s.gamma as f64;
    let one_minus_sq = (1.0 - xi * xi).ln();
    let pre = (2.0 + n0) * LN_2 + xi.ln() - 0.5 * (1.0 + n0) * one_minus_sq;
    let lr = ((1.0 + xi) / (1.0 - xi)).ln();
    if s.k0 == s.l - 1 {
        Ok(pre - (1.0 + xi).ln() - 0.5 * (l * (1.0 + g) - 1.0) * lr)
    } else {
        // (1/(1+xi)) r^a - (1/(1-xi)) r^-a = 2 sinh((a - 1/2) ln r) / sqrt(1 - xi^2)
        let a = (l - s.k0 as f64) / 2.0;
        let numer = ln_2sinh((a - 0.5) * lr) - 0.5 * one_minus_sq;
        let denom = ln_2sinh(0.5 * l * lr);
        Ok(pre - 0.5 * g * l * lr + numer - denom)
    }
}

fn ln_gaussian_norm(s: &ParitySplit) -> f64 {
    -0.5 * (2.0 * PI * (2 * s.l * s.n1) as f64).ln()
}

/// `ln` of the Theorem-9.1 approximation to `M_k^(l)(N)`.
pub fn ln_mult_asymptotic(l: Level, n: usize, k: usize) -> Result<f64> {
    let s = parity_split(l, n, k)?;
    let big = (2 * s.l * s.n1) as f64;
    Ok(ln_mu(&s)? + ln_gaussian_norm(&s) + big * rate_s(s.xi_shifted))
}

pub fn mult_asymptotic(l: Level, n: usize, k: usize) -> Result<f64> {
    ln_mult_asymptotic(l, n, k).map(f64::exp)
}

fn require_positive_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "character asymptotics need t > 0, got {t}"
        )))
    }
}

/// `ln` of the asymptotic form of `ch_T(k)(e^t) / ch_T(1)(e^t)^N`.
pub fn ln_char_ratio_asymptotic(l: Level, n: usize, k: usize, t: f64) -> Result<f64> {
    require_positive_t(t)?;
    let s = parity_split(l, n, k)?;
    let (li, g) = (s.l as f64, s.gamma as f64);
    let base = -ln_2sinh(t) - s.n0 as f64 * ln_2cosh(t);
    let head = if s.k0 == s.l - 1 {
        t * li * (1.0 + g)
    } else {
        t * g * li + ln_2cosh(t * (s.k0 + 1) as f64)
    };
    let drift = (2 * s.l * s.n1) as f64 * (s.xi_shifted * t - ln_2cosh(t));
    Ok(head + base + drift)
}

/// Pointwise asymptotic of the character measure density.
pub fn char_density_asymptotic(l: Level, n: usize, k: usize, t: f64) -> Result<f64> {
    Ok((ln_mult_asymptotic(l, n, k)? + ln_char_ratio_asymptotic(l, n, k, t)?).exp())
}

/// Pointwise asymptotic of the Plancherel measure density.
pub fn planch_density_asymptotic(l: Level, n: usize, k: usize) -> Result<f64> {
    let s = parity_split(l, n, k)?;
    let wall = s.k0 == s.l - 1;
    let ln_dim_ratio = if wall { 1.0 } else { 2.0 } * LN_2 - s.n0 as f64 * LN_2
        + (s.xi_shifted * (s.l * s.n1) as f64).ln()
        - (2 * s.l * s.n1) as f64 * LN_2;
    Ok((ln_mult_asymptotic(l, n, k)? + ln_dim_ratio).exp())
}

/// Limit regimes of the character measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    /// Fixed `t`, `alpha = (k1 - 2 N1 tanh t) / sqrt(2 N1)`.
    Bulk { t: f64 },
    /// `t = 0`, `alpha = k1 / sqrt(2 N1)`.
    Plancherel,
    /// `t = u / sqrt(2 N1)`, `b = k1 / sqrt(2 N1)`.
    Intermediate { u: f64 },
    /// `t = ln(N / theta) / 2`, `s = (N - k) / 2`.
    Poisson { theta: f64 },
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Bulk { .. } => "bulk",
            Regime::Plancherel => "plancherel",
            Regime::Intermediate { .. } => "intermediate",
            Regime::Poisson { .. } => "poisson",
        }
    }

    pub fn params(&self) -> String {
        match self {
            Regime::Bulk { t } => format!("t={}", format_g12(*t)),
            Regime::Plancherel => String::new(),
            Regime::Intermediate { u } => format!("u={}", format_g12(*u)),
            Regime::Poisson { theta } => format!("theta={}", format_g12(*theta)),
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Limit law `p1 (x) p2` of one regime at fixed `l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeDensity {
    pub l: Level,
    pub regime: Regime,
}

pub fn limit_bulk(l: Level, t: f64) -> RegimeDensity {
    RegimeDensity {
        l,
        regime: Regime::Bulk { t },
    }
}

pub fn limit_plancherel(l: Level) -> RegimeDensity {
    RegimeDensity {
        l,
        regime: Regime::Plancherel,
    }
}

pub fn limit_intermediate(l: Level, u: f64) -> RegimeDensity {
    RegimeDensity {
        l,
        regime: Regime::Intermediate { u },
    }
}

pub fn limit_poisson_density(l: Level, theta: f64) -> RegimeDensity {
    RegimeDensity {
        l,
        regime: Regime::Poisson { theta },
    }
}

/// `p1(k0; t)`; even in `t`, with the `t = 0` limit `2(l-1-k0)/l^2`.
pub fn p1(l: Level, k0: usize, t: f64) -> f64 {
    let li = l.get();
    if k0 == li - 1 {
        return 1.0 / li as f64;
    }
    let t = t.abs();
    let lf = li as f64;
    if t < 1e-8 {
        return 2.0 * (li - 1 - k0) as f64 / (lf * lf);
    }
    let ln = ln_2cosh(t * (k0 + 1) as f64) + ln_2sinh(t * (li - 1 - k0) as f64)
        - lf.ln()
        - ln_2sinh(t * lf);
    ln.exp()
}

impl RegimeDensity {
    /// Discrete `k0` marginal.
    pub fn p1(&self, k0: usize) -> f64 {
        match self.regime {
            Regime::Bulk { t } => p1(self.l, k0, t),
            _ => p1(self.l, k0, 0.0),
        }
    }

    /// Continuous marginal; zero for `x < 0` in the radial regimes.
    pub fn p2(&self, x: f64) -> f64 {
        let l = self.l.get() as f64;
        match self.regime {
            Regime::Bulk { t } => {
                let c = t.cosh();
                (l / (2.0 * PI)).sqrt() * c * (-0.5 * x * x * l * c * c).exp()
            }
            Regime::Plancherel => plancherel_p2(l, x),
            Regime::Intermediate { u } => {
                if x < 0.0 {
                    return 0.0;
                }
                if u.abs() < 1e-12 {
                    return plancherel_p2(l, x);
                }
                if x == 0.0 {
                    return 0.0;
                }
                let u = u.abs();
                let ln = (x / u).ln() + 0.5 * (l / (2.0 * PI)).ln() + ln_2sinh(l * x * u)
                    - 0.5 * u * u * l
                    - 0.5 * x * x * l;
                ln.exp()
            }
            Regime::Poisson { .. } => 0.0,
        }
    }

    /// `int_a^b p2` by composite Simpson.
    pub fn p2_mass(&self, a: f64, b: f64) -> f64 {
        simpson(|x| self.p2(x), a, b, 32)
    }

    /// Poisson weight `theta^s e^{-theta} / s!`.
    pub fn poisson(&self, s: usize) -> f64 {
        match self.regime {
            Regime::Poisson { theta } => limit_poisson(s, theta),
            _ => 0.0,
        }
    }
}

fn plancherel_p2(l: f64, x: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    (2.0 / PI).sqrt() * l.powf(1.5) * x * x * (-0.5 * x * x * l).exp()
}

/// Composite Simpson rule with `panels` (rounded up to even) subintervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels.max(2).next_multiple_of(2);
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

fn ln_factorial(s: usize) -> f64 {
    (2..=s).map(|i| (i as f64).ln()).sum()
}

/// `N^s / s!` with `s = (N - k) / 2`.
pub fn poisson_mult(n: usize, k: usize) -> Result<f64> {
    if k > n || !(n - k).is_multiple_of(2) {
        return Err(Error::ParityMismatch { n, k });
    }
    let s = (n - k) / 2;
    Ok((s as f64 * (n as f64).ln() - ln_factorial(s)).exp())
}

/// `theta^s e^{-theta} / s!`.
pub fn limit_poisson(s: usize, theta: f64) -> f64 {
    if theta == 0.0 {
        return if s == 0 { 1.0 } else { 0.0 };
    }
    (s as f64 * theta.ln() - theta - ln_factorial(s)).exp()
}

/// One row of a convergence report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub regime: String,
    pub l: usize,
    pub params: String,
    #[serde(rename = "N")]
    pub n: usize,
    /// Total-variation distance between the binned exact measure and the limit.
    #[serde(rename = "TV")]
    pub tv: f64,
    /// Largest `|P/Q - 1|` over limit cells carrying at least 1% of the largest cell mass.
    pub max_rel_err: f64,
    pub runtime_ms: u64,
}

/// Exact measure whose limit is described by `regime` at size `n`.
pub fn exact_measure(l: Level, regime: Regime, n: usize) -> Result<Measure> {
    let table = tilting_mult_table(l, n);
    let n1 = n / (2 * l.get());
    Ok(match regime {
        Regime::Bulk { t } => character_measure_from(&table, t),
        Regime::Plancherel => plancherel_from(&table),
        Regime::Intermediate { u } => {
            if n1 == 0 {
                return Err(Error::InvalidArgument(format!("N={n} is below 2l")));
            }
            character_measure_from(&table, u / (2.0 * n1 as f64).sqrt())
        }
        Regime::Poisson { theta } => {
            if !(theta > 0.0 && theta < n as f64) {
                return Err(Error::InvalidArgument(format!(
                    "theta={theta} must lie in (0, N)"
                )));
            }
            character_measure_from(&table, 0.5 * (n as f64 / theta).ln())
        }
    })
}

/// Pairs `(P, Q)` of exact mass and limit mass over the cells of the exact support.
pub fn binned_masses(l: Level, regime: Regime, n: usize) -> Result<Vec<(f64, f64)>> {
    let exact = exact_measure(l, regime, n)?;
    let li = l.get();
    let limit = RegimeDensity { l, regime };
    let n1 = n / (2 * li);
    let scale = (2.0 * n1 as f64).sqrt();
    // fixed k0 pins the parity of k1, so neighbouring cells are two k1-steps apart
    let width = 2.0 / scale;
    let drift = match regime {
        Regime::Bulk { t } => 2.0 * n1 as f64 * t.tanh(),
        _ => 0.0,
    };
    let pairs = exact
        .to_f64()
        .into_iter()
        .map(|(k, p)| {
            let q = match regime {
                Regime::Poisson { .. } => limit.poisson((n - k) / 2),
                Regime::Bulk { .. } => {
                    let alpha = ((k / li) as f64 - drift) / scale;
                    limit.p1(k % li) * limit.p2_mass(alpha - width / 2.0, alpha + width / 2.0)
                }
                _ => {
                    let alpha = (k / li) as f64 / scale;
                    let lo = (alpha - width / 2.0).max(0.0);
                    limit.p1(k % li) * limit.p2_mass(lo, alpha + width / 2.0)
                }
            };
            (p, q)
        })
        .collect();
    Ok(pairs)
}

/// TV distance and max relative error of the binned exact measure against the limit.
pub fn distance_to_limit(l: Level, regime: Regime, n: usize) -> Result<(f64, f64)> {
    let pairs = binned_masses(l, regime, n)?;
    let q_total: f64 = pairs.iter().map(|(_, q)| q).sum();
    let tv =
        0.5 * pairs.iter().map(|(p, q)| (p - q).abs()).sum::<f64>() + 0.5 * (1.0 - q_total).abs();
    let q_max = pairs.iter().map(|(_, q)| *q).fold(0.0, f64::max);
    let rel = pairs
        .iter()
        .filter(|(_, q)| *q >= 0.01 * q_max)
        .map(|(p, q)| (p / q - 1.0).abs())
        .fold(0.0, f64::max);
    Ok((tv, rel))
}

/// Distances to the limit law over several `N`, computed in parallel.
pub fn convergence_report(regime: Regime, l: Level, n_list: &[usize]) -> Result<Vec<ReportRow>> {
    n_list
        .par_iter()
        .map(|&n| {
            let start = Instant::now();
            let (tv, max_rel_err) = distance_to_limit(l, regime, n)?;
            Ok(ReportRow {
                regime: regime.name().to_string(),
                l: l.get(),
                params: regime.params(),
                n,
                tv,
                max_rel_err,
                runtime_ms: start.elapsed().as_millis() as u64,
            })
        })
        .collect()
}

pub fn report_csv(rows: &[ReportRow]) -> String {
    let mut csv = Csv::new(&[
        "regime",
        "l",
        "params",
        "N",
        "TV",
        "max_rel_err",
        "runtime_ms",
    ]);
    for r in rows {
        csv.row(&[
            r.regime.clone(),
            r.l.to_string(),
            r.params.clone(),
            r.n.to_string(),
            format_g12(r.tv),
            format_g12(r.max_rel_err),
            r.runtime_ms.to_string(),
        ]);
    }
    csv.finish()
}
