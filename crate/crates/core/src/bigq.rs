//! Multiplicities, characters, dimensions and measures for the big quantum group.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::{ln_big, BinomialRow};
use crate::error::{Error, Result};
use crate::level::Level;
use crate::measure::Measure;
use crate::qarith::{quantum_number, LaurentPoly};

/// Highest weight `k = l*k1 + k0` with `0 <= k0 <= l-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightLabel {
    pub l: usize,
    pub k: usize,
    pub k1: usize,
    pub k0: usize,
}

impl WeightLabel {
    /// `k0 = l - 1`: the Weyl, simple and tilting modules coincide in character.
    pub fn is_wall(&self) -> bool {
        self.k0 == self.l - 1
    }
}

pub fn decompose_weight(l: Level, k: usize) -> WeightLabel {
    let l = l.get();
    WeightLabel {
        l,
        k,
        k1: k / l,
        k0: k % l,
    }
}

/// `M_k^(l)(N)` evaluated from a precomputed binomial row for `N`.
pub fn tilting_mult_row(row: &BinomialRow, l: Level, k: usize) -> BigInt {
    let n = row.n();
    if k > n || !(n - k).is_multiple_of(2) {
        return BigInt::zero();
    }
    let w = decompose_weight(l, k);
    let (li, k1, k0) = (l.get() as i64, w.k1 as i64, w.k0 as i64);
    let ni = n as i64;
    if w.is_wall() {
        return row.classical(k as i64);
    }
    let mut total = BigInt::zero();
    for m in 0..=(ni - k as i64).div_euclid(2 * li) {
        total += row.classical((k1 + 2 * m) * li + k0);
    }
    let upper = (ni - (k1 + 2) * li + k0 + 2).div_euclid(2 * li);
    for m in 0..=upper {
        total -= row.classical((k1 + 2 * m + 2) * li - k0 - 2);
    }
    total
}

/// Multiplicity of `T(k)` in `T(1)^N`.
pub fn tilting_mult(l: Level, n: usize, k: usize) -> BigInt {
    if k > n || !(n - k).is_multiple_of(2) {
        return BigInt::zero();
    }
    tilting_mult_row(&BinomialRow::new(n), l, k)
}

/// Nonzero multiplicities of `T(1)^N` over the big quantum group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityTable {
    pub l: Level,
    pub n: usize,
    pub entries: BTreeMap<usize, BigInt>,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    l: i64,
    #[serde(rename = "N")]
    n: usize,
    entries: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    k: usize,
    k1: usize,
    k0: usize,
    mult: String,
}

impl MultiplicityTable {
    pub fn get(&self, k: usize) -> BigInt {
        self.entries.get(&k).cloned().unwrap_or_default()
    }

    /// `sum_k M_k dim T(k)`, which must equal `2^N`.
    pub fn total_dimension(&self) -> BigInt {
        self.entries
            .iter()
            .map(|(k, m)| m * tilting_dim(self.l, *k))
            .sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries = self
            .entries
            .iter()
            .map(|(k, m)| {
                let w = decompose_weight(self.l, *k);
                EntryJson {
                    k: *k,
                    k1: w.k1,
                    k0: w.k0,
                    mult: m.to_string(),
                }
            })
            .collect();
        serde_json::to_value(TableJson {
            l: self.l.get() as i64,
            n: self.n,
            entries,
        })
        .unwrap()
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: TableJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let l = Level::new(raw.l)?;
        let mut entries = BTreeMap::new();
        for e in raw.entries {
            let m: BigInt = e
                .mult
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad multiplicity {:?}", e.mult)))?;
            if !m.is_zero() {
                entries.insert(e.k, m);
            }
        }
        Ok(Self {
            l,
            n: raw.n,
            entries,
        })
    }
}

pub fn tilting_mult_table(l: Level, n: usize) -> MultiplicityTable {
    let row = BinomialRow::new(n);
    let entries = (0..=n)
        .into_par_iter()
        .filter(|k| (n - k).is_multiple_of(2))
        .map(|k| (k, tilting_mult_row(&row, l, k)))
        .filter(|(_, m)| !m.is_zero())
        .collect();
    MultiplicityTable { l, n, entries }
}

/// Character of `T(k)` as a Laurent polynomial in `x`.
pub fn tilting_char_poly(l: Level, k: usize) -> LaurentPoly {
    let w = decompose_weight(l, k);
    if w.k1 == 0 {
        quantum_number(k as i64 + 1)
    } else if w.is_wall() {
        quantum_number(((w.k1 + 1) * w.l) as i64)
    } else {
        let e = w.k0 as i64 + 1;
        &LaurentPoly::from_terms([(e, 1), (-e, 1)]) * &quantum_number((w.k1 * w.l) as i64)
    }
}

/// `ln(sinh(n*t)/sinh(t))` for `t > 0`, stable for large `n*t`.
fn ln_sinh_ratio(n: f64, t: f64) -> f64 {
    let ln_sinh2 = |x: f64| x + (-(-2.0 * x).exp_m1()).ln();
    ln_sinh2(n * t) - ln_sinh2(t)
}

/// `ln(2 cosh x)`.
fn ln_2cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p()
}

/// `ln ch_T(k)(e^t)`. Characters are symmetric under `t -> -t`.
pub fn ln_tilting_char(l: Level, k: usize, t: f64) -> f64 {
    let t = t.abs();
    if t == 0.0 {
        return (tilting_dim(l, k) as f64).ln();
    }
    let w = decompose_weight(l, k);
    if w.k1 == 0 {
        ln_sinh_ratio((k + 1) as f64, t)
    } else if w.is_wall() {
        ln_sinh_ratio(((w.k1 + 1) * w.l) as f64, t)
    } else {
        ln_2cosh((w.k0 + 1) as f64 * t) + ln_sinh_ratio((w.k1 * w.l) as f64, t)
    }
}

/// `ch_T(k)(x)` for real `x > 0`; at `x = 1` this is `dim T(k)`.
pub fn tilting_char_eval(l: Level, k: usize, x: f64) -> f64 {
    if x == 1.0 {
        return tilting_dim(l, k) as f64;
    }
    ln_tilting_char(l, k, x.ln()).exp()
}

/// `dim T(k)`.
pub fn tilting_dim(l: Level, k: usize) -> usize {
    let w = decompose_weight(l, k);
    if w.is_wall() {
        w.l * (w.k1 + 1)
    } else if w.k1 == 0 {
        w.k0 + 1
    } else {
        2 * w.k1 * w.l
    }
}

/// Character measure `M_k ch_T(k)(e^t) / ch_T(1)(e^t)^N`, computed in log space.
pub fn character_measure(l: Level, n: usize, t: f64) -> Measure {
    character_measure_from(&tilting_mult_table(l, n), t)
}

pub fn character_measure_from(table: &MultiplicityTable, t: f64) -> Measure {
    let ln_ch1 = ln_tilting_char(table.l, 1, t);
    let weights = table
        .entries
        .par_iter()
        .map(|(k, m)| {
            let ln_p = ln_big(m) + ln_tilting_char(table.l, *k, t) - table.n as f64 * ln_ch1;
            (*k, ln_p.exp())
        })
        .collect();
    Measure::approx(weights).with_temperature(t)
}

/// Plancherel measure `M_k dim T(k) / 2^N`, exact.
pub fn plancherel_measure_big(l: Level, n: usize) -> Measure {
    plancherel_from(&tilting_mult_table(l, n))
}

pub fn plancherel_from(table: &MultiplicityTable) -> Measure {
    let denom = BigInt::one() << table.n;
    let weights = table
        .entries
        .iter()
        .map(|(k, m)| {
            (
                *k,
                BigRational::new(m * tilting_dim(table.l, *k), denom.clone()),
            )
        })
        .collect();
    Measure::exact(weights).with_temperature(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::classical_mult;

    fn lv(l: i64) -> Level {
        Level::new(l).unwrap()
    }

    fn table(pairs: &[(usize, i64)]) -> BTreeMap<usize, BigInt> {
        pairs.iter().map(|&(k, m)| (k, BigInt::from(m))).collect()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(
            decompose_weight(lv(3), 5),
            WeightLabel {
                l: 3,
                k: 5,
                k1: 1,
                k0: 2
            }
        );
        assert_eq!(
            decompose_weight(lv(3), 0),
            WeightLabel {
                l: 3,
                k: 0,
                k1: 0,
                k0: 0
            }
        );
        assert_eq!(
            decompose_weight(lv(5), 14),
            WeightLabel {
                l: 5,
                k: 14,
                k1: 2,
                k0: 4
            }
        );
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(tilting_mult(lv(3), 5, 3), BigInt::from(4));
        assert_eq!(tilting_mult(lv(3), 5, 5), BigInt::from(1));
        assert_eq!(tilting_mult(lv(3), 5, 4), BigInt::zero());
        assert_eq!(tilting_mult(lv(3), 5, 7), BigInt::zero());
        assert_eq!(
            tilting_mult_table(lv(3), 5).entries,
            table(&[(1, 1), (3, 4), (5, 1)])
        );
        assert_eq!(tilting_mult_table(lv(3), 0).entries, table(&[(0, 1)]));
        assert_eq!(
            tilting_mult_table(lv(3), 2).entries,
            table(&[(0, 1), (2, 1)])
        );
    }

    #[test]
    fn below_l_matches_classical() {
        // no weight reaches the first wall when N < l - 1
        for l in [5i64, 7, 9] {
            for n in 0..(l as usize - 1) {
                for k in 0..=n {
                    assert_eq!(tilting_mult(lv(l), n, k), classical_mult(n, k as i64));
                }
            }
        }
    }

    #[test]
    fn character_examples() {
        let p = |t: &[(i64, i64)]| LaurentPoly::from_terms(t.iter().copied());
        assert_eq!(tilting_char_poly(lv(3), 1), p(&[(1, 1), (-1, 1)]));
        assert_eq!(
            tilting_char_poly(lv(3), 3),
            p(&[(3, 1), (1, 2), (-1, 2), (-3, 1)])
        );
        assert_eq!(
            tilting_char_poly(lv(3), 5),
            p(&[(5, 1), (3, 1), (1, 1), (-1, 1), (-3, 1), (-5, 1)])
        );
        assert!((tilting_char_eval(lv(3), 3, 1.0) - 6.0).abs() < 1e-12);
        assert!((tilting_char_eval(lv(3), 3, 1.0 + 1e-9) - 6.0).abs() < 1e-6);
        assert!((tilting_char_eval(lv(3), 1, 0.5f64.exp()) - 2.0 * 0.5f64.cosh()).abs() < 1e-12);
        assert!((tilting_char_eval(lv(3), 5, 1.0) - 6.0).abs() < 1e-12);
    }

    #[test]
    fn char_eval_matches_poly() {
        for l in [3i64, 5] {
            for k in 0..30 {
                let poly = tilting_char_poly(lv(l), k);
                for x in [0.3, 0.9, 1.7] {
                    let a = tilting_char_eval(lv(l), k, x);
                    let b = poly.eval_f64(x);
                    assert!((a / b - 1.0).abs() < 1e-11, "l={l} k={k} x={x}");
                }
                assert_eq!(poly.eval_f64(1.0), tilting_dim(lv(l), k) as f64);
            }
        }
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(tilting_dim(lv(3), 3), 6);
        assert_eq!(tilting_dim(lv(3), 2), 3);
        assert_eq!(tilting_dim(lv(3), 0), 1);
        assert_eq!(tilting_dim(lv(5), 9), 10);
    }

    #[test]
    fn measures_small() {
        let p = plancherel_measure_big(lv(3), 5);
        assert_eq!(p.get_exact(1), Some(rat(2, 32)));
        assert_eq!(p.get_exact(3), Some(rat(24, 32)));
        assert_eq!(p.get_exact(5), Some(rat(6, 32)));
        let p = plancherel_measure_big(lv(3), 2);
        assert_eq!(p.get_exact(0), Some(rat(1, 4)));
        assert_eq!(p.get_exact(2), Some(rat(3, 4)));
        assert_eq!(
            plancherel_measure_big(lv(5), 1).get_exact(1),
            Some(rat(1, 1))
        );

        let c = character_measure(lv(3), 5, 0.0);
        assert!((c.get(1) - 1.0 / 16.0).abs() < 1e-14);
        assert!((c.get(3) - 0.75).abs() < 1e-14);
        assert!((c.get(5) - 3.0 / 16.0).abs() < 1e-14);
        assert!((character_measure(lv(7), 1, 2.3).get(1) - 1.0).abs() < 1e-14);

        let c = character_measure(lv(3), 5, 1.0);
        let e = 1f64.exp();
        let raw = [(1, 1.0), (3, 4.0), (5, 1.0)].map(|(k, m)| m * tilting_char_eval(lv(3), k, e));
        let z: f64 = raw.iter().sum();
        assert!((c.total() - 1.0).abs() < 1e-12);
        assert!((c.get(3) - raw[1] / z).abs() < 1e-13);
    }

    #[test]
    fn character_measure_large_n() {
        for t in [0.0, 0.4, -1.2, 3.0] {
            let c = character_measure(lv(3), 1500, t);
            assert!((c.total() - 1.0).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn json_round_trip() {
        let t = tilting_mult_table(lv(5), 23);
        let v = t.to_json();
        assert_eq!(v["N"], 23);
        assert_eq!(MultiplicityTable::from_json(&v).unwrap(), t);
        let s = serde_json::to_string(&tilting_mult_table(lv(3), 5).to_json()).unwrap();
        assert_eq!(
            s,
            r#"{"N":5,"entries":[{"k":1,"k0":1,"k1":0,"mult":"1"},{"k":3,"k0":0,"k1":1,"mult":"4"},{"k":5,"k0":2,"k1":1,"mult":"1"}],"l":3}"#
        );
    }
}
