//! Restriction to the small quantum group: node labels, multiplicities,
//! dimensions and the two Plancherel measures.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bigq::{tilting_mult_row, tilting_mult_table};
use crate::classical::BinomialRow;
use crate::error::{Error, Result};
use crate::level::Level;
use crate::measure::Measure;

/// Which indecomposable family a node belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "T")]
    Simple,
    #[serde(rename = "T+")]
    Plus,
    #[serde(rename = "T-", alias = "T−")]
    Minus,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Simple => "T",
            Family::Plus => "T+",
            Family::Minus => "T-",
        })
    }
}

/// Node `0..=3l-2` of the small-group lattice.
///
/// `0..=l-2` is `T(index)`, `l-1..=2l-2` is `T+(index)`, `2l-1..=3l-2` is `T-(index-l)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SmallNode {
    pub l: Level,
    pub index: usize,
}

impl SmallNode {
    pub fn new(l: Level, index: usize) -> Result<Self> {
        let max = 3 * l.get() - 2;
        if index > max {
            return Err(Error::IndexOutOfRange { index, max });
        }
        Ok(Self { l, index })
    }

    pub fn family(&self) -> Family {
        let l = self.l.get();
        if self.index + 2 <= l {
            Family::Simple
        } else if self.index < 2 * l - 1 {
            Family::Plus
        } else {
            Family::Minus
        }
    }

    /// Highest weight shown next to the family symbol.
    pub fn weight(&self) -> usize {
        match self.family() {
            Family::Minus => self.index - self.l.get(),
            _ => self.index,
        }
    }
}

impl fmt::Display for SmallNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family(), self.weight())
    }
}

/// Decomposition of the big-group module `T(k)` over the small quantum group.
pub fn restrict_big_to_small(l: Level, k: usize) -> BTreeMap<usize, usize> {
    let li = l.get();
    if k + 2 <= li {
        return BTreeMap::from([(k, 1)]);
    }
    let shifted = k - (li - 1);
    let (k1, k0) = (shifted / li, shifted % li);
    // j runs over -k1..=k1 in steps of 2, so every j has the parity of k1
    let node = if k1 % 2 == 0 {
        li - 1 + k0
    } else {
        2 * li - 1 + k0
    };
    BTreeMap::from([(node, k1 + 1)])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallMultiplicityTable {
    pub l: Level,
    pub n: usize,
    pub entries: BTreeMap<usize, BigInt>,
}

#[derive(Serialize, Deserialize)]
struct SmallTableJson {
    l: i64,
    #[serde(rename = "N")]
    n: usize,
    entries: Vec<SmallEntryJson>,
}

#[derive(Serialize, Deserialize)]
struct SmallEntryJson {
    node: usize,
    family: Family,
    mult: String,
}

impl SmallMultiplicityTable {
    pub fn get(&self, index: usize) -> BigInt {
        self.entries.get(&index).cloned().unwrap_or_default()
    }

    pub fn total_dimension(&self) -> BigInt {
        self.entries
            .iter()
            .map(|(i, m)| m * small_dim(self.l, *i))
            .sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries = self
            .entries
            .iter()
            .map(|(i, m)| SmallEntryJson {
                node: *i,
                family: SmallNode {
                    l: self.l,
                    index: *i,
                }
                .family(),
                mult: m.to_string(),
            })
            .collect();
        serde_json::to_value(SmallTableJson {
            l: self.l.get() as i64,
            n: self.n,
            entries,
        })
        .unwrap()
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: SmallTableJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let l = Level::new(raw.l)?;
        let mut entries = BTreeMap::new();
        for e in raw.entries {
            let node = SmallNode::new(l, e.node)?;
            if node.family() != e.family {
                return Err(Error::InvalidArgument(format!(
                    "node {} is not in family {}",
                    e.node, e.family
                )));
            }
            let m: BigInt = e
                .mult
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad multiplicity {:?}", e.mult)))?;
            if !m.is_zero() {
                entries.insert(e.node, m);
            }
        }
        Ok(Self {
            l,
            n: raw.n,
            entries,
        })
    }
}

/// Push the big-group decomposition of `T(1)^N` through the restriction.
pub fn small_mult_from_big(l: Level, n: usize) -> SmallMultiplicityTable {
    let mut entries: BTreeMap<usize, BigInt> = BTreeMap::new();
    for (k, m) in tilting_mult_table(l, n).entries {
        for (node, copies) in restrict_big_to_small(l, k) {
            *entries.entry(node).or_default() += &m * copies;
        }
    }
    SmallMultiplicityTable { l, n, entries }
}

/// Closed-form multiplicity of small-group node `index` in `T(1)^N`.
pub fn small_mult_closed(l: Level, n: usize, index: usize) -> Result<BigInt> {
    SmallNode::new(l, index)?;
    Ok(small_mult_closed_row(&BinomialRow::new(n), l, index))
}

pub fn small_mult_closed_row(row: &BinomialRow, l: Level, index: usize) -> BigInt {
    let li = l.get() as i64;
    let n = row.n() as i64;
    let i = index as i64;
    let f = |k: i64| row.classical(k);
    let upto = |num: i64| 0..=num.div_euclid(2 * li);
    let mut total = BigInt::zero();
    if i <= li - 2 {
        return tilting_mult_row(row, l, index);
    } else if i == li - 1 {
        // floor(N/2l + 1/2)
        for k in upto(n + li) {
            total += f(li - 1 + 2 * k * li) * (2 * k + 1);
        }
    } else if i == 2 * li - 1 {
        // floor(N/2l + 1)
        for k in upto(n + 2 * li) {
            total += f(2 * li - 1 + 2 * k * li) * (2 * k + 2);
        }
    } else if i < 2 * li - 1 {
        let k0 = i - li;
        for k in upto(n).filter(|k| *k >= 1) {
            total += f(k0 - li - 2 * k * li) * (k * k);
        }
        for k in upto(n - li) {
            total += f(k0 + li + 2 * k * li) * ((k + 1) * (k + 1));
        }
    } else {
        let k0 = i - 2 * li;
        for k in upto(n - li).filter(|k| *k >= 1) {
            total += f(k0 - 2 * li - 2 * k * li) * (k * k + k);
        }
        for k in upto(n - 2 * li) {
            total += f(k0 + 2 * li + 2 * k * li) * ((k + 1) * (k + 1) + (k + 1));
        }
    }
    total
}

/// Closed-form table over all nodes.
pub fn small_mult_closed_table(l: Level, n: usize) -> SmallMultiplicityTable {
    let row = BinomialRow::new(n);
    let entries = (0..l.small_nodes())
        .map(|i| (i, small_mult_closed_row(&row, l, i)))
        .filter(|(_, m)| !m.is_zero())
        .collect();
    SmallMultiplicityTable { l, n, entries }
}

pub fn small_dim(l: Level, index: usize) -> usize {
    let li = l.get();
    if index + 2 <= li {
        index + 1
    } else if index == li - 1 || index == 2 * li - 1 {
        li
    } else {
        2 * li
    }
}

/// Quantum dimension at `q = exp(i*pi/l)`; zero outside the simple range.
pub fn small_qdim(l: Level, index: usize) -> f64 {
    let li = l.get();
    if index + 2 > li {
        return 0.0;
    }
    let a = PI / li as f64;
    (a * (index + 1) as f64).sin() / a.sin()
}

pub fn small_plancherel(l: Level, n: usize) -> Measure {
    small_plancherel_from(&small_mult_from_big(l, n))
}

pub fn small_plancherel_from(table: &SmallMultiplicityTable) -> Measure {
    let denom = BigInt::one() << table.n;
    let weights = table
        .entries
        .iter()
        .map(|(i, m)| {
            (
                *i,
                BigRational::new(m * small_dim(table.l, *i), denom.clone()),
            )
        })
        .collect();
    Measure::exact(weights)
}

/// Quantum Plancherel measure `m_k qdim(k) / qdim(1)^N` on the simple nodes.
pub fn quantum_plancherel(l: Level, n: usize) -> Measure {
    let table = small_mult_from_big(l, n);
    let ln_q1 = small_qdim(l, 1).ln();
    let weights = table
        .entries
        .iter()
        .filter(|(i, _)| small_qdim(l, **i) > 0.0)
        .map(|(i, m)| {
            let ln_p = crate::classical::ln_big(m) + small_qdim(l, *i).ln() - n as f64 * ln_q1;
            (*i, ln_p.exp())
        })
        .collect();
    Measure::approx(weights)
}

/// Sanity helper: total dimension of a restricted module.
pub fn restricted_dim(l: Level, k: usize) -> usize {
    restrict_big_to_small(l, k)
        .iter()
        .map(|(i, c)| c * small_dim(l, *i))
        .sum()
}
