//! Finitely supported probability measures over integer labels.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::format::format_g12;

#[derive(Debug, Clone, PartialEq)]
pub enum Weights {
    Exact(BTreeMap<usize, BigRational>),
    Approx(BTreeMap<usize, f64>),
}

/// Probability distribution on labels (weights `k` or small-group nodes).
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    pub weights: Weights,
    pub temperature: Option<f64>,
}

impl Measure {
    pub fn exact(weights: BTreeMap<usize, BigRational>) -> Self {
        Self {
            weights: Weights::Exact(weights),
            temperature: None,
        }
    }

    pub fn approx(weights: BTreeMap<usize, f64>) -> Self {
        Self {
            weights: Weights::Approx(weights),
            temperature: None,
        }
    }

    pub fn with_temperature(mut self, t: f64) -> Self {
        self.temperature = Some(t);
        self
    }

    /// Point mass at `label`, exact.
    pub fn delta(label: usize) -> Self {
        Self::exact(BTreeMap::from([(
            label,
            BigRational::from_integer(1.into()),
        )]))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.weights, Weights::Exact(_))
    }

    pub fn get(&self, label: usize) -> f64 {
        match &self.weights {
            Weights::Exact(w) => w.get(&label).map(rat_to_f64).unwrap_or(0.0),
            Weights::Approx(w) => w.get(&label).copied().unwrap_or(0.0),
        }
    }

    pub fn get_exact(&self, label: usize) -> Option<BigRational> {
        match &self.weights {
            Weights::Exact(w) => Some(w.get(&label).cloned().unwrap_or_else(BigRational::zero)),
            Weights::Approx(_) => None,
        }
    }

    /// Labels with nonzero weight, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.to_f64()
            .into_iter()
            .filter(|(_, p)| *p != 0.0)
            .map(|(k, _)| k)
            .collect()
    }

    pub fn to_f64(&self) -> BTreeMap<usize, f64> {
        match &self.weights {
            Weights::Exact(w) => w.iter().map(|(k, p)| (*k, rat_to_f64(p))).collect(),
            Weights::Approx(w) => w.clone(),
        }
    }

    pub fn total(&self) -> f64 {
        match &self.weights {
            Weights::Exact(w) => rat_to_f64(&w.values().sum()),
            Weights::Approx(w) => w.values().sum(),
        }
    }

    pub fn exact_total(&self) -> Option<BigRational> {
        match &self.weights {
            Weights::Exact(w) => Some(w.values().sum()),
            Weights::Approx(_) => None,
        }
    }

    /// Largest componentwise difference with `other`.
    pub fn max_abs_diff(&self, other: &Measure) -> f64 {
        let a = self.to_f64();
        let b = other.to_f64();
        a.keys()
            .chain(b.keys())
            .map(|k| (a.get(k).unwrap_or(&0.0) - b.get(k).unwrap_or(&0.0)).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Entry {
            label: usize,
            #[serde(skip_serializing_if = "Option::is_none")]
            exact: Option<String>,
            prob: String,
        }
        let entries: Vec<Entry> = match &self.weights {
            Weights::Exact(w) => w
                .iter()
                .map(|(k, p)| Entry {
                    label: *k,
                    exact: Some(p.to_string()),
                    prob: format_g12(rat_to_f64(p)),
                })
                .collect(),
            Weights::Approx(w) => w
                .iter()
                .map(|(k, p)| Entry {
                    label: *k,
                    exact: None,
                    prob: format_g12(*p),
                })
                .collect(),
        };
        let mut obj = serde_json::Map::new();
        obj.insert("exact".into(), self.is_exact().into());
        if let Some(t) = self.temperature {
            obj.insert("t".into(), format_g12(t).into());
        }
        obj.insert("entries".into(), serde_json::to_value(entries).unwrap());
        serde_json::Value::Object(obj)
    }
}

/// Accurate conversion even when numerator and denominator overflow `f64`.
pub fn rat_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let shift = r.denom().bits() as i64 - r.numer().bits() as i64 + 64;
    let scaled: BigInt = if shift >= 0 {
        (r.numer() << shift as u64) / r.denom()
    } else {
        r.numer() / (r.denom() << (-shift) as u64)
    };
    scaled.to_f64().unwrap() * 2f64.powi(-shift as i32)
}
