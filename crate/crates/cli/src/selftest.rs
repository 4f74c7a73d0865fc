use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::{json, Value};
use tilting_core::bigq::{
    character_measure, plancherel_measure_big, tilting_char_poly, tilting_dim, tilting_mult_table,
};
use tilting_core::format::Csv;
use tilting_core::markov::{
    closed_form_stationary, iterate, stationary, transition_kernel, Model, STATIONARY_TOL,
};
use tilting_core::paths::path_layers;
use tilting_core::qarith::check_qbinom_identities;
use tilting_core::smallq::{
    quantum_plancherel, small_dim, small_mult_closed_table, small_mult_from_big, small_plancherel,
};
use tilting_core::spectral::{
    biorthogonality_residual, integral_grid_bound, integral_mult, CircleGrid,
};
use tilting_core::{LaurentPoly, Level, Measure, StepKind, StepSet};

use crate::commands::{render_json, Output};
use crate::Format;

const INTEGRAL_TOL: f64 = 1e-6;
const BIORTHO_TOL: f64 = 1e-8;
const FLOAT_TOL: f64 = 1e-12;
const STATIONARY_MATCH_TOL: f64 = 1e-8;
const QBINOM_TOL: f64 = 1e-9;

type Suite = std::result::Result<String, String>;
type SuiteFn = fn(&Scale) -> Suite;

struct Scale {
    levels: Vec<Level>,
    n_max: usize,
    integral_n_max: usize,
    biortho_k_max: usize,
    stationary_levels: Vec<Level>,
}

impl Scale {
    fn new(quick: bool) -> Self {
        let lv = |v: &[i64]| {
            v.iter()
                .map(|&l| Level::new(l).expect("valid level"))
                .collect::<Vec<_>>()
        };
        if quick {
            Self {
                levels: lv(&[3, 5]),
                n_max: 12,
                integral_n_max: 10,
                biortho_k_max: 12,
                stationary_levels: lv(&[3, 5]),
            }
        } else {
            Self {
                levels: lv(&[3, 5]),
                n_max: 24,
                integral_n_max: 20,
                biortho_k_max: 20,
                stationary_levels: lv(&[3, 5, 7, 9]),
            }
        }
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn big_oracles(s: &Scale) -> Suite {
    let mut worst: f64 = 0.0;
    for &l in &s.levels {
        let layers =
            path_layers(&StepSet::new(l, StepKind::Big), s.n_max, 0).map_err(|e| e.to_string())?;
        for (n, layer) in layers.iter().enumerate() {
            let table = tilting_mult_table(l, n);
            check(table.entries == layer.counts, || {
                format!("closed form and paths differ at l={l} N={n}")
            })?;
            if n > s.integral_n_max {
                continue;
            }
            for k in 0..=n + 1 {
                let grid = CircleGrid::for_level(l, integral_grid_bound(l, n, k) + 1)
                    .map_err(|e| e.to_string())?;
                let v = integral_mult(l, n, k, &grid).map_err(|e| e.to_string())?;
                let exact = table.get(k);
                worst = worst.max((v - v.round()).abs());
                check(
                    BigInt::from(v.round() as i64) == exact && (v - v.round()).abs() < INTEGRAL_TOL,
                    || format!("integral {v} vs {exact} at N={n} k={k}"),
                )?;
            }
        }
    }
    Ok(format!("max integral residual {worst:.1e}"))
}

fn small_oracles(s: &Scale) -> Suite {
    for &l in &s.levels {
        let layers = path_layers(&StepSet::new(l, StepKind::Small), s.n_max, 0)
            .map_err(|e| e.to_string())?;
        for (n, layer) in layers.iter().enumerate() {
            let from_big = small_mult_from_big(l, n);
            check(from_big == small_mult_closed_table(l, n), || {
                format!("closed form differs at N={n}")
            })?;
            check(from_big.entries == layer.counts, || {
                format!("paths differ at N={n}")
            })?;
        }
    }
    Ok(format!("N <= {}", s.n_max))
}

fn dimensions(s: &Scale) -> Suite {
    for &l in &s.levels {
        for n in 0..=s.n_max {
            let two_n = BigInt::from(1) << n;
            let big: BigInt = tilting_mult_table(l, n)
                .entries
                .iter()
                .map(|(k, m)| m * tilting_dim(l, *k))
                .sum();
            let small: BigInt = small_mult_from_big(l, n)
                .entries
                .iter()
                .map(|(i, m)| m * small_dim(l, *i))
                .sum();
            check(big == two_n && small == two_n, || {
                format!("dimension sum wrong at N={n}")
            })?;
        }
    }
    Ok("sum of M dim equals 2^N".into())
}

fn characters(s: &Scale) -> Suite {
    let x = LaurentPoly::x_plus_inverse();
    for &l in &s.levels {
        let mut power = LaurentPoly::one();
        for n in 0..=s.n_max {
            let mut sum = LaurentPoly::zero();
            for (k, m) in tilting_mult_table(l, n).entries {
                sum += &tilting_char_poly(l, k).scale(&m);
            }
            check(sum == power, || {
                format!("character identity fails at N={n}")
            })?;
            power = &power * &x;
        }
    }
    Ok("sum of M ch equals (x + 1/x)^N".into())
}

fn worked_example(_: &Scale) -> Suite {
    let l = Level::new(3).expect("valid level");
    let want = |pairs: [(usize, i64); 3]| -> BTreeMap<usize, BigInt> {
        pairs.map(|(k, m)| (k, m.into())).into()
    };
    check(
        tilting_mult_table(l, 5).entries == want([(1, 1), (3, 4), (5, 1)]),
        || "big table".into(),
    )?;
    check(
        small_mult_from_big(l, 5).entries == want([(1, 1), (3, 4), (5, 2)]),
        || "small table".into(),
    )?;
    let p = plancherel_measure_big(l, 5).to_f64();
    let expected = [(1, 1.0 / 16.0), (3, 0.75), (5, 3.0 / 16.0)];
    check(
        expected.iter().all(|(k, w)| (p[k] - w).abs() < FLOAT_TOL),
        || "Plancherel weights".into(),
    )?;
    Ok("l=3 N=5".into())
}

fn biorthogonality(s: &Scale) -> Suite {
    let mut worst: f64 = 0.0;
    for &l in &s.levels {
        let grid = CircleGrid::for_level(l, 512).map_err(|e| e.to_string())?;
        worst = worst
            .max(biorthogonality_residual(l, s.biortho_k_max, &grid).map_err(|e| e.to_string())?);
    }
    check(worst < BIORTHO_TOL, || format!("residual {worst:.1e}"))?;
    Ok(format!("max residual {worst:.1e}"))
}

fn markov(s: &Scale) -> Suite {
    let err = |e: tilting_core::Error| e.to_string();
    for &l in &s.levels {
        let sp = transition_kernel(Model::SmallPlancherel, l, None).map_err(err)?;
        let bp = transition_kernel(Model::BigPlancherel, l, Some(s.n_max + 2)).map_err(err)?;
        let ch =
            transition_kernel(Model::BigCharacter { t: 0.5 }, l, Some(s.n_max + 2)).map_err(err)?;
        let sq = transition_kernel(Model::SmallQuantum, l, None).map_err(err)?;
        let start = Measure::delta(0);
        let (mut a, mut b, mut c, mut d) = (start.clone(), start.clone(), start.clone(), start);
        for n in 0..=s.n_max {
            check(a.weights == small_plancherel(l, n).weights, || {
                format!("small-plancherel at N={n}")
            })?;
            check(b.weights == plancherel_measure_big(l, n).weights, || {
                format!("big-plancherel at N={n}")
            })?;
            check(
                c.max_abs_diff(&character_measure(l, n, 0.5)) < FLOAT_TOL,
                || format!("big-character at N={n}"),
            )?;
            check(
                d.max_abs_diff(&quantum_plancherel(l, n)) < FLOAT_TOL,
                || format!("small-quantum at N={n}"),
            )?;
            a = iterate(&sp, &a, 1).map_err(err)?;
            b = iterate(&bp, &b, 1).map_err(err)?;
            c = iterate(&ch, &c, 1).map_err(err)?;
            d = iterate(&sq, &d, 1).map_err(err)?;
        }
    }
    Ok("iterates match measures".into())
}

fn stationary_suite(s: &Scale) -> Suite {
    let mut worst: f64 = 0.0;
    for &l in &s.stationary_levels {
        for model in [Model::SmallPlancherel, Model::SmallQuantum] {
            let kernel = transition_kernel(model, l, None).map_err(|e| e.to_string())?;
            let pi = stationary(&kernel, STATIONARY_TOL).map_err(|e| e.to_string())?;
            let d = pi.max_abs_diff(&closed_form_stationary(model, l).map_err(|e| e.to_string())?);
            worst = worst.max(d);
        }
    }
    check(worst < STATIONARY_MATCH_TOL, || {
        format!("deviation {worst:.1e}")
    })?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn qbinom(s: &Scale) -> Suite {
    let mut worst: f64 = 0.0;
    for &l in &s.stationary_levels {
        if l.get() > 7 {
            continue;
        }
        worst = worst.max(check_qbinom_identities(l, 3 * l.get()));
    }
    check(worst < QBINOM_TOL, || format!("deviation {worst:.1e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

pub fn run(quick: bool, format: Format) -> Output {
    let scale = Scale::new(quick);
    let suites: [(&str, SuiteFn); 9] = [
        ("big-oracles", big_oracles),
        ("small-oracles", small_oracles),
        ("dimensions", dimensions),
        ("characters", characters),
        ("worked-example", worked_example),
        ("biorthogonality", biorthogonality),
        ("markov", markov),
        ("stationary", stationary_suite),
        ("qbinom", qbinom),
    ];
    let results: Vec<(&str, Suite)> = suites.iter().map(|(name, f)| (*name, f(&scale))).collect();
    let failed: Vec<&str> = results
        .iter()
        .filter(|(_, r)| r.is_err())
        .map(|(n, _)| *n)
        .collect();
    let text = match format {
        Format::Json => {
            let entries: Vec<Value> = results
                .iter()
                .map(|(name, r)| {
                    let (passed, detail) = match r {
                        Ok(d) => (true, d),
                        Err(d) => (false, d),
                    };
                    json!({"suite": name, "passed": passed, "detail": detail})
                })
                .collect();
            render_json(&json!({"quick": quick, "passed": failed.is_empty(), "suites": entries}))
        }
        Format::Csv => {
            let mut csv = Csv::new(&["suite", "passed", "detail"]);
            for (name, r) in &results {
                let (passed, detail) = match r {
                    Ok(d) => ("true", d),
                    Err(d) => ("false", d),
                };
                csv.row(&[
                    name.to_string(),
                    passed.to_string(),
                    detail.replace(',', ";"),
                ]);
            }
            csv.finish()
        }
    };
    let failure = (!failed.is_empty()).then(|| format!("suites failed: {}", failed.join(" ")));
    Output { text, failure }
}
