use std::str::FromStr;

use serde_json::{json, Map, Value};
use tilting_core::asymptotics::{
    char_density_asymptotic, convergence_report, ln_mult_asymptotic, parity_split,
    planch_density_asymptotic, Regime,
};
use tilting_core::bigq::{
    character_measure, character_measure_from, plancherel_from, plancherel_measure_big,
    tilting_mult, tilting_mult_table,
};
use tilting_core::classical::ln_big;
use tilting_core::format::{format_g12, Csv};
use tilting_core::markov::{
    iterate, measure_csv, stationary, transition_kernel, Model, Rows, TransitionKernel,
    STATIONARY_TOL,
};
use tilting_core::measure::rat_to_f64;
use tilting_core::paths::{count_paths, dp_table_csv, path_layers};
use tilting_core::smallq::{
    quantum_plancherel, restrict_big_to_small, small_mult_from_big, small_plancherel,
};
use tilting_core::spectral::{integral_grid_bound, integral_mult, CircleGrid};
use tilting_core::{Level, Measure, SmallNode, StepKind, StepSet};

use crate::{
    selftest, AsymCommand, Cli, CliError, CliResult, Command, Format, Group, LevelArg,
    MarkovCommand, MeasureKind, ModelArgs, MultCommand, PathArgs, PathsCommand, RegimeKind,
    SizeArgs,
};

/// Rendered command output; `failure` is set when a verification did not pass.
pub struct Output {
    pub text: String,
    pub failure: Option<String>,
}

impl From<String> for Output {
    fn from(text: String) -> Self {
        Self {
            text,
            failure: None,
        }
    }
}

pub fn render_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn level(arg: LevelArg) -> CliResult<Level> {
    Level::new(arg.l).map_err(|e| CliError::Usage(e.to_string()))
}

fn steps_count(n: i64) -> CliResult<usize> {
    usize::try_from(n).map_err(|_| CliError::Usage(format!("N must be non-negative, got {n}")))
}

fn size(args: SizeArgs) -> CliResult<(Level, usize)> {
    Ok((level(args.level)?, steps_count(args.n)?))
}

fn kind(group: Group) -> StepKind {
    match group {
        Group::Big => StepKind::Big,
        Group::Small => StepKind::Small,
    }
}

fn object(value: Value) -> Map<String, Value> {
    match value {
        Value::Object(m) => m,
        _ => unreachable!("library JSON documents are objects"),
    }
}

pub fn run(cli: &Cli) -> CliResult<Output> {
    let format = cli.format;
    let text = match &cli.command {
        Command::Mult { group } => mult(group, format)?,
        Command::Restrict { level: l, k } => restrict(level(*l)?, *k, format),
        Command::Measure { kind, size: s, t } => measure(*kind, *s, *t, format)?,
        Command::Paths { command } => paths(command, format)?,
        Command::Integral { size: s, k, grid } => integral(*s, *k, *grid, format)?,
        Command::Markov { command } => markov(command, format)?,
        Command::Asym { command } => asym(command, format)?,
        Command::Selftest { quick } => return Ok(selftest::run(*quick, format)),
    };
    Ok(text.into())
}

fn mult(group: &MultCommand, format: Format) -> CliResult<String> {
    Ok(match group {
        MultCommand::Big(s) => {
            let (l, n) = size(*s)?;
            let table = tilting_mult_table(l, n);
            match format {
                Format::Json => render_json(&table.to_json()),
                Format::Csv => {
                    let mut csv = Csv::new(&["k", "k1", "k0", "mult"]);
                    for (k, m) in &table.entries {
                        let li = l.get();
                        csv.row(&[
                            k.to_string(),
                            (k / li).to_string(),
                            (k % li).to_string(),
                            m.to_string(),
                        ]);
                    }
                    csv.finish()
                }
            }
        }
        MultCommand::Small(s) => {
            let (l, n) = size(*s)?;
            let table = small_mult_from_big(l, n);
            match format {
                Format::Json => render_json(&table.to_json()),
                Format::Csv => {
                    let mut csv = Csv::new(&["node", "family", "mult"]);
                    for (i, m) in &table.entries {
                        let family = SmallNode { l, index: *i }.family();
                        csv.row(&[i.to_string(), family.to_string(), m.to_string()]);
                    }
                    csv.finish()
                }
            }
        }
    })
}

fn restrict(l: Level, k: usize, format: Format) -> String {
    let copies = restrict_big_to_small(l, k);
    match format {
        Format::Json => {
            let entries: Vec<Value> = copies
                .iter()
                .map(|(i, c)| json!({"node": i, "family": SmallNode { l, index: *i }.family(), "copies": c}))
                .collect();
            render_json(&json!({"l": l.get(), "k": k, "entries": entries}))
        }
        Format::Csv => {
            let mut csv = Csv::new(&["node", "family", "copies"]);
            for (i, c) in &copies {
                csv.row(&[
                    i.to_string(),
                    SmallNode { l, index: *i }.family().to_string(),
                    c.to_string(),
                ]);
            }
            csv.finish()
        }
    }
}

fn measure_output(m: &Measure, header: Map<String, Value>, format: Format) -> String {
    match format {
        Format::Json => {
            let mut obj = object(m.to_json());
            obj.extend(header);
            render_json(&Value::Object(obj))
        }
        Format::Csv => measure_csv(m),
    }
}

fn measure(kind: MeasureKind, s: SizeArgs, t: f64, format: Format) -> CliResult<String> {
    let (l, n) = size(s)?;
    if kind != MeasureKind::Char && t != 0.0 {
        return Err(CliError::Usage(
            "--t only applies to the character measure".into(),
        ));
    }
    let (name, m) = match kind {
        MeasureKind::Char => ("char", character_measure(l, n, t)),
        MeasureKind::Planch => ("planch", plancherel_measure_big(l, n)),
        MeasureKind::SmallPlanch => ("small-planch", small_plancherel(l, n)),
        MeasureKind::Qplanch => ("qplanch", quantum_plancherel(l, n)),
    };
    let header = object(json!({"measure": name, "l": l.get(), "N": n}));
    Ok(measure_output(&m, header, format))
}

fn paths(command: &PathsCommand, format: Format) -> CliResult<String> {
    let describe = |p: &PathArgs| -> CliResult<(StepSet, usize)> {
        let (l, n) = size(p.size)?;
        Ok((StepSet::new(l, kind(p.group)), n))
    };
    Ok(match command {
        PathsCommand::Count { path, end } => {
            let (steps, n) = describe(path)?;
            let count = count_paths(&steps, n, path.start, *end)?;
            match format {
                Format::Json => render_json(&json!({
                    "group": steps.kind.to_string(),
                    "l": steps.l.get(),
                    "N": n,
                    "start": path.start,
                    "end": end,
                    "count": count.to_string(),
                })),
                Format::Csv => {
                    let mut csv = Csv::new(&["group", "l", "N", "start", "end", "count"]);
                    csv.row(&[
                        steps.kind.to_string(),
                        steps.l.get().to_string(),
                        n.to_string(),
                        path.start.to_string(),
                        end.to_string(),
                        count.to_string(),
                    ]);
                    csv.finish()
                }
            }
        }
        PathsCommand::Table(path) => {
            let (steps, n) = describe(path)?;
            match format {
                Format::Csv => dp_table_csv(&steps, n, path.start)?,
                Format::Json => {
                    let layers: Vec<Value> = path_layers(&steps, n, path.start)?
                        .iter()
                        .map(|layer| {
                            let counts: Vec<Value> = layer
                                .counts
                                .iter()
                                .map(|(k, c)| json!({"node": k, "count": c.to_string()}))
                                .collect();
                            json!({"N": layer.n, "counts": counts})
                        })
                        .collect();
                    render_json(&json!({
                        "group": steps.kind.to_string(),
                        "l": steps.l.get(),
                        "start": path.start,
                        "layers": layers,
                    }))
                }
            }
        }
    })
}

fn integral(s: SizeArgs, k: usize, grid: Option<usize>, format: Format) -> CliResult<String> {
    let (l, n) = size(s)?;
    let m = grid.unwrap_or_else(|| integral_grid_bound(l, n, k) + 1);
    let circle = CircleGrid::for_level(l, m)?;
    let value = integral_mult(l, n, k, &circle)?;
    let rounded = value.round();
    let closed = tilting_mult(l, n, k);
    let fields = [
        ("l", l.get().to_string()),
        ("N", n.to_string()),
        ("k", k.to_string()),
        ("grid", m.to_string()),
        ("value", format_g12(value)),
        ("rounded", format!("{rounded:.0}")),
        ("residual", format_g12((value - rounded).abs())),
        ("closed_form", closed.to_string()),
    ];
    Ok(key_values(&fields, format))
}

fn key_values(fields: &[(&str, String)], format: Format) -> String {
    match format {
        Format::Json => {
            let obj: Map<String, Value> = fields
                .iter()
                .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
                .collect();
            render_json(&Value::Object(obj))
        }
        Format::Csv => {
            let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let mut csv = Csv::new(&header);
            let row: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
            csv.row(&row);
            csv.finish()
        }
    }
}

fn model(args: &ModelArgs) -> CliResult<(Model, Level)> {
    let l = level(args.level)?;
    let model = match Model::from_str(&args.model).map_err(|e| CliError::Usage(e.to_string()))? {
        Model::BigCharacter { .. } => Model::BigCharacter { t: args.t },
        _ if args.t != 0.0 => {
            return Err(CliError::Usage(
                "--t only applies to the big-character model".into(),
            ))
        }
        other => other,
    };
    if !model.is_big() && args.cutoff.is_some() {
        return Err(CliError::Usage(
            "--cutoff only applies to big models".into(),
        ));
    }
    Ok((model, l))
}

fn model_header(kernel: &TransitionKernel) -> Map<String, Value> {
    let mut obj = object(json!({"model": kernel.model.name(), "l": kernel.l.get()}));
    if let Some(c) = kernel.cutoff {
        obj.insert("cutoff".into(), c.into());
    }
    obj
}

fn markov(command: &MarkovCommand, format: Format) -> CliResult<String> {
    Ok(match command {
        MarkovCommand::Kernel(args) => {
            let (model, l) = model(args)?;
            if model.is_big() && args.cutoff.is_none() {
                return Err(CliError::Usage(format!("model {model} needs --cutoff")));
            }
            let kernel = transition_kernel(model, l, args.cutoff)?;
            match format {
                Format::Csv => kernel.to_csv(),
                Format::Json => {
                    let rows: Vec<Value> = match &kernel.rows {
                        Rows::Exact(r) => r
                            .iter()
                            .flat_map(|(n, row)| {
                                row.iter().map(move |(m, p)| {
                                    json!({"from": n, "to": m, "prob": format_g12(rat_to_f64(p)), "exact": p.to_string()})
                                })
                            })
                            .collect(),
                        Rows::Approx(r) => r
                            .iter()
                            .flat_map(|(n, row)| row.iter().map(move |(m, p)| json!({"from": n, "to": m, "prob": format_g12(*p)})))
                            .collect(),
                    };
                    let mut obj = model_header(&kernel);
                    obj.insert("rows".into(), rows.into());
                    render_json(&Value::Object(obj))
                }
            }
        }
        MarkovCommand::Iterate { model: args, n } => {
            let (model, l) = model(args)?;
            let n = steps_count(*n)?;
            let cutoff = if model.is_big() {
                Some(args.cutoff.unwrap_or(n + 2))
            } else {
                None
            };
            let kernel = transition_kernel(model, l, cutoff)?;
            let m = iterate(&kernel, &Measure::delta(0), n)?;
            let mut header = model_header(&kernel);
            header.insert("N".into(), n.into());
            measure_output(&m, header, format)
        }
        MarkovCommand::Stationary(args) => {
            let (model, l) = model(args)?;
            let kernel = transition_kernel(model, l, args.cutoff)?;
            let pi = stationary(&kernel, STATIONARY_TOL)?;
            measure_output(&pi, model_header(&kernel), format)
        }
    })
}

fn regime(
    kind: RegimeKind,
    t: Option<f64>,
    u: Option<f64>,
    theta: Option<f64>,
) -> CliResult<Regime> {
    let unused = |name: &str, v: Option<f64>| -> CliResult<()> {
        match v {
            Some(_) => Err(CliError::Usage(
                format!("--{name} does not apply to the {kind:?} regime").to_lowercase(),
            )),
            None => Ok(()),
        }
    };
    let missing =
        |name: &str| CliError::Usage(format!("the {kind:?} regime needs --{name}").to_lowercase());
    Ok(match kind {
        RegimeKind::Bulk => {
            unused("u", u)?;
            unused("theta", theta)?;
            Regime::Bulk {
                t: t.ok_or_else(|| missing("t"))?,
            }
        }
        RegimeKind::Plancherel => {
            unused("t", t)?;
            unused("u", u)?;
            unused("theta", theta)?;
            Regime::Plancherel
        }
        RegimeKind::Intermediate => {
            unused("t", t)?;
            unused("theta", theta)?;
            Regime::Intermediate {
                u: u.ok_or_else(|| missing("u"))?,
            }
        }
        RegimeKind::Poisson => {
            unused("t", t)?;
            unused("u", u)?;
            let theta = theta.unwrap_or(1.0);
            if theta <= 0.0 {
                return Err(CliError::Usage(format!(
                    "--theta must be positive, got {theta}"
                )));
            }
            Regime::Poisson { theta }
        }
    })
}

fn asym(command: &AsymCommand, format: Format) -> CliResult<String> {
    Ok(match command {
        AsymCommand::Report {
            regime: kind,
            level: l,
            n,
            t,
            u,
            theta,
            omit_timing,
        } => {
            let l = level(*l)?;
            let regime = regime(*kind, *t, *u, *theta)?;
            let rows = convergence_report(regime, l, n)?;
            match format {
                Format::Json => {
                    let rows: Vec<Value> = rows
                        .iter()
                        .map(|r| {
                            let mut obj = object(json!({
                                "N": r.n,
                                "TV": format_g12(r.tv),
                                "max_rel_err": format_g12(r.max_rel_err),
                            }));
                            if !omit_timing {
                                obj.insert("runtime_ms".into(), r.runtime_ms.into());
                            }
                            Value::Object(obj)
                        })
                        .collect();
                    render_json(
                        &json!({"regime": regime.name(), "l": l.get(), "params": regime.params(), "rows": rows}),
                    )
                }
                Format::Csv => {
                    let mut header = vec!["regime", "l", "params", "N", "TV", "max_rel_err"];
                    if !omit_timing {
                        header.push("runtime_ms");
                    }
                    let mut csv = Csv::new(&header);
                    for r in &rows {
                        let mut row = vec![
                            r.regime.clone(),
                            r.l.to_string(),
                            r.params.clone(),
                            r.n.to_string(),
                            format_g12(r.tv),
                            format_g12(r.max_rel_err),
                        ];
                        if !omit_timing {
                            row.push(r.runtime_ms.to_string());
                        }
                        csv.row(&row);
                    }
                    csv.finish()
                }
            }
        }
        AsymCommand::Eval { size: s, k, t } => {
            let (l, n) = size(*s)?;
            let split = parity_split(l, n, *k)?;
            let table = tilting_mult_table(l, n);
            let exact = table.get(*k);
            let ln_exact = ln_big(&exact);
            let ln_asym = ln_mult_asymptotic(l, n, *k)?;
            let mut fields = vec![
                ("l", l.get().to_string()),
                ("N", n.to_string()),
                ("k", k.to_string()),
                ("N1", split.n1.to_string()),
                ("N0", split.n0.to_string()),
                ("k1", split.k1.to_string()),
                ("k0", split.k0.to_string()),
                ("gamma", split.gamma.to_string()),
                ("xi", format_g12(split.xi)),
                ("mult_exact", exact.to_string()),
                ("ln_mult_exact", format_g12(ln_exact)),
                ("ln_mult_asymptotic", format_g12(ln_asym)),
                ("mult_rel_err", format_g12((ln_asym - ln_exact).exp_m1())),
                ("planch_exact", format_g12(plancherel_from(&table).get(*k))),
                (
                    "planch_asymptotic",
                    format_g12(planch_density_asymptotic(l, n, *k)?),
                ),
            ];
            if let Some(t) = t {
                let exact = character_measure_from(&table, *t).get(*k);
                fields.push(("t", format_g12(*t)));
                fields.push(("char_exact", format_g12(exact)));
                fields.push((
                    "char_asymptotic",
                    format_g12(char_density_asymptotic(l, n, *k, *t)?),
                ));
            }
            key_values(&fields, format)
        }
    })
}
