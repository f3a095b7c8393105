//! Output rendering: canonical JSON, aligned text tables and CSV.
//!
//! JSON documents are `{meta, results}` objects with sorted keys and every
//! float written in `{:.16e}` form (17 significant digits), so parsing and
//! re-serializing a document reproduces it byte for byte. Non-finite values
//! become `null`.

use std::io::{self, Write};

use cmc_core::simulate::CriterionSummary;
use cmc_core::{Criterion, Dataset, MonteCarloResult, Scenario, ScenarioKind, SelectionReport};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Map, Value};

use crate::data::INTERCEPT;
use crate::error::Result;
use crate::tables::{Layout, Preset};

struct Canonical<'a>(PrettyFormatter<'a>);

impl Formatter for Canonical<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes `value` in canonical form, newline-terminated.
pub fn to_canonical_json(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Canonical(PrettyFormatter::with_indent(b"  ")));
    serde::Serialize::serialize(value, &mut ser).expect("writing to a Vec cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

fn num(v: f64) -> Value {
    // serde_json maps non-finite floats to null.
    Value::from(v)
}

fn opt_num(v: Option<f64>) -> Value {
    v.map_or(Value::Null, num)
}

fn alpha_of(c: Criterion) -> Option<f64> {
    match c {
        Criterion::Cmc { alpha } => Some(alpha),
        _ => None,
    }
}

fn variable_names(data: &Dataset, indices: &[usize]) -> Vec<String> {
    indices.iter().map(|&j| data.names()[j - 1].clone()).collect()
}

/// Describes where a selection run's data came from.
#[derive(Debug, Clone)]
pub struct SelectMeta {
    pub source: String,
    pub response: String,
    pub standardized: bool,
    pub candidates: String,
}

pub fn select_json(meta: &SelectMeta, data: &Dataset, reports: &[SelectionReport]) -> Value {
    let mut results = Map::new();
    for r in reports {
        let mut coefficients = Map::new();
        coefficients.insert(INTERCEPT.into(), num(r.fit.beta[0]));
        for (name, &b) in data.names().iter().zip(&r.fit.beta[1..]) {
            coefficients.insert(name.clone(), num(b));
        }
        results.insert(
            r.criterion.label(),
            json!({
                "criterion": r.criterion.family(),
                "alpha": opt_num(alpha_of(r.criterion)),
                "variables": variable_names(data, r.chosen.indices()),
                "coefficients": coefficients,
                "rss": num(r.fit.rss),
                "df_resid": r.fit.df_resid,
                "lambda": num(r.lambda),
                "kappa": opt_num(r.kappa),
                "scores": r.scores.iter().map(|&s| opt_num(s)).collect::<Vec<_>>(),
            }),
        );
    }
    let first = reports.first();
    let per_size: Vec<Value> = first
        .map(|r| {
            r.per_size
                .iter()
                .map(|(s, e)| json!({"size": s, "variables": variable_names(data, e.mask.indices()), "rss": num(e.rss)}))
                .collect()
        })
        .unwrap_or_default();
    json!({
        "meta": {
            "command": "select",
            "source": meta.source,
            "response": meta.response,
            "n": data.n(),
            "p": data.p(),
            "standardized": meta.standardized,
            "candidates": meta.candidates,
            "sigma2": opt_num(first.map(|r| r.sigma2)),
            "rss_full": opt_num(first.map(|r| r.rss_full)),
            "per_size": per_size,
        },
        "results": results,
    })
}

fn scenario_json(s: &Scenario) -> Value {
    let (kind, rho, group_size) = match s.kind {
        ScenarioKind::Weak => ("weak", Value::Null, Value::Null),
        ScenarioKind::Correlated { rho, group_size } => ("correlated", num(rho), Value::from(group_size)),
    };
    json!({
        "kind": kind,
        "n": s.n,
        "p": s.p,
        "p_active": s.p_active,
        "sigma": num(s.sigma),
        "beta0": num(s.beta0),
        "active_value": num(s.active_value),
        "rho": rho,
        "group_size": group_size,
        "reference_design": s.is_reference_design(),
    })
}

fn summaries_json(summaries: &[CriterionSummary]) -> Value {
    let map: Map<String, Value> = summaries
        .iter()
        .map(|s| {
            let v = json!({
                "fir": num(s.mean.fir),
                "far": num(s.mean.far),
                "zero_error_fraction": num(s.zero_error_fraction),
            });
            (s.criterion.label(), v)
        })
        .collect();
    Value::Object(map)
}

pub fn simulate_json(result: &MonteCarloResult) -> Value {
    json!({
        "meta": {
            "command": "simulate",
            "scenario": scenario_json(&result.scenario),
            "reps": result.reps,
            "seed": result.seed,
            "regenerated": result.regenerated,
        },
        "results": summaries_json(&result.summaries),
    })
}

pub fn tables_json(preset: &Preset, results: &[MonteCarloResult], reps: usize, seed: u64) -> Value {
    let rows: Vec<Value> = preset
        .rows
        .iter()
        .zip(results)
        .map(|(row, r)| {
            json!({
                "label": row.label,
                "scenario": scenario_json(&r.scenario),
                "regenerated": r.regenerated,
                "criteria": summaries_json(&r.summaries),
            })
        })
        .collect();
    json!({
        "meta": {"command": "tables", "table": preset.table, "title": preset.title, "reps": reps, "seed": seed},
        "results": rows,
    })
}

/// Half-to-even rounding to two decimals.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round_ties_even() / 100.0
}

/// `(FIR, FAR)` to two decimals, starred when every replication was exact.
pub fn rate_cell(s: &CriterionSummary) -> String {
    let star = if s.zero_error_fraction == 1.0 { "*" } else { "" };
    format!("({:.2}, {:.2}){star}", round2(s.mean.fir), round2(s.mean.far))
}

fn render_grid(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, s)| if c == 0 { format!("{s:<w$}", w = widths[c]) } else { format!("{s:>w$}", w = widths[c]) })
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn fmt_value(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.3}")
    } else {
        format!("{v}")
    }
}

/// Coefficient table with variables as rows and criteria as columns; blank
/// cells mark excluded variables.
pub fn select_text(meta: &SelectMeta, data: &Dataset, reports: &[SelectionReport]) -> String {
    let mut rows = vec![{
        let mut h = vec![String::new()];
        h.extend(reports.iter().map(|r| r.criterion.label()));
        h
    }];
    let mut intercept = vec![INTERCEPT.to_owned()];
    intercept.extend(reports.iter().map(|r| fmt_value(r.fit.beta[0])));
    rows.push(intercept);
    for (j, name) in data.names().iter().enumerate() {
        let mut row = vec![name.clone()];
        row.extend(
            reports.iter().map(|r| if r.chosen.contains(j + 1) { fmt_value(r.fit.beta[j + 1]) } else { String::new() }),
        );
        rows.push(row);
    }
    let mut push = |label: &str, f: &dyn Fn(&SelectionReport) -> String| {
        let mut row = vec![label.to_owned()];
        row.extend(reports.iter().map(f));
        rows.push(row);
    };
    push("size", &|r| r.chosen.size().to_string());
    push("rss", &|r| fmt_value(r.fit.rss));
    push("lambda", &|r| fmt_value(r.lambda));
    push("kappa", &|r| r.kappa.map(fmt_value).unwrap_or_default());
    let std = if meta.standardized { ", standardized predictors" } else { "" };
    format!(
        "response {} from {}: n = {}, p = {}, candidates {}{std}\n\n{}",
        meta.response,
        meta.source,
        data.n(),
        data.p(),
        meta.candidates,
        render_grid(&rows)
    )
}

fn scenario_line(s: &Scenario) -> String {
    let kind = match s.kind {
        ScenarioKind::Weak => "weak".to_owned(),
        ScenarioKind::Correlated { rho, group_size } => format!("correlated rho = {rho}, group size {group_size}"),
    };
    format!("{kind}, n = {}, p = {}, p* = {}, sigma = {}", s.n, s.p, s.p_active, s.sigma)
}

pub fn simulate_text(result: &MonteCarloResult) -> String {
    let mut rows = vec![vec!["criterion".to_owned(), "(FIR, FAR)".to_owned(), "zero-error".to_owned()]];
    for s in &result.summaries {
        rows.push(vec![s.criterion.label(), rate_cell(s), format!("{:.2}", round2(s.zero_error_fraction))]);
    }
    format!(
        "{}; {} reps, seed {}\n\n{}",
        scenario_line(&result.scenario),
        result.reps,
        result.seed,
        render_grid(&rows)
    )
}

pub fn tables_text(preset: &Preset, results: &[MonteCarloResult], reps: usize, seed: u64) -> String {
    let mut rows = Vec::new();
    match preset.layout {
        Layout::Grid => {
            let mut header = vec![preset.row_header.to_owned()];
            if let Some(r) = results.first() {
                header.extend(r.summaries.iter().map(|s| s.criterion.label()));
            }
            rows.push(header);
            for (row, r) in preset.rows.iter().zip(results) {
                let mut line = vec![row.label.clone()];
                line.extend(r.summaries.iter().map(rate_cell));
                rows.push(line);
            }
        }
        Layout::Schedule => {
            rows.push(vec![preset.row_header.to_owned(), "alpha_n".into(), "(FIR, FAR)".into(), "zero-error".into()]);
            for (row, r) in preset.rows.iter().zip(results) {
                for s in &r.summaries {
                    let alpha = alpha_of(s.criterion).map(|a| format!("{a:.2}")).unwrap_or_default();
                    rows.push(vec![
                        row.label.clone(),
                        alpha,
                        rate_cell(s),
                        format!("{:.2}", round2(s.zero_error_fraction)),
                    ]);
                }
            }
        }
    }
    format!(
        "Table {}: {}; {} reps, seed {}; (FIR, FAR), * = no errors in any replication\n\n{}",
        preset.table,
        preset.title,
        reps,
        seed,
        render_grid(&rows)
    )
}

fn csv_string(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w)?;
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("CSV fields are UTF-8"))
}

pub fn select_csv(data: &Dataset, reports: &[SelectionReport]) -> Result<String> {
    csv_string(|w| {
        let mut header: Vec<String> =
            ["criterion", "alpha", "size", "variables", "rss", "lambda", "kappa", INTERCEPT].map(String::from).to_vec();
        header.extend(data.names().iter().cloned());
        w.write_record(&header)?;
        for r in reports {
            let mut rec = vec![
                r.criterion.label(),
                alpha_of(r.criterion).map(|a| a.to_string()).unwrap_or_default(),
                r.chosen.size().to_string(),
                variable_names(data, r.chosen.indices()).join(" "),
                r.fit.rss.to_string(),
                r.lambda.to_string(),
                r.kappa.map(|k| k.to_string()).unwrap_or_default(),
            ];
            rec.extend(r.fit.beta.iter().map(f64::to_string));
            w.write_record(&rec)?;
        }
        Ok(())
    })
}

fn summary_record(s: &CriterionSummary) -> [String; 4] {
    [s.criterion.label(), s.mean.fir.to_string(), s.mean.far.to_string(), s.zero_error_fraction.to_string()]
}

pub fn simulate_csv(result: &MonteCarloResult) -> Result<String> {
    csv_string(|w| {
        w.write_record(["criterion", "fir", "far", "zero_error_fraction"])?;
        for s in &result.summaries {
            w.write_record(summary_record(s))?;
        }
        Ok(())
    })
}

pub fn tables_csv(preset: &Preset, results: &[MonteCarloResult]) -> Result<String> {
    csv_string(|w| {
        w.write_record(["row", "criterion", "fir", "far", "zero_error_fraction"])?;
        for (row, r) in preset.rows.iter().zip(results) {
            for s in &r.summaries {
                let [c, fir, far, z] = summary_record(s);
                w.write_record([row.label.as_str(), &c, &fir, &far, &z])?;
            }
        }
        Ok(())
    })
}
