//! Table regeneration against the targets in `manifest.json`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::Result;
use clap::ValueEnum;
use rexlen::bounds::{bound_report, ReportOptions};
use rexlen::interval::Interval;
use rexlen::logproduct::{h_perm, perm_logproduct_max};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::{input, Emit, Global};

const MANIFEST: &str = include_str!("../manifest.json");

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Table {
    Table1,
    Table4,
}

#[derive(Deserialize)]
struct Manifest {
    table1: Table1,
    table4: Table4,
}

#[derive(Deserialize)]
struct Table4 {
    decimals: usize,
    rows: BTreeMap<String, Row4>,
}

#[derive(Deserialize)]
struct Row4 {
    source: String,
    values: BTreeMap<usize, String>,
}

#[derive(Deserialize)]
struct Table1 {
    source: String,
    rows: Vec<Row1>,
}

#[derive(Deserialize, Serialize, PartialEq, Debug)]
struct Row1 {
    family: String,
    #[serde(default)]
    exact: bool,
    dfa_states: Option<usize>,
    count: String,
    upper_rpn: Option<u64>,
    certificate: Option<String>,
    exact_min: Option<u64>,
}

fn manifest() -> Manifest {
    serde_json::from_str(MANIFEST).expect("the embedded manifest is valid")
}

/// Truncation to `d` decimals, the convention for values printed as `2.64…`.
pub fn truncate(i: &Interval, d: usize) -> String {
    let scale = 10f64.powi(d as i32);
    let t = (i.mid() * scale + 1e-9).floor() / scale;
    format!("{t:.d$}")
}

pub fn run(table: Table, n_max: usize, g: &Global, out: &mut String) -> Result<ExitCode> {
    let m = manifest();
    let deviations = match table {
        Table::Table4 => table4(&m.table4, n_max, g, out)?,
        Table::Table1 => table1(&m.table1, g, out)?,
    };
    if g.emit == Emit::Text {
        match deviations.len() {
            0 => writeln!(out, "all values match their targets")?,
            k => writeln!(out, "{k} value(s) deviate from their targets")?,
        }
    }
    Ok(if deviations.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn table4(t: &Table4, n_max: usize, g: &Global, out: &mut String) -> Result<Vec<String>> {
    if n_max < 2 {
        anyhow::bail!(crate::commands::Usage("--n-max must be at least 2".into()));
    }
    let ns: Vec<usize> = (2..=n_max).collect();
    let mut computed: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    computed.insert(
        "max_split",
        ns.iter()
            .map(|&n| truncate(&perm_logproduct_max(n).table_value.expect("n ≥ 2"), t.decimals))
            .collect(),
    );
    computed.insert("h", ns.iter().map(|&n| truncate(&h_perm(n), t.decimals)).collect());
    let mut deviations = Vec::new();
    let mut rows_json = Vec::new();
    if g.emit == Emit::Text {
        let head: Vec<String> = ns.iter().map(|n| format!("{n:>8}")).collect();
        writeln!(out, "{:<10}{}", "n", head.join(""))?;
    }
    for (name, vals) in &computed {
        let row = &t.rows[*name];
        let mut marks = Vec::new();
        for (n, v) in ns.iter().zip(vals) {
            let ok = row.values.get(n).is_none_or(|target| target == v);
            if !ok {
                deviations.push(format!("{name}({n}) = {v}, target {}", row.values[n]));
            }
            marks.push(json!({ "n": n, "value": v, "target": row.values.get(n), "ok": ok }));
        }
        if g.emit == Emit::Text {
            let cells: Vec<String> = ns
                .iter()
                .zip(vals)
                .map(|(n, v)| {
                    let flag = if row.values.get(n).is_some_and(|t| t != v) {
                        "!"
                    } else {
                        " "
                    };
                    format!("{v:>7}{flag}")
                })
                .collect();
            writeln!(out, "{:<10}{}", name, cells.join(""))?;
        }
        rows_json.push(json!({ "row": name, "source": row.source, "cells": marks }));
    }
    if g.emit == Emit::Json {
        writeln!(
            out,
            "{}",
            json!({ "table": "table4", "rows": rows_json, "deviations": deviations })
        )?;
    } else {
        for d in &deviations {
            writeln!(out, "DEVIATION {d}")?;
        }
    }
    Ok(deviations)
}

fn table1(t: &Table1, g: &Global, out: &mut String) -> Result<Vec<String>> {
    let mut deviations = Vec::new();
    if g.emit == Emit::Text {
        writeln!(
            out,
            "{:<24} {:>6} {:>10} {:>14} {:>6}",
            "language", "DFA", "rpn upper", "rpn lower", "exact"
        )?;
    }
    for want in &t.rows {
        let spec = input::family(&want.family)?;
        let opts = ReportOptions {
            exact: want.exact,
            upper: true,
            budget: g.budget,
        };
        let r = bound_report(&spec, &opts)?;
        let got = Row1 {
            family: want.family.clone(),
            exact: want.exact,
            dfa_states: r.dfa_states,
            count: r.count.clone(),
            upper_rpn: r.best_upper(),
            certificate: r.certificate.as_ref().map(|c| format!("{:.6e}", c.value.mid())),
            exact_min: r.exact_min,
        };
        if &got != want {
            deviations.push(format!("{}: computed {got:?}", want.family));
        }
        if r.ordering_ok == Some(false) {
            deviations.push(format!("{}: ordering violated", want.family));
        }
        let dash = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        match g.emit {
            Emit::Json => writeln!(out, "{}", json!({ "source": t.source, "report": r }))?,
            Emit::Text => writeln!(
                out,
                "{:<24} {:>6} {:>10} {:>14} {:>6}",
                want.family,
                dash(got.dfa_states.map(|s| s.to_string())),
                dash(got.upper_rpn.map(|s| s.to_string())),
                dash(got.certificate.clone()),
                dash(got.exact_min.map(|s| s.to_string())),
            )?,
        }
    }
    if g.emit == Emit::Text {
        for d in &deviations {
            writeln!(out, "DEVIATION {d}")?;
        }
    }
    Ok(deviations)
}
