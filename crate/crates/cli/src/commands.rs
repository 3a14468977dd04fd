use std::f64::consts::TAU;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use serde::Deserialize;
use trigspline::{EvalReport64, Indicator, SampleSet64, Spline64};

use crate::config::{figure_spline, Format, RunConfig};
use crate::output::{status, Cell, Table};
use crate::{parse_error, suites, ValidationFailure};

pub const FIGURE_K: usize = 5;
pub const FIGURE_STEPS: usize = 720;

fn emit(table: &Table, format: Format, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(
                File::create(path).with_context(|| format!("creating {}", path.display()))?,
            );
            table.write(format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            table.write(format, &mut lock)?;
        }
    }
    Ok(())
}

fn value_row(t: f64, r: &EvalReport64, epsilon: f64) -> Vec<Cell> {
    vec![
        Cell::Num(t),
        Cell::Num(r.value),
        Cell::Num(r.tail_bound),
        status(r.truncation_incomplete || r.tail_bound > epsilon),
    ]
}

const VALUE_COLUMNS: [&str; 4] = ["t", "value", "tail_bound", "status"];

fn check_k(k: usize, n: usize) -> anyhow::Result<()> {
    if k == 0 || k > n {
        return Err(parse_error(format!("k = {k} outside 1..={n}")));
    }
    Ok(())
}

pub fn factors(cfg: &RunConfig) -> anyhow::Result<()> {
    let f = &cfg.spline.factor;
    let mut table = Table::new(&["j", "value", "envelope"]);
    for j in 1..=cfg.samples as u64 {
        let v = f.value(j).with_context(|| format!("factor at j = {j}"))?;
        table.rows.push(vec![Cell::Int(j), Cell::Num(v), Cell::Num(f.tail_envelope(j))]);
    }
    emit(&table, cfg.format, cfg.out.as_deref())
}

fn sample_curve(spline: &Spline64, k: usize, ts: impl Iterator<Item = f64>) -> anyhow::Result<Table> {
    let eps = spline.config().truncation.epsilon;
    let mut table = Table::new(&VALUE_COLUMNS);
    for t in ts {
        let r = spline
            .fundamental_value(k, t)
            .with_context(|| format!("st_{k} at t = {t}"))?;
        table.rows.push(value_row(t, &r, eps));
    }
    Ok(table)
}

pub fn fundamental(cfg: &RunConfig) -> anyhow::Result<()> {
    check_k(cfg.k, cfg.spline.n)?;
    let spline = Spline64::new(cfg.spline.clone())?;
    let s = cfg.samples;
    let table = sample_curve(&spline, cfg.k, (0..s).map(|i| TAU * i as f64 / s as f64))?;
    emit(&table, cfg.format, cfg.out.as_deref())
}

#[derive(Debug, Deserialize)]
struct SampleRow {
    k: usize,
    f: f64,
}

fn read_samples(path: &Path, n: usize) -> anyhow::Result<SampleSet64> {
    let parse = |msg: String| parse_error(msg);
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| parse(format!("reading {}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| parse(format!("{}: {e}", path.display())))?
        .clone();
    if headers.iter().map(str::trim).collect::<Vec<_>>() != ["k", "f"] {
        return Err(parse(format!("{}: header must be \"k,f\"", path.display())));
    }
    let mut values = vec![None; n];
    for row in reader.deserialize::<SampleRow>() {
        let row = row.map_err(|e| parse(format!("{}: {e}", path.display())))?;
        if row.k == 0 || row.k > n {
            return Err(parse(format!("{}: k = {} outside 1..={n}", path.display(), row.k)));
        }
        if values[row.k - 1].replace(row.f).is_some() {
            return Err(parse(format!("{}: k = {} given twice", path.display(), row.k)));
        }
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| parse(format!("{}: no sample for k = {}", path.display(), i + 1))))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(SampleSet64::new(values, n)?)
}

pub fn interpolate(cfg: &RunConfig, input: &Path) -> anyhow::Result<()> {
    let samples = read_samples(input, cfg.spline.n)?;
    let spline = Spline64::new(cfg.spline.clone())?;
    let eps = cfg.spline.truncation.epsilon;
    let s = cfg.samples;
    let mut table = Table::new(&VALUE_COLUMNS);
    for i in 0..s {
        let t = TAU * i as f64 / s as f64;
        let r = spline
            .interpolant_value(&samples, t)
            .with_context(|| format!("interpolant at t = {t}"))?;
        table.rows.push(value_row(t, &r, eps));
    }
    emit(&table, cfg.format, cfg.out.as_deref())
}

pub fn validate(cfg: &RunConfig) -> anyhow::Result<()> {
    check_k(cfg.k, cfg.spline.n)?;
    let outcomes = suites::run_all(&cfg.spline, cfg.k);
    let mut failed = Vec::new();
    let mut first_error = None;
    println!("{:<20} {:<6} detail", "suite", "result");
    for o in outcomes {
        let (tag, detail) = match &o.result {
            Ok((true, d)) => ("PASS", d.clone()),
            Ok((false, d)) => ("FAIL", d.clone()),
            Err(e) => ("ERROR", e.to_string()),
        };
        println!("{:<20} {tag:<6} {detail}", o.suite);
        match o.result {
            Ok((true, _)) => {}
            Ok((false, _)) => failed.push(o.suite.to_string()),
            Err(e) => {
                first_error.get_or_insert((o.suite, e));
            }
        }
    }
    if let Some((suite, e)) = first_error {
        return Err(anyhow::Error::new(e).context(format!("suite {suite}")));
    }
    if !failed.is_empty() {
        return Err(ValidationFailure(failed).into());
    }
    Ok(())
}

/// File name of the figure curve for one grid pair.
pub fn figure_name(i1: Indicator, i2: Indicator, format: Format) -> String {
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    format!("st{FIGURE_K}_I1{}_I2{}.{ext}", i1.bit(), i2.bit())
}

pub fn figures(cfg: &RunConfig) -> anyhow::Result<()> {
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    if !dir.is_dir() {
        return Err(anyhow!("{} is not a directory", dir.display()));
    }
    for i1 in Indicator::BOTH {
        for i2 in Indicator::BOTH {
            let mut spline_cfg = figure_spline(i1, i2);
            spline_cfg.truncation = cfg.spline.truncation;
            let spline = Spline64::new(spline_cfg)?;
            let ts = (0..=FIGURE_STEPS).map(|i| TAU * i as f64 / FIGURE_STEPS as f64);
            let table = sample_curve(&spline, FIGURE_K, ts)?;
            let path = dir.join(figure_name(i1, i2, cfg.format));
            emit(&table, cfg.format, Some(&path))?;
        }
    }
    Ok(())
}
