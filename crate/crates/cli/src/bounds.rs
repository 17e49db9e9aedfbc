use std::io::Write;

use rayon::prelude::*;
use serde_json::json;
use stieltjes_core::bounds::{bound_row, BoundRow, Family};

use crate::args::{Format, RunConfig};
use crate::error::{CliError, Status};
use crate::output::{csv_writer, json_num, num, sink};

pub fn header() -> Vec<String> {
    let mut h = vec!["alpha".to_string(), "a".to_string()];
    for f in Family::ALL {
        h.push(f.label().to_string());
        h.push(format!("{}_valid", f.label()));
    }
    for extra in ["fps_floor", "fps_ceil", "measured_log10", "measured_err"] {
        h.push(extra.to_string());
    }
    h
}

pub fn rows(cfg: &RunConfig) -> Result<Vec<BoundRow>, CliError> {
    if cfg.alphas.iter().any(|&al| al <= 0.0) {
        return Err(CliError::usage("bounds need --alpha > 0".to_string()));
    }
    let mut rows = cfg
        .alphas
        .par_iter()
        .map(|&al| bound_row(al, cfg.a, cfg.measure_cap))
        .collect::<Result<Vec<_>, _>>()?;
    rows.sort_by(|x, y| x.alpha.total_cmp(&y.alpha));
    Ok(rows)
}

fn record(row: &BoundRow) -> Vec<String> {
    let mut r = vec![num(row.alpha), num(row.a)];
    for b in &row.bounds {
        r.push(num(b.log10_value));
        r.push(b.valid.to_string());
    }
    match row.fps_neighbours {
        Some((lo, hi)) => {
            r.push(num(lo.log10_value));
            r.push(num(hi.log10_value));
        }
        None => r.extend([String::new(), String::new()]),
    }
    match row.measured {
        Some(m) => {
            r.push(num(m.log10()));
            r.push(num(m.err_bound));
        }
        None => r.extend([String::new(), String::new()]),
    }
    r
}

fn row_json(row: &BoundRow) -> serde_json::Value {
    let bounds: Vec<_> = row
        .bounds
        .iter()
        .map(|b| {
            json!({
                "family": b.name.label(),
                "log10_value": json_num(b.log10_value),
                "valid": b.valid,
                "reason": b.reason,
            })
        })
        .collect();
    json!({
        "alpha": json_num(row.alpha),
        "a": json_num(row.a),
        "bounds": bounds,
        "fps_neighbours": row.fps_neighbours.map(|(lo, hi)| [json_num(lo.log10_value), json_num(hi.log10_value)]),
        "measured": row.measured.map(|m| json!({
            "abs_value": json_num(m.abs_value),
            "err_bound": json_num(m.err_bound),
        })),
    })
}

pub fn run(cfg: &RunConfig) -> Result<Status, CliError> {
    let rows = rows(cfg)?;
    let mut out = sink(cfg.out.as_deref())?;
    match cfg.format {
        Format::Csv => {
            let h = header();
            let mut w = csv_writer(out, &h.iter().map(String::as_str).collect::<Vec<_>>())?;
            for row in &rows {
                w.write_record(record(row))?;
            }
            w.flush()?;
        }
        Format::Json => {
            let items: Vec<_> = rows.iter().map(row_json).collect();
            serde_json::to_writer_pretty(&mut out, &json!({ "schema": 1, "rows": items }))
                .map_err(|e| CliError::usage(e.to_string()))?;
            writeln!(out)?;
        }
        Format::Svg => return Err(CliError::usage("bounds writes csv or json; use plot for svg".to_string())),
    }
    if cfg.verbosity > 0 {
        for row in &rows {
            let bad = row.violations();
            if !bad.is_empty() {
                eprintln!("alpha {}: measured value above {:?}", row.alpha, bad);
            }
        }
    }
    Ok(Status::Ok)
}
