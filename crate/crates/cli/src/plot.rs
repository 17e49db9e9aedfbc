use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;
use stieltjes_core::bounds::{family_bound, Family};
use stieltjes_core::stieltjes::c_alpha;

use crate::args::{Format, RunConfig};
use crate::error::{CliError, Status};
use crate::output::{csv_writer, num, sink};
use crate::svg::{render, Series};

/// Shifts drawn as measured curves, with their CSV column names.
pub const SHIFTS: [(f64, &str); 4] = [
    (1.0, "measured_a1"),
    (2.0 / 3.0, "measured_a2_3"),
    (1.0 / 3.0, "measured_a1_3"),
    (0.1, "measured_a1_10"),
];

const COLORS: [&str; 11] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#000000", "#555555", "#888888",
    "#bbbbbb",
];

pub fn header() -> Vec<&'static str> {
    let mut h = vec!["alpha"];
    h.extend(Family::ALL.iter().map(|f| f.label()));
    h.extend(SHIFTS.iter().map(|s| s.1));
    h
}

/// One row per grid point: `log10` of each valid bound at `a = 1`, then
/// `log10|C_α(a)|` for each shift up to the measurement cap.
pub fn table(cfg: &RunConfig) -> Result<Vec<Vec<f64>>, CliError> {
    if cfg.alphas.iter().any(|&al| al <= 0.0) {
        return Err(CliError::usage("plot needs --alpha-min > 0".to_string()));
    }
    let measured: Vec<Vec<f64>> = cfg
        .alphas
        .par_iter()
        .map(|&al| {
            SHIFTS
                .iter()
                .map(|&(a, _)| {
                    if al > cfg.measure_cap {
                        return Ok(f64::NAN);
                    }
                    let r = c_alpha(al, a, &cfg.em.config(al))?;
                    Ok(r.c_value.abs().log10())
                })
                .collect::<Result<Vec<_>, CliError>>()
        })
        .collect::<Result<_, _>>()?;
    cfg.alphas
        .iter()
        .zip(measured)
        .map(|(&al, meas)| {
            let mut row = vec![al];
            for f in Family::ALL {
                let b = family_bound(f, al, 1.0)?;
                row.push(if b.valid { b.log10_value } else { f64::NAN });
            }
            row.extend(meas);
            Ok(row)
        })
        .collect()
}

fn paths(cfg: &RunConfig) -> (PathBuf, PathBuf) {
    let svg = cfg.out.clone().unwrap_or_else(|| PathBuf::from("stieltjes_bounds.svg"));
    let csv = svg.with_extension("csv");
    (svg, csv)
}

pub fn run(cfg: &RunConfig) -> Result<Status, CliError> {
    if cfg.format == Format::Json {
        return Err(CliError::usage("plot writes svg with a csv alongside".to_string()));
    }
    let rows = table(cfg)?;
    let (svg_path, csv_path) = paths(cfg);
    let h = header();
    let mut w = csv_writer(sink(Some(&csv_path))?, &h)?;
    for row in &rows {
        w.write_record(row.iter().map(|&x| num(x)))?;
    }
    w.flush()?;
    drop(w);
    if cfg.format == Format::Svg {
        let series: Vec<Series<'_>> = h[1..]
            .iter()
            .enumerate()
            .map(|(i, label)| Series {
                label,
                color: COLORS[i],
                dashed: i >= Family::ALL.len(),
                points: rows.iter().map(|r| (r[0], r[i + 1])).collect(),
            })
            .collect();
        let svg = render("log10 of bounds and measured |C_alpha(a)|", "alpha", &series);
        fs::write(&svg_path, svg).map_err(|e| CliError::io(&svg_path, e))?;
        println!("{}", svg_path.display());
    }
    println!("{}", csv_path.display());
    Ok(Status::Ok)
}
