use std::io::Write;

use rayon::prelude::*;
use serde_json::json;
use stieltjes_core::stieltjes::{c_alpha, StieltjesResult};

use crate::args::{Format, RunConfig};
use crate::error::{CliError, Status};
use crate::output::{csv_writer, json_num, num, sink};

pub const HEADER: [&str; 6] = ["alpha", "a", "c_value", "gamma_re", "gamma_im", "err_bound"];

pub fn evaluate(cfg: &RunConfig) -> Result<Vec<(f64, StieltjesResult)>, CliError> {
    cfg.alphas
        .par_iter()
        .map(|&al| Ok((al, c_alpha(al, cfg.a, &cfg.em.config(al))?)))
        .collect()
}

pub fn run(cfg: &RunConfig) -> Result<Status, CliError> {
    let rows = evaluate(cfg)?;
    let out = sink(cfg.out.as_deref())?;
    match cfg.format {
        Format::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|(al, r)| {
                    json!({
                        "alpha": json_num(*al),
                        "a": json_num(cfg.a),
                        "c_value": json_num(r.c_value),
                        "gamma_re": json_num(r.gamma_value.re),
                        "gamma_im": json_num(r.gamma_value.im),
                        "err_bound": json_num(r.err_bound),
                        "m": r.config_used.m,
                        "v": r.config_used.v,
                        "tail_cut": r.config_used.tail_cut,
                    })
                })
                .collect();
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &json!({ "schema": 1, "rows": items }))
                .map_err(|e| CliError::usage(e.to_string()))?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv_writer(out, &HEADER)?;
            for (al, r) in &rows {
                w.write_record([
                    num(*al),
                    num(cfg.a),
                    num(r.c_value),
                    num(r.gamma_value.re),
                    num(r.gamma_value.im),
                    num(r.err_bound),
                ])?;
            }
            w.flush()?;
        }
        Format::Svg => return Err(CliError::usage("compute writes csv or json".to_string())),
    }
    Ok(Status::Ok)
}
