use std::io::Write;

use num_complex::Complex64;
use serde_json::json;
use stieltjes_core::contour::{path_nodes, s_k_contour, NodeRow, PhaseContext, SkDecomposition};

use crate::args::{Format, RunConfig};
use crate::error::{CliError, Status};
use crate::output::{csv_writer, json_num, num, sig6, sink};

pub const NODE_HEADER: [&str; 5] = ["segment", "y_re", "y_im", "h_re", "h_im"];

fn point(z: Complex64) -> String {
    format!("{} {}", sig6(z.re), sig6(z.im))
}

pub fn report(d: &SkDecomposition) -> String {
    let p = &d.path;
    let c = &p.ctx;
    let mut s = String::new();
    s += &format!("k {}  alpha {}  a {}\n", c.k, sig6(c.alpha), sig6(c.a));
    s += &format!("saddle {}\n", point(p.saddle));
    s += &format!(
        "position {} unit circle\n",
        if p.saddle_inside { "inside" } else { "outside" }
    );
    s += &format!("u {}\n", point(p.u));
    s += &format!("v {}\n", point(p.v));
    s += &format!("level {}\n", sig6(p.level));
    s += &format!("{:<4} {:>14} {:>14}\n", "part", "modulus", "bound");
    for (name, val, bound) in [
        ("L1", d.l1, d.bound_l1),
        ("L2", d.l2, d.bound_l2),
        ("L3", d.l3, d.bound_l3),
        ("L4", d.l4, d.bound_l4),
        ("S_k", d.s_k, d.s_bound),
    ] {
        let mark = if val.norm() <= bound { "ok" } else { "EXCEEDED" };
        s += &format!("{name:<4} {:>14} {:>14}  {mark}\n", sig6(val.norm()), sig6(bound));
    }
    s += &format!("S_k {}  err {}\n", point(d.s_k), sig6(d.err));
    let ch = &p.checks;
    s += &format!(
        "checks level_error {}  re_h_turns {}  box {}  tail_negative {}  max_gap {}\n",
        sig6(ch.max_level_error),
        ch.re_h_turns,
        ch.box_contained,
        ch.tail_negative,
        sig6(ch.max_gap)
    );
    s
}

fn nodes_json(rows: &[NodeRow]) -> Vec<serde_json::Value> {
    rows.iter()
        .map(|r| {
            json!({
                "segment": r.kind.label(),
                "y": [json_num(r.y.re), json_num(r.y.im)],
                "h": [json_num(r.h.re), json_num(r.h.im)],
            })
        })
        .collect()
}

fn pair(z: Complex64) -> serde_json::Value {
    json!([json_num(z.re), json_num(z.im)])
}

fn decomposition_json(d: &SkDecomposition, rows: &[NodeRow]) -> serde_json::Value {
    let p = &d.path;
    json!({
        "schema": 1,
        "k": p.ctx.k,
        "alpha": json_num(p.ctx.alpha),
        "a": json_num(p.ctx.a),
        "saddle": pair(p.saddle),
        "saddle_inside": p.saddle_inside,
        "u": pair(p.u),
        "v": pair(p.v),
        "level": json_num(p.level),
        "parts": {
            "l1": pair(d.l1), "l2": pair(d.l2), "l3": pair(d.l3), "l4": pair(d.l4), "s_k": pair(d.s_k),
        },
        "bounds": {
            "l1": json_num(d.bound_l1), "l2": json_num(d.bound_l2), "l3": json_num(d.bound_l3),
            "l4": json_num(d.bound_l4), "s_k": json_num(d.s_bound),
        },
        "err": json_num(d.err),
        "nodes": nodes_json(rows),
    })
}

pub fn run(cfg: &RunConfig) -> Result<Status, CliError> {
    let [alpha] = cfg.alphas[..] else {
        return Err(CliError::usage("saddle takes a single --alpha".to_string()));
    };
    let ctx = PhaseContext::new(cfg.k, alpha, cfg.a)?;
    let d = s_k_contour(&ctx)?;
    let rows = path_nodes(&d.path)?;
    match (cfg.format, cfg.out.as_deref()) {
        (Format::Json, None) => {
            let mut out = sink(None)?;
            serde_json::to_writer_pretty(&mut out, &decomposition_json(&d, &rows))
                .map_err(|e| CliError::usage(e.to_string()))?;
            writeln!(out)?;
        }
        (Format::Json, Some(path)) => {
            print!("{}", report(&d));
            let mut out = sink(Some(path))?;
            serde_json::to_writer_pretty(&mut out, &decomposition_json(&d, &rows))
                .map_err(|e| CliError::usage(e.to_string()))?;
            writeln!(out)?;
        }
        (Format::Svg, _) => return Err(CliError::usage("saddle writes csv or json".to_string())),
        (Format::Csv, path) => {
            print!("{}", report(&d));
            if let Some(path) = path {
                let mut w = csv_writer(sink(Some(path))?, &NODE_HEADER)?;
                for r in &rows {
                    w.write_record([r.kind.label().to_string(), num(r.y.re), num(r.y.im), num(r.h.re), num(r.h.im)])?;
                }
                w.flush()?;
            }
        }
    }
    Ok(Status::Ok)
}
