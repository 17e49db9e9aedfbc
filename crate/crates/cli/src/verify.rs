use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use stieltjes_core::bounds::{bound_row, conjecture_bound, remark_sides, theorem_bound, Family};
use stieltjes_core::contour::{s_k_contour, s_k_real_axis, saddle, PhaseContext};
use stieltjes_core::special_functions::{i_of_t, lambert_w0, t_of_y};
use stieltjes_core::stieltjes::{periodic_integral, tail_integral, EmConfig};

use crate::args::{RunConfig, Suite};
use crate::error::{CliError, Status};
use crate::output::{sig6, sink};

#[derive(Clone, Debug)]
pub struct Check {
    pub suite: Suite,
    pub name: &'static str,
    /// `None` for informational lines that do not affect the exit status.
    pub pass: Option<bool>,
    pub detail: String,
}

impl Check {
    fn hard(suite: Suite, name: &'static str, pass: bool, detail: String) -> Check {
        Check {
            suite,
            name,
            pass: Some(pass),
            detail,
        }
    }

    fn info(suite: Suite, name: &'static str, detail: String) -> Check {
        Check {
            suite,
            name,
            pass: None,
            detail,
        }
    }

    pub fn line(&self) -> String {
        let tag = match self.pass {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "INFO",
        };
        format!("{tag:<4}  {}/{}  {}", self.suite.label(), self.name, self.detail)
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

fn lin_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn w0_it(t: f64) -> Result<Complex64, CliError> {
    Ok(lambert_w0(Complex64::new(0.0, t))?)
}

fn suite_w0() -> Result<Vec<Check>, CliError> {
    let s = Suite::W0;
    let grid = log_grid(0.01, 1e4, 200);
    let mut worst: f64 = 0.0;
    let mut in_range = true;
    let mut log_margin = f64::INFINITY;
    for &t in &grid {
        for z in [Complex64::new(0.0, t), Complex64::new(t, 0.0)] {
            let w = lambert_w0(z)?;
            worst = worst.max((w * w.exp() - z).norm() / z.norm().max(1.0));
        }
        let w = w0_it(t)?;
        in_range &= w.im > 0.0 && w.im < FRAC_PI_2 && w.re > 0.0;
        if t > 1.97 {
            log_margin = log_margin.min(t.ln() - w.re);
        }
    }
    let w1 = w0_it(200.0 / (2.0 * PI))?;
    let w40 = w0_it(200.0 / (80.0 * PI))?;
    let d1 = (w1 - Complex64::new(2.46, 1.14)).norm();
    let d40 = (w40 - Complex64::new(0.29, 0.52)).norm();
    Ok(vec![
        Check::hard(s, "identity_residual", worst <= 1e-13, format!("max {} (limit 1e-13)", sig6(worst))),
        Check::hard(s, "range", in_range, "0 < Im W < pi/2 and Re W > 0 on 200 points".to_string()),
        Check::hard(s, "re_below_log", log_margin > 0.0, format!("min log t - Re W = {}", sig6(log_margin))),
        Check::hard(
            s,
            "reference_saddles",
            d1 < 0.01 && d40 < 0.01,
            format!("w1(200) = {} {}, w40(200) = {} {}", sig6(w1.re), sig6(w1.im), sig6(w40.re), sig6(w40.im)),
        ),
    ])
}

fn suite_lemma_t() -> Result<Vec<Check>, CliError> {
    let s = Suite::LemmaT;
    let mut worst_t: f64 = 0.0;
    for t in log_grid(1e-3, 1e4, 1000) {
        worst_t = worst_t.max((t_of_y(i_of_t(t)?)? - t).abs() / t.max(1.0));
    }
    let mut worst_y: f64 = 0.0;
    let mut increasing = true;
    let ys = lin_grid(0.0, 1.55, 1000);
    let mut prev = -1.0;
    for &y in &ys {
        let t = t_of_y(y)?;
        increasing &= t > prev;
        prev = t;
        if t > 0.0 {
            worst_y = worst_y.max((i_of_t(t)? - y).abs());
        }
    }
    Ok(vec![
        Check::hard(s, "t_of_i", worst_t <= 1e-12, format!("max rel {} (limit 1e-12)", sig6(worst_t))),
        Check::hard(s, "i_of_t", worst_y <= 1e-12, format!("max abs {} (limit 1e-12)", sig6(worst_y))),
        Check::hard(s, "t_increasing", increasing, "1000 points on [0, 1.55]".to_string()),
    ])
}

fn suite_sine() -> Result<Vec<Check>, CliError> {
    let s = Suite::Sine;
    let alphas = lin_grid(2.0 * PI, 500.0, 200);
    let mut min: f64 = f64::INFINITY;
    let mut at = (0, 0.0);
    let mut below_one = 0usize;
    let mut k_below_one = (u32::MAX, 0u32);
    for k in 1..=100u32 {
        for &al in &alphas {
            let w = w0_it(al / (2.0 * PI * k as f64))?;
            let v = k as f64 * w.im.sin();
            if v < min {
                min = v;
                at = (k, al);
            }
            if v < 1.0 {
                below_one += 1;
                k_below_one = (k_below_one.0.min(k), k_below_one.1.max(k));
            }
        }
    }
    Ok(vec![
        Check::hard(
            s,
            "k_sin_at_least_half",
            min >= 0.5,
            format!("min {} at k={}, alpha={}", sig6(min), at.0, sig6(at.1)),
        ),
        Check::info(
            s,
            "k_sin_at_least_one",
            format!(
                "{below_one} of {} grid points below 1, with k from {} to {}",
                100 * alphas.len(),
                k_below_one.0,
                k_below_one.1
            ),
        ),
    ])
}

fn suite_monotone() -> Result<Vec<Check>, CliError> {
    let s = Suite::Monotone;
    let g = |t: f64| -> Result<f64, CliError> {
        let w = w0_it(t)?;
        Ok((w.ln() - w.inv()).re)
    };
    let mut min: f64 = f64::INFINITY;
    for t in log_grid(0.01, 1e3, 1000) {
        let h = 1e-4 * t;
        min = min.min((g(t + h)? - g(t - h)?) / (2.0 * h));
    }
    Ok(vec![Check::hard(
        s,
        "derivative_positive",
        min > 0.0,
        format!("min d/dt Re(log W - 1/W) = {} on 1000 points", sig6(min)),
    )])
}

fn suite_p3() -> Result<Vec<Check>, CliError> {
    let s = Suite::P3;
    let cfg = EmConfig::default();
    let mut worst_norm: f64 = 0.0;
    let mut worst_raw: f64 = 0.0;
    for i in 1..=20 {
        let al = 0.05 * i as f64;
        let n = tail_integral(al, 1.0, 1, 3, &cfg)?;
        let r = periodic_integral(al, 1.0, 1, 3, &cfg)?;
        worst_norm = worst_norm.max(n.value.abs() + n.err);
        worst_raw = worst_raw.max(r.value.abs() + r.err);
    }
    let margin = |v: f64| (0.013 - v) / 0.013;
    Ok(vec![
        Check::hard(
            s,
            "raw_b3",
            margin(worst_raw) >= 0.05,
            format!("max |int B3({{x}}) f'''| = {} margin {}%", sig6(worst_raw), sig6(100.0 * margin(worst_raw))),
        ),
        Check::hard(
            s,
            "normalised_p3",
            margin(worst_norm) >= 0.05,
            format!("max |int B3({{x}})/6 f'''| = {} margin {}%", sig6(worst_norm), sig6(100.0 * margin(worst_norm))),
        ),
    ])
}

fn suite_contour() -> Result<Vec<Check>, CliError> {
    let s = Suite::Contour;
    let cases: Vec<(u32, f64)> = [1u32, 2, 5]
        .iter()
        .flat_map(|&k| [3.0, 7.0, 15.0].map(|al| (k, al)))
        .collect();
    let rels = cases
        .par_iter()
        .map(|&(k, al)| -> Result<f64, CliError> {
            let ctx = PhaseContext::new(k, al, 1.0)?;
            let c = s_k_contour(&ctx)?.s_k;
            let d = s_k_real_axis(&ctx, 400.0, 4)?;
            Ok((c - d).norm() / d.norm())
        })
        .collect::<Result<Vec<_>, _>>()?;
    let worst = rels.iter().cloned().fold(0.0, f64::max);
    let w1 = saddle(&PhaseContext::new(1, 200.0, 1.0)?)?;
    let w40 = saddle(&PhaseContext::new(40, 200.0, 1.0)?)?;
    Ok(vec![
        Check::hard(
            s,
            "real_axis_agreement",
            worst <= 1e-6,
            format!("max rel diff {} over k in {{1,2,5}}, alpha in {{3,7,15}}", sig6(worst)),
        ),
        Check::hard(
            s,
            "saddles",
            (w1 - Complex64::new(2.46, 1.14)).norm() < 0.01 && (w40 - Complex64::new(0.29, 0.52)).norm() < 0.01,
            format!("{} {} and {} {}", sig6(w1.re), sig6(w1.im), sig6(w40.re), sig6(w40.im)),
        ),
    ])
}

fn suite_sbound() -> Result<Vec<Check>, CliError> {
    let s = Suite::Sbound;
    let mut cases = Vec::new();
    for k in [1u32, 2, 5, 40] {
        for al in [2.0 * PI, 10.0, 50.0, 200.0] {
            for a in [0.1, 1.0] {
                cases.push((k, al, a));
            }
        }
    }
    let results = cases
        .par_iter()
        .map(|&(k, al, a)| Ok(s_k_contour(&PhaseContext::new(k, al, a)?)?))
        .collect::<Result<Vec<_>, CliError>>()?;
    let names = ["l1", "l2", "l3", "l4", "s_k"];
    let mut out = Vec::new();
    for (i, name) in names.iter().enumerate() {
        let mut ok = true;
        let mut worst_ratio: f64 = 0.0;
        for d in &results {
            let (v, b) = match i {
                0 => (d.l1.norm(), d.bound_l1),
                1 => (d.l2.norm(), d.bound_l2),
                2 => (d.l3.norm(), d.bound_l3),
                3 => (d.l4.norm(), d.bound_l4),
                _ => (d.s_k.norm(), d.s_bound),
            };
            ok &= if i == 0 { v < b } else { v <= b };
            worst_ratio = worst_ratio.max(v / b);
        }
        out.push(Check::hard(
            s,
            name,
            ok,
            format!("max |part|/bound {} over {} contours", sig6(worst_ratio), results.len()),
        ));
    }
    let paths_ok = results
        .iter()
        .all(|d| d.path.checks.box_contained && d.path.checks.tail_negative);
    out.push(Check::hard(s, "path_checks", paths_ok, "box containment and decaying tails".to_string()));
    Ok(out)
}

fn suite_theorem(measure_cap: f64) -> Result<Vec<Check>, CliError> {
    let s = Suite::Theorem;
    let lo = 2.0 * PI;
    let n = ((measure_cap.min(60.0) - lo) / 0.5).floor() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| lo + 0.5 * i as f64).collect();
    let rows = grid
        .par_iter()
        .map(|&al| bound_row(al, 1.0, measure_cap))
        .collect::<Result<Vec<_>, _>>()?;
    let mut ok = true;
    let mut margin = f64::INFINITY;
    let mut precise = true;
    let mut measured = 0;
    for row in &rows {
        let Some(m) = row.measured else { continue };
        measured += 1;
        precise &= m.err_bound < 0.01 * m.abs_value;
        let gap = row.get(Family::Theorem).log10_value - m.log10();
        ok &= gap >= 0.0;
        margin = margin.min(gap);
    }
    let mut conj_ok = true;
    let mut remark_ok = true;
    let mut remark_count = 0;
    let mut al = lo;
    while al <= 1000.0 {
        conj_ok &= conjecture_bound(al)?.log10_value <= theorem_bound(al)?.log10_value;
        if let Some((lhs, rhs)) = remark_sides(al)? {
            remark_ok &= lhs < rhs;
            remark_count += 1;
        }
        al += 0.5;
    }
    Ok(vec![
        Check::hard(
            s,
            "measured_below_theorem",
            ok && precise && measured > 0,
            format!(
                "{measured} measured points on [2pi, {}], min log10 margin {}",
                sig6(grid.last().copied().unwrap_or(lo)),
                sig6(margin)
            ),
        ),
        Check::hard(s, "conjecture_below_theorem", conj_ok, "alpha in [2pi, 1000], step 0.5".to_string()),
        Check::hard(s, "remark", remark_ok, format!("{remark_count} points with |w| > 1")),
    ])
}

pub fn checks(suite: Suite, measure_cap: f64) -> Result<Vec<Check>, CliError> {
    match suite {
        Suite::W0 => suite_w0(),
        Suite::LemmaT => suite_lemma_t(),
        Suite::Sine => suite_sine(),
        Suite::Monotone => suite_monotone(),
        Suite::P3 => suite_p3(),
        Suite::Contour => suite_contour(),
        Suite::Sbound => suite_sbound(),
        Suite::Theorem => suite_theorem(measure_cap),
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::EACH {
                all.extend(checks(s, measure_cap)?);
            }
            Ok(all)
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Status, CliError> {
    let all = checks(cfg.suite, cfg.measure_cap)?;
    let mut out = sink(cfg.out.as_deref())?;
    for c in &all {
        writeln!(out, "{}", c.line())?;
    }
    let failed = all.iter().filter(|c| c.pass == Some(false)).count();
    let passed = all.iter().filter(|c| c.pass == Some(true)).count();
    writeln!(out, "{passed} passed, {failed} failed")?;
    out.flush()?;
    Ok(if failed == 0 { Status::Ok } else { Status::VerifyFailed })
}
