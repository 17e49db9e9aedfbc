use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stieltjes_core::stieltjes::EmConfig;

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "stieltjes", version, about = "Fractional Stieltjes constants, saddle contours and bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate C_α(a) and γ_α(a) by Euler–Maclaurin summation.
    Compute(Common),
    /// Tabulate every bound family against measured |C_α(a)|.
    Bounds(Common),
    /// Saddle point, contour and the L1..L4 decomposition of S_k.
    Saddle(Common),
    /// Run a verification suite.
    Verify(Common),
    /// Bound comparison plot (SVG) with the CSV it was drawn from.
    Plot(Common),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, conflicts_with_all = ["alpha_min", "alpha_max"])]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub alpha_min: Option<f64>,
    #[arg(long)]
    pub alpha_max: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Summation cut of the Euler–Maclaurin formula.
    #[arg(long)]
    pub m: Option<u32>,
    /// Correction order of the Euler–Maclaurin formula (even).
    #[arg(long)]
    pub v: Option<u32>,
    /// Target error of the remainder integral.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Largest α at which |C_α(a)| is measured.
    #[arg(long, default_value_t = stieltjes_core::bounds::MEASURE_CAP)]
    pub measure_cap: f64,
    #[arg(short, long, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    W0,
    #[value(name = "lemma_t")]
    LemmaT,
    Sine,
    Monotone,
    P3,
    Contour,
    Sbound,
    Theorem,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::W0,
        Suite::LemmaT,
        Suite::Sine,
        Suite::Monotone,
        Suite::P3,
        Suite::Contour,
        Suite::Sbound,
        Suite::Theorem,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Suite::W0 => "w0",
            Suite::LemmaT => "lemma_t",
            Suite::Sine => "sine",
            Suite::Monotone => "monotone",
            Suite::P3 => "p3",
            Suite::Contour => "contour",
            Suite::Sbound => "sbound",
            Suite::Theorem => "theorem",
            Suite::All => "all",
        }
    }
}

/// Validated run parameters shared by the subcommands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub alphas: Vec<f64>,
    pub a: f64,
    pub k: u32,
    pub em: EmOverrides,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub suite: Suite,
    pub measure_cap: f64,
    pub verbosity: u8,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EmOverrides {
    pub m: Option<u32>,
    pub v: Option<u32>,
    pub tol: Option<f64>,
}

impl EmOverrides {
    pub fn config(&self, alpha: f64) -> EmConfig {
        let base = if self.m.is_none() && self.v.is_none() {
            EmConfig::for_alpha(alpha)
        } else {
            EmConfig::default()
        };
        EmConfig {
            m: self.m.unwrap_or(base.m),
            v: self.v.unwrap_or(base.v),
            tol: self.tol.unwrap_or(base.tol),
            ..base
        }
    }
}

/// Grid `min, min+step, …` up to `max` inclusive, built from integer
/// multiples so that it does not drift.
pub fn alpha_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(CliError::usage(format!("--step must be positive, got {step}")));
    }
    if !(min <= max) || !min.is_finite() || !max.is_finite() {
        return Err(CliError::usage(format!(
            "--alpha-min ({min}) must not exceed --alpha-max ({max})"
        )));
    }
    let n = ((max - min) / step * (1.0 + 1e-12)).floor() as usize;
    if n > 10_000_000 {
        return Err(CliError::usage("alpha grid has more than 10^7 points".to_string()));
    }
    Ok((0..=n).map(|i| min + i as f64 * step).collect())
}

impl Common {
    /// Resolves defaults for one subcommand: `default_range` is used when
    /// neither `--alpha` nor a range is given.
    pub fn resolve(&self, default_range: (f64, f64, f64), default_format: Format) -> Result<RunConfig, CliError> {
        let alphas = match (self.alpha, self.alpha_min, self.alpha_max) {
            (Some(al), _, _) => vec![al],
            (None, None, None) => alpha_grid(default_range.0, default_range.1, self.step.unwrap_or(default_range.2))?,
            (None, lo, hi) => alpha_grid(
                lo.unwrap_or(default_range.0),
                hi.unwrap_or(default_range.1),
                self.step.unwrap_or(default_range.2),
            )?,
        };
        for &al in &alphas {
            if !al.is_finite() || al < 0.0 {
                return Err(CliError::usage(format!("--alpha must be finite and >= 0, got {al}")));
            }
        }
        let a = self.a.unwrap_or(1.0);
        if !(a > 0.0 && a <= 1.0) {
            return Err(CliError::usage(format!("--a must lie in (0, 1], got {a}")));
        }
        let k = self.k.unwrap_or(1);
        if k == 0 {
            return Err(CliError::usage("--k must be at least 1".to_string()));
        }
        if let Some(tol) = self.tol {
            if !(tol > 0.0) {
                return Err(CliError::usage(format!("--tol must be positive, got {tol}")));
            }
        }
        Ok(RunConfig {
            alphas,
            a,
            k,
            em: EmOverrides {
                m: self.m,
                v: self.v,
                tol: self.tol,
            },
            out: self.out.clone(),
            format: self.format.unwrap_or(default_format),
            suite: self.suite,
            measure_cap: self.measure_cap,
            verbosity: self.verbose,
        })
    }
}
