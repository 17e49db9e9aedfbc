use num_complex::Complex64;
use thiserror::Error;

use crate::contour::SegmentKind;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside the domain of {op}")]
    Domain {
        op: &'static str,
        name: &'static str,
        value: f64,
    },

    #[error("invalid configuration: {0}")]
    Config(&'static str),

    #[error("Lambert W iteration stalled at {last} with residual {residual:e}")]
    NonConvergence { last: Complex64, residual: f64 },

    #[error("log(x+a) = {log_value} hits a pole or branch cut of log^{exponent}")]
    Pole { log_value: f64, exponent: f64 },

    #[error("tail cut M = {tail_cut} too small: derivative envelope not yet decreasing")]
    TailCutTooSmall { tail_cut: f64 },

    #[error("x_max = {x_max} too small: tail bound {tail_bound:e} above tolerance")]
    XMaxTooSmall { x_max: f64, tail_bound: f64 },

    #[error("phase is singular at y = 0")]
    Singularity,

    #[error("level line lost near {last_good}: {reason}")]
    Tracing {
        last_good: Complex64,
        reason: &'static str,
    },

    #[error("contour construction failed: {0}")]
    Construction(&'static str),

    #[error("quadrature on {segment:?} segment did not reach tolerance (estimate {estimate:e})")]
    Quadrature { segment: SegmentKind, estimate: f64 },

    #[error("non-finite intermediate in {0}")]
    Overflow(&'static str),
}
