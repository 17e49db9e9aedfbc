//! Fractional Stieltjes constants and explicit bounds for them.
//!
//! * [`special_functions`]: Lambert `W₀`, the `T`/`I` pair, Bernoulli tables, `ln Γ`.
//! * [`stieltjes`]: Euler–Maclaurin evaluation of `C_α(a)` and `γ_α(a)`, Hurwitz ζ.
//! * [`contour`]: steepest-descent contours for `S_k = ∫_1^∞ e^{2πikx} f_α''(x) dx`.
//! * [`bounds`]: log-domain bound families for `|γ_α|` and `|C_α(a)|`.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bounds;
pub mod contour;
pub mod dd;
pub mod error;
pub mod quadrature;
pub mod special_functions;
pub mod stieltjes;

pub use error::{Error, Result};
pub use special_functions::ComplexPoint;
