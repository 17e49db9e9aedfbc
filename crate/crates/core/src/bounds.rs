//! Bounds for `|γ_m|`, `|γ_α|` and `|C_α(a)|`, all held as `log10` of the
//! magnitude so that factorials and `(log m)^m` never overflow.
//!
//! Historical families (Berndt, Williams–Zhang, Matsuoka, Saad Eddin) are
//! stated for integer `m` and `a = 1`; the FPS bound for real `α > 0` and
//! `a = 1`; the conjecture and the theorem for any `a ∈ (0, 1]`.

use alloc::vec::Vec;
use core::f64::consts::{LN_10, LN_2, PI};
use core::fmt;

use num_complex::Complex64;

use crate::special_functions::{lambert_w0, log_factorial};
use crate::stieltjes::{c_alpha, EmConfig};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Berndt,
    WilliamsZhang,
    Matsuoka,
    SaadEddin,
    Fps,
    Conjecture,
    Theorem,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Berndt,
        Family::WilliamsZhang,
        Family::Matsuoka,
        Family::SaadEddin,
        Family::Fps,
        Family::Conjecture,
        Family::Theorem,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Family::Berndt => "berndt",
            Family::WilliamsZhang => "williams_zhang",
            Family::Matsuoka => "matsuoka",
            Family::SaadEddin => "saad_eddin",
            Family::Fps => "fps",
            Family::Conjecture => "conjecture",
            Family::Theorem => "theorem",
        }
    }

    /// Defined only at integer index.
    pub fn integer_only(self) -> bool {
        matches!(
            self,
            Family::Berndt | Family::WilliamsZhang | Family::Matsuoka | Family::SaadEddin
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogBound {
    pub name: Family,
    /// `log10` of the bound; NaN when the formula cannot be evaluated.
    pub log10_value: f64,
    pub valid: bool,
    /// Why the bound does not apply, when `valid` is false.
    pub reason: Option<&'static str>,
    pub alpha: f64,
    pub a: f64,
}

impl LogBound {
    fn ok(name: Family, ln_value: f64, alpha: f64, a: f64) -> LogBound {
        LogBound {
            name,
            log10_value: ln_value / LN_10,
            valid: ln_value.is_finite(),
            reason: if ln_value.is_finite() { None } else { Some("non-finite value") },
            alpha,
            a,
        }
    }

    fn invalid(name: Family, log10_value: f64, reason: &'static str, alpha: f64, a: f64) -> LogBound {
        LogBound {
            name,
            log10_value,
            valid: false,
            reason: Some(reason),
            alpha,
            a,
        }
    }

    /// The bound itself; overflows to infinity for large `log10_value`.
    pub fn value(&self) -> f64 {
        libm::pow(10.0, self.log10_value)
    }
}

fn check_index(op: &'static str, m: u64) -> Result<()> {
    if m < 1 {
        return Err(Error::Domain {
            op,
            name: "m",
            value: m as f64,
        });
    }
    Ok(())
}

/// `(3 + (−1)^m)`: 4 for even `m`, 2 for odd.
fn parity_factor(m: u64) -> f64 {
    if m.is_multiple_of(2) {
        4.0
    } else {
        2.0
    }
}

/// `(3+(−1)^m)(m−1)!/π^m`.
pub fn berndt(m: u64) -> Result<LogBound> {
    check_index("berndt", m)?;
    let ln = libm::log(parity_factor(m)) + log_factorial(m - 1) - m as f64 * libm::log(PI);
    Ok(LogBound::ok(Family::Berndt, ln, m as f64, 1.0))
}

/// `(3+(−1)^m)(2m)!/(m^{m+1}(2π)^m)`.
pub fn williams_zhang(m: u64) -> Result<LogBound> {
    check_index("williams_zhang", m)?;
    let mf = m as f64;
    let ln = libm::log(parity_factor(m)) + log_factorial(2 * m)
        - (mf + 1.0) * libm::log(mf)
        - mf * libm::log(2.0 * PI);
    Ok(LogBound::ok(Family::WilliamsZhang, ln, mf, 1.0))
}

/// `10^{−4}(log m)^m`, valid for `m > 4`.
pub fn matsuoka(m: u64) -> Result<LogBound> {
    check_index("matsuoka", m)?;
    let mf = m as f64;
    let log10 = if m == 1 {
        f64::NEG_INFINITY
    } else {
        -4.0 + mf * libm::log10(libm::log(mf))
    };
    if m <= 4 {
        return Ok(LogBound::invalid(Family::Matsuoka, log10, "requires m>4", mf, 1.0));
    }
    Ok(LogBound {
        name: Family::Matsuoka,
        log10_value: log10,
        valid: true,
        reason: None,
        alpha: mf,
        a: 1.0,
    })
}

/// `θ(m) = (m+1)/log(2(m+1)/π) − 1`.
pub fn saad_eddin_theta(m: u64) -> f64 {
    let n1 = m as f64 + 1.0;
    n1 / libm::log(2.0 * n1 / PI) - 1.0
}

/// Reading of the exponent factor written `(n+1)` in the restated Saad Eddin bound.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SaadEddinExponent {
    /// `n` is the bound's own index, giving `m + 1`.
    #[default]
    MPlusOne,
    /// `n` counted from zero, giving `m`.
    M,
}

/// `m!·2√2·e^{−(m+1)log θ + θ(log θ + log(2/(πe)))}·(1 + 2^{−θ−1}(θ+1)/(θ−1))`.
pub fn saad_eddin(m: u64) -> Result<LogBound> {
    saad_eddin_with(m, SaadEddinExponent::MPlusOne)
}

pub fn saad_eddin_with(m: u64, exponent: SaadEddinExponent) -> Result<LogBound> {
    check_index("saad_eddin", m)?;
    let mf = m as f64;
    let theta = saad_eddin_theta(m);
    if !(theta > 1.0) {
        return Ok(LogBound::invalid(Family::SaadEddin, f64::NAN, "requires theta(m)>1", mf, 1.0));
    }
    let lead = match exponent {
        SaadEddinExponent::MPlusOne => mf + 1.0,
        SaadEddinExponent::M => mf,
    };
    let ln_theta = libm::log(theta);
    let ln = log_factorial(m)
        + libm::log(2.0 * core::f64::consts::SQRT_2)
        + (-lead * ln_theta + theta * (ln_theta + libm::log(2.0 / PI) - 1.0))
        + libm::log1p(libm::exp(-(theta + 1.0) * LN_2) * (theta + 1.0) / (theta - 1.0));
    Ok(LogBound::ok(Family::SaadEddin, ln, mf, 1.0))
}

fn check_alpha(op: &'static str, alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Domain {
            op,
            name: "alpha",
            value: alpha,
        });
    }
    Ok(())
}

/// `x = (π/2)e^{W₀(2(α+1)/π)}`.
pub fn fps_x(alpha: f64) -> Result<f64> {
    check_alpha("fps_bound", alpha)?;
    let w = lambert_w0(Complex64::new(2.0 * (alpha + 1.0) / PI, 0.0))?;
    Ok(0.5 * PI * libm::exp(w.re))
}

/// Index chosen by the FPS case split, with `⌊x⌉` rounding half to even.
pub fn fps_index(alpha: f64) -> Result<u64> {
    let x = fps_x(alpha)?;
    let n = if x < alpha {
        libm::roundeven(x)
    } else {
        libm::ceil(alpha - 1.0)
    };
    Ok(n.max(0.0) as u64)
}

/// `(3+(−1)^{n+1})Γ(α+1)(2(n+1))! / ((2π)^{n+1}(n+1)^{α+1}(n+1)!)` at the given `n`.
pub fn fps_bound_at(alpha: f64, n: u64) -> Result<LogBound> {
    check_alpha("fps_bound", alpha)?;
    let n1 = n + 1;
    let n1f = n1 as f64;
    let ln = libm::log(parity_factor(n1)) + libm::lgamma(alpha + 1.0) + log_factorial(2 * n1)
        - n1f * libm::log(2.0 * PI)
        - (alpha + 1.0) * libm::log(n1f)
        - log_factorial(n1);
    Ok(LogBound::ok(Family::Fps, ln, alpha, 1.0))
}

/// FPS bound at the index chosen by [`fps_index`].
pub fn fps_bound(alpha: f64) -> Result<LogBound> {
    fps_bound_at(alpha, fps_index(alpha)?)
}

/// FPS bound at `⌊x⌋` and `⌈x⌉`, exposing the rounding ambiguity in the
/// `x < α` branch; `None` in the other branch.
pub fn fps_neighbours(alpha: f64) -> Result<Option<(LogBound, LogBound)>> {
    let x = fps_x(alpha)?;
    if x >= alpha {
        return Ok(None);
    }
    let lo = fps_bound_at(alpha, libm::floor(x) as u64)?;
    let hi = fps_bound_at(alpha, libm::ceil(x) as u64)?;
    Ok(Some((lo, hi)))
}

/// `w(α) = W₀(αi/2π)`.
pub fn w_of_alpha(alpha: f64) -> Result<Complex64> {
    lambert_w0(Complex64::new(0.0, alpha / (2.0 * PI)))
}

/// `α·Re(log w(α) − 1/w(α))`, the natural log of `|e^{α(log w − 1/w)}|`.
pub fn saddle_exponent(alpha: f64) -> Result<f64> {
    let w = w_of_alpha(alpha)?;
    Ok(alpha * (libm::log(w.norm()) - w.re / w.norm_sqr()))
}

/// `2|e^{α(log w(α) − 1/w(α))}|`.
pub fn conjecture_bound(alpha: f64) -> Result<LogBound> {
    check_alpha("conjecture_bound", alpha)?;
    let ln = LN_2 + saddle_exponent(alpha)?;
    Ok(LogBound::ok(Family::Conjecture, ln, alpha, 1.0))
}

/// `ln(e^x + e^y)` with the larger exponent factored out.
pub fn log_add_exp(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + libm::log1p(libm::exp(lo - hi))
}

/// `α² + (3/4)α² log α·|e^{α(log w(α) − 1/w(α))}|`, valid for `α ≥ 2π`.
pub fn theorem_bound(alpha: f64) -> Result<LogBound> {
    check_alpha("theorem_bound", alpha)?;
    let ln_a = libm::log(alpha);
    let first = 2.0 * ln_a;
    let second = libm::log(0.75) + 2.0 * ln_a + libm::log(ln_a) + saddle_exponent(alpha)?;
    let ln = if ln_a > 0.0 { log_add_exp(first, second) } else { first };
    let mut bound = LogBound::ok(Family::Theorem, ln, alpha, 1.0);
    if alpha < 2.0 * PI {
        bound.valid = false;
        bound.reason = Some("requires alpha>=2pi");
    }
    Ok(bound)
}

/// Both sides of `α·Re(log w − 1/w) < α·log log α`, or `None` where
/// `|w(α)| ≤ 1` and the comparison is not claimed.
pub fn remark_sides(alpha: f64) -> Result<Option<(f64, f64)>> {
    check_alpha("remark_sides", alpha)?;
    let w = w_of_alpha(alpha)?;
    if w.norm() <= 1.0 {
        return Ok(None);
    }
    Ok(Some((saddle_exponent(alpha)?, alpha * libm::log(libm::log(alpha)))))
}

/// Integer index when `α` is a positive integer.
pub fn integer_index(alpha: f64) -> Option<u64> {
    (alpha >= 1.0 && libm::trunc(alpha) == alpha && alpha < 9.0e15).then_some(alpha as u64)
}

/// One family evaluated at `(α, a)`, with the domain rules applied.
pub fn family_bound(family: Family, alpha: f64, a: f64) -> Result<LogBound> {
    check_alpha("family_bound", alpha)?;
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::Domain {
            op: "family_bound",
            name: "a",
            value: a,
        });
    }
    let mut bound = if family.integer_only() {
        let Some(m) = integer_index(alpha) else {
            return Ok(LogBound::invalid(family, f64::NAN, "integer index only", alpha, a));
        };
        match family {
            Family::Berndt => berndt(m)?,
            Family::WilliamsZhang => williams_zhang(m)?,
            Family::Matsuoka => matsuoka(m)?,
            _ => saad_eddin(m)?,
        }
    } else {
        match family {
            Family::Fps => fps_bound(alpha)?,
            Family::Conjecture => conjecture_bound(alpha)?,
            _ => theorem_bound(alpha)?,
        }
    };
    bound.a = a;
    let stated_for_one = matches!(
        family,
        Family::Berndt | Family::WilliamsZhang | Family::Matsuoka | Family::SaadEddin | Family::Fps
    );
    if stated_for_one && a != 1.0 && bound.valid {
        bound.valid = false;
        bound.reason = Some("stated for a=1 only");
    }
    Ok(bound)
}

/// `|C_α(a)|` from the Euler–Maclaurin engine.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measured {
    pub abs_value: f64,
    pub err_bound: f64,
}

impl Measured {
    pub fn log10(&self) -> f64 {
        libm::log10(self.abs_value)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundRow {
    pub alpha: f64,
    pub a: f64,
    /// One entry per [`Family::ALL`], in that order.
    pub bounds: Vec<LogBound>,
    /// FPS at `⌊x⌋` and `⌈x⌉` where the rounding choice matters.
    pub fps_neighbours: Option<(LogBound, LogBound)>,
    pub measured: Option<Measured>,
}

impl BoundRow {
    pub fn get(&self, family: Family) -> &LogBound {
        &self.bounds[Family::ALL.iter().position(|f| *f == family).unwrap_or(0)]
    }

    /// Valid bounds that fall below the measured value.
    pub fn violations(&self) -> Vec<Family> {
        let Some(m) = self.measured else {
            return Vec::new();
        };
        let lo = libm::log10((m.abs_value - m.err_bound).max(f64::MIN_POSITIVE));
        self.bounds
            .iter()
            .filter(|b| b.valid && b.log10_value < lo)
            .map(|b| b.name)
            .collect()
    }
}

/// Default `α` above which measured values are not attempted.
pub const MEASURE_CAP: f64 = 60.0;

/// All families at `(α, a)`, plus `|C_α(a)|` when `α ≤ measure_cap`.
pub fn bound_row(alpha: f64, a: f64, measure_cap: f64) -> Result<BoundRow> {
    let bounds = Family::ALL
        .iter()
        .map(|&f| family_bound(f, alpha, a))
        .collect::<Result<Vec<_>>>()?;
    let fps_neighbours = if a == 1.0 { fps_neighbours(alpha)? } else { None };
    let measured = if alpha <= measure_cap {
        let r = c_alpha(alpha, a, &EmConfig::for_alpha(alpha))?;
        Some(Measured {
            abs_value: r.c_value.abs(),
            err_bound: r.err_bound,
        })
    } else {
        None
    };
    Ok(BoundRow {
        alpha,
        a,
        bounds,
        fps_neighbours,
        measured,
    })
}

/// [`bound_row`] over a grid with the default measurement cap.
pub fn bound_table(alpha_grid: &[f64], a: f64) -> Result<Vec<BoundRow>> {
    if alpha_grid.is_empty() {
        return Err(Error::Config("alpha grid is empty"));
    }
    alpha_grid.iter().map(|&al| bound_row(al, a, MEASURE_CAP)).collect()
}
