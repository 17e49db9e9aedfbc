//! Primitive special functions: the principal branch of Lambert W, the
//! `T`/`I` pair on the imaginary axis, Bernoulli numbers and periodic
//! Bernoulli functions, and `ln Γ`.

use alloc::vec::Vec;
use core::f64::consts::{E, FRAC_PI_2};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::dd::Dd;
use crate::error::{Error, Result};

/// A point `σ + it` of the complex plane.
pub type ComplexPoint = Complex64;

/// Largest Bernoulli index the tables will hold.
pub const BERNOULLI_MAX: usize = 60;

const W0_MAX_ITER: usize = 50;
const W0_TARGET: f64 = 1e-15;
const W0_ACCEPT: f64 = 1e-13;

/// Principal branch `W₀(z)` of the Lambert W function.
///
/// Starts from `log(1+z)` (or `z - z²` near the origin) and runs Halley's
/// iteration on `w·eʷ − z` until the residual drops below `1e-15·max(1,|z|)`.
/// Returns [`Error::NonConvergence`] if after 50 steps the residual is still
/// above `1e-13·max(1,|z|)`.
pub fn lambert_w0(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain {
            op: "lambert_w0",
            name: "|z|",
            value: f64::INFINITY,
        });
    }
    if z.im == 0.0 && z.re < -1.0 / E {
        return Err(Error::Domain {
            op: "lambert_w0",
            name: "z",
            value: z.re,
        });
    }
    if z.re == 0.0 && z.im == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }

    let scale = z.norm().max(1.0);
    let mut w = if z.norm() >= 1.0 / E {
        (z + 1.0).ln()
    } else {
        z - z * z
    };
    let mut residual = f64::INFINITY;
    for _ in 0..W0_MAX_ITER {
        let ew = w.exp();
        let f = w * ew - z;
        residual = f.norm();
        if residual <= W0_TARGET * scale {
            return Ok(w);
        }
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (wp1 * 2.0));
        w -= step;
        if step.norm() <= 4.0 * f64::EPSILON * w.norm() {
            residual = (w * w.exp() - z).norm();
            break;
        }
    }
    if residual <= W0_ACCEPT * scale {
        Ok(w)
    } else {
        Err(Error::NonConvergence { last: w, residual })
    }
}

/// `T(y) = y / cos y · e^{y tan y}`, the inverse of [`i_of_t`] on `[0, π/2)`.
pub fn t_of_y(y: f64) -> Result<f64> {
    if !(0.0..FRAC_PI_2).contains(&y) {
        return Err(Error::Domain {
            op: "t_of_y",
            name: "y",
            value: y,
        });
    }
    let value = y / libm::cos(y) * libm::exp(y * libm::tan(y));
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow("t_of_y"))
    }
}

/// `I(t) = Im W₀(it)` for `t > 0`.
pub fn i_of_t(t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain {
            op: "i_of_t",
            name: "t",
            value: t,
        });
    }
    Ok(lambert_w0(Complex64::new(0.0, t))?.im)
}

/// Exact Bernoulli numbers `B_0..=B_vmax` with `B_1 = -1/2`.
///
/// Immutable once built. Values are exact rationals; `f64` copies are kept
/// alongside and double-double values are produced on demand.
#[derive(Clone, Debug)]
pub struct BernoulliTable {
    values: Vec<BigRational>,
    floats: Vec<f64>,
}

/// Builds the table up to `B_vmax`, refusing indices past [`BERNOULLI_MAX`].
pub fn bernoulli_numbers(vmax: usize) -> Result<BernoulliTable> {
    if vmax > BERNOULLI_MAX {
        return Err(Error::Config("Bernoulli index above 60"));
    }
    // Akiyama–Tanigawa; it yields B_1 = +1/2, flipped below.
    let mut row: Vec<BigRational> = Vec::with_capacity(vmax + 1);
    let mut values = Vec::with_capacity(vmax + 1);
    for m in 0..=vmax {
        row.push(BigRational::new(BigInt::from(1), BigInt::from(m as u64 + 1)));
        for j in (1..=m).rev() {
            let diff = &row[j - 1] - &row[j];
            row[j - 1] = diff * BigRational::from_integer(BigInt::from(j as u64));
        }
        values.push(row[0].clone());
    }
    if vmax >= 1 {
        values[1] = -values[1].clone();
    }
    let floats = values
        .iter()
        .map(|b| b.to_f64().unwrap_or(f64::NAN))
        .collect();
    Ok(BernoulliTable { values, floats })
}

impl BernoulliTable {
    pub fn vmax(&self) -> usize {
        self.values.len() - 1
    }

    pub fn exact(&self, j: usize) -> &BigRational {
        &self.values[j]
    }

    pub fn get(&self, j: usize) -> f64 {
        self.floats[j]
    }

    pub fn get_dd(&self, j: usize) -> Dd {
        Dd::from_rational(&self.values[j])
    }

    /// `B_{2j} / (2j)!` as a double-double.
    pub fn scaled_even_dd(&self, j: usize) -> Dd {
        let mut fact = BigInt::from(1);
        for i in 2..=(2 * j) as u64 {
            fact *= BigInt::from(i);
        }
        Dd::from_rational(&(&self.values[2 * j] / BigRational::from_integer(fact)))
    }

    /// Bernoulli polynomial `B_v(t)`.
    pub fn polynomial(&self, v: usize, t: f64) -> Result<f64> {
        if v > self.vmax() {
            return Err(Error::Domain {
                op: "periodic_bernoulli",
                name: "v",
                value: v as f64,
            });
        }
        // B_v(t) = Σ_j C(v,j) B_j t^{v-j}, Horner in t.
        let mut binom = 1.0_f64;
        let mut coeffs = Vec::with_capacity(v + 1);
        for j in 0..=v {
            if j > 0 {
                binom = binom * (v + 1 - j) as f64 / j as f64;
            }
            coeffs.push(binom * self.floats[j]);
        }
        Ok(coeffs.iter().fold(0.0, |acc, c| acc * t + c))
    }

    /// Periodic Bernoulli function `P_v(x) = B_v({x})`.
    pub fn periodic(&self, v: usize, x: f64) -> Result<f64> {
        let frac = x - libm::floor(x);
        self.polynomial(v, frac)
    }

    pub fn is_zero(&self, j: usize) -> bool {
        self.values[j].is_zero()
    }
}

/// `B_v({x})`, building a table just large enough for `v`.
pub fn periodic_bernoulli(v: usize, x: f64) -> Result<f64> {
    if v == 0 {
        return Err(Error::Domain {
            op: "periodic_bernoulli",
            name: "v",
            value: 0.0,
        });
    }
    bernoulli_numbers(v)?.periodic(v, x)
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            op: "log_gamma",
            name: "x",
            value: x,
        });
    }
    Ok(libm::lgamma(x))
}

/// `ln n!`.
pub fn log_factorial(n: u64) -> f64 {
    libm::lgamma(n as f64 + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_4, PI};

    fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
        let (a, b) = (libm::log(lo), libm::log(hi));
        (0..n).map(move |i| libm::exp(a + (b - a) * i as f64 / (n - 1) as f64))
    }

    #[test]
    fn w0_trivial_points() {
        assert_eq!(lambert_w0(Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
        let w = lambert_w0(Complex64::new(E, 0.0)).unwrap();
        assert!((w - 1.0).norm() < 1e-15);
    }

    #[test]
    fn w0_reference_saddles() {
        let w1 = lambert_w0(Complex64::new(0.0, 200.0 / (2.0 * PI))).unwrap();
        assert!((w1 - Complex64::new(2.46, 1.14)).norm() < 0.01, "{w1}");
        let w40 = lambert_w0(Complex64::new(0.0, 200.0 / (2.0 * PI * 40.0))).unwrap();
        assert!((w40 - Complex64::new(0.29, 0.52)).norm() < 0.01, "{w40}");
    }

    #[test]
    fn w0_identity_and_range_on_axes() {
        for t in grid(0.01, 1e4, 200) {
            let z = Complex64::new(0.0, t);
            let w = lambert_w0(z).unwrap();
            assert!((w * w.exp() - z).norm() <= 1e-13 * t.max(1.0));
            assert!(w.im > 0.0 && w.im < FRAC_PI_2);
            assert!(w.re > 0.0);
            if t > 1.97 {
                assert!(w.re < libm::log(t));
            }
        }
        for x in grid(1e-3, 1e4, 100) {
            let z = Complex64::new(x, 0.0);
            let w = lambert_w0(z).unwrap();
            assert!((w * w.exp() - z).norm() <= 1e-13 * x.max(1.0));
            assert!(w.im.abs() < 1e-15);
        }
    }

    #[test]
    fn w0_rejects_branch_cut() {
        assert!(matches!(
            lambert_w0(Complex64::new(-1.0, 0.0)),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn t_of_y_values() {
        assert_eq!(t_of_y(0.0).unwrap(), 0.0);
        let expected = FRAC_PI_4 * core::f64::consts::SQRT_2 * libm::exp(FRAC_PI_4);
        assert!((t_of_y(FRAC_PI_4).unwrap() - expected).abs() < 1e-14);
        assert!((expected - 2.436).abs() < 1e-3);
        assert!(t_of_y(FRAC_PI_2).is_err());
        assert!(t_of_y(-0.1).is_err());
    }

    #[test]
    fn t_and_i_are_inverse() {
        let x = t_of_y(0.5).unwrap();
        assert!((i_of_t(x).unwrap() - 0.5).abs() < 1e-12);
        for &t in &[0.1, 1.0, 10.0, 100.0] {
            let back = t_of_y(i_of_t(t).unwrap()).unwrap();
            assert!((back - t).abs() <= 1e-12 * t.max(1.0));
        }
        assert!((i_of_t(200.0 / (2.0 * PI)).unwrap() - 1.14).abs() < 0.01);
        assert!((i_of_t(200.0 / (80.0 * PI)).unwrap() - 0.52).abs() < 0.01);
        assert!(i_of_t(0.0).is_err());
    }

    #[test]
    fn t_is_strictly_increasing() {
        let n = 2000;
        let mut prev = t_of_y(0.0).unwrap();
        for i in 1..n {
            let y = FRAC_PI_2 * 0.999 * i as f64 / n as f64;
            let cur = t_of_y(y).unwrap();
            assert!(cur > prev);
            prev = cur;
        }
    }

    /// Oracle: Σ_{j<n+1} C(n+1, j) B_j = 0.
    fn bernoulli_by_recurrence(n: usize) -> Vec<BigRational> {
        let mut b: Vec<BigRational> = Vec::new();
        for m in 0..=n {
            if m == 0 {
                b.push(BigRational::from_integer(BigInt::from(1)));
                continue;
            }
            let mut acc = BigRational::zero();
            let mut binom = BigInt::from(1); // C(m+1, 0)
            for (j, bj) in b.iter().enumerate() {
                acc += BigRational::from_integer(binom.clone()) * bj;
                binom = binom * BigInt::from((m + 1 - j) as u64) / BigInt::from(j as u64 + 1);
            }
            // binom is now C(m+1, m)
            b.push(-acc / BigRational::from_integer(binom));
        }
        b
    }

    #[test]
    fn bernoulli_matches_recurrence_oracle() {
        let table = bernoulli_numbers(60).unwrap();
        let oracle = bernoulli_by_recurrence(60);
        for (j, b) in oracle.iter().enumerate() {
            assert_eq!(table.exact(j), b, "B_{j}");
        }
        assert_eq!(table.get(1), -0.5);
        assert!((table.get(2) - 1.0 / 6.0).abs() < 1e-17);
        assert_eq!(table.get(3), 0.0);
        assert!((table.get(4) + 1.0 / 30.0).abs() < 1e-17);
        for j in (3..=60).step_by(2) {
            assert!(table.is_zero(j));
        }
        assert!(bernoulli_numbers(61).is_err());
    }

    #[test]
    fn periodic_bernoulli_values() {
        assert!((periodic_bernoulli(2, 0.0).unwrap() - 1.0 / 6.0).abs() < 1e-16);
        assert!((periodic_bernoulli(2, 0.5).unwrap() + 1.0 / 12.0).abs() < 1e-16);
        assert!((periodic_bernoulli(2, 3.25).unwrap() - periodic_bernoulli(2, 0.25).unwrap()).abs() < 1e-15);
        assert!(periodic_bernoulli(0, 0.3).is_err());
    }

    #[test]
    fn log_gamma_values() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
        let ten_fact: u64 = (1..=10).product();
        assert!((log_gamma(11.0).unwrap() - libm::log(ten_fact as f64)).abs() < 1e-13);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-2.5).is_err());
    }

    #[test]
    fn log_gamma_relative_accuracy_to_thirty() {
        // Γ(n) = (n-1)! exactly for n ≤ 30 via double-double products.
        for n in 1..=30u32 {
            let fact = Dd::factorial(n - 1).to_f64();
            let g = libm::exp(log_gamma(n as f64).unwrap());
            assert!(((g - fact) / fact).abs() <= 1e-12, "n = {n}");
        }
        // Γ(n + 1/2) = (2n)! √π / (4^n n!)
        for n in 0..=25u32 {
            let exact = Dd::factorial(2 * n).to_f64() * libm::sqrt(PI)
                / (libm::pow(4.0, n as f64) * Dd::factorial(n).to_f64());
            let g = libm::exp(log_gamma(n as f64 + 0.5).unwrap());
            assert!(((g - exact) / exact).abs() <= 1e-12, "n = {n}");
        }
    }
}
