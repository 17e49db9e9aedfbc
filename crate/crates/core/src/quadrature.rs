//! Gauss–Legendre rules and an adaptive Gauss–Kronrod (7, 15) integrator.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use num_complex::Complex64;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> GaussLegendre {
        assert!(n >= 1, "Gauss–Legendre order must be positive");
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `∫_a^b f` together with `Σ |w f|` (for rounding estimates).
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> (f64, f64) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        let mut abs = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = w * f(mid + half * x);
            sum += v;
            abs += v.abs();
        }
        (sum * half, abs * half.abs())
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: Complex64,
    pub err: f64,
    /// `∫ |f|` estimate from the Kronrod rule.
    pub abs_integral: f64,
    pub converged: bool,
}

#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    abs: f64,
    /// Error estimate is at the rounding floor; bisection will not reduce it.
    floor: bool,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> Panel {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs = fc.norm() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(mid - dx);
        let f2 = f(mid + dx);
        kron += (f1 + f2) * WGK[j];
        abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let value = kron * half;
    let abs = abs * half.abs();
    let raw = ((kron - gauss) * half).norm();
    // QUADPACK-style scaling of the raw Gauss/Kronrod difference, with a
    // rounding floor.
    let err = if raw > 0.0 && abs > 0.0 {
        let ratio = 200.0 * raw / abs;
        abs * libm::pow(ratio, 1.5).min(1.0)
    } else {
        raw
    };
    let rounding = 50.0 * f64::EPSILON * abs;
    Panel {
        a,
        b,
        value,
        err: err.max(rounding),
        abs,
        floor: err <= rounding,
    }
}

/// Adaptive Gauss–Kronrod integration of a complex-valued `f` over the
/// interval spanned by `breaks` (which must be increasing). Panels are
/// bisected worst-first until the summed error estimate drops below
/// `max(abs_tol, rel_tol·|I|)` or `max_panels` is reached.
pub fn adaptive<F: FnMut(f64) -> Complex64>(
    mut f: F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> QuadResult {
    let mut heap: BinaryHeap<Panel> = breaks.windows(2).map(|w| gk15(&mut f, w[0], w[1])).collect();
    // Running sums drift under repeated add/subtract, so they are rebuilt
    // from the heap before returning.
    let mut value: Complex64 = heap.iter().map(|p| p.value).sum();
    let mut err: f64 = heap.iter().map(|p| p.err).sum();
    loop {
        let target = abs_tol.max(rel_tol * value.norm());
        let stuck = heap.peek().is_none_or(|p| p.floor || {
            let m = 0.5 * (p.a + p.b);
            m <= p.a || m >= p.b
        });
        if err <= target || heap.len() >= max_panels || stuck {
            let value: Complex64 = heap.iter().map(|p| p.value).sum();
            let err: f64 = heap.iter().map(|p| p.err).sum();
            let abs: f64 = heap.iter().map(|p| p.abs).sum();
            return QuadResult {
                value,
                err,
                abs_integral: abs,
                converged: err <= abs_tol.max(rel_tol * value.norm()),
            };
        }
        let Some(p) = heap.pop() else { unreachable!() };
        let m = 0.5 * (p.a + p.b);
        let left = gk15(&mut f, p.a, m);
        let right = gk15(&mut f, m, p.b);
        value += left.value + right.value - p.value;
        err += left.err + right.err - p.err;
        heap.push(left);
        heap.push(right);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(8);
        // degree 15 is exact for 8 nodes
        let (v, _) = rule.integrate(0.0, 2.0, |x| libm::pow(x, 15.0));
        assert!((v - libm::pow(2.0, 16.0) / 16.0).abs() < 1e-10);
        let wsum: f64 = rule.weights.iter().sum();
        assert!((wsum - 2.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_high_order_nodes_are_symmetric() {
        let rule = GaussLegendre::new(32);
        let mut xs = rule.nodes.clone();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for i in 0..16 {
            assert!((xs[i] + xs[31 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn adaptive_oscillatory_complex() {
        // ∫_0^1 e^{i 40 x} dx = (e^{40i} - 1) / (40 i)
        let i = Complex64::new(0.0, 1.0);
        let r = adaptive(|x| (i * 40.0 * x).exp(), &[0.0, 1.0], 1e-12, 1e-12, 500);
        let exact = ((i * 40.0).exp() - 1.0) / (i * 40.0);
        assert!(r.converged);
        assert!((r.value - exact).norm() < 1e-13);
        assert!(r.err < 1e-12);
    }

    #[test]
    fn adaptive_handles_endpoint_peak() {
        let r = adaptive(|x| Complex64::new(libm::sqrt(x), 0.0), &[0.0, 1.0], 1e-12, 1e-12, 2000);
        assert!((r.value.re - 2.0 / 3.0).abs() < 1e-11);
    }
}
