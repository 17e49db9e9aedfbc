//! Steepest-descent evaluation of `S_k = ∫_1^∞ e^{2πikx} f_α''(x) dx`.
//!
//! After `y = log(x+a)` the integral becomes `∫_b^∞ e^{h_k(y)} e^{−2y} q(y) dy`
//! with `h_k(y) = 2πik(e^y − a) + α log y`, `b = log(1+a)` and
//! `q(y) = (α(α−1) − 3αy + 2y²)/y²`. The contour runs along the real axis
//! from `b` to 1, along the unit circle to the point `u` where it meets the
//! level line `Im h_k = Im h_k(w)` through the saddle `w = W₀(iα/(2πk))`,
//! along that level line to `v` with `Re v = 2 log α`, and from there out to
//! infinity, where `Im y → π/2`.
//!
//! The integrand is analytic in `Re y > 0`, so each traced polyline is
//! integrated chord by chord; only the endpoints `u` and `v` have to lie
//! on the level line exactly.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{adaptive, GaussLegendre};
use crate::special_functions::lambert_w0;
use crate::stieltjes::{deriv_coeffs, deriv_tail_envelope, f_deriv, periodic_integral, EmConfig, TailEstimate, MAX_ORDER};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Default arc-length step of the level-line tracer.
pub const TRACE_STEP: f64 = 0.02;

/// Largest allowed `|Im h − Im h(w)|` on a traced node.
pub const LEVEL_TOL: f64 = 1e-8;

const MAX_NODES: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegmentKind {
    RealAxis,
    UnitArc,
    LevelLine,
    Tail,
}

impl SegmentKind {
    pub fn label(self) -> &'static str {
        match self {
            SegmentKind::RealAxis => "real_axis",
            SegmentKind::UnitArc => "unit_arc",
            SegmentKind::LevelLine => "level_line",
            SegmentKind::Tail => "tail",
        }
    }
}

/// Parameters of one phase `h_k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseContext {
    pub k: u32,
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
}

impl PhaseContext {
    pub fn new(k: u32, alpha: f64, a: f64) -> Result<PhaseContext> {
        if k == 0 {
            return Err(Error::Domain {
                op: "phase",
                name: "k",
                value: 0.0,
            });
        }
        if !(alpha >= 1.0) || !alpha.is_finite() {
            return Err(Error::Domain {
                op: "phase",
                name: "alpha",
                value: alpha,
            });
        }
        if !(a > 0.0 && a <= 1.0) {
            return Err(Error::Domain {
                op: "phase",
                name: "a",
                value: a,
            });
        }
        Ok(PhaseContext {
            k,
            alpha,
            a,
            b: libm::log1p(a),
        })
    }

    fn omega(&self) -> f64 {
        2.0 * PI * self.k as f64
    }
}

/// `h_k(y) = 2πik(e^y − a) + α log y` on the principal branch.
pub fn h(ctx: &PhaseContext, y: Complex64) -> Result<Complex64> {
    if y == Complex64::new(0.0, 0.0) {
        return Err(Error::Singularity);
    }
    Ok(I * ctx.omega() * (y.exp() - ctx.a) + y.ln() * ctx.alpha)
}

/// `h_k'(y) = 2πik e^y + α/y`.
pub fn h_prime(ctx: &PhaseContext, y: Complex64) -> Complex64 {
    I * ctx.omega() * y.exp() + ctx.alpha / y
}

/// `h_k''(y) = 2πik e^y − α/y²`.
pub fn h_second(ctx: &PhaseContext, y: Complex64) -> Complex64 {
    I * ctx.omega() * y.exp() - ctx.alpha / (y * y)
}

/// `q(y) = (α(α−1) − 3αy + 2y²)/y²`.
pub fn q(ctx: &PhaseContext, y: Complex64) -> Complex64 {
    let al = ctx.alpha;
    (y * y * 2.0 - y * (3.0 * al) + al * (al - 1.0)) / (y * y)
}

/// `e^{h_k(y)} e^{−2y} q(y)`.
pub fn integrand(ctx: &PhaseContext, y: Complex64) -> Result<Complex64> {
    Ok((h(ctx, y)? - y * 2.0).exp() * q(ctx, y))
}

/// `ln |e^{h_k(y)} e^{−2y} q(y)|` without forming the exponential.
fn ln_abs_integrand(ctx: &PhaseContext, y: Complex64) -> f64 {
    let re_h = -ctx.omega() * libm::exp(y.re) * libm::sin(y.im) + ctx.alpha * libm::log(y.norm());
    re_h - 2.0 * y.re + libm::log(q(ctx, y).norm())
}

/// Saddle point `w_k(α) = W₀(iα/(2πk))`.
pub fn saddle(ctx: &PhaseContext) -> Result<Complex64> {
    lambert_w0(Complex64::new(0.0, ctx.alpha / ctx.omega()))
}

/// `Re h_k(w) = Re(−α/w + α log w)`, the maximum of `Re h_k` on the level line.
pub fn saddle_height(ctx: &PhaseContext, w: Complex64) -> f64 {
    (-ctx.alpha / w + w.ln() * ctx.alpha).re
}

/// Newton on `Im h(y) = level`, moving perpendicular to the level line.
fn correct(ctx: &PhaseContext, mut y: Complex64, level: f64) -> Option<(Complex64, f64)> {
    let mut resid = f64::INFINITY;
    for _ in 0..40 {
        let hv = h(ctx, y).ok()?;
        resid = hv.im - level;
        let scale = ctx.omega() * libm::exp(y.re) + ctx.alpha * 4.0 + level.abs();
        if resid.abs() <= 4.0 * f64::EPSILON * scale {
            return Some((y, resid.abs()));
        }
        let d = h_prime(ctx, y);
        if d.norm() == 0.0 {
            return None;
        }
        y -= I * resid / d;
        if !(y.re.is_finite() && y.im.is_finite()) {
            return None;
        }
    }
    if resid.abs() <= LEVEL_TOL {
        Some((y, resid.abs()))
    } else {
        None
    }
}

fn in_strip(y: Complex64) -> bool {
    y.re > 0.0 && y.im > -1e-12 && y.im < FRAC_PI_2
}

/// One traced arm of the level line.
struct Arm {
    nodes: Vec<Complex64>,
    max_residual: f64,
}

/// Follows the level line from `start` with initial heading `dir`, keeping
/// the heading continuous, until `stop(y)` holds. Steps are halved when the
/// corrector fails or drifts, down to `step/4096`.
fn trace_arm<F: FnMut(Complex64) -> bool>(
    ctx: &PhaseContext,
    level: f64,
    start: Complex64,
    dir: Complex64,
    step: f64,
    mut stop: F,
) -> Result<Arm> {
    let mut nodes = vec![start];
    let mut max_residual = 0.0f64;
    let mut y = start;
    let mut heading = dir / dir.norm();
    let mut first = true;
    while !stop(y) {
        if nodes.len() >= MAX_NODES {
            return Err(Error::Tracing {
                last_good: y,
                reason: "node limit reached",
            });
        }
        let mut field = if first { heading } else { h_prime(ctx, y).conj() };
        if field.norm() == 0.0 {
            field = heading;
        }
        field /= field.norm();
        if (field * heading.conj()).re < 0.0 {
            field = -field;
        }
        let mut ds = step;
        let next = loop {
            let predicted = y + field * ds;
            if let Some((c, r)) = correct(ctx, predicted, level) {
                let moved = c - y;
                let aligned = (moved * field.conj()).re > 0.5 * ds;
                let drift = (c - predicted).norm() <= 0.5 * ds;
                if aligned && drift && r <= LEVEL_TOL {
                    break Some((c, r));
                }
            }
            ds *= 0.5;
            if ds < step / 4096.0 {
                break None;
            }
        };
        let Some((c, r)) = next else {
            return Err(Error::Tracing {
                last_good: y,
                reason: "corrector diverged",
            });
        };
        heading = (c - y) / (c - y).norm();
        max_residual = max_residual.max(r);
        y = c;
        first = false;
        nodes.push(y);
        if !in_strip(y) {
            return Err(Error::Tracing {
                last_good: y,
                reason: "left the strip 0 <= Im y < pi/2",
            });
        }
    }
    Ok(Arm { nodes, max_residual })
}

/// The two descent directions at the saddle, `(right, left)`: `h''·d²` is
/// real and negative, and the right one points further into `Re y > 0`.
fn descent_directions(ctx: &PhaseContext, w: Complex64) -> (Complex64, Complex64) {
    let phi = 0.5 * (PI - h_second(ctx, w).arg());
    let d = Complex64::from_polar(1.0, phi);
    if d.re >= -d.re {
        (d, -d)
    } else {
        (-d, d)
    }
}

/// Traces the level line through the saddle, starting at `start` (which must
/// lie on it), until `Re y ≥ re_stop`. Starting at the saddle follows the
/// descending branch to the right.
pub fn trace_level_line(ctx: &PhaseContext, start: Complex64, re_stop: f64, step: f64) -> Result<Vec<Complex64>> {
    if !(step > 0.0) {
        return Err(Error::Config("trace step must be positive"));
    }
    let w = saddle(ctx)?;
    let level = h(ctx, w)?.im;
    let start_resid = (h(ctx, start)?.im - level).abs();
    if start_resid > LEVEL_TOL {
        return Err(Error::Tracing {
            last_good: start,
            reason: "start point is not on the saddle's level line",
        });
    }
    let (right, _) = descent_directions(ctx, w);
    let dir = if (start - w).norm() < 1e-12 {
        right
    } else {
        let d = h_prime(ctx, start).conj();
        if d.re >= 0.0 {
            d
        } else {
            -d
        }
    };
    Ok(trace_arm(ctx, level, start, dir, step, |y| y.re >= re_stop)?.nodes)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub kind: SegmentKind,
    /// Polyline nodes; for the unit arc these are samples of `e^{iθ}`.
    pub nodes: Vec<Complex64>,
}

/// Numerical checks recorded while building a contour.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathChecks {
    /// Largest `|Im h − Im h(w)|` over level-line and tail nodes.
    pub max_level_error: f64,
    /// Sign changes of the discrete slope of `Re h` along level line + tail.
    pub re_h_turns: usize,
    /// Level-line nodes stay in `[0, 2 log α] × [0, π/2]`.
    pub box_contained: bool,
    /// Polyline length of the level-line segment.
    pub level_length: f64,
    /// `−π e^{Re y} + α log|y| < 0` at every tail node with `Re y ≥ 2 log α`.
    pub tail_negative: bool,
    /// Largest gap between consecutive segments.
    pub max_gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContourPath {
    pub ctx: PhaseContext,
    pub segments: Vec<Segment>,
    pub saddle: Complex64,
    pub u: Complex64,
    pub v: Complex64,
    /// Angle of `u` on the unit circle.
    pub theta_u: f64,
    /// `Im h_k(w)`.
    pub level: f64,
    /// `|w| ≤ 1`: the saddle is not crossed.
    pub saddle_inside: bool,
    pub checks: PathChecks,
}

impl ContourPath {
    pub fn segment(&self, kind: SegmentKind) -> Option<&Segment> {
        self.segments.iter().find(|s| s.kind == kind)
    }
}

/// `Im h(e^{iθ}) − level`.
fn arc_residual(ctx: &PhaseContext, theta: f64, level: f64) -> f64 {
    let y = Complex64::from_polar(1.0, theta);
    ctx.omega() * (libm::exp(y.re) * libm::cos(y.im) - ctx.a) + ctx.alpha * theta - level
}

/// Root of the arc residual near `theta0`, by bisection on the smallest
/// bracket around it that shows a sign change.
fn arc_root(ctx: &PhaseContext, theta0: f64, level: f64) -> Result<f64> {
    let g = |t: f64| arc_residual(ctx, t, level);
    let mut delta = 1e-6;
    let (mut lo, mut hi) = loop {
        let lo = (theta0 - delta).max(0.0);
        let hi = (theta0 + delta).min(FRAC_PI_2);
        if g(lo) * g(hi) <= 0.0 {
            break (lo, hi);
        }
        delta *= 2.0;
        if delta > 1.0 {
            return Err(Error::Construction("no arc crossing bracket near the traced intersection"));
        }
    };
    let mut g_lo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return Ok(mid);
        }
        if (gm < 0.0) == (g_lo < 0.0) {
            lo = mid;
            g_lo = gm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Angle at which the chord `p → q` crosses the unit circle.
fn chord_crossing_angle(p: Complex64, q: Complex64) -> f64 {
    // |p + s(q−p)|² = 1, solved for s ∈ [0,1].
    let d = q - p;
    let aa = d.norm_sqr();
    let bb = 2.0 * (p.re * d.re + p.im * d.im);
    let cc = p.norm_sqr() - 1.0;
    let disc = (bb * bb - 4.0 * aa * cc).max(0.0);
    let s1 = (-bb + libm::sqrt(disc)) / (2.0 * aa);
    let s2 = (-bb - libm::sqrt(disc)) / (2.0 * aa);
    let s = if (0.0..=1.0).contains(&s1) { s1 } else { s2.clamp(0.0, 1.0) };
    (p + d * s).arg()
}

/// Point on the level line with `Re y = sigma`, starting from `guess`.
fn solve_at_re(ctx: &PhaseContext, sigma: f64, guess: f64, level: f64) -> Result<Complex64> {
    let mut t = guess;
    for _ in 0..60 {
        let y = Complex64::new(sigma, t);
        let r = h(ctx, y)?.im - level;
        // d/dt Im h(σ + it) = Re h'(y)
        let d = h_prime(ctx, y).re;
        if d == 0.0 {
            break;
        }
        let dt = r / d;
        t -= dt;
        if dt.abs() <= 1e-15 * t.abs().max(1.0) {
            return Ok(Complex64::new(sigma, t));
        }
    }
    let y = Complex64::new(sigma, t);
    if (h(ctx, y)?.im - level).abs() <= LEVEL_TOL {
        Ok(y)
    } else {
        Err(Error::Construction("could not place v on the level line"))
    }
}

fn arc_nodes(theta_u: f64) -> Vec<Complex64> {
    let n = 64;
    (0..=n)
        .map(|i| Complex64::from_polar(1.0, theta_u * i as f64 / n as f64))
        .collect()
}

/// Builds the four-segment contour `b → 1 → u → v → ∞`.
pub fn build_contour(ctx: &PhaseContext) -> Result<ContourPath> {
    build_contour_with_step(ctx, TRACE_STEP)
}

pub fn build_contour_with_step(ctx: &PhaseContext, step: f64) -> Result<ContourPath> {
    let w = saddle(ctx)?;
    let level = h(ctx, w)?.im;
    let re_v = 2.0 * libm::log(ctx.alpha);
    let (right_dir, left_dir) = descent_directions(ctx, w);
    let saddle_inside = w.norm() <= 1.0;

    // Right descending arm from the saddle, out past 2 log α until the
    // integrand is negligible.
    let mut ln_peak = ln_abs_integrand(ctx, Complex64::new(1.0, 0.0)).max(ln_abs_integrand(ctx, w));
    let re_min_stop = re_v.max(1.0) + 0.25;
    let re_cap = re_v.max(1.0) + 8.0;
    let right = trace_arm(ctx, level, w, right_dir, step, |y| {
        let ln_f = ln_abs_integrand(ctx, y);
        ln_peak = ln_peak.max(ln_f);
        (y.re >= re_min_stop && ln_f < ln_peak - 46.0) || y.re >= re_cap
    })?;

    // Level-line nodes from u up to the saddle (or the circle crossing),
    // and the part of the right arm that follows.
    let (theta_u, mut level_nodes, right_nodes) = if saddle_inside {
        let i = right
            .nodes
            .iter()
            .position(|y| y.norm() >= 1.0)
            .ok_or(Error::Construction("level line never leaves the unit disc"))?;
        let theta0 = chord_crossing_angle(right.nodes[i - 1], right.nodes[i]);
        let theta_u = arc_root(ctx, theta0, level)?;
        let u = Complex64::from_polar(1.0, theta_u);
        (theta_u, vec![u], &right.nodes[i..])
    } else {
        let arm = trace_arm(ctx, level, w, left_dir, step, |y| y.norm() < 1.0)?;
        let n = arm.nodes.len();
        let theta0 = chord_crossing_angle(arm.nodes[n - 2], arm.nodes[n - 1]);
        let theta_u = arc_root(ctx, theta0, level)?;
        let u = Complex64::from_polar(1.0, theta_u);
        let mut nodes = vec![u];
        nodes.extend(arm.nodes[..n - 1].iter().rev().copied());
        (theta_u, nodes, &right.nodes[1..])
    };
    let u = level_nodes[0];

    let (v, tail) = if re_v > u.re {
        // Split the right arm at Re y = 2 log α.
        let idx = right_nodes.iter().position(|y| y.re >= re_v).unwrap_or(right_nodes.len());
        level_nodes.extend(right_nodes[..idx].iter().copied());
        let guess = right_nodes.get(idx).map(|y| y.im).unwrap_or(FRAC_PI_2 - 1e-3);
        let v = solve_at_re(ctx, re_v, guess, level)?;
        level_nodes.push(v);
        let mut tail = vec![v];
        tail.extend(right_nodes[idx..].iter().copied().filter(|y| y.re > re_v));
        (v, tail)
    } else {
        let mut tail = vec![u];
        tail.extend(right_nodes.iter().copied());
        level_nodes.truncate(1);
        (u, tail)
    };

    let checks = path_checks(ctx, level, w, &level_nodes, &tail, re_v, u, v);
    let real = Segment {
        kind: SegmentKind::RealAxis,
        nodes: vec![Complex64::new(ctx.b, 0.0), Complex64::new(1.0, 0.0)],
    };
    let arc = Segment {
        kind: SegmentKind::UnitArc,
        nodes: arc_nodes(theta_u),
    };
    let mut path = ContourPath {
        ctx: *ctx,
        segments: vec![
            real,
            arc,
            Segment {
                kind: SegmentKind::LevelLine,
                nodes: level_nodes,
            },
            Segment {
                kind: SegmentKind::Tail,
                nodes: tail,
            },
        ],
        saddle: w,
        u,
        v,
        theta_u,
        level,
        saddle_inside,
        checks,
    };
    path.checks.max_level_error = path.checks.max_level_error.max(right.max_residual);
    path.checks.max_gap = max_gap(&path.segments);
    Ok(path)
}

#[allow(clippy::too_many_arguments)]
fn path_checks(
    ctx: &PhaseContext,
    level: f64,
    w: Complex64,
    level_nodes: &[Complex64],
    tail: &[Complex64],
    re_v: f64,
    u: Complex64,
    v: Complex64,
) -> PathChecks {
    let mut max_level_error = 0.0f64;
    let mut re_h = Vec::with_capacity(level_nodes.len() + tail.len());
    for &y in level_nodes.iter().chain(tail.iter().skip(1)) {
        if let Ok(hv) = h(ctx, y) {
            max_level_error = max_level_error.max((hv.im - level).abs());
            re_h.push(hv.re);
        }
    }
    let height = saddle_height(ctx, w).abs().max(1.0);
    let mut turns = 0;
    let mut last_sign = 0i8;
    for pair in re_h.windows(2) {
        let d = pair[1] - pair[0];
        if d.abs() <= 1e-12 * height {
            continue;
        }
        let s = if d > 0.0 { 1 } else { -1 };
        if last_sign != 0 && s != last_sign {
            turns += 1;
        }
        last_sign = s;
    }
    let box_contained = level_nodes
        .iter()
        .all(|y| y.re >= -1e-12 && y.re <= re_v + 1e-9 && y.im >= -1e-12 && y.im <= FRAC_PI_2);
    let level_length = if u == v {
        0.0
    } else {
        level_nodes.windows(2).map(|p| (p[1] - p[0]).norm()).sum()
    };
    let tail_negative = tail
        .iter()
        .filter(|y| y.re >= re_v)
        .all(|y| -PI * libm::exp(y.re) + ctx.alpha * libm::log(y.norm()) < 0.0);
    PathChecks {
        max_level_error,
        re_h_turns: turns,
        box_contained,
        level_length,
        tail_negative,
        max_gap: 0.0,
    }
}

fn max_gap(segments: &[Segment]) -> f64 {
    segments
        .windows(2)
        .filter_map(|p| Some((*p[0].nodes.last()? - *p[1].nodes.first()?).norm()))
        .fold(0.0, f64::max)
}

/// One row of the node export.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodeRow {
    pub kind: SegmentKind,
    pub y: Complex64,
    pub h: Complex64,
}

/// Every node of the path with `h_k` evaluated there.
pub fn path_nodes(path: &ContourPath) -> Result<Vec<NodeRow>> {
    let mut rows = Vec::new();
    for seg in &path.segments {
        for &y in &seg.nodes {
            rows.push(NodeRow {
                kind: seg.kind,
                y,
                h: h(&path.ctx, y)?,
            });
        }
    }
    Ok(rows)
}

/// The lemma bounds for `|L_1|, …, |L_4|` and their sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LemmaBounds {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub l4: f64,
    pub total: f64,
}

pub fn lemma_bounds(ctx: &PhaseContext) -> Result<LemmaBounds> {
    let al = ctx.alpha;
    let w = saddle(ctx)?;
    let poly = al * al + 2.0 * al + 2.0;
    let log_al = libm::log(al);
    let diag = libm::sqrt(4.0 * log_al * log_al + PI * PI / 4.0);
    let peak = libm::exp(saddle_height(ctx, w));
    let l1 = al + 3.0 + 1.0 / PI;
    let l2 = poly * FRAC_PI_2;
    let l3 = peak * poly * diag;
    let l4 = poly;
    let total = l1 + poly * (1.0 + FRAC_PI_2 + peak * diag);
    Ok(LemmaBounds { l1, l2, l3, l4, total })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SkDecomposition {
    pub l1: Complex64,
    pub l2: Complex64,
    pub l3: Complex64,
    pub l4: Complex64,
    pub s_k: Complex64,
    /// Summed quadrature error estimate over the four segments.
    pub err: f64,
    pub bound_l1: f64,
    pub bound_l2: f64,
    pub bound_l3: f64,
    pub bound_l4: f64,
    pub s_bound: f64,
    pub path: ContourPath,
}

const REL_TOL: f64 = 1e-11;
const MAX_PANELS: usize = 200_000;

/// `∫ F dy` along a polyline, one unit of parameter per chord.
fn integrate_polyline(ctx: &PhaseContext, nodes: &[Complex64], kind: SegmentKind) -> Result<(Complex64, f64)> {
    if nodes.len() < 2 {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    let n = nodes.len() - 1;
    let scale: f64 = nodes
        .windows(2)
        .map(|p| libm::exp(ln_abs_integrand(ctx, p[0]).max(ln_abs_integrand(ctx, p[1]))) * (p[1] - p[0]).norm())
        .sum();
    let breaks: Vec<f64> = (0..=n).map(|i| i as f64).collect();
    let mut failure = None;
    let r = adaptive(
        |s| {
            let i = (libm::floor(s) as usize).min(n - 1);
            let t = s - i as f64;
            let d = nodes[i + 1] - nodes[i];
            match integrand(ctx, nodes[i] + d * t) {
                Ok(f) => f * d,
                Err(e) => {
                    failure.get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                }
            }
        },
        &breaks,
        1e-14 * scale,
        REL_TOL,
        MAX_PANELS,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    if !r.converged && r.err > 1e-9 * r.value.norm().max(1e-14 * scale) {
        return Err(Error::Quadrature {
            segment: kind,
            estimate: r.err,
        });
    }
    Ok((r.value, r.err))
}

fn integrate_arc(ctx: &PhaseContext, theta_u: f64) -> Result<(Complex64, f64)> {
    if theta_u <= 0.0 {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    let pieces = 16;
    let breaks: Vec<f64> = (0..=pieces).map(|i| theta_u * i as f64 / pieces as f64).collect();
    let r = adaptive(
        |t| {
            let y = Complex64::from_polar(1.0, t);
            integrand(ctx, y).unwrap_or(Complex64::new(f64::NAN, 0.0)) * I * y
        },
        &breaks,
        0.0,
        REL_TOL,
        MAX_PANELS,
    );
    if !(r.value.re.is_finite() && r.value.im.is_finite()) {
        return Err(Error::Overflow("unit arc integrand"));
    }
    if !r.converged && r.err > 1e-9 * r.value.norm().max(1e-14 * r.abs_integral) {
        return Err(Error::Quadrature {
            segment: SegmentKind::UnitArc,
            estimate: r.err,
        });
    }
    Ok((r.value, r.err))
}

/// `S_k` and its split `L_1 + L_2 + L_3 + L_4` along the steepest-descent path.
pub fn s_k_contour(ctx: &PhaseContext) -> Result<SkDecomposition> {
    let path = build_contour(ctx)?;
    s_k_on_path(path)
}

pub fn s_k_on_path(path: ContourPath) -> Result<SkDecomposition> {
    let ctx = path.ctx;
    let seg = |kind| path.segment(kind).map(|s| s.nodes.as_slice()).unwrap_or(&[]);
    let (l1, e1) = integrate_polyline(&ctx, seg(SegmentKind::RealAxis), SegmentKind::RealAxis)?;
    let (l2, e2) = integrate_arc(&ctx, path.theta_u)?;
    let (l3, e3) = if path.u == path.v {
        (Complex64::new(0.0, 0.0), 0.0)
    } else {
        integrate_polyline(&ctx, seg(SegmentKind::LevelLine), SegmentKind::LevelLine)?
    };
    let tail = seg(SegmentKind::Tail);
    let (l4, mut e4) = integrate_polyline(&ctx, tail, SegmentKind::Tail)?;
    // Whatever lies beyond the last tail node is below e^{-46} of the peak
    // and still decaying super-exponentially.
    if let Some(&last) = tail.last() {
        e4 += libm::exp(ln_abs_integrand(&ctx, last));
    }
    let b = lemma_bounds(&ctx)?;
    Ok(SkDecomposition {
        l1,
        l2,
        l3,
        l4,
        s_k: l1 + l2 + l3 + l4,
        err: e1 + e2 + e3 + e4,
        bound_l1: b.l1,
        bound_l2: b.l2,
        bound_l3: b.l3,
        bound_l4: b.l4,
        s_bound: b.total,
        path,
    })
}

/// Integrations by parts taken at `x = 1` before the real-axis quadrature.
const OSC_SMOOTHING: usize = 2;

/// Direct evaluation of `S_k = ∫_1^∞ e^{2πikx} f_α''(x) dx` on the real axis.
///
/// With `ω = 2πk` and `e^{iω} = 1`, two integrations by parts give
/// `S_k = −f''(1)/(iω) + f'''(1)/(iω)² + (iω)^{−2} ∫_1^∞ e^{iωx} f^{(4)}(x) dx`,
/// whose integrand has a far smaller envelope. That integral is taken with
/// Gauss–Legendre panels of length `1/(k·panels_per_period)` on `[1, X]`,
/// `X = ⌈x_max⌉`, and the same expansion at `X` for `∫_X^∞`, with the
/// expansion remainder bounded by the derivative envelope.
pub fn s_k_real_axis(ctx: &PhaseContext, x_max: f64, panels_per_period: u32) -> Result<Complex64> {
    if panels_per_period == 0 {
        return Err(Error::Config("panels_per_period must be positive"));
    }
    let x_end = libm::ceil(x_max.max(2.0));
    let al = ctx.alpha;
    let a = ctx.a;
    let omega = ctx.omega();
    let iw = I * omega;
    let base = 2 + OSC_SMOOTHING;

    // −Σ_{n<N} (−1)^n f^{(2+n)}(1)/(iω)^{n+1}
    let mut head = Complex64::new(0.0, 0.0);
    let mut power = iw;
    for n in 0..OSC_SMOOTHING {
        let g_n = f_deriv(2 + n, al, a, 1.0)?;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        head -= Complex64::new(sign * g_n, 0.0) / power;
        power *= iw;
    }
    let sign = if OSC_SMOOTHING.is_multiple_of(2) { 1.0 } else { -1.0 };
    let factor = Complex64::new(sign, 0.0) / iw.powu(OSC_SMOOTHING as u32);

    let coeffs = deriv_coeffs(base, al)?.coeffs;
    let rule = GaussLegendre::new(16);
    let per_unit = ctx.k as u64 * panels_per_period as u64;
    let width = 1.0 / per_unit as f64;
    let half = 0.5 * width;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    // Nodes are n + r with integer n and r ∈ [0,1) formed separately, so the
    // phase ωr does not inherit the rounding of n + r.
    for n in 1..(x_end as u64) {
        for j in 0..per_unit {
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
                let r = (j as f64 + 0.5 + 0.5 * x) * width;
                let f = eval_row(&coeffs, al, a, n as f64 + r);
                let phase = omega * r;
                acc += Complex64::new(libm::cos(phase), libm::sin(phase)) * (wt * f);
            }
            let y = acc * half - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
    }

    // ∫_X^∞ e^{iωx} g = −Σ_{n<M} (−1)^n g^{(n)}(X)/(iω)^{n+1} + (−1)^M (iω)^{−M} ∫_X^∞ e^{iωx} g^{(M)}
    // for g = f^{(base)}, truncated where the envelope bound is smallest.
    let mut best: Option<(Complex64, f64)> = None;
    let mut partial = Complex64::new(0.0, 0.0);
    let mut power = iw;
    for n in 0..(MAX_ORDER - base) {
        let g_n = f_deriv(base + n, al, a, x_end)?;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        partial -= Complex64::new(sign * g_n, 0.0) / power;
        let order = n + 1;
        if let Some(env) = deriv_tail_envelope(base + order, al, a, x_end)? {
            let bound = env / libm::pow(omega, order as f64);
            if best.is_none_or(|(_, b)| bound < b) {
                best = Some((partial, bound));
            }
        }
        power *= iw;
    }
    let scale = factor.norm();
    match best {
        Some((tail, bound)) if bound * scale <= 1e-10 => Ok(head + factor * (sum + tail)),
        Some((_, bound)) => Err(Error::XMaxTooSmall {
            x_max: x_end,
            tail_bound: bound * scale,
        }),
        None => Err(Error::XMaxTooSmall {
            x_max: x_end,
            tail_bound: f64::INFINITY,
        }),
    }
}

/// `Σ_j c_j log^{α−j}(x+a) / (x+a)^{n+1}` for a coefficient row of length `n+1`.
fn eval_row(coeffs: &[f64], alpha: f64, a: f64, x: f64) -> f64 {
    let s = x + a;
    let l = libm::log(s);
    let mut acc = 0.0;
    for (j, &c) in coeffs.iter().enumerate() {
        acc += c * libm::pow(l, alpha - j as f64);
    }
    acc / libm::pow(s, coeffs.len() as f64)
}

/// `∫_1^∞ B_2({x}) f_α''(x) dx`, with the raw Bernoulli polynomial `B_2`.
pub fn p2_integral(alpha: f64, a: f64) -> Result<TailEstimate> {
    periodic_integral(alpha, a, 1, 2, &EmConfig::for_alpha(alpha))
}

/// `(1/π²) Σ_{k ≤ K} Re S_k / k²`, the Fourier reconstruction of
/// [`p2_integral`], from contour values of `S_k`.
pub fn p2_fourier(alpha: f64, a: f64, kmax: u32) -> Result<f64> {
    let mut sum = 0.0;
    for k in 1..=kmax {
        let ctx = PhaseContext::new(k, alpha, a)?;
        let s = s_k_contour(&ctx)?.s_k;
        sum += s.re / (k as f64 * k as f64);
    }
    Ok(sum / (PI * PI))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(k: u32, alpha: f64, a: f64) -> PhaseContext {
        PhaseContext::new(k, alpha, a).unwrap()
    }

    #[test]
    fn real_part_of_h_on_the_real_axis() {
        let c = ctx(3, 7.5, 0.4);
        let y = Complex64::new(1.7, 0.0);
        assert!((h(&c, y).unwrap().re - 7.5 * libm::log(1.7)).abs() < 1e-12);
    }

    #[test]
    fn real_part_of_h_at_i() {
        let c = ctx(2, 5.0, 1.0);
        let v = h(&c, I).unwrap();
        assert!((v.re + 2.0 * PI * 2.0 * libm::sin(1.0)).abs() < 1e-12);
    }

    #[test]
    fn h_rejects_origin() {
        assert_eq!(h(&ctx(1, 2.0, 1.0), Complex64::new(0.0, 0.0)), Err(Error::Singularity));
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let c = ctx(2, 9.0, 0.3);
        let y = Complex64::new(0.8, 0.6);
        let e = 1e-6;
        let fd = (h(&c, y + e).unwrap() - h(&c, y - e).unwrap()) / (2.0 * e);
        assert!((fd - h_prime(&c, y)).norm() < 1e-6 * h_prime(&c, y).norm());
        let fd2 = (h_prime(&c, y + e) - h_prime(&c, y - e)) / (2.0 * e);
        assert!((fd2 - h_second(&c, y)).norm() < 1e-6 * h_second(&c, y).norm());
    }

    #[test]
    fn saddle_is_a_critical_point() {
        for &(k, al) in &[(1, 200.0), (40, 200.0), (1, 7.0), (5, 50.0)] {
            let c = ctx(k, al, 1.0);
            let w = saddle(&c).unwrap();
            assert!(h_prime(&c, w).norm() <= 1e-10 * al);
            assert!(w.re > 0.0 && w.im > 0.0 && w.im < FRAC_PI_2);
        }
    }

    #[test]
    fn saddle_depends_on_ratio_only() {
        let a = saddle(&ctx(3, 20.0, 1.0)).unwrap();
        let b = saddle(&ctx(6, 40.0, 0.5)).unwrap();
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn tracing_from_saddle_to_itself_is_a_single_node() {
        let c = ctx(1, 200.0, 1.0);
        let w = saddle(&c).unwrap();
        let nodes = trace_level_line(&c, w, w.re, TRACE_STEP).unwrap();
        assert_eq!(nodes.len(), 1);
    }

    #[test]
    fn traced_line_approaches_half_pi() {
        let c = ctx(1, 200.0, 1.0);
        let w = saddle(&c).unwrap();
        let nodes = trace_level_line(&c, w, 12.0, TRACE_STEP).unwrap();
        let level = h(&c, w).unwrap().im;
        for y in &nodes {
            assert!((h(&c, *y).unwrap().im - level).abs() <= LEVEL_TOL);
        }
        let last = nodes.last().unwrap();
        assert!(last.re >= 12.0);
        assert!((last.im - FRAC_PI_2).abs() < 0.05);
    }

    #[test]
    fn contour_outside_case_has_four_segments() {
        let c = ctx(1, 200.0, 1.0);
        let p = build_contour(&c).unwrap();
        assert!(!p.saddle_inside);
        for s in &p.segments {
            assert!(s.nodes.len() >= 2, "{:?}", s.kind);
        }
        assert!((p.u.norm() - 1.0).abs() < 1e-14);
        assert!((p.v.re - 2.0 * libm::log(200.0)).abs() < 1e-12);
        assert!(p.checks.max_gap <= 1e-10);
        assert!(p.checks.max_level_error <= LEVEL_TOL);
        assert_eq!(p.checks.re_h_turns, 1);
        assert!(p.checks.tail_negative);
    }

    #[test]
    fn contour_inside_case() {
        let c = ctx(40, 200.0, 1.0);
        let p = build_contour(&c).unwrap();
        assert!(p.saddle_inside);
        assert!((p.u.norm() - 1.0).abs() < 1e-14);
        assert!(p.checks.max_gap <= 1e-10);
        assert_eq!(p.checks.re_h_turns, 0);
    }

    #[test]
    fn contour_matches_real_axis() {
        let c = ctx(1, 7.0, 1.0);
        let s = s_k_contour(&c).unwrap();
        let r = s_k_real_axis(&c, 400.0, 4).unwrap();
        assert!((s.s_k - r).norm() <= 1e-6 * r.norm(), "{} vs {}", s.s_k, r);
    }

    #[test]
    fn real_axis_is_stable_under_refinement() {
        let c = ctx(2, 3.0, 1.0);
        let a = s_k_real_axis(&c, 300.0, 2).unwrap();
        let b = s_k_real_axis(&c, 300.0, 4).unwrap();
        assert!((a - b).norm() <= 1e-9);
    }
}
