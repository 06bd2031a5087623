//! Grid verification of the scalar inequalities behind the pointwise
//! minorant inequality.
//!
//! Every check is one-sided and returns a [`VerificationReport`]. Closed-form
//! scalar functions use tolerance `1e-10`, composite multi-variable
//! expressions `1e-8`. Open intervals are sampled to within `1e-6` of their
//! endpoints.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{equality_locus_r, minorant_constants_de, Params};
use crate::error::{Result, RieszError};
use crate::grid::{Axis, Check};
use crate::optimize::nelder_mead;
use crate::report::{Sense, VerificationReport};

const SCALAR_TOL: f64 = 1e-10;
const COMPOSITE_TOL: f64 = 1e-8;
const OPEN_EPS: f64 = 1e-6;
/// Third-difference step; below ~1e-4 round-off dominates.
const FD3_STEP: f64 = 1e-3;
const FD_TOL: f64 = 1e-4;

/// Grid densities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaGrid {
    pub points_1d: usize,
    pub points_2d: usize,
    pub points_3d: usize,
}

impl Default for LemmaGrid {
    fn default() -> Self {
        Self {
            points_1d: 2000,
            points_2d: 400,
            points_3d: 50,
        }
    }
}

#[inline]
fn cos_pi(p: f64) -> f64 {
    (PI / p).cos()
}

/// `sin(pi/p)`, exactly zero at `p = 1`.
#[inline]
fn sin_pi(p: f64) -> f64 {
    if p == 1.0 {
        0.0
    } else {
        (PI / p).sin()
    }
}

fn check(name: &str, domain: String, sense: Sense, threshold: f64, tolerance: f64) -> Check<'_> {
    Check {
        name,
        domain,
        sense,
        threshold,
        tolerance,
        refine: true,
    }
}

// ---------------------------------------------------------------------------
// G(r, t) and its minimum

/// `G(r, t) = -r^{p/2} E cos(p(pi - t)/2) - (1 + r^2 + 2r cos t)^{p/2} + D (b + r^2)^{p/2}`.
pub fn g_radial(params: Params, r: f64, t: f64) -> f64 {
    let de = minorant_constants_de(params);
    g_radial_with(params.p(), params.b(), de.d, de.e, r, t)
}

#[inline]
fn g_radial_with(p: f64, b: f64, d: f64, e: f64, r: f64, t: f64) -> f64 {
    let main = (1.0 + r * r + 2.0 * r * t.cos()).max(0.0).powf(0.5 * p);
    -r.powf(0.5 * p) * e * (0.5 * p * (PI - t)).cos() - main + d * (b + r * r).powf(0.5 * p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GMinGrid {
    pub r_points: usize,
    pub t_points: usize,
    pub r_min: f64,
    pub r_max: f64,
}

impl Default for GMinGrid {
    fn default() -> Self {
        Self {
            r_points: 400,
            t_points: 400,
            r_min: 1e-3,
            r_max: 1e3,
        }
    }
}

/// `G >= 0` on the grid, its `r -> 0` limit, and descent from the grid
/// argmin to the zero at `(R, pi - pi/p)`.
pub fn verify_g_min(params: Params, grid: GMinGrid) -> Result<Vec<VerificationReport>> {
    let r_locus = equality_locus_r(params)?;
    let (p, b) = (params.p(), params.b());
    let de = minorant_constants_de(params);
    let g = |r: f64, t: f64| g_radial_with(p, b, de.d, de.e, r, t);
    let axes = [
        Axis::logspace("r", grid.r_min, grid.r_max, grid.r_points),
        Axis::linspace("t", 0.0, PI, grid.t_points),
    ];
    let domain = format!(
        "p={p}, b={b}; r in [{:e}, {:e}] log, t in [0, pi]",
        grid.r_min, grid.r_max
    );
    let min = check("G-min", domain.clone(), Sense::AtLeast, 0.0, COMPOSITE_TOL)
        .run(&axes, |v| g(v[0], v[1]));

    let limit = de.d * b.powf(0.5 * p) - 1.0;
    let r0 = VerificationReport::new(
        "G-r0-limit",
        format!("p={p}, b={b}; G(0, t) = D b^(p/2) - 1"),
        &["r"],
        1,
        limit,
        vec![0.0],
        Sense::AtLeast,
        0.0,
        SCALAR_TOL,
    );

    let start = [min.worst_point[0].ln(), min.worst_point[1]];
    let descent = nelder_mead(|x| g(x[0].exp(), x[1]), &start, &[0.05, 0.05], 4000);
    let (r_opt, t_opt) = (descent.point[0].exp(), descent.point[1].abs());
    let locus_t = PI - PI / p;
    let mut zero = VerificationReport::new(
        "G-min-descent",
        format!("{domain}; Nelder-Mead from the grid argmin, expected zero at (R, pi - pi/p) = ({r_locus}, {locus_t})"),
        &["r", "t"],
        descent.iterations as usize,
        descent.value,
        vec![r_opt, t_opt],
        Sense::AtMost,
        0.0,
        SCALAR_TOL,
    );
    let off = (r_opt / r_locus).ln().hypot(t_opt - locus_t);
    zero.passed &= off < 1e-5 && descent.value >= -COMPOSITE_TOL;
    Ok(vec![min, r0, zero])
}

// ---------------------------------------------------------------------------
// Quadratic minorant Phi

/// `q = (p - 2 cot(pi/(2p))) / (p - p cos(pi/p))`.
pub fn tt_q(p: f64) -> f64 {
    (p - 2.0 / (PI / (2.0 * p)).tan()) / (p - p * cos_pi(p))
}

/// `Phi(a) = p/2 (x - q x^2) - cos(p/2 arccos a) sin(pi/p)`, `x = a - cos(pi/p)`.
pub fn phi_tt(p: f64, a: f64) -> f64 {
    let x = a - cos_pi(p);
    0.5 * p * (x - tt_q(p) * x * x) - (0.5 * p * a.clamp(-1.0, 1.0).acos()).cos() * sin_pi(p)
}

/// Closed form of `Phi'''(a)` on `(-1, 1)`.
pub fn phi_tt_third(p: f64, a: f64) -> f64 {
    let t = a.acos();
    let s = (1.0 - a * a).sqrt();
    let inner = 6.0 * a * s * p * (0.5 * p * t).cos()
        + (-4.0 + p * p - a * a * (8.0 + p * p)) * (0.5 * p * t).sin();
    p * sin_pi(p) * inner / (8.0 * (1.0 - a * a).powf(2.5))
}

/// `Phi''(cos(pi/p)) = csc^3(pi/p) (32 cos^4(pi/(2p)) - 4p sin(pi/p) - 3p sin(2pi/p)) / 4`.
pub fn phi_tt_second_at_locus(p: f64) -> f64 {
    let s = sin_pi(p);
    0.25 / (s * s * s)
        * (32.0 * (PI / (2.0 * p)).cos().powi(4) - 4.0 * p * s - 3.0 * p * (2.0 * PI / p).sin())
}

fn third_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h)
}

fn second_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

fn first_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// `Phi >= 0` on `[-1, 1]`, its two zeros, and the sign of `Phi'''`.
pub fn verify_lemma_tt(p: f64, grid: LemmaGrid) -> Vec<VerificationReport> {
    let n = grid.points_1d;
    let a_axis = [Axis::linspace("a", -1.0, 1.0, n)];
    let nonneg = check("Phi-nonneg", format!("p={p}; a in [-1, 1]"), Sense::AtLeast, 0.0, SCALAR_TOL)
        .run(&a_axis, |v| phi_tt(p, v[0]));

    let zeros = [cos_pi(p), 1.0];
    let worst_zero = zeros.iter().map(|&a| phi_tt(p, a).abs()).fold(0.0, f64::max);
    let tangency = VerificationReport::new(
        "Phi-zeros",
        format!("p={p}; |Phi| at a = cos(pi/p) and a = 1"),
        &["cos(pi/p)", "1"],
        2,
        worst_zero,
        zeros.to_vec(),
        Sense::AtMost,
        0.0,
        SCALAR_TOL,
    );

    let inner = [Axis::open_linspace("a", -1.0, 1.0, n, OPEN_EPS)];
    let third = check("Phi'''-nonpositive", format!("p={p}; closed form, a in (-1, 1)"), Sense::AtMost, 0.0, SCALAR_TOL)
        .run(&inner, |v| {
            // the closed form is scaled by (1-a^2)^{-5/2}; compare the bracket's sign
            phi_tt_third(p, v[0]) * (1.0 - v[0] * v[0]).powf(2.5)
        });

    let fd_axis = [Axis::linspace("a", -0.9, 0.9, n / 4)];
    let third_fd = check(
        "Phi'''-finite-difference",
        format!("p={p}; a in [-0.9, 0.9], 5-point third difference, h = {FD3_STEP}"),
        Sense::AtMost,
        0.0,
        FD_TOL,
    )
    .run(&fd_axis, |v| third_difference(|a| phi_tt(p, a), v[0], FD3_STEP));

    let agreement = check(
        "Phi'''-closed-vs-fd",
        format!("p={p}; a in [-0.9, 0.9]; |closed - fd| / max(1, |closed|), Richardson-extrapolated fd"),
        Sense::AtMost,
        0.0,
        FD_TOL,
    )
    .run(&fd_axis, |v| {
        let closed = phi_tt_third(p, v[0]);
        let coarse = third_difference(|a| phi_tt(p, a), v[0], FD3_STEP);
        let fine = third_difference(|a| phi_tt(p, a), v[0], 0.5 * FD3_STEP);
        let fd = (4.0 * fine - coarse) / 3.0;
        (closed - fd).abs() / closed.abs().max(1.0)
    });
    vec![nonneg, tangency, third, third_fd, agreement]
}

// ---------------------------------------------------------------------------
// phi(p, t)

/// `phi(p) = -4 + p^2 - (8 + p^2) cos^2 t + 3p cot(pt/2) sin 2t`.
pub fn phi_p(p: f64, t: f64) -> f64 {
    let c = t.cos();
    -4.0 + p * p - (8.0 + p * p) * c * c + 3.0 * p / (0.5 * p * t).tan() * (2.0 * t).sin()
}

/// `phi <= 0` on `[1, 2] x (0, pi)` and its values at `p = 1` and `p = 2`.
pub fn verify_phi_p(grid: LemmaGrid) -> Vec<VerificationReport> {
    let n = grid.points_2d;
    let axes = [
        Axis::linspace("p", 1.0, 2.0, n),
        Axis::open_linspace("t", 0.0, PI, n, OPEN_EPS),
    ];
    let nonpos = check("phi-nonpositive", "p in [1, 2], t in (0, pi)".into(), Sense::AtMost, 0.0, SCALAR_TOL)
        .run(&axes, |v| phi_p(v[0], v[1]));
    let t_axis = [Axis::open_linspace("t", 0.0, PI, grid.points_1d, OPEN_EPS)];
    let at2 = check("phi-at-p2", "t in (0, pi); |phi(2, t)|".into(), Sense::AtMost, 0.0, SCALAR_TOL)
        .run(&t_axis, |v| phi_p(2.0, v[0]).abs());
    let at1 = check(
        "phi-at-p1",
        "t in (0, pi); |phi(1, t) + 12 sin^4(t/2)|".into(),
        Sense::AtMost,
        0.0,
        SCALAR_TOL,
    )
    .run(&t_axis, |v| (phi_p(1.0, v[0]) + 12.0 * (0.5 * v[0]).sin().powi(4)).abs());
    vec![nonpos, at2, at1]
}

// ---------------------------------------------------------------------------
// sup expression, goal, goal_s

/// `x^{-1-p/2} (x - x^{p/2})^2 / (x + 1/x - 2)`, `x > 0`, continued by its
/// limit at `x = 1`. Evaluated as `x^{p/2} (expm1((1-p/2) u) / expm1(u))^2`,
/// `u = ln x`, which stays accurate near `x = 1`.
pub fn sup_expression(p: f64, x: f64) -> f64 {
    let u = x.ln();
    if u == 0.0 {
        return sup_expression_bound(p);
    }
    x.powf(0.5 * p) * ((1.0 - 0.5 * p) * u).exp_m1().powi(2) / u.exp_m1().powi(2)
}

/// The sup of [`sup_expression`], `(2 - p)^2 / 4`.
pub fn sup_expression_bound(p: f64) -> f64 {
    0.25 * (2.0 - p) * (2.0 - p)
}

pub fn verify_sup_expression(p: f64, grid: LemmaGrid) -> Vec<VerificationReport> {
    // an even count keeps x = 1 off the symmetric log grid
    let n = grid.points_1d + grid.points_1d % 2;
    let bound = sup_expression_bound(p);
    let axis = [Axis::logspace("x", 1e-4, 1e4, n)];
    let sup = check("expression-sup", format!("p={p}; x in [1e-4, 1e4] log, x != 1"), Sense::AtMost, bound, SCALAR_TOL)
        .run(&axis, |v| sup_expression(p, v[0]));
    let near = [1.0 - 1e-4, 1.0 + 1e-4];
    let (worst_idx, worst) = near
        .iter()
        .map(|&x| (sup_expression(p, x) - bound).abs())
        .enumerate()
        .fold((0, 0.0), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let limit = VerificationReport::new(
        "expression-limit",
        format!("p={p}; |expression(1 +- 1e-4) - (2-p)^2/4|"),
        &["x"],
        2,
        worst,
        vec![near[worst_idx]],
        Sense::AtMost,
        0.0,
        1e-6,
    );
    vec![sup, limit]
}

/// `2 cos(pi/p) (p - p cos(pi/p) - 2 sin(pi/p)) / (1 - cos(pi/p))^2`.
fn goal_tail(p: f64) -> f64 {
    let c = cos_pi(p);
    2.0 * c * (p - p * c - 2.0 * sin_pi(p)) / ((1.0 - c) * (1.0 - c))
}

/// `(2-p)^2/4 + 2 cos(pi/p)(p - p cos(pi/p) - 2 sin(pi/p)) / (1 - cos(pi/p))^2`.
pub fn goal_p(p: f64) -> f64 {
    sup_expression_bound(p) + goal_tail(p)
}

/// The two-variable form `(p expression(x) + tail(p)) / 4`, `x >= 1`.
pub fn goal_px(p: f64, x: f64) -> f64 {
    0.25 * (p * sup_expression(p, x) + goal_tail(p))
}

/// `s^2 (1 + sin s)^2 - (pi + 2s) sin s psi(s)`, `s = pi/p - pi/2`.
pub fn goal_s(s: f64) -> f64 {
    let sn = s.sin();
    s * s * (1.0 + sn).powi(2) - (PI + 2.0 * s) * sn * psi(s)
}

pub fn verify_goal_inequality(grid: LemmaGrid) -> Vec<VerificationReport> {
    let n = grid.points_1d;
    let p_form = check("goal-p", "p in [1, 2]".into(), Sense::AtMost, 0.0, SCALAR_TOL)
        .run(&[Axis::linspace("p", 1.0, 2.0, n)], |v| goal_p(v[0]));
    let s_form = check("goal-s", "s in [0, pi/2]".into(), Sense::AtMost, 0.0, SCALAR_TOL)
        .run(&[Axis::linspace("s", 0.0, FRAC_PI_2, n)], |v| goal_s(v[0]));
    let m = grid.points_2d;
    let two_var = check("goal-px", "p in [1, 2], x in (1, 1e6] log".into(), Sense::AtMost, 0.0, SCALAR_TOL).run(
        &[
            Axis::linspace("p", 1.0, 2.0, m),
            Axis::logspace("x", 1.0 + 1e-3, 1e6, m),
        ],
        |v| goal_px(v[0], v[1]),
    );
    vec![p_form, s_form, two_var]
}

// ---------------------------------------------------------------------------
// Auxiliary one-variable bounds

/// `psi(s) = pi - (pi + 2s) cos s + pi sin s`.
pub fn psi(s: f64) -> f64 {
    PI - (PI + 2.0 * s) * s.cos() + PI * s.sin()
}

/// Quartic majorant `omega(s)`.
pub fn omega(s: f64) -> f64 {
    let pi2 = PI * PI;
    (1.0 + 2.0 * PI - pi2)
        + (6.0 - 2.0 * PI - 0.5 * pi2) * s
        + (6.0 - 8.0 * PI + pi2) / 6.0 * s * s
        + (-8.0 + 4.0 * PI + pi2) / 12.0 * s.powi(3)
        + PI * s.powi(4) / 6.0
}

/// `omega'''(s) = (-8 + 4pi + pi^2)/2 + 4 pi s`.
pub fn omega_third(s: f64) -> f64 {
    0.5 * (-8.0 + 4.0 * PI + PI * PI) + 4.0 * PI * s
}

/// `-3t cos t + sin t + sin 2t`.
pub fn varphi(t: f64) -> f64 {
    -3.0 * t * t.cos() + t.sin() + (2.0 * t).sin()
}

/// `phi'(1) = 2 cot(t/2) varphi(t)`.
pub fn dphi_at_p1(t: f64) -> f64 {
    2.0 / (0.5 * t).tan() * varphi(t)
}

pub fn varphi_series(t: f64) -> f64 {
    3.0 * t.powi(5) / 20.0 - 3.0 * t.powi(7) / 140.0 + 3.0 * t.powi(9) / 2240.0
        - t.powi(11) / 19800.0
}

/// `phi'(2) = 5 + cos 2t - 6t cot t`.
pub fn dphi_at_p2(t: f64) -> f64 {
    5.0 + (2.0 * t).cos() - 6.0 * t / t.tan()
}

pub fn dphi_at_p2_series(t: f64) -> f64 {
    4.0 * t.powi(5) / 5.0 - 22.0 * t.powi(7) / 105.0
}

/// `chi(t) = sin^2 t + cos t (3t^2 (1 + cos t) - sin t (6t + sin t))`.
pub fn chi(t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    s * s + c * (3.0 * t * t * (1.0 + c) - s * (6.0 * t + s))
}

/// Polynomial lower bound with `chi(t) >= t^6 zeta(t)` on `[0, pi/2]`.
pub fn zeta(t: f64) -> f64 {
    let (p2, p4, p6, p8) = (PI.powi(2), PI.powi(4), PI.powi(6), PI.powi(8));
    let t2 = t * t;
    (1.0 / 60.0 - 32.0 / p4 + 4.0 / p2)
        + (1.0 / 20.0 + 80.0 / (3.0 * p4) - 10.0 / (3.0 * p2)) * t2
        + (-7.0 / 4800.0 + 768.0 / p8 - 192.0 / p6 + 608.0 / (45.0 * p4) - 17.0 / (90.0 * p2)) * t2 * t2
        + (-1280.0 + 160.0 * p2 + p4) * t2.powi(3) / (28800.0 * p4)
        + (8.0 - p2) * t2.powi(4) / (7200.0 * p4)
}

/// `cos t >= 1 - t^2/2 + 2(pi^2 - 8)/pi^4 t^4` lower bound.
pub fn cos_quartic_lower(t: f64) -> f64 {
    1.0 - 0.5 * t * t + 2.0 * (PI * PI - 8.0) / PI.powi(4) * t.powi(4)
}

/// `8x(1 + cos x)^2 - 2pi(2 + 3 cos x) sin x`, the form of the `Phi''` bound
/// after `p = pi/x`.
pub fn phi_tt_second_x_form(x: f64) -> f64 {
    8.0 * x * (1.0 + x.cos()).powi(2) - 2.0 * PI * (2.0 + 3.0 * x.cos()) * x.sin()
}

/// One report per auxiliary inequality.
pub fn verify_aux_taylor_bounds(grid: LemmaGrid) -> Vec<VerificationReport> {
    let n = grid.points_1d;
    let half = || [Axis::linspace("t", 0.0, FRAC_PI_2, n)];
    let half_s = || [Axis::linspace("s", 0.0, FRAC_PI_2, n)];
    let open_pi = || [Axis::open_linspace("t", 0.0, PI, n, OPEN_EPS)];
    let closed_pi = || [Axis::linspace("t", 0.0, PI, n)];
    let ge = |name, domain: &str| check(name, domain.to_string(), Sense::AtLeast, 0.0, SCALAR_TOL);
    let le = |name, domain: &str| check(name, domain.to_string(), Sense::AtMost, 0.0, SCALAR_TOL);

    let mut out = vec![
        ge("sin-taylor-lower", "t in [0, pi/2]; sin t - (t - t^3/6)").run(&half(), |v| v[0].sin() - (v[0] - v[0].powi(3) / 6.0)),
        ge("sin-taylor-upper", "t in [0, pi/2]; t - t^3/6 + t^5/120 - sin t")
            .run(&half(), |v| v[0] - v[0].powi(3) / 6.0 + v[0].powi(5) / 120.0 - v[0].sin()),
        ge("cos-quartic-lower", "t in [0, pi/2]; cos t - (1 - t^2/2 + 2(pi^2-8)/pi^4 t^4)").run(&half(), |v| v[0].cos() - cos_quartic_lower(v[0])),
        ge("psi-quadratic-lower", "s in [0, pi/2]; psi(s) - ((pi-2)s + pi s^2/2)")
            .run(&half_s(), |v| psi(v[0]) - ((PI - 2.0) * v[0] + 0.5 * PI * v[0] * v[0])),
        ge("psi-cubic-remainder", "s in [0, pi/2]; s^3 (24 - 2s^2 - pi(4 + s)) / 24")
            .run(&half_s(), |v| v[0].powi(3) * (24.0 - 2.0 * v[0] * v[0] - PI * (4.0 + v[0])) / 24.0),
        le("omega", "s in [0, pi/2]; omega(s)").run(&half_s(), |v| omega(v[0])),
    ];

    let ends = [omega(0.0), omega(FRAC_PI_2)];
    out.push(VerificationReport::new(
        "omega-endpoints",
        "omega(0) and omega(pi/2) are negative",
        &["s"],
        2,
        ends[0].max(ends[1]),
        vec![if ends[0] >= ends[1] { 0.0 } else { FRAC_PI_2 }],
        Sense::AtMost,
        0.0,
        0.0,
    ));
    out.push(
        ge("omega'''-positive", "s in [0, pi/2]; closed form").run(&half_s(), |v| omega_third(v[0])),
    );
    out.push(
        check(
            "omega'''-finite-difference",
            format!("s in [0, pi/2]; |fd - closed|, h = {FD3_STEP}"),
            Sense::AtMost,
            0.0,
            FD_TOL,
        )
        .run(&half_s(), |v| (third_difference(omega, v[0], FD3_STEP) - omega_third(v[0])).abs()),
    );

    out.extend([
        ge("dphi-at-p1-nonneg", "t in (0, pi); phi'(1) = 2 cot(t/2) varphi(t)").run(&open_pi(), |v| dphi_at_p1(v[0])),
        ge("varphi-series-lower", "t in [0, pi]; varphi(t) - series(t)").run(&closed_pi(), |v| varphi(v[0]) - varphi_series(v[0])),
        ge("varphi-series-nonneg", "t in [0, pi]; series(t)").run(&closed_pi(), |v| varphi_series(v[0])),
        ge("dphi-at-p2-positive", "t in (0, pi); phi'(2) = 5 + cos 2t - 6t cot t").run(&open_pi(), |v| dphi_at_p2(v[0])),
        ge("dphi-at-p2-series-lower", "t in [0, pi/2]; sin t phi'(2) - (4t^5/5 - 22t^7/105)")
            .run(&[Axis::open_linspace("t", 0.0, FRAC_PI_2, n, OPEN_EPS)], |v| {
                v[0].sin() * dphi_at_p2(v[0]) - dphi_at_p2_series(v[0])
            }),
        ge("dphi-at-p2-series-nonneg", "t in [0, pi/2]; 4t^5/5 - 22t^7/105").run(&half(), |v| dphi_at_p2_series(v[0])),
        ge("chi", "t in [0, pi]; chi(t)").run(&closed_pi(), |v| chi(v[0])),
        ge("zeta", "t in [0, pi/2]; zeta(t)").run(&half(), |v| zeta(v[0])),
        ge("chi-vs-zeta", "t in [0, pi/2]; chi(t) - t^6 zeta(t)").run(&half(), |v| chi(v[0]) - v[0].powi(6) * zeta(v[0])),
    ]);

    // derivative identities in p, checked by finite differences of phi
    let inner = || [Axis::linspace("t", 0.3, PI - 0.3, n / 4)];
    let fd = |name: &'static str, domain: &str| check(name, domain.to_string(), Sense::AtMost, 0.0, FD_TOL);
    out.extend([
        fd("dphi-at-p1-fd", "t in [0.3, pi-0.3]; |d phi/dp (1) - dphi_at_p1| / max(1, |dphi_at_p1|)").run(&inner(), |v| {
            let d = first_difference(|p| phi_p(p, v[0]), 1.0, 1e-5);
            (d - dphi_at_p1(v[0])).abs() / dphi_at_p1(v[0]).abs().max(1.0)
        }),
        fd("dphi-at-p2-fd", "t in [0.3, pi-0.3]; |d phi/dp (2) - dphi_at_p2| / max(1, |dphi_at_p2|)").run(&inner(), |v| {
            let d = first_difference(|p| phi_p(p, v[0]), 2.0, 1e-5);
            (d - dphi_at_p2(v[0])).abs() / dphi_at_p2(v[0]).abs().max(1.0)
        }),
        fd("d2phi-at-p1-fd", "t in [0.3, pi-0.3]; |d2 phi/dp2 (1) - chi csc^2(t/2)| / max(1, |.|)").run(&inner(), |v| {
            let d = second_difference(|p| phi_p(p, v[0]), 1.0, 1e-4);
            let closed = chi(v[0]) / (0.5 * v[0]).sin().powi(2);
            (d - closed).abs() / closed.abs().max(1.0)
        }),
    ]);

    let p_axis = || [Axis::linspace("p", 1.0 + OPEN_EPS, 2.0, n)];
    out.extend([
        ge("Phi''-at-locus", "p in (1, 2]; Phi''(cos(pi/p)) closed form").run(&p_axis(), |v| phi_tt_second_at_locus(v[0])),
        ge("Phi''-at-locus-x-form", "x in [pi/2, pi]; 8x(1+cos x)^2 - 2pi(2+3cos x) sin x")
            .run(&[Axis::linspace("x", FRAC_PI_2, PI, n)], |v| phi_tt_second_x_form(v[0])),
        fd("Phi''-at-locus-fd", "p in [1.05, 1.95]; |Phi''(cos(pi/p)) fd - closed| / max(1, |closed|)").run(
            &[Axis::linspace("p", 1.05, 1.95, n / 4)],
            |v| {
                let p = v[0];
                let d = second_difference(|a| phi_tt(p, a), cos_pi(p), 1e-4);
                (d - phi_tt_second_at_locus(p)).abs() / phi_tt_second_at_locus(p).abs().max(1.0)
            },
        ),
    ]);
    out
}

// ---------------------------------------------------------------------------
// (alpha, gamma, t) form

/// `(cosh a - c cosh g)^{p/2} - (cos t + cosh a)^{p/2}
///  - (cosh(a - g) - c)^{(p-2)/2} cos(p(pi - t)/2) sin(pi/p)`, `c = cos(pi/p)`.
pub fn secondf(p: f64, alpha: f64, gamma: f64, t: f64) -> f64 {
    let c = cos_pi(p);
    (alpha.cosh() - c * gamma.cosh()).powf(0.5 * p)
        - (t.cos() + alpha.cosh()).max(0.0).powf(0.5 * p)
        - ((alpha - gamma).cosh() - c).powf(0.5 * p - 1.0) * (0.5 * p * (PI - t)).cos() * sin_pi(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecondfGrid {
    pub alpha_max: f64,
    /// `gamma` ranges over `[alpha - gap_max, alpha]`.
    pub gap_max: f64,
    pub points: usize,
}

impl Default for SecondfGrid {
    fn default() -> Self {
        Self {
            alpha_max: 6.0,
            gap_max: 12.0,
            points: 50,
        }
    }
}

/// Nonnegativity on `0 <= alpha`, `gamma <= alpha`, `t in [0, pi]`, zero on the
/// line `gamma = 0, t = pi - pi/p`, strict positivity away from it, and
/// agreement with `G(r, t)` under `alpha = ln r`, `gamma = ln(r/R)`.
pub fn verify_secondf_full(params: Params, grid: SecondfGrid) -> Result<Vec<VerificationReport>> {
    let p = params.p();
    if params.is_p2() {
        return Err(RieszError::DegenerateP2("verify_secondf_full"));
    }
    let n = grid.points;
    let locus_t = PI - PI / p;
    let axes = [
        Axis::linspace("alpha", 0.0, grid.alpha_max, n),
        Axis::linspace("alpha-gamma", 0.0, grid.gap_max, n),
        Axis::linspace("t", 0.0, PI, n),
    ];
    let domain = format!(
        "p={p}; alpha in [0, {}], gamma in [alpha - {}, alpha], t in [0, pi]",
        grid.alpha_max, grid.gap_max
    );
    let nonneg = check("secondf-nonneg", domain.clone(), Sense::AtLeast, 0.0, COMPOSITE_TOL)
        .run(&axes, |v| secondf(p, v[0], v[0] - v[1], v[2]));

    let line = check(
        "secondf-locus-zero",
        format!("p={p}; gamma = 0, t = pi - pi/p, alpha in [0, {}]; |secondf|", grid.alpha_max),
        Sense::AtMost,
        0.0,
        1e-9,
    )
    .run(&[Axis::linspace("alpha", 0.0, grid.alpha_max, 4 * n)], |v| {
        secondf(p, v[0], 0.0, locus_t).abs()
    });

    // away from the locus line the minimum must be strictly positive
    let sep = 0.1;
    let off = check(
        "secondf-off-locus-positive",
        format!("{domain}; points with max(|gamma|, |t - (pi - pi/p)|) >= {sep}"),
        Sense::AtLeast,
        f64::MIN_POSITIVE,
        0.0,
    );
    let off = Check { refine: false, ..off }.run(&axes, |v| {
        let gamma = v[0] - v[1];
        if gamma.abs().max((v[2] - locus_t).abs()) < sep {
            f64::INFINITY
        } else {
            secondf(p, v[0], gamma, v[2])
        }
    });

    let r_locus = equality_locus_r(params)?;
    let de = minorant_constants_de(params);
    let b = params.b();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let samples: Vec<(f64, f64)> = (0..1000)
        .map(|_| (rng.random_range(-5.0..5.0_f64).exp(), rng.random_range(0.0..PI)))
        .collect();
    let diffs: Vec<(f64, bool)> = samples
        .par_iter()
        .map(|&(r, t)| {
            let g = g_radial_with(p, b, de.d, de.e, r, t) / (2f64.powf(0.5 * p) * r.powf(0.5 * p));
            let s = secondf(p, r.ln(), (r / r_locus).ln(), t);
            let scale = (r + 1.0 / r).powf(0.5 * p);
            let same_sign = g.signum() == s.signum() || g.abs().max(s.abs()) < 1e-12 * scale;
            ((g - s).abs() / scale, same_sign)
        })
        .collect();
    let (worst_idx, worst) = diffs
        .iter()
        .enumerate()
        .fold((0, 0.0), |acc, (i, d)| if d.0 > acc.1 { (i, d.0) } else { acc });
    let mut subst = VerificationReport::new(
        "substitution-consistency",
        format!(
            "p={p}, b={b}; 1000 random (r, t), r in [e^-5, e^5]; \
             |G/(2r)^(p/2) - secondf(ln r, ln(r/R), t)| / (r + 1/r)^(p/2)"
        ),
        &["r", "t"],
        samples.len(),
        worst,
        vec![samples[worst_idx].0, samples[worst_idx].1],
        Sense::AtMost,
        0.0,
        COMPOSITE_TOL,
    );
    subst.passed &= diffs.iter().all(|d| d.1);
    Ok(vec![nonneg, line, off, subst])
}

// ---------------------------------------------------------------------------
// Monotonicity hooks in the discriminant argument

/// `G(X) = p/4 (1 - X^{p/2-1})^2 X^{1-p/2} + cos(pi/p)(cosh g - 1)(p - p cos(pi/p) - 2 sin(pi/p)) / (1 - cos(pi/p))^2`.
pub fn discriminant_g(p: f64, x: f64, gamma: f64) -> f64 {
    let c = cos_pi(p);
    let e = 1.0 - 0.5 * p;
    0.25 * p * (1.0 - x.powf(-e)).powi(2) * x.powf(e)
        + c * (gamma.cosh() - 1.0) * (p - p * c - 2.0 * sin_pi(p)) / ((1.0 - c) * (1.0 - c))
}

/// `X(alpha) = (cosh a - c) / (cosh(a - g) - c)`.
pub fn discriminant_x(p: f64, alpha: f64, gamma: f64) -> f64 {
    let c = cos_pi(p);
    (alpha.cosh() - c) / ((alpha - gamma).cosh() - c)
}

/// `G'(X) = (2 - p) p X^{-2-p/2} (X^2 - X^p) / 8`.
pub fn discriminant_g_prime(p: f64, x: f64) -> f64 {
    (2.0 - p) * p * x.powf(-2.0 - 0.5 * p) * (x * x - x.powf(p)) / 8.0
}

/// Numerator of `X'(alpha)`: `c(sinh(a - g) - sinh a) + sinh g`.
pub fn discriminant_x_prime_numerator(p: f64, alpha: f64, gamma: f64) -> f64 {
    let c = cos_pi(p);
    c * ((alpha - gamma).sinh() - alpha.sinh()) + gamma.sinh()
}

pub fn verify_monotone_hooks(p: f64, grid: LemmaGrid) -> Vec<VerificationReport> {
    let n = grid.points_2d;
    let c = cos_pi(p);
    vec![
        check("G'(X)-nonneg", format!("p={p}; X in [1, 1e3] log"), Sense::AtLeast, 0.0, SCALAR_TOL)
            .run(&[Axis::logspace("X", 1.0, 1e3, grid.points_1d)], |v| discriminant_g_prime(p, v[0])),
        check("X'(alpha)-nonneg", format!("p={p}; 0 <= gamma <= alpha <= 8; numerator"), Sense::AtLeast, 0.0, SCALAR_TOL).run(
            &[Axis::linspace("alpha", 0.0, 8.0, n), Axis::linspace("gamma/alpha", 0.0, 1.0, n)],
            |v| discriminant_x_prime_numerator(p, v[0], v[0] * v[1]) / v[0].cosh(),
        ),
        check("discriminant-G(X)", format!("p={p}; alpha, gamma in [-8, 8]"), Sense::AtMost, 0.0, SCALAR_TOL).run(
            &[Axis::linspace("alpha", -8.0, 8.0, n), Axis::linspace("gamma", -8.0, 8.0, n)],
            |v| discriminant_g(p, discriminant_x(p, v[0], v[1]), v[1]),
        ),
        check("gamma<0-endpoint", format!("p={p}; gamma in [-8, 0]; (1-c)/(cosh g - c) - e^g"), Sense::AtLeast, 0.0, SCALAR_TOL)
            .run(&[Axis::linspace("gamma", -8.0, 0.0, grid.points_1d)], |v| {
                (1.0 - c) / (v[0].cosh() - c) - v[0].exp()
            }),
    ]
}

/// All lemma reports for one `(p, b)` with `p < 2`, in a fixed order.
pub fn lemma_suite(params: Params, grid: LemmaGrid) -> Result<Vec<VerificationReport>> {
    let p = params.p();
    let jobs: Vec<Box<dyn Fn() -> Result<Vec<VerificationReport>> + Send + Sync>> = vec![
        Box::new(move || verify_g_min(params, GMinGrid::default())),
        Box::new(move || Ok(verify_lemma_tt(p, grid))),
        Box::new(move || Ok(verify_phi_p(grid))),
        Box::new(move || Ok(verify_sup_expression(p, grid))),
        Box::new(move || Ok(verify_goal_inequality(grid))),
        Box::new(move || Ok(verify_aux_taylor_bounds(grid))),
        Box::new(move || {
            verify_secondf_full(
                params,
                SecondfGrid {
                    points: grid.points_3d,
                    ..SecondfGrid::default()
                },
            )
        }),
        Box::new(move || Ok(verify_monotone_hooks(p, grid))),
    ];
    let results: Vec<Result<Vec<VerificationReport>>> = jobs.par_iter().map(|job| job()).collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}
