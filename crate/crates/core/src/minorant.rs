//! The subharmonic function `H`, its two-variable lift `G_p(z, w) = H(zw)`
//! and the pointwise inequality
//!
//! ```text
//! |w + conj(z)|^p <= D (|w|^2 + b|z|^2)^{p/2} - E G_p(z, w)
//! ```
//!
//! whose equality set is `|w| = R|z|`, `|arg(wz)| = pi - pi/p`.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::circle::wrap_angle;
use crate::constants::{equality_locus_r, minorant_constants_de, Params};
use crate::grid::{Axis, Check};
use crate::optimize::nelder_mead;
use crate::quadrature::TanhSinh;
use crate::report::{Sense, VerificationReport};

/// Argument in `(-pi, pi]` with `arg 0 = 0`.
pub fn arg(z: Complex64) -> f64 {
    if z.re == 0.0 && z.im == 0.0 {
        return 0.0;
    }
    let a = z.im.atan2(z.re);
    if a == -PI {
        PI
    } else {
        a
    }
}

/// `k(rho, t) = rho^{p/2} cos(p/2 (pi - |t|))` for `|t| <= pi`.
#[inline]
fn kernel_principal(rho: f64, t: f64, p: f64) -> f64 {
    rho.powf(0.5 * p) * (0.5 * p * (PI - t.abs())).cos()
}

/// The 2pi-periodic kernel `K(rho, t)`.
///
/// On `[-2pi, 2pi]` the three-case extension is applied literally; other
/// angles are wrapped into `(-pi, pi]` first.
pub fn kernel_k(rho: f64, t: f64, p: f64) -> f64 {
    let shifted = if t.abs() <= PI {
        t
    } else if (PI..=2.0 * PI).contains(&t) {
        t - 2.0 * PI
    } else if (-2.0 * PI..=-PI).contains(&t) {
        t + 2.0 * PI
    } else {
        wrap_angle(t)
    };
    debug_assert!(
        (shifted.abs() - wrap_angle(t).abs()).abs() < 1e-12,
        "extension disagrees with wrapping at t = {t}"
    );
    kernel_principal(rho, shifted, p)
}

/// `H(zeta) = K(|zeta|, arg zeta)`.
pub fn h_function(zeta: Complex64, p: f64) -> f64 {
    kernel_k(zeta.norm(), arg(zeta), p)
}

/// `G_p(z, w) = K(|z| |w|, arg w + arg z)`.
pub fn g_p(z: Complex64, w: Complex64, p: f64) -> f64 {
    kernel_k(z.norm() * w.norm(), arg(w) + arg(z), p)
}

/// Slack of the pointwise inequality at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinorantSlack {
    pub z: Complex64,
    pub w: Complex64,
    /// `|w + conj(z)|^p`
    pub lhs: f64,
    /// `D (|w|^2 + b|z|^2)^{p/2}`
    pub rhs_main: f64,
    /// `G_p(z, w)`
    pub minorant: f64,
    /// `rhs_main - E minorant - lhs`
    pub slack: f64,
    /// `(1 + |w|^2 + b|z|^2)^{p/2}`, the tolerance scale.
    pub scale: f64,
    /// Distance of `(ln(|w|/|z|), |arg(wz)|)` from `(ln R, pi - pi/p)`;
    /// absent at `p = 2` or when `z` or `w` vanishes.
    pub locus_distance: Option<f64>,
}

/// The inequality with its constants evaluated once.
#[derive(Debug, Clone, Copy)]
pub struct MinorantInequality {
    pub params: Params,
    pub d: f64,
    pub e: f64,
    /// `R`, for `p < 2`.
    pub r: Option<f64>,
}

impl MinorantInequality {
    pub fn new(params: Params) -> Self {
        let de = minorant_constants_de(params);
        Self {
            params,
            d: de.d,
            e: de.e,
            r: equality_locus_r(params).ok(),
        }
    }

    /// Equality angle `pi - pi/p`.
    pub fn locus_angle(&self) -> f64 {
        PI - PI / self.params.p()
    }

    pub fn slack(&self, z: Complex64, w: Complex64) -> MinorantSlack {
        let p = self.params.p();
        let b = self.params.b();
        let weight = w.norm_sqr() + b * z.norm_sqr();
        let lhs = (w + z.conj()).norm().powf(p);
        let rhs_main = self.d * weight.powf(0.5 * p);
        let minorant = g_p(z, w, p);
        let locus_distance = match self.r {
            Some(r) if z.norm() > 0.0 && w.norm() > 0.0 => {
                let dr = (w.norm() / z.norm() / r).ln();
                let dt = wrap_angle(arg(w) + arg(z)).abs() - self.locus_angle();
                Some(dr.hypot(dt))
            }
            _ => None,
        };
        MinorantSlack {
            z,
            w,
            lhs,
            rhs_main,
            minorant,
            slack: rhs_main - self.e * minorant - lhs,
            scale: (1.0 + weight).powf(0.5 * p),
            locus_distance,
        }
    }

    /// Slack at `|z| = 1`, `w = r e^{it}`.
    pub fn slack_polar(&self, r: f64, t: f64) -> f64 {
        self.slack(Complex64::new(1.0, 0.0), Complex64::from_polar(r, t))
            .slack
    }
}

pub fn fsh_slack(z: Complex64, w: Complex64, params: Params) -> MinorantSlack {
    MinorantInequality::new(params).slack(z, w)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OriginTerm {
    pub value: f64,
    /// `g0 h0 = 0` or `|arg(g0 h0)| >= pi (p-1)/p`.
    pub admissible: bool,
}

/// `G_p(g0, h0)` with the angle condition under which it is nonnegative.
pub fn origin_term(g0: Complex64, h0: Complex64, params: Params) -> OriginTerm {
    let p = params.p();
    let prod = g0 * h0;
    if prod.norm() == 0.0 {
        return OriginTerm {
            value: 0.0,
            admissible: true,
        };
    }
    let theta = arg(prod).abs();
    OriginTerm {
        value: g_p(g0, h0, p),
        admissible: theta >= PI * (p - 1.0) / p,
    }
}

/// Grid over `(|z|, |w|, arg z, arg w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointwiseGrid {
    pub modulus_points: usize,
    pub angle_points: usize,
    pub modulus_min: f64,
    pub modulus_max: f64,
}

impl Default for PointwiseGrid {
    fn default() -> Self {
        Self {
            modulus_points: 12,
            angle_points: 32,
            modulus_min: 1e-2,
            modulus_max: 1e2,
        }
    }
}

impl PointwiseGrid {
    fn axes(&self) -> [Axis; 4] {
        let n = self.angle_points;
        let angles: Vec<f64> = (1..=n).map(|k| -PI + 2.0 * PI * k as f64 / n as f64).collect();
        [
            Axis::logspace("|z|", self.modulus_min, self.modulus_max, self.modulus_points),
            Axis::logspace("|w|", self.modulus_min, self.modulus_max, self.modulus_points),
            Axis::points("arg z", &angles),
            Axis::points("arg w", &angles),
        ]
    }

    pub fn num_points(&self) -> usize {
        self.modulus_points.pow(2) * self.angle_points.pow(2)
    }

    fn log_step(&self) -> f64 {
        (self.modulus_max / self.modulus_min).ln() / (self.modulus_points - 1) as f64
    }

    fn angle_step(&self) -> f64 {
        2.0 * PI / self.angle_points as f64
    }
}

fn point(v: &[f64]) -> (Complex64, Complex64) {
    (Complex64::from_polar(v[0], v[2]), Complex64::from_polar(v[1], v[3]))
}

/// Grid verification of the pointwise inequality and, for `p < 2`, of its
/// equality locus.
///
/// Reports: `pointwise-slack` (scaled slack `>= -1e-9`), `pointwise-argmin-near-locus`
/// (grid argmin of the homogeneous slack within one cell of the locus, in
/// cell units) and `pointwise-locus-refined` (Nelder-Mead from the argmin drives
/// the slack below `1e-10`).
pub fn pointwise_check(params: Params, grid: PointwiseGrid) -> Vec<VerificationReport> {
    let ineq = MinorantInequality::new(params);
    let axes = grid.axes();
    let domain = format!(
        "p={}, b={}; |z|,|w| in [{:e}, {:e}] ({} log points), arg z, arg w on {} angles",
        params.p(),
        params.b(),
        grid.modulus_min,
        grid.modulus_max,
        grid.modulus_points,
        grid.angle_points
    );
    let mut reports = vec![Check {
        name: "pointwise-slack",
        domain: domain.clone(),
        sense: Sense::AtLeast,
        threshold: 0.0,
        tolerance: 1e-9,
        refine: true,
    }
    .run(&axes, |v| {
        let (z, w) = point(v);
        let s = ineq.slack(z, w);
        s.slack / s.scale
    })];

    let Some(r_locus) = ineq.r else {
        return reports;
    };
    let p = params.p();
    let b = params.b();
    let homogeneous = |v: &[f64]| {
        let (z, w) = point(v);
        ineq.slack(z, w).slack / (w.norm_sqr() + b * z.norm_sqr()).powf(0.5 * p)
    };
    let argmin = crate::grid::sweep(&axes, Sense::AtLeast, homogeneous);
    let (z, w) = point(&argmin.worst_point);
    let r = w.norm() / z.norm();
    let t = wrap_angle(arg(w) + arg(z)).abs();
    let cells = ((r / r_locus).ln().abs() / grid.log_step())
        .max((t - ineq.locus_angle()).abs() / grid.angle_step());
    reports.push(VerificationReport::new(
        "pointwise-argmin-near-locus",
        format!("{domain}; distance of the homogeneous-slack argmin from the locus in grid cells"),
        &["|w|/|z|", "|arg(wz)|"],
        argmin.num_points,
        cells,
        vec![r, t],
        Sense::AtMost,
        1.0,
        0.0,
    ));

    let refined = nelder_mead(
        |x| ineq.slack_polar(x[0].exp(), x[1]),
        &[r.ln(), t],
        &[0.5 * grid.log_step(), 0.5 * grid.angle_step()],
        4000,
    );
    let (r_opt, t_opt) = (refined.point[0].exp(), refined.point[1]);
    let mut locus = VerificationReport::new(
        "pointwise-locus-refined",
        format!(
            "p={p}, b={b}; Nelder-Mead on (ln(|w|/|z|), arg(wz)) at |z| = 1 from the grid argmin; \
             expected locus (R, pi - pi/p) = ({r_locus}, {})",
            ineq.locus_angle()
        ),
        &["|w|/|z|", "arg(wz)"],
        refined.iterations as usize,
        refined.value,
        vec![r_opt, t_opt],
        Sense::AtMost,
        0.0,
        1e-10,
    );
    // the minimizer must sit on the stated locus, not elsewhere
    let off = (r_opt / r_locus).ln().hypot(t_opt.abs() - ineq.locus_angle());
    locus.passed &= off < 1e-3;
    reports.push(locus);
    reports
}

/// Writes rows `|z|, |w|, arg z, arg w, slack, locus_distance` over the grid.
pub fn write_slack_landscape<W: Write>(
    params: Params,
    grid: PointwiseGrid,
    writer: W,
) -> csv::Result<()> {
    let ineq = MinorantInequality::new(params);
    let axes = grid.axes();
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["|z|", "|w|", "arg z", "arg w", "slack", "locus_distance"])?;
    for &mz in &axes[0].values {
        for &mw in &axes[1].values {
            for &az in &axes[2].values {
                for &aw in &axes[3].values {
                    let (z, wv) = point(&[mz, mw, az, aw]);
                    let s = ineq.slack(z, wv);
                    let dist = s.locus_distance.map(|d| d.to_string()).unwrap_or_default();
                    w.write_record([
                        mz.to_string(),
                        mw.to_string(),
                        az.to_string(),
                        aw.to_string(),
                        s.slack.to_string(),
                        dist,
                    ])?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Mean of `f(theta)` over `theta in [0, 2pi)`, split at the sign changes of
/// `seam(theta)` (where `f` may have kinks).
pub fn split_circle_mean<F, S>(f: F, seam: S) -> f64
where
    F: Fn(f64) -> f64,
    S: Fn(f64) -> f64,
{
    const SCAN: usize = 512;
    let step = 2.0 * PI / SCAN as f64;
    let mut roots = Vec::new();
    let mut prev = seam(0.0);
    for k in 1..=SCAN {
        let (a, b) = ((k - 1) as f64 * step, k as f64 * step);
        let cur = seam(b);
        if prev == 0.0 {
            roots.push(a);
        } else if prev.signum() != cur.signum() && cur != 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, prev);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let fm = seam(mid);
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev = cur;
    }
    let rule = TanhSinh::with_tolerance(1e-15, 1e-14);
    let integrate = |a: f64, b: f64| rule.integrate(a, b, |x, _, _| f(x)).value;
    let total = if roots.is_empty() {
        integrate(0.0, 2.0 * PI)
    } else {
        let mut sum = 0.0;
        for i in 0..roots.len() {
            let a = roots[i];
            let b = if i + 1 < roots.len() { roots[i + 1] } else { roots[0] + 2.0 * PI };
            sum += integrate(a, b);
        }
        sum
    };
    total / (2.0 * PI)
}

/// Mean of `H` over the circle of radius `radius` about `center`.
pub fn h_circle_mean(center: Complex64, radius: f64, p: f64) -> f64 {
    let at = |th: f64| center + Complex64::from_polar(radius, th);
    split_circle_mean(|th| h_function(at(th), p), |th| at(th).im)
}

/// Closed form of the mean of `H` over `|zeta| = r`: `r^{p/2} (2/(pi p)) sin(p pi/2)`.
pub fn h_origin_mean(r: f64, p: f64) -> f64 {
    r.powf(0.5 * p) * 2.0 / (PI * p) * (0.5 * p * PI).sin()
}

/// Grid of circle centres for the sub-mean check of `H`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubmeanGrid {
    pub radial_points: usize,
    pub angle_points: usize,
    pub radius_min: f64,
    pub radius_max: f64,
    /// Test-circle radii as fractions of the centre modulus.
    pub radius_fractions: Vec<f64>,
}

impl Default for SubmeanGrid {
    fn default() -> Self {
        Self {
            radial_points: 50,
            angle_points: 64,
            radius_min: 1e-2,
            radius_max: 1e1,
            radius_fractions: vec![0.1, 0.5, 1.5],
        }
    }
}

/// Sub-mean property of `H` on circles about a polar grid of centres, and the
/// closed-form mean about the origin.
pub fn subharmonicity_check(p: f64, grid: &SubmeanGrid) -> Vec<VerificationReport> {
    let n = grid.angle_points;
    let axes = [
        Axis::logspace("|center|", grid.radius_min, grid.radius_max, grid.radial_points),
        Axis::points(
            "arg center",
            &(1..=n).map(|k| -PI + 2.0 * PI * k as f64 / n as f64).collect::<Vec<_>>(),
        ),
        Axis::points("radius/|center|", &grid.radius_fractions),
    ];
    let submean = Check {
        name: "H-sub-mean",
        domain: format!(
            "p={p}; centres {}x{} polar grid, |c| in [{:e}, {:e}], radii {:?} x |c|",
            grid.radial_points, grid.angle_points, grid.radius_min, grid.radius_max, grid.radius_fractions
        ),
        sense: Sense::AtLeast,
        threshold: 0.0,
        tolerance: 1e-9,
        refine: false,
    }
    .run(&axes, |v| {
        let center = Complex64::from_polar(v[0], v[1]);
        let radius = v[2] * v[0];
        let scale = (v[0] + radius).powf(0.5 * p).max(1.0);
        (h_circle_mean(center, radius, p) - h_function(center, p)) / scale
    });

    let radii = Axis::logspace("r", grid.radius_min, grid.radius_max, grid.radial_points);
    let origin = Check {
        name: "H-origin-mean",
        domain: format!("p={p}; circles about 0, r in [{:e}, {:e}]; |quadrature - closed form| / r^(p/2)", grid.radius_min, grid.radius_max),
        sense: Sense::AtMost,
        threshold: 0.0,
        tolerance: 1e-12,
        refine: false,
    }
    .run(std::slice::from_ref(&radii), |v| {
        let quad = h_circle_mean(Complex64::new(0.0, 0.0), v[0], p);
        let exact = h_origin_mean(v[0], p);
        if exact < 0.0 {
            return f64::INFINITY;
        }
        (quad - exact).abs() / v[0].powf(0.5 * p)
    });
    vec![submean, origin]
}

/// A complex line `lambda -> (z0 + lambda u, w0 + lambda v)` in `C^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexLine {
    pub z0: Complex64,
    pub w0: Complex64,
    pub u: Complex64,
    pub v: Complex64,
}

impl ComplexLine {
    pub fn at(&self, lambda: Complex64) -> (Complex64, Complex64) {
        (self.z0 + lambda * self.u, self.w0 + lambda * self.v)
    }
}

/// `(mean over |lambda| = radius of G_p on the line) - G_p(z0, w0)`.
pub fn line_sub_mean(line: &ComplexLine, radius: f64, p: f64) -> f64 {
    let at = |th: f64| line.at(Complex64::from_polar(radius, th));
    let mean = split_circle_mean(
        |th| {
            let (z, w) = at(th);
            g_p(z, w, p)
        },
        |th| {
            let (z, w) = at(th);
            (z * w).im
        },
    );
    mean - g_p(line.z0, line.w0, p)
}

/// Settings for the line-restriction check of `G_p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineSpec {
    pub num_lines: usize,
    pub radii: Vec<f64>,
    pub seed: u64,
}

impl Default for LineSpec {
    fn default() -> Self {
        Self {
            num_lines: 100,
            radii: vec![0.25, 1.0, 3.0],
            seed: 42,
        }
    }
}

fn normal_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Random lines plus the two structured families: `v = 0` (`w` frozen) and
/// lines through the origin.
pub fn check_lines(spec: &LineSpec) -> Vec<ComplexLine> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut lines: Vec<ComplexLine> = (0..spec.num_lines)
        .map(|_| ComplexLine {
            z0: normal_complex(&mut rng),
            w0: normal_complex(&mut rng),
            u: normal_complex(&mut rng),
            v: normal_complex(&mut rng),
        })
        .collect();
    let zero = Complex64::new(0.0, 0.0);
    for _ in 0..spec.num_lines.div_ceil(10) {
        lines.push(ComplexLine {
            z0: normal_complex(&mut rng),
            w0: normal_complex(&mut rng),
            u: normal_complex(&mut rng),
            v: zero,
        });
        lines.push(ComplexLine {
            z0: zero,
            w0: zero,
            u: normal_complex(&mut rng),
            v: normal_complex(&mut rng),
        });
    }
    lines
}

/// Sub-mean property of `G_p` restricted to complex lines.
pub fn plurisubharmonicity_check(p: f64, spec: &LineSpec) -> VerificationReport {
    let lines = check_lines(spec);
    let cases: Vec<(usize, f64)> = (0..lines.len())
        .flat_map(|i| spec.radii.iter().map(move |&r| (i, r)))
        .collect();
    let values: Vec<f64> = cases
        .par_iter()
        .map(|&(i, r)| {
            let line = &lines[i];
            let reach = (line.z0.norm() + r * line.u.norm()) * (line.w0.norm() + r * line.v.norm());
            line_sub_mean(line, r, p) / reach.powf(0.5 * p).max(1.0)
        })
        .collect();
    let (worst_idx, worst) = values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, v)| {
            if Sense::AtLeast.is_worse(v, acc.1) {
                (i, v)
            } else {
                acc
            }
        });
    let (line, radius) = cases[worst_idx];
    VerificationReport::new(
        "G-line-sub-mean",
        format!(
            "p={p}; {} random lines plus {} with v = 0 and {} through the origin, radii {:?}, seed {}",
            spec.num_lines,
            spec.num_lines.div_ceil(10),
            spec.num_lines.div_ceil(10),
            spec.radii,
            spec.seed
        ),
        &["line", "radius"],
        cases.len(),
        worst,
        vec![line as f64, radius],
        Sense::AtLeast,
        0.0,
        1e-8,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pb(p: f64, b: f64) -> Params {
        Params::new(p, b).unwrap()
    }

    #[test]
    fn arg_convention() {
        assert_eq!(arg(c(0.0, 0.0)), 0.0);
        assert_eq!(arg(c(-1.0, 0.0)), PI);
        assert_eq!(arg(c(-1.0, -0.0)), PI);
        assert!((arg(c(0.0, -1.0)) + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn kernel_examples() {
        for p in [1.0, 1.3, 2.0] {
            assert!((kernel_k(1.0, PI, p) - 1.0).abs() < 1e-15);
            assert!(kernel_k(1.0, PI - PI / p, p).abs() < 1e-15);
        }
        let v = kernel_k(1.0, 0.0, 1.5);
        assert!((v + 0.5 * 2f64.sqrt()).abs() < 1e-15);
        assert!(v < 0.0);
    }

    #[test]
    fn kernel_extension_matches_wrapping() {
        for k in 0..=400 {
            let t = -2.0 * PI + 4.0 * PI * k as f64 / 400.0;
            for p in [1.0, 1.5, 2.0] {
                let direct = kernel_principal(0.7, wrap_angle(t), p);
                assert!((kernel_k(0.7, t, p) - direct).abs() < 1e-14, "t={t}");
            }
        }
        // outside [-2pi, 2pi] the kernel stays periodic
        assert!((kernel_k(2.0, 7.0, 1.5) - kernel_k(2.0, 7.0 - 2.0 * PI, 1.5)).abs() < 1e-14);
    }

    #[test]
    fn h_examples_and_seam() {
        assert_eq!(h_function(c(0.0, 0.0), 1.5), 0.0);
        assert!((h_function(c(-1.0, 0.0), 1.5) - 1.0).abs() < 1e-15);
        for rho in [0.1, 1.0, 30.0] {
            for p in [1.0, 1.5, 2.0] {
                let eps = 1e-6;
                let up = h_function(Complex64::from_polar(rho, PI - eps), p);
                let down = h_function(Complex64::from_polar(rho, -PI + eps), p);
                assert!((up - down).abs() < 1e-5 * rho.powf(0.5 * p));
            }
        }
    }

    #[test]
    fn origin_mean_closed_form() {
        let p = 1.5;
        let quad = h_circle_mean(c(0.0, 0.0), 1.0, p);
        let exact = 4.0 / (3.0 * PI) * (0.75 * PI).sin();
        assert!((quad - exact).abs() < 1e-13);
        assert!((h_origin_mean(1.0, p) - exact).abs() < 1e-15);
        for p in [1.1, 1.5, 1.9] {
            for r in [0.01, 2.0, 50.0] {
                assert!(h_origin_mean(r, p) > 0.0);
            }
        }
    }

    #[test]
    fn g_p_examples() {
        assert_eq!(g_p(c(0.0, 0.0), c(3.0, -1.0), 1.5), 0.0);
        assert!((g_p(c(1.0, 0.0), c(1.0, 0.0), 1.5) - (0.75 * PI).cos()).abs() < 1e-15);
        // arg(wz) = pi: rho^{p/2}
        let z = Complex64::from_polar(2.0, 2.0);
        let w = Complex64::from_polar(1.5, PI - 2.0);
        assert!((g_p(z, w, 1.3) - 3f64.powf(0.65)).abs() < 1e-14);
    }

    #[test]
    fn g_p_depends_only_on_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let z = normal_complex(&mut rng);
            let w = normal_complex(&mut rng);
            let p = rng.random_range(1.0..=2.0);
            let scale = (z * w).norm().powf(0.5 * p).max(1e-300);
            assert!((g_p(z, w, p) - h_function(z * w, p)).abs() <= 1e-13 * scale);
            assert!((g_p(z, w, p) - g_p(w, z, p)).abs() <= 1e-15 * scale);
        }
    }

    #[test]
    fn p2_reduction() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let z = normal_complex(&mut rng);
            let w = normal_complex(&mut rng);
            let exact = -(z * w).re;
            assert!((g_p(z, w, 2.0) - exact).abs() <= 1e-14 * (z * w).norm().max(1.0));
        }
    }

    #[test]
    fn slack_examples() {
        let params = pb(1.5, 2.0);
        let ineq = MinorantInequality::new(params);
        let s = fsh_slack(c(0.0, 0.0), c(1.0, 0.0), params);
        assert_eq!(s.minorant, 0.0);
        assert!((s.slack - (ineq.d - 1.0)).abs() < 1e-15);
        assert!(s.slack >= 0.0);

        let r = ineq.r.unwrap();
        let t = PI - PI / 1.5;
        let s = fsh_slack(c(1.0, 0.0), Complex64::from_polar(r, t), params);
        assert!(s.slack.abs() < 1e-9, "{s:?}");
        assert!(s.locus_distance.unwrap() < 1e-12);
        // the mirror angle is on the locus as well
        let s = fsh_slack(c(1.0, 0.0), Complex64::from_polar(r, -t), params);
        assert!(s.slack.abs() < 1e-9);
        // the literal angle -pi/p is not
        let s = fsh_slack(c(1.0, 0.0), Complex64::from_polar(r, -PI / 1.5), params);
        assert!(s.slack > 1e-3);

        let s = fsh_slack(c(1.0, 0.0), c(1.0, 0.0), pb(1.0, 1.0));
        assert!(s.slack.abs() < 1e-15);

        assert!(fsh_slack(c(1.0, 0.0), c(1.0, 0.0), pb(2.0, 1.0)).locus_distance.is_none());
    }

    #[test]
    fn slack_is_homogeneous() {
        let params = pb(1.25, 0.5);
        let z = c(0.3, -0.7);
        let w = c(-1.1, 0.4);
        let base = fsh_slack(z, w, params).slack;
        let scaled = fsh_slack(3.0 * z, 3.0 * w, params).slack;
        assert!((scaled - 3f64.powf(1.25) * base).abs() < 1e-12);
    }

    #[test]
    fn origin_term_examples() {
        let params = pb(1.5, 2.0);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let g0 = normal_complex(&mut rng);
            let h0 = normal_complex(&mut rng);
            if (g0 * h0).re <= 0.0 {
                let o = origin_term(g0, h0, params);
                assert!(o.admissible && o.value >= 0.0);
            }
        }
        let o = origin_term(c(0.0, 0.0), c(2.0, 1.0), params);
        assert_eq!(o, OriginTerm { value: 0.0, admissible: true });

        let theta = PI * 0.5 / 1.5;
        let o = origin_term(Complex64::from_polar(1.0, theta), c(2.0, 0.0), params);
        assert!(o.admissible);
        assert!(o.value.abs() < 1e-15);
        let o = origin_term(Complex64::from_polar(1.0, 0.5 * theta), c(2.0, 0.0), params);
        assert!(!o.admissible && o.value < 0.0);
    }

    #[test]
    fn small_pointwise_grid_passes() {
        let grid = PointwiseGrid {
            modulus_points: 6,
            angle_points: 16,
            ..PointwiseGrid::default()
        };
        for (p, b) in [(1.5, 2.0), (1.0, 0.25), (2.0, 4.0)] {
            for r in pointwise_check(pb(p, b), grid) {
                assert!(r.passed, "{}", r.summary());
            }
        }
    }

    #[test]
    fn split_mean_of_kinked_function() {
        // mean of |cos| is 2/pi; kinks where cos changes sign
        let m = split_circle_mean(|t| t.cos().abs(), |t| t.cos());
        assert!((m - 2.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn harmonic_case_has_zero_defect() {
        // p = 2: H = -Re(zeta) is harmonic
        for center in [c(0.3, 0.4), c(-2.0, 0.1), c(1.0, 0.0)] {
            let m = h_circle_mean(center, 0.7, 2.0);
            assert!((m - h_function(center, 2.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn line_families() {
        let zero = c(0.0, 0.0);
        let through_origin = ComplexLine { z0: zero, w0: zero, u: c(0.4, 1.0), v: c(-0.3, 0.2) };
        for p in [1.0, 1.5] {
            let uv = (through_origin.u * through_origin.v).norm();
            let expected = uv.powf(0.5 * p) * h_origin_mean(1.0, p) * 2f64.powf(p);
            let m = line_sub_mean(&through_origin, 2.0, p);
            assert!((m - expected).abs() < 1e-12, "{m} vs {expected}");
        }
        let frozen = ComplexLine { z0: c(0.5, 0.5), w0: c(1.0, -2.0), u: c(1.0, 0.3), v: zero };
        assert!(line_sub_mean(&frozen, 1.0, 1.5) >= -1e-12);
        let spec = LineSpec { num_lines: 20, ..LineSpec::default() };
        assert_eq!(check_lines(&spec).len(), 24);
        assert!(plurisubharmonicity_check(1.5, &spec).passed);
    }

    #[test]
    fn landscape_csv() {
        let grid = PointwiseGrid { modulus_points: 2, angle_points: 8, ..PointwiseGrid::default() };
        let mut buf = Vec::new();
        write_slack_landscape(pb(1.5, 2.0), grid, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + grid.num_points());
        assert!(text.starts_with("|z|,|w|,arg z,arg w,slack,locus_distance"));
    }
}
