//! Empirical sharpness: the norm ratio of trigonometric-polynomial pairs,
//! randomized search, seeded ascent and the closed-form extremal curve.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::circle::{lp_mean_of_moduli, nodes, project_minus, project_plus, CircleFunction, HarmonicPair};
use crate::constants::{sharp_constant_a, sharpness_beta, Params};
use crate::error::{Result, RieszError};
use crate::extremals::{quadrature_z_x, x_of_beta, z_of_beta, ExtremalSpec, Variant};
use crate::report::{Sense, VerificationReport};

pub const DEFAULT_SAMPLES: usize = 4096;
/// Relative slack allowed above `A` before a ratio counts as a violation.
pub const EXCEED_TOL: f64 = 1e-6;
/// Envelope `|coef_k| <= DECAY^k` of random coefficients.
pub const DECAY: f64 = 0.7;
const ASCENT_SAMPLES: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ratio {
    pub value: f64,
    /// `Re(g(0) h(0)) <= 0`.
    pub admissible: bool,
}

/// Boundary evaluator for pairs of bounded degree at a fixed resolution.
struct Evaluator {
    p: f64,
    b: f64,
    twiddles: Vec<Complex64>,
}

impl Evaluator {
    fn new(params: Params, n: usize) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(RieszError::InvalidSampleCount(n));
        }
        Ok(Self {
            p: params.p(),
            b: params.b(),
            twiddles: nodes(n).map(|t| Complex64::from_polar(1.0, t)).collect(),
        })
    }

    fn ratio(&self, pair: &HarmonicPair) -> Result<f64> {
        let n = self.twiddles.len();
        if 2 * pair.degree() >= n {
            return Err(RieszError::InvalidArgument(format!(
                "degree {} does not fit {n} samples",
                pair.degree()
            )));
        }
        let horner = |coeffs: &[Complex64], z: Complex64| {
            coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
        };
        let (mut num, mut den) = (Vec::with_capacity(n), Vec::with_capacity(n));
        for &z in &self.twiddles {
            let g = horner(&pair.g, z);
            let h = horner(&pair.h, z);
            num.push((g + h.conj()).norm());
            den.push((g.norm_sqr() + self.b * h.norm_sqr()).sqrt());
        }
        let den = lp_mean_of_moduli(den.into_iter(), self.p);
        if den.is_nan() || den <= 0.0 {
            return Err(RieszError::ZeroDenominator);
        }
        Ok((lp_mean_of_moduli(num.into_iter(), self.p) / den).powf(1.0 / self.p))
    }
}

/// `||g + conj(h)||_p / ||(|g|^2 + b|h|^2)^{1/2}||_p` by the `n`-point
/// trapezoid rule. Inadmissible pairs are flagged, not rejected.
pub fn ratio(pair: &HarmonicPair, params: Params, n: usize) -> Result<Ratio> {
    Ok(Ratio {
        value: Evaluator::new(params, n)?.ratio(pair)?,
        admissible: pair.is_admissible(),
    })
}

/// The same ratio computed from boundary samples of `f`, with `g = P+ f` and
/// `conj(h) = P- f`.
pub fn ratio_projection(f: &CircleFunction, params: Params) -> Result<f64> {
    let g = project_plus(f);
    let h_bar = project_minus(f);
    let b = params.b();
    let p = params.p();
    let num = lp_mean_of_moduli(f.samples().iter().map(|z| z.norm()), p);
    let den = lp_mean_of_moduli(
        g.samples()
            .iter()
            .zip(h_bar.samples())
            .map(|(g, h)| (g.norm_sqr() + b * h.norm_sqr()).sqrt()),
        p,
    );
    if den.is_nan() || den <= 0.0 {
        return Err(RieszError::ZeroDenominator);
    }
    Ok((num / den).powf(1.0 / p))
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn disk_sample(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    Complex64::from_polar(r, rng.random_range(-PI..PI))
}

/// Random pair of the given degree with `|coef_k| <= DECAY^k`; the phase of
/// `h(0)` is redrawn until `Re(g(0) h(0)) <= 0`.
pub fn random_admissible_pair(rng: &mut ChaCha8Rng, degree: usize) -> HarmonicPair {
    let mut draw = || -> Vec<Complex64> {
        (0..=degree)
            .map(|k| disk_sample(rng, DECAY.powi(k as i32)))
            .collect()
    };
    let g = draw();
    let mut h = draw();
    let modulus = h[0].norm();
    while (g[0] * h[0]).re > 0.0 {
        h[0] = Complex64::from_polar(modulus, rng.random_range(-PI..PI));
    }
    HarmonicPair::new(g, h)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub report: VerificationReport,
    pub best_ratio: f64,
    pub best_pair: HarmonicPair,
}

/// Draws `trials` random admissible pairs and checks `ratio <= A (1 + 1e-6)`.
/// Trial `i` uses stream `i` of the seeded generator.
pub fn random_never_exceeds(params: Params, trials: usize, degree: usize, seed: u64) -> Result<SearchOutcome> {
    if trials == 0 {
        return Err(RieszError::InvalidArgument("trials must be at least 1".into()));
    }
    let eval = Evaluator::new(params, DEFAULT_SAMPLES)?;
    let results: Vec<(f64, HarmonicPair)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let pair = random_admissible_pair(&mut trial_rng(seed, i), degree);
            eval.ratio(&pair).map(|r| (r, pair))
        })
        .collect::<Result<_>>()?;
    let (idx, (best_ratio, best_pair)) = results
        .into_iter()
        .enumerate()
        .reduce(|a, b| if b.1 .0 > a.1 .0 { b } else { a })
        .expect("trials >= 1");
    let a = sharp_constant_a(params);
    let report = VerificationReport::new(
        "ratio-never-exceeds",
        format!(
            "p={}, b={}; {trials} random admissible pairs of degree {degree}, seed {seed}, N = {DEFAULT_SAMPLES}",
            params.p(),
            params.b()
        ),
        &["trial"],
        trials,
        best_ratio,
        vec![idx as f64],
        Sense::AtMost,
        a,
        a * EXCEED_TOL,
    );
    Ok(SearchOutcome {
        report,
        best_ratio,
        best_pair,
    })
}

/// Closed-form supremum of the degree-0 ratio over admissible constants,
/// `max(1, b^{-1/2})`, attained when `Re(g(0) h(0)) = 0`.
pub fn degree_zero_sup(params: Params) -> f64 {
    1f64.max(params.b().powf(-0.5))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ascent {
    pub pair: HarmonicPair,
    pub ratio: f64,
    /// Best ratio among the starting pairs.
    pub start_ratio: f64,
    pub evaluations: usize,
}

fn to_coords(pair: &HarmonicPair) -> Vec<f64> {
    pair.g
        .iter()
        .chain(&pair.h)
        .flat_map(|c| [c.re, c.im])
        .collect()
}

fn from_coords(x: &[f64], degree: usize) -> HarmonicPair {
    let coeff = |k: usize| Complex64::new(x[2 * k], x[2 * k + 1]);
    let m = degree + 1;
    HarmonicPair::new((0..m).map(coeff).collect(), (m..2 * m).map(coeff).collect())
}

fn padded(mut pair: HarmonicPair, degree: usize) -> HarmonicPair {
    pair.g.resize(degree + 1, Complex64::new(0.0, 0.0));
    pair.h.resize(degree + 1, Complex64::new(0.0, 0.0));
    pair
}

/// Starting pairs: dilated truncations of the extremal family, then random draws.
fn ascent_starts(params: Params, degree: usize, seed: u64) -> Result<Vec<HarmonicPair>> {
    let p = params.p();
    let mut starts = Vec::new();
    for frac in [0.9, 0.95] {
        let variant = if params.is_p2() { Variant::Fbb0 } else { Variant::Fbb };
        let spec = ExtremalSpec::new(params, frac / p, variant)?;
        for rho in [0.9, 0.97] {
            starts.push(spec.taylor_pair(degree, rho));
        }
    }
    for k in 0..2 {
        starts.push(random_admissible_pair(&mut trial_rng(seed, u64::MAX - k), degree));
    }
    Ok(starts.into_iter().map(|s| padded(s, degree)).collect())
}

/// Coordinate ascent from one start: random coordinate order per sweep, `+-step`
/// moves kept only if admissible and improving, step halved after a sweep
/// without progress.
fn climb(eval: &Evaluator, start: HarmonicPair, degree: usize, budget: usize, rng: &mut ChaCha8Rng) -> Result<(Vec<f64>, f64, usize)> {
    let mut x = to_coords(&start);
    let mut best = eval.ratio(&start)?;
    let mut used = 1;
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-3);
    let mut step = 0.1 * scale;
    let mut order: Vec<usize> = (0..x.len()).collect();
    while used < budget && step > 1e-10 * scale {
        for i in (1..order.len()).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        let mut improved = false;
        for &i in &order {
            for dir in [1.0, -1.0] {
                if used >= budget {
                    break;
                }
                let old = x[i];
                x[i] = old + dir * step;
                let pair = from_coords(&x, degree);
                let candidate = if pair.is_admissible() {
                    used += 1;
                    eval.ratio(&pair).unwrap_or(f64::NEG_INFINITY)
                } else {
                    f64::NEG_INFINITY
                };
                if candidate > best {
                    best = candidate;
                    improved = true;
                    break;
                }
                x[i] = old;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok((x, best, used))
}

/// Maximizes the ratio over admissible pairs of the given degree with
/// `iterations` ratio evaluations per start. The returned ratio is
/// re-evaluated at `N = 4096`.
pub fn ascend_ratio(params: Params, degree: usize, iterations: usize, seed: u64) -> Result<Ascent> {
    if degree == 0 {
        return Err(RieszError::InvalidArgument("ascent needs degree >= 1".into()));
    }
    let eval = Evaluator::new(params, ASCENT_SAMPLES.max((4 * degree + 4).next_power_of_two()))?;
    let starts = ascent_starts(params, degree, seed)?;
    let start_ratio = starts
        .iter()
        .map(|s| eval.ratio(s))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    let climbs = starts
        .into_par_iter()
        .enumerate()
        .map(|(k, s)| climb(&eval, s, degree, iterations, &mut trial_rng(seed, k as u64)))
        .collect::<Result<Vec<_>>>()?;
    let evaluations = climbs.iter().map(|c| c.2).sum();
    let (x, _, _) = climbs
        .into_iter()
        .reduce(|a, b| if b.1 > a.1 { b } else { a })
        .expect("at least one start");
    let pair = from_coords(&x, degree);
    let value = ratio(&pair, params, DEFAULT_SAMPLES)?.value;
    Ok(Ascent {
        pair,
        ratio: value,
        start_ratio,
        evaluations,
    })
}

/// Mixing weight of the extremal family: `beta*` for `p < 2`, and the
/// `p = 2` dichotomy (`0` for `b <= 1`, `1` for `b > 1`).
pub fn curve_beta(params: Params) -> Result<f64> {
    if params.is_p2() {
        Ok(if params.b() <= 1.0 { 0.0 } else { 1.0 })
    } else {
        sharpness_beta(params)
    }
}

/// `(Z(beta*) / X(beta*))^{1/p}` at each `c`, in closed form.
pub fn extremal_ratio_curve(params: Params, c_values: &[f64]) -> Result<Vec<(f64, f64)>> {
    let beta = curve_beta(params)?;
    c_values
        .iter()
        .map(|&c| {
            let z = z_of_beta(params, c, beta)?;
            let x = x_of_beta(params, c, beta)?;
            Ok((c, (z / x).powf(1.0 / params.p())))
        })
        .collect()
}

/// Tolerance of the curve endpoint against `A`.
pub const CURVE_TOL: f64 = 5e-3;
/// Relative tolerance of closed-form `Z/X` against quadrature.
pub const QUADRATURE_TOL: f64 = 1e-6;

/// [`sharpness_check_at`] with the endpoint `c = (1 - 1e-3)/p`.
pub fn sharpness_check(params: Params) -> Result<Vec<VerificationReport>> {
    sharpness_check_at(params, (1.0 - 1e-3) / params.p())
}

/// Curve value at `c_end` within [`CURVE_TOL`] of `A`, curve on `(0, c_end]`
/// never above `A`, and closed-form `Z/X` against singular quadrature at
/// `c = 0.9/p`.
pub fn sharpness_check_at(params: Params, c_end: f64) -> Result<Vec<VerificationReport>> {
    let (p, b) = (params.p(), params.b());
    let a = sharp_constant_a(params);
    let c_values: Vec<f64> = (1..=20).map(|k| k as f64 / 20.0 * c_end).collect();
    let curve = extremal_ratio_curve(params, &c_values)?;
    let (c_last, r_last) = *curve.last().expect("non-empty");
    let end = VerificationReport::new(
        "curve-reaches-A",
        format!("p={p}, b={b}; A - ratio at c = {c_end}"),
        &["c"],
        1,
        a - r_last,
        vec![c_last],
        Sense::AtMost,
        0.0,
        CURVE_TOL,
    );
    let (c_top, r_top) = curve
        .iter()
        .copied()
        .fold((0.0, f64::NEG_INFINITY), |m, v| if v.1 > m.1 { v } else { m });
    let below = VerificationReport::new(
        "curve-below-A",
        format!("p={p}, b={b}; c in (0, {c_end}], 20 points"),
        &["c"],
        curve.len(),
        r_top,
        vec![c_top],
        Sense::AtMost,
        a,
        a * EXCEED_TOL,
    );
    let c_mid = 0.9 / p;
    let beta = curve_beta(params)?;
    let closed = z_of_beta(params, c_mid, beta)? / x_of_beta(params, c_mid, beta)?;
    let spec = ExtremalSpec::new(params, c_mid, Variant::Fbeta { beta })?;
    let (zq, xq) = quadrature_z_x(&spec)?;
    let quad = VerificationReport::new(
        "Z/X-closed-vs-quadrature",
        format!("p={p}, b={b}; beta = beta*, c = 0.9/p; relative difference"),
        &["c"],
        1,
        (closed - zq / xq).abs() / closed.abs(),
        vec![c_mid],
        Sense::AtMost,
        0.0,
        QUADRATURE_TOL,
    );
    Ok(vec![end, below, quad])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pb(p: f64, b: f64) -> Params {
        Params::new(p, b).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ratio_examples() {
        let params = pb(1.5, 2.0);
        let one = HarmonicPair::new(vec![c(1.0, 0.0)], vec![]);
        assert!((ratio(&one, params, 64).unwrap().value - 1.0).abs() < 1e-14);
        let h = HarmonicPair::new(vec![], vec![c(1.0, 0.0)]);
        assert!((ratio(&h, params, 64).unwrap().value - 2f64.powf(-0.5)).abs() < 1e-14);
        let zz = HarmonicPair::new(vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]);
        assert!((ratio(&zz, pb(2.0, 1.0), 64).unwrap().value - 1.0).abs() < 1e-14);
        let zero = HarmonicPair::new(vec![c(0.0, 0.0)], vec![]);
        assert_eq!(ratio(&zero, params, 64), Err(RieszError::ZeroDenominator));
        let bad = HarmonicPair::new(vec![c(1.0, 0.0)], vec![c(1.0, 0.0)]);
        let r = ratio(&bad, params, 64).unwrap();
        assert!(!r.admissible && r.value > 0.0);
    }

    #[test]
    fn degree_zero_oracle() {
        for (p, b) in [(1.5, 2.0), (1.25, 0.5), (1.0, 1.0)] {
            let params = pb(p, b);
            let sup = degree_zero_sup(params);
            assert!(sup <= sharp_constant_a(params) + 1e-12);
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..500 {
                let pair = random_admissible_pair(&mut rng, 0);
                assert!(pair.is_admissible());
                assert!(ratio(&pair, params, 8).unwrap().value <= sup * (1.0 + 1e-12));
            }
            // attained with Re(g0 h0) = 0 and |h0|/|g0| at the end of the range
            let pair = if b >= 1.0 {
                HarmonicPair::new(vec![c(1.0, 0.0)], vec![c(0.0, 0.0)])
            } else {
                HarmonicPair::new(vec![c(0.0, 0.0)], vec![c(1.0, 0.0)])
            };
            assert!((ratio(&pair, params, 8).unwrap().value - sup).abs() < 1e-14);
        }
    }

    #[test]
    fn verbitsky_configuration() {
        // b = 1, g = -h with h(0) real: ratio <= sqrt(2) cos(pi / (2 pbar))
        for p in [1.2, 1.5, 1.8] {
            let params = pb(p, 1.0);
            let pbar = p.max(p / (p - 1.0));
            let bound = 2f64.sqrt() * (PI / (2.0 * pbar)).cos();
            assert!((bound - sharp_constant_a(params)).abs() < 1e-12);
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..200 {
                let mut h = random_admissible_pair(&mut rng, 6).h;
                h[0] = c(h[0].re, 0.0);
                let g = h.iter().map(|v| -v).collect();
                let pair = HarmonicPair::new(g, h);
                assert!(pair.is_admissible());
                assert!(ratio(&pair, params, 256).unwrap().value <= bound * (1.0 + EXCEED_TOL));
            }
        }
    }

    #[test]
    fn projection_matches_pair_form() {
        let params = pb(1.25, 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let mut pair = random_admissible_pair(&mut rng, 8);
            pair.h[0] = c(0.0, 0.0);
            let f = pair.boundary_function(512).unwrap();
            let direct = ratio(&pair, params, 512).unwrap().value;
            assert!((ratio_projection(&f, params).unwrap() - direct).abs() < 1e-8);
        }
    }

    #[test]
    fn random_search_is_deterministic_and_bounded() {
        let params = pb(1.5, 2.0);
        let a = random_never_exceeds(params, 300, 8, 42).unwrap();
        let b = random_never_exceeds(params, 300, 8, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.report.passed);
        assert!(a.best_ratio < sharp_constant_a(params));
        assert!(a.best_pair.is_admissible());
        assert!(random_never_exceeds(params, 0, 8, 42).is_err());
    }

    #[test]
    fn ascent_improves_and_stays_below_a() {
        let params = pb(1.5, 1.0);
        let asc = ascend_ratio(params, 6, 400, 42).unwrap();
        let a = sharp_constant_a(params);
        assert!(asc.pair.is_admissible());
        assert!(asc.ratio >= asc.start_ratio - 1e-6);
        assert!(asc.ratio <= a * (1.0 + EXCEED_TOL));
        let random = random_never_exceeds(params, asc.evaluations, 6, 42).unwrap();
        assert!(asc.ratio >= random.best_ratio);
    }

    #[test]
    fn ascent_at_p2_reaches_one() {
        let asc = ascend_ratio(pb(2.0, 4.0), 4, 200, 1).unwrap();
        assert!((asc.ratio - 1.0).abs() < 1e-9);
        assert!(ascend_ratio(pb(2.0, 4.0), 0, 10, 1).is_err());
    }

    #[test]
    fn curve_examples() {
        let params = pb(1.5, 2.0);
        let a = sharp_constant_a(params);
        let curve = extremal_ratio_curve(params, &[(1.0 - 1e-4) / 1.5, (1.0 - 1e-3) / 1.5]).unwrap();
        assert!(a - curve[0].1 < 5e-4);
        assert!(a - curve[1].1 < 5e-3 && curve[1].1 <= a);
        // b = 1: sqrt(1 - cos(c pi))
        let p = 1.25;
        for cc in [0.1, 0.4, 0.7] {
            let r = extremal_ratio_curve(pb(p, 1.0), &[cc]).unwrap()[0].1;
            assert!((r - (1.0 - (cc * PI).cos()).sqrt()).abs() < 1e-14);
        }
        // c -> 0: |2 beta - 1| / sqrt(beta^2 + b (1 - beta)^2)
        let beta = sharpness_beta(params).unwrap();
        let r0 = extremal_ratio_curve(params, &[1e-9]).unwrap()[0].1;
        let base = (2.0 * beta - 1.0).abs() / (beta * beta + 2.0 * (1.0 - beta).powi(2)).sqrt();
        assert!((r0 - base).abs() < 1e-8 && base < a);
        assert!(extremal_ratio_curve(params, &[1.0]).is_err());
    }

    #[test]
    fn sharpness_reports_pass() {
        for (p, b) in [(1.0, 0.5), (1.5, 2.0), (2.0, 4.0)] {
            for r in sharpness_check(pb(p, b)).unwrap() {
                assert!(r.passed, "{}", r.summary());
            }
        }
        let early = sharpness_check_at(pb(1.5, 2.0), 0.2).unwrap();
        assert!(!early[0].passed && early[1].passed);
    }
}
