//! Functions on the unit circle held as uniform samples `f(e^{i t_j})`,
//! `t_j = 2 pi j / N`, together with their discrete Fourier coefficients.
//!
//! Coefficient `c_k`, `k in [-N/2, N/2)`, is stored at DFT bin `k mod N`.
//! The analytic projection keeps `k >= 0` (the constant belongs to it), the
//! co-analytic projection keeps `k < 0`.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RieszError};
use crate::quadrature::{graded_singular, TanhSinh};

/// Default resolution for smooth verification runs.
pub const DEFAULT_SAMPLES: usize = 4096;

/// A complex function on the circle. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleFunction {
    samples: Vec<Complex64>,
    coeffs: Option<Vec<Complex64>>,
}

fn check_len(n: usize) -> Result<()> {
    if n < 8 || !n.is_power_of_two() {
        return Err(RieszError::InvalidSampleCount(n));
    }
    Ok(())
}

/// Sample nodes `t_j = 2 pi j / n`.
pub fn nodes(n: usize) -> impl ExactSizeIterator<Item = f64> {
    (0..n).map(move |j| 2.0 * PI * j as f64 / n as f64)
}

/// Signed frequency stored at DFT bin `bin`.
#[inline]
pub fn frequency_of_bin(bin: usize, n: usize) -> i64 {
    if bin < n / 2 {
        bin as i64
    } else {
        bin as i64 - n as i64
    }
}

/// DFT bin holding frequency `k`. `k` must lie in `[-n/2, n/2)`.
#[inline]
pub fn bin_of_frequency(k: i64, n: usize) -> usize {
    k.rem_euclid(n as i64) as usize
}

fn forward(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

fn inverse(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut buf = coeffs.to_vec();
    FftPlanner::new()
        .plan_fft_inverse(buf.len())
        .process(&mut buf);
    buf
}

impl CircleFunction {
    pub fn from_samples(samples: Vec<Complex64>) -> Result<Self> {
        check_len(samples.len())?;
        if let Some(j) = samples.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(RieszError::NonFiniteSample(j));
        }
        Ok(Self {
            samples,
            coeffs: None,
        })
    }

    /// Samples `f(t)` at the `n` uniform nodes.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        check_len(n)?;
        Self::from_samples(nodes(n).map(f).collect())
    }

    /// Builds the function from coefficients in DFT-bin order.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        check_len(coeffs.len())?;
        let samples = inverse(&coeffs);
        let out = Self::from_samples(samples)?;
        Ok(Self {
            coeffs: Some(coeffs),
            ..out
        })
    }

    /// Trigonometric polynomial from `(frequency, coefficient)` pairs.
    pub fn from_terms(n: usize, terms: &[(i64, Complex64)]) -> Result<Self> {
        check_len(n)?;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for &(k, c) in terms {
            if k < -(n as i64) / 2 || k >= n as i64 / 2 {
                return Err(RieszError::InvalidArgument(format!(
                    "frequency {k} does not fit {n} samples"
                )));
            }
            coeffs[bin_of_frequency(k, n)] += c;
        }
        Self::from_coeffs(coeffs)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Stored coefficients, if this function was built from them.
    pub fn stored_coeffs(&self) -> Option<&[Complex64]> {
        self.coeffs.as_deref()
    }

    /// Attaches freshly computed coefficients.
    pub fn with_coeffs(mut self) -> Self {
        if self.coeffs.is_none() {
            self.coeffs = Some(forward(&self.samples));
        }
        self
    }

    /// Coefficient of frequency `k` (zero outside `[-N/2, N/2)`).
    pub fn coefficient(&self, k: i64) -> Complex64 {
        let n = self.len();
        if k < -(n as i64) / 2 || k >= n as i64 / 2 {
            return Complex64::new(0.0, 0.0);
        }
        let bin = bin_of_frequency(k, n);
        match &self.coeffs {
            Some(c) => c[bin],
            None => forward(&self.samples)[bin],
        }
    }

    /// Pointwise map into a new function on the same grid.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        Self::from_samples(self.samples.iter().map(|&z| f(z)).collect())
    }

    /// Writes rows `t, Re f, Im f`.
    pub fn write_csv<W: Write>(&self, writer: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["t", "re", "im"])?;
        for (t, z) in nodes(self.len()).zip(&self.samples) {
            w.serialize((t, z.re, z.im))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Coefficients as JSON `{"n": N, "coefficients": [{"k", "re", "im"}, ...]}`
    /// ordered by frequency.
    pub fn coeffs_json(&self) -> serde_json::Value {
        let n = self.len();
        let coeffs = fourier_coeffs(self);
        let mut entries: Vec<(i64, Complex64)> = coeffs
            .iter()
            .enumerate()
            .map(|(bin, &c)| (frequency_of_bin(bin, n), c))
            .collect();
        entries.sort_by_key(|e| e.0);
        serde_json::json!({
            "n": n,
            "coefficients": entries
                .iter()
                .map(|(k, c)| serde_json::json!({ "k": k, "re": c.re, "im": c.im }))
                .collect::<Vec<_>>(),
        })
    }
}

/// DFT-normalized Fourier coefficients in bin order; exact for trigonometric
/// polynomials of degree below `N/2`.
pub fn fourier_coeffs(f: &CircleFunction) -> Vec<Complex64> {
    match &f.coeffs {
        Some(c) => c.clone(),
        None => forward(&f.samples),
    }
}

fn project(f: &CircleFunction, keep: impl Fn(i64) -> bool) -> CircleFunction {
    let n = f.len();
    let mut coeffs = fourier_coeffs(f);
    for (bin, c) in coeffs.iter_mut().enumerate() {
        if !keep(frequency_of_bin(bin, n)) {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    CircleFunction::from_coeffs(coeffs).expect("projection preserves the grid")
}

/// Analytic projection: frequencies `k >= 0`.
pub fn project_plus(f: &CircleFunction) -> CircleFunction {
    project(f, |k| k >= 0)
}

/// Co-analytic projection: frequencies `k < 0`.
pub fn project_minus(f: &CircleFunction) -> CircleFunction {
    project(f, |k| k < 0)
}

fn check_lp_exponent(p: f64) -> Result<()> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(RieszError::InvalidLpExponent(p));
    }
    Ok(())
}

/// Mean of `|f|^p` by the periodic trapezoid rule.
pub fn lp_mean(f: &CircleFunction, p: f64) -> Result<f64> {
    check_lp_exponent(p)?;
    Ok(lp_mean_of_moduli(f.samples.iter().map(|z| z.norm()), p))
}

pub(crate) fn lp_mean_of_moduli(moduli: impl ExactSizeIterator<Item = f64>, p: f64) -> f64 {
    let n = moduli.len() as f64;
    moduli.map(|m| m.powf(p)).sum::<f64>() / n
}

/// `(mean |f|^p)^{1/p}` with respect to `dt / 2pi`.
pub fn lp_norm(f: &CircleFunction, p: f64) -> Result<f64> {
    Ok(lp_mean(f, p)?.powf(1.0 / p))
}

/// Mean of `|f(t)|^p dt/2pi` for an integrand with algebraic singularities of
/// order at most `exponent_bound < 1` (in `|f|^p`) at `singular_points`.
pub fn lp_mean_singular<F>(
    evaluator: F,
    p: f64,
    singular_points: &[f64],
    exponent_bound: f64,
) -> Result<f64>
where
    F: Fn(f64) -> Complex64,
{
    check_lp_exponent(p)?;
    mean_singular(|t| evaluator(t).norm().powf(p), singular_points, exponent_bound)
}

/// Mean of a real integrand over the circle, `int u(t) dt/2pi`, where `u` may
/// blow up like `|t - s|^{-exponent_bound}` at each listed `s`.
///
/// The circle is split at the singular points; each piece is split at its
/// midpoint and both halves are integrated with graded tanh-sinh quadrature
/// towards their singular endpoint. Offsets are applied to the singular
/// point's representative in `(-pi, pi]`, so a singularity at `0` is seen at
/// exact tiny offsets.
pub fn mean_singular<F>(integrand: F, singular_points: &[f64], exponent_bound: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if exponent_bound.is_nan() || exponent_bound >= 1.0 {
        return Err(RieszError::NotIntegrable(exponent_bound));
    }
    let mut pts: Vec<f64> = singular_points.iter().map(|&t| wrap_angle(t)).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if pts.is_empty() {
        pts.push(PI);
    }
    let rule = TanhSinh::with_tolerance(1e-15, 1e-13);
    let mut total = 0.0;
    for (i, &start) in pts.iter().enumerate() {
        let end = if i + 1 < pts.len() {
            pts[i + 1]
        } else {
            pts[0] + 2.0 * PI
        };
        let half = 0.5 * (end - start);
        let end_rep = wrap_angle(end);
        total += graded_singular(&rule, half, exponent_bound, |d| integrand(start + d)).value;
        total += graded_singular(&rule, half, exponent_bound, |d| integrand(end_rep - d)).value;
    }
    Ok(total / (2.0 * PI))
}

/// L^p norm of a pointwise-defined function with boundary singularities.
pub fn lp_norm_singular<F>(
    evaluator: F,
    p: f64,
    singular_points: &[f64],
    exponent_bound: f64,
) -> Result<f64>
where
    F: Fn(f64) -> Complex64,
{
    Ok(lp_mean_singular(evaluator, p, singular_points, exponent_bound)?.powf(1.0 / p))
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(t: f64) -> f64 {
    if t > -PI && t <= PI {
        return t;
    }
    let r = (t + PI).rem_euclid(2.0 * PI) - PI;
    if r <= -PI {
        r + 2.0 * PI
    } else {
        r
    }
}

/// `f = g + conj(h)` with holomorphic `g`, `h` given by Taylor coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicPair {
    pub g: Vec<Complex64>,
    pub h: Vec<Complex64>,
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

impl HarmonicPair {
    pub fn new(g: Vec<Complex64>, h: Vec<Complex64>) -> Self {
        Self { g, h }
    }

    pub fn degree(&self) -> usize {
        self.g.len().max(self.h.len()).saturating_sub(1)
    }

    pub fn g_at(&self, z: Complex64) -> Complex64 {
        horner(&self.g, z)
    }

    pub fn h_at(&self, z: Complex64) -> Complex64 {
        horner(&self.h, z)
    }

    pub fn value(&self, z: Complex64) -> Complex64 {
        self.g_at(z) + self.h_at(z).conj()
    }

    /// `g(0) h(0)`.
    pub fn origin_product(&self) -> Complex64 {
        let g0 = self.g.first().copied().unwrap_or_default();
        let h0 = self.h.first().copied().unwrap_or_default();
        g0 * h0
    }

    /// Hypothesis of the inequality: `Re(g(0) h(0)) <= 0`.
    pub fn is_admissible(&self) -> bool {
        self.origin_product().re <= 0.0
    }

    /// Boundary samples of `g` and `h` on `n` uniform nodes.
    pub fn boundary_samples(&self, n: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        let twiddles: Vec<Complex64> = nodes(n).map(|t| Complex64::from_polar(1.0, t)).collect();
        let eval = |coeffs: &[Complex64], j: usize| {
            coeffs
                .iter()
                .enumerate()
                .fold(Complex64::new(0.0, 0.0), |acc, (k, &c)| {
                    acc + c * twiddles[(j * k) % n]
                })
        };
        let g = (0..n).map(|j| eval(&self.g, j)).collect();
        let h = (0..n).map(|j| eval(&self.h, j)).collect();
        (g, h)
    }

    /// The boundary trace `g + conj(h)` as a circle function.
    pub fn boundary_function(&self, n: usize) -> Result<CircleFunction> {
        check_len(n)?;
        if 2 * self.degree() >= n {
            return Err(RieszError::InvalidArgument(format!(
                "degree {} does not fit {n} samples",
                self.degree()
            )));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for (k, &c) in self.g.iter().enumerate() {
            coeffs[k] += c;
        }
        for (k, &c) in self.h.iter().enumerate() {
            coeffs[bin_of_frequency(-(k as i64), n)] += c.conj();
        }
        CircleFunction::from_coeffs(coeffs)
    }

    /// Splits a circle function into `g = P+ f` and `h = conj(P- f)`, so
    /// `h(0) = 0` and the constant term stays with `g`.
    pub fn from_circle_function(f: &CircleFunction) -> Self {
        let n = f.len();
        let coeffs = fourier_coeffs(f);
        let g = (0..n / 2).map(|k| coeffs[k]).collect();
        let mut h = vec![Complex64::new(0.0, 0.0)];
        h.extend((1..=n / 2).map(|k| coeffs[bin_of_frequency(-(k as i64), n)].conj()));
        Self { g, h }
    }
}
