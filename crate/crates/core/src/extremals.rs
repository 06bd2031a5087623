//! Extremal harmonic functions `f = a W^c + k conj(W^c)` with
//! `W = (1+z)/(1-z)` and their boundary norm functionals.
//!
//! With the pair convention `f = g + conj(h)` this is `g = a W^c`,
//! `h = k W^c` for real `a`, `k`. On the boundary `W = i cot(t/2)`, so
//! `|f|^2 = |cot(t/2)|^{2c} (a^2 + k^2 + 2ak cos(c pi))` and every norm
//! integral reduces to `int |cot(t/2)|^{cp} dt = 2 pi sec(c p pi / 2)`.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::circle::{mean_singular, wrap_angle, HarmonicPair};
use crate::constants::{extremal_rbar, Params};
use crate::error::{Result, RieszError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum Variant {
    /// `W^c - rbar conj(W^c)`; needs `p < 2`.
    Fbb,
    /// `beta W^c + (beta - 1) conj(W^c)`.
    Fbeta { beta: f64 },
    /// `p = 2`: `conj(W^c)` for `b <= 1`, `W^c` for `b > 1`.
    Fbb0,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtremalSpec {
    pub params: Params,
    pub c: f64,
    pub variant: Variant,
    /// Coefficient of `W^c` in `g`.
    pub analytic: f64,
    /// Coefficient of `conj(W^c)`.
    pub coanalytic: f64,
}

fn check_c(params: Params, c: f64) -> Result<()> {
    if !(c > 0.0 && c * params.p() < 1.0) {
        return Err(RieszError::InvalidExtremalExponent { c, p: params.p() });
    }
    Ok(())
}

fn check_beta(beta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(RieszError::InvalidBeta(beta));
    }
    Ok(())
}

impl ExtremalSpec {
    pub fn new(params: Params, c: f64, variant: Variant) -> Result<Self> {
        check_c(params, c)?;
        let (analytic, coanalytic) = match variant {
            Variant::Fbb => (1.0, -extremal_rbar(params)?),
            Variant::Fbeta { beta } => {
                check_beta(beta)?;
                (beta, beta - 1.0)
            }
            Variant::Fbb0 => {
                if !params.is_p2() {
                    return Err(RieszError::Fbb0RequiresP2(params.p()));
                }
                if params.b() <= 1.0 {
                    (0.0, 1.0)
                } else {
                    (1.0, 0.0)
                }
            }
        };
        Ok(Self {
            params,
            c,
            variant,
            analytic,
            coanalytic,
        })
    }

    /// `|f|^2 / |W|^{2c}` on the boundary.
    fn trace_factor(&self) -> f64 {
        let (a, k) = (self.analytic, self.coanalytic);
        (a * a + k * k + 2.0 * a * k * (self.c * PI).cos()).max(0.0)
    }

    /// `(|g|^2 + b|h|^2) / |W|^{2c}`.
    fn weight_factor(&self) -> f64 {
        let (a, k) = (self.analytic, self.coanalytic);
        a * a + self.params.b() * k * k
    }

    /// `Re(g(0) h(0))`; `W(0) = 1`.
    pub fn origin_product(&self) -> f64 {
        self.analytic * self.coanalytic
    }

    /// Truncated Taylor pair of `f(rho z)` up to `degree`.
    pub fn taylor_pair(&self, degree: usize, rho: f64) -> HarmonicPair {
        let series: Vec<f64> = cayley_power_series(self.c, degree)
            .into_iter()
            .enumerate()
            .map(|(k, s)| s * rho.powi(k as i32))
            .collect();
        let scaled = |coef: f64| {
            series
                .iter()
                .map(|&s| Complex64::new(coef * s, 0.0))
                .collect()
        };
        HarmonicPair::new(scaled(self.analytic), scaled(self.coanalytic))
    }
}

/// Taylor coefficients of `((1+z)/(1-z))^c` up to `z^degree`.
///
/// With `u = exp(L)`, `L = 2c sum_{odd k} z^k / k`, the coefficients obey
/// `n u_n = sum_{k=1}^n k L_k u_{n-k}`.
pub fn cayley_power_series(c: f64, degree: usize) -> Vec<f64> {
    let mut u = vec![0.0; degree + 1];
    u[0] = 1.0;
    for n in 1..=degree {
        // k L_k = 2c for odd k, 0 for even k
        let acc: f64 = (1..=n).step_by(2).map(|k| u[n - k]).sum();
        u[n] = 2.0 * c * acc / n as f64;
    }
    u
}

/// `(1+z)/(1-z)` raised to `c` on the principal branch.
fn cayley_power(z: Complex64, c: f64) -> Result<Complex64> {
    if z.norm().is_nan() || z.norm() >= 1.0 {
        return Err(RieszError::OutsideDisk(z));
    }
    let w = (1.0 + z) / (1.0 - z);
    assert!(w.re > 0.0, "Cayley image left the right half-plane at z = {z}");
    Ok(w.powf(c))
}

/// Returns `(g(z), conj(h(z)))` for `|z| < 1`.
pub fn eval_extremal(spec: &ExtremalSpec, z: Complex64) -> Result<(Complex64, Complex64)> {
    let wc = cayley_power(z, spec.c)?;
    Ok((spec.analytic * wc, spec.coanalytic * wc.conj()))
}

/// `(g'(z), h'(z))`. Both share the factor `c W^{c-1} 2/(1-z)^2`.
pub fn eval_extremal_derivatives(
    spec: &ExtremalSpec,
    z: Complex64,
) -> Result<(Complex64, Complex64)> {
    let w = cayley_power(z, spec.c - 1.0)?;
    let common = spec.c * w * 2.0 / ((1.0 - z) * (1.0 - z));
    Ok((spec.analytic * common, spec.coanalytic * common))
}

/// `W^c` at `e^{it}`: modulus `|cot(t/2)|^c`, argument `sign(t) c pi / 2`.
fn boundary_power(t: f64, c: f64) -> Result<Complex64> {
    let t = wrap_angle(t);
    if t == 0.0 {
        return Err(RieszError::BoundarySingularity);
    }
    let modulus = (0.5 * t).tan().recip().abs().powf(c);
    let modulus = if t == PI { 0.0 } else { modulus };
    Ok(Complex64::from_polar(modulus, t.signum() * c * PI / 2.0))
}

/// Nontangential boundary value `f(e^{it})`, `t` not a multiple of `2 pi`.
pub fn eval_extremal_boundary(spec: &ExtremalSpec, t: f64) -> Result<Complex64> {
    let wc = boundary_power(t, spec.c)?;
    Ok(spec.analytic * wc + spec.coanalytic * wc.conj())
}

/// `(|g|^2 + b |h|^2)^{1/2}` at `e^{it}`.
pub fn eval_extremal_boundary_weight(spec: &ExtremalSpec, t: f64) -> Result<f64> {
    let wc = boundary_power(t, spec.c)?;
    Ok(wc.norm() * spec.weight_factor().sqrt())
}

/// `sec(c p pi / 2) = mean |cot(t/2)|^{cp}`.
fn cot_power_mean(params: Params, c: f64) -> Result<f64> {
    check_c(params, c)?;
    Ok(1.0 / (0.5 * c * params.p() * PI).cos())
}

/// `int_0^{2pi} |f|^p dt` for the spec, in closed form.
pub fn z_of_spec(spec: &ExtremalSpec) -> Result<f64> {
    let p = spec.params.p();
    Ok(2.0 * PI * spec.trace_factor().powf(p / 2.0) * cot_power_mean(spec.params, spec.c)?)
}

/// `int_0^{2pi} (|g|^2 + b|h|^2)^{p/2} dt` for the spec, in closed form.
pub fn x_of_spec(spec: &ExtremalSpec) -> Result<f64> {
    let p = spec.params.p();
    Ok(2.0 * PI * spec.weight_factor().powf(p / 2.0) * cot_power_mean(spec.params, spec.c)?)
}

/// `Z(beta) = 2 pi (1 + 2(beta-1) beta (1 + cos c pi))^{p/2} sec(c p pi/2)`.
pub fn z_of_beta(params: Params, c: f64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let base = 1.0 + 2.0 * (beta - 1.0) * beta * (1.0 + (c * PI).cos());
    Ok(2.0 * PI * base.max(0.0).powf(params.p() / 2.0) * cot_power_mean(params, c)?)
}

/// `X(beta) = 2 pi (beta^2 + b (1-beta)^2)^{p/2} sec(c p pi/2)`.
pub fn x_of_beta(params: Params, c: f64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let base = beta * beta + params.b() * (1.0 - beta) * (1.0 - beta);
    Ok(2.0 * PI * base.powf(params.p() / 2.0) * cot_power_mean(params, c)?)
}

/// Norm-level ratio `(Z/X)^{1/p}`; the `sec` factors cancel.
pub fn norm_ratio(spec: &ExtremalSpec) -> f64 {
    (spec.trace_factor() / spec.weight_factor()).sqrt()
}

/// `Z` and `X` by singular quadrature of the boundary values.
pub fn quadrature_z_x(spec: &ExtremalSpec) -> Result<(f64, f64)> {
    let p = spec.params.p();
    let bound = spec.c * p;
    let z = mean_singular(
        |t| eval_extremal_boundary(spec, t).map_or(f64::NAN, |f| f.norm().powf(p)),
        &[0.0],
        bound,
    )?;
    let x = mean_singular(
        |t| eval_extremal_boundary_weight(spec, t).map_or(f64::NAN, |v| v.powf(p)),
        &[0.0],
        bound,
    )?;
    Ok((2.0 * PI * z, 2.0 * PI * x))
}

/// Writes rows `t, Re f, Im f, |f|` at the `n` midpoints `t = -pi + 2pi(j + 1/2)/n`.
pub fn write_boundary_trace<W: Write>(spec: &ExtremalSpec, n: usize, writer: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["t", "re", "im", "abs"])?;
    for j in 0..n {
        let t = -PI + 2.0 * PI * (j as f64 + 0.5) / n as f64;
        let f = eval_extremal_boundary(spec, t).map_err(|e| {
            csv::Error::from(std::io::Error::new(std::io::ErrorKind::InvalidInput, e))
        })?;
        w.serialize((t, f.re, f.im, f.norm()))?;
    }
    w.flush()?;
    Ok(())
}
