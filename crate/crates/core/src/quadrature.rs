//! Tanh-sinh (double exponential) quadrature.
//!
//! The substitution `x = tanh(pi/2 sinh(s))` clusters nodes double-exponentially
//! at both endpoints, which makes it the method of choice for integrands with
//! algebraic endpoint singularities. Nodes are handed to the integrand together
//! with their distances to both endpoints, computed without cancellation, so
//! callers can evaluate `f(a + d)` accurately for `d` far below `ulp(a)`.

use std::f64::consts::FRAC_PI_2;

/// Node abscissa at which the endpoint complement `1 - tanh(u)` reaches ~1e-296.
/// Beyond it the distance to the endpoint is no longer representable.
const MAX_ABSCISSA: f64 = 6.08;

/// Result of a quadrature run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub levels: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct TanhSinh {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Step halvings after the initial unit step.
    pub max_level: usize,
    pub min_level: usize,
}

impl Default for TanhSinh {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_level: 10,
            min_level: 3,
        }
    }
}

/// One node of the transformed rule on `[-1, 1]`.
struct Node {
    /// `1 - |x|`, the distance from the nearer endpoint of `[-1, 1]`.
    complement: f64,
    weight: f64,
}

fn node(s: f64) -> Node {
    let u = FRAC_PI_2 * s.sinh();
    // 1 - tanh(u) = 2 e^{-2u} / (1 + e^{-2u}); sech^2(u) = 4 e^{-2u} / (1 + e^{-2u})^2
    let e = (-2.0 * u).exp();
    let complement = 2.0 * e / (1.0 + e);
    let sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
    Node {
        complement,
        weight: FRAC_PI_2 * s.cosh() * sech2,
    }
}

impl TanhSinh {
    pub fn with_tolerance(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    /// Integrates `f` over `[a, b]`.
    ///
    /// `f(x, dist_a, dist_b)` receives the node together with `x - a` and `b - x`.
    /// Non-finite integrand values are treated as zero contribution; they can
    /// only occur at nodes whose endpoint distance underflowed.
    pub fn integrate<F>(&self, a: f64, b: f64, f: F) -> QuadResult
    where
        F: Fn(f64, f64, f64) -> f64,
    {
        let half = 0.5 * (b - a);
        let mut evaluations = 1usize;
        let centre = {
            let v = f(a + half, half, half);
            if v.is_finite() {
                v * FRAC_PI_2
            } else {
                0.0
            }
        };
        let mut eval_pair = |s: f64| -> f64 {
            let n = node(s);
            let d = half * n.complement;
            let far = 2.0 * half - d;
            // s > 0: node near b; s < 0 mirrored near a
            let right = f(b - d, far, d);
            let left = f(a + d, d, far);
            evaluations += 2;
            let mut acc = 0.0;
            if right.is_finite() {
                acc += right;
            }
            if left.is_finite() {
                acc += left;
            }
            n.weight * acc
        };

        // level 0: unit step
        let mut h = 1.0;
        let mut sum = centre;
        let mut k = 1;
        while (k as f64) * h <= MAX_ABSCISSA {
            sum += eval_pair(k as f64 * h);
            k += 1;
        }
        let mut estimate = half * h * sum;
        let mut error = f64::INFINITY;
        let mut level = 0;

        while level < self.max_level {
            level += 1;
            h *= 0.5;
            // new nodes are the odd multiples of the halved step
            let mut k = 1usize;
            while (k as f64) * h <= MAX_ABSCISSA {
                sum += eval_pair(k as f64 * h);
                k += 2;
            }
            let next = half * h * sum;
            error = (next - estimate).abs();
            estimate = next;
            if level >= self.min_level
                && error <= self.abs_tol.max(self.rel_tol * estimate.abs())
            {
                break;
            }
        }

        QuadResult {
            value: estimate,
            error_estimate: error,
            evaluations,
            levels: level,
        }
    }
}

/// Convenience wrapper with default tolerances.
pub fn tanh_sinh<F>(a: f64, b: f64, f: F) -> QuadResult
where
    F: Fn(f64, f64, f64) -> f64,
{
    TanhSinh::default().integrate(a, b, f)
}

/// Integrates `f` over `[0, len]` where `f(d)` may blow up like `d^{-exponent}`
/// as `d -> 0`, `exponent < 1`.
///
/// Uses the graded substitution `d = len v^k`, `k = 1 / (1 - exponent)`, which
/// turns the power singularity into a bounded integrand in `v`. Offsets that
/// would underflow are clamped to `MIN_OFFSET`; the integrand is constant to
/// first order there so the clamp costs O(MIN_OFFSET).
pub fn graded_singular<F>(rule: &TanhSinh, len: f64, exponent: f64, f: F) -> QuadResult
where
    F: Fn(f64) -> f64,
{
    const MIN_OFFSET: f64 = 1e-280;
    let k = if exponent > 0.0 { 1.0 / (1.0 - exponent) } else { 1.0 };
    let v_min = (MIN_OFFSET / len).powf(1.0 / k);
    rule.integrate(0.0, 1.0, |_, dv0, _| {
        let v = dv0.max(v_min);
        let d = len * v.powf(k);
        f(d) * len * k * v.powf(k - 1.0)
    })
}
