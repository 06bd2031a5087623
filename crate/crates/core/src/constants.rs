//! Closed-form constants of the weighted Riesz inequality
//!
//! ```text
//! ||g + conj(h)||_p <= A(p, b) || (|g|^2 + b |h|^2)^{1/2} ||_p,   1 <= p <= 2, b > 0
//! ```
//!
//! together with the minorant constants `D`, `E`, the equality-locus ratio `R`,
//! the extremal coefficient `r_bar` and the sharpness weight `beta`.
//!
//! Everything is evaluated in double precision from the closed forms. Formulas
//! containing `sec(pi/p)` are singular at `p = 2`; those return
//! [`RieszError::DegenerateP2`] except `E`, which is reported as its limit `2`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Result, RieszError};

/// The exponent/weight pair `(p, b)` with `p in [1, 2]` and `b > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Params {
    p: f64,
    b: f64,
}

impl Params {
    pub fn new(p: f64, b: f64) -> Result<Self> {
        if !(p.is_finite() && (1.0..=2.0).contains(&p)) {
            return Err(RieszError::InvalidExponent(p));
        }
        if !(b.is_finite() && b > 0.0) {
            return Err(RieszError::InvalidWeight(b));
        }
        Ok(Self { p, b })
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }

    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }

    #[inline]
    pub fn is_p2(&self) -> bool {
        self.p == 2.0
    }

    /// `cos(pi/p)`, which lies in `[-1, 0]` on the admissible range.
    #[inline]
    pub fn cos_pi_p(&self) -> f64 {
        (PI / self.p).cos()
    }

    /// `sin(pi/p)`; exactly zero at `p = 1`.
    #[inline]
    pub fn sin_pi_p(&self) -> f64 {
        if self.p == 1.0 {
            0.0
        } else {
            (PI / self.p).sin()
        }
    }

    pub(crate) fn require_below_2(&self, what: &'static str) -> Result<()> {
        if self.is_p2() {
            Err(RieszError::DegenerateP2(what))
        } else {
            Ok(())
        }
    }

    /// `sec(pi/p)` for `p < 2`. Always `<= -1` there.
    pub(crate) fn sec_pi_p(&self, what: &'static str) -> Result<f64> {
        self.require_below_2(what)?;
        let sec = 1.0 / self.cos_pi_p();
        debug_assert!(sec < 0.0, "sec(pi/p) must be negative for p < 2");
        Ok(sec)
    }
}

/// `S_b = 1 + b^2 + 2 b cos(2 pi / p)`.
pub fn s_b(params: Params) -> f64 {
    let b = params.b();
    // 1 + b^2 + 2b cos(2pi/p), rearranged to avoid cancellation near (p, b) = (2, 1)
    let c = params.cos_pi_p();
    (1.0 - b) * (1.0 - b) + 4.0 * b * c * c
}

/// `sqrt(S_b)` with negative round-off clamped to zero.
#[inline]
fn sqrt_s_b(params: Params) -> f64 {
    s_b(params).max(0.0).sqrt()
}

/// Base of both `A` and `D`: `(1 + b + sqrt(S_b)) / (2b)`.
#[inline]
fn sharp_base(params: Params) -> f64 {
    let b = params.b();
    (1.0 + b + sqrt_s_b(params)) / (2.0 * b)
}

/// The sharp constant `A(p, b) = ((1 + b + sqrt(S_b)) / (2b))^{1/2}`.
pub fn sharp_constant_a(params: Params) -> f64 {
    sharp_base(params).sqrt()
}

/// `D` and `E` of the pointwise minorant inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinorantConstants {
    pub d: f64,
    pub e: f64,
    /// `E` was replaced by its `p -> 2` limit.
    pub degenerate_p2: bool,
}

/// Limit of `E(p, b)` as `p -> 2`, independent of `b`.
pub const E_LIMIT_P2: f64 = 2.0;

pub fn minorant_constants_de(params: Params) -> MinorantConstants {
    let p = params.p();
    let b = params.b();
    let d = sharp_base(params).powf(p / 2.0);
    if params.is_p2() {
        return MinorantConstants {
            d,
            e: E_LIMIT_P2,
            degenerate_p2: true,
        };
    }
    let s = s_b(params).max(0.0);
    let sec = 1.0 / params.cos_pi_p();
    let inner = -(s + (1.0 + b) * s.sqrt()) * sec / b;
    let e = 2f64.powf(2.0 - p / 2.0) * inner.powf((p - 2.0) / 2.0) * params.sin_pi_p();
    MinorantConstants {
        d,
        e,
        degenerate_p2: false,
    }
}

/// Modulus ratio `R = |w| / |z|` on the equality locus.
pub fn equality_locus_r(params: Params) -> Result<f64> {
    let sec = params.sec_pi_p("equality_locus_r")?;
    Ok(-0.5 * (-1.0 + params.b() + sqrt_s_b(params)) * sec)
}

/// Real coefficient `r_bar` of the extremal `f_c = w^c - r_bar conj(w)^c`.
pub fn extremal_rbar(params: Params) -> Result<f64> {
    let sec = params.sec_pi_p("extremal_rbar")?;
    let b = params.b();
    if b == 1.0 {
        return Ok(1.0);
    }
    Ok((-1.0 + b - sqrt_s_b(params)) * sec / (2.0 * b))
}

/// Below this value of `cos^2(pi/(2p))` (p within ~6e-3 of 1) or of `|b - 1|`
/// the closed form for `beta` is a 0/0 quotient; the equivalent `R / (1 + R)`
/// is used instead.
const BETA_CANCELLATION_GUARD: f64 = 1e-4;

/// Mixing weight `beta` of the sharpness family
/// `f_beta = beta w^c + (beta - 1) conj(w)^c`.
pub fn sharpness_beta(params: Params) -> Result<f64> {
    params.require_below_2("sharpness_beta")?;
    let p = params.p();
    let b = params.b();
    if b == 1.0 {
        return Ok(0.5);
    }
    let half_cos = (PI / (2.0 * p)).cos();
    let cos2 = half_cos * half_cos;
    if cos2 < BETA_CANCELLATION_GUARD || (b - 1.0).abs() < BETA_CANCELLATION_GUARD {
        let r = equality_locus_r(params)?;
        return Ok(r / (1.0 + r));
    }
    let num = -1.0 + b + 2.0 * b * params.cos_pi_p() + sqrt_s_b(params);
    Ok(num / cos2 / (4.0 * (b - 1.0)))
}

/// Every constant at one `(p, b)`, in the JSON layout used by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantSet {
    pub p: f64,
    pub b: f64,
    #[serde(rename = "S_b")]
    pub s_b: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "E")]
    pub e: f64,
    /// `None` at `p = 2`.
    #[serde(rename = "R")]
    pub r: Option<f64>,
    pub r_bar: Option<f64>,
    pub beta: Option<f64>,
    pub degenerate_p2: bool,
}

impl ConstantSet {
    pub fn compute(params: Params) -> Self {
        let de = minorant_constants_de(params);
        Self {
            p: params.p(),
            b: params.b(),
            s_b: s_b(params),
            a: sharp_constant_a(params),
            d: de.d,
            e: de.e,
            r: equality_locus_r(params).ok(),
            r_bar: extremal_rbar(params).ok(),
            beta: sharpness_beta(params).ok(),
            degenerate_p2: de.degenerate_p2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pb(p: f64, b: f64) -> Params {
        Params::new(p, b).unwrap()
    }

    #[test]
    fn params_domain() {
        assert!(Params::new(0.99, 1.0).is_err());
        assert!(Params::new(2.01, 1.0).is_err());
        assert!(Params::new(1.5, 0.0).is_err());
        assert!(Params::new(1.5, -1.0).is_err());
        assert!(Params::new(f64::NAN, 1.0).is_err());
        assert!(Params::new(1.5, f64::INFINITY).is_err());
        assert!(Params::new(1.0, 1e-9).is_ok());
        assert!(Params::new(2.0, 1e9).is_ok());
    }

    #[test]
    fn s_b_examples() {
        assert!((s_b(pb(2.0, 3.0)) - 4.0).abs() < 1e-14);
        let b0 = 0.37;
        assert!((s_b(pb(1.0, b0)) - (1.0 + b0).powi(2)).abs() < 1e-14);
        // S_1 = 4 cos^2(pi/p)
        let v = s_b(pb(1.5, 1.0));
        assert!((v - 1.0).abs() < 1e-14);
        assert!((v - 4.0 * (PI / 1.5).cos().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn a_examples() {
        assert!((sharp_constant_a(pb(2.0, 4.0)) - 1.0).abs() < 1e-15);
        assert!((sharp_constant_a(pb(2.0, 0.25)) - 2.0).abs() < 1e-15);
        for i in 0..=100 {
            let p = 1.0 + i as f64 / 100.0;
            let dp = 2f64.sqrt() * (PI / (2.0 * p)).sin();
            assert!((sharp_constant_a(pb(p, 1.0)) - dp).abs() < 1e-12, "p = {p}");
        }
    }

    #[test]
    fn d_and_e_examples() {
        let de = minorant_constants_de(pb(2.0, 3.0));
        assert!((de.d - 1.0).abs() < 1e-15);
        assert_eq!(de.e, 2.0);
        assert!(de.degenerate_p2);

        // The p -> 2 limit of E, approached from below.
        let near: Vec<f64> = [1e-3, 1e-4, 1e-5]
            .iter()
            .map(|eps| minorant_constants_de(pb(2.0 - eps, 3.0)).e)
            .collect();
        assert!(near.windows(2).all(|w| (w[1] - 2.0).abs() < (w[0] - 2.0).abs()));
        assert!((near[2] - 2.0).abs() < 1e-3);

        let de = minorant_constants_de(pb(1.5, 1.0));
        let a_oracle = 2f64.sqrt() * (PI / 3.0).sin();
        assert!((de.d - a_oracle.powf(1.5)).abs() < 1e-13);
        assert!(!de.degenerate_p2);

        let de = minorant_constants_de(pb(1.0, 1.0));
        assert!((de.d - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(de.e, 0.0);
    }

    #[test]
    fn r_examples() {
        for b0 in [0.1, 1.0, 4.0, 17.0] {
            assert!((equality_locus_r(pb(1.0, b0)).unwrap() - b0).abs() < 1e-13 * b0.max(1.0));
        }
        assert!((equality_locus_r(pb(1.5, 1.0)).unwrap() - 1.0).abs() < 1e-14);
        let mut prev = f64::INFINITY;
        for eps in [1e-2, 1e-3, 1e-4, 1e-5] {
            let dist = (equality_locus_r(pb(2.0 - eps, 1.0)).unwrap() - 1.0).abs();
            assert!(dist <= prev + 1e-15);
            prev = dist;
        }
        assert!(prev < 1e-9);
        assert_eq!(
            equality_locus_r(pb(2.0, 1.0)),
            Err(RieszError::DegenerateP2("equality_locus_r"))
        );
    }

    #[test]
    fn rbar_examples() {
        for p in [1.0, 1.25, 1.5, 1.75] {
            let params = pb(p, 1.0);
            assert_eq!(extremal_rbar(params).unwrap(), 1.0);
            // the general formula agrees with the special case
            let sec = 1.0 / params.cos_pi_p();
            let generic = (-1.0 + 1.0 - s_b(params).max(0.0).sqrt()) * sec / 2.0;
            assert!((generic - 1.0).abs() < 1e-14, "p = {p}");
        }
        assert!((extremal_rbar(pb(1.0, 4.0)).unwrap() - 0.25).abs() < 1e-15);
        // r_bar(p, 1/b) = 1 / r_bar(p, b), brute-forced at p = 1 first
        for b in [0.25, 0.5, 3.0, 7.0] {
            let lhs = extremal_rbar(pb(1.0, 1.0 / b)).unwrap();
            let rhs = 1.0 / extremal_rbar(pb(1.0, b)).unwrap();
            assert!((lhs - rhs).abs() < 1e-13 * rhs);
        }
        assert!((extremal_rbar(pb(1.0, 0.25)).unwrap() - 4.0).abs() < 1e-13);
        assert!(extremal_rbar(pb(2.0, 0.5)).is_err());
    }

    #[test]
    fn beta_examples() {
        for p in [1.0, 1.3, 1.9] {
            assert_eq!(sharpness_beta(pb(p, 1.0)).unwrap(), 0.5);
        }
        let beta = sharpness_beta(pb(1.0, 4.0)).unwrap();
        assert!((0.0..=1.0).contains(&beta));
        assert!((beta - 0.8).abs() < 1e-14);

        // (1 - beta) / beta = r_bar, and beta maximizes the extremal ratio.
        let params = pb(1.5, 0.5);
        let beta = sharpness_beta(params).unwrap();
        let rbar = extremal_rbar(params).unwrap();
        assert!(((1.0 - beta) / beta - rbar).abs() < 1e-12);
        let cos = params.cos_pi_p();
        let ratio = |bt: f64| {
            ((1.0 - 2.0 * bt * (1.0 - bt) * (1.0 + cos)) / (bt * bt + 0.5 * (1.0 - bt).powi(2)))
                .sqrt()
        };
        let (best, _) = (0..=100_000)
            .map(|i| i as f64 / 100_000.0)
            .map(|bt| (bt, ratio(bt)))
            .fold((0.0, f64::MIN), |acc, x| if x.1 > acc.1 { x } else { acc });
        assert!((best - beta).abs() < 2e-5);
        assert!((ratio(beta) - sharp_constant_a(params)).abs() < 1e-13);
        assert!(sharpness_beta(pb(2.0, 0.5)).is_err());
    }

    #[test]
    fn beta_guard_is_continuous() {
        // both sides of the cancellation guard agree
        for b in [0.3, 2.5] {
            let lo = sharpness_beta(pb(1.0062, b)).unwrap();
            let hi = sharpness_beta(pb(1.0066, b)).unwrap();
            assert!((lo - hi).abs() < 1e-3);
            let r = equality_locus_r(pb(1.0066, b)).unwrap();
            assert!((hi - r / (1.0 + r)).abs() < 1e-11);
        }
    }

    #[test]
    fn constant_set_json_fields() {
        let json = serde_json::to_value(ConstantSet::compute(pb(1.5, 2.0))).unwrap();
        let obj = json.as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        keys.sort_unstable();
        let mut expected = vec![
            "p", "b", "S_b", "A", "D", "E", "R", "r_bar", "beta", "degenerate_p2",
        ];
        expected.sort_unstable();
        assert_eq!(keys, expected);

        let p2 = serde_json::to_value(ConstantSet::compute(pb(2.0, 2.0))).unwrap();
        assert!(p2["R"].is_null() && p2["beta"].is_null() && p2["r_bar"].is_null());
        assert_eq!(p2["degenerate_p2"], true);
    }
}
