use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use riesz_core::circle::{fourier_coeffs, lp_mean_singular, lp_norm, project_minus, project_plus, CircleFunction};

const N: usize = 256;

fn trig_poly() -> impl Strategy<Value = CircleFunction> {
    prop::collection::vec((-20i64..=20, -1.0..1.0f64, -1.0..1.0f64), 1..12).prop_map(|terms| {
        let terms: Vec<(i64, Complex64)> = terms.into_iter().map(|(k, re, im)| (k, Complex64::new(re, im))).collect();
        CircleFunction::from_terms(N, &terms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projections_sum_to_identity(f in trig_poly()) {
        let plus = project_plus(&f);
        let minus = project_minus(&f);
        for ((a, b), c) in plus.samples().iter().zip(minus.samples()).zip(f.samples()) {
            prop_assert!((a + b - c).norm() < 1e-12);
        }
    }

    #[test]
    fn parseval(f in trig_poly()) {
        let energy: f64 = fourier_coeffs(&f).iter().map(|c| c.norm_sqr()).sum();
        let l2 = lp_norm(&f, 2.0).unwrap();
        prop_assert!((l2 * l2 - energy).abs() <= 1e-12 * energy.max(1.0));
    }

    #[test]
    fn lp_norm_monotone_in_p(f in trig_poly(), p in 1.0..2.0f64, dq in 0.0..1.0f64) {
        let q = (p + dq).min(2.0);
        let np = lp_norm(&f, p).unwrap();
        let nq = lp_norm(&f, q).unwrap();
        prop_assert!(np <= nq * (1.0 + 1e-12));
        prop_assert!(lp_norm(&f, 1.0).unwrap() <= np * (1.0 + 1e-12));
    }
}

#[test]
fn singular_mean_matches_secant() {
    for k in 1..=9 {
        let cp = k as f64 / 10.0;
        let p = 1.5;
        let c = cp / p;
        let mean = lp_mean_singular(
            |t| Complex64::new((0.5 * t).tan().recip().abs().powf(c), 0.0),
            p,
            &[0.0],
            cp,
        )
        .unwrap();
        let exact = 1.0 / (0.5 * cp * PI).cos();
        assert!(((mean - exact) / exact).abs() < 1e-8, "cp = {cp}: {mean} vs {exact}");
    }
}
