//! One PASS/FAIL line per acceptance criterion; exits non-zero on any failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use riesz_core::circle::lp_mean_singular;
use riesz_core::constants::sharp_constant_a;
use riesz_core::extremals::{norm_ratio, ExtremalSpec, Variant};
use riesz_core::lemmas::{lemma_suite, LemmaGrid};
use riesz_core::minorant::{plurisubharmonicity_check, pointwise_check, subharmonicity_check, LineSpec, PointwiseGrid, SubmeanGrid};
use riesz_core::report::VerificationReport;
use riesz_core::search::{random_never_exceeds, sharpness_check};
use riesz_core::Params;

const LEMMA_P: [f64; 4] = [1.0, 1.25, 1.5, 1.75];
const LEMMA_B: [f64; 3] = [0.25, 1.0, 4.0];

type Criterion = (&'static str, Duration, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_reports(reports: &[VerificationReport]) -> Outcome {
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed).map(|r| r.summary()).collect();
    Outcome {
        passed: failed.is_empty(),
        detail: if failed.is_empty() {
            format!("{} reports passed", reports.len())
        } else {
            failed.join("; ")
        },
    }
}

fn params(p: f64, b: f64) -> Params {
    Params::new(p, b).expect("valid parameters")
}

fn constant_reduction() -> Outcome {
    let worst = (0..=10)
        .map(|k| {
            let p = 1.0 + k as f64 / 10.0;
            (sharp_constant_a(params(p, 1.0)) - 2f64.sqrt() * (PI / (2.0 * p)).sin()).abs()
        })
        .fold(0.0, f64::max);
    Outcome {
        passed: worst <= 1e-12,
        detail: format!("max |A(p,1) - sqrt(2) sin(pi/(2p))| = {worst:.2e} over p = 1, 1.1, ..., 2"),
    }
}

fn p2_degenerate() -> Outcome {
    let mut worst = 0.0f64;
    for k in -4..=4 {
        let b = 2f64.powi(k);
        let pr = params(2.0, b);
        let expected = 1f64.max(b.powf(-0.5));
        worst = worst.max((sharp_constant_a(pr) - expected).abs());
        let spec = ExtremalSpec::new(pr, 0.4, Variant::Fbb0).expect("fbb0 at p = 2");
        worst = worst.max((norm_ratio(&spec) - expected).abs());
    }
    Outcome {
        passed: worst <= 1e-14,
        detail: format!("max |A(2,b) - max(1, b^-1/2)| and extremal ratio deviation = {worst:.2e}, b = 1/16..16"),
    }
}

fn pointwise() -> Outcome {
    let mut reports = Vec::new();
    for p in LEMMA_P {
        for b in LEMMA_B {
            reports.extend(pointwise_check(params(p, b), PointwiseGrid::default()));
        }
    }
    from_reports(&reports)
}

fn lemmas() -> Outcome {
    let mut reports = Vec::new();
    for p in LEMMA_P {
        for b in LEMMA_B {
            reports.extend(lemma_suite(params(p, b), LemmaGrid::default()).expect("p < 2"));
        }
    }
    let mut out = from_reports(&reports);
    for name in ["phi-at-p2", "phi-at-p1"] {
        let present = reports.iter().any(|r| r.name == name && r.tolerance <= 1e-10);
        out.passed &= present;
        if !present {
            out.detail.push_str(&format!("; missing {name}"));
        }
    }
    out
}

fn quadrature() -> Outcome {
    let p = 1.5;
    let mut worst = 0.0f64;
    for k in 1..=9 {
        let cp = k as f64 / 10.0;
        let c = cp / p;
        let mean = lp_mean_singular(|t| Complex64::new((0.5 * t).tan().recip().abs().powf(c), 0.0), p, &[0.0], cp)
            .expect("integrable");
        worst = worst.max((mean - 1.0 / (0.5 * cp * PI).cos()).abs());
    }
    Outcome {
        passed: worst <= 1e-8,
        detail: format!("max |mean |cot(t/2)|^(cp) - sec(cp pi/2)| = {worst:.2e}, cp = 0.1..0.9"),
    }
}

fn sharpness() -> Outcome {
    let mut reports = Vec::new();
    for p in [1.0, 1.5] {
        for b in [0.5, 2.0] {
            reports.extend(sharpness_check(params(p, b)).expect("valid curve"));
        }
    }
    from_reports(&reports)
}

fn never_exceed() -> Outcome {
    let mut reports = Vec::new();
    for p in [1.25, 1.75] {
        for b in [0.5, 2.0] {
            reports.push(random_never_exceeds(params(p, b), 10_000, 8, 42).expect("trials > 0").report);
        }
    }
    from_reports(&reports)
}

fn submean() -> Outcome {
    let mut reports = Vec::new();
    for p in [1.0, 1.5, 2.0] {
        reports.extend(subharmonicity_check(p, &SubmeanGrid::default()));
        reports.push(plurisubharmonicity_check(p, &LineSpec::default()));
    }
    from_reports(&reports)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 constant reduction at b = 1", Duration::from_secs(1), constant_reduction),
        ("2 p = 2 degenerate case", Duration::from_secs(1), p2_degenerate),
        ("3 pointwise minorant inequality", Duration::from_secs(60 * 12), pointwise),
        ("4 lemma suite", Duration::from_secs(300), lemmas),
        ("5 singular quadrature oracle", Duration::from_secs(10), quadrature),
        ("6 sharpness curve", Duration::from_secs(60), sharpness),
        ("7 never-exceed property", Duration::from_secs(120), never_exceed),
        ("8 sub-mean properties", Duration::from_secs(60), submean),
    ];
    let mut all = true;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let passed = out.passed && elapsed <= budget;
        all &= passed;
        println!(
            "{} criterion {name}: {} [{:.2}s, budget {}s]",
            if passed { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
