//! Derivative-free local minimization (Nelder-Mead via `argmin`).

use argmin::core::{CostFunction, Error, Executor};
use argmin::solver::neldermead::NelderMead;

struct Objective<F>(F);

impl<F> CostFunction for Objective<F>
where
    F: Fn(&[f64]) -> f64,
{
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Self::Param) -> Result<f64, Error> {
        let v = (self.0)(x);
        // NaN would stall the simplex ordering
        Ok(if v.is_nan() { f64::INFINITY } else { v })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: u64,
}

/// Minimizes `f` from `start` with an axis-aligned initial simplex of size `step`.
pub fn nelder_mead<F>(f: F, start: &[f64], step: &[f64], max_iters: u64) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let mut simplex = vec![start.to_vec()];
    for (i, &h) in step.iter().enumerate() {
        let mut v = start.to_vec();
        v[i] += h;
        simplex.push(v);
    }
    let fallback = || Minimum {
        point: start.to_vec(),
        value: f(start),
        iterations: 0,
    };
    let Ok(solver) = NelderMead::new(simplex).with_sd_tolerance(0.0) else {
        return fallback();
    };
    let run = Executor::new(Objective(&f), solver)
        .configure(|state| state.max_iters(max_iters))
        .run();
    match run {
        Ok(result) => {
            let state = result.state;
            match state.best_param {
                Some(point) => Minimum {
                    value: f(&point),
                    point,
                    iterations: state.iter,
                },
                None => fallback(),
            }
        }
        Err(_) => fallback(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = nelder_mead(f, &[-1.2, 1.0], &[0.1, 0.1], 5000);
        assert!(m.value < 1e-14, "{m:?}");
        assert!((m.point[0] - 1.0).abs() < 1e-6);
    }
}
