//! Tensor-product grid sweeps with parallel evaluation and deterministic
//! worst-point reduction.

use rayon::prelude::*;

use crate::report::{Sense, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    /// Points equispaced in `ln x`; all values must be positive.
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
    pub scale: Scale,
}

impl Axis {
    /// `n` points from `lo` to `hi` inclusive.
    pub fn linspace(name: &str, lo: f64, hi: f64, n: usize) -> Self {
        let values = if n == 1 {
            vec![lo]
        } else {
            (0..n)
                .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                .collect()
        };
        Self {
            name: name.to_string(),
            values,
            scale: Scale::Linear,
        }
    }

    /// `n` points on `[lo + eps, hi - eps]`, for open intervals.
    pub fn open_linspace(name: &str, lo: f64, hi: f64, n: usize, eps: f64) -> Self {
        Self::linspace(name, lo + eps, hi - eps, n)
    }

    /// `n` points geometrically spaced from `lo` to `hi`.
    pub fn logspace(name: &str, lo: f64, hi: f64, n: usize) -> Self {
        let mut axis = Self::linspace(name, lo.ln(), hi.ln(), n);
        axis.values.iter_mut().for_each(|v| *v = v.exp());
        axis.scale = Scale::Log;
        axis
    }

    /// Explicit points, linear scale.
    pub fn points(name: &str, values: &[f64]) -> Self {
        Self {
            name: name.to_string(),
            values: values.to_vec(),
            scale: Scale::Linear,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn unit_of(&self, x: f64) -> f64 {
        match self.scale {
            Scale::Linear => x,
            Scale::Log => x.ln(),
        }
    }

    fn value_at(&self, u: f64) -> f64 {
        match self.scale {
            Scale::Linear => u,
            Scale::Log => u.exp(),
        }
    }

    /// Local axis of `points_per_side * 2 + 1` points spanning one cell on each
    /// side of `x`, clipped to the axis range.
    fn neighbourhood(&self, x: f64, points_per_side: usize) -> Axis {
        if self.len() < 2 {
            return Axis {
                values: vec![x],
                ..self.clone()
            };
        }
        let units: Vec<f64> = self.values.iter().map(|&v| self.unit_of(v)).collect();
        let lo = units.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = units.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let u = self.unit_of(x);
        // local cell width around the nearest node
        let idx = units
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - u).abs().total_cmp(&(b.1 - u).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let left = if idx > 0 { (units[idx] - units[idx - 1]).abs() } else { 0.0 };
        let right = if idx + 1 < units.len() { (units[idx + 1] - units[idx]).abs() } else { 0.0 };
        let h = left.max(right);
        let n = points_per_side as f64;
        let values = (0..=2 * points_per_side)
            .map(|k| (u + h * (k as f64 - n) / n).clamp(lo, hi))
            .map(|v| self.value_at(v))
            .collect();
        Axis {
            name: self.name.clone(),
            values,
            scale: self.scale,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub num_points: usize,
    pub worst_value: f64,
    pub worst_point: Vec<f64>,
}

fn decode(mut index: usize, axes: &[Axis], point: &mut [f64]) {
    for (slot, axis) in point.iter_mut().zip(axes).rev() {
        let n = axis.len();
        *slot = axis.values[index % n];
        index /= n;
    }
}

/// Evaluates `f` on every grid point and returns the worst value under `sense`.
/// Ties and parallel scheduling resolve to the lowest flat index.
pub fn sweep<F>(axes: &[Axis], sense: Sense, f: F) -> SweepResult
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let total: usize = axes.iter().map(Axis::len).product();
    let dims = axes.len();
    let best = (0..total)
        .into_par_iter()
        .map_init(
            || vec![0.0; dims],
            |point, i| {
                decode(i, axes, point);
                (f(point), i)
            },
        )
        .reduce(
            || (f64::NAN, usize::MAX),
            |a, b| {
                if a.1 == usize::MAX {
                    return b;
                }
                if b.1 == usize::MAX {
                    return a;
                }
                if sense.is_worse(b.0, a.0) || (!sense.is_worse(a.0, b.0) && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    let mut worst_point = vec![0.0; dims];
    if total > 0 {
        decode(best.1, axes, &mut worst_point);
    }
    SweepResult {
        num_points: total,
        worst_value: best.0,
        worst_point,
    }
}

/// Re-sweeps one cell around `point` at ten times the resolution of `axes`.
pub fn refine<F>(axes: &[Axis], point: &[f64], sense: Sense, f: F) -> SweepResult
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let per_side = match axes.len() {
        0..=2 => 10,
        3 => 6,
        _ => 4,
    };
    let local: Vec<Axis> = axes
        .iter()
        .zip(point)
        .map(|(axis, &x)| axis.neighbourhood(x, per_side))
        .collect();
    sweep(&local, sense, f)
}

/// Grid sweep plus local refinement, packaged as a report.
pub struct Check<'a> {
    pub name: &'a str,
    pub domain: String,
    pub sense: Sense,
    pub threshold: f64,
    pub tolerance: f64,
    pub refine: bool,
}

impl Check<'_> {
    pub fn run<F>(&self, axes: &[Axis], f: F) -> VerificationReport
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let grid = sweep(axes, self.sense, &f);
        let names: Vec<&str> = axes.iter().map(|a| a.name.as_str()).collect();
        let report = VerificationReport::new(
            self.name,
            self.domain.clone(),
            &names,
            grid.num_points,
            grid.worst_value,
            grid.worst_point.clone(),
            self.sense,
            self.threshold,
            self.tolerance,
        );
        if !self.refine || grid.num_points == 0 {
            return report;
        }
        let local = refine(axes, &grid.worst_point, self.sense, &f);
        let mut report = report.with_refinement(local.worst_value, local.worst_point);
        report.num_points += local.num_points;
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axes() {
        let a = Axis::linspace("x", 0.0, 1.0, 5);
        assert_eq!(a.values, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let l = Axis::logspace("r", 1e-2, 1e2, 5);
        assert!((l.values[2] - 1.0).abs() < 1e-15);
        assert!((l.values[4] - 100.0).abs() < 1e-12);
        let o = Axis::open_linspace("t", 0.0, 1.0, 3, 1e-6);
        assert_eq!(o.values[0], 1e-6);
    }

    #[test]
    fn sweep_finds_minimum_deterministically() {
        let axes = [Axis::linspace("x", -1.0, 1.0, 41), Axis::linspace("y", -1.0, 1.0, 41)];
        let f = |v: &[f64]| (v[0] - 0.3).powi(2) + (v[1] + 0.5).powi(2);
        let r = sweep(&axes, Sense::AtLeast, f);
        assert_eq!(r.num_points, 41 * 41);
        assert!((r.worst_point[0] - 0.3).abs() < 1e-12);
        assert!((r.worst_point[1] + 0.5).abs() < 1e-12);
        for _ in 0..5 {
            assert_eq!(sweep(&axes, Sense::AtLeast, f), r);
        }
        // ties resolve to the first index
        let flat = sweep(&axes, Sense::AtMost, |_| 1.0);
        assert_eq!(flat.worst_point, vec![-1.0, -1.0]);
    }

    #[test]
    fn nan_is_reported_as_worst() {
        let axes = [Axis::linspace("x", 0.0, 1.0, 11)];
        let r = sweep(&axes, Sense::AtLeast, |v| if v[0] == 0.5 { f64::NAN } else { v[0] });
        assert!(r.worst_value.is_nan());
        assert_eq!(r.worst_point, vec![0.5]);
    }

    #[test]
    fn refinement_sharpens_offgrid_minimum() {
        let axes = [Axis::linspace("x", 0.0, 1.0, 11)];
        let f = |v: &[f64]| (v[0] - 0.537).abs();
        let grid = sweep(&axes, Sense::AtLeast, f);
        let fine = refine(&axes, &grid.worst_point, Sense::AtLeast, f);
        assert!(fine.worst_value < grid.worst_value);
        assert!(fine.worst_value < 0.0051);

        let log = [Axis::logspace("r", 1e-2, 1e2, 9)];
        let fine = refine(&log, &[100.0], Sense::AtLeast, |v| v[0]);
        assert!(fine.worst_point[0] < 100.0 && fine.worst_point[0] > 31.0);
    }

    #[test]
    fn check_builds_report() {
        let axes = [Axis::linspace("t", 0.0, 3.0, 301)];
        let report = Check {
            name: "sin-nonneg",
            domain: "t in [0, 3]".into(),
            sense: Sense::AtLeast,
            threshold: 0.0,
            tolerance: 1e-12,
            refine: true,
        }
        .run(&axes, |v| v[0].sin());
        assert!(report.passed);
        assert_eq!(report.coordinates, vec!["t".to_string()]);
        assert!(report.refined_worst.is_some());
    }
}
