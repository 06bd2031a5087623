//! Structured outcome of a one-sided numerical check.

use serde::Serialize;

/// Direction of a one-sided bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    /// Every value must be `>= threshold - tolerance`; the worst value is the minimum.
    AtLeast,
    /// Every value must be `<= threshold + tolerance`; the worst value is the maximum.
    AtMost,
}

impl Sense {
    /// True when `a` is strictly worse than `b`. NaN is worse than anything.
    pub fn is_worse(self, a: f64, b: f64) -> bool {
        match (a.is_nan(), b.is_nan()) {
            (true, false) => true,
            (_, true) => false,
            _ => match self {
                Sense::AtLeast => a < b,
                Sense::AtMost => a > b,
            },
        }
    }

    pub fn satisfied(self, value: f64, threshold: f64, tolerance: f64) -> bool {
        match self {
            Sense::AtLeast => value >= threshold - tolerance,
            Sense::AtMost => value <= threshold + tolerance,
        }
    }

    /// How far `refined` moved past `grid` in the bad direction (never negative).
    pub fn worsening(self, grid: f64, refined: f64) -> f64 {
        match self {
            Sense::AtLeast => (grid - refined).max(0.0),
            Sense::AtMost => (refined - grid).max(0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub domain_description: String,
    pub num_points: usize,
    pub worst_value: f64,
    /// Names of the `worst_point` coordinates.
    pub coordinates: Vec<String>,
    pub worst_point: Vec<f64>,
    pub sense: Sense,
    pub threshold: f64,
    pub tolerance: f64,
    /// Worst value after local refinement around `worst_point`, if run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refined_worst: Option<f64>,
    pub passed: bool,
}

impl VerificationReport {
    /// Builds a report; `passed` is derived from the bound.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        domain_description: impl Into<String>,
        coordinates: &[&str],
        num_points: usize,
        worst_value: f64,
        worst_point: Vec<f64>,
        sense: Sense,
        threshold: f64,
        tolerance: f64,
    ) -> Self {
        let passed = sense.satisfied(worst_value, threshold, tolerance);
        Self {
            name: name.into(),
            domain_description: domain_description.into(),
            num_points,
            worst_value,
            coordinates: coordinates.iter().map(|s| s.to_string()).collect(),
            worst_point,
            sense,
            threshold,
            tolerance,
            refined_worst: None,
            passed,
        }
    }

    /// Records a refinement result; the report fails if the refined value breaks the bound.
    pub fn with_refinement(mut self, refined: f64, refined_point: Vec<f64>) -> Self {
        let refined_ok = self.sense.satisfied(refined, self.threshold, self.tolerance);
        if self.sense.is_worse(refined, self.worst_value) {
            self.worst_point = refined_point;
        }
        self.refined_worst = Some(refined);
        self.passed &= refined_ok;
        self
    }

    /// Worst value overall, including refinement.
    pub fn overall_worst(&self) -> f64 {
        match self.refined_worst {
            Some(r) if self.sense.is_worse(r, self.worst_value) => r,
            _ => self.worst_value,
        }
    }

    /// How much refinement worsened the grid value.
    pub fn refinement_shift(&self) -> f64 {
        self.refined_worst
            .map_or(0.0, |r| self.sense.worsening(self.worst_value, r))
    }

    /// One-line summary for logs.
    pub fn summary(&self) -> String {
        let op = match self.sense {
            Sense::AtLeast => ">=",
            Sense::AtMost => "<=",
        };
        format!(
            "[{}] {}: worst {:.3e} {} {:.3e} (tol {:.0e}, {} points)",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.overall_worst(),
            op,
            self.threshold,
            self.tolerance,
            self.num_points
        )
    }
}

/// Folds a list of reports into `(all_passed, first failing name)`.
pub fn all_passed(reports: &[VerificationReport]) -> (bool, Option<&str>) {
    match reports.iter().find(|r| !r.passed) {
        Some(r) => (false, Some(&r.name)),
        None => (true, None),
    }
}
