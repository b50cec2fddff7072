use nalgebra::SymmetricEigen;
use serde::Serialize;

use super::NormSpec;
use crate::verify::sampling::{sphere_points, SampleConfig};

const EIGEN_FLOOR: f64 = -1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityViolation {
    /// `"i"`, `"ii"` or `"iii"`.
    pub condition: &'static str,
    pub y: Vec<f64>,
    pub value: f64,
}

/// Sampled check of the admissibility conditions on `L`:
/// (i) `L,_j >= 0`, (ii) `Hess L` positive semi-definite,
/// (iii) `L,_1 + ... + L,_k > 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub samples: usize,
    pub seed: u64,
    /// Smallest metric partial seen (margin of (i)).
    pub min_partial: f64,
    /// Smallest Hessian eigenvalue seen, relative to the largest in magnitude.
    pub min_eigenvalue: f64,
    /// Smallest `L,_1 + ... + L,_k` seen (margin of (iii)).
    pub min_partial_sum: f64,
    pub violations: Vec<AdmissibilityViolation>,
}

impl AdmissibilityReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn admissibility_sample(spec: &NormSpec, samples: usize, seed: u64) -> AdmissibilityReport {
    let pts = sphere_points(spec.dim_m(), &SampleConfig::new(samples, seed));
    let mut report = AdmissibilityReport {
        samples: pts.len(),
        seed,
        min_partial: f64::INFINITY,
        min_eigenvalue: f64::INFINITY,
        min_partial_sum: f64::INFINITY,
        violations: Vec::new(),
    };
    for p in &pts {
        let Ok(lp) = spec.l_value_and_partials(&p.y) else {
            continue;
        };
        let min_p = lp.metric.iter().cloned().fold(f64::INFINITY, f64::min);
        report.min_partial = report.min_partial.min(min_p);
        if min_p < 0.0 {
            report.violations.push(AdmissibilityViolation {
                condition: "i",
                y: p.y.clone(),
                value: min_p,
            });
        }
        let hess = spec.l_hessian(&lp.f, &lp.beta);
        let eig = SymmetricEigen::new(hess).eigenvalues;
        let scale = eig.iter().fold(1.0f64, |a, e| a.max(e.abs()));
        let min_e = eig.iter().cloned().fold(f64::INFINITY, f64::min) / scale;
        report.min_eigenvalue = report.min_eigenvalue.min(min_e);
        if min_e < EIGEN_FLOOR {
            report.violations.push(AdmissibilityViolation {
                condition: "ii",
                y: p.y.clone(),
                value: min_e,
            });
        }
        let sum: f64 = lp.metric.iter().sum();
        report.min_partial_sum = report.min_partial_sum.min(sum);
        if sum <= 0.0 {
            report.violations.push(AdmissibilityViolation {
                condition: "iii",
                y: p.y.clone(),
                value: sum,
            });
        }
    }
    report
}
