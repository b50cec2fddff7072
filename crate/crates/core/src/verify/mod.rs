//! Residual checks that turn the geodesic lemma, homogeneity and
//! equivariance into quantitative reports.

pub mod sampling;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Subspace;
use crate::error::{Error, Result};
use crate::graphs::GeodesicGraph;
use crate::metrics::{fundamental_tensor_fd, NormSpec};
use sampling::{norm, random_unit, rng, sphere_points, SampleConfig};

pub const GEODESIC_THRESHOLD: f64 = 1e-9;
pub const LINEARITY_THRESHOLD: f64 = 1e-8;
pub const EQUIVARIANCE_THRESHOLD: f64 = 1e-8;
pub const HOMOGENEITY_THRESHOLD: f64 = 1e-10;
pub const FUNDAMENTAL_THRESHOLD: f64 = 1e-5;
pub const HOMOGENEITY_SCALES: [f64; 3] = [0.5, 2.0, 10.0];

/// The point where a check attains its maximum, plus whatever else is needed
/// to reproduce the value (a basis index, a group element, a scale).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub y: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aux: Vec<(String, Vec<f64>)>,
}

impl Witness {
    pub fn at(y: &[f64]) -> Self {
        Witness {
            y: y.to_vec(),
            aux: Vec::new(),
        }
    }

    pub fn with(mut self, name: &str, v: Vec<f64>) -> Self {
        self.aux.push((name.to_string(), v));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub check: String,
    pub samples: usize,
    pub seed: u64,
    pub max_residual: f64,
    pub witness: Option<Witness>,
    pub threshold: f64,
    pub pass: bool,
}

impl ResidualReport {
    /// Folds per-sample `(residual, witness)` pairs into a report. The first
    /// sample attaining the maximum wins, so the outcome does not depend on
    /// how the samples were scheduled.
    pub fn from_samples(
        check: &str,
        cfg: &SampleConfig,
        threshold: f64,
        values: Vec<(f64, Witness)>,
    ) -> Self {
        let samples = values.len();
        let mut best: Option<(f64, Witness)> = None;
        for (r, w) in values {
            let worse = match &best {
                None => true,
                Some((b, _)) => r > *b || (r.is_nan() && !b.is_nan()),
            };
            if worse {
                best = Some((r, w));
            }
        }
        let (max_residual, witness) = match best {
            Some((r, w)) => (r, Some(w)),
            None => (0.0, None),
        };
        ResidualReport {
            check: check.to_string(),
            samples,
            seed: cfg.seed,
            max_residual,
            witness,
            threshold,
            pass: max_residual <= threshold,
        }
    }
}

fn eval_points<T, F>(points: &[Vec<f64>], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&[f64]) -> Result<T> + Sync,
{
    points.par_iter().map(|y| f(y)).collect()
}

fn unit_points(dim: usize, cfg: &SampleConfig) -> Vec<Vec<f64>> {
    sphere_points(dim, cfg).into_iter().map(|p| p.y).collect()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `max |g_y(y, [y + xi(y), u]_m)| / (1 + |y|^2)` over samples and basis `u`.
/// Points where a pointwise graph finds no geodesic vector contribute the
/// residual of the failed solve.
pub fn geodesic_residual(graph: &GeodesicGraph, cfg: &SampleConfig) -> Result<ResidualReport> {
    let space = graph.space();
    let norm_spec = graph.norm();
    let points = unit_points(space.dim_m(), cfg);
    let values = eval_points(&points, |y| {
        let ny2: f64 = y.iter().map(|x| x * x).sum();
        let xi = match graph.eval(y) {
            Ok(xi) => xi,
            Err(Error::Unsolvable { residual, .. }) => {
                return Ok((
                    residual / (1.0 + ny2),
                    Witness::at(y).with("unsolvable", vec![]),
                ));
            }
            Err(e) => return Err(e),
        };
        let ell = norm_spec.gy_covector(y)?;
        let mut worst = (0.0, 0usize);
        for u in 0..space.dim_m() {
            let v = space.geodesic_bracket(y, &xi, u);
            let r = ell.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>().abs() / (1.0 + ny2);
            if r > worst.0 {
                worst = (r, u);
            }
        }
        Ok((
            worst.0,
            Witness::at(y)
                .with("xi", xi)
                .with("u", vec![worst.1 as f64]),
        ))
    })?;
    Ok(ResidualReport::from_samples(
        "geodesic_residual",
        cfg,
        GEODESIC_THRESHOLD,
        values,
    ))
}

/// Best linear fit `xi(y) ~ A y` over the sampled points and its worst
/// deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearityReport {
    /// Row-major `dim h x dim m` fit.
    pub fit: Vec<Vec<f64>>,
    pub deviation: f64,
    pub witness: Option<Witness>,
    /// Points used; undetermined pointwise values are left out.
    pub samples: usize,
    pub seed: u64,
    pub threshold: f64,
    pub linear: bool,
}

pub fn linearity_probe(graph: &GeodesicGraph, cfg: &SampleConfig) -> Result<LinearityReport> {
    let space = graph.space();
    let (n, nh) = (space.dim_m(), space.dim_h());
    let points = unit_points(n, cfg);
    let values = eval_points(&points, |y| graph.eval_detailed(y))?;
    let used: Vec<(&Vec<f64>, Vec<f64>)> = points
        .iter()
        .zip(values)
        .filter(|(_, v)| v.determined)
        .map(|(y, v)| (y, v.xi))
        .collect();
    let rows = used.len();
    let ymat = DMatrix::from_fn(rows, n, |i, r| used[i].0[r]);
    let ximat = DMatrix::from_fn(rows, nh, |i, j| used[i].1[j]);
    if rows < n * nh.max(1) {
        let rank = if rows == 0 { 0 } else { ymat.rank(1e-10) };
        return Err(Error::RankDeficient { rank, needed: n });
    }
    let svd = ymat.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let rank = svd
        .singular_values
        .iter()
        .filter(|s| **s > 1e-10 * smax)
        .count();
    if rank < n {
        return Err(Error::RankDeficient { rank, needed: n });
    }
    let at = if nh == 0 {
        DMatrix::zeros(n, 0)
    } else {
        svd.solve(&ximat, 1e-12 * smax)
            .map_err(|e| Error::SelfCheck(e.to_string()))?
    };
    let mut deviation = 0.0;
    let mut witness = None;
    for (y, xi) in &used {
        let pred = at.transpose() * DVector::from_column_slice(y);
        let d = dist(pred.as_slice(), xi) / (1.0 + norm(y));
        if witness.is_none() || d > deviation {
            deviation = d;
            witness = Some(
                Witness::at(y)
                    .with("xi", xi.clone())
                    .with("fit", pred.as_slice().to_vec()),
            );
        }
    }
    let fit = (0..nh)
        .map(|j| (0..n).map(|r| at[(r, j)]).collect())
        .collect();
    Ok(LinearityReport {
        fit,
        deviation,
        witness,
        samples: rows,
        seed: cfg.seed,
        threshold: LINEARITY_THRESHOLD,
        linear: deviation <= LINEARITY_THRESHOLD,
    })
}

/// `max |xi(Ad_m y) - Ad_h xi(y)| / (1 + |y|)` with `Ad = exp(t ad w)` for
/// random unit `w` in h and `t` in `[-2, 2]`.
pub fn equivariance_residual(graph: &GeodesicGraph, cfg: &SampleConfig) -> Result<ResidualReport> {
    let space = graph.space();
    let nh = space.dim_h();
    let points = unit_points(space.dim_m(), cfg);
    if nh == 0 {
        let values = points.iter().map(|y| (0.0, Witness::at(y))).collect();
        return Ok(ResidualReport::from_samples(
            "equivariance_residual",
            cfg,
            EQUIVARIANCE_THRESHOLD,
            values,
        ));
    }
    let mut r = rng(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let elements: Vec<(Vec<f64>, f64)> = points
        .iter()
        .map(|_| (random_unit(&mut r, nh), r.random_range(-2.0..=2.0)))
        .collect();
    let tasks: Vec<(usize, Vec<f64>)> = points.iter().cloned().enumerate().collect();
    let values: Vec<(f64, Witness)> = tasks
        .par_iter()
        .map(|(i, y)| {
            let (w, t) = &elements[*i];
            let am = space.exp_ad(w, *t, Subspace::M);
            let ah = space.exp_ad(w, *t, Subspace::H);
            let yv = DVector::from_column_slice(y);
            let moved = (&am * &yv).as_slice().to_vec();
            let lhs = graph.eval(&moved)?;
            let rhs = &ah * DVector::from_vec(graph.eval(y)?);
            let d = dist(&lhs, rhs.as_slice()) / (1.0 + norm(y));
            Ok((d, Witness::at(y).with("w", w.clone()).with("t", vec![*t])))
        })
        .collect::<Result<_>>()?;
    Ok(ResidualReport::from_samples(
        "equivariance_residual",
        cfg,
        EQUIVARIANCE_THRESHOLD,
        values,
    ))
}

/// `max |xi(l y) - l xi(y)| / (1 + l |y|)` for `l` in 0.5, 2, 10.
pub fn homogeneity_residual(graph: &GeodesicGraph, cfg: &SampleConfig) -> Result<ResidualReport> {
    let points = unit_points(graph.space().dim_m(), cfg);
    let values = eval_points(&points, |y| {
        let base = graph.eval(y)?;
        let mut worst = (0.0, HOMOGENEITY_SCALES[0]);
        for lambda in HOMOGENEITY_SCALES {
            let ly: Vec<f64> = y.iter().map(|x| lambda * x).collect();
            let scaled: Vec<f64> = base.iter().map(|x| lambda * x).collect();
            let d = dist(&graph.eval(&ly)?, &scaled) / (1.0 + lambda * norm(y));
            if d > worst.0 {
                worst = (d, lambda);
            }
        }
        Ok((worst.0, Witness::at(y).with("lambda", vec![worst.1])))
    })?;
    Ok(ResidualReport::from_samples(
        "homogeneity_residual",
        cfg,
        HOMOGENEITY_THRESHOLD,
        values,
    ))
}

/// `max |xi_a(y) - xi_b(y)| / (1 + |y|)`; both graphs must live on the same
/// split. Points where either graph is not uniquely determined are skipped,
/// so `samples` counts the points actually compared.
pub fn compare_graphs(
    a: &GeodesicGraph,
    b: &GeodesicGraph,
    cfg: &SampleConfig,
    threshold: f64,
) -> Result<ResidualReport> {
    if !a.space().same_split(b.space()) {
        return Err(Error::SplitMismatch);
    }
    let points = unit_points(a.space().dim_m(), cfg);
    let values = eval_points(&points, |y| {
        let (xa, xb) = (a.eval_detailed(y)?, b.eval_detailed(y)?);
        if !(xa.determined && xb.determined) {
            return Ok(None);
        }
        let d = dist(&xa.xi, &xb.xi) / (1.0 + norm(y));
        Ok(Some((d, Witness::at(y).with("a", xa.xi).with("b", xb.xi))))
    })?;
    let values = values.into_iter().flatten().collect();
    Ok(ResidualReport::from_samples(
        "compare_graphs",
        cfg,
        threshold,
        values,
    ))
}

/// Relative gap between the closed-form `g_y(y, v)` and the contraction of
/// the finite-difference fundamental tensor, at random `(y, v)`.
pub fn fundamental_tensor_residual(
    norm_spec: &NormSpec,
    cfg: &SampleConfig,
) -> Result<ResidualReport> {
    let n = norm_spec.dim_m();
    let mut r = rng(cfg.seed);
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..cfg.samples)
        .map(|_| (random_unit(&mut r, n), random_unit(&mut r, n)))
        .collect();
    let values: Vec<(f64, Witness)> = pairs
        .par_iter()
        .map(|(y, v)| {
            let exact = norm_spec.gy_pair(y, v)?;
            let g = fundamental_tensor_fd(norm_spec, y)?;
            let fd = DVector::from_column_slice(y).dot(&(&g * DVector::from_column_slice(v)));
            let scale = exact.abs().max(g.norm()).max(f64::MIN_POSITIVE);
            Ok((
                (exact - fd).abs() / scale,
                Witness::at(y).with("v", v.clone()),
            ))
        })
        .collect::<Result<_>>()?;
    Ok(ResidualReport::from_samples(
        "fundamental_tensor",
        cfg,
        FUNDAMENTAL_THRESHOLD,
        values,
    ))
}

/// Geodesic, homogeneity and equivariance residuals of one graph.
pub fn graph_battery(graph: &GeodesicGraph, cfg: &SampleConfig) -> Result<Vec<ResidualReport>> {
    Ok(vec![
        geodesic_residual(graph, cfg)?,
        homogeneity_residual(graph, cfg)?,
        equivariance_residual(graph, cfg)?,
    ])
}

#[cfg(test)]
mod tests;
