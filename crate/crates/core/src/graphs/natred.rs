use std::sync::Arc;

use nalgebra::DVector;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::graph::GeodesicGraph;
use super::symbolic::LinearGraphSym;
use crate::algebra::HomogeneousSpace;
use crate::error::{Error, Result};
use crate::exactnum::{Rat, RatMatrix};
use crate::metrics::{
    cartan_tensor_fd, fundamental_tensor_fd, oneform_vector_bridge, Dual, NormSpec, OneFormSpec,
};
use crate::verify::sampling::{norm, random_unit, rng, sphere_points, SampleConfig};
use crate::verify::{ResidualReport, Witness};

/// Failing basis triple of the natural-reductivity identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct F1Witness {
    /// m positions `(z, x, y)`.
    pub triple: [usize; 3],
    pub labels: [String; 3],
    /// `<[z,x]_m, y> + <x, [z,y]_m>` as an exact rational string.
    #[serde(serialize_with = "crate::exactnum::serialize_rat")]
    pub value: Rat,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct F1Report {
    pub pass: bool,
    pub witness: Option<F1Witness>,
}

/// Checks `<[z,x]_m, y> + <x, [z,y]_m> = 0` exactly on all basis triples of
/// m for the scalar product with Gram matrix `gram`.
pub fn natred_f1(space: &HomogeneousSpace, gram: &RatMatrix) -> Result<F1Report> {
    let n = space.dim_m();
    if gram.nrows() != n || gram.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: gram.nrows(),
        });
    }
    let m_idx = space.split().m_indices();
    // gz[z][x] = G [z, x]_m, so <[z,x]_m, y> = gz[z][x][y].
    let lowered: Vec<Vec<Vec<Rat>>> = (0..n)
        .map(|z| {
            (0..n)
                .map(|x| gram.mul_vec(&space.bracket_basis_m(m_idx[z], x)))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let labels = space.m_labels();
    for z in 0..n {
        for x in 0..n {
            for y in 0..n {
                let value = &lowered[z][x][y] + &lowered[z][y][x];
                if !value.is_zero() {
                    return Ok(F1Report {
                        pass: false,
                        witness: Some(F1Witness {
                            triple: [z, x, y],
                            labels: [labels[z].clone(), labels[x].clone(), labels[y].clone()],
                            value,
                        }),
                    });
                }
            }
        }
    }
    Ok(F1Report {
        pass: true,
        witness: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaWitness {
    pub z: String,
    pub u: String,
    #[serde(serialize_with = "crate::exactnum::serialize_rat")]
    pub value: Rat,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaReport {
    pub pass: bool,
    pub witness: Option<BetaWitness>,
}

/// Checks `beta([z, u]_m) = 0` exactly for every basis `z` of g and `u` of m.
/// When it holds, the one-form never enters the geodesic lemma.
pub fn beta_vanishing_check(space: &HomogeneousSpace, beta: &OneFormSpec) -> Result<BetaReport> {
    Error::check_len(space.dim_m(), beta.covector().len())?;
    let m_labels = space.m_labels();
    for z in 0..space.dim() {
        for (u, u_label) in m_labels.iter().enumerate() {
            let value = beta.apply(&space.bracket_basis_m(z, u));
            if !value.is_zero() {
                return Ok(BetaReport {
                    pass: false,
                    witness: Some(BetaWitness {
                        z: space.basis_label(z),
                        u: u_label.clone(),
                        value,
                    }),
                });
            }
        }
    }
    Ok(BetaReport {
        pass: true,
        witness: None,
    })
}

/// Largest normalized value of
/// `g_y([x,u]_m, v) + g_y(u, [x,v]_m) + 2 C_y([x,y]_m, u, v)`
/// at random unit `x, y, u, v` in m, with both tensors taken by finite
/// differences. Each sample is divided by `|g_y| (|[x,u]| + |[x,v]| + 2|[x,y]|)`.
pub fn latifi_residual(
    space: &HomogeneousSpace,
    norm_spec: &NormSpec,
    cfg: &SampleConfig,
) -> Result<ResidualReport> {
    let n = space.dim_m();
    Error::check_len(n, norm_spec.dim_m())?;
    let mut r = rng(cfg.seed);
    let tuples: Vec<[Vec<f64>; 4]> = (0..cfg.samples)
        .map(|_| std::array::from_fn(|_| random_unit(&mut r, n)))
        .collect();
    let values: Vec<(f64, Witness)> = tuples
        .par_iter()
        .map(|[x, y, u, v]| {
            let g = fundamental_tensor_fd(norm_spec, y)?;
            let xu = space.bracket_mm_numeric(x, u);
            let xv = space.bracket_mm_numeric(x, v);
            let xy = space.bracket_mm_numeric(x, y);
            let pair = |a: &[f64], b: &[f64]| {
                DVector::from_column_slice(a).dot(&(&g * DVector::from_column_slice(b)))
            };
            let value =
                pair(&xu, v) + pair(u, &xv) + 2.0 * cartan_tensor_fd(norm_spec, y, &xy, u, v)?;
            let scale = g.norm() * (norm(&xu) + norm(&xv) + 2.0 * norm(&xy));
            let res = if scale == 0.0 {
                0.0
            } else {
                value.abs() / scale
            };
            let w = Witness::at(y)
                .with("x", x.clone())
                .with("u", u.clone())
                .with("v", v.clone());
            Ok((res, w))
        })
        .collect::<Result<_>>()?;
    Ok(ResidualReport::from_samples(
        "latifi_residual",
        cfg,
        1e-4,
        values,
    ))
}

/// The closed-form graph `xi(y) = F_1(y) (L,_2 / L,_1)(y) w` for a norm with
/// one metric and one one-form, where `w` is the central shift of the vector
/// dual to the one-form. The metric must satisfy the natural-reductivity
/// identity in the given split.
pub fn prop13_graph(
    space: Arc<HomogeneousSpace>,
    norm_spec: Arc<NormSpec>,
) -> Result<GeodesicGraph> {
    if norm_spec.k() != 1 || norm_spec.l() != 1 {
        return Err(Error::HypothesesNotMet(format!(
            "need one metric and one one-form, got {} and {}",
            norm_spec.k(),
            norm_spec.l()
        )));
    }
    let f1 = natred_f1(&space, norm_spec.gram(0))?;
    if let Some(w) = f1.witness {
        return Err(Error::HypothesesNotMet(format!(
            "metric is not naturally reductive in this split: triple ({}, {}, {}) gives {}",
            w.labels[0], w.labels[1], w.labels[2], w.value
        )));
    }
    let beta = norm_spec.oneforms()[0].covector().to_vec();
    let params = norm_spec.metric_params()[0].clone();
    let v = match oneform_vector_bridge(norm_spec.block_forms(), &params, &Dual::Covector(beta))? {
        Dual::Vector(v) => v,
        Dual::Covector(_) => unreachable!("bridge maps covectors to vectors"),
    };
    match space.central_shift(&v)? {
        Some(w) => Ok(GeodesicGraph::prop13(space, norm_spec, w)),
        None => Err(Error::HypothesesNotMet(
            "no element of h differs from the dual vector by a central element".into(),
        )),
    }
}

/// The graph obtained by substituting `c^i -> C_i(y)` into a symbolic linear
/// graph. Denominators are checked at 1000 random parameter points and at
/// `C(y)` over the sample sphere.
pub fn finsler_graph_thm1(
    space: Arc<HomogeneousSpace>,
    norm_spec: Arc<NormSpec>,
    sym: &LinearGraphSym,
    cfg: &SampleConfig,
) -> Result<GeodesicGraph> {
    if sym.ctx().len() != norm_spec.block_forms().n_blocks() {
        return Err(Error::DimensionMismatch {
            expected: norm_spec.block_forms().n_blocks(),
            got: sym.ctx().len(),
        });
    }
    if sym.dim_h() != space.dim_h() {
        return Err(Error::DimensionMismatch {
            expected: space.dim_h(),
            got: sym.dim_h(),
        });
    }
    let mut extra = Vec::new();
    for p in sphere_points(space.dim_m(), cfg) {
        extra.push(norm_spec.bc_functions(&p.y)?.1);
    }
    sym.check_denominators(1000, cfg.seed, &extra)?;
    Ok(GeodesicGraph::theorem1(space, norm_spec, sym.clone()))
}
