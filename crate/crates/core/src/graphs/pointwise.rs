use nalgebra::{DMatrix, DVector};

use crate::algebra::HomogeneousSpace;
use crate::error::{Error, Result};
use crate::metrics::NormSpec;

const ACCEPT: f64 = 1e-9;
const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PointwiseSolution {
    pub xi: Vec<f64>,
    /// Largest `|g_y(y, [y + xi, u]_m)|` over the m basis.
    pub residual: f64,
    /// Numerical rank of the system; `dim h` means `xi` is unique.
    pub rank: usize,
}

/// The system `A xi = b` of the geodesic lemma at `y`: row `u` reads
/// `sum_j xi_j g_y(y, [h_j, u]_m) = -g_y(y, [y, u]_m)`.
pub fn pointwise_system(
    space: &HomogeneousSpace,
    norm: &NormSpec,
    y: &[f64],
) -> Result<(DMatrix<f64>, DVector<f64>)> {
    Error::check_len(space.dim_m(), y.len())?;
    let ell = DVector::from_vec(norm.gy_covector(y)?);
    let (n, nh) = (space.dim_m(), space.dim_h());
    let mut a = DMatrix::zeros(n, nh);
    let mut b = DVector::zeros(n);
    let zero_h = vec![0.0; nh];
    for u in 0..n {
        for j in 0..nh {
            a[(u, j)] = ell.dot(&space.ad_h_on_m(j).column(u));
        }
        let yu = space.geodesic_bracket(y, &zero_h, u);
        b[u] = -ell.dot(&DVector::from_vec(yu));
    }
    Ok((a, b))
}

/// Minimum-norm least-squares geodesic vector over `y`, accepted when the
/// residual is at most `1e-9 (1 + |y|^2)`.
pub fn pointwise_graph(
    space: &HomogeneousSpace,
    norm: &NormSpec,
    y: &[f64],
) -> Result<PointwiseSolution> {
    let (a, b) = pointwise_system(space, norm, y)?;
    let ny2: f64 = y.iter().map(|x| x * x).sum();
    let nh = space.dim_h();
    let (xi, rank) = if nh == 0 {
        (DVector::zeros(0), 0)
    } else {
        let svd = a.clone().svd(true, true);
        let smax = svd.singular_values.max();
        let ell_scale = b.amax().max(a.amax());
        let tol = RANK_TOL * smax.max(ell_scale);
        let rank = svd.singular_values.iter().filter(|s| **s > tol).count();
        let xi = if rank == 0 {
            DVector::zeros(nh)
        } else {
            svd.solve(&b, tol)
                .map_err(|e| Error::SelfCheck(e.to_string()))?
        };
        (xi, rank)
    };
    let residual = (&a * &xi - &b).amax();
    if residual > ACCEPT * (1.0 + ny2) {
        return Err(Error::Unsolvable {
            y: y.to_vec(),
            residual,
        });
    }
    Ok(PointwiseSolution {
        xi: xi.as_slice().to_vec(),
        residual,
        rank,
    })
}
