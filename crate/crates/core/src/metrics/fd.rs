use nalgebra::DMatrix;

use super::NormSpec;
use crate::error::{Error, Result};
use crate::verify::sampling::norm;

const HESSIAN_STEP: f64 = 1e-5;
const CARTAN_STEP: f64 = 3.16e-3;

fn offset(y: &[f64], terms: &[(f64, &[f64])]) -> Vec<f64> {
    let mut p = y.to_vec();
    for (s, d) in terms {
        for (pi, di) in p.iter_mut().zip(d.iter()) {
            *pi += s * di;
        }
    }
    p
}

/// One half of the central-difference Hessian of `F^2` at `y`.
pub fn fundamental_tensor_fd(spec: &NormSpec, y: &[f64]) -> Result<DMatrix<f64>> {
    Error::check_len(spec.dim_m(), y.len())?;
    let ny = norm(y);
    if ny == 0.0 {
        return Err(Error::ZeroVector);
    }
    let h = HESSIAN_STEP * ny;
    let n = y.len();
    let basis: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = h;
            e
        })
        .collect();
    let f2 = |p: Vec<f64>| spec.value_squared(&p);
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let (ei, ej) = (basis[i].as_slice(), basis[j].as_slice());
            let d = f2(offset(y, &[(1.0, ei), (1.0, ej)]))?
                - f2(offset(y, &[(1.0, ei), (-1.0, ej)]))?
                - f2(offset(y, &[(-1.0, ei), (1.0, ej)]))?
                + f2(offset(y, &[(-1.0, ei), (-1.0, ej)]))?;
            let v = 0.5 * d / (4.0 * h * h);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(m)
}

/// `C_y(u, v, w)`: one quarter of the third directional derivative of `F^2`,
/// from the eight-point central stencil with step `3.16e-3 |y|` along unit
/// directions, rescaled by the slot norms.
pub fn cartan_tensor_fd(
    spec: &NormSpec,
    y: &[f64],
    u: &[f64],
    v: &[f64],
    w: &[f64],
) -> Result<f64> {
    for s in [y, u, v, w] {
        Error::check_len(spec.dim_m(), s.len())?;
    }
    let ny = norm(y);
    if ny == 0.0 {
        return Err(Error::ZeroVector);
    }
    let (nu, nv, nw) = (norm(u), norm(v), norm(w));
    if nu == 0.0 || nv == 0.0 || nw == 0.0 {
        return Ok(0.0);
    }
    let h = CARTAN_STEP * ny;
    let unit = |a: &[f64], n: f64| a.iter().map(|x| x * h / n).collect::<Vec<f64>>();
    let (du, dv, dw) = (unit(u, nu), unit(v, nv), unit(w, nw));
    let mut acc = 0.0;
    for su in [1.0, -1.0] {
        for sv in [1.0, -1.0] {
            for sw in [1.0, -1.0] {
                let p = offset(y, &[(su, &du), (sv, &dv), (sw, &dw)]);
                acc += su * sv * sw * spec.value_squared(&p)?;
            }
        }
    }
    Ok(0.25 * acc / (8.0 * h * h * h) * nu * nv * nw)
}
