use num_traits::Zero;

use super::{BlockForms, MetricParams};
use crate::algebra::HomogeneousSpace;
use crate::error::{Error, Result};
use crate::exactnum::Rat;

/// An Ad(H)-invariant linear form on m, as a covector in m coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneFormSpec {
    covector: Vec<Rat>,
}

impl OneFormSpec {
    /// Checks `beta([w, u]_m) = 0` for every h-basis `w` and m-basis `u`.
    pub fn new(space: &HomogeneousSpace, covector: Vec<Rat>) -> Result<Self> {
        Error::check_len(space.dim_m(), covector.len())?;
        for &hj in space.split().h_indices() {
            for u in 0..space.dim_m() {
                let z = space.bracket_basis_m(hj, u);
                let val = dot(&covector, &z);
                if !val.is_zero() {
                    return Err(Error::InvalidStructure(format!(
                        "one-form is not Ad(H)-invariant: beta([{}, {}]_m) = {val}",
                        space.basis_label(hj),
                        space.m_labels()[u]
                    )));
                }
            }
        }
        Ok(OneFormSpec { covector })
    }

    /// The zero form on an m of the given dimension.
    pub fn zero(dim_m: usize) -> Self {
        OneFormSpec {
            covector: vec![Rat::zero(); dim_m],
        }
    }

    pub fn covector(&self) -> &[Rat] {
        &self.covector
    }

    pub fn is_zero(&self) -> bool {
        self.covector.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, k: &Rat) -> OneFormSpec {
        OneFormSpec {
            covector: self.covector.iter().map(|x| x * k).collect(),
        }
    }

    pub fn apply(&self, v: &[Rat]) -> Rat {
        dot(&self.covector, v)
    }
}

pub(crate) fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// A covector or a vector of m; `oneform_vector_bridge` maps one to the other
/// through `g(v, u) = beta(u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dual {
    Covector(Vec<Rat>),
    Vector(Vec<Rat>),
}

pub fn oneform_vector_bridge(
    forms: &BlockForms,
    params: &MetricParams,
    input: &Dual,
) -> Result<Dual> {
    let g = forms.metric_matrix(params)?;
    match input {
        Dual::Covector(beta) => {
            Error::check_len(g.nrows(), beta.len())?;
            let v = g
                .solve(beta)?
                .ok_or_else(|| Error::InvalidStructure("metric is singular".into()))?;
            Ok(Dual::Vector(v))
        }
        // g is symmetric, so g(v, .) has the coordinates of G v.
        Dual::Vector(v) => Ok(Dual::Covector(g.mul_vec(v)?)),
    }
}
