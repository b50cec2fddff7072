//! Positively related scalar products `g = sum c^i alpha_i`, invariant
//! one-forms, the norm families `F^2 = L(F_1..F_k, beta_1..beta_l)` and the
//! finite-difference oracles for the fundamental and Cartan tensors.

mod admissibility;
mod fd;
mod forms;
mod norm;

pub use admissibility::{admissibility_sample, AdmissibilityReport, AdmissibilityViolation};
pub use fd::{cartan_tensor_fd, fundamental_tensor_fd};
pub use forms::{oneform_vector_bridge, Dual, OneFormSpec};
pub use norm::{LPartials, NormFamily, NormSpec};

use nalgebra::DMatrix;
use num_traits::{Signed, Zero};

use crate::algebra::ModuleSplit;
use crate::error::{Error, Result};
use crate::exactnum::{Rat, RatMatrix};

/// The basic scalar product `alpha_i` on block `m_i`, in the block's own
/// coordinates (the block's m positions in increasing order of listing).
#[derive(Debug, Clone, PartialEq)]
pub struct BlockForm {
    pub block: usize,
    pub matrix: RatMatrix,
}

impl BlockForm {
    pub fn new(block: usize, matrix: RatMatrix) -> Result<Self> {
        if !matrix.is_symmetric() {
            return Err(Error::InvalidStructure(format!(
                "form on block {block} is not symmetric"
            )));
        }
        if !matrix.is_positive_definite() {
            return Err(Error::InvalidStructure(format!(
                "form on block {block} is not positive definite"
            )));
        }
        Ok(BlockForm { block, matrix })
    }
}

/// The block forms of a module split, assembled into full `dim m` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockForms {
    msplit: ModuleSplit,
    forms: Vec<BlockForm>,
    full: Vec<RatMatrix>,
    full_f64: Vec<DMatrix<f64>>,
}

impl BlockForms {
    pub fn new(msplit: &ModuleSplit, forms: Vec<BlockForm>) -> Result<Self> {
        Error::check_len(msplit.n_blocks(), forms.len())?;
        let n = msplit.dim_m();
        let mut full = Vec::with_capacity(forms.len());
        for (i, f) in forms.iter().enumerate() {
            if f.block != i {
                return Err(Error::InvalidStructure(format!(
                    "form for block {} listed in position {i}",
                    f.block
                )));
            }
            let pos = msplit.block(i);
            Error::check_len(pos.len(), f.matrix.nrows())?;
            let mut m = RatMatrix::zeros(n, n);
            for (a, &pa) in pos.iter().enumerate() {
                for (b, &pb) in pos.iter().enumerate() {
                    m[(pa, pb)] = f.matrix[(a, b)].clone();
                }
            }
            full.push(m);
        }
        let full_f64 = full.iter().map(RatMatrix::to_f64).collect();
        Ok(BlockForms {
            msplit: msplit.clone(),
            forms,
            full,
            full_f64,
        })
    }

    /// Identity form on every block.
    pub fn standard(msplit: &ModuleSplit) -> Self {
        let forms = (0..msplit.n_blocks())
            .map(|i| BlockForm {
                block: i,
                matrix: RatMatrix::identity(msplit.block(i).len()),
            })
            .collect();
        Self::new(msplit, forms).expect("identity forms are valid")
    }

    pub fn n_blocks(&self) -> usize {
        self.forms.len()
    }

    pub fn dim_m(&self) -> usize {
        self.msplit.dim_m()
    }

    pub fn msplit(&self) -> &ModuleSplit {
        &self.msplit
    }

    pub fn forms(&self) -> &[BlockForm] {
        &self.forms
    }

    /// `alpha_i` extended by zero to all of m.
    pub fn alpha(&self, i: usize) -> &RatMatrix {
        &self.full[i]
    }

    pub fn alpha_f64(&self, i: usize) -> &DMatrix<f64> {
        &self.full_f64[i]
    }

    /// Gram matrix of `sum c^i alpha_i` on m.
    pub fn metric_matrix(&self, params: &MetricParams) -> Result<RatMatrix> {
        Error::check_len(self.n_blocks(), params.c.len())?;
        let n = self.dim_m();
        let mut g = RatMatrix::zeros(n, n);
        for (ci, a) in params.c.iter().zip(&self.full) {
            for r in 0..n {
                for s in 0..n {
                    if !a[(r, s)].is_zero() {
                        g[(r, s)] += ci * &a[(r, s)];
                    }
                }
            }
        }
        Ok(g)
    }
}

/// The tuple `(c^1, ..., c^s)` of a metric `sum c^i alpha_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricParams {
    pub c: Vec<Rat>,
}

impl MetricParams {
    pub fn new(c: Vec<Rat>) -> Result<Self> {
        if let Some(i) = c.iter().position(|x| !x.is_positive()) {
            return Err(Error::InvalidStructure(format!(
                "metric parameter c{} = {} must be positive",
                i + 1,
                c[i]
            )));
        }
        Ok(MetricParams { c })
    }
}

/// `sum_i c^i alpha_i(u_i, v_i)` for `u`, `v` in m coordinates.
pub fn eval_metric(forms: &BlockForms, params: &MetricParams, u: &[Rat], v: &[Rat]) -> Result<Rat> {
    forms.metric_matrix(params)?.bilinear(u, v)
}

#[cfg(test)]
mod tests;
