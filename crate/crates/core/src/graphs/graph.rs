use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::pointwise::pointwise_graph;
use super::symbolic::LinearGraphSym;
use crate::algebra::HomogeneousSpace;
use crate::error::{Error, Result};
use crate::exactnum::{rats_to_f64, Rat};
use crate::metrics::NormSpec;

type Evaluator = Arc<dyn Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Linear {
        exact: Vec<Vec<Rat>>,
        k: DMatrix<f64>,
        params: Option<Vec<Rat>>,
    },
    Theorem1 {
        sym: LinearGraphSym,
    },
    Prop13 {
        w: Vec<Rat>,
        w_f64: Vec<f64>,
    },
    Pointwise,
    Custom {
        name: String,
        f: Evaluator,
    },
}

/// How a graph was produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    /// A fixed linear map; `params` is the parameter tuple it came from, if any.
    Linear {
        params: Option<Vec<Rat>>,
    },
    /// Symbolic linear graph with `c^i` replaced by `C_i(y)`.
    Theorem1,
    /// `xi = F_1 (L,_2 / L,_1) w` for the central-shift vector `w`.
    Prop13 {
        w: Vec<Rat>,
    },
    /// Minimum-norm least-squares solution of the geodesic lemma at each `y`.
    Pointwise,
    Custom(String),
}

impl Provenance {
    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::Linear { .. } => "linear",
            Provenance::Theorem1 => "theorem1",
            Provenance::Prop13 { .. } => "central_shift",
            Provenance::Pointwise => "pointwise",
            Provenance::Custom(_) => "custom",
        }
    }
}

/// A value of a graph together with whether it is the only geodesic vector
/// over `y` (false where the pointwise system is rank deficient).
#[derive(Debug, Clone, PartialEq)]
pub struct GraphValue {
    pub xi: Vec<f64>,
    pub determined: bool,
}

/// An evaluable map `xi: m -> h`, tied to the space (and split) it lives in
/// and to the norm whose geodesics it describes.
#[derive(Clone)]
pub struct GeodesicGraph {
    space: Arc<HomogeneousSpace>,
    norm: Arc<NormSpec>,
    kind: Kind,
}

impl fmt::Debug for GeodesicGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeodesicGraph")
            .field("provenance", &self.provenance())
            .field("m", &self.space.m_labels())
            .finish()
    }
}

impl GeodesicGraph {
    /// The linear graph `xi^j = sum_r k[j][r] y_r`.
    pub fn linear(
        space: Arc<HomogeneousSpace>,
        norm: Arc<NormSpec>,
        exact: Vec<Vec<Rat>>,
        params: Option<Vec<Rat>>,
    ) -> Result<Self> {
        Error::check_len(space.dim_h(), exact.len())?;
        for row in &exact {
            Error::check_len(space.dim_m(), row.len())?;
        }
        let (nh, n) = (space.dim_h(), space.dim_m());
        let k = DMatrix::from_fn(nh, n, |j, r| rats_to_f64(&exact[j][r..=r])[0]);
        Ok(GeodesicGraph {
            space,
            norm,
            kind: Kind::Linear { exact, k, params },
        })
    }

    /// The fixed-parameter specialization of a symbolic graph.
    pub fn linear_fixed(
        space: Arc<HomogeneousSpace>,
        norm: Arc<NormSpec>,
        sym: &LinearGraphSym,
        c: &[Rat],
    ) -> Result<Self> {
        let exact = sym.at_rat(c)?;
        Self::linear(space, norm, exact, Some(c.to_vec()))
    }

    pub(crate) fn theorem1(
        space: Arc<HomogeneousSpace>,
        norm: Arc<NormSpec>,
        sym: LinearGraphSym,
    ) -> Self {
        GeodesicGraph {
            space,
            norm,
            kind: Kind::Theorem1 { sym },
        }
    }

    pub(crate) fn prop13(space: Arc<HomogeneousSpace>, norm: Arc<NormSpec>, w: Vec<Rat>) -> Self {
        let w_f64 = rats_to_f64(&w);
        GeodesicGraph {
            space,
            norm,
            kind: Kind::Prop13 { w, w_f64 },
        }
    }

    pub fn pointwise(space: Arc<HomogeneousSpace>, norm: Arc<NormSpec>) -> Self {
        GeodesicGraph {
            space,
            norm,
            kind: Kind::Pointwise,
        }
    }

    /// An arbitrary evaluator, e.g. a deliberately perturbed graph.
    pub fn custom(
        space: Arc<HomogeneousSpace>,
        norm: Arc<NormSpec>,
        name: impl Into<String>,
        f: impl Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync + 'static,
    ) -> Self {
        GeodesicGraph {
            space,
            norm,
            kind: Kind::Custom {
                name: name.into(),
                f: Arc::new(f),
            },
        }
    }

    pub fn space(&self) -> &Arc<HomogeneousSpace> {
        &self.space
    }

    pub fn norm(&self) -> &Arc<NormSpec> {
        &self.norm
    }

    pub fn provenance(&self) -> Provenance {
        match &self.kind {
            Kind::Linear { params, .. } => Provenance::Linear {
                params: params.clone(),
            },
            Kind::Theorem1 { .. } => Provenance::Theorem1,
            Kind::Prop13 { w, .. } => Provenance::Prop13 { w: w.clone() },
            Kind::Pointwise => Provenance::Pointwise,
            Kind::Custom { name, .. } => Provenance::Custom(name.clone()),
        }
    }

    /// Exact coefficients when the graph is a fixed linear map.
    pub fn linear_coefficients(&self) -> Option<&[Vec<Rat>]> {
        match &self.kind {
            Kind::Linear { exact, .. } => Some(exact),
            _ => None,
        }
    }

    pub fn symbolic(&self) -> Option<&LinearGraphSym> {
        match &self.kind {
            Kind::Theorem1 { sym } => Some(sym),
            _ => None,
        }
    }

    pub fn eval(&self, y: &[f64]) -> Result<Vec<f64>> {
        Ok(self.eval_detailed(y)?.xi)
    }

    pub fn eval_detailed(&self, y: &[f64]) -> Result<GraphValue> {
        Error::check_len(self.space.dim_m(), y.len())?;
        if y.iter().all(|x| *x == 0.0) {
            return Err(Error::ZeroVector);
        }
        let yv = DVector::from_column_slice(y);
        let xi = match &self.kind {
            Kind::Linear { k, .. } => (k * &yv).as_slice().to_vec(),
            Kind::Theorem1 { sym } => {
                let (_, cs) = self.norm.bc_functions(y)?;
                (sym.at_f64(&cs)? * &yv).as_slice().to_vec()
            }
            Kind::Prop13 { w_f64, .. } => {
                let p = self.norm.l_value_and_partials(y)?;
                let s = p.f[0] * p.form[0] / p.metric[0];
                w_f64.iter().map(|w| s * w).collect()
            }
            Kind::Pointwise => {
                let sol = pointwise_graph(&self.space, &self.norm, y)?;
                return Ok(GraphValue {
                    xi: sol.xi,
                    determined: sol.rank == self.space.dim_h(),
                });
            }
            Kind::Custom { f, .. } => f(y)?,
        };
        Ok(GraphValue {
            xi,
            determined: true,
        })
    }
}
