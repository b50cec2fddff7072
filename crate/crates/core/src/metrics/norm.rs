use nalgebra::{DMatrix, DVector};
use num_traits::{One, Signed};

use super::{BlockForms, MetricParams, OneFormSpec};
use crate::error::{Error, Result};
use crate::exactnum::{rat_to_f64, rats_to_f64, Rat, RatMatrix};

/// The built-in closed-form families for `L`.
#[derive(Debug, Clone, PartialEq)]
pub enum NormFamily {
    /// `L = (sum F_j^q)^(2/q)`.
    QPower { q: Rat, metrics: Vec<MetricParams> },
    /// `L = sum a_j F_j^2 + sum b_m beta_m^2`.
    WeightedSquares {
        weights: Vec<Rat>,
        metrics: Vec<MetricParams>,
        form_weights: Vec<Rat>,
        forms: Vec<OneFormSpec>,
    },
    /// `L = (F_1 + beta)^2`.
    Randers {
        metric: MetricParams,
        form: OneFormSpec,
    },
}

impl NormFamily {
    pub fn name(&self) -> &'static str {
        match self {
            NormFamily::QPower { .. } => "qpower",
            NormFamily::WeightedSquares { .. } => "weighted_squares",
            NormFamily::Randers { .. } => "randers",
        }
    }

    pub fn metrics(&self) -> Vec<&MetricParams> {
        match self {
            NormFamily::QPower { metrics, .. } | NormFamily::WeightedSquares { metrics, .. } => {
                metrics.iter().collect()
            }
            NormFamily::Randers { metric, .. } => vec![metric],
        }
    }

    pub fn oneforms(&self) -> Vec<&OneFormSpec> {
        match self {
            NormFamily::QPower { .. } => vec![],
            NormFamily::WeightedSquares { forms, .. } => forms.iter().collect(),
            NormFamily::Randers { form, .. } => vec![form],
        }
    }

    fn map_forms(&self, f: impl Fn(&OneFormSpec) -> OneFormSpec) -> NormFamily {
        match self {
            NormFamily::QPower { .. } => self.clone(),
            NormFamily::WeightedSquares {
                weights,
                metrics,
                form_weights,
                forms,
            } => NormFamily::WeightedSquares {
                weights: weights.clone(),
                metrics: metrics.clone(),
                form_weights: form_weights.clone(),
                forms: forms.iter().map(f).collect(),
            },
            NormFamily::Randers { metric, form } => NormFamily::Randers {
                metric: metric.clone(),
                form: f(form),
            },
        }
    }
}

/// Value and first partials of `L` at `(F_1(y)..F_k(y), beta_1(y)..beta_l(y))`.
#[derive(Debug, Clone, PartialEq)]
pub struct LPartials {
    pub l: f64,
    /// `L,_j` for the metric arguments.
    pub metric: Vec<f64>,
    /// `L,_m` for the one-form arguments.
    pub form: Vec<f64>,
    /// The arguments `F_j(y)`.
    pub f: Vec<f64>,
    /// The arguments `beta_m(y)`.
    pub beta: Vec<f64>,
}

/// A norm `F = sqrt(L(sqrt g_1, ..., sqrt g_k, beta_1, ..., beta_l))` over a
/// shared set of block forms.
#[derive(Debug, Clone)]
pub struct NormSpec {
    family: NormFamily,
    forms: BlockForms,
    gram: Vec<RatMatrix>,
    gram_f64: Vec<DMatrix<f64>>,
    /// `c[j][i]`: coefficient of `alpha_i` in `g_j`.
    c: Vec<Vec<f64>>,
    beta: Vec<DVector<f64>>,
    q: f64,
    weights: Vec<f64>,
    form_weights: Vec<f64>,
}

impl NormSpec {
    pub fn new(forms: BlockForms, family: NormFamily) -> Result<Self> {
        let metrics = family.metrics();
        if metrics.is_empty() {
            return Err(Error::InvalidNorm("at least one metric is required".into()));
        }
        for m in &metrics {
            Error::check_len(forms.n_blocks(), m.c.len())?;
        }
        for b in family.oneforms() {
            Error::check_len(forms.dim_m(), b.covector().len())?;
        }
        let gram: Vec<RatMatrix> = metrics
            .iter()
            .map(|m| forms.metric_matrix(m))
            .collect::<Result<_>>()?;
        let mut q = 2.0;
        let mut weights = vec![1.0; metrics.len()];
        let mut form_weights = vec![];
        match &family {
            NormFamily::QPower { q: qr, .. } => {
                if !qr.is_positive() {
                    return Err(Error::InvalidNorm(format!(
                        "exponent q = {qr} must be positive"
                    )));
                }
                q = rat_to_f64(qr);
            }
            NormFamily::WeightedSquares {
                weights: w,
                metrics,
                form_weights: b,
                forms: fs,
            } => {
                Error::check_len(metrics.len(), w.len())?;
                Error::check_len(fs.len(), b.len())?;
                if w.iter().any(|x| !x.is_positive()) {
                    return Err(Error::InvalidNorm("metric weights must be positive".into()));
                }
                if b.iter().any(|x| x.is_negative()) {
                    return Err(Error::InvalidNorm(
                        "form weights must be nonnegative".into(),
                    ));
                }
                weights = rats_to_f64(w);
                form_weights = rats_to_f64(b);
            }
            NormFamily::Randers { form, .. } => {
                // |beta|_g^2 = beta G^{-1} beta must stay below 1.
                let v = gram[0]
                    .solve(form.covector())?
                    .ok_or_else(|| Error::InvalidNorm("singular metric".into()))?;
                let n2 = form.apply(&v);
                if n2 >= Rat::one() {
                    return Err(Error::InvalidNorm(format!(
                        "one-form has metric norm^2 = {n2}, needs < 1 for a positive norm"
                    )));
                }
            }
        }
        let c = metrics.iter().map(|m| rats_to_f64(&m.c)).collect();
        let gram_f64 = gram.iter().map(RatMatrix::to_f64).collect();
        let beta = family
            .oneforms()
            .iter()
            .map(|b| DVector::from_vec(rats_to_f64(b.covector())))
            .collect();
        Ok(NormSpec {
            family,
            forms,
            gram,
            gram_f64,
            c,
            beta,
            q,
            weights,
            form_weights,
        })
    }

    pub fn family(&self) -> &NormFamily {
        &self.family
    }

    pub fn block_forms(&self) -> &BlockForms {
        &self.forms
    }

    pub fn dim_m(&self) -> usize {
        self.forms.dim_m()
    }

    /// Number of metric arguments `k`.
    pub fn k(&self) -> usize {
        self.gram.len()
    }

    /// Number of one-form arguments `l`.
    pub fn l(&self) -> usize {
        self.beta.len()
    }

    pub fn metric_params(&self) -> Vec<&MetricParams> {
        self.family.metrics()
    }

    pub fn oneforms(&self) -> Vec<&OneFormSpec> {
        self.family.oneforms()
    }

    /// Gram matrix of the component metric `g_j`.
    pub fn gram(&self, j: usize) -> &RatMatrix {
        &self.gram[j]
    }

    /// The same norm with every one-form replaced by zero (`F_0`).
    pub fn with_forms_zeroed(&self) -> NormSpec {
        let n = self.dim_m();
        let family = self.family.map_forms(|_| OneFormSpec::zero(n));
        NormSpec::new(self.forms.clone(), family).expect("zero forms keep a valid norm")
    }

    /// The same norm with the one-forms selected by `keep[m] == false`
    /// replaced by zero.
    pub fn with_forms_filtered(&self, keep: &[bool]) -> Result<NormSpec> {
        Error::check_len(self.l(), keep.len())?;
        let n = self.dim_m();
        let idx = std::cell::Cell::new(0usize);
        let family = self.family.map_forms(|f| {
            let i = idx.get();
            idx.set(i + 1);
            if keep[i] {
                f.clone()
            } else {
                OneFormSpec::zero(n)
            }
        });
        NormSpec::new(self.forms.clone(), family)
    }

    /// `F^2` as an exact quadratic form when the norm is Riemannian.
    pub fn quadratic_form(&self) -> Option<RatMatrix> {
        match &self.family {
            NormFamily::WeightedSquares {
                weights,
                form_weights,
                forms,
                ..
            } => {
                let n = self.dim_m();
                let mut q = RatMatrix::zeros(n, n);
                for (w, g) in weights.iter().zip(&self.gram) {
                    for r in 0..n {
                        for s in 0..n {
                            q[(r, s)] += w * &g[(r, s)];
                        }
                    }
                }
                for (b, f) in form_weights.iter().zip(forms) {
                    let cv = f.covector();
                    for r in 0..n {
                        for s in 0..n {
                            q[(r, s)] += b * &cv[r] * &cv[s];
                        }
                    }
                }
                Some(q)
            }
            NormFamily::QPower { metrics, .. } if metrics.len() == 1 => Some(self.gram[0].clone()),
            NormFamily::Randers { form, .. } if form.is_zero() => Some(self.gram[0].clone()),
            _ => None,
        }
    }

    /// `(F_j(y), beta_m(y))`.
    pub fn arguments(&self, y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        Error::check_len(self.dim_m(), y.len())?;
        if y.iter().all(|x| *x == 0.0) {
            return Err(Error::ZeroVector);
        }
        let yv = DVector::from_column_slice(y);
        let f = self
            .gram_f64
            .iter()
            .map(|g| yv.dot(&(g * &yv)).max(0.0).sqrt())
            .collect();
        let b = self.beta.iter().map(|b| b.dot(&yv)).collect();
        Ok((f, b))
    }

    /// `L` and its first partials as functions of the arguments.
    pub fn l_from_arguments(&self, f: &[f64], b: &[f64]) -> (f64, Vec<f64>, Vec<f64>) {
        match &self.family {
            NormFamily::QPower { .. } => {
                let q = self.q;
                let s: f64 = f.iter().map(|x| x.powf(q)).sum();
                let n = s.powf(1.0 / q);
                let dl = f
                    .iter()
                    .map(|x| 2.0 * x.powf(q - 1.0) * n.powf(2.0 - q))
                    .collect();
                (n * n, dl, vec![])
            }
            NormFamily::WeightedSquares { .. } => {
                let l = f
                    .iter()
                    .zip(&self.weights)
                    .map(|(x, a)| a * x * x)
                    .chain(b.iter().zip(&self.form_weights).map(|(x, w)| w * x * x))
                    .sum();
                let dm = f
                    .iter()
                    .zip(&self.weights)
                    .map(|(x, a)| 2.0 * a * x)
                    .collect();
                let df = b
                    .iter()
                    .zip(&self.form_weights)
                    .map(|(x, w)| 2.0 * w * x)
                    .collect();
                (l, dm, df)
            }
            NormFamily::Randers { .. } => {
                let s = f[0] + b[0];
                (s * s, vec![2.0 * s], vec![2.0 * s])
            }
        }
    }

    /// Hessian of `L` in its `k + l` arguments.
    pub fn l_hessian(&self, f: &[f64], b: &[f64]) -> DMatrix<f64> {
        let k = f.len();
        let n = k + b.len();
        match &self.family {
            NormFamily::QPower { .. } => {
                let q = self.q;
                let s: f64 = f.iter().map(|x| x.powf(q)).sum();
                let nn = s.powf(1.0 / q);
                DMatrix::from_fn(n, n, |i, j| {
                    let mut h = 2.0
                        * (2.0 - q)
                        * f[i].powf(q - 1.0)
                        * f[j].powf(q - 1.0)
                        * nn.powf(2.0 - 2.0 * q);
                    if i == j {
                        h += 2.0 * (q - 1.0) * f[i].powf(q - 2.0) * nn.powf(2.0 - q);
                    }
                    h
                })
            }
            NormFamily::WeightedSquares { .. } => {
                let d: Vec<f64> = self
                    .weights
                    .iter()
                    .chain(&self.form_weights)
                    .map(|w| 2.0 * w)
                    .collect();
                DMatrix::from_diagonal(&DVector::from_vec(d))
            }
            NormFamily::Randers { .. } => DMatrix::from_element(n, n, 2.0),
        }
    }

    pub fn l_value_and_partials(&self, y: &[f64]) -> Result<LPartials> {
        let (f, beta) = self.arguments(y)?;
        let (l, metric, form) = self.l_from_arguments(&f, &beta);
        Ok(LPartials {
            l,
            metric,
            form,
            f,
            beta,
        })
    }

    /// `F(y)`.
    pub fn value(&self, y: &[f64]) -> Result<f64> {
        Ok(self.l_value_and_partials(y)?.l.max(0.0).sqrt())
    }

    pub fn value_squared(&self, y: &[f64]) -> Result<f64> {
        Ok(self.l_value_and_partials(y)?.l)
    }

    /// `B_j = L,_j / (2 F_j)` and `C_i = sum_j B_j c_j^i`.
    pub fn bc_functions(&self, y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let p = self.l_value_and_partials(y)?;
        self.bc_from_partials(&p)
    }

    fn bc_from_partials(&self, p: &LPartials) -> Result<(Vec<f64>, Vec<f64>)> {
        let mut bs = Vec::with_capacity(self.k());
        for (dl, f) in p.metric.iter().zip(&p.f) {
            if *f == 0.0 {
                return Err(Error::ZeroVector);
            }
            bs.push(dl / (2.0 * f));
        }
        let s = self.forms.n_blocks();
        let cs = (0..s)
            .map(|i| bs.iter().zip(&self.c).map(|(b, cj)| b * cj[i]).sum())
            .collect();
        Ok((bs, cs))
    }

    /// The covector `g_y(y, .)`:
    /// `sum_i C_i alpha_i(y, .) + 1/2 sum_m L,_m beta_m`.
    pub fn gy_covector(&self, y: &[f64]) -> Result<Vec<f64>> {
        let p = self.l_value_and_partials(y)?;
        let (_, cs) = self.bc_from_partials(&p)?;
        let yv = DVector::from_column_slice(y);
        let mut out = DVector::<f64>::zeros(y.len());
        for (i, ci) in cs.iter().enumerate() {
            out += self.forms.alpha_f64(i) * &yv * *ci;
        }
        for (b, dl) in self.beta.iter().zip(&p.form) {
            out += b * (0.5 * dl);
        }
        Ok(out.as_slice().to_vec())
    }

    /// `g_y(y, v)`.
    pub fn gy_pair(&self, y: &[f64], v: &[f64]) -> Result<f64> {
        Error::check_len(self.dim_m(), v.len())?;
        let l = self.gy_covector(y)?;
        Ok(l.iter().zip(v).map(|(a, b)| a * b).sum())
    }

    /// `g_j(u, v)` in floating point.
    pub fn metric_pair(&self, j: usize, u: &[f64], v: &[f64]) -> f64 {
        let uv = DVector::from_column_slice(u);
        let vv = DVector::from_column_slice(v);
        uv.dot(&(&self.gram_f64[j] * vv))
    }

    pub fn coefficients(&self, j: usize) -> &[f64] {
        &self.c[j]
    }
}

impl PartialEq for NormSpec {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.forms == other.forms
    }
}
