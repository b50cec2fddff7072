use nalgebra::DMatrix;
use num_traits::{One, Zero};

use super::{
    central_shift, expm, shift_split, validate, AdOperator, LieAlgebraSpec, ModuleSplit,
    ReductiveSplit,
};
use crate::error::{Error, Result};
use crate::exactnum::{rat_to_f64, Rat, RatMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subspace {
    H,
    M,
}

/// A validated Lie algebra with its reductive and module splits, plus the
/// structure constants rewritten in the split basis.
///
/// Vectors of m are always given in m coordinates (positions `0..dim m`) and
/// vectors of h in h coordinates.
#[derive(Debug, Clone)]
pub struct HomogeneousSpace {
    spec: LieAlgebraSpec,
    split: ReductiveSplit,
    msplit: ModuleSplit,
    /// `sc[a][b]`: `[s_a, s_b]` in split coordinates.
    sc: Vec<Vec<Vec<Rat>>>,
    ad_h_m: Vec<DMatrix<f64>>,
    ad_h_h: Vec<DMatrix<f64>>,
    mm_m: Vec<Vec<Vec<f64>>>,
}

impl HomogeneousSpace {
    pub fn new(spec: LieAlgebraSpec, split: ReductiveSplit, msplit: ModuleSplit) -> Result<Self> {
        let report = validate(&spec, &split, &msplit);
        if !report.is_ok() {
            return Err(Error::InvalidStructure(report.to_string()));
        }
        let n = spec.dim();
        let sc: Vec<Vec<Vec<Rat>>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let z = spec
                            .bracket(&split.basis_vector(a), &split.basis_vector(b))
                            .expect("validated dimensions");
                        split.to_split_coords(&z).expect("validated dimensions")
                    })
                    .collect()
            })
            .collect();
        let h = split.h_indices().to_vec();
        let m = split.m_indices().to_vec();
        let pick = |v: &[Rat], idx: &[usize]| -> Vec<f64> {
            idx.iter().map(|&i| rat_to_f64(&v[i])).collect()
        };
        let ad_h_m = h
            .iter()
            .map(|&hj| {
                let cols: Vec<Vec<f64>> = m.iter().map(|&mu| pick(&sc[hj][mu], &m)).collect();
                DMatrix::from_fn(m.len(), m.len(), |r, c| cols[c][r])
            })
            .collect();
        let ad_h_h = h
            .iter()
            .map(|&hj| {
                let cols: Vec<Vec<f64>> = h.iter().map(|&hk| pick(&sc[hj][hk], &h)).collect();
                DMatrix::from_fn(h.len(), h.len(), |r, c| cols[c][r])
            })
            .collect();
        let mm_m = m
            .iter()
            .map(|&a| m.iter().map(|&b| pick(&sc[a][b], &m)).collect())
            .collect();
        Ok(HomogeneousSpace {
            spec,
            split,
            msplit,
            sc,
            ad_h_m,
            ad_h_h,
            mm_m,
        })
    }

    pub fn spec(&self) -> &LieAlgebraSpec {
        &self.spec
    }

    pub fn split(&self) -> &ReductiveSplit {
        &self.split
    }

    pub fn msplit(&self) -> &ModuleSplit {
        &self.msplit
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn dim_h(&self) -> usize {
        self.split.dim_h()
    }

    pub fn dim_m(&self) -> usize {
        self.split.dim_m()
    }

    /// Same split, same module blocks.
    pub fn same_split(&self, other: &HomogeneousSpace) -> bool {
        self.spec == other.spec && self.split == other.split
    }

    /// Human-readable name of a split-basis vector, e.g. `E3 + 2 D`.
    pub fn basis_label(&self, i: usize) -> String {
        render_combination(&self.split.basis_vector(i), self.spec.labels())
    }

    pub fn h_labels(&self) -> Vec<String> {
        self.split
            .h_indices()
            .iter()
            .map(|&i| self.basis_label(i))
            .collect()
    }

    pub fn m_labels(&self) -> Vec<String> {
        self.split
            .m_indices()
            .iter()
            .map(|&i| self.basis_label(i))
            .collect()
    }

    /// `[s_a, s_b]` in split coordinates, for split-basis indices `a`, `b`.
    pub fn split_bracket(&self, a: usize, b: usize) -> &[Rat] {
        &self.sc[a][b]
    }

    /// m coordinates of `[x, m_u]_m` where `x` is the split-basis vector `a`.
    pub fn bracket_basis_m(&self, a: usize, u: usize) -> Vec<Rat> {
        let s = &self.sc[a][self.split.m_indices()[u]];
        self.split
            .m_indices()
            .iter()
            .map(|&k| s[k].clone())
            .collect()
    }

    /// m coordinates of `[x, y]_m` for `x`, `y` in m coordinates.
    pub fn bracket_mm(&self, x: &[Rat], y: &[Rat]) -> Result<Vec<Rat>> {
        Error::check_len(self.dim_m(), x.len())?;
        Error::check_len(self.dim_m(), y.len())?;
        let m = self.split.m_indices();
        let mut out = vec![Rat::zero(); m.len()];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let w = xa * yb;
                for (k, &mk) in m.iter().enumerate() {
                    let c = &self.sc[m[a]][m[b]][mk];
                    if !c.is_zero() {
                        out[k] += &w * c;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Exact matrix of `ad(z)` restricted to a subspace, `z` given in split
    /// coordinates. The h-component of `[z, u]` is dropped for `M`, and the
    /// m-component for `H`.
    pub fn ad_operator(&self, z: &[Rat], sub: Subspace) -> Result<AdOperator> {
        Error::check_len(self.dim(), z.len())?;
        let idx = match sub {
            Subspace::H => self.split.h_indices(),
            Subspace::M => self.split.m_indices(),
        };
        let mut mat = RatMatrix::zeros(idx.len(), idx.len());
        for (c, &u) in idx.iter().enumerate() {
            for (a, za) in z.iter().enumerate() {
                if za.is_zero() {
                    continue;
                }
                for (r, &k) in idx.iter().enumerate() {
                    let v = &self.sc[a][u][k];
                    if !v.is_zero() {
                        mat[(r, c)] += za * v;
                    }
                }
            }
        }
        Ok(AdOperator { matrix: mat })
    }

    /// `ad(h_j)` on m, in m coordinates.
    pub fn ad_h_on_m(&self, j: usize) -> &DMatrix<f64> {
        &self.ad_h_m[j]
    }

    /// `[m_a, m_b]_m` in m coordinates.
    pub fn bracket_mm_f64(&self, a: usize, b: usize) -> &[f64] {
        &self.mm_m[a][b]
    }

    /// `[y + xi, m_u]_m` for `y` in m coordinates and `xi` in h coordinates.
    pub fn geodesic_bracket(&self, y: &[f64], xi: &[f64], u: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dim_m()];
        for (a, ya) in y.iter().enumerate() {
            if *ya == 0.0 {
                continue;
            }
            for (o, v) in out.iter_mut().zip(&self.mm_m[a][u]) {
                *o += ya * v;
            }
        }
        for (j, xj) in xi.iter().enumerate() {
            if *xj == 0.0 {
                continue;
            }
            for (o, v) in out.iter_mut().zip(self.ad_h_m[j].column(u).iter()) {
                *o += xj * v;
            }
        }
        out
    }

    /// `[x, y]_m` for `x`, `y` in m coordinates, in floating point.
    pub fn bracket_mm_numeric(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim_m()];
        for (a, xa) in x.iter().enumerate() {
            for (b, yb) in y.iter().enumerate() {
                let w = xa * yb;
                if w == 0.0 {
                    continue;
                }
                for (o, v) in out.iter_mut().zip(&self.mm_m[a][b]) {
                    *o += w * v;
                }
            }
        }
        out
    }

    /// `exp(t ad(w))` restricted to h or m, for `w` in h coordinates.
    pub fn exp_ad(&self, w: &[f64], t: f64, sub: Subspace) -> DMatrix<f64> {
        let (mats, n) = match sub {
            Subspace::H => (&self.ad_h_h, self.dim_h()),
            Subspace::M => (&self.ad_h_m, self.dim_m()),
        };
        let mut a = DMatrix::<f64>::zeros(n, n);
        for (wj, mj) in w.iter().zip(mats) {
            a += mj * (*wj * t);
        }
        expm(&a)
    }

    /// The same space with m replaced by the image of the linear graph
    /// `xi^j(y) = sum_r graph[j][r] y_r`.
    pub fn shift(&self, graph: &[Vec<Rat>]) -> Result<HomogeneousSpace> {
        let split = shift_split(&self.spec, &self.split, graph)?;
        HomogeneousSpace::new(self.spec.clone(), split, self.msplit.clone())
    }

    pub fn central_shift(&self, v: &[Rat]) -> Result<Option<Vec<Rat>>> {
        central_shift(&self.spec, &self.split, v)
    }
}

/// `exp(t ad(w))` on h or m of the given space.
pub fn exp_ad(space: &HomogeneousSpace, w: &[f64], t: f64, sub: Subspace) -> DMatrix<f64> {
    space.exp_ad(w, t, sub)
}

pub(crate) fn render_combination(v: &[Rat], labels: &[String]) -> String {
    let mut out = String::new();
    for (c, l) in v.iter().zip(labels) {
        if c.is_zero() {
            continue;
        }
        let neg = *c < Rat::zero();
        let a = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !a.is_one() {
            out.push_str(&format!("{a} "));
        }
        out.push_str(l);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
