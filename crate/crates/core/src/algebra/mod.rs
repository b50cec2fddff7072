//! Lie algebra data of a homogeneous space `G/H`: structure constants over
//! exact rationals, the reductive split `g = h + m`, the module split
//! `m = m_1 + ... + m_s`, and the derived operations on them.

mod expm;
mod space;

pub use expm::expm;
pub(crate) use space::render_combination;
pub use space::{exp_ad, HomogeneousSpace, Subspace};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::{Rat, RatMatrix};

/// Structure constants `[e_a, e_b] = sum_k C^k_ab e_k`, stored sparsely for `a < b`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraSpec {
    basis_labels: Vec<String>,
    structure: BTreeMap<(usize, usize), Vec<(usize, Rat)>>,
}

impl LieAlgebraSpec {
    /// Entries with `a > b` are stored as `-[e_b, e_a]`; `a == b` must be zero.
    pub fn new(
        basis_labels: Vec<String>,
        entries: impl IntoIterator<Item = (usize, usize, Vec<(usize, Rat)>)>,
    ) -> Result<Self> {
        let dim = basis_labels.len();
        if dim == 0 {
            return Err(Error::InvalidStructure("empty basis".into()));
        }
        let mut structure: BTreeMap<(usize, usize), Vec<(usize, Rat)>> = BTreeMap::new();
        for (a, b, value) in entries {
            for &i in [a, b].iter().chain(value.iter().map(|(k, _)| k)) {
                if i >= dim {
                    return Err(Error::IndexOutOfRange { index: i, len: dim });
                }
            }
            let mut dense = vec![Rat::zero(); dim];
            for (k, c) in value {
                dense[k] += c;
            }
            if a == b {
                if dense.iter().any(|c| !c.is_zero()) {
                    return Err(Error::InvalidStructure(format!(
                        "[{0}, {0}] must vanish",
                        basis_labels[a]
                    )));
                }
                continue;
            }
            let (key, sign) = if a < b { ((a, b), 1) } else { ((b, a), -1) };
            if structure.contains_key(&key) {
                return Err(Error::InvalidStructure(format!(
                    "bracket [{}, {}] given twice",
                    basis_labels[key.0], basis_labels[key.1]
                )));
            }
            let sparse: Vec<(usize, Rat)> = dense
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, if sign > 0 { c } else { -c }))
                .collect();
            if !sparse.is_empty() {
                structure.insert(key, sparse);
            }
        }
        Ok(LieAlgebraSpec {
            basis_labels,
            structure,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis_labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.basis_labels
    }

    /// Nonzero brackets `(a, b, [e_a, e_b])` with `a < b`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &[(usize, Rat)])> {
        self.structure
            .iter()
            .map(|(&(a, b), v)| (a, b, v.as_slice()))
    }

    pub fn is_abelian(&self) -> bool {
        self.structure.is_empty()
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim()];
        if a == b {
            return out;
        }
        let (key, neg) = if a < b {
            ((a, b), false)
        } else {
            ((b, a), true)
        };
        if let Some(v) = self.structure.get(&key) {
            for (k, c) in v {
                out[*k] = if neg { -c } else { c.clone() };
            }
        }
        out
    }

    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Result<Vec<Rat>> {
        Error::check_len(self.dim(), x.len())?;
        Error::check_len(self.dim(), y.len())?;
        let mut out = vec![Rat::zero(); self.dim()];
        for (&(a, b), v) in &self.structure {
            // [x, y] picks up (x_a y_b - x_b y_a) [e_a, e_b].
            let w = &x[a] * &y[b] - &x[b] * &y[a];
            if w.is_zero() {
                continue;
            }
            for (k, c) in v {
                out[*k] += &w * c;
            }
        }
        Ok(out)
    }

    /// Basis triples whose cyclic Jacobi sum does not vanish.
    pub fn jacobi_violations(&self) -> Vec<([usize; 3], Vec<Rat>)> {
        let n = self.dim();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let e = |i: usize| unit(n, i);
                    let t1 = self.bracket(&self.bracket_basis(a, b), &e(c)).unwrap();
                    let t2 = self.bracket(&self.bracket_basis(b, c), &e(a)).unwrap();
                    let t3 = self.bracket(&self.bracket_basis(c, a), &e(b)).unwrap();
                    let sum: Vec<Rat> = (0..n).map(|k| &t1[k] + &t2[k] + &t3[k]).collect();
                    if sum.iter().any(|x| !x.is_zero()) {
                        out.push(([a, b, c], sum));
                    }
                }
            }
        }
        out
    }
}

pub fn bracket(spec: &LieAlgebraSpec, x: &[Rat], y: &[Rat]) -> Result<Vec<Rat>> {
    spec.bracket(x, y)
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = Rat::from_integer(1.into());
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    H,
    M,
}

/// Reductive split `g = h + m`. The split basis is the columns of
/// `basis_change` (original coordinates), or the original basis when absent;
/// `h_indices` and `m_indices` select columns of that basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductiveSplit {
    h_indices: Vec<usize>,
    m_indices: Vec<usize>,
    basis_change: Option<RatMatrix>,
    basis: RatMatrix,
    basis_inv: RatMatrix,
}

impl ReductiveSplit {
    pub fn new(
        h_indices: Vec<usize>,
        m_indices: Vec<usize>,
        basis_change: Option<RatMatrix>,
    ) -> Result<Self> {
        let dim = h_indices.len() + m_indices.len();
        let mut seen = vec![false; dim];
        for &i in h_indices.iter().chain(&m_indices) {
            if i >= dim {
                return Err(Error::IndexOutOfRange { index: i, len: dim });
            }
            if seen[i] {
                return Err(Error::InvalidStructure(format!(
                    "basis index {i} appears in both h and m (or twice)"
                )));
            }
            seen[i] = true;
        }
        if m_indices.is_empty() {
            return Err(Error::InvalidStructure("m must be nonzero".into()));
        }
        let basis = match &basis_change {
            Some(p) => {
                if p.nrows() != dim || p.ncols() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: p.nrows(),
                    });
                }
                p.clone()
            }
            None => RatMatrix::identity(dim),
        };
        let basis_inv = basis
            .inverse()
            .ok_or_else(|| Error::InvalidStructure("basis change is singular".into()))?;
        Ok(ReductiveSplit {
            h_indices,
            m_indices,
            basis_change,
            basis,
            basis_inv,
        })
    }

    pub fn dim(&self) -> usize {
        self.h_indices.len() + self.m_indices.len()
    }

    pub fn dim_h(&self) -> usize {
        self.h_indices.len()
    }

    pub fn dim_m(&self) -> usize {
        self.m_indices.len()
    }

    pub fn h_indices(&self) -> &[usize] {
        &self.h_indices
    }

    pub fn m_indices(&self) -> &[usize] {
        &self.m_indices
    }

    pub fn basis_change(&self) -> Option<&RatMatrix> {
        self.basis_change.as_ref()
    }

    /// Split-basis vector `i` in original coordinates.
    pub fn basis_vector(&self, i: usize) -> Vec<Rat> {
        self.basis.column(i)
    }

    pub fn to_split_coords(&self, z: &[Rat]) -> Result<Vec<Rat>> {
        self.basis_inv.mul_vec(z)
    }

    pub fn from_split_coords(&self, s: &[Rat]) -> Result<Vec<Rat>> {
        self.basis.mul_vec(s)
    }

    /// Coordinates of the `part` component of `z` (original coordinates).
    pub fn part_coords(&self, z: &[Rat], part: Part) -> Result<Vec<Rat>> {
        let s = self.to_split_coords(z)?;
        let idx = match part {
            Part::H => &self.h_indices,
            Part::M => &self.m_indices,
        };
        Ok(idx.iter().map(|&i| s[i].clone()).collect())
    }

    /// Original-coordinate vector of `sum coeffs[k] * basis(part)[k]`.
    pub fn embed(&self, coeffs: &[Rat], part: Part) -> Result<Vec<Rat>> {
        let idx = match part {
            Part::H => &self.h_indices,
            Part::M => &self.m_indices,
        };
        Error::check_len(idx.len(), coeffs.len())?;
        let mut s = vec![Rat::zero(); self.dim()];
        for (&i, c) in idx.iter().zip(coeffs) {
            s[i] = c.clone();
        }
        self.from_split_coords(&s)
    }

    pub fn project(&self, z: &[Rat], part: Part) -> Result<Vec<Rat>> {
        Error::check_len(self.dim(), z.len())?;
        let c = self.part_coords(z, part)?;
        self.embed(&c, part)
    }
}

pub fn project(split: &ReductiveSplit, z: &[Rat], part: Part) -> Result<Vec<Rat>> {
    split.project(z, part)
}

/// Ordered partition of the positions `0..dim m` into the blocks `m_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleSplit {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl ModuleSplit {
    pub fn new(blocks: Vec<Vec<usize>>, dim_m: usize) -> Result<Self> {
        let mut block_of = vec![usize::MAX; dim_m];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidStructure(format!("block {b} is empty")));
            }
            for &p in block {
                if p >= dim_m {
                    return Err(Error::IndexOutOfRange {
                        index: p,
                        len: dim_m,
                    });
                }
                if block_of[p] != usize::MAX {
                    return Err(Error::InvalidStructure(format!(
                        "m position {p} belongs to two blocks"
                    )));
                }
                block_of[p] = b;
            }
        }
        if let Some(p) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::InvalidStructure(format!(
                "m position {p} is in no block"
            )));
        }
        Ok(ModuleSplit { blocks, block_of })
    }

    /// All of m as a single block.
    pub fn single(dim_m: usize) -> Self {
        Self::new(vec![(0..dim_m).collect()], dim_m).expect("trivial partition")
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    pub fn block_of(&self, pos: usize) -> usize {
        self.block_of[pos]
    }

    pub fn dim_m(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_project<T: Clone + Zero>(&self, y: &[T], i: usize) -> Result<Vec<T>> {
        Error::check_len(self.dim_m(), y.len())?;
        if i >= self.blocks.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.blocks.len(),
            });
        }
        Ok(y.iter()
            .enumerate()
            .map(|(p, v)| {
                if self.block_of[p] == i {
                    v.clone()
                } else {
                    T::zero()
                }
            })
            .collect())
    }
}

pub fn block_project<T: Clone + Zero>(msplit: &ModuleSplit, y: &[T], i: usize) -> Result<Vec<T>> {
    msplit.block_project(y, i)
}

/// Matrix of `ad(z)` restricted to a subspace, in that subspace's ordered basis.
#[derive(Debug, Clone, PartialEq)]
pub struct AdOperator {
    pub matrix: RatMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ValidationIssue {
    Jacobi {
        triple: [usize; 3],
        residual: Vec<Rat>,
    },
    DimensionMismatch {
        algebra: usize,
        split: usize,
    },
    SubalgebraViolation {
        pair: (usize, usize),
    },
    ReductivityViolation {
        h: usize,
        m: usize,
    },
    BlockPartition(String),
    BlockInvariance {
        h: usize,
        m: usize,
        block: usize,
    },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
    /// Labels of the original basis (Jacobi witnesses).
    algebra_labels: Vec<String>,
    /// Labels of the split basis (all other witnesses).
    labels: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = |i: usize| {
            self.labels
                .get(i)
                .cloned()
                .unwrap_or_else(|| format!("#{i}"))
        };
        let a_l = |i: usize| {
            self.algebra_labels
                .get(i)
                .cloned()
                .unwrap_or_else(|| format!("#{i}"))
        };
        if self.issues.is_empty() {
            return write!(f, "valid");
        }
        for (n, issue) in self.issues.iter().enumerate() {
            if n > 0 {
                write!(f, "; ")?;
            }
            match issue {
                ValidationIssue::Jacobi {
                    triple: [a, b, c], ..
                } => write!(
                    f,
                    "Jacobi identity fails on ({}, {}, {})",
                    a_l(*a),
                    a_l(*b),
                    a_l(*c)
                )?,
                ValidationIssue::DimensionMismatch { algebra, split } => write!(
                    f,
                    "split has dimension {split} but the algebra has dimension {algebra}"
                )?,
                ValidationIssue::SubalgebraViolation { pair: (a, b) } => {
                    write!(f, "[h, h] not in h: pair ({}, {})", l(*a), l(*b))?
                }
                ValidationIssue::ReductivityViolation { h, m } => {
                    write!(f, "[h, m] not in m: pair ({}, {})", l(*h), l(*m))?
                }
                ValidationIssue::BlockPartition(s) => write!(f, "{s}")?,
                ValidationIssue::BlockInvariance { h, m, block } => write!(
                    f,
                    "[h, m_{block}] not in m_{block}: pair ({}, {})",
                    l(*h),
                    l(*m)
                )?,
            }
        }
        Ok(())
    }
}

/// Checks the Jacobi identity, reductivity of the split and invariance of
/// every module block; every failure is reported with its witness.
pub fn validate(
    spec: &LieAlgebraSpec,
    split: &ReductiveSplit,
    msplit: &ModuleSplit,
) -> ValidationReport {
    let mut issues: Vec<ValidationIssue> = spec
        .jacobi_violations()
        .into_iter()
        .map(|(triple, residual)| ValidationIssue::Jacobi { triple, residual })
        .collect();
    let mut report_labels = spec.labels().to_vec();
    if split.dim() != spec.dim() {
        issues.push(ValidationIssue::DimensionMismatch {
            algebra: spec.dim(),
            split: split.dim(),
        });
        return ValidationReport {
            issues,
            algebra_labels: spec.labels().to_vec(),
            labels: report_labels,
        };
    }
    if split.basis_change().is_some() {
        // Witnesses refer to split-basis indices; label them as such.
        report_labels = (0..split.dim()).map(|i| format!("s{i}")).collect();
    }
    let split_bracket = |a: usize, b: usize| -> Vec<Rat> {
        let x = split.basis_vector(a);
        let y = split.basis_vector(b);
        let z = spec.bracket(&x, &y).expect("dimensions checked");
        split.to_split_coords(&z).expect("dimensions checked")
    };
    let is_m = |i: usize| split.m_indices().contains(&i);
    let h = split.h_indices();
    let m = split.m_indices();
    for (i, &a) in h.iter().enumerate() {
        for &b in &h[i + 1..] {
            let s = split_bracket(a, b);
            if m.iter().any(|&k| !s[k].is_zero()) {
                issues.push(ValidationIssue::SubalgebraViolation { pair: (a, b) });
            }
        }
    }
    if msplit.dim_m() != m.len() {
        issues.push(ValidationIssue::BlockPartition(format!(
            "module split covers {} positions but m has dimension {}",
            msplit.dim_m(),
            m.len()
        )));
    }
    for &a in h {
        for (pos, &b) in m.iter().enumerate() {
            let s = split_bracket(a, b);
            if h.iter().any(|&k| !s[k].is_zero()) {
                issues.push(ValidationIssue::ReductivityViolation { h: a, m: b });
                continue;
            }
            if msplit.dim_m() != m.len() {
                continue;
            }
            let block = msplit.block_of(pos);
            let leaks = m
                .iter()
                .enumerate()
                .any(|(q, &k)| is_m(k) && msplit.block_of(q) != block && !s[k].is_zero());
            if leaks {
                issues.push(ValidationIssue::BlockInvariance { h: a, m: b, block });
            }
        }
    }
    ValidationReport {
        issues,
        algebra_labels: spec.labels().to_vec(),
        labels: report_labels,
    }
}

/// Split with `m' = span{ e_r + xi(e_r) }` for a linear graph
/// `xi^j(y) = sum_r graph[j][r] y_r`. The h basis is unchanged and the m
/// coordinates carry over, so a metric on m is the same metric on m'.
pub fn shift_split(
    spec: &LieAlgebraSpec,
    split: &ReductiveSplit,
    graph: &[Vec<Rat>],
) -> Result<ReductiveSplit> {
    Error::check_len(split.dim_h(), graph.len())?;
    for row in graph {
        Error::check_len(split.dim_m(), row.len())?;
    }
    let n = split.dim();
    let mut cols: Vec<Vec<Rat>> = (0..n).map(|i| split.basis_vector(i)).collect();
    for (r, &mi) in split.m_indices().iter().enumerate() {
        for (j, &hj) in split.h_indices().iter().enumerate() {
            let k = &graph[j][r];
            if k.is_zero() {
                continue;
            }
            let hv = split.basis_vector(hj);
            for (c, h) in cols[mi].iter_mut().zip(&hv) {
                *c += k * h;
            }
        }
    }
    let basis = RatMatrix::from_columns(&cols)?;
    if basis.rank() < n {
        return Err(Error::DegenerateGraph(
            "shifted m is not complementary to h".into(),
        ));
    }
    let shifted = ReductiveSplit::new(
        split.h_indices().to_vec(),
        split.m_indices().to_vec(),
        Some(basis),
    )?;
    let msplit = ModuleSplit::single(shifted.dim_m());
    let report = validate(spec, &shifted, &msplit);
    if let Some(bad) = report.issues.iter().find(|i| {
        matches!(
            i,
            ValidationIssue::ReductivityViolation { .. }
                | ValidationIssue::SubalgebraViolation { .. }
        )
    }) {
        return Err(Error::DegenerateGraph(format!(
            "shifted split is not reductive ({bad:?}); the graph is not Ad(H)-equivariant"
        )));
    }
    Ok(shifted)
}

/// `w` in h (h coordinates) with `ad(v - w) = 0` on all of g, where `v` is
/// given in m coordinates; `None` if no such `w` exists.
pub fn central_shift(
    spec: &LieAlgebraSpec,
    split: &ReductiveSplit,
    v: &[Rat],
) -> Result<Option<Vec<Rat>>> {
    let n = spec.dim();
    let vg = split.embed(v, Part::M)?;
    let hs: Vec<Vec<Rat>> = split
        .h_indices()
        .iter()
        .map(|&i| split.basis_vector(i))
        .collect();
    let mut a = RatMatrix::zeros(n * n, hs.len());
    let mut rhs = vec![Rat::zero(); n * n];
    for b in 0..n {
        let e = unit(n, b);
        let vb = spec.bracket(&vg, &e)?;
        for k in 0..n {
            rhs[b * n + k] = vb[k].clone();
        }
        for (j, h) in hs.iter().enumerate() {
            let hb = spec.bracket(h, &e)?;
            for k in 0..n {
                a[(b * n + k, j)] = hb[k].clone();
            }
        }
    }
    if hs.is_empty() {
        return Ok(rhs.iter().all(Zero::is_zero).then(Vec::new));
    }
    a.solve(&rhs)
}

#[cfg(test)]
mod tests;
