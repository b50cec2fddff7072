//! Linear systems over the field of rational functions in the parameters.
//!
//! Rows are cleared of denominators, the augmented polynomial matrix is
//! brought to echelon form by one-step fraction-free (Bareiss) elimination,
//! and the result is back-substituted in the fraction field. Every answer is
//! checked by exact back-substitution before it is returned.

use super::{MPoly, RatFunc, VarContext};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub enum LinearSolution {
    Unique(Vec<RatFunc>),
    /// `particular + span(nullspace)`.
    Parametrized {
        particular: Vec<RatFunc>,
        nullspace: Vec<Vec<RatFunc>>,
    },
    /// Indices of original equations whose echelon residue is `0 = nonzero`.
    Inconsistent {
        equations: Vec<usize>,
    },
}

impl LinearSolution {
    pub fn particular(&self) -> Option<&[RatFunc]> {
        match self {
            LinearSolution::Unique(x) => Some(x),
            LinearSolution::Parametrized { particular, .. } => Some(particular),
            LinearSolution::Inconsistent { .. } => None,
        }
    }

    pub fn nullspace(&self) -> &[Vec<RatFunc>] {
        match self {
            LinearSolution::Parametrized { nullspace, .. } => nullspace,
            _ => &[],
        }
    }
}

pub fn linear_solve_ratfunc(a: &[Vec<RatFunc>], b: &[RatFunc]) -> Result<LinearSolution> {
    Error::check_len(a.len(), b.len())?;
    let ctx = match b.first() {
        Some(x) => x.ctx().clone(),
        None => return Err(Error::InvalidStructure("empty linear system".into())),
    };
    let ncols = a[0].len();
    for row in a {
        Error::check_len(ncols, row.len())?;
        if row.iter().any(|x| *x.ctx() != ctx) {
            return Err(Error::ContextMismatch);
        }
    }
    if b.iter().any(|x| *x.ctx() != ctx) {
        return Err(Error::ContextMismatch);
    }

    // Augmented polynomial matrix, one row per equation, denominators cleared.
    let mut rows: Vec<Vec<MPoly>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| clear_denominators(row.iter().chain(std::iter::once(rhs)), &ctx))
        .collect();
    let mut origin: Vec<usize> = (0..rows.len()).collect();

    let m = rows.len();
    let mut prev = MPoly::one(&ctx);
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == m {
            break;
        }
        let Some(p) = choose_pivot(&rows, r, col) else {
            continue;
        };
        rows.swap(r, p);
        origin.swap(r, p);
        let (top, rest) = rows.split_at_mut(r + 1);
        let prow = &top[r];
        for row in rest.iter_mut() {
            let lead = row[col].clone();
            for j in col + 1..=ncols {
                let t = &(&prow[col] * &row[j]) - &(&lead * &prow[j]);
                row[j] = t
                    .div_exact(&prev)
                    .ok_or_else(|| Error::SelfCheck("Bareiss division was not exact".into()))?;
            }
            row[col] = MPoly::zero(&ctx);
        }
        prev = rows[r][col].clone();
        pivots.push(col);
        r += 1;
    }

    let inconsistent: Vec<usize> = (r..m)
        .filter(|&i| !rows[i][ncols].is_zero())
        .map(|i| origin[i])
        .collect();
    if !inconsistent.is_empty() {
        let mut equations = inconsistent;
        equations.sort_unstable();
        return Ok(LinearSolution::Inconsistent { equations });
    }

    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let particular = back_substitute(&rows, &pivots, ncols, &ctx, None)?;
    let nullspace = free
        .iter()
        .map(|&f| back_substitute(&rows, &pivots, ncols, &ctx, Some(f)))
        .collect::<Result<Vec<_>>>()?;

    verify(a, b, &particular, false)?;
    for n in &nullspace {
        verify(a, b, n, true)?;
    }

    Ok(if nullspace.is_empty() {
        LinearSolution::Unique(particular)
    } else {
        LinearSolution::Parametrized {
            particular,
            nullspace,
        }
    })
}

fn clear_denominators<'a>(
    entries: impl Iterator<Item = &'a RatFunc> + Clone,
    ctx: &VarContext,
) -> Vec<MPoly> {
    let mut dens: Vec<&MPoly> = Vec::new();
    for e in entries.clone() {
        if !e.den().is_one() && !dens.contains(&e.den()) {
            dens.push(e.den());
        }
    }
    entries
        .map(|e| {
            dens.iter()
                .filter(|d| **d != e.den())
                .fold(e.num().clone(), |acc, d| &acc * *d)
        })
        .inspect(|p| debug_assert!(*p.ctx() == *ctx))
        .collect()
}

/// Among rows `r..` with a nonzero entry in `col`, the one whose leading
/// monomial is smallest (ties go to the earlier row).
fn choose_pivot(rows: &[Vec<MPoly>], r: usize, col: usize) -> Option<usize> {
    (r..rows.len())
        .filter(|&i| !rows[i][col].is_zero())
        .min_by(|&i, &j| {
            let a = rows[i][col].leading().unwrap().0;
            let b = rows[j][col].leading().unwrap().0;
            a.cmp(b).then(i.cmp(&j))
        })
}

/// Particular solution (`free = None`) or the nullspace vector with free
/// variable `free` set to one.
fn back_substitute(
    rows: &[Vec<MPoly>],
    pivots: &[usize],
    ncols: usize,
    ctx: &VarContext,
    free: Option<usize>,
) -> Result<Vec<RatFunc>> {
    let mut x = vec![RatFunc::zero(ctx); ncols];
    if let Some(f) = free {
        x[f] = RatFunc::one(ctx);
    }
    for (k, &pc) in pivots.iter().enumerate().rev() {
        let row = &rows[k];
        let mut acc = if free.is_some() {
            RatFunc::zero(ctx)
        } else {
            RatFunc::from_poly(row[ncols].clone())
        };
        for j in pc + 1..ncols {
            if row[j].is_zero() || x[j].is_zero() {
                continue;
            }
            acc = &acc - &(&RatFunc::from_poly(row[j].clone()) * &x[j]);
        }
        x[pc] = RatFunc::new(acc.num().clone(), acc.den() * &row[pc])?;
    }
    Ok(x)
}

fn verify(a: &[Vec<RatFunc>], b: &[RatFunc], x: &[RatFunc], homogeneous: bool) -> Result<()> {
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        let mut lhs = RatFunc::zero(rhs.ctx());
        for (aij, xj) in row.iter().zip(x) {
            if !aij.is_zero() && !xj.is_zero() {
                lhs = &lhs + &(aij * xj);
            }
        }
        let ok = if homogeneous {
            lhs.is_zero()
        } else {
            lhs == *rhs
        };
        if !ok {
            return Err(Error::SelfCheck(format!("equation {i} not satisfied")));
        }
    }
    Ok(())
}
