use std::collections::BTreeSet;
use std::fmt;

use nalgebra::DMatrix;
use num_traits::Zero;
use rand::Rng;

use crate::algebra::HomogeneousSpace;
use crate::error::{Error, Result};
use crate::exactnum::{linear_solve_ratfunc, LinearSolution, MPoly, Rat, RatFunc, VarContext};
use crate::metrics::BlockForms;
use crate::verify::sampling::rng;

/// A linear geodesic graph `xi^j = sum_r k^j_r(c) y_r` whose coefficients are
/// rational functions of the block parameters.
#[derive(Debug, Clone)]
pub struct LinearGraphSym {
    ctx: VarContext,
    /// `coefficients[j][r] = k^j_r`.
    pub coefficients: Vec<Vec<RatFunc>>,
    /// Nullspace directions (same layout) when the solution is not unique.
    pub freedom: Vec<Vec<Vec<RatFunc>>>,
}

/// Outcome of the symbolic solve: a linear graph, or the equations that admit
/// no linear solution for generic parameters.
#[derive(Debug, Clone)]
pub enum SymbolicSolve {
    Linear(LinearGraphSym),
    Inconsistent { equations: Vec<String> },
}

pub fn generic_param_names(s: usize) -> Vec<String> {
    (1..=s).map(|i| format!("c{i}")).collect()
}

pub fn coordinate_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("y{i}")).collect()
}

/// Solves `sum_i c^i alpha_i(y, [y + xi(y), u]_m) = 0` for all basis `u`
/// under the linear ansatz, over the field of rational functions in generic
/// parameters `c1..cs`.
pub fn solve_linear_graph_symbolic(
    space: &HomogeneousSpace,
    forms: &BlockForms,
) -> Result<SymbolicSolve> {
    let n = space.dim_m();
    let nh = space.dim_h();
    let s = forms.n_blocks();
    Error::check_len(n, forms.dim_m())?;
    let coords = coordinate_names(n);
    let pnames = generic_param_names(s);
    let ctx = VarContext::new(&coords, &pnames);
    let pctx = VarContext::params_only(&pnames);
    let y: Vec<MPoly> = (0..n).map(|r| MPoly::var(&ctx, r)).collect();
    let c: Vec<MPoly> = (0..s).map(|i| MPoly::var(&ctx, n + i)).collect();
    let konst = |q: &Rat| MPoly::constant(&ctx, q.clone());

    // sum_i c^i alpha_i(a, b) for polynomial vectors a, b.
    let g = |a: &[MPoly], b: &[MPoly]| -> MPoly {
        let mut acc = MPoly::zero(&ctx);
        for (i, ci) in c.iter().enumerate() {
            let al = forms.alpha(i);
            let mut t = MPoly::zero(&ctx);
            for p in 0..n {
                if a[p].is_zero() {
                    continue;
                }
                for q in 0..n {
                    if al[(p, q)].is_zero() || b[q].is_zero() {
                        continue;
                    }
                    t = &t + &(&(&a[p] * &b[q]) * &konst(&al[(p, q)]));
                }
            }
            acc = &acc + &(ci * &t);
        }
        acc
    };

    // Coefficients extracted from the (y, c) context land in the c-only context.
    let to_params: Vec<MPoly> = (0..n)
        .map(|_| MPoly::zero(&pctx))
        .chain((0..s).map(|i| MPoly::var(&pctx, i)))
        .collect();

    let mut rows: Vec<Vec<RatFunc>> = Vec::new();
    let mut rhs: Vec<RatFunc> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    let m_labels = space.m_labels();
    for (u, u_label) in m_labels.iter().enumerate() {
        // [y, u]_m as a vector of linear polynomials.
        let mut yu = vec![MPoly::zero(&ctx); n];
        for (a, &ma) in space.split().m_indices().iter().enumerate() {
            let v = space.bracket_basis_m(ma, u);
            for (k, vk) in v.iter().enumerate() {
                if !vk.is_zero() {
                    yu[k] = &yu[k] + &(&y[a] * &konst(vk));
                }
            }
        }
        let q_u = g(&y, &yu);
        let mut cols: Vec<MPoly> = Vec::with_capacity(nh * n);
        for &hj in space.split().h_indices() {
            let v: Vec<MPoly> = space.bracket_basis_m(hj, u).iter().map(konst).collect();
            let p_ju = g(&y, &v);
            for yr in &y {
                cols.push(yr * &p_ju);
            }
        }
        let mut monos: BTreeSet<Vec<u32>> = q_u.coord_monomials();
        for col in &cols {
            monos.extend(col.coord_monomials());
        }
        for mono in monos {
            let row = cols
                .iter()
                .map(|p| {
                    Ok(RatFunc::from_poly(
                        p.coeff_extract(&mono)?.compose(&to_params)?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            let b = RatFunc::from_poly(q_u.coeff_extract(&mono)?.compose(&to_params)?.neg());
            rows.push(row);
            rhs.push(b);
            labels.push(format!(
                "u = {}, monomial {}",
                u_label,
                render_monomial(&mono, &coords)
            ));
        }
    }

    let unknowns = nh * n;
    let solution = if rows.is_empty() {
        LinearSolution::Parametrized {
            particular: vec![RatFunc::zero(&pctx); unknowns],
            nullspace: (0..unknowns)
                .map(|i| {
                    let mut v = vec![RatFunc::zero(&pctx); unknowns];
                    v[i] = RatFunc::one(&pctx);
                    v
                })
                .collect(),
        }
    } else {
        linear_solve_ratfunc(&rows, &rhs)?
    };
    if unknowns == 0 && solution.particular().is_some() {
        return Ok(SymbolicSolve::Linear(LinearGraphSym {
            ctx: pctx,
            coefficients: vec![],
            freedom: vec![],
        }));
    }
    let layout =
        |x: &[RatFunc]| -> Vec<Vec<RatFunc>> { x.chunks(n).map(|ch| ch.to_vec()).collect() };
    match solution {
        LinearSolution::Inconsistent { equations } => Ok(SymbolicSolve::Inconsistent {
            equations: equations.into_iter().map(|i| labels[i].clone()).collect(),
        }),
        LinearSolution::Unique(x) => Ok(SymbolicSolve::Linear(LinearGraphSym {
            ctx: pctx,
            coefficients: layout(&x),
            freedom: vec![],
        })),
        LinearSolution::Parametrized {
            particular,
            nullspace,
        } => Ok(SymbolicSolve::Linear(LinearGraphSym {
            ctx: pctx,
            coefficients: layout(&particular),
            freedom: nullspace.iter().map(|v| layout(v)).collect(),
        })),
    }
}

fn render_monomial(e: &[u32], names: &[String]) -> String {
    let parts: Vec<String> = e
        .iter()
        .zip(names)
        .filter(|(k, _)| **k > 0)
        .map(|(k, n)| {
            if *k == 1 {
                n.clone()
            } else {
                format!("{n}^{k}")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl LinearGraphSym {
    pub fn ctx(&self) -> &VarContext {
        &self.ctx
    }

    pub fn dim_h(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_unique(&self) -> bool {
        self.freedom.is_empty()
    }

    /// Substitutes `subs[i]` (polynomials in a common target context) for the
    /// `i`-th parameter.
    pub fn specialize(&self, subs: &[MPoly]) -> Result<LinearGraphSym> {
        let target = subs
            .first()
            .map(|p| p.ctx().clone())
            .ok_or(Error::ContextMismatch)?;
        let map = |rows: &Vec<Vec<RatFunc>>| -> Result<Vec<Vec<RatFunc>>> {
            rows.iter()
                .map(|r| r.iter().map(|k| k.compose(subs)).collect())
                .collect()
        };
        Ok(LinearGraphSym {
            ctx: target,
            coefficients: map(&self.coefficients)?,
            freedom: self.freedom.iter().map(map).collect::<Result<_>>()?,
        })
    }

    /// Exact coefficients at a rational parameter tuple.
    pub fn at_rat(&self, c: &[Rat]) -> Result<Vec<Vec<Rat>>> {
        self.coefficients
            .iter()
            .map(|r| r.iter().map(|k| k.eval_rat(c)).collect())
            .collect()
    }

    /// Coefficient matrix (`dim h x dim m`) at a floating-point parameter tuple.
    pub fn at_f64(&self, c: &[f64]) -> Result<DMatrix<f64>> {
        let nh = self.dim_h();
        let n = self.coefficients.first().map_or(0, Vec::len);
        let mut out = DMatrix::zeros(nh, n);
        for (j, row) in self.coefficients.iter().enumerate() {
            for (r, k) in row.iter().enumerate() {
                if !k.is_zero() {
                    out[(j, r)] = k.eval_f64(c)?;
                }
            }
        }
        Ok(out)
    }

    /// Distinct nonconstant denominators of the coefficients.
    pub fn denominators(&self) -> Vec<&MPoly> {
        let mut out: Vec<&MPoly> = Vec::new();
        for k in self.coefficients.iter().flatten() {
            if k.den().as_constant().is_none() && !out.contains(&k.den()) {
                out.push(k.den());
            }
        }
        out
    }

    /// Checks that no denominator vanishes or changes sign over `points`
    /// random points of the positive orthant and over the given extra points.
    pub fn check_denominators(&self, points: usize, seed: u64, extra: &[Vec<f64>]) -> Result<()> {
        let dens = self.denominators();
        if dens.is_empty() {
            return Ok(());
        }
        let s = self.ctx.len();
        let mut r = rng(seed);
        let random: Vec<Vec<f64>> = (0..points)
            .map(|_| (0..s).map(|_| r.random_range(1e-3..1.0)).collect())
            .collect();
        for d in dens {
            let mut sign = 0.0;
            for p in random.iter().chain(extra) {
                let v = d.eval_f64(p)?;
                let scale: f64 = d
                    .terms()
                    .map(|(m, c)| {
                        let t: f64 = m.0.iter().zip(p).map(|(e, x)| x.powi(*e as i32)).product();
                        (crate::exactnum::rat_to_f64(c) * t).abs()
                    })
                    .sum();
                if v.abs() <= 1e-12 * scale || (sign != 0.0 && v.signum() != sign) {
                    return Err(Error::DenominatorVanishes { witness: p.clone() });
                }
                sign = v.signum();
            }
        }
        Ok(())
    }

    /// One line per h-component, e.g. `xi[D] = c * y3`.
    pub fn render(&self, h_labels: &[String]) -> Result<Vec<String>> {
        let n = self.coefficients.first().map_or(0, Vec::len);
        let coords = coordinate_names(n);
        // Parameters are listed first so that they lead each printed monomial.
        let s = self.ctx.len();
        let full = VarContext::new(self.ctx.names(), &coords);
        let mut out = Vec::new();
        for (j, row) in self.coefficients.iter().enumerate() {
            let mut acc = RatFunc::zero(&full);
            for (r, k) in row.iter().enumerate() {
                if k.is_zero() {
                    continue;
                }
                let yr = RatFunc::var(&full, s + r);
                acc = &acc + &(&k.embed(&full)? * &yr);
            }
            out.push(format!("xi[{}] = {}", h_labels[j], acc));
        }
        Ok(out)
    }
}

impl fmt::Display for LinearGraphSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (1..=self.dim_h()).map(|j| format!("h{j}")).collect();
        match self.render(&labels) {
            Ok(lines) => write!(f, "{}", lines.join("\n")),
            Err(e) => write!(f, "<{e}>"),
        }
    }
}
