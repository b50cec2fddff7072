use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::{rat_to_f64, Rat};
use crate::error::{Error, Result};

#[derive(Debug, PartialEq, Eq, Hash)]
struct VarList {
    names: Vec<String>,
    coords: usize,
}

/// Ordered variable list shared by every polynomial of one computation.
/// The first `n_coords()` variables are coordinates, the rest are parameters.
#[derive(Debug, Clone)]
pub struct VarContext(Arc<VarList>);

impl PartialEq for VarContext {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for VarContext {}

impl VarContext {
    pub fn new<S: AsRef<str>>(coords: &[S], params: &[S]) -> Self {
        let names = coords
            .iter()
            .chain(params.iter())
            .map(|s| s.as_ref().to_string())
            .collect();
        VarContext(Arc::new(VarList {
            names,
            coords: coords.len(),
        }))
    }

    /// Context without coordinates, e.g. for coefficients in `c1..cs` only.
    pub fn params_only<S: AsRef<str>>(params: &[S]) -> Self {
        Self::new::<S>(&[], params)
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn n_coords(&self) -> usize {
        self.0.coords
    }

    pub fn n_params(&self) -> usize {
        self.len() - self.0.coords
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }
}

/// Exponent vector under graded-lexicographic order (earlier variables are
/// more significant, so coordinates dominate parameters).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub(crate) fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with rational coefficients. Zero
/// coefficients are never stored, so structural equality is equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    ctx: VarContext,
    terms: BTreeMap<Monomial, Rat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(a: &MPoly, b: &MPoly, op: PolyOp) -> Result<MPoly> {
    if a.ctx != b.ctx {
        return Err(Error::ContextMismatch);
    }
    Ok(match op {
        PolyOp::Add => a.add_impl(b, false),
        PolyOp::Sub => a.add_impl(b, true),
        PolyOp::Mul => a.mul_impl(b),
    })
}

impl MPoly {
    pub fn zero(ctx: &VarContext) -> Self {
        MPoly {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &VarContext) -> Self {
        Self::constant(ctx, Rat::one())
    }

    pub fn constant(ctx: &VarContext, c: Rat) -> Self {
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ctx.len()), c);
        }
        p
    }

    pub fn var(ctx: &VarContext, i: usize) -> Self {
        let mut e = vec![0; ctx.len()];
        e[i] = 1;
        Self::term(ctx, Monomial(e), Rat::one())
    }

    pub fn var_named(ctx: &VarContext, name: &str) -> Result<Self> {
        ctx.index_of(name)
            .map(|i| Self::var(ctx, i))
            .ok_or_else(|| Error::parse(name, "unknown variable"))
    }

    pub fn term(ctx: &VarContext, m: Monomial, c: Rat) -> Self {
        assert_eq!(m.0.len(), ctx.len(), "monomial arity");
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn ctx(&self) -> &VarContext {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The constant value, if the polynomial has no variable terms.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rat) -> MPoly {
        if k.is_zero() {
            return Self::zero(&self.ctx);
        }
        MPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    fn add_impl(&self, other: &MPoly, subtract: bool) -> MPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let c = if subtract { -c } else { c.clone() };
            match terms.get_mut(m) {
                Some(v) => {
                    *v += c;
                    if v.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), c);
                }
            }
        }
        MPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    fn mul_impl(&self, other: &MPoly) -> MPoly {
        let mut terms: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                let e = terms.entry(m).or_insert_with(Rat::zero);
                *e += c;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..e {
            acc = acc.mul_impl(self);
        }
        acc
    }

    /// Coefficient of a coordinate monomial: a polynomial in the parameters only
    /// (still carried in the same context, with zero coordinate exponents).
    pub fn coeff_extract(&self, coord_exponents: &[u32]) -> Result<MPoly> {
        Error::check_len(self.ctx.n_coords(), coord_exponents.len())?;
        let nc = self.ctx.n_coords();
        let mut out = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            if m.0[..nc] == *coord_exponents {
                let mut e = m.0.clone();
                e[..nc].iter_mut().for_each(|x| *x = 0);
                out.terms.insert(Monomial(e), c.clone());
            }
        }
        Ok(out)
    }

    /// Distinct coordinate parts of the monomials present.
    pub fn coord_monomials(&self) -> BTreeSet<Vec<u32>> {
        let nc = self.ctx.n_coords();
        self.terms.keys().map(|m| m.0[..nc].to_vec()).collect()
    }

    pub fn eval_rat(&self, point: &[Rat]) -> Result<Rat> {
        Error::check_len(self.ctx.len(), point.len())?;
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<f64> {
        Error::check_len(self.ctx.len(), point.len())?;
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = rat_to_f64(c);
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= x.powi(e as i32);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitutes polynomial `subs[i]` (all in one target context) for variable `i`.
    pub fn compose(&self, subs: &[MPoly]) -> Result<MPoly> {
        Error::check_len(self.ctx.len(), subs.len())?;
        let target = subs
            .first()
            .map(|p| p.ctx.clone())
            .unwrap_or_else(|| self.ctx.clone());
        if subs.iter().any(|p| p.ctx != target) {
            return Err(Error::ContextMismatch);
        }
        let mut acc = Self::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Self::constant(&target, c.clone());
            for (s, &e) in subs.iter().zip(&m.0) {
                if e > 0 {
                    t = t.mul_impl(&s.pow(e));
                }
            }
            acc = acc.add_impl(&t, false);
        }
        Ok(acc)
    }

    /// Re-homes the polynomial into a context whose variable list extends this one
    /// by name. Variables missing from `target` are an error.
    pub fn embed(&self, target: &VarContext) -> Result<MPoly> {
        let map: Vec<usize> = self
            .ctx
            .names()
            .iter()
            .map(|n| target.index_of(n).ok_or(Error::ContextMismatch))
            .collect::<Result<_>>()?;
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &k) in m.0.iter().enumerate() {
                e[map[i]] += k;
            }
            out.terms.insert(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Option<Monomial> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |g, m| g.gcd(m)))
    }

    pub fn div_monomial(&self, m: &Monomial) -> MPoly {
        MPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.div(m), c.clone()))
                .collect(),
        }
    }

    /// Exact division: `Some(q)` with `self = q * d`, or `None` if `d` does not
    /// divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        assert!(self.ctx == d.ctx, "variable context mismatch");
        let (lm_d, lc_d) = d.leading()?;
        let (lm_d, lc_d) = (lm_d.clone(), lc_d.clone());
        let mut rem = self.clone();
        let mut q = Self::zero(&self.ctx);
        while let Some((lm, lc)) = rem.leading() {
            if !lm_d.divides(lm) {
                return None;
            }
            let t = Self::term(&self.ctx, lm.div(&lm_d), lc / &lc_d);
            rem = rem.add_impl(&t.mul_impl(d), true);
            q = q.add_impl(&t, false);
        }
        Some(q)
    }

    pub(crate) fn fmt_factor(&self) -> String {
        if self.n_terms() > 1 {
            format!("({self})")
        } else {
            self.to_string()
        }
    }
}

fn fmt_monomial(ctx: &VarContext, m: &Monomial) -> Vec<String> {
    m.0.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                ctx.name(i).to_string()
            } else {
                format!("{}^{}", ctx.name(i), e)
            }
        })
        .collect()
}

impl fmt::Display for MPoly {
    /// Terms from the leading monomial down, e.g. `c1^2 * y3 - 1/2 * c2 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors = fmt_monomial(&self.ctx, m);
            if !abs.is_one() || factors.is_empty() {
                factors.insert(0, abs.to_string());
            }
            write!(f, "{}", factors.join(" * "))?;
        }
        Ok(())
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $op:expr) => {
        impl std::ops::$tr<&MPoly> for &MPoly {
            type Output = MPoly;
            fn $method(self, rhs: &MPoly) -> MPoly {
                poly_arith(self, rhs, $op).expect("variable context mismatch")
            }
        }
        impl std::ops::$tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                poly_arith(&self, &rhs, $op).expect("variable context mismatch")
            }
        }
    };
}

forward_op!(Add, add, PolyOp::Add);
forward_op!(Sub, sub, PolyOp::Sub);
forward_op!(Mul, mul, PolyOp::Mul);

impl std::ops::Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, ratio};

    fn ctx() -> VarContext {
        VarContext::new(&["y1", "y2", "y3"], &["c"])
    }

    #[test]
    fn add_and_mul_basics() {
        let k = ctx();
        let y1 = MPoly::var(&k, 0);
        let y2 = MPoly::var(&k, 1);
        assert_eq!(&y1 + &y1, y1.scale(&rat(2)));
        let prod = &(&y1 + &y2) * &(&y1 - &y2);
        assert_eq!(prod, &(&y1 * &y1) - &(&y2 * &y2));
        assert_eq!(prod.to_string(), "y1^2 - y2^2");
    }

    #[test]
    fn sub_with_parameter() {
        let k = ctx();
        let c = MPoly::var(&k, 3);
        let y3 = MPoly::var(&k, 2);
        let d = &(&c * &y3) - &y3;
        let expected = &(&c - &MPoly::one(&k)) * &y3;
        assert_eq!(d, expected);
        assert_eq!(d.to_string(), "y3 * c - y3");
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = MPoly::var(&ctx(), 0);
        let b = MPoly::var(&VarContext::new(&["x"], &[]), 0);
        assert!(matches!(
            poly_arith(&a, &b, PolyOp::Add),
            Err(Error::ContextMismatch)
        ));
    }

    #[test]
    fn coefficient_extraction() {
        let k = VarContext::new(&["y1", "y2", "y3"], &["c1"]);
        let p =
            &(&MPoly::var(&k, 3) * &(&MPoly::var(&k, 0) * &MPoly::var(&k, 1))) + &MPoly::var(&k, 2);
        assert_eq!(p.coeff_extract(&[1, 1, 0]).unwrap(), MPoly::var(&k, 3));
        assert!(p.coeff_extract(&[0, 2, 0]).unwrap().is_zero());
        assert_eq!(p.coeff_extract(&[0, 0, 1]).unwrap(), MPoly::one(&k));
    }

    #[test]
    fn evaluation() {
        let k = ctx();
        let p = &MPoly::var(&k, 3) * &MPoly::var(&k, 2);
        let v = p.eval_rat(&[rat(0), rat(0), rat(2), rat(3)]).unwrap();
        assert_eq!(v, rat(6));
        assert_eq!(p.eval_f64(&[0.0, 0.0, 2.0, 3.0]).unwrap(), 6.0);
        assert!(p.eval_f64(&[1.0]).is_err());
    }

    #[test]
    fn exact_division() {
        let k = VarContext::params_only(&["a", "b"]);
        let a = MPoly::var(&k, 0);
        let b = MPoly::var(&k, 1);
        let f = &(&a + &b) * &(&a - &b.scale(&ratio(1, 2)));
        assert_eq!(
            f.div_exact(&(&a + &b)).unwrap(),
            &a - &b.scale(&ratio(1, 2))
        );
        assert!(f.div_exact(&(&a + &b.scale(&rat(3)))).is_none());
    }

    #[test]
    fn graded_lex_order_puts_coordinates_first() {
        // y1 > c at equal degree; y3*c > y1 (higher degree).
        let k = ctx();
        let p = &MPoly::var(&k, 0) + &MPoly::var(&k, 3);
        assert_eq!(p.leading().unwrap().0, &Monomial(vec![1, 0, 0, 0]));
        let q = &p + &(&MPoly::var(&k, 2) * &MPoly::var(&k, 3));
        assert_eq!(q.leading().unwrap().0, &Monomial(vec![0, 0, 1, 1]));
    }

    #[test]
    fn compose_substitutes_polynomials() {
        let src = VarContext::params_only(&["c1", "c2"]);
        let dst = VarContext::params_only(&["c1", "c2", "t"]);
        let p = &MPoly::var(&src, 0) * &MPoly::var(&src, 1);
        let t = MPoly::var(&dst, 2);
        let subs = vec![&t * &MPoly::var(&dst, 0), &t * &MPoly::var(&dst, 1)];
        let q = p.compose(&subs).unwrap();
        assert_eq!(q.to_string(), "c1 * c2 * t^2");
    }
}
