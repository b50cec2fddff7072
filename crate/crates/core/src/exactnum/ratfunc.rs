use std::fmt;

use num_traits::{One, Zero};

use super::{MPoly, Rat, VarContext};
use crate::error::{Error, Result};

/// Quotient of two polynomials over one variable context.
///
/// Normal form: the denominator is monic under the monomial order, common
/// monomial factors are cancelled, and an exact polynomial quotient is taken
/// whenever one side divides the other. There is no multivariate gcd, so two
/// equal functions may still differ structurally; equality is decided by
/// cross-multiplication.
#[derive(Debug, Clone)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatFuncOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn ratfunc_arith(a: &RatFunc, b: &RatFunc, op: RatFuncOp) -> Result<RatFunc> {
    if a.ctx() != b.ctx() {
        return Err(Error::ContextMismatch);
    }
    match op {
        RatFuncOp::Add => Ok(a.add_sub(b, false)),
        RatFuncOp::Sub => Ok(a.add_sub(b, true)),
        RatFuncOp::Mul => RatFunc::new(&a.num * &b.num, &a.den * &b.den),
        RatFuncOp::Div => {
            if b.is_zero() {
                return Err(Error::DivisionByZero);
            }
            RatFunc::new(&a.num * &b.den, &a.den * &b.num)
        }
    }
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if num.ctx() != den.ctx() {
            return Err(Error::ContextMismatch);
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = RatFunc { num, den };
        r.normalize();
        Ok(r)
    }

    pub fn from_poly(p: MPoly) -> Self {
        let den = MPoly::one(p.ctx());
        RatFunc { num: p, den }
    }

    pub fn zero(ctx: &VarContext) -> Self {
        Self::from_poly(MPoly::zero(ctx))
    }

    pub fn one(ctx: &VarContext) -> Self {
        Self::from_poly(MPoly::one(ctx))
    }

    pub fn constant(ctx: &VarContext, c: Rat) -> Self {
        Self::from_poly(MPoly::constant(ctx, c))
    }

    pub fn var(ctx: &VarContext, i: usize) -> Self {
        Self::from_poly(MPoly::var(ctx, i))
    }

    pub fn ctx(&self) -> &VarContext {
        self.num.ctx()
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    fn normalize(&mut self) {
        let ctx = self.num.ctx().clone();
        if self.num.is_zero() {
            self.den = MPoly::one(&ctx);
            return;
        }
        if let (Some(a), Some(b)) = (self.num.monomial_content(), self.den.monomial_content()) {
            let g = a.gcd(&b);
            if g.degree() > 0 {
                self.num = self.num.div_monomial(&g);
                self.den = self.den.div_monomial(&g);
            }
        }
        if self.den.as_constant().is_none() {
            if let Some(q) = self.num.div_exact(&self.den) {
                self.num = q;
                self.den = MPoly::one(&ctx);
            } else if let Some(q) = self.den.div_exact(&self.num) {
                self.num = MPoly::one(&ctx);
                self.den = q;
            }
        }
        let lc = self.den.leading().map(|(_, c)| c.clone()).unwrap();
        if !lc.is_one() {
            let inv = Rat::one() / lc;
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    fn add_sub(&self, other: &RatFunc, subtract: bool) -> RatFunc {
        let rhs_num = if subtract {
            other.num.neg()
        } else {
            other.num.clone()
        };
        let (num, den) = if self.den == other.den {
            (&self.num + &rhs_num, self.den.clone())
        } else {
            (
                &(&self.num * &other.den) + &(&rhs_num * &self.den),
                &self.den * &other.den,
            )
        };
        RatFunc::new(num, den).expect("product of nonzero denominators")
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn eval_rat(&self, point: &[Rat]) -> Result<Rat> {
        let d = self.den.eval_rat(point)?;
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.num.eval_rat(point)? / d)
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<f64> {
        let d = self.den.eval_f64(point)?;
        if d == 0.0 {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.num.eval_f64(point)? / d)
    }

    pub fn compose(&self, subs: &[MPoly]) -> Result<RatFunc> {
        RatFunc::new(self.num.compose(subs)?, self.den.compose(subs)?)
    }

    pub fn embed(&self, target: &VarContext) -> Result<RatFunc> {
        RatFunc::new(self.num.embed(target)?, self.den.embed(target)?)
    }

    /// Rendering used as a factor in a product (parenthesised unless atomic).
    pub fn fmt_factor(&self) -> String {
        if self.is_polynomial() {
            self.num.fmt_factor()
        } else {
            format!("({self})")
        }
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.ctx() == other.ctx() && &self.num * &other.den == &other.num * &self.den
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num.fmt_factor(), self.den.fmt_factor())
        }
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $op:expr) => {
        impl std::ops::$tr<&RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: &RatFunc) -> RatFunc {
                ratfunc_arith(self, rhs, $op).expect("rational function arithmetic")
            }
        }
    };
}

forward_op!(Add, add, RatFuncOp::Add);
forward_op!(Sub, sub, RatFuncOp::Sub);
forward_op!(Mul, mul, RatFuncOp::Mul);

impl From<MPoly> for RatFunc {
    fn from(p: MPoly) -> Self {
        RatFunc::from_poly(p)
    }
}
