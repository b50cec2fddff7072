//! Exact arithmetic: rationals, multivariate polynomials over a fixed
//! variable context, rational functions, and linear solving over the
//! rational-function field.
//!
//! Variables are split into *coordinates* (`y1..yn`) and *parameters*
//! (`c1..cs`). Monomials are ordered graded-lexicographically with the
//! coordinates before the parameters.

mod matrix;
mod poly;
mod ratfunc;
mod solve;

pub use matrix::RatMatrix;
pub use poly::{poly_arith, MPoly, Monomial, PolyOp, VarContext};
pub use ratfunc::{ratfunc_arith, RatFunc, RatFuncOp};
pub use solve::{linear_solve_ratfunc, LinearSolution};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored reduced with a positive denominator.
pub type Rat = num_rational::BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-3/2"` or `" 7 / 4 "`. Decimal points are rejected so that
/// every value in a space file stays exact.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::parse(s, "not an exact rational (expected \"p\" or \"p/q\")"))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::parse(s, "not an exact rational (expected \"p\" or \"p/q\")"))?;
    if d.is_zero() {
        return Err(Error::parse(s, "zero denominator"));
    }
    Ok(Rat::new(n, d))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Oversized numerator/denominator: divide in floating point piecewise.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn rats_to_f64(v: &[Rat]) -> Vec<f64> {
    v.iter().map(rat_to_f64).collect()
}

/// Serializes a rational as its exact string form (`"3/2"`).
pub fn serialize_rat<S: serde::Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

pub fn serialize_rats<S: serde::Serializer>(
    v: &[Rat],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

/// Best rational approximation with denominator at most `max_den`
/// (continued fractions).
pub fn rationalize(x: f64, max_den: i64) -> Rat {
    if !x.is_finite() {
        return rat(0);
    }
    let sign = if x < 0.0 { -1 } else { 1 };
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    for _ in 0..64 {
        let a = v.floor();
        if a > 1e15 {
            break;
        }
        let a_i = a as i128;
        let p2 = a_i * p1 + p0;
        let q2 = a_i * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = v - a;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return rat(0);
    }
    Rat::new(BigInt::from(sign as i128 * p1), BigInt::from(q1))
}

/// Expressions that can be evaluated at a point of their variable context.
pub trait Substitute {
    fn context(&self) -> &VarContext;
    fn at_rat(&self, point: &[Rat]) -> Result<Rat>;
    fn at_f64(&self, point: &[f64]) -> Result<f64>;
}

impl Substitute for MPoly {
    fn context(&self) -> &VarContext {
        self.ctx()
    }
    fn at_rat(&self, point: &[Rat]) -> Result<Rat> {
        self.eval_rat(point)
    }
    fn at_f64(&self, point: &[f64]) -> Result<f64> {
        self.eval_f64(point)
    }
}

impl Substitute for RatFunc {
    fn context(&self) -> &VarContext {
        self.ctx()
    }
    fn at_rat(&self, point: &[Rat]) -> Result<Rat> {
        self.eval_rat(point)
    }
    fn at_f64(&self, point: &[f64]) -> Result<f64> {
        self.eval_f64(point)
    }
}

fn assignment_point<T: Clone>(ctx: &VarContext, assignment: &[(&str, T)]) -> Result<Vec<T>> {
    ctx.names()
        .iter()
        .map(|n| {
            assignment
                .iter()
                .find(|(k, _)| k == n)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| Error::parse(n.as_str(), "variable has no assigned value"))
        })
        .collect()
}

/// Exact evaluation under a name-to-value assignment covering every variable.
pub fn substitute<E: Substitute>(expr: &E, assignment: &[(&str, Rat)]) -> Result<Rat> {
    expr.at_rat(&assignment_point(expr.context(), assignment)?)
}

pub fn substitute_f64<E: Substitute>(expr: &E, assignment: &[(&str, f64)]) -> Result<f64> {
    expr.at_f64(&assignment_point(expr.context(), assignment)?)
}
