//! Exact arithmetic: rationals, polynomials in `q`, `t`, `a`, and rational
//! expressions whose denominators are kept as multisets of structured factors.
//!
//! Denominators of the form `1 - q^i t^j` and `m a + b` are never expanded, so
//! no multivariate GCD is required. Equality of [`RatExpr`] values is decided
//! by cross-multiplication.

mod poly;
mod ratexpr;

pub use poly::{Monomial, Poly, Var};
pub use ratexpr::{DenFactor, RatExpr};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn latex_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        let sign = if r.is_negative() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
    }
}

pub(crate) fn pow_rational(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// A partial assignment of rational values to the variables `q`, `t`, `a`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    pub q: Option<Rational>,
    pub t: Option<Rational>,
    pub a: Option<Rational>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: Var, value: Rational) -> Self {
        *self.slot_mut(var) = Some(value);
        self
    }

    pub fn get(&self, var: Var) -> Option<&Rational> {
        match var {
            Var::Q => self.q.as_ref(),
            Var::T => self.t.as_ref(),
            Var::A => self.a.as_ref(),
        }
    }

    fn slot_mut(&mut self, var: Var) -> &mut Option<Rational> {
        match var {
            Var::Q => &mut self.q,
            Var::T => &mut self.t,
            Var::A => &mut self.a,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_none() && self.t.is_none() && self.a.is_none()
    }

    /// Parses `q=0,t=1/2`. An empty string is the empty assignment.
    pub fn parse(s: &str) -> Result<Self> {
        let mut out = Self::default();
        for item in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected var=value, got {item:?}")))?;
            let var = Var::parse(name.trim())?;
            let slot = out.slot_mut(var);
            if slot.is_some() {
                return Err(Error::Parse(format!("variable {} assigned twice", var.name())));
            }
            *slot = Some(parse_rational(value)?);
        }
        Ok(out)
    }
}

impl std::fmt::Display for Assignment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = [Var::Q, Var::T, Var::A]
            .into_iter()
            .filter_map(|v| self.get(v).map(|r| format!("{}={}", v.name(), format_rational(r))))
            .collect();
        f.write_str(&parts.join(","))
    }
}
