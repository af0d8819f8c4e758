use super::{format_rational, latex_rational, pow_rational, rat, Assignment, Rational};
use crate::error::{Error, Result};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    Q,
    T,
    A,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::Q => "q",
            Var::T => "t",
            Var::A => "a",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "q" => Ok(Var::Q),
            "t" => Ok(Var::T),
            "a" | "alpha" => Ok(Var::A),
            _ => Err(Error::Parse(format!("unknown variable {s:?}"))),
        }
    }
}

/// `q^q t^t a^a`. Ordered graded-lexicographically with `q > t > a`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub q: u32,
    pub t: u32,
    pub a: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { q: 0, t: 0, a: 0 };

    pub fn new(q: u32, t: u32, a: u32) -> Self {
        Monomial { q, t, a }
    }

    pub fn degree(&self) -> u32 {
        self.q + self.t + self.a
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    fn key(&self) -> (u32, u32, u32, u32) {
        (self.degree(), self.q, self.t, self.a)
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        Monomial::new(self.q + o.q, self.t + o.t, self.a + o.a)
    }

    fn divides(&self, o: &Monomial) -> bool {
        self.q <= o.q && self.t <= o.t && self.a <= o.a
    }

    fn div(&self, o: &Monomial) -> Monomial {
        Monomial::new(self.q - o.q, self.t - o.t, self.a - o.a)
    }

    fn exps(&self) -> [(Var, u32); 3] {
        [(Var::Q, self.q), (Var::T, self.t), (Var::A, self.a)]
    }

    fn render(&self, latex: bool) -> String {
        let mut s = String::new();
        for (v, e) in self.exps() {
            match e {
                0 => {}
                1 => s.push_str(v.name()),
                e if latex && e > 9 => s.push_str(&format!("{}^{{{e}}}", v.name())),
                e => s.push_str(&format!("{}^{e}", v.name())),
            }
        }
        s
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in `q`, `t`, `a` with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, Monomial::ONE)
    }

    pub fn var(v: Var) -> Self {
        let m = match v {
            Var::Q => Monomial::new(1, 0, 0),
            Var::T => Monomial::new(0, 1, 0),
            Var::A => Monomial::new(0, 0, 1),
        };
        Self::monomial(Rational::one(), m)
    }

    pub fn monomial(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// `1 - q^i t^j`
    pub fn one_minus(m: Monomial) -> Self {
        Self::one() - Self::monomial(Rational::one(), m)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Terms in display order: ascending degree, and within a degree
    /// descending lex (q-heavy monomials first).
    pub fn display_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then_with(|| b.cmp(a)));
        v
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    pub fn mul_monomial(&self, c: &Rational, mono: &Monomial) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (m.mul(mono), x * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (*dm, dc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            if !dm.divides(rm) {
                return None;
            }
            let m = rm.div(&dm);
            let c = rc / &dc;
            rem = &rem - &d.mul_monomial(&c, &m);
            quot.add_term(m, c);
        }
        Some(quot)
    }

    pub fn substitute(&self, assign: &Assignment) -> Poly {
        if assign.is_empty() {
            return self.clone();
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut c = c.clone();
            let mut rest = *m;
            for (v, e) in m.exps() {
                if let Some(val) = assign.get(v) {
                    c *= pow_rational(val, e);
                    match v {
                        Var::Q => rest.q = 0,
                        Var::T => rest.t = 0,
                        Var::A => rest.a = 0,
                    }
                }
            }
            out.add_term(rest, c);
        }
        out
    }

    pub fn latex(&self) -> String {
        self.render(true)
    }

    fn render(&self, latex: bool) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.display_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mag = c.abs();
            if m.is_one() {
                s.push_str(&if latex { latex_rational(&mag) } else { format_rational(&mag) });
            } else {
                if !mag.is_one() {
                    if mag.is_integer() {
                        s.push_str(&mag.numer().to_string());
                    } else if latex {
                        s.push_str(&latex_rational(&mag));
                    } else {
                        s.push_str(&format!("({})", format_rational(&mag)));
                    }
                }
                s.push_str(&m.render(latex));
            }
        }
        s
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl From<i64> for Poly {
    fn from(n: i64) -> Self {
        Poly::constant(rat(n))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
