use super::{format_rational, parse_rational, pow_rational, rat, Assignment, Monomial, Poly, Rational, Var};
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A structured denominator factor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DenFactor {
    /// `1 - scale * q^cq * t^ct`. Unspecialized factors have `scale = 1`.
    QtBinomial { cq: u32, ct: u32, scale: Rational },
    /// `m * a + b`
    JackLinear { m: u32, b: u32 },
}

enum FactorValue {
    Factor(DenFactor),
    Constant(Rational),
}

impl DenFactor {
    /// `1 - q^cq t^ct`
    pub fn qt(cq: u32, ct: u32) -> Self {
        assert!(cq + ct > 0, "1 - q^0 t^0 is the zero polynomial");
        DenFactor::QtBinomial { cq, ct, scale: Rational::one() }
    }

    /// `m a + b`
    pub fn jack(m: u32, b: u32) -> Self {
        assert!(m >= 1 && b >= 1, "Jack denominator factors need m >= 1 and b >= 1");
        DenFactor::JackLinear { m, b }
    }

    pub fn to_poly(&self) -> Poly {
        match self {
            DenFactor::QtBinomial { cq, ct, scale } => {
                Poly::one() - Poly::monomial(scale.clone(), Monomial::new(*cq, *ct, 0))
            }
            DenFactor::JackLinear { m, b } => {
                Poly::from_terms([(Monomial::new(0, 0, 1), rat(*m as i64)), (Monomial::ONE, rat(*b as i64))])
            }
        }
    }

    fn specialize(&self, assign: &Assignment) -> Result<FactorValue> {
        let value = match self {
            DenFactor::QtBinomial { cq, ct, scale } => {
                let (mut cq, mut ct, mut s) = (*cq, *ct, scale.clone());
                if let Some(v) = assign.get(Var::Q) {
                    s *= pow_rational(v, cq);
                    cq = 0;
                }
                if let Some(v) = assign.get(Var::T) {
                    s *= pow_rational(v, ct);
                    ct = 0;
                }
                if cq + ct == 0 {
                    FactorValue::Constant(Rational::one() - s)
                } else if s.is_zero() {
                    FactorValue::Constant(Rational::one())
                } else {
                    FactorValue::Factor(DenFactor::QtBinomial { cq, ct, scale: s })
                }
            }
            DenFactor::JackLinear { m, b } => match assign.get(Var::A) {
                Some(v) => FactorValue::Constant(rat(*m as i64) * v + rat(*b as i64)),
                None => FactorValue::Factor(self.clone()),
            },
        };
        match value {
            FactorValue::Constant(c) if c.is_zero() => Err(Error::ZeroDenominator(self.to_string())),
            v => Ok(v),
        }
    }

    fn render(&self, latex: bool) -> String {
        match self {
            DenFactor::QtBinomial { scale, .. } if !scale.is_one() => {
                let p = self.to_poly();
                let s = if latex { p.latex() } else { p.to_string() };
                s.replace(' ', "")
            }
            DenFactor::QtBinomial { cq, ct, .. } => {
                let m = Poly::monomial(Rational::one(), Monomial::new(*cq, *ct, 0));
                format!("1-{}", if latex { m.latex() } else { m.to_string() })
            }
            DenFactor::JackLinear { m, b } => {
                if *m == 1 {
                    format!("a+{b}")
                } else {
                    format!("{m}a+{b}")
                }
            }
        }
    }

    fn to_json(&self, mult: u32) -> Value {
        match self {
            DenFactor::QtBinomial { cq, ct, scale } if scale.is_one() => json!(["qt", cq, ct, mult]),
            DenFactor::QtBinomial { cq, ct, scale } => json!(["qt", cq, ct, mult, format_rational(scale)]),
            DenFactor::JackLinear { m, b } => json!(["jack", m, b, mult]),
        }
    }

    fn from_json(v: &Value) -> Result<(DenFactor, u32)> {
        let bad = || Error::Parse(format!("malformed denominator entry {v}"));
        let arr = v.as_array().ok_or_else(bad)?;
        let int = |i: usize| -> Result<u32> {
            arr.get(i).and_then(Value::as_u64).and_then(|x| u32::try_from(x).ok()).ok_or_else(bad)
        };
        let kind = arr.first().and_then(Value::as_str).ok_or_else(bad)?;
        let (c1, c2, mult) = (int(1)?, int(2)?, int(3)?);
        let f = match (kind, arr.len()) {
            ("qt", 4) if c1 + c2 > 0 => DenFactor::qt(c1, c2),
            ("qt", 5) if c1 + c2 > 0 => {
                let s = parse_rational(arr[4].as_str().ok_or_else(bad)?)?;
                if s.is_zero() {
                    return Err(bad());
                }
                DenFactor::QtBinomial { cq: c1, ct: c2, scale: s }
            }
            ("jack", 4) if c1 >= 1 && c2 >= 1 => DenFactor::jack(c1, c2),
            _ => return Err(bad()),
        };
        if mult == 0 {
            return Err(bad());
        }
        Ok((f, mult))
    }
}

impl fmt::Display for DenFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

/// `numerator / product of denominator factors`, kept normalized: no factor
/// in the denominator divides the numerator.
#[derive(Clone, Debug, Default)]
pub struct RatExpr {
    num: Poly,
    den: BTreeMap<DenFactor, u32>,
}

impl RatExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_poly(num: Poly) -> Self {
        RatExpr { num, den: BTreeMap::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn new<I: IntoIterator<Item = DenFactor>>(num: Poly, den: I) -> Self {
        let mut map = BTreeMap::new();
        for f in den {
            *map.entry(f).or_insert(0) += 1;
        }
        RatExpr { num, den: map }.normalized()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> impl Iterator<Item = (&DenFactor, u32)> {
        self.den.iter().map(|(f, m)| (f, *m))
    }

    pub fn denominator_poly(&self) -> Poly {
        self.den.iter().fold(Poly::one(), |acc, (f, m)| &acc * &f.to_poly().pow(*m))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_poly() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Cancels every denominator factor that exactly divides the numerator.
    pub fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        for (f, mult) in self.den.iter_mut() {
            let fp = f.to_poly();
            while *mult > 0 {
                match self.num.div_exact(&fp) {
                    Some(quot) => {
                        self.num = quot;
                        *mult -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|_, m| *m > 0);
        self
    }

    pub fn div_factor(&self, f: DenFactor) -> Self {
        let mut out = self.clone();
        *out.den.entry(f).or_insert(0) += 1;
        out.normalized()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = RatExpr::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RatExpr { num: self.num.scale(c), den: self.den.clone() }.normalized()
    }

    /// Sums many terms with a single normalization at the end. Terms sharing
    /// a denominator are added first, so this is much cheaper than folding `+`.
    pub fn sum<'a, I: IntoIterator<Item = &'a RatExpr>>(terms: I) -> RatExpr {
        let mut groups: BTreeMap<&BTreeMap<DenFactor, u32>, Poly> = BTreeMap::new();
        for t in terms.into_iter().filter(|t| !t.is_zero()) {
            let slot = groups.entry(&t.den).or_insert_with(Poly::zero);
            *slot = &*slot + &t.num;
        }
        let mut l: BTreeMap<DenFactor, u32> = BTreeMap::new();
        for den in groups.keys() {
            for (f, m) in *den {
                let e = l.entry(f.clone()).or_insert(0);
                *e = (*e).max(*m);
            }
        }
        let mut num = Poly::zero();
        for (den, p) in groups {
            let part = RatExpr { num: p, den: den.clone() };
            num = &num + &part.lift(&l);
        }
        RatExpr { num, den: l }.normalized()
    }

    fn lcm(&self, other: &RatExpr) -> BTreeMap<DenFactor, u32> {
        let mut l = self.den.clone();
        for (f, m) in &other.den {
            let e = l.entry(f.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        l
    }

    /// Numerator over the common denominator `l`, which must contain `self.den`.
    fn lift(&self, l: &BTreeMap<DenFactor, u32>) -> Poly {
        let mut p = self.num.clone();
        for (f, m) in l {
            let have = self.den.get(f).copied().unwrap_or(0);
            if *m > have {
                p = &p * &f.to_poly().pow(m - have);
            }
        }
        p
    }

    pub fn specialize(&self, assign: &Assignment) -> Result<RatExpr> {
        if assign.is_empty() {
            return Ok(self.clone());
        }
        let mut num = self.num.substitute(assign);
        let mut den = BTreeMap::new();
        for (f, m) in &self.den {
            match f.specialize(assign)? {
                FactorValue::Factor(g) => *den.entry(g).or_insert(0) += m,
                FactorValue::Constant(c) => num = num.scale(&pow_rational(&(Rational::one() / c), *m)),
            }
        }
        Ok(RatExpr { num, den }.normalized())
    }

    /// Full evaluation; every variable that occurs must be assigned.
    pub fn eval(&self, assign: &Assignment) -> Result<Rational> {
        self.specialize(assign)?
            .as_constant()
            .ok_or_else(|| Error::PreconditionViolated(format!("unassigned variables remain in {self}")))
    }

    /// Splits the numerator as `(1-t)^k * rest` with `k` maximal.
    fn split_one_minus_t(&self) -> (u32, Poly) {
        let omt = Poly::one() - Poly::var(Var::T);
        let mut rest = self.num.clone();
        let mut k = 0;
        if rest.is_zero() {
            return (0, rest);
        }
        while let Some(quot) = rest.div_exact(&omt) {
            rest = quot;
            k += 1;
        }
        (k, rest)
    }

    fn numerator_text(&self, latex: bool, wrap: bool) -> String {
        let render = |p: &Poly| if latex { p.latex() } else { p.to_string() };
        let (k, rest) = self.split_one_minus_t();
        if k == 0 {
            let s = render(&rest);
            return if wrap && rest.len() > 1 { format!("({s})") } else { s };
        }
        let ot = match k {
            1 => "(1-t)".to_string(),
            k if latex && k > 9 => format!("(1-t)^{{{k}}}"),
            k => format!("(1-t)^{k}"),
        };
        if rest.is_one() {
            ot
        } else if rest.as_constant().is_some_and(|c| c == -Rational::one()) {
            format!("-{ot}")
        } else if rest.len() == 1 {
            format!("{}{ot}", render(&rest))
        } else {
            format!("{ot}({})", render(&rest))
        }
    }

    fn denominator_text(&self, latex: bool) -> String {
        if latex && self.den.len() == 1 && self.den.values().all(|m| *m == 1) {
            return self.den.keys().next().unwrap().render(true);
        }
        let mut s = String::new();
        for (f, m) in &self.den {
            s.push_str(&format!("({})", f.render(latex)));
            if *m > 1 {
                s.push_str(&if latex && *m > 9 { format!("^{{{m}}}") } else { format!("^{m}") });
            }
        }
        s
    }

    pub fn latex(&self) -> String {
        if self.is_poly() {
            return self.numerator_text(true, false);
        }
        format!("\\frac{{{}}}{{{}}}", self.numerator_text(true, false), self.denominator_text(true))
    }

    pub fn to_json(&self) -> Value {
        let num: Vec<Value> =
            self.num.terms().map(|(m, c)| json!([m.q, m.t, m.a, format_rational(c)])).collect();
        let den: Vec<Value> = self.den.iter().map(|(f, m)| f.to_json(*m)).collect();
        json!({ "num": num, "den": den })
    }

    pub fn from_json(v: &Value) -> Result<RatExpr> {
        let bad = || Error::Parse(format!("malformed rational expression {v}"));
        let mut num = Poly::zero();
        for term in v.get("num").and_then(Value::as_array).ok_or_else(bad)? {
            let t = term.as_array().filter(|t| t.len() == 4).ok_or_else(bad)?;
            let e = |i: usize| t[i].as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(bad);
            let c = parse_rational(t[3].as_str().ok_or_else(bad)?)?;
            num.add_term(Monomial::new(e(0)?, e(1)?, e(2)?), c);
        }
        let mut den = BTreeMap::new();
        for entry in v.get("den").and_then(Value::as_array).ok_or_else(bad)? {
            let (f, m) = DenFactor::from_json(entry)?;
            *den.entry(f).or_insert(0) += m;
        }
        Ok(RatExpr { num, den }.normalized())
    }
}

impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            return f.write_str(&self.numerator_text(false, false));
        }
        write!(f, "{} / {}", self.numerator_text(false, true), self.denominator_text(false))
    }
}

impl PartialEq for RatExpr {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        let l = self.lcm(other);
        self.lift(&l) == other.lift(&l)
    }
}

impl Eq for RatExpr {}

impl From<Poly> for RatExpr {
    fn from(p: Poly) -> Self {
        RatExpr::from_poly(p)
    }
}

impl From<i64> for RatExpr {
    fn from(n: i64) -> Self {
        RatExpr::constant(rat(n))
    }
}

impl<'a> Add<&'a RatExpr> for &'a RatExpr {
    type Output = RatExpr;
    fn add(self, rhs: &'a RatExpr) -> RatExpr {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatExpr { num: &self.num + &rhs.num, den: self.den.clone() }.normalized();
        }
        let l = self.lcm(rhs);
        RatExpr { num: &self.lift(&l) + &rhs.lift(&l), den: l }.normalized()
    }
}

impl<'a> Sub<&'a RatExpr> for &'a RatExpr {
    type Output = RatExpr;
    fn sub(self, rhs: &'a RatExpr) -> RatExpr {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatExpr> for &'a RatExpr {
    type Output = RatExpr;
    fn mul(self, rhs: &'a RatExpr) -> RatExpr {
        if self.is_zero() || rhs.is_zero() {
            return RatExpr::zero();
        }
        let mut den = self.den.clone();
        for (f, m) in &rhs.den {
            *den.entry(f.clone()).or_insert(0) += m;
        }
        RatExpr { num: &self.num * &rhs.num, den }.normalized()
    }
}

impl Neg for &RatExpr {
    type Output = RatExpr;
    fn neg(self) -> RatExpr {
        RatExpr { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatExpr {
    type Output = RatExpr;
    fn neg(self) -> RatExpr {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<RatExpr> for RatExpr {
            type Output = RatExpr;
            fn $f(self, rhs: RatExpr) -> RatExpr {
                (&self).$f(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
