//! Quasisymmetric expressions of fixed degree in the monomial (`M_S`) and
//! fundamental (`F_S`) bases, indexed by subsets of `[n-1]`.

use crate::arith::{Assignment, RatExpr};
use crate::error::{Error, Result};
use crate::shapes::{Composition, SubsetMask};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    Monomial,
    Fundamental,
}

impl Basis {
    pub fn symbol(self) -> &'static str {
        match self {
            Basis::Monomial => "M",
            Basis::Fundamental => "F",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "M" | "m" | "monomial" => Ok(Basis::Monomial),
            "F" | "f" | "fundamental" => Ok(Basis::Fundamental),
            _ => Err(Error::Parse(format!("unknown basis {s:?}"))),
        }
    }
}

/// A homogeneous quasisymmetric expression with rational-function coefficients.
/// Zero coefficients are never stored; iteration is by ascending bitmask.
#[derive(Clone, Debug)]
pub struct QSymExpr {
    degree: usize,
    basis: Basis,
    coeffs: BTreeMap<SubsetMask, RatExpr>,
}

impl QSymExpr {
    pub fn zero(degree: usize, basis: Basis) -> Result<Self> {
        SubsetMask::empty(degree)?;
        Ok(QSymExpr { degree, basis, coeffs: BTreeMap::new() })
    }

    /// Sums `(subset, coefficient)` pairs, normalizing each coefficient once.
    pub fn from_terms<I: IntoIterator<Item = (SubsetMask, RatExpr)>>(
        degree: usize,
        basis: Basis,
        terms: I,
    ) -> Result<Self> {
        let mut groups: BTreeMap<SubsetMask, Vec<RatExpr>> = BTreeMap::new();
        for (s, c) in terms {
            if s.degree() != degree {
                return Err(Error::PreconditionViolated(format!("subset {s} is not of degree {degree}")));
            }
            groups.entry(s).or_default().push(c);
        }
        let mut out = QSymExpr::zero(degree, basis)?;
        for (s, cs) in groups {
            let c = RatExpr::sum(&cs);
            if !c.is_zero() {
                out.coeffs.insert(s, c);
            }
        }
        Ok(out)
    }

    /// The basis element indexed by `s`.
    pub fn basis_element(basis: Basis, s: SubsetMask) -> Self {
        let mut e = QSymExpr { degree: s.degree(), basis, coeffs: BTreeMap::new() };
        e.coeffs.insert(s, RatExpr::one());
        e
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SubsetMask, &RatExpr)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, s: &SubsetMask) -> RatExpr {
        self.coeffs.get(s).cloned().unwrap_or_else(RatExpr::zero)
    }

    /// Adds `c` to the coefficient of `s`. Panics on a degree mismatch.
    pub fn add_term(&mut self, s: SubsetMask, c: &RatExpr) {
        assert_eq!(s.degree(), self.degree, "subset {s} has the wrong degree");
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.remove(&s) {
            Some(old) => (&old + c).normalized(),
            None => c.clone().normalized(),
        };
        if !sum.is_zero() {
            self.coeffs.insert(s, sum);
        }
    }

    fn check_compatible(&self, other: &QSymExpr) -> Result<()> {
        if self.degree != other.degree || self.basis != other.basis {
            return Err(Error::PreconditionViolated(format!(
                "cannot combine degree {} {:?} with degree {} {:?}",
                self.degree, self.basis, other.degree, other.basis
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &QSymExpr) -> Result<QSymExpr> {
        self.check_compatible(other)?;
        let terms = self.coeffs.iter().chain(&other.coeffs).map(|(s, c)| (*s, c.clone()));
        QSymExpr::from_terms(self.degree, self.basis, terms)
    }

    pub fn scale(&self, c: &RatExpr) -> QSymExpr {
        let mut out = QSymExpr { degree: self.degree, basis: self.basis, coeffs: BTreeMap::new() };
        for (s, x) in &self.coeffs {
            out.add_term(*s, &(x * c));
        }
        out
    }

    /// `F_S = Σ_{S' ⊇ S} M_{S'}`.
    pub fn f_to_m(&self) -> Result<QSymExpr> {
        if self.basis != Basis::Fundamental {
            return Err(Error::PreconditionViolated("f_to_m expects the fundamental basis".into()));
        }
        let terms = self.coeffs.iter().flat_map(|(s, c)| s.supersets().map(move |sup| (sup, c.clone())));
        QSymExpr::from_terms(self.degree, Basis::Monomial, terms)
    }

    /// `M_S = Σ_{S' ⊇ S} (-1)^{|S' \ S|} F_{S'}`.
    pub fn m_to_f(&self) -> Result<QSymExpr> {
        if self.basis != Basis::Monomial {
            return Err(Error::PreconditionViolated("m_to_f expects the monomial basis".into()));
        }
        let terms = self.coeffs.iter().flat_map(|(s, c)| {
            s.supersets().map(move |sup| (sup, if (sup.len() - s.len()) % 2 == 1 { -c } else { c.clone() }))
        });
        QSymExpr::from_terms(self.degree, Basis::Fundamental, terms)
    }

    pub fn to_basis(&self, basis: Basis) -> QSymExpr {
        match (self.basis, basis) {
            (a, b) if a == b => self.clone(),
            (Basis::Fundamental, _) => self.f_to_m().unwrap(),
            _ => self.m_to_f().unwrap(),
        }
    }

    /// Substitutes values for some of `q`, `t`, `a` in every coefficient.
    pub fn specialize(&self, assign: &Assignment) -> Result<QSymExpr> {
        let mut out = QSymExpr { degree: self.degree, basis: self.basis, coeffs: BTreeMap::new() };
        for (s, c) in &self.coeffs {
            out.add_term(*s, &c.specialize(assign)?);
        }
        Ok(out)
    }

    /// The first subset (in canonical order) where the two expressions differ
    /// after conversion to the monomial basis, with both coefficients.
    pub fn first_difference(&self, other: &QSymExpr) -> Result<Option<(SubsetMask, RatExpr, RatExpr)>> {
        if self.degree != other.degree {
            return Err(Error::PreconditionViolated(format!(
                "degrees {} and {} differ",
                self.degree, other.degree
            )));
        }
        let a = self.to_basis(Basis::Monomial);
        let b = other.to_basis(Basis::Monomial);
        let mut keys: Vec<&SubsetMask> = a.coeffs.keys().chain(b.coeffs.keys()).collect();
        keys.sort();
        keys.dedup();
        Ok(keys.into_iter().find_map(|s| {
            let (x, y) = (a.coeff(s), b.coeff(s));
            (x != y).then_some((*s, x, y))
        }))
    }

    /// Whether the coefficient of `M_α` depends only on the multiset of parts
    /// of `α`, i.e. the expression is symmetric.
    pub fn is_symmetric(&self) -> bool {
        let m = self.to_basis(Basis::Monomial);
        m.coeffs.iter().all(|(s, c)| {
            s.to_composition()
                .rearrangements()
                .into_iter()
                .all(|r| m.coeff(&r.to_subset().expect("rearrangement of a strong composition")) == *c)
        })
    }

    /// Expands into `x_1, …, x_m` by summing the monomials of each basis
    /// element over index sequences bounded by `m`.
    pub fn expand_vars(&self, m: usize) -> XPoly {
        let mut terms = Vec::new();
        for (s, c) in &self.coeffs {
            match self.basis {
                Basis::Monomial => {
                    let parts = s.to_composition();
                    let parts = parts.parts();
                    each_increasing(m, parts.len(), &mut |idx| {
                        let mut e = vec![0u32; m];
                        for (&i, &p) in idx.iter().zip(parts) {
                            e[i] += p as u32;
                        }
                        terms.push((e, c.clone()));
                    });
                }
                Basis::Fundamental => {
                    each_weak_sequence(m, self.degree, s, &mut |idx| {
                        let mut e = vec![0u32; m];
                        for &i in idx {
                            e[i] += 1;
                        }
                        terms.push((e, c.clone()));
                    });
                }
            }
        }
        XPoly::from_terms(m, terms)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .coeffs
            .iter()
            .map(|(s, c)| {
                json!({
                    "subset": s.members(),
                    "composition": s.to_composition().parts(),
                    "coeff": c.to_json(),
                })
            })
            .collect();
        json!({ "degree": self.degree, "basis": self.basis.symbol(), "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<QSymExpr> {
        let bad = |what: &str| Error::Parse(format!("malformed quasisymmetric expression: {what}"));
        let degree = v.get("degree").and_then(Value::as_u64).ok_or_else(|| bad("degree"))? as usize;
        let basis = Basis::parse(v.get("basis").and_then(Value::as_str).ok_or_else(|| bad("basis"))?)?;
        let mut out = QSymExpr::zero(degree, basis)?;
        for term in v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("terms"))? {
            let members = term
                .get("subset")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("subset"))?
                .iter()
                .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| bad("subset entry")))
                .collect::<Result<Vec<_>>>()?;
            let s = SubsetMask::from_members(degree, members)?;
            if let Some(comp) = term.get("composition") {
                let parts: Vec<usize> = serde_json::from_value(comp.clone()).map_err(|_| bad("composition"))?;
                if Composition::new(parts).to_subset()? != s {
                    return Err(bad("composition does not match subset"));
                }
            }
            out.add_term(s, &RatExpr::from_json(term.get("coeff").ok_or_else(|| bad("coeff"))?)?);
        }
        Ok(out)
    }

    /// e.g. `M_{\{1\}} + \frac{(1-t)(1 + t + qt)}{1-qt^2} M_{\{1,2\}}`.
    pub fn latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (s, c)) in self.coeffs.iter().enumerate() {
            let label = if s.is_empty() {
                format!("{}_{{\\emptyset}}", self.basis.symbol())
            } else {
                let m: Vec<String> = s.members().iter().map(usize::to_string).collect();
                format!("{}_{{\\{{{}\\}}}}", self.basis.symbol(), m.join(","))
            };
            let (neg, mag) = match c.as_constant() {
                Some(r) if r < num_traits::Zero::zero() => (true, -c),
                _ => (false, c.clone()),
            };
            let coeff = if mag == RatExpr::one() {
                String::new()
            } else if mag.is_poly() && mag.numerator().len() > 1 {
                format!("\\left({}\\right) ", mag.latex())
            } else {
                format!("{} ", mag.latex())
            };
            match (k, neg) {
                (0, true) => out.push('-'),
                (_, true) => out.push_str(" - "),
                (0, false) => {}
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&coeff);
            out.push_str(&label);
        }
        out
    }
}

impl PartialEq for QSymExpr {
    /// Equality as quasisymmetric functions, whatever the bases.
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && matches!(self.first_difference(other), Ok(None))
    }
}

impl fmt::Display for QSymExpr {
    /// One term per line, `M_{(1,2)}·coeff` with the subset listed in parentheses.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let lines: Vec<String> = self
            .coeffs
            .iter()
            .map(|(s, c)| {
                let m: Vec<String> = s.members().iter().map(usize::to_string).collect();
                format!("{}_{{({})}}·{}", self.basis.symbol(), m.join(","), c)
            })
            .collect();
        f.write_str(&lines.join("\n"))
    }
}

fn each_increasing(m: usize, k: usize, visit: &mut impl FnMut(&[usize])) {
    fn go(start: usize, m: usize, k: usize, acc: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        if acc.len() == k {
            visit(acc);
            return;
        }
        for i in start..m {
            if m - i < k - acc.len() {
                break;
            }
            acc.push(i);
            go(i + 1, m, k, acc, visit);
            acc.pop();
        }
    }
    go(0, m, k, &mut Vec::with_capacity(k), visit);
}

/// Weakly increasing `i_1 ≤ … ≤ i_n < m` with a strict step after each position in `s`.
fn each_weak_sequence(m: usize, n: usize, s: &SubsetMask, visit: &mut impl FnMut(&[usize])) {
    fn go(m: usize, n: usize, s: &SubsetMask, acc: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        let j = acc.len();
        if j == n {
            visit(acc);
            return;
        }
        let start = match acc.last() {
            None => 0,
            Some(&prev) if s.contains(j) => prev + 1,
            Some(&prev) => prev,
        };
        for i in start..m {
            acc.push(i);
            go(m, n, s, acc, visit);
            acc.pop();
        }
    }
    go(m, n, s, &mut Vec::with_capacity(n), visit);
}

/// An exact polynomial in `x_1, …, x_m` with rational-function coefficients.
#[derive(Clone, Debug)]
pub struct XPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, RatExpr>,
}

impl XPoly {
    pub fn zero(nvars: usize) -> Self {
        XPoly { nvars, terms: BTreeMap::new() }
    }

    /// Sums `(exponents, coefficient)` pairs, normalizing each coefficient once.
    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, RatExpr)>>(nvars: usize, terms: I) -> Self {
        let mut groups: BTreeMap<Vec<u32>, Vec<RatExpr>> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            groups.entry(e).or_default().push(c);
        }
        let mut out = XPoly::zero(nvars);
        for (e, cs) in groups {
            let c = RatExpr::sum(&cs);
            if !c.is_zero() {
                out.terms.insert(e, c);
            }
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &RatExpr)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> RatExpr {
        self.terms.get(exps).cloned().unwrap_or_else(RatExpr::zero)
    }

    /// Panics if the exponent vector has the wrong length.
    pub fn add_term(&mut self, exps: Vec<u32>, c: &RatExpr) {
        assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&exps) {
            Some(old) => (&old + c).normalized(),
            None => c.clone().normalized(),
        };
        if !sum.is_zero() {
            self.terms.insert(exps, sum);
        }
    }

    pub fn add(&self, other: &XPoly) -> XPoly {
        assert_eq!(self.nvars, other.nvars);
        XPoly::from_terms(self.nvars, self.terms.iter().chain(&other.terms).map(|(e, c)| (e.clone(), c.clone())))
    }

    pub fn specialize(&self, assign: &Assignment) -> Result<XPoly> {
        let mut out = XPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &c.specialize(assign)?);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> =
            self.terms.iter().map(|(e, c)| json!({ "exponents": e, "coeff": c.to_json() })).collect();
        json!({ "vars": self.nvars, "terms": terms })
    }

    fn monomial_label(e: &[u32], latex: bool) -> String {
        let mut s = String::new();
        for (i, &k) in e.iter().enumerate().filter(|(_, &k)| k > 0) {
            if latex {
                s.push_str(&format!("x_{{{}}}", i + 1));
            } else {
                s.push_str(&format!("x{}", i + 1));
            }
            if k > 1 {
                s.push_str(&if latex { format!("^{{{k}}}") } else { format!("^{k}") });
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }

    pub fn latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let label = Self::monomial_label(e, true);
                if *c == RatExpr::one() {
                    label
                } else {
                    format!("\\left({}\\right) {label}", c.latex())
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl PartialEq for XPoly {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars
            && self.terms.len() == other.terms.len()
            && self.terms.iter().all(|(e, c)| other.terms.get(e) == Some(c))
    }
}

impl fmt::Display for XPoly {
    /// One term per line, `x1x2^2·coeff`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let lines: Vec<String> =
            self.terms.iter().map(|(e, c)| format!("{}·{}", Self::monomial_label(e, false), c)).collect();
        f.write_str(&lines.join("\n"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subset(n: usize, m: &[usize]) -> SubsetMask {
        SubsetMask::from_members(n, m.iter().copied()).unwrap()
    }

    fn m_of(parts: &[usize]) -> QSymExpr {
        QSymExpr::basis_element(Basis::Monomial, Composition::new(parts.to_vec()).to_subset().unwrap())
    }

    #[test]
    fn f_to_m_example() {
        let f = QSymExpr::basis_element(Basis::Fundamental, subset(5, &[1, 4]));
        let m = f.f_to_m().unwrap();
        let keys: Vec<Vec<usize>> = m.terms().map(|(s, _)| s.members()).collect();
        assert_eq!(keys, vec![vec![1, 4], vec![1, 2, 4], vec![1, 3, 4], vec![1, 2, 3, 4]]);
        assert!(m.terms().all(|(_, c)| *c == RatExpr::one()));
        // in degree 8 the free elements are 2, 3, 5, 6, 7
        let f8 = QSymExpr::basis_element(Basis::Fundamental, subset(8, &[1, 4]));
        assert_eq!(f8.f_to_m().unwrap().len(), 32);
    }

    #[test]
    fn conversions_small() {
        let full = QSymExpr::basis_element(Basis::Fundamental, SubsetMask::full(5).unwrap());
        assert_eq!(full.f_to_m().unwrap().len(), 1);
        let m_empty = QSymExpr::basis_element(Basis::Monomial, subset(2, &[]));
        let f = m_empty.m_to_f().unwrap();
        assert_eq!(f.coeff(&subset(2, &[])), RatExpr::one());
        assert_eq!(f.coeff(&subset(2, &[1])), RatExpr::from(-1));
        assert_eq!(f.f_to_m().unwrap().terms().count(), 1);
        assert!(m_empty.f_to_m().is_err());
    }

    #[test]
    fn expand_examples() {
        let m = m_of(&[1, 2]).expand_vars(2);
        assert_eq!(m.len(), 1);
        assert_eq!(m.coeff(&[1, 2]), RatExpr::one());
        let f = QSymExpr::basis_element(Basis::Fundamental, subset(2, &[1])).expand_vars(2);
        assert_eq!(f.len(), 1);
        assert_eq!(f.coeff(&[1, 1]), RatExpr::one());
        assert!(m_of(&[1, 1, 1]).expand_vars(2).is_zero());
    }

    #[test]
    fn symmetry() {
        assert!(m_of(&[1, 2]).add(&m_of(&[2, 1])).unwrap().is_symmetric());
        assert!(!m_of(&[1, 2]).is_symmetric());
        assert!(m_of(&[1, 1, 1]).is_symmetric());
    }

    #[test]
    fn formats() {
        let e = m_of(&[1, 2]).add(&m_of(&[1, 1, 1]).scale(&RatExpr::from(-2))).unwrap();
        assert_eq!(e.latex(), r"M_{\{1\}} - 2 M_{\{1,2\}}");
        assert_eq!(e.to_string(), "M_{(1)}·1\nM_{(1,2)}·-2");
        assert_eq!(
            e.to_json().to_string(),
            r#"{"basis":"M","degree":3,"terms":[{"coeff":{"den":[],"num":[[0,0,0,"1"]]},"composition":[1,2],"subset":[1]},{"coeff":{"den":[],"num":[[0,0,0,"-2"]]},"composition":[1,1,1],"subset":[1,2]}]}"#
        );
        let back = QSymExpr::from_json(&e.to_json()).unwrap();
        assert_eq!(back, e);
        assert_eq!(QSymExpr::basis_element(Basis::Fundamental, subset(1, &[])).to_string(), "F_{()}·1");
    }

    #[test]
    fn first_difference_reports_subset() {
        let a = m_of(&[1, 2]);
        let b = m_of(&[2, 1]);
        let (s, x, y) = a.first_difference(&b).unwrap().unwrap();
        assert_eq!(s, subset(3, &[1]));
        assert_eq!((x, y), (RatExpr::one(), RatExpr::zero()));
        assert!(a.first_difference(&a.m_to_f().unwrap()).unwrap().is_none());
    }
}
