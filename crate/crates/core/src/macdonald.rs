//! Quasisymmetric Macdonald polynomials `G_γ(X; q, t)` and their
//! specializations, each computed by several independent formulas.
//!
//! Per-filling contributions are computed in parallel and then summed in
//! enumeration order, so results do not depend on the thread count.

use crate::arith::{DenFactor, Monomial, Poly, RatExpr, Rational, Var};
use crate::error::{Error, Result};
use crate::fillings::{
    fillings_with_bottom_row, packed_nat, st0, st1, standard_fillings, Filling, SizeBound, StandardFilling,
};
use crate::qsym::{Basis, QSymExpr, XPoly};
use crate::shapes::{Composition, SubsetMask};
use num_traits::One;
use rayon::prelude::*;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormulaTag {
    Direct,
    Fundamental,
    HLDirect,
    HLFundamental,
    JackDirect,
    JackFundamental,
}

impl FormulaTag {
    pub const ALL: [FormulaTag; 6] = [
        FormulaTag::Direct,
        FormulaTag::Fundamental,
        FormulaTag::HLDirect,
        FormulaTag::HLFundamental,
        FormulaTag::JackDirect,
        FormulaTag::JackFundamental,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormulaTag::Direct => "direct",
            FormulaTag::Fundamental => "fundamental",
            FormulaTag::HLDirect => "hl-direct",
            FormulaTag::HLFundamental => "hl-fundamental",
            FormulaTag::JackDirect => "jack-direct",
            FormulaTag::JackFundamental => "jack-fundamental",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown formula {s:?}")))
    }

    /// The basis the formula naturally produces.
    pub fn native_basis(self) -> Basis {
        match self {
            FormulaTag::Direct | FormulaTag::JackDirect => Basis::Monomial,
            _ => Basis::Fundamental,
        }
    }

    /// Whether the output lives in `a` rather than `q, t`.
    pub fn is_jack(self) -> bool {
        matches!(self, FormulaTag::JackDirect | FormulaTag::JackFundamental)
    }
}

impl fmt::Display for FormulaTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn compute(tag: FormulaTag, gamma: &Composition, bound: SizeBound) -> Result<QSymExpr> {
    match tag {
        FormulaTag::Direct => g_direct(gamma, bound),
        FormulaTag::Fundamental => g_fundamental(gamma, bound),
        FormulaTag::HLDirect => g_hl_direct(gamma, bound),
        FormulaTag::HLFundamental => g_hl_fundamental(gamma, bound),
        FormulaTag::JackDirect => jack_direct(gamma, bound),
        FormulaTag::JackFundamental => jack_fundamental(gamma, bound),
    }
}

fn t() -> Poly {
    Poly::var(Var::T)
}

fn one_minus_t() -> Poly {
    Poly::one() - t()
}

fn t_pow(k: usize) -> Poly {
    Poly::monomial(Rational::one(), Monomial::new(0, k as u32, 0))
}

fn neg_t_pow(k: usize) -> Poly {
    let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
    Poly::monomial(sign, Monomial::new(0, k as u32, 0))
}

/// Sums `(subset, coefficient)` contributions in the given order.
fn collect(degree: usize, basis: Basis, parts: Vec<Vec<(SubsetMask, RatExpr)>>) -> Result<QSymExpr> {
    QSymExpr::from_terms(degree, basis, parts.into_iter().flatten())
}

/// `Σ_{T ∈ NAT(γ) packed} wt(T) M_T`.
pub fn g_direct(gamma: &Composition, bound: SizeBound) -> Result<QSymExpr> {
    let fillings = packed_nat(gamma, bound)?;
    let parts = fillings
        .par_iter()
        .map(|f| Ok(vec![(f.content_subset()?, f.weight())]))
        .collect::<Result<Vec<_>>>()?;
    collect(gamma.size(), Basis::Monomial, parts)
}

/// `1 - q^L t^A` over `1 - q^L t^{A+1}`.
fn u_ratio(leg1: u32, arm: u32) -> RatExpr {
    RatExpr::new(Poly::one_minus(Monomial::new(leg1, arm, 0)), [DenFactor::qt(leg1, arm + 1)])
}

fn fundamental_terms(tau: &StandardFilling) -> Vec<(SubsetMask, RatExpr)> {
    let d = tau.diagram();
    let w = tau.w_set();
    let v = tau.v_set();
    let mut den = Vec::new();
    for u in d.hat_cells().filter(|&u| !w.contains(tau.value_at(u))) {
        den.push(DenFactor::qt(d.leg(u).unwrap() as u32 + 1, d.arm(u).unwrap() as u32 + 1));
    }
    let mono = Poly::monomial(Rational::one(), Monomial::new(tau.maj() as u32, tau.coinv() as u32, 0));
    let prefactor = RatExpr::new(&mono * &one_minus_t().pow(den.len() as u32), den);
    w.subsets()
        .map(|u| {
            let mut c = &prefactor * &RatExpr::from_poly(neg_t_pow(u.len()));
            for i in u.members() {
                let (leg1, arm) = tau.leg_arm_of(i);
                c = &c * &u_ratio(leg1, arm);
            }
            (v.union(&u), c)
        })
        .collect()
}

/// The fundamental expansion summed over `ST(γ)`.
pub fn g_fundamental(gamma: &Composition, bound: SizeBound) -> Result<QSymExpr> {
    let st = standard_fillings(gamma, bound)?;
    let parts = st.par_iter().map(fundamental_terms).collect();
    collect(gamma.size(), Basis::Fundamental, parts)
}

/// `G_γ(X; 0, t)` summed over `ST₀(γ)`.
pub fn g_hl_direct(gamma: &Composition, bound: SizeBound) -> Result<QSymExpr> {
    let h = gamma.h_stat();
    let st = st0(gamma, bound)?;
    let parts = st
        .par_iter()
        .map(|tau| {
            let w = tau.w_set();
            let v = tau.v_set();
            let pre = &t_pow(tau.coinv()) * &one_minus_t().pow((h - w.len()) as u32);
            w.subsets().map(|u| (v.union(&u), RatExpr::from_poly(&pre * &neg_t_pow(u.len())))).collect()
        })
        .collect();
    collect(gamma.size(), Basis::Fundamental, parts)
}

/// `G_γ(X; 0, t)` as a single sum over `ST₁(γ)`, one `F` term per filling.
pub fn g_hl_fundamental(gamma: &Composition, bound: SizeBound) -> Result<QSymExpr> {
    let st = st1(gamma, bound)?;
    let parts = st
        .par_iter()
        .map(|tau| {
            let (coinv, des_arm) = (tau.coinv(), tau.coinv_des());
            let e = coinv.checked_sub(des_arm).ok_or_else(|| {
                Error::PreconditionViolated(format!("coinv {coinv} < descent arms {des_arm} in {tau}"))
            })?;
            let c = &(&one_minus_t().pow(tau.omega() as u32) * &neg_t_pow(tau.descents().len())) * &t_pow(e);
            Ok(vec![(tau.nu_set(), RatExpr::from_poly(c))])
        })
        .collect::<Result<Vec<_>>>()?;
    collect(gamma.size(), Basis::Fundamental, parts)
}

/// `a·L + A + 1` as a polynomial in `a`.
fn jack_linear(leg1: u32, arm: u32) -> Poly {
    DenFactor::jack(leg1, arm + 1).to_poly()
}

/// `Σ_{T packed} Π_{T(u)=T(South u)} (a(leg+1)+arm+1) M_T`.
pub fn jack_direct(gamma: &Composition, bound: SizeBound) -> Result<QSymExpr> {
    let fillings = packed_nat(gamma, bound)?;
    let parts = fillings
        .par_iter()
        .map(|f: &Filling| {
            let d = f.diagram();
            let mut c = Poly::one();
            for u in d.hat_cells().filter(|&u| f.get(u) == f.get(d.south(u).unwrap())) {
                c = &c * &jack_linear(d.leg(u).unwrap() as u32 + 1, d.arm(u).unwrap() as u32);
            }
            Ok(vec![(f.content_subset()?, RatExpr::from_poly(c))])
        })
        .collect::<Result<Vec<_>>>()?;
    collect(gamma.size(), Basis::Monomial, parts)
}

/// The Jack analogue of the fundamental expansion.
pub fn jack_fundamental(gamma: &Composition, bound: SizeBound) -> Result<QSymExpr> {
    let st = standard_fillings(gamma, bound)?;
    let parts = st
        .par_iter()
        .map(|tau| {
            let w = tau.w_set();
            let v = tau.v_set();
            let mut pre = Poly::one();
            for i in w.members() {
                let (leg1, arm) = tau.leg_arm_of(i);
                pre = &pre * &jack_linear(leg1, arm);
            }
            let pre = RatExpr::from_poly(pre);
            w.subsets()
                .map(|u| {
                    let sign = if u.len() % 2 == 0 { 1 } else { -1 };
                    let mut c = pre.scale(&Rational::from_integer(sign.into()));
                    for i in u.members() {
                        let (leg1, arm) = tau.leg_arm_of(i);
                        let num = Poly::from_terms([
                            (Monomial::new(0, 0, 1), Rational::from_integer(leg1.into())),
                            (Monomial::ONE, Rational::from_integer(arm.into())),
                        ]);
                        c = &c * &RatExpr::new(num, [DenFactor::jack(leg1, arm + 1)]);
                    }
                    (v.union(&u), c)
                })
                .collect()
        })
        .collect();
    collect(gamma.size(), Basis::Fundamental, parts)
}

/// `Σ wt(T) x^T` over non-attacking fillings of `dg(inc(α⁺))` with entries in
/// `[m]`, `m = ℓ(α)`, and bottom row equal to the last `ℓ(α⁺)` entries of `β(α)`.
pub fn e_sigma(alpha: &Composition, bound: SizeBound) -> Result<XPoly> {
    let m = alpha.len();
    bound.check(m)?;
    let gamma = alpha.collapse();
    let beta = alpha.beta_perm();
    let pi = &beta.one_line()[m - gamma.len()..];
    let fillings = fillings_with_bottom_row(&gamma, m, pi, bound)?;
    let terms: Vec<(Vec<u32>, RatExpr)> = fillings
        .par_iter()
        .map(|f| {
            let mut e = vec![0u32; m];
            for &v in f.columns().iter().flatten() {
                e[v - 1] += 1;
            }
            (e, f.weight())
        })
        .collect();
    Ok(XPoly::from_terms(m, terms))
}

/// `Σ_{α : α⁺ = γ, ℓ(α) = m} E_α`, the defining sum truncated to `m` variables.
pub fn g_truncated(gamma: &Composition, m: usize, bound: SizeBound) -> Result<XPoly> {
    bound.check(gamma.size())?;
    bound.check(m)?;
    let l = gamma.len();
    let mut out = XPoly::zero(m);
    if m < l {
        return Ok(out);
    }
    for positions in choose(m, l) {
        let mut parts = vec![0; m];
        for (&p, &g) in positions.iter().zip(gamma.parts()) {
            parts[p] = g;
        }
        out = out.add(&e_sigma(&Composition::new(parts), bound)?);
    }
    Ok(out)
}

fn choose(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if m < k {
        return vec![];
    }
    let mut out = choose(m - 1, k);
    for mut c in choose(m - 1, k - 1) {
        c.push(m - 1);
        out.push(c);
    }
    out.sort();
    out
}

/// Checks the expansion of `Π (1-t)/(1-q^{leg+1}t^{arm+1})` as a signed sum
/// over subsets, for a multiset of `(leg, arm)` pairs.
pub fn binomial_lemma_check(factors: &[(u32, u32)]) -> bool {
    assert!(factors.len() <= 12, "at most 12 factors");
    let lhs = RatExpr::new(
        one_minus_t().pow(factors.len() as u32),
        factors.iter().map(|&(l, a)| DenFactor::qt(l + 1, a + 1)),
    );
    let mut rhs = Vec::new();
    for mask in 0u32..(1 << factors.len()) {
        let mut term = RatExpr::from_poly(neg_t_pow(mask.count_ones() as usize));
        for (k, &(l, a)) in factors.iter().enumerate() {
            if mask >> k & 1 == 1 {
                term = &term * &u_ratio(l + 1, a);
            }
        }
        rhs.push(term);
    }
    lhs == RatExpr::sum(&rhs)
}
