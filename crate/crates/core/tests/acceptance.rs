//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use num_traits::One;
use qmac::arith::{Assignment, DenFactor, Monomial, Poly, RatExpr, Rational, Var};
use qmac::fillings::{packed_nat, st0, standard_fillings, Filling, SizeBound, StandardFilling};
use qmac::macdonald::{
    binomial_lemma_check, g_direct, g_fundamental, g_hl_direct, g_hl_fundamental, g_truncated, jack_direct,
    jack_fundamental,
};
use qmac::qsym::{Basis, QSymExpr};
use qmac::shapes::{Cell, Composition, Diagram, SubsetMask};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

const BOUND: SizeBound = SizeBound(7);

fn strong_upto(n: usize) -> Vec<Composition> {
    (1..=n).flat_map(Composition::all_strong).collect()
}

fn subset(n: usize, m: &[usize]) -> SubsetMask {
    SubsetMask::from_members(n, m.iter().copied()).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))
}

fn q() -> Poly {
    Poly::var(Var::Q)
}

fn t() -> Poly {
    Poly::var(Var::T)
}

/// `(1-t) num / (1-qt²)`, the shape of every non-trivial G_(1,2) weight.
fn over_1_qt2(num: Poly) -> RatExpr {
    RatExpr::new(&(Poly::one() - t()) * &num, [DenFactor::qt(1, 2)])
}

fn g12_exact() -> Outcome {
    let start = Instant::now();
    let gamma = Composition::new(vec![1, 2]);
    let g = g_direct(&gamma, BOUND).map_err(|e| e.to_string())?;
    let expected = QSymExpr::from_terms(
        3,
        Basis::Monomial,
        [
            (subset(3, &[1]), RatExpr::one()),
            (subset(3, &[1, 2]), over_1_qt2(&(&Poly::one() + &t()) + &(&q() * &t()))),
        ],
    )
    .unwrap();
    ensure(g.len() == 2, || format!("expected two terms, got\n{g}"))?;
    ensure(g == expected, || format!("G_(1,2) =\n{g}"))?;

    let weights = [
        ("1;2,2", RatExpr::one()),
        ("1;2,3", over_1_qt2(&q() * &t())),
        ("1;3,2", over_1_qt2(Poly::one())),
        ("2;3,1", over_1_qt2(t())),
    ];
    let found: BTreeSet<String> =
        packed_nat(&gamma, BOUND).map_err(|e| e.to_string())?.iter().map(Filling::to_string).collect();
    let listed: BTreeSet<String> = weights.iter().map(|(f, _)| f.to_string()).collect();
    ensure(found == listed, || format!("packed fillings {found:?}"))?;
    for (text, w) in &weights {
        let f = Filling::parse(text).unwrap();
        ensure(f.weight() == *w, || format!("wt({text}) = {}", f.weight()))?;
    }
    ensure(expected.latex() == r"M_{\{1\}} + \frac{(1-t)(1 + t + qt)}{1-qt^2} M_{\{1,2\}}", || {
        format!("latex {}", expected.latex())
    })?;
    within(start, Duration::from_secs(1))?;
    Ok("closed form and all four filling weights exact".into())
}

fn fundamental_vs_direct() -> Outcome {
    let start = Instant::now();
    let sixes = Composition::all_strong(6);
    ensure(sixes.len() == 32, || format!("{} strong compositions of 6", sixes.len()))?;
    let all = strong_upto(6);
    for g in &all {
        let lhs = g_fundamental(g, BOUND).and_then(|e| e.f_to_m()).map_err(|e| e.to_string())?;
        let rhs = g_direct(g, BOUND).map_err(|e| e.to_string())?;
        if let Some((s, a, b)) = lhs.first_difference(&rhs).unwrap() {
            return Err(format!("γ = {g}: at {s}, fundamental gives {a}, direct gives {b}"));
        }
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("{} compositions, |γ| ≤ 6", all.len()))
}

fn hall_littlewood_chain() -> Outcome {
    let q0 = Assignment::parse("q=0").unwrap();
    let all = strong_upto(7);
    for g in &all {
        let fund = g_hl_fundamental(g, BOUND).map_err(|e| e.to_string())?;
        let direct = g_hl_direct(g, BOUND).map_err(|e| e.to_string())?;
        let special = g_fundamental(g, BOUND).and_then(|e| e.specialize(&q0)).map_err(|e| e.to_string())?;
        ensure(fund == direct, || format!("γ = {g}: single-sum and ST₀ forms differ"))?;
        ensure(direct == special, || format!("γ = {g}: ST₀ form differs from q = 0 specialization"))?;
    }
    Ok(format!("{} compositions, |γ| ≤ 7", all.len()))
}

fn jack_chain() -> Outcome {
    let all = strong_upto(5);
    for g in &all {
        let lhs = jack_fundamental(g, BOUND).and_then(|e| e.f_to_m()).map_err(|e| e.to_string())?;
        let rhs = jack_direct(g, BOUND).map_err(|e| e.to_string())?;
        if let Some((s, a, b)) = lhs.first_difference(&rhs).unwrap() {
            return Err(format!("γ = {g}: at {s}, fundamental gives {a}, direct gives {b}"));
        }
        ensure(rhs.terms().all(|(_, c)| c.is_poly()), || format!("γ = {g}: non-polynomial Jack coefficient"))?;
    }
    Ok(format!("{} compositions, |γ| ≤ 5", all.len()))
}

fn truncation() -> Outcome {
    let mut cases = 0;
    for g in strong_upto(5) {
        let l = g.len();
        for m in [l, l + 1].into_iter().filter(|&m| m <= 4) {
            let lhs = g_truncated(&g, m, BOUND).map_err(|e| e.to_string())?;
            let rhs = g_direct(&g, BOUND).map_err(|e| e.to_string())?.expand_vars(m);
            ensure(lhs == rhs, || format!("γ = {g}, m = {m}:\n{lhs}\nvs\n{rhs}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (γ, m) pairs"))
}

/// `t^coinv q^maj Π (1-t)/(1-q^{leg+1}t^{arm+1})` over cells whose value is
/// outside `W(τ)` or inside `S ∩ W(τ)`, assembled from the raw statistics.
fn closed_form_weight(tau: &StandardFilling, s: &SubsetMask) -> RatExpr {
    let d = tau.diagram();
    let w = tau.w_set();
    let mut acc = RatExpr::from_poly(Poly::monomial(
        Rational::one(),
        Monomial::new(tau.maj() as u32, tau.coinv() as u32, 0),
    ));
    for u in d.hat_cells() {
        let v = tau.value_at(u);
        if !w.contains(v) || s.contains(v) {
            let f = DenFactor::qt(d.leg(u).unwrap() as u32 + 1, d.arm(u).unwrap() as u32 + 1);
            acc = &acc * &RatExpr::new(Poly::one() - t(), [f]);
        }
    }
    acc
}

fn destandardization() -> Outcome {
    let mut images = 0;
    for g in strong_upto(6) {
        let packed: BTreeSet<String> =
            packed_nat(&g, BOUND).map_err(|e| e.to_string())?.iter().map(Filling::to_string).collect();
        let mut seen = BTreeSet::new();
        for tau in standard_fillings(&g, BOUND).map_err(|e| e.to_string())? {
            for s in tau.v_set().supersets() {
                let f = tau.destandardize(&s).map_err(|e| e.to_string())?;
                let key = f.to_string();
                ensure(packed.contains(&key), || format!("γ = {g}: δ_{s}({tau}) = {key} is not packed NAT"))?;
                ensure(seen.insert(key.clone()), || format!("γ = {g}: {key} hit twice"))?;
                ensure(f.standardize() == tau, || format!("γ = {g}: std({key}) ≠ {tau}"))?;
                ensure(f.content_subset().unwrap() == s, || format!("γ = {g}: content of {key} ≠ {s}"))?;
                ensure(f.weight() == closed_form_weight(&tau, &s), || format!("γ = {g}: weight of {key}"))?;
            }
        }
        ensure(seen.len() == packed.len(), || format!("γ = {g}: {} images for {} fillings", seen.len(), packed.len()))?;
        images += seen.len();
    }
    Ok(format!("{images} packed fillings reached exactly once"))
}

fn iota_bookkeeping() -> Outcome {
    let mut pairs = 0;
    for g in strong_upto(6) {
        let h = g.h_stat();
        let st: BTreeSet<String> =
            standard_fillings(&g, BOUND).map_err(|e| e.to_string())?.iter().map(|t| t.to_string()).collect();
        for tau in st0(&g, BOUND).map_err(|e| e.to_string())? {
            let w = tau.w_set();
            for u in w.subsets() {
                let tp = tau.iota(&u).map_err(|e| e.to_string())?;
                let ctx = || format!("γ = {g}, τ = {tau}, U = {u}, ι_U(τ) = {tp}");
                ensure(st.contains(&tp.to_string()) && tp.is_st1(), || format!("{}: not in ST₁", ctx()))?;
                ensure(tp.descents().len() == u.len(), || format!("{}: |Des| ≠ |U|", ctx()))?;
                ensure(tp.omega() == h - w.len(), || format!("{}: ω ≠ h − |W|", ctx()))?;
                ensure(tp.nu_set() == tau.v_set().union(&u), || format!("{}: Nu ≠ V ∪ U", ctx()))?;
                ensure(tp.column_sorted() == tau, || format!("{}: column sort does not invert", ctx()))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} (τ, U) pairs"))
}

fn symmetry() -> Outcome {
    let mut count = 0;
    for n in 1..=5 {
        for lambda in Composition::partitions(n) {
            let mut sum = QSymExpr::zero(n, Basis::Monomial).unwrap();
            for g in lambda.rearrangements() {
                sum = sum.add(&g_direct(&g, BOUND).map_err(|e| e.to_string())?).unwrap();
            }
            ensure(sum.is_symmetric(), || format!("λ = {lambda}: rearrangement sum is not symmetric"))?;
            count += 1;
        }
    }
    let lone = g_direct(&Composition::new(vec![1, 2]), BOUND).unwrap();
    ensure(!lone.is_symmetric(), || "G_(1,2) alone reported symmetric".into())?;
    Ok(format!("{count} partitions"))
}

fn binomial_lemma() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_2024);
    for trial in 0..100 {
        let k = rng.gen_range(0..=5);
        let factors: Vec<(u32, u32)> = (0..k).map(|_| (rng.gen_range(0..=3), rng.gen_range(0..=3))).collect();
        ensure(binomial_lemma_check(&factors), || format!("trial {trial}: {factors:?}"))?;
    }
    Ok("100 random multisets".into())
}

fn worked_examples() -> Outcome {
    let start = Instant::now();

    // standardization
    let big_t = Filling::parse("1;4,5,3;2,3,1,2").unwrap();
    let tau = big_t.standardize();
    ensure(tau.to_string() == "2;7,8,5;4,6,1,3", || format!("std = {tau}"))?;
    ensure(tau.filling().reading_word() == [3, 5, 1, 8, 6, 2, 7, 4], || "reading word".into())?;
    ensure(tau.inverse_descents() == subset(8, &[2, 4, 7]), || format!("ID = {}", tau.inverse_descents()))?;
    ensure(tau.v_set() == subset(8, &[2, 4, 6, 7]), || format!("V = {}", tau.v_set()))?;

    // three destandardizations
    for (s, shown) in [
        (subset(8, &[1, 2, 3, 4, 5, 6, 7]), "2;7,8,5;4,6,1,3"),
        (subset(8, &[1, 2, 4, 5, 6, 7]), "2;6,7,4;3,5,1,3"),
        (subset(8, &[2, 4, 6, 7]), "1;4,5,3;2,3,1,2"),
    ] {
        let f = tau.destandardize(&s).map_err(|e| e.to_string())?;
        ensure(f.to_string() == shown, || format!("δ_{s} = {f}, expected {shown}"))?;
    }

    // β and the permuted bottom row
    let alpha = Composition::new(vec![0, 4, 0, 3, 1, 0, 0, 3]);
    ensure(alpha.inc_sort().parts() == [0, 0, 0, 0, 1, 3, 3, 4], || "inc(α)".into())?;
    ensure(alpha.collapse().parts() == [4, 3, 1, 3], || "α⁺".into())?;
    ensure(alpha.beta_perm().one_line() == [7, 6, 3, 1, 5, 8, 4, 2], || format!("β(α) = {}", alpha.beta_perm()))?;
    let gamma = alpha.collapse();
    ensure(gamma.beta_perm().one_line() == [3, 4, 2, 1], || format!("β(α⁺) = {}", gamma.beta_perm()))?;
    let shown = Filling::parse("5;8,4,2;4,1,7;2,2,5,5").unwrap();
    ensure(shown.bottom_row() == [5, 8, 4, 2], || "bottom row".into())?;
    ensure(shown.is_non_attacking() && shown.bottom_row_ok(&gamma), || "displayed filling not in NAT".into())?;
    let with_row = qmac::fillings::fillings_with_bottom_row(&gamma, 8, &[5, 8, 4, 2], SizeBound(11))
        .map_err(|e| e.to_string())?;
    ensure(with_row.contains(&shown), || "displayed filling missing from the enumeration".into())?;

    // Hall-Littlewood statistics
    let tau = StandardFilling::parse("6;8,2,1;7,5,4,3").unwrap();
    ensure(tau.w_set() == subset(8, &[1, 3, 4]), || format!("W = {}", tau.w_set()))?;
    ensure(tau.v_set() == subset(8, &[2, 5, 6, 7]), || format!("V = {}", tau.v_set()))?;
    ensure(tau.inverse_descents() == subset(8, &[2, 7]), || format!("ID = {}", tau.inverse_descents()))?;
    let tp = tau.iota(&subset(8, &[3, 4])).map_err(|e| e.to_string())?;
    ensure(tp.to_string() == "6;8,2,1;7,3,4,5", || format!("ι = {tp}"))?;
    ensure(tp.coinv_des() == 2, || format!("coinv(Des) = {}", tp.coinv_des()))?;
    ensure(tp.omega() == 2, || format!("ω = {}", tp.omega()))?;
    ensure(tp.inverse_descents() == subset(8, &[3, 4, 7]), || format!("ID(τ') = {}", tp.inverse_descents()))?;
    ensure(tp.nu_set() == subset(8, &[2, 3, 4, 5, 6, 7]), || format!("Nu = {}", tp.nu_set()))?;

    // arm and leg of a cell with a long arm
    let d = Diagram::new(vec![3, 1, 4, 2, 1, 4, 3, 5, 4]);
    let u = Cell::new(3, 6);
    ensure(d.leg(u) == Ok(1) && d.arm(u) == Ok(4), || format!("leg {:?}, arm {:?}", d.leg(u), d.arm(u)))?;

    within(start, Duration::from_secs(1))?;
    Ok("all displays reproduced".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("G_(1,2) exact reproduction", g12_exact),
        ("fundamental expansion equals direct sum", fundamental_vs_direct),
        ("Hall-Littlewood chain", hall_littlewood_chain),
        ("Jack chain", jack_chain),
        ("defining sum truncation", truncation),
        ("destandardization bijection", destandardization),
        ("iota bookkeeping", iota_bookkeeping),
        ("rearrangement sums are symmetric", symmetry),
        ("binomial lemma", binomial_lemma),
        ("worked examples", worked_examples),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(note) => println!("criterion {:>2} PASS  {name} ({note}; {secs:.2}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.2}s)", k + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
