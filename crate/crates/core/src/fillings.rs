//! Fillings of column diagrams: statistics, non-attacking / packed / standard
//! enumeration, standardization and destandardization, and the maps used by
//! the Hall–Littlewood expansion (`ι_U`, descent groups, `Nu`, `ω`).

use crate::arith::{DenFactor, Monomial, Poly, RatExpr, Rational};
use crate::error::{Error, Result};
use crate::shapes::{Cell, Composition, Diagram, Permutation, SubsetMask};
use num_traits::One;
use serde_json::{json, Value};
use std::fmt;

/// Upper bound on `|γ|` accepted by the enumerators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeBound(pub usize);

impl Default for SizeBound {
    fn default() -> Self {
        SizeBound(10)
    }
}

impl SizeBound {
    pub fn check(&self, n: usize) -> Result<()> {
        if n > self.0 {
            Err(Error::SizeLimitExceeded { n, max: self.0 })
        } else {
            Ok(())
        }
    }
}

/// An assignment of positive integers to the cells of a diagram.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Filling {
    diagram: Diagram,
    cols: Vec<Vec<usize>>,
}

impl Filling {
    /// Columns are listed left to right, each bottom to top.
    pub fn from_columns(cols: Vec<Vec<usize>>) -> Result<Self> {
        if cols.iter().flatten().any(|&v| v == 0) {
            return Err(Error::PreconditionViolated("filling entries must be positive".into()));
        }
        let diagram = Diagram::new(cols.iter().map(Vec::len).collect());
        Ok(Filling { diagram, cols })
    }

    /// Parses `1;4,5,3;2,3,1,2` (columns separated by `;`, entries bottom to top).
    pub fn parse(s: &str) -> Result<Self> {
        let cols = s
            .split(';')
            .map(|col| {
                col.split(',')
                    .map(str::trim)
                    .filter(|e| !e.is_empty())
                    .map(|e| e.parse::<usize>().map_err(|_| Error::Parse(format!("bad entry {e:?} in {s:?}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_columns(cols)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed filling {v}"));
        let cols: Vec<Vec<usize>> = v
            .get("cols")
            .and_then(Value::as_array)
            .ok_or_else(bad)?
            .iter()
            .map(|c| {
                c.as_array()
                    .ok_or_else(bad)?
                    .iter()
                    .map(|e| e.as_u64().map(|x| x as usize).ok_or_else(bad))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let f = Self::from_columns(cols)?;
        if let Some(shape) = v.get("shape") {
            let shape: Vec<usize> = shape
                .as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|e| e.as_u64().map(|x| x as usize).ok_or_else(bad))
                .collect::<Result<_>>()?;
            if shape != f.diagram.heights() {
                return Err(bad());
            }
        }
        Ok(f)
    }

    pub fn to_json(&self) -> Value {
        json!({ "shape": self.diagram.heights(), "cols": self.cols })
    }

    fn from_reading_values(diagram: &Diagram, order: &[Cell], values: &[usize]) -> Filling {
        let mut cols: Vec<Vec<usize>> = diagram.heights().iter().map(|&h| vec![0; h]).collect();
        for (u, &v) in order.iter().zip(values) {
            cols[u.col - 1][u.row - 1] = v;
        }
        Filling { diagram: diagram.clone(), cols }
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn columns(&self) -> &[Vec<usize>] {
        &self.cols
    }

    pub fn size(&self) -> usize {
        self.diagram.size()
    }

    /// Entry at `u`; panics when `u` is outside the diagram.
    pub fn get(&self, u: Cell) -> usize {
        self.cols[u.col - 1][u.row - 1]
    }

    pub fn max_entry(&self) -> usize {
        self.cols.iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn is_non_attacking(&self) -> bool {
        let order = self.diagram.reading_order();
        order.iter().enumerate().all(|(i, &u)| {
            order[i + 1..].iter().all(|&v| !self.diagram.attacks(u, v) || self.get(u) != self.get(v))
        })
    }

    /// Bottom-row entries from left to right (empty columns skipped).
    pub fn bottom_row(&self) -> Vec<usize> {
        self.cols.iter().filter_map(|c| c.first().copied()).collect()
    }

    /// Whether the bottom row is order-equivalent to `β(γ)`.
    pub fn bottom_row_ok(&self, gamma: &Composition) -> bool {
        gamma.beta_perm().order_equivalent(&self.bottom_row())
    }

    pub fn is_descent(&self, u: Cell) -> bool {
        self.diagram.south(u).is_some_and(|s| self.get(u) > self.get(s))
    }

    /// Cells above the bottom row whose entry exceeds the entry below.
    pub fn descents(&self) -> Vec<Cell> {
        self.diagram.hat_cells().filter(|&u| self.is_descent(u)).collect()
    }

    pub fn maj(&self) -> usize {
        self.descents().into_iter().map(|u| self.diagram.leg(u).unwrap() + 1).sum()
    }

    /// Number of coinversion triples. Both triple types count when the
    /// entries `(x, z, y)` increase cyclically.
    pub fn coinv(&self) -> usize {
        let d = &self.diagram;
        let mut count = 0;
        for x in d.hat_cells() {
            let y = d.south(x).unwrap();
            let (vx, vy) = (self.get(x), self.get(y));
            for z in d.arm_cells(x) {
                let vz = self.get(z);
                if (vx < vz && vz < vy) || (vz < vy && vy < vx) || (vy < vx && vx < vz) {
                    count += 1;
                }
            }
        }
        count
    }

    /// `q^maj t^coinv ∏ (1-t)/(1-q^{leg+1} t^{arm+1})` over cells above the
    /// bottom row whose entry differs from the one below.
    pub fn weight(&self) -> RatExpr {
        let d = &self.diagram;
        let mut k = 0;
        let mut den = Vec::new();
        for u in d.hat_cells() {
            if self.get(u) != self.get(d.south(u).unwrap()) {
                k += 1;
                den.push(DenFactor::qt(d.leg(u).unwrap() as u32 + 1, d.arm(u).unwrap() as u32 + 1));
            }
        }
        let mono = Poly::monomial(Rational::one(), Monomial::new(self.maj() as u32, self.coinv() as u32, 0));
        let num = &mono * &(Poly::one() - Poly::var(crate::arith::Var::T)).pow(k);
        RatExpr::new(num, den)
    }

    pub fn reading_word(&self) -> Vec<usize> {
        self.diagram.reading_order().into_iter().map(|u| self.get(u)).collect()
    }

    /// Multiplicities of the values `1..=max_entry`.
    pub fn content(&self) -> Vec<usize> {
        let mut c = vec![0; self.max_entry()];
        for &v in self.cols.iter().flatten() {
            c[v - 1] += 1;
        }
        c
    }

    pub fn is_packed(&self) -> bool {
        self.content().iter().all(|&m| m > 0)
    }

    /// The subset of `[n-1]` of the content composition of a packed filling.
    pub fn content_subset(&self) -> Result<SubsetMask> {
        Composition::new(self.content()).to_subset()
    }

    /// The standard filling with the same relative order, ties broken by
    /// reading order.
    pub fn standardize(&self) -> StandardFilling {
        let order = self.diagram.reading_order();
        let mut idx: Vec<usize> = (0..order.len()).collect();
        idx.sort_by_key(|&i| (self.get(order[i]), i));
        let mut values = vec![0; order.len()];
        for (rank, &i) in idx.iter().enumerate() {
            values[i] = rank + 1;
        }
        StandardFilling::new(Self::from_reading_values(&self.diagram, &order, &values))
            .expect("ranks form a permutation")
    }
}

impl fmt::Display for Filling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols: Vec<String> = self
            .cols
            .iter()
            .map(|c| c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        f.write_str(&cols.join(";"))
    }
}

/// A filling by `1..=n` used exactly once each. Cells and values are
/// interchangeable identifiers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StandardFilling {
    filling: Filling,
    pos: Vec<Cell>,
}

impl StandardFilling {
    pub fn new(filling: Filling) -> Result<Self> {
        let n = filling.size();
        let mut pos = vec![None; n];
        for u in filling.diagram.cells() {
            let v = filling.get(u);
            if v > n || pos[v - 1].is_some() {
                return Err(Error::PreconditionViolated(format!("{filling} is not standard")));
            }
            pos[v - 1] = Some(u);
        }
        let pos = pos.into_iter().map(Option::unwrap).collect();
        Ok(StandardFilling { filling, pos })
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(Filling::parse(s)?)
    }

    pub fn filling(&self) -> &Filling {
        &self.filling
    }

    pub fn into_filling(self) -> Filling {
        self.filling
    }

    pub fn diagram(&self) -> &Diagram {
        &self.filling.diagram
    }

    pub fn size(&self) -> usize {
        self.pos.len()
    }

    /// The cell holding value `i` (1-based).
    pub fn cell_of(&self, i: usize) -> Cell {
        self.pos[i - 1]
    }

    pub fn value_at(&self, u: Cell) -> usize {
        self.filling.get(u)
    }

    fn empty_set(&self) -> SubsetMask {
        SubsetMask::empty(self.size()).expect("degree checked by enumeration")
    }

    fn set_where(&self, pred: impl Fn(usize) -> bool) -> SubsetMask {
        let mut s = self.empty_set();
        for i in (1..self.size()).filter(|&i| pred(i)) {
            s.insert(i);
        }
        s
    }

    /// `ID(τ)`: `i` such that `i+1` precedes `i` in the reading word.
    pub fn inverse_descents(&self) -> SubsetMask {
        let mut at = vec![0; self.size() + 1];
        for (k, v) in self.filling.reading_word().into_iter().enumerate() {
            at[v] = k;
        }
        self.set_where(|i| at[i + 1] < at[i])
    }

    /// `V(τ)`: inverse descents, plus `i` whose cell attacks the cell of `i+1`.
    pub fn v_set(&self) -> SubsetMask {
        let id = self.inverse_descents();
        let d = self.diagram();
        self.set_where(|i| id.contains(i) || d.attacks(self.cell_of(i), self.cell_of(i + 1)))
    }

    /// `W(τ)`: `i` with `i+1` directly below it.
    pub fn w_set(&self) -> SubsetMask {
        let d = self.diagram();
        self.set_where(|i| d.south(self.cell_of(i)) == Some(self.cell_of(i + 1)))
    }

    /// `δ_S(τ)`: the filling with content `S` that standardizes to `τ`.
    pub fn destandardize(&self, s: &SubsetMask) -> Result<Filling> {
        let v = self.v_set();
        if s.degree() != self.size() || !v.is_subset(s) {
            return Err(Error::PreconditionViolated(format!("{s} does not contain V(τ) = {v}")));
        }
        let word: Vec<usize> = s
            .to_composition()
            .parts()
            .iter()
            .enumerate()
            .flat_map(|(k, &m)| std::iter::repeat(k + 1).take(m))
            .collect();
        let cols = self.filling.cols.iter().map(|c| c.iter().map(|&x| word[x - 1]).collect()).collect();
        Ok(Filling { diagram: self.diagram().clone(), cols })
    }

    pub fn descents(&self) -> Vec<Cell> {
        self.filling.descents()
    }

    /// The values occupying descent cells, ascending.
    pub fn descent_values(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.descents().into_iter().map(|u| self.value_at(u)).collect();
        v.sort_unstable();
        v
    }

    pub fn maj(&self) -> usize {
        self.filling.maj()
    }

    pub fn coinv(&self) -> usize {
        self.filling.coinv()
    }

    /// No descents.
    pub fn is_st0(&self) -> bool {
        self.descents().is_empty()
    }

    /// Every descent drops by exactly one to the cell below.
    pub fn is_st1(&self) -> bool {
        let d = self.diagram();
        self.descents().into_iter().all(|u| self.value_at(d.south(u).unwrap()) + 1 == self.value_at(u))
    }

    /// `ι_U`: for each maximal run `{i, …, i+k-1}` of `U`, reverse the values
    /// `i..=i+k` (which occupy a vertical strip of one column).
    pub fn iota(&self, u: &SubsetMask) -> Result<StandardFilling> {
        if !self.is_st0() {
            return Err(Error::PreconditionViolated(format!("{} has descents", self.filling)));
        }
        let w = self.w_set();
        if u.degree() != self.size() || !u.is_subset(&w) {
            return Err(Error::PreconditionViolated(format!("{u} is not contained in W(τ) = {w}")));
        }
        let n = self.size();
        let mut map: Vec<usize> = (0..=n).collect();
        let members = u.members();
        let mut k = 0;
        while k < members.len() {
            let start = members[k];
            let mut end = start;
            while k + 1 < members.len() && members[k + 1] == end + 1 {
                k += 1;
                end += 1;
            }
            // run start..=end reverses values start..=end+1
            let top = end + 1;
            for v in start..=top {
                map[v] = start + top - v;
            }
            k += 1;
        }
        let cols = self.filling.cols.iter().map(|c| c.iter().map(|&x| map[x]).collect()).collect();
        StandardFilling::new(Filling { diagram: self.diagram().clone(), cols })
    }

    /// Sorts every column to decrease from bottom to top.
    pub fn column_sorted(&self) -> StandardFilling {
        let cols = self
            .filling
            .cols
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort_unstable_by(|a, b| b.cmp(a));
                c
            })
            .collect();
        StandardFilling::new(Filling { diagram: self.diagram().clone(), cols }).unwrap()
    }

    /// The maximal vertical run of cells containing the cell of `i` in which
    /// every cell except the lowest is a descent. Returned bottom to top.
    pub fn descent_group(&self, i: usize) -> Vec<Cell> {
        let d = self.diagram();
        let f = &self.filling;
        let c = self.cell_of(i);
        let mut bottom = c;
        while f.is_descent(bottom) {
            bottom = d.south(bottom).unwrap();
        }
        let mut top = c;
        loop {
            let above = Cell::new(top.row + 1, top.col);
            if d.contains(above) && f.is_descent(above) {
                top = above;
            } else {
                break;
            }
        }
        (bottom.row..=top.row).map(|r| Cell::new(r, c.col)).collect()
    }

    /// `Nu(τ)`: inverse descents, plus `i` attacking `i+1` through descent groups.
    pub fn nu_set(&self) -> SubsetMask {
        let id = self.inverse_descents();
        let d = self.diagram();
        let groups: Vec<Vec<Cell>> = (1..=self.size()).map(|i| self.descent_group(i)).collect();
        self.set_where(|i| {
            id.contains(i)
                || groups[i - 1].iter().any(|&a| groups[i].iter().any(|&b| d.attacks(a, b)))
        })
    }

    /// `h - #{i : i and i+1 share a column}`.
    pub fn omega(&self) -> usize {
        let d = self.diagram();
        let h = d.size() - d.heights().iter().filter(|&&x| x > 0).count();
        let shared = (1..self.size()).filter(|&i| self.cell_of(i).col == self.cell_of(i + 1).col).count();
        h - shared
    }

    /// `(leg + 1, arm)` of the cell holding `i`.
    pub fn leg_arm_of(&self, i: usize) -> (u32, u32) {
        let u = self.cell_of(i);
        let d = self.diagram();
        (d.leg(u).unwrap() as u32 + 1, d.arm(u).unwrap() as u32)
    }

    /// The weight of `δ_S(τ)` computed from `τ` alone: cells whose value lies
    /// outside `W(τ)`, or in `S ∩ W(τ)`, contribute `(1-t)/(1-q^{leg+1}t^{arm+1})`.
    pub fn destandardized_weight(&self, s: &SubsetMask) -> Result<RatExpr> {
        if s.degree() != self.size() || !self.v_set().is_subset(s) {
            return Err(Error::PreconditionViolated(format!("{s} does not contain V(τ)")));
        }
        let w = self.w_set();
        let d = self.diagram();
        let mut den = Vec::new();
        for u in d.hat_cells() {
            let v = self.value_at(u);
            if !w.contains(v) || s.contains(v) {
                den.push(DenFactor::qt(d.leg(u).unwrap() as u32 + 1, d.arm(u).unwrap() as u32 + 1));
            }
        }
        let mono = Poly::monomial(Rational::one(), Monomial::new(self.maj() as u32, self.coinv() as u32, 0));
        let num = &mono * &(Poly::one() - Poly::var(crate::arith::Var::T)).pow(den.len() as u32);
        Ok(RatExpr::new(num, den))
    }

    /// Sum of `arm(u)` over descent cells.
    pub fn coinv_des(&self) -> usize {
        self.descents().into_iter().map(|u| self.diagram().arm(u).unwrap()).sum()
    }
}

impl fmt::Display for StandardFilling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.filling.fmt(f)
    }
}

/// `dg(inc(γ))` for a strong composition within the bound.
pub fn shape_of(gamma: &Composition, bound: SizeBound) -> Result<Diagram> {
    if !gamma.is_strong() || gamma.is_empty() {
        return Err(Error::PreconditionViolated(format!("{gamma} is not a nonempty strong composition")));
    }
    bound.check(gamma.size())?;
    Ok(gamma.inc_sort().diagram())
}

enum Alphabet {
    /// Entries `1..=n`, the used values must form `{1, …, m}`.
    Packed,
    /// Entries `1..=n`, all distinct.
    Standard,
    /// Entries `1..=m`, unrestricted.
    UpTo(usize),
}

enum BottomRow<'a> {
    Pattern(&'a Permutation),
    Exact(&'a [usize]),
}

/// Backtracking over non-attacking fillings in reading order.
struct Search<'a> {
    order: Vec<Cell>,
    /// earlier reading positions attacked by each position
    conflicts: Vec<Vec<usize>>,
    /// bottom-row slot of each reading position
    bottom_slot: Vec<Option<usize>>,
    bottom: BottomRow<'a>,
    alphabet: Alphabet,
}

struct SearchState {
    values: Vec<usize>,
    count: Vec<usize>,
    distinct: usize,
    max: usize,
    bottom_vals: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(d: &Diagram, bottom: BottomRow<'a>, alphabet: Alphabet) -> Self {
        let order = d.reading_order();
        let conflicts =
            (0..order.len()).map(|i| (0..i).filter(|&j| d.attacks(order[i], order[j])).collect()).collect();
        let mut slot = 0;
        let bottom_slot = order
            .iter()
            .map(|u| {
                (u.row == 1).then(|| {
                    slot += 1;
                    slot - 1
                })
            })
            .collect();
        Search { order, conflicts, bottom_slot, bottom, alphabet }
    }

    fn run(&self, mut visit: impl FnMut(&[usize])) {
        let n = self.order.len();
        let top = match self.alphabet {
            Alphabet::Packed | Alphabet::Standard => n,
            Alphabet::UpTo(m) => m,
        };
        let mut st = SearchState {
            values: vec![0; n],
            count: vec![0; top + 1],
            distinct: 0,
            max: 0,
            bottom_vals: Vec::new(),
        };
        self.go(0, top, &mut st, &mut visit);
    }

    fn admissible(&self, pos: usize, v: usize, st: &SearchState) -> bool {
        if self.conflicts[pos].iter().any(|&j| st.values[j] == v) {
            return false;
        }
        if matches!(self.alphabet, Alphabet::Standard) && st.count[v] > 0 {
            return false;
        }
        if let Some(slot) = self.bottom_slot[pos] {
            match self.bottom {
                BottomRow::Exact(row) => return row[slot] == v,
                BottomRow::Pattern(perm) => {
                    let p = perm.one_line();
                    return st.bottom_vals.iter().enumerate().all(|(j, &w)| (w < v) == (p[j] < p[slot]));
                }
            }
        }
        true
    }

    fn go(&self, pos: usize, top: usize, st: &mut SearchState, visit: &mut impl FnMut(&[usize])) {
        let n = self.order.len();
        if pos == n {
            if matches!(self.alphabet, Alphabet::Packed) && st.distinct != st.max {
                return;
            }
            visit(&st.values);
            return;
        }
        for v in 1..=top {
            if !self.admissible(pos, v, st) {
                continue;
            }
            if matches!(self.alphabet, Alphabet::Packed) {
                // values missing below the running maximum must fit in the remaining cells
                let (distinct, max) = (st.distinct + usize::from(st.count[v] == 0), st.max.max(v));
                if max - distinct > n - pos - 1 {
                    continue;
                }
            }
            let prev_max = st.max;
            st.values[pos] = v;
            if st.count[v] == 0 {
                st.distinct += 1;
            }
            st.count[v] += 1;
            st.max = st.max.max(v);
            let is_bottom = self.bottom_slot[pos].is_some();
            if is_bottom {
                st.bottom_vals.push(v);
            }
            self.go(pos + 1, top, st, visit);
            if is_bottom {
                st.bottom_vals.pop();
            }
            st.count[v] -= 1;
            if st.count[v] == 0 {
                st.distinct -= 1;
            }
            st.max = prev_max;
            st.values[pos] = 0;
        }
    }
}

/// Packed fillings in `NAT(γ)`, lexicographic in the reading word.
pub fn packed_nat(gamma: &Composition, bound: SizeBound) -> Result<Vec<Filling>> {
    let d = shape_of(gamma, bound)?;
    let beta = gamma.beta_perm();
    let search = Search::new(&d, BottomRow::Pattern(&beta), Alphabet::Packed);
    let mut out = Vec::new();
    search.run(|vals| out.push(Filling::from_reading_values(&d, &search.order, vals)));
    Ok(out)
}

/// `ST(γ)`, lexicographic in the reading word.
pub fn standard_fillings(gamma: &Composition, bound: SizeBound) -> Result<Vec<StandardFilling>> {
    let d = shape_of(gamma, bound)?;
    let beta = gamma.beta_perm();
    let search = Search::new(&d, BottomRow::Pattern(&beta), Alphabet::Standard);
    let mut out = Vec::new();
    search.run(|vals| {
        let f = Filling::from_reading_values(&d, &search.order, vals);
        out.push(StandardFilling::new(f).expect("distinct entries"));
    });
    Ok(out)
}

/// `ST₀(γ)`: standard fillings without descents.
pub fn st0(gamma: &Composition, bound: SizeBound) -> Result<Vec<StandardFilling>> {
    Ok(standard_fillings(gamma, bound)?.into_iter().filter(StandardFilling::is_st0).collect())
}

/// `ST₁(γ)`: standard fillings whose descents drop by exactly one.
pub fn st1(gamma: &Composition, bound: SizeBound) -> Result<Vec<StandardFilling>> {
    Ok(standard_fillings(gamma, bound)?.into_iter().filter(StandardFilling::is_st1).collect())
}

/// Non-attacking fillings of `dg(inc(γ))` with entries in `1..=max_entry`
/// and the given bottom row.
pub fn fillings_with_bottom_row(
    gamma: &Composition,
    max_entry: usize,
    bottom: &[usize],
    bound: SizeBound,
) -> Result<Vec<Filling>> {
    let d = shape_of(gamma, bound)?;
    if bottom.len() != gamma.len() {
        return Err(Error::PreconditionViolated(format!("bottom row {bottom:?} does not fit {gamma}")));
    }
    let search = Search::new(&d, BottomRow::Exact(bottom), Alphabet::UpTo(max_entry));
    let mut out = Vec::new();
    search.run(|vals| out.push(Filling::from_reading_values(&d, &search.order, vals)));
    Ok(out)
}
