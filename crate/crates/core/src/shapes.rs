//! Compositions, the composition/subset bijection, the sorting permutation
//! `β(α)`, and column diagrams in French notation together with their cell
//! statistics (arm, leg, attack, reading order).

use crate::error::{Error, Result};
use std::fmt;

/// A weak composition: an ordered list of nonnegative parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Self {
        Composition { parts }
    }

    /// Rejects zero parts.
    pub fn strong(parts: Vec<usize>) -> Result<Self> {
        let c = Composition { parts };
        if !c.is_strong() {
            return Err(Error::PreconditionViolated(format!("{c} has a zero part")));
        }
        Ok(c)
    }

    /// Parses a comma-separated list such as `1,4,3`. Parentheses are tolerated.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.trim().is_empty() {
            return Ok(Composition::default());
        }
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad part {p:?} in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Composition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `|α|`
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts, zeros included.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_strong(&self) -> bool {
        self.parts.iter().all(|&p| p > 0)
    }

    /// `α⁺`: zero parts removed.
    pub fn collapse(&self) -> Composition {
        Composition { parts: self.parts.iter().copied().filter(|&p| p > 0).collect() }
    }

    /// `inc(α)`: parts sorted weakly increasing.
    pub fn inc_sort(&self) -> Composition {
        let mut parts = self.parts.clone();
        parts.sort_unstable();
        Composition { parts }
    }

    /// `β(α)`, the longest permutation with `α_{β(i)} = inc(α)_i`: positions
    /// sorted by part ascending, ties broken by position descending.
    pub fn beta_perm(&self) -> Permutation {
        let mut pos: Vec<usize> = (1..=self.parts.len()).collect();
        pos.sort_by(|&i, &j| self.parts[i - 1].cmp(&self.parts[j - 1]).then(j.cmp(&i)));
        Permutation(pos)
    }

    /// `h(γ) = |γ| - ℓ(γ)`, the number of cells above the bottom row.
    pub fn h_stat(&self) -> usize {
        self.size() - self.collapse().len()
    }

    /// The subset `{α₁, α₁+α₂, …}` of `[n-1]`.
    pub fn to_subset(&self) -> Result<SubsetMask> {
        if !self.is_strong() {
            return Err(Error::PreconditionViolated(format!("{self} is not a strong composition")));
        }
        let n = self.size();
        let mut s = SubsetMask::empty(n)?;
        let mut acc = 0;
        for &p in &self.parts[..self.parts.len().saturating_sub(1)] {
            acc += p;
            s.insert(acc);
        }
        Ok(s)
    }

    /// Column diagram `dg(α)` with `α_i` cells in column `i`.
    pub fn diagram(&self) -> Diagram {
        Diagram::new(self.parts.clone())
    }

    /// All strong compositions of `n`, in ascending subset-bitmask order.
    pub fn all_strong(n: usize) -> Vec<Composition> {
        if n == 0 {
            return vec![Composition::default()];
        }
        SubsetMask::all(n).map(|s| s.to_composition()).collect()
    }

    /// Partitions of `n` (weakly decreasing strong compositions), lexicographically descending.
    pub fn partitions(n: usize) -> Vec<Composition> {
        fn go(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Composition>) {
            if rem == 0 {
                out.push(Composition::new(cur.clone()));
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                go(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// Distinct rearrangements of the parts, in lexicographic order.
    pub fn rearrangements(&self) -> Vec<Composition> {
        let mut parts = self.parts.clone();
        parts.sort_unstable();
        let mut out = vec![Composition::new(parts.clone())];
        // next lexicographic permutation
        loop {
            let Some(i) = (1..parts.len()).rev().find(|&i| parts[i - 1] < parts[i]) else {
                break;
            };
            let j = (i..parts.len()).rev().find(|&j| parts[j] > parts[i - 1]).unwrap();
            parts.swap(i - 1, j);
            parts[i..].reverse();
            out.push(Composition::new(parts.clone()));
        }
        out
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.parts.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", p.join(","))
    }
}

/// A permutation in one-line notation, values `1..=len`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn one_line(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inversions(&self) -> usize {
        let w = &self.0;
        (0..w.len()).map(|i| (i + 1..w.len()).filter(|&j| w[i] > w[j]).count()).sum()
    }

    /// Whether `word` has the same relative order as this permutation.
    pub fn order_equivalent<T: Ord>(&self, word: &[T]) -> bool {
        word.len() == self.0.len()
            && (0..word.len())
                .all(|i| (i + 1..word.len()).all(|j| (word[i] < word[j]) == (self.0[i] < self.0[j])))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", p.join(","))
    }
}

/// Largest supported degree for [`SubsetMask`].
pub const MAX_DEGREE: usize = 63;

/// A subset of `[n-1] = {1, …, n-1}` stored as a bitmask (element `i` is bit `i-1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    n: usize,
    bits: u64,
}

impl SubsetMask {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_DEGREE {
            return Err(Error::SizeLimitExceeded { n, max: MAX_DEGREE });
        }
        Ok(SubsetMask { n, bits: 0 })
    }

    pub fn full(n: usize) -> Result<Self> {
        let mut s = Self::empty(n)?;
        s.bits = Self::universe_bits(n);
        Ok(s)
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(n: usize, members: I) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for i in members {
            if i == 0 || i >= n {
                return Err(Error::PreconditionViolated(format!("{i} is not in [{}]", n.saturating_sub(1))));
            }
            s.insert(i);
        }
        Ok(s)
    }

    fn universe_bits(n: usize) -> u64 {
        if n <= 1 {
            0
        } else {
            (1u64 << (n - 1)) - 1
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && i < self.n && self.bits >> (i - 1) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i >= 1 && i < self.n, "{i} is not in [{}]", self.n.saturating_sub(1));
        self.bits |= 1 << (i - 1);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn members(&self) -> Vec<usize> {
        (1..self.n).filter(|&i| self.contains(i)).collect()
    }

    pub fn is_subset(&self, other: &SubsetMask) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn union(&self, other: &SubsetMask) -> SubsetMask {
        SubsetMask { n: self.n, bits: self.bits | other.bits }
    }

    pub fn intersection(&self, other: &SubsetMask) -> SubsetMask {
        SubsetMask { n: self.n, bits: self.bits & other.bits }
    }

    pub fn difference(&self, other: &SubsetMask) -> SubsetMask {
        SubsetMask { n: self.n, bits: self.bits & !other.bits }
    }

    /// All subsets of `[n-1]` in ascending bitmask order.
    pub fn all(n: usize) -> impl Iterator<Item = SubsetMask> {
        let top = if n == 0 { 1 } else { 1u64 << (n - 1) };
        (0..top).map(move |bits| SubsetMask { n, bits })
    }

    /// All subsets of `self`, in ascending bitmask order.
    pub fn subsets(&self) -> impl Iterator<Item = SubsetMask> {
        let (n, full) = (self.n, self.bits);
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some(((cur | !full).wrapping_add(1)) & full) };
            Some(SubsetMask { n, bits: cur })
        })
    }

    /// All supersets of `self` within `[n-1]`, in ascending bitmask order.
    pub fn supersets(&self) -> impl Iterator<Item = SubsetMask> {
        let base = self.bits;
        let comp = SubsetMask { n: self.n, bits: Self::universe_bits(self.n) & !base };
        comp.subsets().map(move |s| SubsetMask { n: s.n, bits: s.bits | base })
    }

    /// The strong composition of `n` whose partial sums are the members.
    pub fn to_composition(&self) -> Composition {
        if self.n == 0 {
            return Composition::default();
        }
        let mut parts = Vec::with_capacity(self.len() + 1);
        let mut prev = 0;
        for i in self.members() {
            parts.push(i - prev);
            prev = i;
        }
        parts.push(self.n - prev);
        Composition::new(parts)
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.members().iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", m.join(","))
    }
}

/// A cell `(row, col)`, both 1-based; row 1 is the bottom row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// A column diagram in French notation, stored as column heights.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    heights: Vec<usize>,
}

impl Diagram {
    pub fn new(heights: Vec<usize>) -> Self {
        Diagram { heights }
    }

    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    pub fn num_cols(&self) -> usize {
        self.heights.len()
    }

    pub fn height(&self, col: usize) -> usize {
        self.heights.get(col.wrapping_sub(1)).copied().unwrap_or(0)
    }

    pub fn num_rows(&self) -> usize {
        self.heights.iter().copied().max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.heights.iter().sum()
    }

    pub fn contains(&self, u: Cell) -> bool {
        u.row >= 1 && u.row <= self.height(u.col)
    }

    fn check(&self, u: Cell) -> Result<()> {
        if self.contains(u) {
            Ok(())
        } else {
            Err(Error::CellOutOfDiagram { row: u.row, col: u.col })
        }
    }

    /// Cells column by column, bottom to top within a column.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.heights.iter().enumerate().flat_map(|(c, &h)| (1..=h).map(move |r| Cell::new(r, c + 1)))
    }

    /// Cells above the bottom row.
    pub fn hat_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.cells().filter(|u| u.row > 1)
    }

    /// Rows from top to bottom, left to right within a row.
    pub fn reading_order(&self) -> Vec<Cell> {
        let mut out = Vec::with_capacity(self.size());
        for r in (1..=self.num_rows()).rev() {
            for c in 1..=self.num_cols() {
                if self.height(c) >= r {
                    out.push(Cell::new(r, c));
                }
            }
        }
        out
    }

    pub fn leg(&self, u: Cell) -> Result<usize> {
        self.check(u)?;
        Ok(self.height(u.col) - u.row)
    }

    /// Cells to the right in the same row in columns no taller than `u`'s,
    /// plus cells to the left in the row below in strictly shorter columns.
    pub fn arm(&self, u: Cell) -> Result<usize> {
        self.check(u)?;
        let h = self.height(u.col);
        let right =
            (u.col + 1..=self.num_cols()).filter(|&j| self.height(j) >= u.row && self.height(j) <= h).count();
        let left = if u.row > 1 {
            (1..u.col).filter(|&j| self.height(j) >= u.row - 1 && self.height(j) < h).count()
        } else {
            0
        };
        Ok(right + left)
    }

    /// Cells `z` forming a triple with `u` and the cell below it, i.e. the
    /// cells counted by [`Diagram::arm`].
    pub fn arm_cells(&self, u: Cell) -> Vec<Cell> {
        let h = self.height(u.col);
        let mut out: Vec<Cell> = (u.col + 1..=self.num_cols())
            .filter(|&j| self.height(j) >= u.row && self.height(j) <= h)
            .map(|j| Cell::new(u.row, j))
            .collect();
        if u.row > 1 {
            out.extend(
                (1..u.col)
                    .filter(|&j| self.height(j) >= u.row - 1 && self.height(j) < h)
                    .map(|j| Cell::new(u.row - 1, j)),
            );
        }
        out
    }

    pub fn south(&self, u: Cell) -> Option<Cell> {
        (u.row > 1).then(|| Cell::new(u.row - 1, u.col))
    }

    /// Same row, or adjacent rows with the upper cell strictly to the right.
    pub fn attacks(&self, u: Cell, v: Cell) -> bool {
        if u == v {
            return false;
        }
        if u.row == v.row {
            return true;
        }
        let (hi, lo) = if u.row > v.row { (u, v) } else { (v, u) };
        hi.row == lo.row + 1 && hi.col > lo.col
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(p: &[usize]) -> Composition {
        Composition::new(p.to_vec())
    }

    #[test]
    fn collapse_and_sort() {
        assert_eq!(comp(&[2, 1, 0, 0, 3, 0, 1]).collapse(), comp(&[2, 1, 3, 1]));
        assert_eq!(comp(&[0, 4, 0, 3, 1, 0, 0, 3]).collapse(), comp(&[4, 3, 1, 3]));
        assert_eq!(comp(&[3, 2]).collapse(), comp(&[3, 2]));
        assert_eq!(comp(&[2, 1, 0, 0, 3, 0, 1]).inc_sort(), comp(&[0, 0, 0, 1, 1, 2, 3]));
        assert_eq!(comp(&[0, 4, 0, 3, 1, 0, 0, 3]).inc_sort(), comp(&[0, 0, 0, 0, 1, 3, 3, 4]));
        assert_eq!(comp(&[1, 2, 3]).inc_sort(), comp(&[1, 2, 3]));
    }

    #[test]
    fn beta_examples() {
        assert_eq!(comp(&[2, 1, 0, 0, 3, 0, 1]).beta_perm().0, vec![6, 4, 3, 7, 2, 1, 5]);
        assert_eq!(comp(&[0, 4, 0, 3, 1, 0, 0, 3]).beta_perm().0, vec![7, 6, 3, 1, 5, 8, 4, 2]);
        assert_eq!(comp(&[1, 2]).beta_perm().0, vec![1, 2]);
        assert_eq!(comp(&[4, 3, 1, 3]).beta_perm().0, vec![3, 4, 2, 1]);
    }

    #[test]
    fn subset_bijection() {
        let s = comp(&[2, 1, 3, 2]).to_subset().unwrap();
        assert_eq!(s.members(), vec![2, 3, 6]);
        assert_eq!(s.degree(), 8);
        assert_eq!(s.to_composition(), comp(&[2, 1, 3, 2]));
        assert!(comp(&[5]).to_subset().unwrap().is_empty());
        assert_eq!(comp(&[1, 1, 1]).to_subset().unwrap().members(), vec![1, 2]);
        assert!(comp(&[1, 0]).to_subset().is_err());
    }

    #[test]
    fn subset_iteration() {
        let s = SubsetMask::from_members(5, [1, 3]).unwrap();
        let sups: Vec<_> = s.supersets().map(|x| x.members()).collect();
        assert_eq!(sups, vec![vec![1, 3], vec![1, 2, 3], vec![1, 3, 4], vec![1, 2, 3, 4]]);
        assert_eq!(s.subsets().count(), 4);
        assert_eq!(SubsetMask::all(4).count(), 8);
        assert!(SubsetMask::from_members(3, [3]).is_err());
        assert!(SubsetMask::empty(64).is_err());
    }

    #[test]
    fn arm_leg_of_long_rows() {
        let d = comp(&[3, 1, 4, 2, 1, 4, 3, 5, 4]).diagram();
        let u = Cell::new(3, 6);
        assert_eq!(d.leg(u).unwrap(), 1);
        assert_eq!(d.arm(u).unwrap(), 4);
        assert_eq!(d.arm_cells(u).len(), 4);
        assert_eq!(d.leg(Cell::new(5, 8)).unwrap(), 0);
        assert!(matches!(d.arm(Cell::new(2, 2)), Err(Error::CellOutOfDiagram { .. })));
    }

    #[test]
    fn small_arm_leg() {
        let d = Diagram::new(vec![1, 2]);
        assert_eq!(d.leg(Cell::new(2, 2)).unwrap(), 0);
        assert_eq!(d.arm(Cell::new(2, 2)).unwrap(), 1);
    }

    #[test]
    fn south_cells() {
        let d = Diagram::new(vec![1, 3]);
        assert_eq!(d.south(Cell::new(2, 2)), Some(Cell::new(1, 2)));
        assert_eq!(d.south(Cell::new(1, 1)), None);
        assert_eq!(d.south(Cell::new(3, 2)), Some(Cell::new(2, 2)));
    }

    #[test]
    fn attack_relation() {
        let d = Diagram::new(vec![1, 2]);
        assert!(d.attacks(Cell::new(1, 1), Cell::new(1, 2)));
        assert!(d.attacks(Cell::new(2, 2), Cell::new(1, 1)));
        assert!(d.attacks(Cell::new(1, 1), Cell::new(2, 2)));
        assert!(!d.attacks(Cell::new(2, 2), Cell::new(1, 2)));
        let d = Diagram::new(vec![2, 2]);
        assert!(!d.attacks(Cell::new(2, 1), Cell::new(1, 2)));
    }

    #[test]
    fn reading_orders() {
        let d = Diagram::new(vec![1, 3, 4]);
        let expect = [(4, 3), (3, 2), (3, 3), (2, 2), (2, 3), (1, 1), (1, 2), (1, 3)];
        let got: Vec<_> = d.reading_order().iter().map(|c| (c.row, c.col)).collect();
        assert_eq!(got, expect);
        let col: Vec<_> = Diagram::new(vec![3]).reading_order().iter().map(|c| c.row).collect();
        assert_eq!(col, vec![3, 2, 1]);
        let row: Vec<_> = Diagram::new(vec![1, 1, 1]).reading_order().iter().map(|c| c.col).collect();
        assert_eq!(row, vec![1, 2, 3]);
    }

    #[test]
    fn h_statistic() {
        assert_eq!(comp(&[1, 4, 3]).h_stat(), 5);
        assert_eq!(comp(&[1, 2]).h_stat(), 1);
        assert_eq!(comp(&[6]).h_stat(), 5);
    }

    #[test]
    fn enumerations() {
        assert_eq!(Composition::all_strong(6).len(), 32);
        assert_eq!(Composition::partitions(5).len(), 7);
        assert_eq!(comp(&[2, 1, 1]).rearrangements().len(), 3);
        assert_eq!(Composition::parse("1,4,3").unwrap(), comp(&[1, 4, 3]));
        assert_eq!(Composition::parse("(2, 1)").unwrap(), comp(&[2, 1]));
        assert!(Composition::parse("1,x").is_err());
    }
}
