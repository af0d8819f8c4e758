//! Enumeration checked against brute force, and the invariants of
//! standardization and destandardization.

use qmac::fillings::{
    fillings_with_bottom_row, packed_nat, st0, st1, standard_fillings, Filling, SizeBound, StandardFilling,
};
use qmac::shapes::Composition;
use std::collections::BTreeSet;

const BOUND: SizeBound = SizeBound(10);

fn strong_upto(n: usize) -> Vec<Composition> {
    (1..=n).flat_map(Composition::all_strong).collect()
}

/// Columns of `dg(inc(γ))` filled from a flat vector, column by column.
fn columns_from(heights: &[usize], flat: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut k = 0;
    for &h in heights {
        out.push(flat[k..k + h].to_vec());
        k += h;
    }
    out
}

/// Same row, or adjacent rows with the upper cell strictly right.
fn brute_non_attacking(cols: &[Vec<usize>]) -> bool {
    let cells: Vec<(usize, usize, usize)> = cols
        .iter()
        .enumerate()
        .flat_map(|(c, col)| col.iter().enumerate().map(move |(r, &v)| (r + 1, c + 1, v)))
        .collect();
    cells.iter().all(|&(r1, c1, v1)| {
        cells.iter().all(|&(r2, c2, v2)| {
            let attack = (r1, c1) != (r2, c2) && (r1 == r2 || (r1 == r2 + 1 && c1 > c2));
            !attack || v1 != v2
        })
    })
}

fn brute_bottom_ok(gamma: &Composition, cols: &[Vec<usize>]) -> bool {
    // β sorts positions by part, ties broken right to left
    let l = gamma.len();
    let mut pos: Vec<usize> = (0..l).collect();
    pos.sort_by_key(|&i| (gamma.parts()[i], std::cmp::Reverse(i)));
    let mut beta = vec![0; l];
    for (k, &p) in pos.iter().enumerate() {
        beta[k] = p + 1;
    }
    let row: Vec<usize> = cols.iter().map(|c| c[0]).collect();
    (0..l).all(|i| (0..l).all(|j| (row[i] < row[j]) == (beta[i] < beta[j])))
}

fn brute_fillings(gamma: &Composition, max: usize, keep: impl Fn(&[usize]) -> bool) -> BTreeSet<String> {
    let heights = gamma.inc_sort().parts().to_vec();
    let n = gamma.size();
    let mut out = BTreeSet::new();
    let mut flat = vec![1; n];
    loop {
        if keep(&flat) {
            let cols = columns_from(&heights, &flat);
            if brute_non_attacking(&cols) && brute_bottom_ok(gamma, &cols) {
                out.insert(Filling::from_columns(cols).unwrap().to_string());
            }
        }
        let mut k = 0;
        while k < n && flat[k] == max {
            flat[k] = 1;
            k += 1;
        }
        if k == n {
            return out;
        }
        flat[k] += 1;
    }
}

fn is_packed(flat: &[usize]) -> bool {
    let vals: BTreeSet<usize> = flat.iter().copied().collect();
    vals.len() == *vals.iter().max().unwrap()
}

fn is_permutation(flat: &[usize]) -> bool {
    flat.iter().copied().collect::<BTreeSet<_>>().len() == flat.len()
}

#[test]
fn packed_enumeration_matches_brute_force() {
    for g in strong_upto(5) {
        let fast: BTreeSet<String> = packed_nat(&g, BOUND).unwrap().iter().map(Filling::to_string).collect();
        assert_eq!(fast, brute_fillings(&g, g.size(), is_packed), "γ = {g}");
    }
}

#[test]
fn standard_enumeration_matches_brute_force() {
    for g in strong_upto(5) {
        let fast: BTreeSet<String> =
            standard_fillings(&g, BOUND).unwrap().iter().map(|t| t.to_string()).collect();
        assert_eq!(fast, brute_fillings(&g, g.size(), is_permutation), "γ = {g}");
    }
}

#[test]
fn enumeration_is_sorted_by_reading_word() {
    for g in strong_upto(5) {
        let words: Vec<Vec<usize>> = packed_nat(&g, BOUND).unwrap().iter().map(Filling::reading_word).collect();
        assert!(words.windows(2).all(|w| w[0] < w[1]), "γ = {g}");
    }
}

#[test]
fn st_subsets() {
    for g in strong_upto(5) {
        let all = standard_fillings(&g, BOUND).unwrap();
        let zero: Vec<&StandardFilling> = all.iter().filter(|t| t.descents().is_empty()).collect();
        assert_eq!(st0(&g, BOUND).unwrap().iter().collect::<Vec<_>>(), zero);
        let one = st1(&g, BOUND).unwrap();
        assert!(one.len() >= zero.len());
        for t in &one {
            let d = t.diagram();
            for u in t.descents() {
                assert_eq!(t.value_at(d.south(u).unwrap()) + 1, t.value_at(u));
            }
        }
    }
}

#[test]
fn standardization_preserves_statistics() {
    for g in strong_upto(5) {
        for f in packed_nat(&g, BOUND).unwrap() {
            let tau = f.standardize();
            let tf = tau.filling();
            assert!(tf.is_non_attacking() && tf.bottom_row_ok(&g), "{f}");
            assert_eq!(tf.descents(), f.descents(), "{f}");
            assert_eq!(tau.maj(), f.maj(), "{f}");
            assert_eq!(tau.coinv(), f.coinv(), "{f}");
            let s = f.content_subset().unwrap();
            assert!(tau.v_set().is_subset(&s), "{f}");
            assert_eq!(tau.destandardize(&s).unwrap(), f);
            assert_eq!(tau.destandardized_weight(&s).unwrap(), f.weight(), "{f}");
        }
    }
}

#[test]
fn fixed_bottom_row() {
    let g = Composition::new(vec![1, 2]);
    for f in fillings_with_bottom_row(&g, 3, &[1, 3], BOUND).unwrap() {
        assert_eq!(f.bottom_row(), vec![1, 3]);
        assert!(f.max_entry() <= 3);
        assert!(f.is_non_attacking());
    }
    let brute = brute_fillings(&g, 3, |flat| flat[0] == 1 && flat[1] == 3);
    let fast: BTreeSet<String> =
        fillings_with_bottom_row(&g, 3, &[1, 3], BOUND).unwrap().iter().map(Filling::to_string).collect();
    assert_eq!(fast, brute);
}

#[test]
fn text_and_json_round_trip() {
    for f in packed_nat(&Composition::new(vec![2, 1, 2]), BOUND).unwrap() {
        assert_eq!(Filling::parse(&f.to_string()).unwrap(), f);
        assert_eq!(Filling::from_json(&f.to_json()).unwrap(), f);
    }
}
