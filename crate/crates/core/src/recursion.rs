//! Exact evaluation of the lattice-point counts `N_{g,n}(b_1, ..., b_n)` by the boundary
//! recursion.
//!
//! Pulling one boundary length `b_0` out of the tuple, `b_0 N_{g,n}(b_0, b_S)` equals a sum
//! of three kinds of terms, each weighted by the lengths of the newly created boundaries:
//!
//! * joining `b_0` with another boundary `b_j` into one of length `p`, summed over
//!   `p + q = b_0 + b_j` with `q` even;
//! * the signed companion sum over `p + q = |b_0 - b_j|` (negated when `b_0 < b_j`, empty
//!   when they are equal);
//! * splitting `b_0` into two boundaries `p`, `q` (plus an even part `r`), which either
//!   lowers the genus or separates the surface into two stable pieces.
//!
//! The `q` (and `r`) sums run over even values only, and the whole right-hand side carries
//! a global factor 1/2.  Base cases: `N_{0,3} = 1` and `N_{1,1}(b) = (b^2 - 4)/48` on
//! tuples with even sum; every count vanishes when the sum (equivalently the number of odd
//! entries) is odd, and unstable `(g,n)` contribute zero.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{argument, Result};
use crate::rational::{int, rat, Rational};

/// A genus together with a tuple of positive boundary lengths.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BTuple {
    genus: u32,
    b: Vec<u32>,
}

impl BTuple {
    /// Requires at least one entry, all positive.  Tuples containing zeros are evaluated
    /// through the quasi-polynomial, never through the value recursion.
    pub fn new(genus: u32, b: Vec<u32>) -> Result<Self> {
        if b.is_empty() {
            return Err(argument("boundary tuple needs at least one entry"));
        }
        if b.contains(&0) {
            return Err(argument(
                "boundary lengths must be positive; evaluate zeros through the quasi-polynomial",
            ));
        }
        Ok(BTuple { genus, b })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn entries(&self) -> &[u32] {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    /// `2g - 2 + n`, the measure that strictly decreases along the recursion.
    pub fn complexity(&self) -> i64 {
        2 * self.genus as i64 - 2 + self.b.len() as i64
    }

    pub fn num_odd(&self) -> usize {
        self.b.iter().filter(|&&x| x % 2 == 1).count()
    }

    /// Canonical representative of the symmetry orbit: odd entries ascending, then even
    /// entries ascending.  Counts are invariant under parity-preserving permutations, so
    /// one memo entry serves the whole orbit.
    pub fn canonical(&self) -> BTuple {
        BTuple { genus: self.genus, b: canonical_entries(&self.b) }
    }
}

/// Odd entries sorted ascending followed by even entries sorted ascending.
pub fn canonical_entries(b: &[u32]) -> Vec<u32> {
    let mut odds: Vec<u32> = b.iter().copied().filter(|x| x % 2 == 1).collect();
    let mut evens: Vec<u32> = b.iter().copied().filter(|x| x % 2 == 0).collect();
    odds.sort_unstable();
    evens.sort_unstable();
    odds.append(&mut evens);
    odds
}

/// Index of a maximal entry (lowest index on ties).  With a maximal pivot the signed
/// companion sum never goes negative, so the signed rule is exercised only when a pivot is
/// forced explicitly.
pub fn choose_pivot(b: &[u32]) -> usize {
    let mut best = 0;
    for (i, &x) in b.iter().enumerate() {
        if x > b[best] {
            best = i;
        }
    }
    best
}

/// Write-once cache of recursion values, keyed by canonical `(genus, entries)`.
#[derive(Debug, Default)]
pub struct MemoTable {
    map: HashMap<(u32, Vec<u32>), Rational>,
}

impl MemoTable {
    pub fn new() -> Self {
        MemoTable::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    fn get(&self, g: u32, b: &[u32]) -> Option<&Rational> {
        // Borrow-friendly lookup without cloning the key on the hit path is not worth the
        // unsafe gymnastics here; keys are short.
        self.map.get(&(g, b.to_vec()))
    }

    fn insert(&mut self, g: u32, b: Vec<u32>, v: Rational) {
        let prev = self.map.insert((g, b), v.clone());
        debug_assert!(
            prev.map_or(true, |old| old == v),
            "memo entry rewritten with a different value"
        );
    }

    /// Test hook: plant a wrong value (under a canonical key) so consistency checks can be
    /// shown to notice a corrupted cache.
    #[cfg(test)]
    pub(crate) fn poison(&mut self, g: u32, b: Vec<u32>, v: Rational) {
        self.map.insert((g, canonical_entries(&b)), v);
    }
}

/// The count `N_{g,n}(b)`, memoized.
pub fn n_value(t: &BTuple, memo: &mut MemoTable) -> Rational {
    n_value_raw(t.genus, &t.b, memo)
}

/// Same as [`n_value`] but with the recursion pivot forced to `pivot` instead of chosen
/// maximal, and no top-level parity or memo shortcut: the full signed body runs even on
/// odd-sum tuples (where it must produce zero).  Recursive sub-calls still go through the
/// memoized path.  Used by the pivot-independence and parity-vanishing consistency tests.
pub fn n_value_forced_pivot(t: &BTuple, pivot: usize, memo: &mut MemoTable) -> Rational {
    assert!(pivot < t.n(), "pivot index out of range");
    if let Some(v) = closed_form(t.genus, &t.b) {
        return v;
    }
    recursion_body(t.genus, &t.b, pivot, memo)
}

fn n_value_raw(g: u32, b: &[u32], memo: &mut MemoTable) -> Rational {
    if b.iter().map(|&x| x as u64).sum::<u64>() % 2 == 1 {
        return Rational::zero();
    }
    let key = canonical_entries(b);
    if let Some(v) = memo.get(g, &key) {
        return v.clone();
    }
    let v = match closed_form(g, &key) {
        Some(v) => v,
        None => recursion_body(g, &key, choose_pivot(&key), memo),
    };
    memo.insert(g, key, v.clone());
    v
}

/// Unstable conventions and base cases; `None` when the recursion body is needed.
fn closed_form(g: u32, b: &[u32]) -> Option<Rational> {
    let n = b.len();
    let even_sum = b.iter().map(|&x| x as u64).sum::<u64>() % 2 == 0;
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Some(Rational::zero());
    }
    if g == 0 && n == 3 {
        return Some(if even_sum { int(1) } else { Rational::zero() });
    }
    if g == 1 && n == 1 {
        let b0 = b[0] as i64;
        return Some(if b0 % 2 == 0 { rat(b0 * b0 - 4, 48) } else { Rational::zero() });
    }
    None
}

/// The right-hand side of the recursion divided by `b_0`: computes `N_{g,n}` for a stable,
/// non-base tuple with the given pivot.
fn recursion_body(g: u32, b: &[u32], pivot: usize, memo: &mut MemoTable) -> Rational {
    let b0 = b[pivot];
    let rest: Vec<u32> = b
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != pivot)
        .map(|(_, &x)| x)
        .collect();
    // acc accumulates 2 * b_0 * N.
    let mut acc = Rational::zero();

    // Terms joining the pivot with another boundary.
    let mut sub = rest.clone();
    for j in 0..rest.len() {
        let bj = rest[j];
        let s = b0 + bj;
        for q in (2..s).step_by(2) {
            let p = s - q;
            sub[j] = p;
            let nv = n_value_raw(g, &sub, memo);
            if !nv.is_zero() {
                acc += nv * int(p as i64 * q as i64);
            }
        }
        if b0 != bj {
            let (s2, sign) = if b0 > bj { (b0 - bj, 1i64) } else { (bj - b0, -1i64) };
            for q in (2..s2).step_by(2) {
                let p = s2 - q;
                sub[j] = p;
                let nv = n_value_raw(g, &sub, memo);
                if !nv.is_zero() {
                    acc += nv * int(sign * p as i64 * q as i64);
                }
            }
        }
        sub[j] = bj;
    }

    // Terms splitting the pivot boundary: p + q + r = b_0 with r even.  Precompute the
    // subset decompositions of the remaining boundaries once.
    if b0 >= 4 {
        let splits = subset_splits(&rest);
        for r in (2..=b0 - 2).step_by(2) {
            let pq_sum = b0 - r;
            for p in 1..pq_sum {
                let q = pq_sum - p;
                let mut inner = Rational::zero();
                // Genus drops, boundaries of lengths p and q appear on one surface.
                if g >= 1 {
                    let mut args = Vec::with_capacity(rest.len() + 2);
                    args.push(p);
                    args.push(q);
                    args.extend_from_slice(&rest);
                    let nv = n_value_raw(g - 1, &args, memo);
                    if !nv.is_zero() {
                        inner += nv;
                    }
                }
                // The surface separates into two stable pieces.
                for (left, right) in &splits {
                    for g1 in 0..=g {
                        let g2 = g - g1;
                        if (g1 == 0 && left.len() < 2) || (g2 == 0 && right.len() < 2) {
                            continue;
                        }
                        let mut a1 = Vec::with_capacity(left.len() + 1);
                        a1.push(p);
                        a1.extend_from_slice(left);
                        let f1 = n_value_raw(g1, &a1, memo);
                        if f1.is_zero() {
                            continue;
                        }
                        let mut a2 = Vec::with_capacity(right.len() + 1);
                        a2.push(q);
                        a2.extend_from_slice(right);
                        let f2 = n_value_raw(g2, &a2, memo);
                        if !f2.is_zero() {
                            inner += f1 * f2;
                        }
                    }
                }
                if !inner.is_zero() {
                    acc += inner * int(p as i64 * q as i64 * r as i64);
                }
            }
        }
    }

    acc / int(2 * b0 as i64)
}

/// All ordered pairs (I, J) of complementary subsets of `rest`.
fn subset_splits(rest: &[u32]) -> Vec<(Vec<u32>, Vec<u32>)> {
    let n = rest.len();
    (0u32..(1 << n))
        .map(|mask| {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (i, &x) in rest.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    left.push(x);
                } else {
                    right.push(x);
                }
            }
            (left, right)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nv(g: u32, b: &[u32]) -> Rational {
        let t = BTuple::new(g, b.to_vec()).unwrap();
        n_value(&t, &mut MemoTable::new())
    }

    #[test]
    fn base_cases() {
        assert_eq!(nv(0, &[1, 1, 2]), int(1));
        assert_eq!(nv(0, &[2, 2, 2]), int(1));
        assert_eq!(nv(1, &[2]), int(0));
        assert_eq!(nv(1, &[4]), rat(1, 4));
        assert_eq!(nv(1, &[6]), rat(2, 3));
    }

    #[test]
    fn parity_vanishing_values() {
        assert_eq!(nv(0, &[1, 1, 1]), int(0));
        assert_eq!(nv(1, &[3]), int(0));
        assert_eq!(nv(0, &[1, 2, 2, 2]), int(0));
    }

    #[test]
    fn unstable_tuples_are_zero() {
        assert_eq!(nv(0, &[2]), int(0));
        assert_eq!(nv(0, &[4, 4]), int(0));
    }

    #[test]
    fn rejects_bad_tuples() {
        assert!(BTuple::new(0, vec![]).is_err());
        assert!(BTuple::new(1, vec![2, 0]).is_err());
    }

    #[test]
    fn four_boundary_sphere_values() {
        assert_eq!(nv(0, &[2, 2, 2, 2]), int(3));
        assert_eq!(nv(0, &[1, 1, 1, 3]), int(2));
        assert_eq!(nv(0, &[1, 1, 2, 2]), int(2));
        assert_eq!(nv(0, &[2, 2, 2, 4]), int(6));
    }

    #[test]
    fn genus_one_two_boundary_values() {
        assert_eq!(nv(1, &[2, 4]), rat(1, 2));
        assert_eq!(nv(1, &[1, 5]), int(1));
        assert_eq!(nv(1, &[2, 2]), int(0));
        assert_eq!(nv(1, &[1, 1]), int(0));
    }

    #[test]
    fn genus_two_one_boundary_values() {
        assert_eq!(nv(2, &[8]), rat(21, 8));
        assert_eq!(nv(2, &[10]), rat(273, 10));
    }

    #[test]
    fn pivot_selection() {
        assert_eq!(choose_pivot(&[1, 5, 3]), 1);
        assert_eq!(choose_pivot(&[2, 2]), 0);
        assert_eq!(choose_pivot(&[7]), 0);
    }

    #[test]
    fn canonical_order_is_odds_then_evens() {
        let t = BTuple::new(3, vec![4, 1, 3, 2]).unwrap();
        assert_eq!(t.canonical().entries(), &[1, 3, 2, 4]);
        assert_eq!(t.num_odd(), 2);
        assert_eq!(t.complexity(), 8);
    }

    #[test]
    fn forced_pivot_matches_default() {
        let mut memo = MemoTable::new();
        let t = BTuple::new(1, vec![2, 4]).unwrap();
        assert_eq!(n_value_forced_pivot(&t, 0, &mut memo), rat(1, 2));
        assert_eq!(n_value_forced_pivot(&t, 1, &mut memo), rat(1, 2));
        let t = BTuple::new(0, vec![1, 1, 1, 3]).unwrap();
        for p in 0..4 {
            assert_eq!(n_value_forced_pivot(&t, p, &mut memo), int(2));
        }
    }

    #[test]
    fn forced_pivot_body_vanishes_on_odd_tuples() {
        let mut memo = MemoTable::new();
        let t = BTuple::new(0, vec![2, 1, 1, 1]).unwrap();
        for p in 0..4 {
            assert_eq!(n_value_forced_pivot(&t, p, &mut memo), int(0));
        }
    }

    #[test]
    fn memo_reuse_matches_fresh() {
        let mut shared = MemoTable::new();
        let tuples = [(1u32, vec![2u32, 4]), (2, vec![8]), (0, vec![1, 1, 2, 2]), (1, vec![4, 4])];
        for (g, b) in &tuples {
            let t = BTuple::new(*g, b.clone()).unwrap();
            let with_shared = n_value(&t, &mut shared);
            let fresh = n_value(&t, &mut MemoTable::new());
            assert_eq!(with_shared, fresh);
        }
        assert!(!shared.is_empty());
    }
}
