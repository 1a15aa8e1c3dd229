//! Reconstruction of the parity-class polynomials behind `N_{g,n}`.
//!
//! For fixed `(g, n)`, the count is a quasi-polynomial: once the number `k` of odd
//! arguments is fixed (and placed first), `N_{g,n}` agrees with a single polynomial
//! `N^{(k)}_{g,n}` in the squared variables `u_i = b_i^2`, of total degree `3g - 3 + n`.
//! Classes with odd `k` vanish identically, so only even `k` are stored.
//!
//! Polynomials are recovered by exact interpolation of recursion values on a staircase
//! grid (index sums bounded by the degree), then cross-validated against fresh recursion
//! values off the grid before being accepted.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{argument, internal, Result};
use crate::poly::{interpolate_total_degree, SquaredPoly};
use crate::rational::Rational;
use crate::recursion::{n_value, BTuple, MemoTable};

/// Number of off-grid recursion values each built polynomial must reproduce.
const CROSS_CHECKS: usize = 10;

/// `b`-value of the grid node with index `t` for a variable of the given class.
fn node_b(odd_class: bool, t: usize) -> u32 {
    (if odd_class { 1 } else { 2 }) + 2 * t as u32
}

/// Build the parity-class polynomial `N^{(k)}_{g,n}` (odd variables first) from recursion
/// values.  Fails on unstable `(g,n)`, odd `k`, or `k > n`; a cross-validation mismatch is
/// reported as an internal consistency error.
pub fn build_class_polynomial(
    g: u32,
    n: u32,
    k: u32,
    memo: &mut MemoTable,
) -> Result<SquaredPoly> {
    if n == 0 || 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(argument(format!("(g, n) = ({g}, {n}) is unstable")));
    }
    if k % 2 != 0 {
        return Err(argument(format!("parity class k = {k} is odd; that class vanishes")));
    }
    if k > n {
        return Err(argument(format!("parity class k = {k} exceeds n = {n}")));
    }
    let nv = n as usize;
    let kv = k as usize;
    let degree = (3 * g as i64 - 3 + n as i64).max(0) as usize;
    let u_nodes: Vec<Vec<Rational>> = (0..nv)
        .map(|i| {
            (0..=degree)
                .map(|t| {
                    let b = node_b(i < kv, t);
                    Rational::from_integer(BigInt::from(b) * BigInt::from(b))
                })
                .collect()
        })
        .collect();
    let mut sample = |idx: &[usize]| -> Rational {
        let b: Vec<u32> = idx.iter().enumerate().map(|(i, &t)| node_b(i < kv, t)).collect();
        let t = BTuple::new(g, b).expect("grid nodes are positive");
        n_value(&t, memo)
    };
    let poly = interpolate_total_degree(&u_nodes, degree, &mut sample);

    // Accept only after the polynomial reproduces fresh recursion values off the grid.
    let mut rng = ChaCha8Rng::seed_from_u64(
        0x9e37_79b9_7f4a_7c15u64 ^ ((g as u64) << 40) ^ ((n as u64) << 20) ^ k as u64,
    );
    for _ in 0..CROSS_CHECKS {
        let idx = off_grid_index(&mut rng, nv, degree);
        let b: Vec<u32> = idx.iter().enumerate().map(|(i, &t)| node_b(i < kv, t)).collect();
        let u: Vec<Rational> = b
            .iter()
            .map(|&x| Rational::from_integer(BigInt::from(x) * BigInt::from(x)))
            .collect();
        let t = BTuple::new(g, b.clone()).expect("grid nodes are positive");
        let direct = n_value(&t, memo);
        let via_poly = poly.eval(&u)?;
        if direct != via_poly {
            return Err(internal(format!(
                "class polynomial ({g},{n},k={k}) disagrees with the recursion at b = {b:?}: \
                 polynomial gives {via_poly}, recursion gives {direct}"
            )));
        }
    }
    Ok(poly)
}

/// A random index vector just outside the staircase: the indices sum to `degree + 1`, so
/// the point was never sampled during interpolation.
fn off_grid_index(rng: &mut ChaCha8Rng, nvars: usize, degree: usize) -> Vec<usize> {
    let mut idx = vec![0usize; nvars];
    for _ in 0..=degree {
        idx[rng.gen_range(0..nvars)] += 1;
    }
    idx
}

/// The full quasi-polynomial for one `(g, n)`: one polynomial per even parity class.
#[derive(Debug, Clone)]
pub struct LatticeQuasiPolynomial {
    genus: u32,
    n: u32,
    classes: BTreeMap<u32, SquaredPoly>,
}

impl LatticeQuasiPolynomial {
    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn class(&self, k: u32) -> Option<&SquaredPoly> {
        self.classes.get(&k)
    }

    pub fn classes(&self) -> impl Iterator<Item = (u32, &SquaredPoly)> {
        self.classes.iter().map(|(&k, p)| (k, p))
    }

    /// Evaluate at a tuple of nonnegative integers (zeros allowed).
    pub fn eval(&self, b: &[u32]) -> Result<Rational> {
        if b.len() != self.n as usize {
            return Err(argument(format!(
                "tuple has {} entries, quasi-polynomial expects {}",
                b.len(),
                self.n
            )));
        }
        let (k, u) = parity_sorted_squares(b);
        if k % 2 == 1 {
            return Ok(Rational::zero());
        }
        let poly = self
            .classes
            .get(&k)
            .ok_or_else(|| internal(format!("missing parity class k = {k}")))?;
        poly.eval(&u)
    }
}

/// Number of odd entries and the squared entries sorted odd-first (each part ascending).
fn parity_sorted_squares(b: &[u32]) -> (u32, Vec<Rational>) {
    let mut odds: Vec<u32> = b.iter().copied().filter(|x| x % 2 == 1).collect();
    let mut evens: Vec<u32> = b.iter().copied().filter(|x| x % 2 == 0).collect();
    odds.sort_unstable();
    evens.sort_unstable();
    let k = odds.len() as u32;
    let u = odds
        .into_iter()
        .chain(evens)
        .map(|x| Rational::from_integer(BigInt::from(x) * BigInt::from(x)))
        .collect();
    (k, u)
}

/// Cache of built class polynomials sharing one recursion memo.
#[derive(Debug, Default)]
pub struct PolyStore {
    memo: MemoTable,
    classes: BTreeMap<(u32, u32, u32), SquaredPoly>,
}

impl PolyStore {
    pub fn new() -> Self {
        PolyStore::default()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn contains(&self, g: u32, n: u32, k: u32) -> bool {
        self.classes.contains_key(&(g, n, k))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32, u32), &SquaredPoly)> {
        self.classes.iter()
    }

    /// The class polynomial, building and caching it on first use.
    pub fn class_poly(&mut self, g: u32, n: u32, k: u32) -> Result<&SquaredPoly> {
        if !self.classes.contains_key(&(g, n, k)) {
            let p = build_class_polynomial(g, n, k, &mut self.memo)?;
            self.classes.insert((g, n, k), p);
        }
        Ok(&self.classes[&(g, n, k)])
    }

    /// Install an externally supplied polynomial (e.g. from a cache file) without
    /// rebuilding.  The caller vouches for its provenance; shape errors are still caught.
    pub fn insert_class(&mut self, g: u32, n: u32, k: u32, poly: SquaredPoly) -> Result<()> {
        if k % 2 != 0 || k > n {
            return Err(argument(format!("invalid parity class k = {k} for n = {n}")));
        }
        if poly.nvars() != n as usize {
            return Err(argument(format!(
                "polynomial has {} variables, expected {}",
                poly.nvars(),
                n
            )));
        }
        self.classes.insert((g, n, k), poly);
        Ok(())
    }

    /// Evaluate `N_{g,n}` at a tuple of nonnegative integers (zeros allowed), building
    /// whatever class polynomial is needed.  Unstable `(g, n)` evaluate to zero by the
    /// same convention as the value recursion.
    pub fn eval(&mut self, g: u32, b: &[u32]) -> Result<Rational> {
        if b.is_empty() {
            return Err(argument("boundary tuple needs at least one entry"));
        }
        let n = b.len() as u32;
        if 2 * g as i64 - 2 + n as i64 <= 0 {
            return Ok(Rational::zero());
        }
        let (k, u) = parity_sorted_squares(b);
        if k % 2 == 1 {
            return Ok(Rational::zero());
        }
        self.class_poly(g, n, k)?.eval(&u)
    }

    /// All parity classes of one `(g, n)` bundled as a quasi-polynomial.
    pub fn quasi_polynomial(&mut self, g: u32, n: u32) -> Result<LatticeQuasiPolynomial> {
        let mut classes = BTreeMap::new();
        for k in (0..=n).step_by(2) {
            classes.insert(k, self.class_poly(g, n, k)?.clone());
        }
        Ok(LatticeQuasiPolynomial { genus: g, n, classes })
    }

    pub fn memo_mut(&mut self) -> &mut MemoTable {
        &mut self.memo
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn three_boundary_sphere_classes_are_constant_one() {
        let mut memo = MemoTable::new();
        for k in [0u32, 2] {
            let p = build_class_polynomial(0, 3, k, &mut memo).unwrap();
            assert_eq!(p, SquaredPoly::constant(3, int(1)), "class k = {k}");
        }
    }

    #[test]
    fn one_boundary_torus_class_polynomial() {
        let mut memo = MemoTable::new();
        let p = build_class_polynomial(1, 1, 0, &mut memo).unwrap();
        let expect = SquaredPoly::from_terms(1, [(vec![1], rat(1, 48)), (vec![0], rat(-4, 48))]);
        assert_eq!(p, expect);
    }

    #[test]
    fn four_boundary_sphere_class_polynomials() {
        let mut memo = MemoTable::new();
        // k = 0: (u1+u2+u3+u4-4)/4; k = 2: (... -2)/4.
        let p0 = build_class_polynomial(0, 4, 0, &mut memo).unwrap();
        let p2 = build_class_polynomial(0, 4, 2, &mut memo).unwrap();
        for i in 0..4 {
            let mut e = vec![0u32; 4];
            e[i] = 1;
            assert_eq!(p0.coeff(&e), rat(1, 4));
            assert_eq!(p2.coeff(&e), rat(1, 4));
        }
        assert_eq!(p0.coeff(&[0, 0, 0, 0]), int(-1));
        assert_eq!(p2.coeff(&[0, 0, 0, 0]), rat(-1, 2));
        assert_eq!(p0.num_terms(), 5);
        assert_eq!(p2.num_terms(), 5);
    }

    #[test]
    fn eval_handles_zeros_parity_and_unstable() {
        let mut store = PolyStore::new();
        assert_eq!(store.eval(0, &[2, 0, 0, 0]).unwrap(), int(0));
        assert_eq!(store.eval(0, &[0, 0, 0, 0]).unwrap(), int(-1));
        assert_eq!(store.eval(1, &[3]).unwrap(), int(0));
        assert_eq!(store.eval(2, &[8]).unwrap(), rat(21, 8));
        assert_eq!(store.eval(0, &[5, 7]).unwrap(), int(0));
        assert!(store.eval(0, &[]).is_err());
    }

    #[test]
    fn quasi_polynomial_eval_matches_store() {
        let mut store = PolyStore::new();
        let qp = store.quasi_polynomial(1, 2).unwrap();
        assert_eq!(qp.genus(), 1);
        assert_eq!(qp.classes().count(), 2);
        assert_eq!(qp.eval(&[2, 4]).unwrap(), rat(1, 2));
        assert_eq!(qp.eval(&[1, 5]).unwrap(), int(1));
        assert_eq!(qp.eval(&[5, 1]).unwrap(), int(1));
        assert_eq!(qp.eval(&[1, 2]).unwrap(), int(0));
        assert!(qp.eval(&[1, 2, 3]).is_err());
    }

    #[test]
    fn builder_rejects_bad_classes() {
        let mut memo = MemoTable::new();
        assert!(build_class_polynomial(0, 2, 0, &mut memo).is_err());
        assert!(build_class_polynomial(1, 1, 1, &mut memo).is_err());
        assert!(build_class_polynomial(1, 1, 2, &mut memo).is_err());
    }

    #[test]
    fn cross_validation_catches_corrupted_samples() {
        // Poison a base-case value the grid consults; the corrupted samples no longer lie
        // on a single low-degree polynomial, so the off-grid checks must reject the build.
        let mut memo = MemoTable::new();
        memo_poison(&mut memo, 1, vec![4], int(7));
        let err = build_class_polynomial(1, 1, 0, &mut memo).unwrap_err();
        assert!(matches!(err, crate::Error::Internal(_)), "got {err:?}");
    }

    fn memo_poison(memo: &mut MemoTable, g: u32, b: Vec<u32>, v: Rational) {
        memo.poison(g, b, v);
    }

    #[test]
    fn store_eval_matches_direct_recursion_samples() {
        let mut store = PolyStore::new();
        let mut memo = MemoTable::new();
        for (g, b) in [
            (0u32, vec![2u32, 2, 2, 2]),
            (0, vec![1, 1, 2, 4]),
            (1, vec![2, 4]),
            (1, vec![1, 1, 1, 3]),
            (2, vec![2, 2]),
        ] {
            let t = BTuple::new(g, b.clone()).unwrap();
            assert_eq!(
                store.eval(g, &b).unwrap(),
                n_value(&t, &mut memo),
                "mismatch at g = {g}, b = {b:?}"
            );
        }
    }
}
