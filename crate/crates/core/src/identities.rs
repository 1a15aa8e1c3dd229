//! Machine verification of the identities satisfied by the counts: string and dilaton
//! equations, vanishing statements, Euler-characteristic evaluations, the one-variable
//! product formula, and the reconstruction of all genus-0 polynomials from the string
//! equations alone.
//!
//! The string checks compare both sides at every tuple in a box large enough that each
//! parity class holds more nodes per variable than the class polynomials have degree, so
//! value agreement on the box is as strong as the polynomial identity.  The dilaton check
//! needs no sampling at all: both sides are available as polynomials and are compared
//! coefficient by coefficient.

use std::collections::HashMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{argument, internal, Result};
use crate::poly::SquaredPoly;
use crate::quasipoly::{LatticeQuasiPolynomial, PolyStore};
use crate::rational::{factorial, int, rat, Rational};
use crate::report::IdentityReport;

/// Per-variable bound of the string-equation sample box: `2(3g-3+n) + 4`, which gives both
/// parity classes `3g-3+n+2` values per variable — one more than the degree of the
/// `(g, n+1)` class polynomials.
fn string_box_bound(g: u32, n: u32) -> u32 {
    (2 * (3 * g as i64 - 3 + n as i64) + 4).max(2) as u32
}

/// Shared data for the two string-equation sweeps on one `(g, n)`.
struct StringContext {
    g: u32,
    n: usize,
    bound: u32,
    qp_big: LatticeQuasiPolynomial,
    /// Values of `N_{g,n}` at every weakly increasing tuple in the box.
    cache: HashMap<Vec<u32>, Rational>,
}

impl StringContext {
    fn new(g: u32, n: u32, store: &mut PolyStore) -> Result<StringContext> {
        if 2 * g as i64 - 2 + n as i64 <= 0 {
            return Err(argument(format!("(g, n) = ({g}, {n}) is unstable")));
        }
        let bound = string_box_bound(g, n);
        let qp_small = store.quasi_polynomial(g, n)?;
        let qp_big = store.quasi_polynomial(g, n + 1)?;
        let tuples = monotone_tuples(n as usize, 1, bound);
        let cache: HashMap<Vec<u32>, Rational> = tuples
            .par_iter()
            .map(|b| Ok((b.clone(), qp_small.eval(b)?)))
            .collect::<Result<_>>()?;
        Ok(StringContext { g, n: n as usize, bound, qp_big, cache })
    }

    fn lookup(&self, b: &[u32]) -> Rational {
        let mut key = b.to_vec();
        key.sort_unstable();
        self.cache[&key].clone()
    }

    /// `Σ_j Σ_{k=1}^{b_j} k · N_{g,n}(b)|_{b_j = k}` — the unrestricted double sum.
    fn string_sum(&self, b: &[u32]) -> Rational {
        let mut acc = Rational::zero();
        let mut work = b.to_vec();
        for j in 0..b.len() {
            for k in 1..=b[j] {
                work[j] = k;
                let v = self.lookup(&work);
                if !v.is_zero() {
                    acc += v * int(k as i64);
                }
            }
            work[j] = b[j];
        }
        acc
    }

    /// The parity-restricted double sum `Σ_j Σ_{k < b_j, k ≡ b_j + shift} k · N|_{b_j=k}`.
    fn string_sum_restricted(&self, b: &[u32], shift: u32) -> Rational {
        let mut acc = Rational::zero();
        let mut work = b.to_vec();
        for j in 0..b.len() {
            let start = match (b[j] + shift) % 2 {
                0 => 2,
                _ => 1,
            };
            for k in (start..b[j]).step_by(2) {
                work[j] = k;
                let v = self.lookup(&work);
                if !v.is_zero() {
                    acc += v * int(k as i64);
                }
            }
            work[j] = b[j];
        }
        acc
    }

    /// `Σ_j b_j · N_{g,n}(b)`.
    fn weighted_base(&self, b: &[u32]) -> Rational {
        let total: i64 = b.iter().map(|&x| x as i64).sum();
        self.cache[&b.to_vec()].clone() * int(total)
    }

    /// Sweep the whole box.  The parity-restricted identity is checked at every tuple; the
    /// unrestricted form additionally wherever the left side's total is even, which is the
    /// only parity at which it holds (elsewhere its extra terms need not vanish).
    fn sweep(&self, second: bool) -> Result<IdentityReport> {
        let name = format!(
            "string-{} (g={}, n={})",
            if second { 2 } else { 1 },
            self.g,
            self.n
        );
        let mut report = IdentityReport::new(
            name,
            format!("all b in [1, {}]^{} (up to symmetry)", self.bound, self.n),
        );
        let tuples = monotone_tuples(self.n, 1, self.bound);
        report.samples_checked = tuples.len() as u64;
        let lhs_entry: u32 = if second { 2 } else { 1 };
        let mut failures: Vec<(Vec<u32>, String)> = tuples
            .par_iter()
            .flat_map_iter(|b| {
                let mut full = Vec::with_capacity(self.n + 1);
                full.push(lhs_entry);
                full.extend_from_slice(b);
                let lhs = self.qp_big.eval(&full).expect("tuple length matches n + 1");
                let total: u32 = b.iter().sum::<u32>() + lhs_entry;
                let mut bad = Vec::new();
                let restricted = if second {
                    self.string_sum_restricted(b, 0) + self.weighted_base(b) / int(2)
                } else {
                    self.string_sum_restricted(b, 1)
                };
                if restricted != lhs {
                    bad.push((b.clone(), format!("restricted rhs {restricted}, lhs {lhs}")));
                }
                if total % 2 == 0 {
                    let plain = if second {
                        self.string_sum(b) - self.weighted_base(b) / int(2)
                    } else {
                        self.string_sum(b)
                    };
                    if plain != lhs {
                        bad.push((b.clone(), format!("plain rhs {plain}, lhs {lhs}")));
                    }
                }
                bad
            })
            .collect();
        failures.sort_by(|a, b| a.0.cmp(&b.0));
        for (b, msg) in failures {
            report.counterexamples.push(format!("b = {b:?}: {msg}"));
        }
        Ok(report)
    }
}

/// First string equation: `N_{g,n+1}(1, b) = Σ_j Σ_{k=1}^{b_j} k N_{g,n}(b)|_{b_j=k}`.
///
/// The unrestricted double sum is checked wherever `1 + Σb` is even (elsewhere both sides of
/// the equation with the sum restricted to `k ≡ b_j + 1 (mod 2)` vanish term by term, and it
/// is that restricted identity which is checked at every tuple of the box).
pub fn check_string1(g: u32, n: u32, store: &mut PolyStore) -> Result<IdentityReport> {
    StringContext::new(g, n, store)?.sweep(false)
}

/// Second string equation:
/// `N_{g,n+1}(2, b) = Σ_j Σ_{k=1}^{b_j} k N_{g,n}(b)|_{b_j=k} - (1/2) Σ_j b_j N_{g,n}(b)`,
/// with the same parity convention as [`check_string1`]: the restricted form
/// (`k < b_j`, `k ≡ b_j`, and `+ (1/2) Σ_j b_j N`) is checked everywhere, the printed form
/// wherever `Σb` is even.
pub fn check_string2(g: u32, n: u32, store: &mut PolyStore) -> Result<IdentityReport> {
    StringContext::new(g, n, store)?.sweep(true)
}

/// Dilaton equation as an exact polynomial identity:
/// `N^(k)_{g,n+1}(2, b) - N^(k)_{g,n+1}(0, b) = (2g - 2 + n) N^(k)_{g,n}(b)` for every even
/// `k <= n` — the substituted variable is the first even slot (index `k`) of the
/// `(g, n+1)` class-`k` polynomial.
pub fn check_dilaton(g: u32, n: u32, store: &mut PolyStore) -> Result<IdentityReport> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(argument(format!("(g, n) = ({g}, {n}) is unstable")));
    }
    let mut report = IdentityReport::new(
        format!("dilaton (g={g}, n={n})"),
        format!("coefficient-level, every even class k <= {n}"),
    );
    let factor = int(2 * g as i64 - 2 + n as i64);
    for k in (0..=n).step_by(2) {
        let big = store.class_poly(g, n + 1, k)?.clone();
        let small = store.class_poly(g, n, k)?.clone();
        let lhs = &big.substitute(k as usize, &int(4)) - &big.substitute(k as usize, &int(0));
        let rhs = small.scale(&factor);
        report.samples_checked += 1;
        if lhs != rhs {
            report.counterexamples.push(format!(
                "class k = {k}: substitution difference does not equal (2g-2+n) N_(g,n)"
            ));
        }
    }
    Ok(report)
}

/// The three vanishing statements: for all-positive tuples with
/// `Σb <= 4g - 4 + 2n`; for tuples with `p >= 1` zeros and positive rest with
/// `0 < Σb <= 4g - 4 + 2(n - p)`; and in genus 0 for every nonnegative tuple with
/// `0 < Σb <= 2(n - 3)`.
pub fn check_vanishing(g: u32, n: u32, store: &mut PolyStore) -> Result<IdentityReport> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(argument(format!("(g, n) = ({g}, {n}) is unstable")));
    }
    let mut report = IdentityReport::new(
        format!("vanishing (g={g}, n={n})"),
        "all-positive, p-zeros, and genus-0 ranges".to_string(),
    );
    let expect_zero = |b: &[u32], store: &mut PolyStore, report: &mut IdentityReport| {
        let v = store.eval(g, b).expect("tuple length matches n");
        report.samples_checked += 1;
        if !v.is_zero() {
            report.counterexamples.push(format!("b = {b:?}: N = {v}"));
        }
    };
    // All entries positive, Σb <= 4g - 4 + 2n.
    let cap_a = 4 * g as i64 - 4 + 2 * n as i64;
    if cap_a >= n as i64 {
        for b in monotone_tuples_sum_capped(n as usize, 1, cap_a as u32) {
            expect_zero(&b, store, &mut report);
        }
    }
    // Exactly p zeros, remaining entries positive, 0 < Σb <= 4g - 4 + 2(n - p).
    for p in 1..n {
        let cap_b = 4 * g as i64 - 4 + 2 * (n - p) as i64;
        if cap_b < (n - p) as i64 {
            continue;
        }
        for rest in monotone_tuples_sum_capped((n - p) as usize, 1, cap_b as u32) {
            let mut b = vec![0u32; p as usize];
            b.extend_from_slice(&rest);
            expect_zero(&b, store, &mut report);
        }
    }
    // Genus 0: every nonnegative tuple with 0 < Σb <= 2(n - 3).
    if g == 0 && n > 3 {
        for b in monotone_tuples_sum_capped(n as usize, 0, 2 * (n - 3)) {
            if b.iter().any(|&x| x > 0) {
                expect_zero(&b, store, &mut report);
            }
        }
    }
    Ok(report)
}

/// `χ(M_{g,n}) = N_{g,n}(0, ..., 0)`, cross-checked against the closed forms
/// `(-1)^(n-1) (n-3)!` for genus 0 and `(-1)^(n-1) (2g-3+n)!/(2g-2)! ζ(1-2g)` with
/// `ζ(1-2g) = -B_{2g}/2g` for positive genus.
pub fn euler_characteristic(g: u32, n: u32, store: &mut PolyStore) -> Result<Rational> {
    if n == 0 || 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(argument(format!("(g, n) = ({g}, {n}) is unstable")));
    }
    let value = store.eval(g, &vec![0; n as usize])?;
    let sign = if n % 2 == 1 { int(1) } else { int(-1) };
    let closed = if g == 0 {
        &sign * Rational::from_integer(factorial((n - 3) as u64))
    } else {
        let zeta = -(crate::rational::bernoulli(2 * g)? / int(2 * g as i64));
        let ratio = Rational::new(
            factorial((2 * g as i64 - 3 + n as i64) as u64),
            factorial((2 * g - 2) as u64),
        );
        sign * ratio * zeta
    };
    if value != closed {
        return Err(internal(format!(
            "Euler characteristic mismatch at (g, n) = ({g}, {n}): \
             polynomial gives {value}, closed form gives {closed}"
        )));
    }
    Ok(value)
}

/// `χ(M_{g,n+1}) = (2 - 2g - n) χ(M_{g,n})` — the consequence of the dilaton equation —
/// for every stable `(g, n)` with `2g - 2 + n` up to the bound.
pub fn euler_recursion_check(max_complexity: u32, store: &mut PolyStore) -> Result<IdentityReport> {
    let mut report = IdentityReport::new(
        "euler-recursion",
        format!("all (g, n) with 2g-2+n <= {max_complexity}"),
    );
    for (g, n) in crate::tau::stable_pairs(max_complexity) {
        let small = euler_characteristic(g, n, store)?;
        let big = euler_characteristic(g, n + 1, store)?;
        report.samples_checked += 1;
        if big != &small * int(2 - 2 * g as i64 - n as i64) {
            report
                .counterexamples
                .push(format!("(g, n) = ({g}, {n}): chi = {small}, chi(n+1) = {big}"));
        }
    }
    Ok(report)
}

/// The symplectic invariant `F^(g) = N_{g,1}(0) / (2 - 2g)` for `g >= 2`.
pub fn symplectic_invariant(g: u32, store: &mut PolyStore) -> Result<Rational> {
    if g < 2 {
        return Err(argument("the symplectic invariant is defined for genus at least 2"));
    }
    Ok(store.eval(g, &[0])? / int(2 - 2 * g as i64))
}

/// `N_{0,n}(b, 0, ..., 0) = ∏_{k=1}^{n-3} (b^2 - 4k^2)/4k` for even `b <= b_max`.  Odd `b`
/// are excluded: the left side vanishes by parity while the product does not.
pub fn product_formula_check(n: u32, b_max: u32, store: &mut PolyStore) -> Result<IdentityReport> {
    if n < 3 {
        return Err(argument("the product formula needs n >= 3"));
    }
    let mut report = IdentityReport::new(
        format!("product-formula (n={n})"),
        format!("even b in [0, {b_max}]"),
    );
    for b in (0..=b_max).step_by(2) {
        let mut tuple = vec![0u32; n as usize];
        tuple[0] = b;
        let lhs = store.eval(0, &tuple)?;
        let mut rhs = int(1);
        for k in 1..=(n as i64 - 3) {
            rhs *= rat(b as i64 * b as i64 - 4 * k * k, 4 * k);
        }
        report.samples_checked += 1;
        if lhs != rhs {
            report
                .counterexamples
                .push(format!("b = {b}: polynomial {lhs}, product {rhs}"));
        }
    }
    Ok(report)
}

/// All weakly increasing tuples of length `n` with entries in `[lo, hi]`.
pub fn monotone_tuples(n: usize, lo: u32, hi: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(n: usize, min: u32, hi: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in min..=hi {
            cur.push(x);
            go(n, x, hi, cur, out);
            cur.pop();
        }
    }
    go(n, lo, hi, &mut cur, &mut out);
    out
}

/// All weakly increasing tuples of length `n`, entries `>= lo`, with entry sum `<= cap`.
fn monotone_tuples_sum_capped(n: usize, lo: u32, cap: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(n: usize, min: u32, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in min..=left {
            cur.push(x);
            go(n, x, left - x, cur, out);
            cur.pop();
        }
    }
    if (lo as u64) * (n as u64) > cap as u64 {
        return out;
    }
    go(n, lo, cap, &mut cur, &mut out);
    out
}

/// Reconstruct every parity class of `N_{0,n}` from the string equations and the `(0, n-1)`
/// polynomials alone, then assert the result equals the recursion-built polynomials.
///
/// For class `k` the unknown is block-symmetric of total degree `<= n - 3`; the first
/// string equation pins its restriction to `v = 1` (one odd variable), the second to
/// `w = 4` (one even variable).  A block-symmetric polynomial vanishing on both
/// restrictions is divisible by `∏(v_i - 1) ∏(w_j - 4)` of degree `n`, so within degree
/// `n - 3` the two families of constraints determine the class uniquely.
pub fn genus0_from_string(n: u32, store: &mut PolyStore) -> Result<LatticeQuasiPolynomial> {
    if n < 4 {
        return Err(argument("reconstruction needs n >= 4"));
    }
    let qp_prev = store.quasi_polynomial(0, n - 1)?;
    let budget = (n - 3) as usize;
    for k in (0..=n).step_by(2) {
        let poly = reconstruct_class(n, k, budget, &qp_prev)?;
        let built = store.class_poly(0, n, k)?;
        if &poly != built {
            return Err(internal(format!(
                "string-equation reconstruction of class k = {k} for (0, {n}) disagrees \
                 with the recursion-built polynomial"
            )));
        }
    }
    store.quasi_polynomial(0, n)
}

/// Solve for one parity class of `N_{0,n}` from string-equation constraints.
fn reconstruct_class(
    n: u32,
    k: u32,
    budget: usize,
    qp_prev: &LatticeQuasiPolynomial,
) -> Result<SquaredPoly> {
    let nv = n as usize;
    let kv = k as usize;
    let basis = orbit_basis(kv, nv - kv, budget);
    let ncols = basis.len();
    let mut rows: Vec<(Vec<Rational>, Rational)> = Vec::new();

    // Enough distinct values per variable to exceed the degree budget.
    let pool = budget + 2;
    let odd_vals: Vec<u32> = (0..pool as u32).map(|t| 1 + 2 * t).collect();
    let even_vals: Vec<u32> = (0..pool as u32).map(|t| 2 + 2 * t).collect();

    // First string equation: left entry 1 (odd), requires k >= 1 odd slots.
    if k >= 1 {
        for odds in multisets(&odd_vals, kv - 1) {
            for evens in multisets(&even_vals, nv - kv) {
                let mut b = odds.clone();
                b.extend_from_slice(&evens);
                let rhs = string_rhs(&b, qp_prev, false)?;
                let mut point = vec![1u32];
                point.extend_from_slice(&b);
                rows.push((orbit_row(&basis, kv, &point), rhs));
            }
        }
    }
    // Second string equation: left entry 2 (even), requires an even slot.
    if k < n {
        for odds in multisets(&odd_vals, kv) {
            for evens in multisets(&even_vals, nv - 1 - kv) {
                let mut b = odds.clone();
                b.extend_from_slice(&evens);
                let rhs = string_rhs(&b, qp_prev, true)?;
                // Point in class order: odds first, then the new even entry 2, then evens.
                let mut point = odds.clone();
                point.push(2);
                point.extend_from_slice(&evens);
                rows.push((orbit_row(&basis, kv, &point), rhs));
            }
        }
    }

    let coeffs = solve_exact(rows, ncols).map_err(|e| {
        internal(format!("string system for (0, {n}) class k = {k} is {e}"))
    })?;
    let mut poly = SquaredPoly::zero(nv);
    for ((odd_exps, even_exps), c) in basis.iter().zip(&coeffs) {
        if c.is_zero() {
            continue;
        }
        for ov in distinct_permutations(odd_exps) {
            for ev in distinct_permutations(even_exps) {
                let mut e = ov.clone();
                e.extend_from_slice(&ev);
                poly = &poly + &SquaredPoly::monomial(nv, e, c.clone());
            }
        }
    }
    Ok(poly)
}

/// Right side of the string equations for `N_{0,n}(x, b)` computed from `(0, n-1)` values:
/// the double sum, minus the dilaton-style correction when `second` is set.
fn string_rhs(b: &[u32], qp_prev: &LatticeQuasiPolynomial, second: bool) -> Result<Rational> {
    let mut acc = Rational::zero();
    let mut work = b.to_vec();
    for j in 0..b.len() {
        for k in 1..=b[j] {
            work[j] = k;
            let v = qp_prev.eval(&work)?;
            if !v.is_zero() {
                acc += v * int(k as i64);
            }
        }
        work[j] = b[j];
    }
    if second {
        let total: i64 = b.iter().map(|&x| x as i64).sum();
        acc -= qp_prev.eval(b)? * rat(total, 2);
    }
    Ok(acc)
}

/// Block-symmetric monomial orbits: exponent multisets (sorted descending) for the odd and
/// even blocks, total degree bounded.
fn orbit_basis(k: usize, m: usize, budget: usize) -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut out = Vec::new();
    for total1 in 0..=budget {
        for odd in bounded_partitions(total1, k) {
            for total2 in 0..=(budget - total1) {
                for even in bounded_partitions(total2, m) {
                    out.push((odd.clone(), even));
                }
            }
        }
    }
    out
}

/// Weakly decreasing sequences of the given length summing to `total`.
fn bounded_partitions(total: usize, len: usize) -> Vec<Vec<u32>> {
    fn go(total: usize, len: usize, max: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if len == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let hi = total.min(max);
        for x in (0..=hi).rev() {
            if total - x > x * (len - 1) {
                continue;
            }
            cur.push(x as u32);
            go(total - x, len - 1, x, cur, out);
            cur.pop();
        }
    }
    if len == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    go(total, len, total, &mut Vec::new(), &mut out);
    out
}

/// All distinct rearrangements of a multiset.
fn distinct_permutations(multiset: &[u32]) -> Vec<Vec<u32>> {
    let mut counts: Vec<(u32, usize)> = Vec::new();
    for &x in multiset {
        match counts.iter_mut().find(|(v, _)| *v == x) {
            Some((_, c)) => *c += 1,
            None => counts.push((x, 1)),
        }
    }
    fn go(
        counts: &mut Vec<(u32, usize)>,
        len: usize,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in 0..counts.len() {
            if counts[i].1 == 0 {
                continue;
            }
            counts[i].1 -= 1;
            cur.push(counts[i].0);
            go(counts, len, cur, out);
            cur.pop();
            counts[i].1 += 1;
        }
    }
    let mut out = Vec::new();
    go(&mut counts, multiset.len(), &mut Vec::new(), &mut out);
    out
}

/// Evaluate every orbit monomial at the `b`-point (odd block first), over `u_i = b_i^2`.
fn orbit_row(basis: &[(Vec<u32>, Vec<u32>)], k: usize, point_b: &[u32]) -> Vec<Rational> {
    let u: Vec<Rational> = point_b.iter().map(|&x| int(x as i64 * x as i64)).collect();
    basis
        .iter()
        .map(|(odd_exps, even_exps)| {
            sym_block_sum(odd_exps, &u[..k]) * sym_block_sum(even_exps, &u[k..])
        })
        .collect()
}

/// `Σ_{distinct rearrangements e} ∏ vals_i^{e_i}` for an exponent multiset.
fn sym_block_sum(exps: &[u32], vals: &[Rational]) -> Rational {
    debug_assert_eq!(exps.len(), vals.len());
    if exps.is_empty() {
        return int(1);
    }
    let mut acc = Rational::zero();
    for perm in distinct_permutations(exps) {
        let mut term = int(1);
        for (e, v) in perm.iter().zip(vals) {
            for _ in 0..*e {
                term *= v;
            }
        }
        acc += term;
    }
    acc
}

/// Exact Gaussian elimination; requires the system to have full column rank and to be
/// consistent on every row.
fn solve_exact(
    mut rows: Vec<(Vec<Rational>, Rational)>,
    ncols: usize,
) -> std::result::Result<Vec<Rational>, String> {
    let mut pivot_rows: Vec<usize> = Vec::new();
    let mut row_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut next = 0usize;
    for col in 0..ncols {
        let Some(pr) = (next..rows.len()).find(|&r| !rows[r].0[col].is_zero()) else {
            continue;
        };
        rows.swap(next, pr);
        let inv = int(1) / rows[next].0[col].clone();
        for c in col..ncols {
            let v = rows[next].0[c].clone() * &inv;
            rows[next].0[c] = v;
        }
        let v = rows[next].1.clone() * &inv;
        rows[next].1 = v;
        for r in 0..rows.len() {
            if r == next || rows[r].0[col].is_zero() {
                continue;
            }
            let f = rows[r].0[col].clone();
            for c in col..ncols {
                let delta = &f * &rows[next].0[c];
                rows[r].0[c] -= delta;
            }
            let delta = &f * &rows[next].1;
            rows[r].1 -= delta;
        }
        row_of_col[col] = Some(next);
        pivot_rows.push(next);
        next += 1;
    }
    if pivot_rows.len() < ncols {
        return Err(format!(
            "underdetermined: rank {} of {} unknowns",
            pivot_rows.len(),
            ncols
        ));
    }
    // All remaining rows must have been reduced to 0 = 0.
    for (coeffs, rhs) in rows.iter().skip(next) {
        if coeffs.iter().any(|c| !c.is_zero()) || !rhs.is_zero() {
            return Err("inconsistent".to_string());
        }
    }
    Ok((0..ncols)
        .map(|c| rows[row_of_col[c].expect("full rank")].1.clone())
        .collect())
}

/// All weakly increasing selections (with repetition) of the given size from `vals`.
fn multisets(vals: &[u32], size: usize) -> Vec<Vec<u32>> {
    fn go(vals: &[u32], start: usize, size: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..vals.len() {
            cur.push(vals[i]);
            go(vals, i, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(vals, 0, size, &mut Vec::new(), &mut out);
    out
}
