//! Brute-force oracle counting the branched covers behind `N_{g,n}` directly, as weighted
//! permutation triples, independently of the recursion.
//!
//! A cover of the sphere branched over three points is encoded by permutations
//! `(σ_0, σ_1, σ_∞)` of the `d` sheets with `σ_0 σ_1 σ_∞ = 1`: `σ_1` is a fixed-point-free
//! involution (every point over the second branch point has ramification exactly 2), `σ_0`
//! has all cycle lengths at least 2, and the cycle type of `σ_∞` is the boundary profile
//! `b`.  Connectedness is transitivity of `⟨σ_0, σ_1⟩`, and the genus comes from
//! `2 - 2g = c(σ_0) + c(σ_1) + c(σ_∞) - d`.  Each transitive triple contributes the number
//! of ways to label the cycles of `σ_∞` so that cycle `i` has length `b_i`, and the total
//! is divided by `d!` — the orbifold weighting that the recursion's fractional values
//! (e.g. `N_{1,1}(4) = 1/4`) force.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{argument, Result};
use crate::rational::{factorial, Rational};
use crate::recursion::{n_value, BTuple, MemoTable};
use crate::report::IdentityReport;

/// Default ceiling on the cover degree `d = Σ b_i`.
pub const DEFAULT_DEGREE_BOUND: u32 = 8;

/// Census-backed cover counter.  Enumeration results are cached per degree, so repeated
/// queries at the same degree cost one hash lookup.
#[derive(Debug)]
pub struct CoverOracle {
    max_degree: u32,
    census: HashMap<u32, HashMap<(Vec<u32>, u32), u64>>,
}

impl CoverOracle {
    pub fn new(max_degree: u32) -> Self {
        CoverOracle { max_degree, census: HashMap::new() }
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// The weighted number of connected covers with labeled boundary profile `b` and the
    /// given genus.
    pub fn count(&mut self, b: &[u32], genus: u32) -> Result<Rational> {
        if b.is_empty() || b.contains(&0) {
            return Err(argument("profile entries must be positive"));
        }
        let d: u32 = b.iter().sum();
        if d > self.max_degree {
            return Err(argument(format!(
                "degree {d} exceeds the enumeration bound {}",
                self.max_degree
            )));
        }
        if d % 2 == 1 {
            return Ok(Rational::zero());
        }
        let census = self
            .census
            .entry(d)
            .or_insert_with(|| build_census(d as usize));
        let mut key = b.to_vec();
        key.sort_unstable();
        let triples = census.get(&(key, genus)).copied().unwrap_or(0);
        if triples == 0 {
            return Ok(Rational::zero());
        }
        // Multiplicity factor: ways to label the cycles so cycle i has length b_i.
        let mut mult = BigInt::from(1u32);
        let mut sorted = b.to_vec();
        sorted.sort_unstable();
        let mut run = 1u64;
        for i in 1..=sorted.len() {
            if i < sorted.len() && sorted[i] == sorted[i - 1] {
                run += 1;
            } else {
                mult *= factorial(run);
                run = 1;
            }
        }
        Ok(Rational::new(BigInt::from(triples) * mult, factorial(d as u64)))
    }
}

/// Tally all transitive `(σ_0, σ_1)` pairs of degree `d` by the cycle type of
/// `σ_0 σ_1` (which equals that of `σ_∞ = (σ_0 σ_1)^{-1}`) and the resulting genus.
fn build_census(d: usize) -> HashMap<(Vec<u32>, u32), u64> {
    debug_assert!(d % 2 == 0 && d >= 2);
    let involutions = fixed_point_free_involutions(d);
    let sigma0s = fixed_point_free_permutations(d);
    let c1 = (d / 2) as i64;
    let mut out: HashMap<(Vec<u32>, u32), u64> = HashMap::new();
    let mut prod = vec![0usize; d];
    for s1 in &involutions {
        for s0 in &sigma0s {
            for i in 0..d {
                prod[i] = s0[s1[i]];
            }
            if !is_transitive(s0, s1) {
                continue;
            }
            let c0 = cycle_count(s0) as i64;
            let cinf_type = cycle_type(&prod);
            let cinf = cinf_type.len() as i64;
            let two_minus_2g = c0 + c1 + cinf - d as i64;
            debug_assert!(two_minus_2g <= 2 && (2 - two_minus_2g) % 2 == 0);
            if two_minus_2g > 2 {
                continue;
            }
            let genus = ((2 - two_minus_2g) / 2) as u32;
            *out.entry((cinf_type, genus)).or_insert(0) += 1;
        }
    }
    out
}

/// All fixed-point-free involutions of `{0, .., d-1}`, built by pairing the smallest free
/// point with each remaining free point.
fn fixed_point_free_involutions(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; d];
    pair_up(&mut perm, &mut out);
    out
}

fn pair_up(perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let first = match perm.iter().position(|&x| x == usize::MAX) {
        None => {
            out.push(perm.clone());
            return;
        }
        Some(i) => i,
    };
    for j in first + 1..perm.len() {
        if perm[j] == usize::MAX {
            perm[first] = j;
            perm[j] = first;
            pair_up(perm, out);
            perm[first] = usize::MAX;
            perm[j] = usize::MAX;
        }
    }
}

/// All permutations of `{0, .., d-1}` without fixed points (all cycle lengths >= 2).
fn fixed_point_free_permutations(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm = Vec::with_capacity(d);
    let mut used = vec![false; d];
    extend_derangement(d, &mut perm, &mut used, &mut out);
    out
}

fn extend_derangement(
    d: usize,
    perm: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
) {
    if perm.len() == d {
        out.push(perm.clone());
        return;
    }
    let i = perm.len();
    for img in 0..d {
        if img != i && !used[img] {
            used[img] = true;
            perm.push(img);
            extend_derangement(d, perm, used, out);
            perm.pop();
            used[img] = false;
        }
    }
}

/// Does `⟨s0, s1⟩` act transitively?  Union-find over the edges `i — s(i)`.
fn is_transitive(s0: &[usize], s1: &[usize]) -> bool {
    let d = s0.len();
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = d;
    for i in 0..d {
        for s in [s0, s1] {
            let (a, b) = (find(&mut parent, i), find(&mut parent, s[i]));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
    }
    components == 1
}

fn cycle_count(perm: &[usize]) -> usize {
    cycle_type(perm).len()
}

/// Cycle lengths sorted ascending.
fn cycle_type(perm: &[usize]) -> Vec<u32> {
    let mut seen = vec![false; perm.len()];
    let mut lengths = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u32;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        lengths.push(len);
    }
    lengths.sort_unstable();
    lengths
}

/// Compare the oracle against the recursion on every profile with `Σ b_i <= max_total`
/// and every stable genus up to the Riemann-Hurwitz ceiling.  Unstable `(g, n)` are
/// excluded: the recursion sets them to zero by convention while the cover count is
/// genuine there (e.g. the degree-2 identity cover has profile `(1,1)` and genus 0).
pub fn oracle_compare(max_total: u32) -> Result<IdentityReport> {
    let mut report = IdentityReport::new(
        "cover-oracle",
        format!("all profiles with sum <= {max_total}, stable genera"),
    );
    let mut oracle = CoverOracle::new(max_total);
    let mut memo = MemoTable::new();
    for b in profiles_up_to(max_total) {
        let d: u32 = b.iter().sum();
        let n = b.len() as u32;
        // With c(σ_0) >= 1 and c(σ_1) = d/2, the genus cannot exceed (1 + d/2 - n)/2.
        let g_cap = (2 + d / 2).saturating_sub(n) / 2;
        for g in 0..=g_cap {
            if 2 * g as i64 - 2 + n as i64 <= 0 {
                continue;
            }
            let from_oracle = oracle.count(&b, g)?;
            let t = BTuple::new(g, b.clone())?;
            let from_recursion = n_value(&t, &mut memo);
            report.samples_checked += 1;
            if from_oracle != from_recursion {
                report.counterexamples.push(format!(
                    "g={g} b={b:?}: oracle {from_oracle}, recursion {from_recursion}"
                ));
            }
        }
    }
    Ok(report)
}

/// All weakly increasing tuples of positive integers with the given maximum sum.
fn profiles_up_to(max_total: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(min: u32, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for next in min..=left {
            cur.push(next);
            go(next, left - next, cur, out);
            cur.pop();
        }
    }
    go(1, max_total, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn counts_match_frozen_values() {
        let mut oracle = CoverOracle::new(8);
        assert_eq!(oracle.count(&[1, 1, 2], 0).unwrap(), int(1));
        assert_eq!(oracle.count(&[4], 1).unwrap(), rat(1, 4));
        assert_eq!(oracle.count(&[2], 1).unwrap(), int(0));
        // Unstable (g, n) = (0, 2): the genuine cover count (six Klein four-group triples,
        // weighted) is nonzero even though the recursion sets unstable counts to zero —
        // the reason oracle_compare skips unstable pairs.
        assert_eq!(oracle.count(&[2, 2], 0).unwrap(), rat(1, 2));
    }

    #[test]
    fn odd_total_counts_vanish() {
        let mut oracle = CoverOracle::new(8);
        assert_eq!(oracle.count(&[1, 2], 0).unwrap(), int(0));
        assert_eq!(oracle.count(&[3], 1).unwrap(), int(0));
    }

    #[test]
    fn relabeling_equal_entries_is_invariant() {
        let mut oracle = CoverOracle::new(8);
        let a = oracle.count(&[1, 2, 1, 4], 0).unwrap();
        let b = oracle.count(&[4, 1, 2, 1], 0).unwrap();
        let c = oracle.count(&[1, 1, 2, 4], 0).unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
    }

    #[test]
    fn degree_bound_is_enforced() {
        let mut oracle = CoverOracle::new(4);
        assert!(oracle.count(&[6], 1).is_err());
        assert!(oracle.count(&[0, 2], 0).is_err());
    }

    #[test]
    fn enumeration_sizes_are_the_classical_ones() {
        assert_eq!(fixed_point_free_involutions(4).len(), 3);
        assert_eq!(fixed_point_free_involutions(6).len(), 15);
        assert_eq!(fixed_point_free_permutations(4).len(), 9);
        assert_eq!(fixed_point_free_permutations(6).len(), 265);
    }

    #[test]
    fn compare_up_to_six_has_no_counterexamples() {
        let report = oracle_compare(6).unwrap();
        assert!(report.is_success(), "{}", report.summary());
        assert!(report.samples_checked >= 10);
    }
}
