//! Tau brackets: coefficient rescalings of the parity-class polynomials, whose top-degree
//! values are intersection numbers on the moduli space.
//!
//! For `n` insertions `τ^±_{m_i}` with the minus signs first and `k` of them, the bracket
//! equals `2^{2|m| - g} · m! · s! · c^{(k)}_m`, where `c^{(k)}_m` is the coefficient of
//! `∏ u_i^{m_i}` in `N^{(k)}_{g,n}`, `m! = ∏ m_i!` and `s = 3g - 3 + n - |m|`.  The
//! bracket vanishes when `k` is odd or `|m| > 3g - 3 + n`; at top degree `|m| = 3g - 3 + n`
//! it is independent of the (even) sign assignment and reproduces the Witten-Kontsevich
//! intersection numbers.

use num_traits::Zero;

use crate::error::{argument, internal, Result};
use crate::quasipoly::PolyStore;
use crate::rational::{factorial, pow2, Rational};
use crate::report::IdentityReport;

/// Sign decoration on one tau insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Minus,
    Plus,
}

/// A genus, exponent vector and sign assignment indexing one bracket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauIndex {
    genus: u32,
    m: Vec<u32>,
    num_minus: u32,
}

impl TauIndex {
    /// Signs must come minus-first, matching the odd-first variable order of the class
    /// polynomials.
    pub fn new(genus: u32, m: Vec<u32>, signs: Vec<Sign>) -> Result<Self> {
        if m.is_empty() {
            return Err(argument("bracket needs at least one insertion"));
        }
        if signs.len() != m.len() {
            return Err(argument(format!(
                "{} exponents but {} signs",
                m.len(),
                signs.len()
            )));
        }
        let num_minus = signs.iter().take_while(|&&s| s == Sign::Minus).count();
        if signs[num_minus..].contains(&Sign::Minus) {
            return Err(argument("minus signs must precede all plus signs"));
        }
        Ok(TauIndex { genus, m, num_minus: num_minus as u32 })
    }

    /// Convenience constructor from the number of leading minus signs.
    pub fn with_minus_count(genus: u32, m: Vec<u32>, num_minus: u32) -> Result<Self> {
        if num_minus as usize > m.len() {
            return Err(argument("more minus signs than insertions"));
        }
        let signs = (0..m.len())
            .map(|i| if (i as u32) < num_minus { Sign::Minus } else { Sign::Plus })
            .collect();
        TauIndex::new(genus, m, signs)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn exponents(&self) -> &[u32] {
        &self.m
    }

    pub fn num_minus(&self) -> u32 {
        self.num_minus
    }
}

/// The bracket value, building the underlying class polynomial on demand.
pub fn tau_bracket(idx: &TauIndex, store: &mut PolyStore) -> Result<Rational> {
    let n = idx.m.len() as u32;
    let g = idx.genus;
    let k = idx.num_minus;
    if k % 2 == 1 {
        return Ok(Rational::zero());
    }
    let order: i64 = idx.m.iter().map(|&x| x as i64).sum();
    let dim = 3 * g as i64 - 3 + n as i64;
    if order > dim {
        // Also covers unstable (g, n), where dim < 0.
        return Ok(Rational::zero());
    }
    let coeff = store.class_poly(g, n, k)?.coeff(&idx.m);
    if coeff.is_zero() {
        return Ok(Rational::zero());
    }
    let mut scale = pow2(2 * order - g as i64);
    for &mi in &idx.m {
        scale *= Rational::from_integer(factorial(mi as u64));
    }
    scale *= Rational::from_integer(factorial((dim - order) as u64));
    Ok(scale * coeff)
}

/// Top-degree bracket `⟨τ_{m_1} ... τ_{m_n}⟩_g` with `|m| = 3g - 3 + n`: an intersection
/// number, independent of the sign assignment.  Computed with all-plus signs and, when
/// possible, re-derived with two minus signs to confirm the independence.
pub fn intersection_number(g: u32, m: &[u32], store: &mut PolyStore) -> Result<Rational> {
    let n = m.len() as u32;
    let order: i64 = m.iter().map(|&x| x as i64).sum();
    let dim = 3 * g as i64 - 3 + n as i64;
    if order != dim {
        return Err(argument(format!(
            "|m| = {order} but 3g - 3 + n = {dim}; only top-degree brackets are intersection numbers"
        )));
    }
    let base = tau_bracket(&TauIndex::with_minus_count(g, m.to_vec(), 0)?, store)?;
    if n >= 2 {
        let alt = tau_bracket(&TauIndex::with_minus_count(g, m.to_vec(), 2)?, store)?;
        if alt != base {
            return Err(internal(format!(
                "top-degree bracket for g = {g}, m = {m:?} depends on signs: \
                 all-plus gives {base}, two-minus gives {alt}"
            )));
        }
    }
    Ok(base)
}

/// Verify that every top-degree bracket with `2g - 2 + n <= max_complexity` takes the same
/// value for every even number of minus signs.
pub fn top_degree_independence(max_complexity: u32, store: &mut PolyStore) -> Result<IdentityReport> {
    let mut report = IdentityReport::new(
        "tau-top-independence",
        format!("all top-degree brackets with 2g-2+n <= {max_complexity}"),
    );
    for (g, n) in stable_pairs(max_complexity) {
        let dim = (3 * g as i64 - 3 + n as i64) as u32;
        for m in compositions(dim, n as usize) {
            let mut values: Vec<(u32, Rational)> = Vec::new();
            for k in (0..=n).step_by(2) {
                let idx = TauIndex::with_minus_count(g, m.clone(), k)?;
                values.push((k, tau_bracket(&idx, store)?));
            }
            report.samples_checked += 1;
            if values.iter().any(|(_, v)| *v != values[0].1) {
                report.counterexamples.push(format!("g={g} m={m:?}: values {values:?}"));
            }
        }
    }
    Ok(report)
}

/// Verify that the degree-`(3g-3+n)` homogeneous part of `N^{(k)}_{g,n}` does not depend
/// on `k` (it is the common volume polynomial), coefficient by coefficient.
pub fn top_part_independence(max_complexity: u32, store: &mut PolyStore) -> Result<IdentityReport> {
    let mut report = IdentityReport::new(
        "volume-top-part",
        format!("all (g, n) with 2g-2+n <= {max_complexity}"),
    );
    for (g, n) in stable_pairs(max_complexity) {
        let dim = (3 * g as i64 - 3 + n as i64) as u32;
        let reference = store.class_poly(g, n, 0)?.homogeneous_part(dim);
        report.samples_checked += 1;
        for k in (2..=n).step_by(2) {
            let part = store.class_poly(g, n, k)?.homogeneous_part(dim);
            if part != reference {
                report
                    .counterexamples
                    .push(format!("(g, n) = ({g}, {n}): top part of k={k} differs from k=0"));
            }
        }
    }
    Ok(report)
}

/// Stable `(g, n)` with `2g - 2 + n` up to the bound.
pub(crate) fn stable_pairs(max_complexity: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for g in 0..=(max_complexity + 2) / 2 {
        for n in 1..=(max_complexity as i64 - (2 * g as i64 - 2)).max(0) as u32 {
            if 2 * g as i64 - 2 + n as i64 >= 1 {
                out.push((g, n));
            }
        }
    }
    out
}

/// All vectors of `parts` nonnegative integers summing to `total`.
pub(crate) fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(parts);
    fn go(left: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == parts {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in 0..=left {
            cur.push(x);
            go(left - x, parts, cur, out);
            cur.pop();
        }
    }
    if parts == 0 {
        return out;
    }
    go(total, parts, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn witten_kontsevich_values() {
        let mut store = PolyStore::new();
        assert_eq!(intersection_number(0, &[0, 0, 0], &mut store).unwrap(), int(1));
        assert_eq!(intersection_number(1, &[1], &mut store).unwrap(), rat(1, 24));
        assert_eq!(intersection_number(0, &[0, 0, 0, 1], &mut store).unwrap(), int(1));
        assert_eq!(intersection_number(2, &[4], &mut store).unwrap(), rat(1, 1152));
    }

    #[test]
    fn below_top_degree_bracket() {
        let mut store = PolyStore::new();
        let idx = TauIndex::with_minus_count(1, vec![0, 0], 0).unwrap();
        assert_eq!(tau_bracket(&idx, &mut store).unwrap(), rat(1, 12));
    }

    #[test]
    fn odd_sign_count_vanishes() {
        let mut store = PolyStore::new();
        let idx = TauIndex::new(0, vec![0, 0, 0], vec![Sign::Minus, Sign::Plus, Sign::Plus])
            .unwrap();
        assert_eq!(tau_bracket(&idx, &mut store).unwrap(), int(0));
    }

    #[test]
    fn overweight_brackets_vanish() {
        let mut store = PolyStore::new();
        let idx = TauIndex::with_minus_count(0, vec![2, 0, 0], 0).unwrap();
        assert_eq!(tau_bracket(&idx, &mut store).unwrap(), int(0));
        // Unstable (0, 2): dimension is negative, bracket vanishes without building anything.
        let idx = TauIndex::with_minus_count(0, vec![0, 0], 0).unwrap();
        assert_eq!(tau_bracket(&idx, &mut store).unwrap(), int(0));
        assert_eq!(store.num_classes(), 0);
    }

    #[test]
    fn sign_order_is_validated() {
        assert!(TauIndex::new(0, vec![0, 0], vec![Sign::Plus, Sign::Minus]).is_err());
        assert!(TauIndex::new(0, vec![0, 0], vec![Sign::Minus]).is_err());
        assert!(TauIndex::new(0, vec![], vec![]).is_err());
        assert!(TauIndex::with_minus_count(0, vec![0], 2).is_err());
    }

    #[test]
    fn intersection_number_rejects_wrong_order() {
        let mut store = PolyStore::new();
        assert!(intersection_number(0, &[1, 0, 0], &mut store).is_err());
    }

    #[test]
    fn independence_reports_pass_on_small_range() {
        let mut store = PolyStore::new();
        let top = top_degree_independence(2, &mut store).unwrap();
        assert!(top.is_success(), "{}", top.summary());
        let part = top_part_independence(2, &mut store).unwrap();
        assert!(part.is_success(), "{}", part.summary());
    }
}
