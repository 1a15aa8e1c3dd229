//! Cross-cutting structural properties: pivot independence of the recursion, parity
//! vanishing, symmetry within parity classes, memoization determinism, interpolation
//! round-trips, and agreement between the recursion and the interpolated polynomials.

use lattice_count::poly::{poly_interpolate, GridSpec, SquaredPoly};
use lattice_count::quasipoly::PolyStore;
use lattice_count::rational::{int, rat, Rational};
use lattice_count::recursion::{n_value, n_value_forced_pivot, BTuple, MemoTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stable `(g, n)` with `2g - 2 + n` at most the bound.
fn stable_pairs(max_complexity: i64) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for g in 0..=((max_complexity + 2) / 2) as u32 {
        for n in 1..=(max_complexity + 2 - 2 * g as i64).max(0) as u32 {
            if 2 * g as i64 - 2 + n as i64 > 0 {
                out.push((g, n));
            }
        }
    }
    out
}

/// Weakly increasing positive tuples of length `n` with sum at most `cap`.
fn tuples_sum_capped(n: usize, cap: u32) -> Vec<Vec<u32>> {
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
    let mut out = Vec::new();
    if cap as usize >= n {
        go(n, 1, cap, &mut Vec::new(), &mut out);
    }
    out
}

#[test]
fn pivot_independence() {
    let mut memo = MemoTable::new();
    let mut checked = 0u64;
    for (g, n) in stable_pairs(4) {
        for b in tuples_sum_capped(n as usize, 10) {
            let t = BTuple::new(g, b.clone()).unwrap();
            let reference = n_value(&t, &mut memo);
            for pivot in 0..b.len() {
                let forced = n_value_forced_pivot(&t, pivot, &mut memo);
                assert_eq!(
                    forced, reference,
                    "pivot {pivot} disagrees at g = {g}, b = {b:?}"
                );
                checked += 1;
            }
        }
    }
    assert!(checked > 500, "expected a substantive sweep, got {checked}");
}

#[test]
fn parity_vanishing_through_the_body() {
    // Odd-sum tuples must vanish, and not merely by the evaluation shortcut: the forced
    // pivot path runs the full recursion body.
    let mut memo = MemoTable::new();
    for (g, n) in stable_pairs(4) {
        for b in tuples_sum_capped(n as usize, 10) {
            if b.iter().sum::<u32>() % 2 == 0 {
                continue;
            }
            let t = BTuple::new(g, b.clone()).unwrap();
            assert_eq!(n_value(&t, &mut memo), int(0));
            for pivot in 0..b.len() {
                assert_eq!(
                    n_value_forced_pivot(&t, pivot, &mut memo),
                    int(0),
                    "odd-parity tuple g = {g}, b = {b:?} survived pivot {pivot}"
                );
            }
        }
    }
}

#[test]
fn symmetry_within_parity_classes() {
    // The count is invariant under every permutation of its arguments.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ca1ab1e);
    let mut memo = MemoTable::new();
    for (g, n) in stable_pairs(4) {
        for _ in 0..20 {
            let mut b: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=9)).collect();
            let reference = n_value(&BTuple::new(g, b.clone()).unwrap(), &mut memo);
            for _ in 0..3 {
                let i = rng.gen_range(0..n as usize);
                let j = rng.gen_range(0..n as usize);
                b.swap(i, j);
                let permuted = n_value(&BTuple::new(g, b.clone()).unwrap(), &mut memo);
                assert_eq!(permuted, reference, "permutation broke g = {g}, b = {b:?}");
            }
        }
    }
    // The same symmetry at polynomial level: swapping two variables inside the odd block,
    // or inside the even block, fixes each class polynomial.
    let mut store = PolyStore::new();
    let poly = store.class_poly(1, 3, 2).unwrap();
    assert_eq!(poly.swap_vars(0, 1), *poly);
    let poly = store.class_poly(0, 4, 0).unwrap();
    for i in 1..4 {
        assert_eq!(poly.swap_vars(0, i), *poly);
    }
}

#[test]
fn memoization_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xde7e_c7ab1e);
    let mut tuples = Vec::new();
    for (g, n) in stable_pairs(4) {
        for _ in 0..10 {
            let b: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=8)).collect();
            tuples.push((g, b));
        }
    }
    // Fresh table per value, one shared table in forward order, one in reverse order:
    // all three must agree everywhere.
    let fresh: Vec<Rational> = tuples
        .iter()
        .map(|(g, b)| n_value(&BTuple::new(*g, b.clone()).unwrap(), &mut MemoTable::new()))
        .collect();
    let mut forward_memo = MemoTable::new();
    let forward: Vec<Rational> = tuples
        .iter()
        .map(|(g, b)| n_value(&BTuple::new(*g, b.clone()).unwrap(), &mut forward_memo))
        .collect();
    let mut reverse_memo = MemoTable::new();
    let mut reverse: Vec<Rational> = tuples
        .iter()
        .rev()
        .map(|(g, b)| n_value(&BTuple::new(*g, b.clone()).unwrap(), &mut reverse_memo))
        .collect();
    reverse.reverse();
    assert_eq!(fresh, forward);
    assert_eq!(fresh, reverse);
}

fn fill_grid(
    nodes: &[Vec<u32>],
    var: usize,
    point: &mut Vec<u32>,
    target: &SquaredPoly,
    values: &mut std::collections::BTreeMap<Vec<u32>, Rational>,
) {
    if var == nodes.len() {
        let u: Vec<Rational> = point.iter().map(|&x| int(x as i64 * x as i64)).collect();
        values.insert(point.clone(), target.eval(&u).unwrap());
        return;
    }
    for &b in &nodes[var] {
        point[var] = b;
        fill_grid(nodes, var + 1, point, target, values);
    }
}

#[test]
fn interpolation_round_trip() {
    // Random total-degree-bounded polynomials in squared variables are reproduced exactly
    // from their values on the interpolation grid.
    let mut rng = ChaCha8Rng::seed_from_u64(0xfeed);
    for _ in 0..25 {
        let nvars = rng.gen_range(1..=3usize);
        let degree = rng.gen_range(0..=3u32);
        let mut target = SquaredPoly::zero(nvars);
        for _ in 0..rng.gen_range(1..=6) {
            let mut exps = vec![0u32; nvars];
            let mut left = degree;
            for e in exps.iter_mut() {
                *e = rng.gen_range(0..=left);
                left -= *e;
            }
            let c = rat(rng.gen_range(-20..=20), rng.gen_range(1..=7));
            target = &target + &SquaredPoly::monomial(nvars, exps, c);
        }
        let nodes: Vec<Vec<u32>> = (0..nvars)
            .map(|v| {
                (0..=degree)
                    .map(|t| if v % 2 == 0 { 1 + 2 * t } else { 2 + 2 * t })
                    .collect()
            })
            .collect();
        let mut values = std::collections::BTreeMap::new();
        let mut point = vec![0u32; nvars];
        fill_grid(&nodes, 0, &mut point, &target, &mut values);
        let grid = GridSpec::new(nodes, degree as usize).unwrap();
        let rebuilt = poly_interpolate(&grid, &values).unwrap();
        assert_eq!(rebuilt, target);
    }
}

#[test]
fn recursion_matches_interpolated_polynomials() {
    // Off-grid agreement between direct recursion values and the quasi-polynomial,
    // including entries beyond the interpolation nodes.
    let mut rng = ChaCha8Rng::seed_from_u64(0xacc0bd);
    let mut store = PolyStore::new();
    let mut memo = MemoTable::new();
    for (g, n) in stable_pairs(4) {
        for _ in 0..8 {
            let b: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=15)).collect();
            let from_poly = store.eval(g, &b).unwrap();
            let direct = n_value(&BTuple::new(g, b.clone()).unwrap(), &mut memo);
            assert_eq!(from_poly, direct, "disagreement at g = {g}, b = {b:?}");
        }
    }
}

#[test]
fn class_polynomials_have_exact_degree() {
    let mut store = PolyStore::new();
    for (g, n) in stable_pairs(4) {
        let expected = 3 * g as i64 - 3 + n as i64;
        for k in (0..=n).step_by(2) {
            let poly = store.class_poly(g, n, k).unwrap();
            assert_eq!(
                poly.total_degree() as i64,
                expected.max(0),
                "degree defect at (g, n, k) = ({g}, {n}, {k})"
            );
        }
    }
}

#[test]
fn top_degree_part_is_class_independent() {
    let mut store = PolyStore::new();
    let report = lattice_count::tau::top_part_independence(4, &mut store).unwrap();
    assert!(report.is_success(), "{}", report.summary());
}
