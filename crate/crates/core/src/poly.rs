//! Sparse multivariate polynomials over the rationals in the squared variables
//! `u_i = b_i^2`, plus exact interpolation from integer grids.
//!
//! Invariants maintained by every constructor and operation:
//! * terms are keyed by exponent vectors of length `nvars`, stored in a `BTreeMap` so
//!   iteration order is canonical;
//! * no zero coefficient is ever stored;
//! * all arithmetic is exact.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{argument, Result};
use crate::rational::Rational;

/// A polynomial in the squared variables `u_1, ..., u_nvars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquaredPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl SquaredPoly {
    pub fn zero(nvars: usize) -> Self {
        SquaredPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    /// `c * prod u_i^{exps[i]}`.
    pub fn monomial(nvars: usize, exps: Vec<u32>, c: Rational) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector length mismatch");
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The variable `u_i` as a polynomial.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Self::monomial(nvars, exps, Rational::one())
    }

    pub fn from_terms(nvars: usize, it: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    /// Coefficient of the given exponent vector (zero if absent).
    pub fn coeff(&self, exps: &[u32]) -> Rational {
        assert_eq!(exps.len(), self.nvars);
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest total degree among stored terms; `0` for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        assert_eq!(exps.len(), self.nvars, "exponent vector length mismatch");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        SquaredPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Evaluate at the point `u` (values of the squared variables).
    pub fn eval(&self, u: &[Rational]) -> Result<Rational> {
        if u.len() != self.nvars {
            return Err(argument(format!(
                "evaluation point has {} coordinates, polynomial has {} variables",
                u.len(),
                self.nvars
            )));
        }
        let maxdeg = self.terms.keys().fold(vec![0u32; self.nvars], |mut m, e| {
            for (mi, ei) in m.iter_mut().zip(e) {
                *mi = (*mi).max(*ei);
            }
            m
        });
        // Power tables avoid recomputing u_i^e for every term.
        let pows: Vec<Vec<Rational>> = u
            .iter()
            .zip(&maxdeg)
            .map(|(ui, &d)| {
                let mut v = Vec::with_capacity(d as usize + 1);
                v.push(Rational::one());
                for _ in 0..d {
                    let last = v.last().unwrap() * ui;
                    v.push(last);
                }
                v
            })
            .collect();
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &ei) in e.iter().enumerate() {
                if ei > 0 {
                    t *= &pows[i][ei as usize];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitute `u_var = value` and drop that variable, producing a polynomial in
    /// `nvars - 1` variables (variable indices above `var` shift down by one).
    pub fn substitute(&self, var: usize, value: &Rational) -> Self {
        assert!(var < self.nvars);
        let mut out = Self::zero(self.nvars - 1);
        let maxd = self.terms.keys().map(|e| e[var]).max().unwrap_or(0);
        let mut pows = Vec::with_capacity(maxd as usize + 1);
        pows.push(Rational::one());
        for _ in 0..maxd {
            let last = pows.last().unwrap() * value;
            pows.push(last);
        }
        for (e, c) in &self.terms {
            let mut rest: Vec<u32> = Vec::with_capacity(self.nvars - 1);
            rest.extend_from_slice(&e[..var]);
            rest.extend_from_slice(&e[var + 1..]);
            out.add_term(rest, c * &pows[e[var] as usize]);
        }
        out
    }

    /// Exchange two variables.
    pub fn swap_vars(&self, a: usize, b: usize) -> Self {
        assert!(a < self.nvars && b < self.nvars);
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.swap(a, b);
            out.add_term(e2, c.clone());
        }
        out
    }

    /// The part of the polynomial whose terms have exactly total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        SquaredPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }
}

impl std::ops::Add for &SquaredPoly {
    type Output = SquaredPoly;
    fn add(self, rhs: &SquaredPoly) -> SquaredPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &SquaredPoly {
    type Output = SquaredPoly;
    fn sub(self, rhs: &SquaredPoly) -> SquaredPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl std::ops::Mul for &SquaredPoly {
    type Output = SquaredPoly;
    fn mul(self, rhs: &SquaredPoly) -> SquaredPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = SquaredPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl std::ops::Neg for &SquaredPoly {
    type Output = SquaredPoly;
    fn neg(self) -> SquaredPoly {
        self.scale(&-Rational::one())
    }
}

/// Clears denominators once so a polynomial can be evaluated over `BigInt` points with no
/// per-term gcd work; used by the bulk identity sweeps.
pub struct ScaledEvaluator {
    nvars: usize,
    den: BigInt,
    terms: Vec<(Vec<u32>, BigInt)>,
    maxdeg: Vec<u32>,
}

impl ScaledEvaluator {
    pub fn new(p: &SquaredPoly) -> Self {
        let mut den = BigInt::one();
        for (_, c) in p.terms() {
            den = den.lcm(c.denom());
        }
        let terms: Vec<(Vec<u32>, BigInt)> = p
            .terms()
            .map(|(e, c)| (e.clone(), c.numer() * (&den / c.denom())))
            .collect();
        let mut maxdeg = vec![0u32; p.nvars()];
        for (e, _) in &terms {
            for (m, &ei) in maxdeg.iter_mut().zip(e) {
                *m = (*m).max(ei);
            }
        }
        ScaledEvaluator { nvars: p.nvars(), den, terms, maxdeg }
    }

    /// Evaluate at integer coordinates.
    pub fn eval_u(&self, u: &[BigInt]) -> Rational {
        assert_eq!(u.len(), self.nvars);
        let pows: Vec<Vec<BigInt>> = u
            .iter()
            .zip(&self.maxdeg)
            .map(|(ui, &d)| {
                let mut v = Vec::with_capacity(d as usize + 1);
                v.push(BigInt::one());
                for _ in 0..d {
                    let last = v.last().unwrap() * ui;
                    v.push(last);
                }
                v
            })
            .collect();
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &ei) in e.iter().enumerate() {
                if ei > 0 {
                    t *= &pows[i][ei as usize];
                }
            }
            acc += t;
        }
        Rational::new(acc, self.den.clone())
    }
}

/// Interpolation grid: one node list of `b` values per variable, all of one parity,
/// with exactly `degree + 1` distinct entries each.
#[derive(Debug, Clone)]
pub struct GridSpec {
    b_nodes: Vec<Vec<u32>>,
    degree: usize,
}

impl GridSpec {
    pub fn new(b_nodes: Vec<Vec<u32>>, degree: usize) -> Result<Self> {
        if b_nodes.is_empty() {
            return Err(argument("grid needs at least one variable"));
        }
        for (i, nodes) in b_nodes.iter().enumerate() {
            if nodes.len() != degree + 1 {
                return Err(argument(format!(
                    "variable {i}: expected {} nodes, got {}",
                    degree + 1,
                    nodes.len()
                )));
            }
            let mut seen = std::collections::BTreeSet::new();
            for &b in nodes {
                if b == 0 {
                    return Err(argument(format!("variable {i}: nodes must be positive")));
                }
                if !seen.insert(b) {
                    return Err(argument(format!("variable {i}: duplicate node {b}")));
                }
            }
            let parity = nodes[0] % 2;
            if nodes.iter().any(|&b| b % 2 != parity) {
                return Err(argument(format!("variable {i}: nodes mix parities")));
            }
        }
        Ok(GridSpec { b_nodes, degree })
    }

    pub fn nvars(&self) -> usize {
        self.b_nodes.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn b_nodes(&self) -> &[Vec<u32>] {
        &self.b_nodes
    }

    fn u_nodes(&self) -> Vec<Vec<Rational>> {
        self.b_nodes
            .iter()
            .map(|ns| {
                ns.iter()
                    .map(|&b| Rational::from_integer(BigInt::from(b) * BigInt::from(b)))
                    .collect()
            })
            .collect()
    }
}

/// Exact interpolation on the full tensor grid: returns the unique polynomial of degree
/// at most `grid.degree()` in **each** `u_i` agreeing with every sample.  `values` is keyed
/// by the `b`-tuple of the grid point; a missing point is an error.
pub fn poly_interpolate(
    grid: &GridSpec,
    values: &BTreeMap<Vec<u32>, Rational>,
) -> Result<SquaredPoly> {
    let n = grid.nvars();
    let u_nodes = grid.u_nodes();
    let mut point = vec![0u32; n];
    let mut getter = |idx: &[usize]| -> Result<Rational> {
        for (i, &t) in idx.iter().enumerate() {
            point[i] = grid.b_nodes[i][t];
        }
        values
            .get(&point)
            .cloned()
            .ok_or_else(|| argument(format!("missing grid value at b = {point:?}")))
    };
    let mut idx = vec![0usize; n];
    tensor_newton(0, n, grid.degree, &u_nodes, &mut idx, &mut getter)
}

/// Recursive Newton interpolation over the full tensor grid, one variable at a time, with
/// polynomial-valued divided differences.
fn tensor_newton(
    var: usize,
    nvars: usize,
    degree: usize,
    u_nodes: &[Vec<Rational>],
    idx: &mut Vec<usize>,
    getter: &mut impl FnMut(&[usize]) -> Result<Rational>,
) -> Result<SquaredPoly> {
    if var == nvars {
        return Ok(SquaredPoly::constant(nvars, getter(idx)?));
    }
    let nodes = &u_nodes[var];
    let mut layers: Vec<SquaredPoly> = Vec::with_capacity(degree + 1);
    for t in 0..=degree {
        idx[var] = t;
        layers.push(tensor_newton(var + 1, nvars, degree, u_nodes, idx, getter)?);
    }
    idx[var] = 0;
    // Divided differences in u_var, then Horner assembly in the Newton basis.
    for a in 1..=degree {
        for t in (a..=degree).rev() {
            let num = &layers[t] - &layers[t - 1];
            let den = &nodes[t] - &nodes[t - a];
            layers[t] = num.scale(&(Rational::one() / den));
        }
    }
    let mut acc = layers[degree].clone();
    for t in (0..degree).rev() {
        let lin = &SquaredPoly::var(nvars, var)
            - &SquaredPoly::constant(nvars, nodes[t].clone());
        acc = &(&acc * &lin) + &layers[t];
    }
    Ok(acc)
}

/// Exact interpolation of a polynomial of **total** degree at most `budget` from samples on
/// the staircase index set `{ t : t_1 + ... + t_n <= budget }`, with `u`-nodes
/// `u_nodes[i][t_i]`.  This needs `C(n + budget, budget)` samples instead of the full
/// `(budget+1)^n` tensor grid and is what the quasi-polynomial builder uses, since the
/// class polynomials obey a total-degree bound and the small-index nodes keep the sampled
/// boundary tuples short.
pub fn interpolate_total_degree(
    u_nodes: &[Vec<Rational>],
    budget: usize,
    f: &mut impl FnMut(&[usize]) -> Rational,
) -> SquaredPoly {
    let n = u_nodes.len();
    for nodes in u_nodes {
        assert!(nodes.len() > budget, "need budget + 1 nodes per variable");
    }
    let mut table: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    let mut idx = vec![0usize; n];
    fill_staircase(0, budget, &mut idx, &mut table, f);
    staircase_newton(0, n, budget, u_nodes, &table)
}

fn fill_staircase(
    var: usize,
    left: usize,
    idx: &mut Vec<usize>,
    table: &mut BTreeMap<Vec<usize>, Rational>,
    f: &mut impl FnMut(&[usize]) -> Rational,
) {
    if var == idx.len() {
        table.insert(idx.clone(), f(idx));
        return;
    }
    for t in 0..=left {
        idx[var] = t;
        fill_staircase(var + 1, left - t, idx, table, f);
    }
    idx[var] = 0;
}

/// Newton interpolation on a staircase (downward-closed) index set.  `table` is keyed by
/// index vectors for variables `var..nvars`, all with index sum at most `budget`.  Divided
/// differences along variable `var` are formed pointwise; the level-`a` difference lives on
/// the sub-staircase of total index at most `budget - a` and is interpolated recursively
/// with that reduced budget, so exactly the staircase samples are consumed.
fn staircase_newton(
    var: usize,
    nvars: usize,
    budget: usize,
    u_nodes: &[Vec<Rational>],
    table: &BTreeMap<Vec<usize>, Rational>,
) -> SquaredPoly {
    if var == nvars {
        return SquaredPoly::constant(nvars, table[&Vec::new()].clone());
    }
    let nodes = &u_nodes[var];
    // levels[t]: values over remaining-variable indices with sum <= budget - t.
    let mut levels: Vec<BTreeMap<Vec<usize>, Rational>> = vec![BTreeMap::new(); budget + 1];
    for (k, v) in table {
        levels[k[0]].insert(k[1..].to_vec(), v.clone());
    }
    // In-place divided-difference triangle; level t-1 always covers the keys of level t.
    for a in 1..=budget {
        for t in (a..=budget).rev() {
            let den = &nodes[t] - &nodes[t - a];
            let prev = std::mem::take(&mut levels[t]);
            let lower = &levels[t - 1];
            levels[t] = prev
                .into_iter()
                .map(|(k, v)| {
                    let diff = (&v - &lower[&k]) / &den;
                    (k, diff)
                })
                .collect();
        }
    }
    let coeffs: Vec<SquaredPoly> = levels
        .iter()
        .enumerate()
        .map(|(a, level)| staircase_newton(var + 1, nvars, budget - a, u_nodes, level))
        .collect();
    // Horner assembly in the Newton basis for variable `var`.
    let mut acc = coeffs[budget].clone();
    for t in (0..budget).rev() {
        let lin =
            &SquaredPoly::var(nvars, var) - &SquaredPoly::constant(nvars, nodes[t].clone());
        acc = &(&acc * &lin) + &coeffs[t];
    }
    acc
}
