//! Truncated power series and the five closed-form generating differentials, used to
//! verify that the counts really are the coefficients of those forms.
//!
//! With `w^{(g)}_n = ∂_{z_1} ... ∂_{z_n} F^{(g)}_n` and
//! `F^{(g)}_n = Σ_{b_i > 0} N_{g,n}(b) z_1^{b_1} ... z_n^{b_n}`, the coefficient of
//! `∏ z_i^{b_i - 1}` in `w^{(g)}_n` equals `∏ b_i · N_{g,n}(b)`.  The five cases
//! `(0,3), (1,1), (0,4), (1,2), (2,1)` have exact closed forms, transcribed here as sums
//! of `constant × monomial × ∏ (1 - z_i)^{-a_i} (1 + z_i)^{-c_i}` and trusted only after
//! the coefficient comparison passes.  The same closed forms satisfy the analytic
//! continuation `w(..., 1/z_j, ...) = z_j^2 · w(..., z_j, ...)`, checked exactly at random
//! rational points.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{argument, Result};
use crate::rational::{binomial, int, rat, Rational};
use crate::recursion::{n_value, BTuple, MemoTable};
use crate::report::IdentityReport;

/// A multivariate power series kept exactly up to a total-degree truncation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    nvars: usize,
    trunc: u32,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl TruncatedSeries {
    pub fn zero(nvars: usize, trunc: u32) -> Self {
        TruncatedSeries { nvars, trunc, terms: BTreeMap::new() }
    }

    pub fn monomial(nvars: usize, trunc: u32, exps: Vec<u32>, c: Rational) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut s = Self::zero(nvars, trunc);
        if !c.is_zero() && exps.iter().sum::<u32>() <= trunc {
            s.terms.insert(exps, c);
        }
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        assert_eq!(exps.len(), self.nvars);
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() || exps.iter().sum::<u32>() > self.trunc {
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

    pub fn add(&self, rhs: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.nvars, rhs.nvars);
        assert_eq!(self.trunc, rhs.trunc);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.nvars, rhs.nvars);
        assert_eq!(self.trunc, rhs.trunc);
        let mut out = TruncatedSeries::zero(self.nvars, self.trunc);
        for (ea, ca) in &self.terms {
            let da: u32 = ea.iter().sum();
            for (eb, cb) in &rhs.terms {
                if da + eb.iter().sum::<u32>() > self.trunc {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(self.nvars, self.trunc);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    /// Multiplicative inverse up to the truncation order; requires a nonzero constant term.
    pub fn reciprocal(&self) -> Result<TruncatedSeries> {
        let zero_exp = vec![0u32; self.nvars];
        let c0 = self.coeff(&zero_exp);
        if c0.is_zero() {
            return Err(argument("reciprocal needs a nonzero constant term"));
        }
        let c0_inv = Rational::one() / c0;
        let mut out = TruncatedSeries::zero(self.nvars, self.trunc);
        out.terms.insert(zero_exp.clone(), c0_inv.clone());
        // Graded recurrence: r_e = -(1/a_0) Σ_{0 < f <= e} a_f r_{e-f}.
        for degree in 1..=self.trunc {
            for e in exponents_of_degree(self.nvars, degree) {
                let mut sum = Rational::zero();
                for (f, af) in &self.terms {
                    if f == &zero_exp || f.iter().zip(&e).any(|(fi, ei)| fi > ei) {
                        continue;
                    }
                    let rest: Vec<u32> = e.iter().zip(f).map(|(ei, fi)| ei - fi).collect();
                    if let Some(r) = out.terms.get(&rest) {
                        sum += af * r;
                    }
                }
                if !sum.is_zero() {
                    out.terms.insert(e, -sum * &c0_inv);
                }
            }
        }
        Ok(out)
    }
}

/// All exponent vectors of the given total degree.
fn exponents_of_degree(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(nvars);
    fn go(left: u32, nvars: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == nvars {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in 0..=left {
            cur.push(x);
            go(left - x, nvars, cur, out);
            cur.pop();
        }
    }
    if nvars == 0 {
        return out;
    }
    go(degree, nvars, &mut cur, &mut out);
    out
}

/// The truncated expansion of `(1 - z)^(-a)` or `(1 + z)^(-a)` in variable `var`.
fn binomial_factor(nvars: usize, trunc: u32, var: usize, a: u32, plus: bool) -> TruncatedSeries {
    let mut s = TruncatedSeries::zero(nvars, trunc);
    if a == 0 {
        s.terms.insert(vec![0; nvars], Rational::one());
        return s;
    }
    for t in 0..=trunc {
        let mut c = Rational::from_integer(binomial((a - 1 + t) as u64, t as u64));
        if plus && t % 2 == 1 {
            c = -c;
        }
        let mut e = vec![0u32; nvars];
        e[var] = t;
        s.terms.insert(e, c);
    }
    s
}

/// One closed-form summand: `coef · ∏ z_i^{mono_i} · ∏ (1-z_i)^{-minus_i} (1+z_i)^{-plus_i}`.
#[derive(Debug, Clone)]
struct FixtureTerm {
    coef: Rational,
    mono: Vec<u32>,
    minus: Vec<u32>,
    plus: Vec<u32>,
}

/// A closed-form generating function `w^{(g)}_n`, as a finite sum of [`FixtureTerm`]s.
#[derive(Debug, Clone)]
pub struct FixtureForm {
    genus: u32,
    nvars: usize,
    terms: Vec<FixtureTerm>,
}

/// The five cases with closed forms.
pub const FIXTURE_CASES: [(u32, u32); 5] = [(0, 3), (1, 1), (0, 4), (1, 2), (2, 1)];

impl FixtureForm {
    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// The closed form for one of the five supported `(g, n)`.
    pub fn for_case(g: u32, n: u32) -> Result<FixtureForm> {
        match (g, n) {
            (0, 3) => Ok(Self::sphere_three()),
            (1, 1) => Ok(Self::torus_one()),
            (0, 4) => Ok(Self::sphere_four()),
            (1, 2) => Ok(Self::torus_two()),
            (2, 1) => Ok(Self::genus_two_one()),
            _ => Err(argument(format!("no closed-form fixture for (g, n) = ({g}, {n})"))),
        }
    }

    /// `1/(2 ∏(1-z_i)^2) - 1/(2 ∏(1+z_i)^2)`.
    fn sphere_three() -> FixtureForm {
        FixtureForm {
            genus: 0,
            nvars: 3,
            terms: vec![
                FixtureTerm {
                    coef: rat(1, 2),
                    mono: vec![0; 3],
                    minus: vec![2; 3],
                    plus: vec![0; 3],
                },
                FixtureTerm {
                    coef: rat(-1, 2),
                    mono: vec![0; 3],
                    minus: vec![0; 3],
                    plus: vec![2; 3],
                },
            ],
        }
    }

    /// `z^3/(1-z^2)^4`.
    fn torus_one() -> FixtureForm {
        FixtureForm {
            genus: 1,
            nvars: 1,
            terms: vec![FixtureTerm {
                coef: int(1),
                mono: vec![3],
                minus: vec![4],
                plus: vec![4],
            }],
        }
    }

    /// `(3/4) Σ_i z_i/(1-z_i)^2 / ∏(1-z_m)^2  -  (same with +)  +  the 24-term sum
    /// `Σ z_i z_j (1+z_k^2)(1+z_l^2) / (2 ∏(1-z_m^2)^2)` over ordered `{i,j,k,l}`.
    fn sphere_four() -> FixtureForm {
        let mut terms = Vec::new();
        for i in 0..4 {
            for plus_branch in [false, true] {
                let mut minus = vec![0u32; 4];
                let mut plus = vec![0u32; 4];
                {
                    let pole = if plus_branch { &mut plus } else { &mut minus };
                    for (m, p) in pole.iter_mut().enumerate() {
                        *p = if m == i { 4 } else { 2 };
                    }
                }
                let mut mono = vec![0u32; 4];
                mono[i] = 1;
                terms.push(FixtureTerm {
                    coef: if plus_branch { rat(-3, 4) } else { rat(3, 4) },
                    mono,
                    minus,
                    plus,
                });
            }
        }
        // The 24 ordered assignments (i,j,k,l); each numerator z_i z_j (1+z_k^2)(1+z_l^2)
        // expands into four monomials.
        for perm in permutations4() {
            let [i, j, k, l] = perm;
            for sub in 0..4u8 {
                let mut mono = vec![0u32; 4];
                mono[i] += 1;
                mono[j] += 1;
                if sub & 1 != 0 {
                    mono[k] += 2;
                }
                if sub & 2 != 0 {
                    mono[l] += 2;
                }
                terms.push(FixtureTerm {
                    coef: rat(1, 2),
                    mono,
                    minus: vec![2; 4],
                    plus: vec![2; 4],
                });
            }
        }
        FixtureForm { genus: 0, nvars: 4, terms }
    }

    /// Five groups: `(5/32) Σ_i (z_i^2/(1-z_i)^4 - z_i/4(1-z_i)^2) / ∏(1-z_m)^2`, the
    /// mirrored `+` group with the inner sign flipped, `(3/32) z_0 z_1 / ∏(1-z_m)^4`, its
    /// `+` mirror, and `(1/8) z_0 z_1 / ∏(1-z_m^2)^2`.
    fn torus_two() -> FixtureForm {
        let mut terms = Vec::new();
        for plus_branch in [false, true] {
            for i in 0..2usize {
                let other = 1 - i;
                // z_i^2 / (1 ∓ z_i)^6 (1 ∓ z_other)^2 with coefficient 5/32.
                let mut mono = vec![0u32; 2];
                mono[i] = 2;
                let mut pole6 = vec![0u32; 2];
                pole6[i] = 6;
                pole6[other] = 2;
                terms.push(FixtureTerm {
                    coef: rat(5, 32),
                    mono,
                    minus: if plus_branch { vec![0; 2] } else { pole6.clone() },
                    plus: if plus_branch { pole6 } else { vec![0; 2] },
                });
                // z_i / (1 ∓ z_i)^4 (1 ∓ z_other)^2 with coefficient ∓ 5/128.
                let mut mono = vec![0u32; 2];
                mono[i] = 1;
                let mut pole4 = vec![0u32; 2];
                pole4[i] = 4;
                pole4[other] = 2;
                terms.push(FixtureTerm {
                    coef: if plus_branch { rat(5, 128) } else { rat(-5, 128) },
                    mono,
                    minus: if plus_branch { vec![0; 2] } else { pole4.clone() },
                    plus: if plus_branch { pole4 } else { vec![0; 2] },
                });
            }
            // 3 z_0 z_1 / 32 ∏ (1 ∓ z_m)^4.
            terms.push(FixtureTerm {
                coef: rat(3, 32),
                mono: vec![1, 1],
                minus: if plus_branch { vec![0; 2] } else { vec![4; 2] },
                plus: if plus_branch { vec![4; 2] } else { vec![0; 2] },
            });
        }
        terms.push(FixtureTerm {
            coef: rat(1, 8),
            mono: vec![1, 1],
            minus: vec![2; 2],
            plus: vec![2; 2],
        });
        FixtureForm { genus: 1, nvars: 2, terms }
    }

    /// `21 z^7 (1 + 3z^2 + z^4) / (1-z^2)^10`.
    fn genus_two_one() -> FixtureForm {
        let mk = |c: i64, e: u32| FixtureTerm {
            coef: int(c),
            mono: vec![e],
            minus: vec![10],
            plus: vec![10],
        };
        FixtureForm { genus: 2, nvars: 1, terms: vec![mk(21, 7), mk(63, 9), mk(21, 11)] }
    }

    /// Exact power-series expansion to total order `trunc`.
    pub fn expand(&self, trunc: u32) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(self.nvars, trunc);
        for term in &self.terms {
            let mut s =
                TruncatedSeries::monomial(self.nvars, trunc, term.mono.clone(), term.coef.clone());
            for var in 0..self.nvars {
                if term.minus[var] > 0 {
                    s = s.mul(&binomial_factor(self.nvars, trunc, var, term.minus[var], false));
                }
                if term.plus[var] > 0 {
                    s = s.mul(&binomial_factor(self.nvars, trunc, var, term.plus[var], true));
                }
            }
            out = out.add(&s);
        }
        out
    }

    /// Exact evaluation of the rational function at a point with no coordinate at `±1`.
    pub fn eval(&self, z: &[Rational]) -> Result<Rational> {
        if z.len() != self.nvars {
            return Err(argument(format!(
                "point has {} coordinates, fixture has {} variables",
                z.len(),
                self.nvars
            )));
        }
        let one = Rational::one();
        for zi in z {
            if zi == &one || zi == &(-one.clone()) {
                return Err(argument("evaluation at a pole z = ±1"));
            }
        }
        let mut acc = Rational::zero();
        for term in &self.terms {
            let mut v = term.coef.clone();
            for (i, zi) in z.iter().enumerate() {
                v *= powi(zi, term.mono[i]);
                if term.minus[i] > 0 {
                    v /= powi(&(&one - zi), term.minus[i]);
                }
                if term.plus[i] > 0 {
                    v /= powi(&(&one + zi), term.plus[i]);
                }
            }
            acc += v;
        }
        Ok(acc)
    }
}

fn powi(base: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= base;
    }
    acc
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for i in 0..4 {
        for j in 0..4 {
            if j == i {
                continue;
            }
            for k in 0..4 {
                if k == i || k == j {
                    continue;
                }
                let l = 6 - i - j - k;
                out.push([i, j, k, l]);
            }
        }
    }
    out
}

/// Compare every series coefficient of total order `<= trunc - n` against
/// `∏ b_i · N_{g,n}(b)` with `b_i = e_i + 1`.
pub fn coefficient_check(f: &FixtureForm, trunc: u32) -> Result<IdentityReport> {
    let n = f.nvars;
    let mut report = IdentityReport::new(
        format!("series-coefficients-g{}-n{}", f.genus, n),
        format!("all exponents of total order <= {}", trunc as i64 - n as i64),
    );
    if (trunc as usize) < n {
        return Err(argument("truncation order below the variable count checks nothing"));
    }
    let series = f.expand(trunc);
    let mut memo = MemoTable::new();
    let cap = trunc - n as u32;
    for degree in 0..=cap {
        for e in exponents_of_degree(n, degree) {
            let b: Vec<u32> = e.iter().map(|&x| x + 1).collect();
            let t = BTuple::new(f.genus, b.clone())?;
            let mut expect = n_value(&t, &mut memo);
            for &bi in &b {
                expect *= int(bi as i64);
            }
            let got = series.coeff(&e);
            report.samples_checked += 1;
            if got != expect {
                report.counterexamples.push(format!(
                    "b = {b:?}: coefficient {got}, but prod(b) * N = {expect}"
                ));
            }
        }
    }
    Ok(report)
}

/// Check `w(..., 1/z_j, ...) = z_j^2 · w(..., z_j, ...)` exactly at random rational points
/// with coordinates in (0, 1), for each variable in turn.
pub fn inversion_check(f: &FixtureForm, samples: usize, seed: u64) -> Result<IdentityReport> {
    let mut report = IdentityReport::new(
        format!("inversion-g{}-n{}", f.genus, f.nvars),
        format!("{samples} rational points per variable"),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let z: Vec<Rational> = (0..f.nvars)
            .map(|_| {
                let den = rng.gen_range(2..=40i64);
                let num = rng.gen_range(1..den);
                rat(num, den)
            })
            .collect();
        let base = f.eval(&z)?;
        for j in 0..f.nvars {
            let mut zj_inverted = z.clone();
            zj_inverted[j] = Rational::one() / &z[j];
            let lhs = f.eval(&zj_inverted)?;
            let rhs = &z[j] * &z[j] * &base;
            report.samples_checked += 1;
            if lhs != rhs {
                report.counterexamples.push(format!(
                    "z = {z:?}, inverted variable {j}: lhs {lhs}, rhs {rhs}"
                ));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_one_expansion() {
        let f = FixtureForm::for_case(1, 1).unwrap();
        let s = f.expand(8);
        assert_eq!(s.coeff(&[3]), int(1));
        assert_eq!(s.coeff(&[5]), int(4));
        assert_eq!(s.coeff(&[7]), int(10));
        assert_eq!(s.coeff(&[0]), int(0));
        assert_eq!(s.coeff(&[4]), int(0));
    }

    #[test]
    fn genus_two_leading_coefficient() {
        let f = FixtureForm::for_case(2, 1).unwrap();
        let s = f.expand(7);
        assert_eq!(s.coeff(&[7]), int(21));
        assert_eq!(s.coeff(&[0]), int(0));
    }

    #[test]
    fn sphere_three_low_coefficients() {
        let f = FixtureForm::for_case(0, 3).unwrap();
        let s = f.expand(5);
        // b = (1,1,2): coefficient of z_3^1 must be 1*1*2*N_{0,3}(1,1,2) = 2.
        assert_eq!(s.coeff(&[0, 0, 1]), int(2));
        // Odd total parity: b = (1,1,1) would sit at exponent (0,0,0).
        assert_eq!(s.coeff(&[0, 0, 0]), int(0));
    }

    #[test]
    fn coefficient_checks_pass_at_low_order() {
        for (g, n) in [(0, 3), (1, 1), (1, 2)] {
            let f = FixtureForm::for_case(g, n).unwrap();
            let report = coefficient_check(&f, 8).unwrap();
            assert!(report.is_success(), "{}", report.summary());
        }
    }

    #[test]
    fn inversion_holds_on_fixtures() {
        for (g, n) in FIXTURE_CASES {
            let f = FixtureForm::for_case(g, n).unwrap();
            let report = inversion_check(&f, 4, 7 + g as u64 * 10 + n as u64).unwrap();
            assert!(report.is_success(), "{}", report.summary());
        }
    }

    #[test]
    fn inversion_identity_at_named_point() {
        // w(1/z) = z^2 w(z) for the one-variable torus form at z = 2/3.
        let f = FixtureForm::for_case(1, 1).unwrap();
        let z = rat(2, 3);
        let lhs = f.eval(&[Rational::one() / &z]).unwrap();
        let rhs = &z * &z * f.eval(&[z.clone()]).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn eval_rejects_poles_and_bad_arity() {
        let f = FixtureForm::for_case(1, 1).unwrap();
        assert!(f.eval(&[int(1)]).is_err());
        assert!(f.eval(&[int(-1)]).is_err());
        assert!(f.eval(&[int(2), int(3)]).is_err());
        assert!(FixtureForm::for_case(3, 1).is_err());
    }

    #[test]
    fn reciprocal_inverts() {
        // (1 - z)^2 reciprocal must match the binomial series of (1 - z)^{-2}.
        let mut sq = TruncatedSeries::zero(1, 8);
        sq.add_term(vec![0], int(1));
        sq.add_term(vec![1], int(-2));
        sq.add_term(vec![2], int(1));
        let rec = sq.reciprocal().unwrap();
        assert_eq!(rec, binomial_factor(1, 8, 0, 2, false));
        // Multiplying back gives 1 up to the truncation order.
        let prod = sq.mul(&rec);
        assert_eq!(prod.coeff(&[0]), int(1));
        assert_eq!(prod.num_terms(), 1);
        // Zero constant term is rejected.
        let z = TruncatedSeries::monomial(1, 4, vec![1], int(1));
        assert!(z.reciprocal().is_err());
    }

    #[test]
    fn series_arithmetic_is_associative_and_distributive() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xabcde);
        for _ in 0..25 {
            let nvars = rng.gen_range(1..=2);
            let trunc = rng.gen_range(2..=5);
            let rand_series = |rng: &mut ChaCha8Rng| {
                let mut s = TruncatedSeries::zero(nvars, trunc);
                for _ in 0..4 {
                    let e: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=trunc)).collect();
                    s.add_term(e, rat(rng.gen_range(-9..=9), rng.gen_range(1..=5)));
                }
                s
            };
            let (a, b, c) = (rand_series(&mut rng), rand_series(&mut rng), rand_series(&mut rng));
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            assert_eq!(a.add(&b), b.add(&a));
        }
    }
}
