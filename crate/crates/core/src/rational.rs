//! Exact rational arithmetic helpers.
//!
//! `Rational` is `num_rational::BigRational`: always stored in lowest terms with positive
//! denominator, so equality is plain structural equality and every operation is deterministic.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{argument, Result};

pub type Rational = num_rational::BigRational;

/// `n/d` as an exact rational.  Panics if `d == 0`; use for literals only.
pub fn rat(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `n` as an exact rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// Binomial coefficient `C(n, k)` as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `2^e` for any integer exponent, as an exact rational.
pub fn pow2(e: i64) -> Rational {
    let p = BigInt::from(2u32).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// Bernoulli number `B_m` for even `m >= 2`, via the defining recurrence
/// `sum_{j=0}^{m} C(m+1, j) B_j = 0` with `B_0 = 1`, `B_1 = -1/2`.
pub fn bernoulli(m: u32) -> Result<Rational> {
    if m < 2 || m % 2 != 0 {
        return Err(argument(format!("bernoulli index must be even and >= 2, got {m}")));
    }
    let mut b: Vec<Rational> = Vec::with_capacity(m as usize + 1);
    b.push(Rational::one());
    b.push(rat(-1, 2));
    for i in 2..=m as u64 {
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from_integer(binomial(i + 1, j as u64)) * bj;
        }
        // B_i = -acc / C(i+1, i)
        b.push(-acc / Rational::from_integer(BigInt::from(i + 1)));
    }
    Ok(b[m as usize].clone())
}

/// True if the rational is a (possibly negative) integer.
pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Sign-aware display already matches the "p/q" / "p" convention used on the CLI surface;
/// exposed as a named helper so call sites read clearly.
pub fn display(r: &Rational) -> String {
    r.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli(2).unwrap(), rat(1, 6));
        assert_eq!(bernoulli(4).unwrap(), rat(-1, 30));
        assert_eq!(bernoulli(6).unwrap(), rat(1, 42));
        assert_eq!(bernoulli(8).unwrap(), rat(-1, 30));
        assert_eq!(bernoulli(12).unwrap(), rat(-691, 2730));
    }

    #[test]
    fn bernoulli_rejects_odd_and_small_index() {
        assert!(bernoulli(0).is_err());
        assert!(bernoulli(3).is_err());
        assert!(bernoulli(7).is_err());
    }

    #[test]
    fn factorial_and_binomial() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(binomial(7, 3), BigInt::from(35));
        assert_eq!(binomial(3, 7), BigInt::from(0));
        assert_eq!(binomial(12, 0), BigInt::from(1));
    }

    #[test]
    fn pow2_both_signs() {
        assert_eq!(pow2(0), int(1));
        assert_eq!(pow2(6), int(64));
        assert_eq!(pow2(-1), rat(1, 2));
        assert_eq!(pow2(-5), rat(1, 32));
    }

    #[test]
    fn arithmetic_is_deterministic_and_normalized() {
        let a = rat(6, -8);
        assert_eq!(a, rat(-3, 4));
        assert_eq!(a.denom(), &BigInt::from(4));
        let x = rat(22, 7) * rat(-14, 11) + rat(1, 3);
        let y = rat(22, 7) * rat(-14, 11) + rat(1, 3);
        assert_eq!(x, y);
        assert_eq!(x, rat(-11, 3));
    }

    #[test]
    fn display_convention() {
        assert_eq!(display(&rat(1, 48)), "1/48");
        assert_eq!(display(&rat(-1, 12)), "-1/12");
        assert_eq!(display(&(int(21) / int(8))), "21/8");
        assert_eq!(display(&int(7)), "7");
        assert_eq!(display(&int(0)), "0");
    }

    #[test]
    fn parse_round_trip() {
        use std::str::FromStr;
        for s in ["1/48", "-1/12", "21/8", "7", "0", "-691/2730"] {
            let r = Rational::from_str(s).unwrap();
            assert_eq!(display(&r), s);
        }
    }
}
