//! Exact rational scalars and their text form.
//!
//! Rationals cross the CLI boundary as strings ("−5", "2/3"), never floats.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::{Error, Result};

/// The scalar type used everywhere in the crate.
pub type Q = BigRational;

/// Rational zero.
pub fn q0() -> Q {
    Q::zero()
}

/// Rational one.
pub fn q1() -> Q {
    Q::one()
}

/// Rational from an integer.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses "p/q" or a plain integer string (optionally signed).
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let make = |msg: String| Error::Parse(msg);
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n
                .trim()
                .parse()
                .map_err(|e| make(format!("bad numerator in {t:?}: {e}")))?;
            let d: BigInt = d
                .trim()
                .parse()
                .map_err(|e| make(format!("bad denominator in {t:?}: {e}")))?;
            if d.is_zero() {
                return Err(make(format!("zero denominator in {t:?}")));
            }
            Ok(Q::new(n, d))
        }
        None => {
            let n: BigInt = t
                .parse()
                .map_err(|e| make(format!("bad rational {t:?}: {e}")))?;
            Ok(Q::from_integer(n))
        }
    }
}

/// Canonical text form: integers render without a denominator.
pub fn format_q(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// True when the rational is a (possibly negative) integer.
pub fn is_integer(q: &Q) -> bool {
    q.denom().is_one()
}

/// (-1)^k as a rational.
pub fn sign_pow(k: usize) -> Q {
    if k.is_multiple_of(2) {
        q1()
    } else {
        -q1()
    }
}

/// Catalan numbers as exact integers (`catalan(0) == 1`).
pub fn catalan(n: usize) -> BigInt {
    let mut c = BigInt::one();
    for k in 0..n {
        c = c * BigInt::from(2 * (2 * k + 1)) / BigInt::from(k + 2);
    }
    c
}

/// Bell numbers via the triangle recurrence.
pub fn bell(n: usize) -> BigInt {
    let mut row = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().unwrap().clone());
        for v in &row {
            let last = next.last().unwrap().clone();
            next.push(last + v);
        }
        row = next;
    }
    row[0].clone()
}

/// Relative magnitude helper for tests: |q| as a rational.
pub fn abs_q(q: &Q) -> Q {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "-5", "2/3", "-7/4", "10/5"] {
            let q = parse_q(s).unwrap();
            let back = parse_q(&format_q(&q)).unwrap();
            assert_eq!(q, back);
        }
        assert_eq!(format_q(&parse_q("10/5").unwrap()), "2");
        assert_eq!(format_q(&parse_q("-3/6").unwrap()), "-1/2");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("a").is_err());
    }

    #[test]
    fn catalan_and_bell_small_values() {
        let cats: Vec<u64> = (0..=10).map(|n| u64::try_from(&catalan(n)).unwrap()).collect();
        assert_eq!(cats, [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796]);
        let bells: Vec<u64> = (0..=8).map(|n| u64::try_from(&bell(n)).unwrap()).collect();
        assert_eq!(bells, [1, 1, 2, 5, 15, 52, 203, 877, 4140]);
    }
}
