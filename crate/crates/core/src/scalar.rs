//! Exact rational scalars and the two Bernoulli-type coefficient tables
//! used throughout the crate.
//!
//! Everything downstream works over `Q = BigRational`; there is no floating
//! point anywhere in this crate. The two series tables are
//!
//! * `todd_coefficient(i)`: Taylor coefficients of `x / (1 - exp(-x))`,
//! * `inverse_todd_coefficient(i)`: Taylor coefficients of `x / (exp(x) - 1)`,
//!
//! related by `todd(i) = (-1)^i * inverse_todd(i)`. We never expose a symbol
//! named `B`: the Bernoulli sign convention differs between sources, so each
//! formula elsewhere in the crate is pinned to one of the two tables via a
//! worked low-order case.

use std::str::FromStr;
use std::sync::Mutex;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// The scalar field: arbitrary-precision rationals, always in lowest terms
/// with positive denominator (guaranteed by `BigRational`).
pub type Q = BigRational;

/// Shorthand for a small rational `n / d`.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an integer scalar.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// `n!` as a rational.
pub fn factorial_q(n: usize) -> Q {
    Q::from_integer(factorial(n))
}

/// Binomial coefficient `C(n, k)` as a big integer (0 when `k > n`).
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Renders a rational as `"p/q"`, or `"p"` when the denominator is one.
/// This is the serialization used in every file format of the crate.
pub fn format_rat(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses the `"p/q"` / `"p"` string form accepted in input files.
pub fn parse_rat(s: &str) -> Result<Q, Error> {
    let s = s.trim();
    let bad = || Error::RationalParse(s.to_string());
    match s.split_once('/') {
        None => {
            let n = BigInt::from_str(s).map_err(|_| bad())?;
            Ok(Q::from_integer(n))
        }
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(p, q))
        }
    }
}

/// Which of the two series a table holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    /// `x / (1 - exp(-x))`
    Todd,
    /// `x / (exp(x) - 1)`
    InverseTodd,
}

fn extend_table(kind: SeriesKind, table: &mut Vec<Q>, upto: usize) {
    // Invert the series a(x) with a_k the coefficients of
    // (1 - exp(-x))/x (Todd) or (exp(x) - 1)/x (inverse Todd):
    // both have a_0 = 1, so t_0 = 1 and t_n = -sum_{k=1..n} a_k t_{n-k}.
    let a = |k: usize| -> Q {
        let inv_fact = Q::new(BigInt::one(), factorial(k + 1));
        match kind {
            SeriesKind::Todd => {
                if k % 2 == 0 {
                    inv_fact
                } else {
                    -inv_fact
                }
            }
            SeriesKind::InverseTodd => inv_fact,
        }
    };
    if table.is_empty() {
        table.push(Q::one());
    }
    while table.len() <= upto {
        let n = table.len();
        let mut acc = Q::zero();
        for k in 1..=n {
            acc += a(k) * &table[n - k];
        }
        table.push(-acc);
    }
}

fn todd_cache() -> &'static Mutex<Vec<Q>> {
    static CACHE: OnceLock<Mutex<Vec<Q>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

fn inverse_todd_cache() -> &'static Mutex<Vec<Q>> {
    static CACHE: OnceLock<Mutex<Vec<Q>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

/// `i`-th Taylor coefficient of `x / (1 - exp(-x))`, computed by exact
/// power-series inversion and memoized behind a lock.
pub fn todd_coefficient(i: usize) -> Q {
    let mut table = todd_cache().lock().unwrap();
    extend_table(SeriesKind::Todd, &mut table, i);
    table[i].clone()
}

/// `i`-th Taylor coefficient of `x / (exp(x) - 1)`; equals
/// `(-1)^i * todd_coefficient(i)`.
pub fn inverse_todd_coefficient(i: usize) -> Q {
    let mut table = inverse_todd_cache().lock().unwrap();
    extend_table(SeriesKind::InverseTodd, &mut table, i);
    table[i].clone()
}

/// The first `len` coefficients of the chosen series.
pub fn series_table(kind: SeriesKind, len: usize) -> Vec<Q> {
    (0..len)
        .map(|i| match kind {
            SeriesKind::Todd => todd_coefficient(i),
            SeriesKind::InverseTodd => inverse_todd_coefficient(i),
        })
        .collect()
}

/// Sign of a rational as -1, 0, 1 (handy for witnesses in reports).
pub fn sign_of(x: &Q) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: Bernoulli numbers from the classical recurrence
    /// sum_{j=0..m} C(m+1, j) B_j = 0 with B_0 = 1 (this fixes B_1 = -1/2),
    /// so that x/(exp(x)-1) = sum B_i x^i / i!.
    fn bernoulli_table(upto: usize) -> Vec<Q> {
        let mut b: Vec<Q> = vec![Q::one()];
        for m in 1..=upto {
            let mut acc = Q::zero();
            for (j, bj) in b.iter().enumerate() {
                acc += Q::from_integer(binomial(m + 1, j)) * bj;
            }
            b.push(-acc / Q::from_integer(BigInt::from(m as i64 + 1)));
        }
        b
    }

    /// Truncated product of two coefficient sequences.
    fn series_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
        let n = a.len().min(b.len());
        let mut out = vec![Q::zero(); n];
        for i in 0..n {
            for j in 0..n - i {
                out[i + j] += &a[i] * &b[j];
            }
        }
        out
    }

    #[test]
    fn todd_low_order_values() {
        assert_eq!(todd_coefficient(0), qi(1));
        assert_eq!(todd_coefficient(1), qr(1, 2));
        assert_eq!(todd_coefficient(2), qr(1, 12));
        assert_eq!(todd_coefficient(3), qi(0));
        assert_eq!(todd_coefficient(4), qr(-1, 720));
    }

    #[test]
    fn inverse_todd_low_order_values() {
        assert_eq!(inverse_todd_coefficient(1), qr(-1, 2));
        assert_eq!(inverse_todd_coefficient(2), qr(1, 12));
        assert_eq!(inverse_todd_coefficient(3), qi(0));
    }

    #[test]
    fn tables_match_bernoulli_recurrence() {
        let b = bernoulli_table(12);
        for i in 0..=12 {
            let expected = &b[i] / factorial_q(i);
            assert_eq!(inverse_todd_coefficient(i), expected, "i = {i}");
            let sign = if i % 2 == 0 { Q::one() } else { -Q::one() };
            assert_eq!(todd_coefficient(i), sign * expected, "i = {i}");
        }
    }

    #[test]
    fn sign_relation_between_tables() {
        for i in 0..=12 {
            let sign = if i % 2 == 0 { Q::one() } else { -Q::one() };
            assert_eq!(todd_coefficient(i), sign * inverse_todd_coefficient(i));
        }
    }

    #[test]
    fn reciprocal_products_are_one() {
        let n = 13;
        // Coefficients of (1 - exp(-x))/x and (exp(x) - 1)/x.
        let recip_todd: Vec<Q> = (0..n)
            .map(|k| {
                let c = Q::new(BigInt::one(), factorial(k + 1));
                if k % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect();
        let recip_inv: Vec<Q> = (0..n)
            .map(|k| Q::new(BigInt::one(), factorial(k + 1)))
            .collect();
        let one_a = series_mul(&series_table(SeriesKind::Todd, n), &recip_todd);
        let one_b = series_mul(&series_table(SeriesKind::InverseTodd, n), &recip_inv);
        for i in 0..n {
            let expected = if i == 0 { Q::one() } else { Q::zero() };
            assert_eq!(one_a[i], expected);
            assert_eq!(one_b[i], expected);
        }
    }

    #[test]
    fn rational_string_round_trip() {
        for s in ["3", "-7", "1/2", "-22/7", "0"] {
            let x = parse_rat(s).unwrap();
            assert_eq!(format_rat(&x), s);
        }
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
        // Non-lowest-terms input normalizes.
        assert_eq!(format_rat(&parse_rat("4/6").unwrap()), "2/3");
        assert_eq!(format_rat(&parse_rat("3/-6").unwrap()), "-1/2");
    }
}
