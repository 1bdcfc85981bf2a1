use num_bigint::BigInt;
use num_traits::{Pow, Zero};

use super::{ratio, Rational};
use crate::error::{Error, Result};
use crate::geometry::{rectilinear_crossing_number, PointConfig};

/// Terms `(exponent, numerator, denominator)` of the Laurent polynomial for
/// the second moment of the convex crossing count.
pub const SECOND_MOMENT_TERMS: [(i32, i64, i64); 9] = [
    (4, 1, 36),
    (3, -14, 45),
    (2, 553, 360),
    (1, -305, 72),
    (0, 491, 72),
    (-1, -2323, 360),
    (-2, 217, 60),
    (-3, -1, 1),
    (-4, 0, 1),
];

const VARIANCE_TERMS: [(i32, i64, i64); 7] = [
    (3, 1, 45),
    (2, -3, 40),
    (1, -17, 72),
    (0, 35, 24),
    (-1, -1003, 360),
    (-2, 157, 60),
    (-3, -1, 1),
];

fn laurent(n: u64, terms: &[(i32, i64, i64)]) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Argument("Laurent polynomial evaluated at n = 0".into()));
    }
    let x = Rational::from_integer(BigInt::from(n));
    Ok(terms.iter().fold(Rational::zero(), |acc, &(e, p, q)| {
        acc + ratio(p, q) * Pow::pow(&x, e)
    }))
}

/// `(n-1)(n-2)(n-3) / (6n)`, zero for `n <= 3`.
pub fn closed_form_mean(n: u64) -> Rational {
    if n < 4 {
        return Rational::zero();
    }
    let n = BigInt::from(n);
    let one = BigInt::from(1);
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    Rational::new((&n - &one) * (&n - &two) * (&n - &three), BigInt::from(6) * n)
}

pub fn closed_form_second_moment(n: u64) -> Result<Rational> {
    laurent(n, &SECOND_MOMENT_TERMS)
}

pub fn closed_form_variance(n: u64) -> Result<Rational> {
    laurent(n, &VARIANCE_TERMS)
}

/// Leading-order mean `n^2 / 6`.
pub fn asymptotic_mean(n: u64) -> f64 {
    (n as f64).powi(2) / 6.0
}

/// Leading-order variance `n^3 / 45`.
pub fn asymptotic_variance(n: u64) -> f64 {
    (n as f64).powi(3) / 45.0
}

/// `4 cr / n^2`, where `cr` is the rectilinear crossing number of the
/// configuration.
pub fn general_position_mean(config: &PointConfig) -> Result<Rational> {
    let n = config.len();
    if n == 0 {
        return Err(Error::Argument("empty configuration".into()));
    }
    let cr = rectilinear_crossing_number(config)?;
    Ok(Rational::new(
        BigInt::from(cr) * 4,
        BigInt::from(n) * BigInt::from(n),
    ))
}
