//! Exact interpolation by Laurent polynomials `sum_i a_i n^i` over the
//! rationals.

use std::collections::HashSet;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{Pow, Zero};

use super::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FitResult {
    pub exponents: Vec<i32>,
    pub coefficients: Vec<Rational>,
    /// `value - fitted(n)` per input point.
    pub residuals: Vec<Rational>,
}

impl FitResult {
    pub fn coefficient(&self, exponent: i32) -> Option<&Rational> {
        self.exponents
            .iter()
            .position(|&e| e == exponent)
            .map(|i| &self.coefficients[i])
    }

    pub fn evaluate(&self, n: i64) -> Rational {
        let x = Rational::from_integer(BigInt::from(n));
        self.exponents
            .iter()
            .zip(&self.coefficients)
            .fold(Rational::zero(), |acc, (&e, a)| acc + a * Pow::pow(&x, e))
    }

    pub fn is_exact(&self) -> bool {
        self.residuals.iter().all(Zero::is_zero)
    }
}

/// Solves the square system `sum_i a_i n^i = value` by Gaussian
/// elimination with row pivoting, exactly.
pub fn fit_laurent_polynomial(
    points: &[(i64, Rational)],
    exponents: RangeInclusive<i32>,
) -> Result<FitResult> {
    let exps: Vec<i32> = exponents.collect();
    let size = exps.len();
    if size == 0 || points.len() != size {
        return Err(Error::Argument(format!(
            "{} points for {size} unknown coefficients",
            points.len()
        )));
    }
    let mut seen = HashSet::new();
    for &(n, _) in points {
        if n <= 0 {
            return Err(Error::Argument(format!("abscissa n = {n} must be positive")));
        }
        if !seen.insert(n) {
            return Err(Error::DuplicateAbscissa(n));
        }
    }

    // Augmented matrix [A | b] with A[r][c] = n_r^{e_c}.
    let mut rows: Vec<Vec<Rational>> = points
        .iter()
        .map(|(n, value)| {
            let x = Rational::from_integer(BigInt::from(*n));
            let mut row: Vec<Rational> = exps.iter().map(|&e| Pow::pow(&x, e)).collect();
            row.push(value.clone());
            row
        })
        .collect();

    let mut rank = 0;
    for col in 0..size {
        let Some(pivot) = (rank..size).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot_row[col];
            for c in col..=size {
                let delta = &factor * &pivot_row[c];
                row[c] -= delta;
            }
        }
        rank += 1;
    }
    if rank < size {
        return Err(Error::Singular { rank, size });
    }

    let coefficients: Vec<Rational> = rows.iter().enumerate().map(|(i, row)| &row[size] / &row[i]).collect();
    let mut result = FitResult {
        exponents: exps,
        coefficients,
        residuals: Vec::new(),
    };
    result.residuals = points
        .iter()
        .map(|(n, value)| value - result.evaluate(*n))
        .collect();
    Ok(result)
}
