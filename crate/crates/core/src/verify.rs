//! Regression suite against published reference tables: crossing
//! distributions of convex trees for `n <= 10` and their first two moments.

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::geometry::PointConfig;
use crate::stats::{
    closed_form_mean, closed_form_second_moment, closed_form_variance, exact_distribution,
    fit_laurent_polynomial, format_rational, ratio, raw_moment, CrossingDistribution,
    EnumerationOptions, Rational, SECOND_MOMENT_TERMS,
};

/// Number of labelled trees on `n` convex points with `k = 0, 1, ...`
/// crossings, `n = 1..=10`.
pub const REFERENCE_CROSSING_COUNTS: [&[u64]; 10] = [
    &[1],
    &[1],
    &[3],
    &[12, 4],
    &[55, 45, 20, 5],
    &[273, 378, 321, 204, 78, 36, 6],
    &[1428, 2856, 3535, 3430, 2415, 1659, 847, 385, 203, 42, 7],
    &[
        7752, 20520, 33216, 42408, 41936, 38192, 29048, 20280, 13696, 7752, 4048, 2016, 960, 248,
        64, 8,
    ],
    &[
        43263, 143451, 286308, 448371, 560124, 629019, 613413, 549162, 462285, 356193, 257121,
        176040, 115740, 67563, 38538, 19863, 10323, 4275, 1386, 450, 72, 9,
    ],
    &[
        246675, 986700, 2339450, 4314890, 6440875, 8531520, 9974515, 10686500, 10686395, 9966550,
        8771495, 7339860, 5890895, 4463120, 3265750, 2269070, 1534005, 982890, 592545, 345720,
        190395, 100350, 49115, 20040, 7480, 2570, 520, 100, 10,
    ],
];

/// Unreduced fraction `(numerator, denominator)` as printed.
pub type Fraction = (i64, i64);

/// Tabulated `(n, E[X], E[X^2])`, `n = 1..=10`, exactly as published.
pub const REFERENCE_MOMENTS: [(usize, Fraction, Fraction); 10] = [
    (1, (0, 1), (0, 1)),
    (2, (0, 1), (0, 1)),
    (3, (0, 1), (0, 1)),
    (4, (1, 4), (1, 4)),
    (5, (4, 5), (34, 25)),
    (6, (5, 3), (977, 216)),
    (7, (20, 7), (3968, 343)),
    (8, (35, 8), (12789, 512)),
    (9, (56, 7), (34916, 729)),
    (10, (42, 5), (42063, 500)),
];

/// Reference entries known to be misprinted: `(n, quantity)`. The published
/// mean for `n = 9` reads 56/7, while enumeration, the closed form and the
/// tabulated counts all give 56/9.
pub const KNOWN_DEVIATIONS: [(usize, &str); 1] = [(9, "mean")];

pub const REFERENCE_MAX_N: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Tables,
    Formulas,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    DocumentedDeviation,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::DocumentedDeviation => "DOCUMENTED-DEVIATION",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<20} {:<28} {}", self.status, self.name, self.detail)
    }
}

fn check(name: String, ok: bool, detail: String) -> Check {
    Check {
        name,
        status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
        detail,
    }
}

/// Mean of a tabulated count row, as an exact fraction.
pub fn reference_mean(n: usize) -> Rational {
    let row = REFERENCE_CROSSING_COUNTS[n - 1];
    let weighted: u64 = row.iter().enumerate().map(|(k, &c)| k as u64 * c).sum();
    let total: u64 = row.iter().sum();
    ratio(weighted as i64, total as i64)
}

fn format_counts(d: &CrossingDistribution) -> String {
    d.counts()
        .iter()
        .map(BigUint::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn table_checks(dists: &[CrossingDistribution]) -> Vec<Check> {
    dists
        .iter()
        .map(|d| {
            let n = d.n();
            let expected: Vec<BigUint> = REFERENCE_CROSSING_COUNTS[n - 1]
                .iter()
                .map(|&c| BigUint::from(c))
                .collect();
            check(
                format!("distribution n={n}"),
                d.counts() == expected.as_slice(),
                format_counts(d),
            )
        })
        .collect()
}

/// Formats a reference fraction as printed, without reducing it.
fn format_listed((p, q): Fraction) -> String {
    if q == 1 {
        p.to_string()
    } else {
        format!("{p}/{q}")
    }
}

fn moment_check(
    n: usize,
    quantity: &str,
    enumerated: &Rational,
    listed: Fraction,
    closed: &Rational,
) -> Check {
    let detail = format!(
        "enumerated {}, closed form {}, reference {}",
        format_rational(enumerated),
        format_rational(closed),
        format_listed(listed)
    );
    let listed = &ratio(listed.0, listed.1);
    let name = format!("{quantity} n={n}");
    if enumerated == listed && enumerated == closed {
        return check(name, true, detail);
    }
    let known = KNOWN_DEVIATIONS.contains(&(n, quantity));
    if known && enumerated == closed && (quantity != "mean" || *enumerated == reference_mean(n)) {
        return Check {
            name,
            status: CheckStatus::DocumentedDeviation,
            detail: format!("{detail} (reference entry misprinted; enumeration agrees with closed form and tabulated counts)"),
        };
    }
    check(name, false, detail)
}

fn formula_checks(dists: &[CrossingDistribution]) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for d in dists {
        let n = d.n();
        let (_, mean, second) = REFERENCE_MOMENTS[n - 1];
        let m1 = raw_moment(d, 1);
        let m2 = raw_moment(d, 2);
        checks.push(moment_check(n, "mean", &m1, mean, &closed_form_mean(n as u64)));
        checks.push(moment_check(
            n,
            "second-moment",
            &m2,
            second,
            &closed_form_second_moment(n as u64)?,
        ));
        let var = &m2 - &m1 * &m1;
        let closed = closed_form_variance(n as u64)?;
        checks.push(check(
            format!("variance n={n}"),
            var == closed,
            format!("enumerated {}, closed form {}", format_rational(&var), format_rational(&closed)),
        ));
    }

    let identity_ok = (2..=100u64).all(|n| {
        let m1 = closed_form_mean(n);
        match (closed_form_second_moment(n), closed_form_variance(n)) {
            (Ok(m2), Ok(v)) => v == m2 - &m1 * &m1,
            _ => false,
        }
    });
    checks.push(check(
        "variance identity".into(),
        identity_ok,
        "Var = E[X^2] - E[X]^2 for closed forms, 2 <= n <= 100".into(),
    ));

    if dists.len() >= 10 {
        let points: Vec<(i64, Rational)> = dists[1..10]
            .iter()
            .map(|d| (d.n() as i64, raw_moment(d, 2)))
            .collect();
        let fit = fit_laurent_polynomial(&points, -4..=4)?;
        let matches = SECOND_MOMENT_TERMS
            .iter()
            .all(|&(e, p, q)| fit.coefficient(e) == Some(&ratio(p, q)));
        let coeffs = fit
            .exponents
            .iter()
            .zip(&fit.coefficients)
            .map(|(e, a)| format!("a{e}={}", format_rational(a)))
            .collect::<Vec<_>>()
            .join(" ");
        checks.push(check(
            "second-moment fit".into(),
            matches && fit.is_exact(),
            coeffs,
        ));
    }
    Ok(checks)
}

/// Enumerates convex distributions for `n = 1..=max_n` and runs the
/// requested checks. `progress` receives each finished `n`.
pub fn run_verification(
    suite: Suite,
    max_n: usize,
    opts: &EnumerationOptions,
    mut progress: impl FnMut(usize),
) -> Result<Vec<Check>> {
    if max_n == 0 || max_n > REFERENCE_MAX_N {
        return Err(Error::Argument(format!(
            "max n must be in 1..={REFERENCE_MAX_N}"
        )));
    }
    let mut dists = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        dists.push(exact_distribution(n, &PointConfig::Convex(n), opts)?);
        progress(n);
    }
    let mut checks = Vec::new();
    if matches!(suite, Suite::Tables | Suite::All) {
        checks.extend(table_checks(&dists));
    }
    if matches!(suite, Suite::Formulas | Suite::All) {
        checks.extend(formula_checks(&dists)?);
    }
    Ok(checks)
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.status != CheckStatus::Fail)
}
