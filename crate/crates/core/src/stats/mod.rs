//! Exact statistics of the crossing count of a uniform random tree.

mod closed_form;
mod cumulants;
mod distribution;
mod fit;
mod scaling;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

pub use closed_form::{
    asymptotic_mean, asymptotic_variance, closed_form_mean, closed_form_second_moment,
    closed_form_variance, general_position_mean, SECOND_MOMENT_TERMS,
};
pub use cumulants::{
    moments_to_cumulants, raw_moments, set_partitions, SetPartition, CUMULANT_GUARD,
};
pub use distribution::{
    exact_distribution, exact_distribution_shard, raw_moment, CrossingDistribution,
    EnumerationOptions, ProgressFn, DEFAULT_ENUMERATION_LIMIT, MAX_ENUMERATION_N,
};
pub use fit::{fit_laurent_polynomial, FitResult};
pub use scaling::{
    cumulant_scaling_report, cumulant_scaling_report_for, loglog_slope, ScalingReport,
    ScalingRow,
};

/// Exact fraction, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// `num / den` as a [`Rational`].
pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Formats as `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// CSV with header `name,numerator,denominator`.
pub fn rationals_to_csv<'a>(rows: impl IntoIterator<Item = (String, &'a Rational)>) -> String {
    let mut out = String::from("name,numerator,denominator\n");
    for (name, r) in rows {
        out.push_str(&format!("{},{},{}\n", name, r.numer(), r.denom()));
    }
    out
}
