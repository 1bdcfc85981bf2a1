//! Sampling experiments on large trees and normality diagnostics.
//!
//! Samples are drawn in fixed blocks of [`BLOCK_SIZE`] trees. Block `b` uses
//! a ChaCha8 generator seeded from the experiment seed and switched to
//! stream `b`, so the sample sequence depends only on `(seed, num_samples)`
//! and never on how many threads process the blocks.

use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    convex_crossing_count_fast, coordinate_crossing_count, rectilinear_crossing_number,
    validate_general_position, PointConfig,
};
use crate::stats::{
    asymptotic_mean, asymptotic_variance, closed_form_mean, closed_form_variance, format_rational,
    general_position_mean, rational_to_f64,
};
use crate::tree::TreeSampler;

pub const BLOCK_SIZE: u64 = 4096;

const MAX_HISTOGRAM_BINS: u64 = 64;

/// Standard normal distribution function, `0.5 * erfc(-x / sqrt(2))`.
///
/// `erfc` is the freely-distributable fdlibm/musl implementation (via the
/// `libm` crate), accurate to about one ulp, so the absolute error of the
/// result is far below `1e-10`.
pub fn normal_cdf(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite(x));
    }
    Ok(0.5 * libm::erfc(-x / std::f64::consts::SQRT_2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalMoments {
    pub mean: f64,
    /// Unbiased (divides by `m - 1`).
    pub variance: f64,
    /// Plug-in `m3 / m2^1.5` from biased central moments; `None` when the
    /// sample has zero spread or fewer than three points.
    pub skewness: Option<f64>,
    /// Plug-in `m4 / m2^2 - 3`; `None` for zero spread or fewer than four
    /// points.
    pub excess_kurtosis: Option<f64>,
}

impl EmpiricalMoments {
    pub fn is_degenerate(&self) -> bool {
        self.skewness.is_none() || self.excess_kurtosis.is_none()
    }
}

pub fn empirical_moments(samples: &[f64]) -> Result<EmpiricalMoments> {
    let m = samples.len();
    if m < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: m });
    }
    if let Some(&bad) = samples.iter().find(|x| !x.is_finite()) {
        return Err(Error::NonFinite(bad));
    }
    let mf = m as f64;
    let mean = samples.iter().sum::<f64>() / mf;
    let (mut s2, mut s3, mut s4) = (0.0, 0.0, 0.0);
    for &x in samples {
        let d = x - mean;
        let d2 = d * d;
        s2 += d2;
        s3 += d2 * d;
        s4 += d2 * d2;
    }
    let variance = s2 / (mf - 1.0);
    let (m2, m3, m4) = (s2 / mf, s3 / mf, s4 / mf);
    let spread = m2 > 0.0;
    Ok(EmpiricalMoments {
        mean,
        variance,
        skewness: (spread && m >= 3).then(|| m3 / m2.powf(1.5)),
        excess_kurtosis: (spread && m >= 4).then(|| m4 / (m2 * m2) - 3.0),
    })
}

/// Two-sided Kolmogorov-Smirnov distance between the empirical distribution
/// of `standardized` and the standard normal.
pub fn ks_statistic(standardized: &[f64]) -> Result<f64> {
    if standardized.is_empty() {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    let mut sorted = standardized.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let phi = normal_cdf(x)?;
        d = d
            .max((i + 1) as f64 / m - phi)
            .max(phi - i as f64 / m);
    }
    Ok(d)
}

enum Counter {
    Convex { fenwick: Vec<u32> },
    Coordinates,
}

/// Crossing counts of `num_samples` uniform random trees drawn on `config`.
pub fn sample_crossings(config: &PointConfig, num_samples: u64, seed: u64) -> Result<Vec<u64>> {
    let n = config.len();
    if n < 1 {
        return Err(Error::Argument("empty configuration".into()));
    }
    validate_general_position(config)?;
    let blocks = num_samples.div_ceil(BLOCK_SIZE);
    let per_block: Vec<Vec<u64>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let len = BLOCK_SIZE.min(num_samples - b * BLOCK_SIZE);
            let mut sampler = TreeSampler::new(n).expect("n >= 1");
            let mut counter = match config {
                PointConfig::Convex(_) => Counter::Convex {
                    fenwick: vec![0; n + 1],
                },
                PointConfig::Coordinates(_) => Counter::Coordinates,
            };
            let mut scratch = Vec::with_capacity(n);
            (0..len)
                .map(|_| {
                    let edges = sampler.sample(&mut rng);
                    match (&mut counter, config) {
                        (Counter::Convex { fenwick }, _) => {
                            scratch.clear();
                            scratch.extend_from_slice(edges);
                            convex_crossing_count_fast(n, &mut scratch, fenwick)
                        }
                        (Counter::Coordinates, PointConfig::Coordinates(ps)) => {
                            coordinate_crossing_count(ps.points(), edges)
                        }
                        _ => unreachable!(),
                    }
                })
                .collect()
        })
        .collect();
    Ok(per_block.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HistogramBin {
    pub bin_left: u64,
    pub bin_right: u64,
    pub count: u64,
}

/// Integer histogram with half-open bins `[left, right)` of equal width.
pub fn histogram(samples: &[u64]) -> Vec<HistogramBin> {
    let (Some(&lo), Some(&hi)) = (samples.iter().min(), samples.iter().max()) else {
        return Vec::new();
    };
    let span = hi - lo + 1;
    let width = span.div_ceil(MAX_HISTOGRAM_BINS).max(1);
    let bins = span.div_ceil(width);
    let mut out: Vec<HistogramBin> = (0..bins)
        .map(|i| HistogramBin {
            bin_left: lo + i * width,
            bin_right: lo + (i + 1) * width,
            count: 0,
        })
        .collect();
    for &s in samples {
        out[((s - lo) / width) as usize].count += 1;
    }
    out
}

pub fn histogram_csv(bins: &[HistogramBin]) -> String {
    let mut out = String::from("bin_left,bin_right,count\n");
    for b in bins {
        out.push_str(&format!("{},{},{}\n", b.bin_left, b.bin_right, b.count));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    pub n: usize,
    pub config_kind: String,
    pub num_samples: u64,
    pub seed: u64,
    pub empirical_mean: f64,
    pub empirical_variance: f64,
    pub skewness: Option<f64>,
    pub excess_kurtosis: Option<f64>,
    pub moment_estimators: String,
    /// Set when the sample has no spread or too few points for the
    /// higher moments or the standardization.
    pub degenerate: bool,
    /// Exact mean as a fraction.
    pub exact_mean: String,
    pub exact_mean_value: f64,
    /// Exact variance as a fraction (convex configurations only).
    pub exact_variance: Option<String>,
    /// Standard deviation used to standardize the samples.
    pub exact_sigma: f64,
    pub sigma_source: String,
    pub asymptotic_mean: f64,
    pub asymptotic_sigma: f64,
    pub crossing_number: String,
    pub crossing_number_ratio: Option<f64>,
    /// KS distance of `(X - mean) / sigma` to the standard normal.
    pub ks_distance: Option<f64>,
    /// Same, standardized with `n^2/6` and `n^3/45` (convex only).
    pub ks_distance_asymptotic: Option<f64>,
    pub histogram: Vec<HistogramBin>,
}

impl SampleReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

fn binomial4_f64(n: usize) -> f64 {
    let n = n as f64;
    n * (n - 1.0) * (n - 2.0) * (n - 3.0) / 24.0
}

fn standardized_ks(samples: &[u64], mean: f64, sigma: f64) -> Result<Option<f64>> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Ok(None);
    }
    let z: Vec<f64> = samples.iter().map(|&x| (x as f64 - mean) / sigma).collect();
    ks_statistic(&z).map(Some)
}

/// Draws `num_samples` trees on `config` and summarizes their crossing
/// counts. Convex configurations are standardized with the exact mean and
/// variance; coordinate sets use the exact mean `4 cr / n^2` and the sample
/// standard deviation.
pub fn run_experiment(config: &PointConfig, num_samples: u64, seed: u64) -> Result<SampleReport> {
    let n = config.len();
    if n < 2 {
        return Err(Error::Argument(format!("n = {n}, need at least 2")));
    }
    if num_samples == 0 {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    let samples = sample_crossings(config, num_samples, seed)?;
    let as_f64: Vec<f64> = samples.iter().map(|&x| x as f64).collect();
    let moments = if samples.len() >= 2 {
        empirical_moments(&as_f64)?
    } else {
        EmpiricalMoments {
            mean: as_f64[0],
            variance: 0.0,
            skewness: None,
            excess_kurtosis: None,
        }
    };

    let cr = rectilinear_crossing_number(config)?;
    let crossing_number_ratio = (n >= 4).then(|| cr.to_f64().unwrap_or(f64::NAN) / binomial4_f64(n));
    let (exact_mean, exact_variance, sigma, sigma_source) = match config {
        PointConfig::Convex(_) => {
            let mean = closed_form_mean(n as u64);
            let var = closed_form_variance(n as u64)?;
            let sigma = rational_to_f64(&var).max(0.0).sqrt();
            (mean, Some(var), sigma, "exact")
        }
        PointConfig::Coordinates(_) => (
            general_position_mean(config)?,
            None,
            moments.variance.sqrt(),
            "empirical",
        ),
    };
    let exact_mean_value = rational_to_f64(&exact_mean);
    let ks_distance = standardized_ks(&samples, exact_mean_value, sigma)?;
    let ks_distance_asymptotic = match config {
        PointConfig::Convex(_) => standardized_ks(
            &samples,
            asymptotic_mean(n as u64),
            asymptotic_variance(n as u64).sqrt(),
        )?,
        PointConfig::Coordinates(_) => None,
    };

    Ok(SampleReport {
        n,
        config_kind: config.kind().to_string(),
        num_samples,
        seed,
        empirical_mean: moments.mean,
        empirical_variance: moments.variance,
        skewness: moments.skewness,
        excess_kurtosis: moments.excess_kurtosis,
        moment_estimators: "mean and variance unbiased; skewness and excess kurtosis plug-in (biased) central-moment ratios".into(),
        degenerate: moments.is_degenerate() || ks_distance.is_none(),
        exact_mean: format_rational(&exact_mean),
        exact_mean_value,
        exact_variance: exact_variance.as_ref().map(format_rational),
        exact_sigma: sigma,
        sigma_source: sigma_source.into(),
        asymptotic_mean: asymptotic_mean(n as u64),
        asymptotic_sigma: asymptotic_variance(n as u64).sqrt(),
        crossing_number: cr.to_string(),
        crossing_number_ratio,
        ks_distance,
        ks_distance_asymptotic,
        histogram: histogram(&samples),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeRow {
    pub n: usize,
    pub empirical_variance: f64,
    /// `empirical_variance / n^3`.
    pub variance_ratio: f64,
    /// `cr / C(n, 4)`; reported only, no limit is assumed.
    pub crossing_number_ratio: Option<f64>,
}

/// Sample variance of the crossing count divided by `n^3`, per configuration.
pub fn variance_scaling_probe(
    configs: &[PointConfig],
    num_samples: u64,
    seed: u64,
) -> Result<Vec<ProbeRow>> {
    configs
        .iter()
        .map(|config| {
            let n = config.len();
            let samples: Vec<f64> = sample_crossings(config, num_samples, seed)?
                .into_iter()
                .map(|x| x as f64)
                .collect();
            let variance = empirical_moments(&samples)?.variance;
            let cr = rectilinear_crossing_number(config)?;
            Ok(ProbeRow {
                n,
                empirical_variance: variance,
                variance_ratio: variance / (n as f64).powi(3),
                crossing_number_ratio: (n >= 4)
                    .then(|| cr.to_f64().unwrap_or(f64::NAN) / binomial4_f64(n)),
            })
        })
        .collect()
}
