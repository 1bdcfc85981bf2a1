use super::{
    exact_distribution, moments_to_cumulants, raw_moment, rational_to_f64, EnumerationOptions,
    Rational,
};
use crate::error::{Error, Result};
use crate::geometry::PointConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    /// Exact `C_1..C_kmax`.
    pub cumulants: Vec<Rational>,
    /// `C_k / n^(3k/2)`.
    pub normalized: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub k_max: usize,
    pub rows: Vec<ScalingRow>,
    /// Least-squares slope of `ln |C_k|` against `ln n` per order, over the
    /// rows where `C_k` is non-zero; `None` with fewer than two such rows.
    pub slopes: Vec<Option<f64>>,
}

/// Least-squares slope through `(ln x, ln |y|)`, skipping zero `y`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, y)| *y != 0.0)
        .map(|(x, y)| (x.ln(), y.abs().ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// Exact cumulants of the crossing count for each configuration, computed
/// from enumerated distributions.
pub fn cumulant_scaling_report_for(
    configs: &[PointConfig],
    k_max: usize,
    opts: &EnumerationOptions,
) -> Result<ScalingReport> {
    if k_max == 0 {
        return Err(Error::Argument("k_max must be at least 1".into()));
    }
    let mut rows = Vec::with_capacity(configs.len());
    for config in configs {
        let n = config.len();
        let dist = exact_distribution(n, config, opts)?;
        let moments: Vec<Rational> = (1..=k_max as u32).map(|j| raw_moment(&dist, j)).collect();
        let cumulants = moments_to_cumulants(&moments)?;
        let normalized = cumulants
            .iter()
            .enumerate()
            .map(|(i, c)| rational_to_f64(c) / (n as f64).powf(1.5 * (i + 1) as f64))
            .collect();
        rows.push(ScalingRow {
            n,
            cumulants,
            normalized,
        });
    }
    let slopes = (0..k_max)
        .map(|i| {
            let pts: Vec<(f64, f64)> = rows
                .iter()
                .map(|r| (r.n as f64, rational_to_f64(&r.cumulants[i])))
                .collect();
            loglog_slope(&pts)
        })
        .collect();
    Ok(ScalingReport {
        k_max,
        rows,
        slopes,
    })
}

/// Convex-position report over `n_min..=n_max`.
pub fn cumulant_scaling_report(
    n_min: usize,
    n_max: usize,
    k_max: usize,
    opts: &EnumerationOptions,
) -> Result<ScalingReport> {
    if n_min == 0 || n_min > n_max {
        return Err(Error::Argument(format!("bad range {n_min}..={n_max}")));
    }
    let configs: Vec<PointConfig> = (n_min..=n_max).map(PointConfig::Convex).collect();
    cumulant_scaling_report_for(&configs, k_max, opts)
}
