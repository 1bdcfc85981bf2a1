use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tree_crossings::geometry::{crossing_count, random_general_position};
use tree_crossings::stats::{
    closed_form_mean, closed_form_second_moment, closed_form_variance, exact_distribution,
    fit_laurent_polynomial, general_position_mean, moments_to_cumulants, ratio, raw_moment,
    CrossingDistribution, EnumerationOptions, SECOND_MOMENT_TERMS,
};
use tree_crossings::tree::{enumerate_trees, tree_count};
use tree_crossings::{Point, PointConfig, PointSet, Rational};

fn convex(n: usize) -> CrossingDistribution {
    exact_distribution(n, &PointConfig::Convex(n), &EnumerationOptions::default()).unwrap()
}

/// Distribution by the per-tree pair scan, independent of the enumeration
/// engine.
fn scanned_distribution(config: &PointConfig) -> Vec<u64> {
    let n = config.len();
    let mut counts = Vec::new();
    for tree in enumerate_trees(n, 0, 1).unwrap() {
        let k = crossing_count(&tree, config).unwrap().0 as usize;
        if counts.len() <= k {
            counts.resize(k + 1, 0);
        }
        counts[k] += 1;
    }
    counts
}

fn mean_of(counts: &[u64]) -> Rational {
    let total: u64 = counts.iter().sum();
    let weighted: u64 = counts.iter().enumerate().map(|(k, &c)| k as u64 * c).sum();
    ratio(weighted as i64, total as i64)
}

fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o = |p: Point, q: Point, r: Point| {
        ((q.x - p.x) as i128 * (r.y - p.y) as i128 - (q.y - p.y) as i128 * (r.x - p.x) as i128)
            .signum()
    };
    o(a, b, c) * o(a, b, d) < 0 && o(c, d, a) * o(c, d, b) < 0
}

fn crossing_segment_pairs(points: &[Point]) -> u64 {
    let n = points.len();
    let mut segs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            segs.push((i, j));
        }
    }
    let mut count = 0;
    for (s, &(a, b)) in segs.iter().enumerate() {
        for &(c, d) in &segs[s + 1..] {
            if a != c && a != d && b != c && b != d
                && segments_cross(points[a], points[b], points[c], points[d])
            {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn totals_are_cayley_numbers() {
    for n in 1..=9 {
        assert_eq!(convex(n).total(), tree_count(n), "n = {n}");
    }
}

#[test]
fn closed_forms_agree_with_enumeration() {
    for n in 4..=9 {
        let dist = convex(n);
        let m1 = raw_moment(&dist, 1);
        let m2 = raw_moment(&dist, 2);
        assert_eq!(m1, closed_form_mean(n as u64), "mean n = {n}");
        assert_eq!(m2, closed_form_second_moment(n as u64).unwrap(), "second moment n = {n}");
        assert_eq!(&m2 - &m1 * &m1, closed_form_variance(n as u64).unwrap(), "variance n = {n}");
    }
}

#[test]
fn enumeration_engine_matches_pair_scan() {
    for n in 1..=7 {
        let engine: Vec<u64> = convex(n)
            .counts()
            .iter()
            .map(|c| c.to_string().parse().unwrap())
            .collect();
        assert_eq!(engine, scanned_distribution(&PointConfig::Convex(n)), "n = {n}");
    }
}

#[test]
fn general_position_mean_holds_by_enumeration() {
    let mut configs = Vec::new();
    configs.push(PointConfig::Coordinates(
        PointSet::new(vec![
            Point::new(0, 0),
            Point::new(6, 0),
            Point::new(6, 6),
            Point::new(0, 6),
            Point::new(3, 2),
        ])
        .unwrap(),
    ));
    for (seed, n) in [(1u64, 5usize), (2, 6), (3, 6), (4, 7)] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        configs.push(PointConfig::Coordinates(random_general_position(n, 40, &mut rng).unwrap()));
    }
    for config in &configs {
        let n = config.len();
        let dist = exact_distribution(n, config, &EnumerationOptions::default()).unwrap();
        let enumerated = raw_moment(&dist, 1);
        assert_eq!(enumerated, general_position_mean(config).unwrap());
        // Linearity: each crossing segment pair is present with probability 4/n^2.
        let PointConfig::Coordinates(ps) = config else { unreachable!() };
        let pairs = crossing_segment_pairs(ps.points());
        assert_eq!(enumerated, ratio(4 * pairs as i64, (n * n) as i64));
        assert_eq!(enumerated, mean_of(&scanned_distribution(config)));
    }
}

#[test]
fn cumulants_match_central_moments() {
    for n in 4..=8 {
        let dist = convex(n);
        let moments: Vec<Rational> = (1..=4).map(|j| raw_moment(&dist, j)).collect();
        let cumulants = moments_to_cumulants(&moments).unwrap();
        let total = Rational::from_integer(BigInt::from(dist.total()));
        let mu = moments[0].clone();
        let central = |k: i32| -> Rational {
            let mut acc = Rational::zero();
            for (x, c) in dist.counts().iter().enumerate() {
                let d = Rational::from_integer(BigInt::from(x)) - &mu;
                let mut p = Rational::one();
                for _ in 0..k {
                    p *= &d;
                }
                acc += p * Rational::from_integer(BigInt::from(c.clone()));
            }
            acc / &total
        };
        assert_eq!(cumulants[0], mu);
        assert_eq!(cumulants[1], central(2));
        assert_eq!(cumulants[2], central(3));
        let m2 = central(2);
        assert_eq!(cumulants[3], central(4) - ratio(3, 1) * &m2 * &m2);
    }
}

#[test]
fn fit_recovers_the_second_moment_polynomial_from_enumeration() {
    let points: Vec<(i64, Rational)> = (2..=10)
        .map(|n| (n as i64, raw_moment(&convex(n), 2)))
        .collect();
    let fit = fit_laurent_polynomial(&points, -4..=4).unwrap();
    for (e, p, q) in SECOND_MOMENT_TERMS {
        assert_eq!(fit.coefficient(e).unwrap(), &ratio(p, q), "a_{e}");
    }
    assert!(fit.coefficient(-4).unwrap().is_zero());
    assert!(fit.is_exact());
}

#[test]
fn coordinate_distribution_totals() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let ps = random_general_position(7, 1000, &mut rng).unwrap();
    let config = PointConfig::Coordinates(ps);
    let dist = exact_distribution(7, &config, &EnumerationOptions::default()).unwrap();
    assert_eq!(dist.total(), BigUint::from(16807u32));
    let engine: Vec<u64> = dist.counts().iter().map(|c| c.to_string().parse().unwrap()).collect();
    assert_eq!(engine, scanned_distribution(&config));
}
