//! Exact planar predicates and crossing counts for straight-line tree
//! drawings.
//!
//! Coordinates are integers bounded by [`COORD_LIMIT`] in magnitude, so every
//! orientation determinant is evaluated exactly in `i64`: coordinate
//! differences stay below 2^27, products below 2^54 and the determinant
//! below 2^55.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use rand::Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::tree::{Edge, LabeledTree};

/// Largest accepted coordinate magnitude.
pub const COORD_LIMIT: i64 = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Point {
        Point { x, y }
    }

    fn check(&self) -> Result<()> {
        for v in [self.x, self.y] {
            if v.abs() > COORD_LIMIT {
                return Err(Error::CoordinateOutOfRange {
                    value: v,
                    limit: COORD_LIMIT,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
    Collinear,
}

/// Sign of `(q - p) x (r - p)` for points already known to be in range.
#[inline(always)]
fn orient_sign(p: Point, q: Point, r: Point) -> i64 {
    ((q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)).signum()
}

pub fn orientation(p: Point, q: Point, r: Point) -> Result<Orientation> {
    p.check()?;
    q.check()?;
    r.check()?;
    Ok(match orient_sign(p, q, r) {
        1 => Orientation::CounterClockwise,
        -1 => Orientation::Clockwise,
        _ => Orientation::Collinear,
    })
}

/// Distinct integer points within the coordinate bound. Label `i` is the
/// point at index `i - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<PointSet> {
        let mut seen = std::collections::HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            p.check()?;
            if let Some(j) = seen.insert(*p, i) {
                return Err(Error::DuplicatePoint(j + 1, i + 1));
            }
        }
        Ok(PointSet { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Point carrying 1-based `label`.
    pub fn point(&self, label: usize) -> Point {
        self.points[label - 1]
    }

    /// Hex SHA-256 of the canonical text form (`"x y\n"` per point).
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        for p in &self.points {
            hasher.update(format!("{} {}\n", p.x, p.y).as_bytes());
        }
        format!("{:x}", hasher.finalize())
    }

    pub fn to_text(&self) -> String {
        self.points
            .iter()
            .map(|p| format!("{} {}\n", p.x, p.y))
            .collect()
    }
}

/// Parses the point-file format: one `x y` pair of integers per line,
/// blank lines and `#` comment lines skipped.
pub fn parse_points(text: &str) -> Result<PointSet> {
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |message: String| Error::Parse {
            line: idx + 1,
            message,
        };
        if fields.len() != 2 {
            return Err(err(format!("expected two integers, got {line:?}")));
        }
        let coord = |s: &str| {
            s.parse::<i64>()
                .map_err(|_| err(format!("not an integer: {s:?}")))
        };
        let p = Point::new(coord(fields[0])?, coord(fields[1])?);
        if p.check().is_err() {
            return Err(err(format!("coordinate magnitude exceeds {COORD_LIMIT}")));
        }
        points.push(p);
    }
    PointSet::new(points)
}

/// Identifies a drawing: convex position by label order, or a hashed
/// coordinate set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConfigKind {
    Convex,
    Coordinates(String),
}

impl fmt::Display for ConfigKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigKind::Convex => write!(f, "convex"),
            ConfigKind::Coordinates(hash) => write!(f, "coordinates-{}", &hash[..16]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointConfig {
    /// Labels `1..=n` in convex position, in hull order. No coordinates.
    Convex(usize),
    Coordinates(PointSet),
}

impl PointConfig {
    pub fn len(&self) -> usize {
        match self {
            PointConfig::Convex(n) => *n,
            PointConfig::Coordinates(ps) => ps.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> ConfigKind {
        match self {
            PointConfig::Convex(_) => ConfigKind::Convex,
            PointConfig::Coordinates(ps) => ConfigKind::Coordinates(ps.content_hash()),
        }
    }
}

/// Integer points `(i, i^2)` on a parabola: strictly convex, with hull order
/// `1..=n`.
pub fn convex_realization(n: usize) -> Result<PointSet> {
    PointSet::new((1..=n as i64).map(|i| Point::new(i, i * i)).collect())
}

pub fn validate_general_position(config: &PointConfig) -> Result<()> {
    let ps = match config {
        PointConfig::Convex(_) => return Ok(()),
        PointConfig::Coordinates(ps) => ps,
    };
    let pts = ps.points();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                if orient_sign(pts[i], pts[j], pts[k]) == 0 {
                    return Err(Error::Collinear(i + 1, j + 1, k + 1));
                }
            }
        }
    }
    Ok(())
}

fn check_label(label: usize, n: usize) -> Result<()> {
    if label == 0 || label > n {
        return Err(Error::LabelOutOfRange { label, n });
    }
    Ok(())
}

/// Convex crossing rule: chords `{a, b}` and `{c, d}` on four distinct
/// labels cross iff exactly one of `c, d` lies strictly between `a` and `b`.
#[inline]
fn convex_cross(e1: Edge, e2: Edge) -> bool {
    let inside = |x: usize| e1.lo() < x && x < e1.hi();
    inside(e2.lo()) != inside(e2.hi())
}

/// Whether two straight edges cross at a point interior to both.
///
/// Edges sharing an endpoint never cross. On coordinates, a collinear triple
/// among the four endpoints is reported as a general-position violation.
pub fn edges_cross(e1: Edge, e2: Edge, config: &PointConfig) -> Result<bool> {
    let n = config.len();
    for label in [e1.lo(), e1.hi(), e2.lo(), e2.hi()] {
        check_label(label, n)?;
    }
    if e1.shares_endpoint(&e2) {
        return Ok(false);
    }
    match config {
        PointConfig::Convex(_) => Ok(convex_cross(e1, e2)),
        PointConfig::Coordinates(ps) => {
            let (a, b, c, d) = (e1.lo(), e1.hi(), e2.lo(), e2.hi());
            let (pa, pb, pc, pd) = (ps.point(a), ps.point(b), ps.point(c), ps.point(d));
            let o1 = orient_sign(pa, pb, pc);
            let o2 = orient_sign(pa, pb, pd);
            let o3 = orient_sign(pc, pd, pa);
            let o4 = orient_sign(pc, pd, pb);
            if o1 == 0 {
                return Err(Error::Collinear(a, b, c));
            }
            if o2 == 0 {
                return Err(Error::Collinear(a, b, d));
            }
            if o3 == 0 {
                return Err(Error::Collinear(c, d, a));
            }
            if o4 == 0 {
                return Err(Error::Collinear(c, d, b));
            }
            Ok(o1 != o2 && o3 != o4)
        }
    }
}

/// Number of crossing pairs of edges in one tree drawing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CrossingCount(pub u64);

/// Counts crossing edge pairs by scanning all pairs of tree edges.
pub fn crossing_count(tree: &LabeledTree, config: &PointConfig) -> Result<CrossingCount> {
    if tree.n() != config.len() {
        return Err(Error::SizeMismatch {
            tree: tree.n(),
            config: config.len(),
        });
    }
    let edges = tree.edges();
    let mut total = 0u64;
    for (i, &e1) in edges.iter().enumerate() {
        for &e2 in &edges[i + 1..] {
            if edges_cross(e1, e2, config)? {
                total += 1;
            }
        }
    }
    Ok(CrossingCount(total))
}

/// Convex crossing count in `O(n log n)`: with chords sorted by left
/// endpoint, chord `(c, d)` is crossed by every earlier chord `(a, b)` with
/// `a < c < b < d`, counted with a Fenwick tree over right endpoints.
///
/// `fenwick` is scratch space of length at least `n + 1`.
pub fn convex_crossing_count_fast(n: usize, edges: &mut [Edge], fenwick: &mut [u32]) -> u64 {
    edges.sort_unstable();
    fenwick[..=n].fill(0);
    let prefix = |tree: &[u32], mut i: usize| {
        let mut s = 0u64;
        while i > 0 {
            s += tree[i] as u64;
            i &= i - 1;
        }
        s
    };
    let mut total = 0u64;
    let mut start = 0;
    while start < edges.len() {
        let left = edges[start].lo();
        let mut end = start;
        while end < edges.len() && edges[end].lo() == left {
            end += 1;
        }
        for e in &edges[start..end] {
            total += prefix(fenwick, e.hi() - 1) - prefix(fenwick, left);
        }
        for e in &edges[start..end] {
            let mut i = e.hi();
            while i <= n {
                fenwick[i] += 1;
                i += i & i.wrapping_neg();
            }
        }
        start = end;
    }
    total
}

/// Crossing count for coordinates already validated to be in general
/// position; no per-pair error handling.
pub(crate) fn coordinate_crossing_count(points: &[Point], edges: &[Edge]) -> u64 {
    let segs: Vec<(Point, Point, usize, usize)> = edges
        .iter()
        .map(|e| (points[e.lo() - 1], points[e.hi() - 1], e.lo(), e.hi()))
        .collect();
    let mut total = 0u64;
    for (i, &(pa, pb, a, b)) in segs.iter().enumerate() {
        for &(pc, pd, c, d) in &segs[i + 1..] {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            if orient_sign(pa, pb, pc) == orient_sign(pa, pb, pd) {
                continue;
            }
            if orient_sign(pc, pd, pa) != orient_sign(pc, pd, pb) {
                total += 1;
            }
        }
    }
    total
}

/// `C(n, 4)`.
pub fn binomial4(n: usize) -> BigUint {
    if n < 4 {
        return BigUint::default();
    }
    let n = BigUint::from(n);
    let one = BigUint::from(1u32);
    let two = BigUint::from(2u32);
    let three = BigUint::from(3u32);
    &n * (&n - &one) * (&n - &two) * (&n - &three) / BigUint::from(24u32)
}

/// Whether four points are in convex position, from the orientation signs
/// of the triangles `abc`, `abd`, `acd`, `bcd`: they are not iff one point
/// lies inside the triangle of the other three.
#[inline]
fn quad_is_convex(abc: i64, abd: i64, acd: i64, bcd: i64) -> bool {
    let d_in_abc = abd == abc && bcd == abc && -acd == abc;
    let c_in_abd = abc == abd && -bcd == abd && acd == abd;
    let b_in_acd = -abc == acd && bcd == acd && abd == acd;
    let a_in_bcd = abc == bcd && acd == bcd && -abd == bcd;
    !(d_in_abc || c_in_abd || b_in_acd || a_in_bcd)
}

/// Number of 4-point subsets in convex position, which is the number of
/// crossings in the straight-line drawing of the complete graph.
pub fn rectilinear_crossing_number(config: &PointConfig) -> Result<BigUint> {
    let ps = match config {
        PointConfig::Convex(n) => return Ok(binomial4(*n)),
        PointConfig::Coordinates(ps) => ps,
    };
    validate_general_position(config)?;
    let pts = ps.points();
    let n = pts.len();
    let total: u64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut count = 0u64;
            for j in i + 1..n {
                for k in j + 1..n {
                    let abc = orient_sign(pts[i], pts[j], pts[k]);
                    for l in k + 1..n {
                        let abd = orient_sign(pts[i], pts[j], pts[l]);
                        let acd = orient_sign(pts[i], pts[k], pts[l]);
                        let bcd = orient_sign(pts[j], pts[k], pts[l]);
                        if quad_is_convex(abc, abd, acd, bcd) {
                            count += 1;
                        }
                    }
                }
            }
            count
        })
        .sum();
    Ok(BigUint::from(total))
}

/// Crossing pairs among all vertex-disjoint segment pairs of the complete
/// graph drawing, tested segment against segment.
pub fn kn_crossing_pairs(config: &PointConfig) -> Result<BigUint> {
    validate_general_position(config)?;
    let n = config.len();
    let mut total = 0u64;
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                for d in c + 1..=n {
                    let e = |x, y| Edge::new_unchecked(x, y);
                    for (s, t) in [
                        (e(a, b), e(c, d)),
                        (e(a, c), e(b, d)),
                        (e(a, d), e(b, c)),
                    ] {
                        if edges_cross(s, t, config)? {
                            total += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(BigUint::from(total))
}

/// Draws `n` distinct points in general position from
/// `[-extent, extent]^2` by rejection.
pub fn random_general_position<R: Rng + ?Sized>(
    n: usize,
    extent: i64,
    rng: &mut R,
) -> Result<PointSet> {
    if extent <= 0 || extent > COORD_LIMIT {
        return Err(Error::Argument(format!("extent {extent} out of range")));
    }
    if (n as i128) > (2 * extent as i128 + 1).pow(2) / 2 {
        return Err(Error::Argument(format!("{n} points do not fit the grid")));
    }
    let mut points: Vec<Point> = Vec::with_capacity(n);
    let mut seen = HashSet::with_capacity(n);
    let mut attempts = 0u64;
    while points.len() < n {
        attempts += 1;
        if attempts > 1000 * (n as u64 + 10) {
            return Err(Error::Argument(format!(
                "could not place {n} points in general position"
            )));
        }
        let p = Point::new(rng.gen_range(-extent..=extent), rng.gen_range(-extent..=extent));
        if seen.contains(&p) {
            continue;
        }
        let collinear = (0..points.len()).any(|i| {
            (i + 1..points.len()).any(|j| orient_sign(points[i], points[j], p) == 0)
        });
        if !collinear {
            seen.insert(p);
            points.push(p);
        }
    }
    PointSet::new(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::sample_tree;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pts(coords: &[(i64, i64)]) -> PointConfig {
        PointConfig::Coordinates(
            PointSet::new(coords.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap(),
        )
    }

    fn e(a: usize, b: usize) -> Edge {
        Edge::new(a, b).unwrap()
    }

    #[test]
    fn orientation_examples() {
        let o = |a: (i64, i64), b: (i64, i64), c: (i64, i64)| {
            orientation(Point::new(a.0, a.1), Point::new(b.0, b.1), Point::new(c.0, c.1)).unwrap()
        };
        assert_eq!(o((0, 0), (1, 0), (0, 1)), Orientation::CounterClockwise);
        assert_eq!(o((0, 0), (1, 1), (2, 2)), Orientation::Collinear);
        assert_eq!(o((0, 0), (0, 1), (1, 0)), Orientation::Clockwise);
    }

    #[test]
    fn orientation_at_the_coordinate_bound_is_exact() {
        let l = COORD_LIMIT;
        let p = Point::new(-l, -l);
        let q = Point::new(l, l - 1);
        let r = Point::new(l - 1, l);
        // det = (2l)(2l) - (2l-1)(2l-1) = 4l - 1 > 0
        assert_eq!(orientation(p, q, r).unwrap(), Orientation::CounterClockwise);
        assert_eq!(
            orientation(p, q, Point::new(l + 1, 0)),
            Err(Error::CoordinateOutOfRange {
                value: l + 1,
                limit: l
            })
        );
    }

    #[test]
    fn general_position_examples() {
        assert!(validate_general_position(&pts(&[(0, 0), (1, 0), (0, 1), (3, 5)])).is_ok());
        assert_eq!(
            validate_general_position(&pts(&[(0, 0), (1, 1), (2, 2), (0, 5)])),
            Err(Error::Collinear(1, 2, 3))
        );
        assert!(validate_general_position(&PointConfig::Convex(100)).is_ok());
    }

    #[test]
    fn crossing_examples() {
        let c4 = PointConfig::Convex(4);
        assert!(edges_cross(e(1, 3), e(2, 4), &c4).unwrap());
        assert!(!edges_cross(e(1, 2), e(3, 4), &PointConfig::Convex(5)).unwrap());
        let square = pts(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        assert!(edges_cross(e(1, 3), e(2, 4), &square).unwrap());
        assert!(!edges_cross(e(1, 2), e(3, 4), &square).unwrap());
        assert!(!edges_cross(e(1, 3), e(1, 2), &c4).unwrap());
        assert!(matches!(
            edges_cross(e(1, 5), e(2, 3), &c4),
            Err(Error::LabelOutOfRange { label: 5, n: 4 })
        ));
    }

    #[test]
    fn touching_segments_are_flagged() {
        // point 3 lies on segment 1-2
        let bad = pts(&[(0, 0), (4, 0), (2, 0), (2, 3)]);
        assert!(matches!(
            edges_cross(e(1, 2), e(3, 4), &bad),
            Err(Error::Collinear(..))
        ));
    }

    #[test]
    fn crossing_count_examples() {
        for n in [4, 7, 12] {
            let c = PointConfig::Convex(n);
            let star = LabeledTree::star(n, 1).unwrap();
            assert_eq!(crossing_count(&star, &c).unwrap(), CrossingCount(0));
            assert_eq!(crossing_count(&LabeledTree::path(n), &c).unwrap(), CrossingCount(0));
        }
        let t = LabeledTree::new(4, vec![e(1, 3), e(2, 4), e(1, 2)]).unwrap();
        assert_eq!(crossing_count(&t, &PointConfig::Convex(4)).unwrap(), CrossingCount(1));
        assert!(matches!(
            crossing_count(&t, &PointConfig::Convex(5)),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn crossing_number_examples() {
        assert_eq!(
            rectilinear_crossing_number(&PointConfig::Convex(5)).unwrap(),
            BigUint::from(5u32)
        );
        let tri = pts(&[(0, 0), (10, 0), (0, 10), (2, 2)]);
        assert_eq!(rectilinear_crossing_number(&tri).unwrap(), BigUint::default());
        assert_eq!(kn_crossing_pairs(&tri).unwrap(), BigUint::default());
        let square = pts(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        assert_eq!(kn_crossing_pairs(&square).unwrap(), BigUint::from(1u32));
        let sq_center = pts(&[(0, 0), (6, 0), (6, 6), (0, 6), (3, 2)]);
        assert_eq!(rectilinear_crossing_number(&sq_center).unwrap(), BigUint::from(3u32));
        assert_eq!(kn_crossing_pairs(&sq_center).unwrap(), BigUint::from(3u32));
        assert!(rectilinear_crossing_number(&pts(&[(0, 0), (1, 1), (2, 2), (5, 0)])).is_err());
    }

    #[test]
    fn quad_convexity_matches_direct_triangle_test() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inside = |a: Point, b: Point, c: Point, d: Point| {
            let s = orient_sign(a, b, c);
            orient_sign(a, b, d) == s && orient_sign(b, c, d) == s && orient_sign(c, a, d) == s
        };
        for _ in 0..5000 {
            let ps = random_general_position(4, 20, &mut rng).unwrap();
            let [a, b, c, d] = [ps.point(1), ps.point(2), ps.point(3), ps.point(4)];
            let direct =
                !(inside(a, b, c, d) || inside(a, b, d, c) || inside(a, c, d, b) || inside(b, c, d, a));
            let fast = quad_is_convex(
                orient_sign(a, b, c),
                orient_sign(a, b, d),
                orient_sign(a, c, d),
                orient_sign(b, c, d),
            );
            assert_eq!(direct, fast);
        }
    }

    #[test]
    fn parse_point_file() {
        let text = "# square\n0 0\n\n  1 0\n1\t1\n# trailing\n0 1\n";
        let ps = parse_points(text).unwrap();
        assert_eq!(ps.len(), 4);
        assert_eq!(ps.point(3), Point::new(1, 1));
        assert_eq!(
            parse_points("0 0\n1 2 3\n"),
            Err(Error::Parse {
                line: 2,
                message: "expected two integers, got \"1 2 3\"".into()
            })
        );
        assert!(matches!(parse_points("0 0\nx 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(
            parse_points("0 0\n99999999999 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert_eq!(parse_points("1 1\n2 3\n1 1\n"), Err(Error::DuplicatePoint(1, 3)));
    }

    #[test]
    fn content_hash_tracks_coordinates() {
        let a = parse_points("0 0\n1 0\n0 1\n").unwrap();
        let b = parse_points("# same points\n0 0\n1 0\n0 1\n").unwrap();
        let c = parse_points("0 0\n0 1\n1 0\n").unwrap();
        assert_eq!(a.content_hash(), b.content_hash());
        assert_ne!(a.content_hash(), c.content_hash());
    }

    #[test]
    fn fast_convex_counter_matches_pair_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut fenwick = vec![0u32; 202];
        for n in [1usize, 2, 3, 5, 9, 30, 200] {
            for _ in 0..20 {
                let t = sample_tree(n, &mut rng).unwrap();
                let slow = crossing_count(&t, &PointConfig::Convex(n)).unwrap().0;
                let mut edges = t.edges().to_vec();
                assert_eq!(convex_crossing_count_fast(n, &mut edges, &mut fenwick), slow);
            }
        }
    }

    proptest! {
        #[test]
        fn crossing_is_symmetric(seed in any::<u64>(), a in 1usize..=8, b in 1usize..=8, c in 1usize..=8, d in 1usize..=8) {
            prop_assume!(a != b && c != d);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let coords = PointConfig::Coordinates(random_general_position(8, 50, &mut rng).unwrap());
            for config in [PointConfig::Convex(8), coords] {
                let x = edges_cross(e(a, b), e(c, d), &config).unwrap();
                prop_assert_eq!(x, edges_cross(e(c, d), e(a, b), &config).unwrap());
                if e(a, b).shares_endpoint(&e(c, d)) {
                    prop_assert!(!x);
                }
            }
        }
    }
}
