//! Built-in galleries and random gallery generators.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::decomposition::{build_windows, check_general_position, feasible_pairs, GuardSiteSet, Site};
use crate::geom::{orient, q, qf, Point, Segment, SegmentIntersection, Sign, Q};
use crate::polygon::SimplePolygon;
use crate::visibility::kernel;

/// A gallery with named sites.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub polygon: SimplePolygon,
    pub sites: GuardSiteSet,
}

impl Fixture {
    fn build(name: &str, corners: &[(i64, i64)], sites: &[(&str, Point)]) -> Fixture {
        let polygon = SimplePolygon::new(corners.iter().map(|&(x, y)| Point::int(x, y)).collect())
            .expect("fixture polygon is simple");
        let sites = sites.iter().map(|(n, p)| Site::new(*n, p.clone())).collect();
        let sites = GuardSiteSet::new(&polygon, sites).expect("fixture sites are valid");
        Fixture { name: name.to_string(), polygon, sites }
    }

    /// One site per corner, named after a fixture site at the same point when
    /// there is one and `c1`, `c2`, ... by vertex order otherwise.
    pub fn corner_sites(&self) -> GuardSiteSet {
        corner_sites(&self.polygon, &self.sites)
    }
}

pub fn corner_sites(poly: &SimplePolygon, named: &GuardSiteSet) -> GuardSiteSet {
    let sites = poly
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| match named.sites().iter().find(|s| &s.point == v) {
            Some(s) => s.clone(),
            None => Site::new(format!("c{}", i + 1), v.clone()),
        })
        .collect();
    GuardSiteSet::new(poly, sites).expect("corners are valid sites")
}

fn labelled(corners: &[(i64, i64)]) -> Vec<(String, Point)> {
    corners
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| (format!("{}", i + 1), Point::int(x, y)))
        .collect()
}

fn build_labelled(name: &str, corners: &[(i64, i64)], extra: &[(&str, Point)]) -> Fixture {
    let names = labelled(corners);
    let mut sites: Vec<(&str, Point)> = names.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
    sites.extend(extra.iter().cloned());
    Fixture::build(name, corners, &sites)
}

/// Six corners; guards at A, B and C see every wall but not the triangle
/// around D.
pub fn gamma6() -> Fixture {
    Fixture::build(
        "gamma6",
        &[(10, 7), (9, 6), (3, 5), (4, 5), (6, 0), (6, 1)],
        &[
            ("A", Point::int(10, 7)),
            ("B", Point::int(3, 5)),
            ("C", Point::int(6, 0)),
            ("D", Point::frac(13, 2, 9, 2)),
        ],
    )
}

/// Five corner guards see every wall and leave two separate hidden pockets.
pub fn fig2_left() -> Fixture {
    Fixture::build(
        "fig2_left",
        &[
            (2, -1),
            (31, 1),
            (32, 10),
            (22, 21),
            (38, 42),
            (51, 39),
            (72, 18),
            (88, 38),
            (79, 52),
            (68, 41),
            (60, 49),
            (61, 62),
            (-1, 39),
            (10, 29),
            (11, 11),
            (-1, 8),
        ],
        &[
            ("1", Point::int(-1, 8)),
            ("2", Point::int(-1, 39)),
            ("3", Point::int(38, 42)),
            ("4", Point::int(61, 62)),
            ("5", Point::int(79, 52)),
        ],
    )
}

/// Not star-shaped, yet four wall points with convex views cover it.
pub fn fig2_right() -> Fixture {
    Fixture::build(
        "fig2_right",
        &[(0, 5), (6, 5), (6, 0), (0, 0), (0, 3), (2, 3), (2, 1), (4, 1), (4, 4), (0, 4)],
        &[
            ("1", Point::int(2, 4)),
            ("2", Point::frac(4, 1, 5, 2)),
            ("3", Point::int(3, 1)),
            ("4", Point::int(2, 2)),
        ],
    )
}

/// Eight corners; corners 4, 5 and 8 see every wall but miss a triangle in
/// the middle.
pub fn gamma8() -> Fixture {
    build_labelled(
        "gamma8",
        &[(10, 51), (50, 50), (50, 11), (60, 0), (0, 0), (20, 19), (20, 40), (10, 40)],
        &[],
    )
}

/// Nine corners, normal with respect to its corners; adding the wall point
/// G breaks that.
pub fn gamma9() -> Fixture {
    build_labelled(
        "gamma9",
        &[(10, 42), (40, 40), (40, 10), (60, 10), (60, 0), (11, 0), (20, 11), (20, 31), (10, 30)],
        &[("G", Point::int(49, 0))],
    )
}

pub fn lshape() -> Fixture {
    Fixture::build(
        "lshape",
        &[(0, 0), (4, 0), (4, 2), (2, 2), (2, 4), (0, 4)],
        &[("arm", Point::int(4, 1)), ("top", Point::int(1, 4)), ("origin", Point::int(0, 0))],
    )
}

pub fn square() -> Fixture {
    Fixture::build("square", &[(0, 0), (4, 0), (4, 4), (0, 4)], &[("centroid", Point::int(2, 2))])
}

pub const NAMES: [&str; 7] = ["gamma6", "fig2_left", "fig2_right", "gamma8", "gamma9", "lshape", "square"];

pub fn by_name(name: &str) -> Option<Fixture> {
    Some(match name {
        "gamma6" => gamma6(),
        "fig2_left" => fig2_left(),
        "fig2_right" => fig2_right(),
        "gamma8" => gamma8(),
        "gamma9" => gamma9(),
        "lshape" => lshape(),
        "square" => square(),
        _ => return None,
    })
}

pub fn all() -> Vec<Fixture> {
    NAMES.iter().map(|n| by_name(n).expect("known fixture")).collect()
}

fn has_collinear_triple(pts: &[Point]) -> bool {
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            for k in (j + 1)..pts.len() {
                if orient(&pts[i], &pts[j], &pts[k]) == Sign::Zero {
                    return true;
                }
            }
        }
    }
    false
}

fn crosses(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let s1 = Segment { a: a.clone(), b: b.clone() };
    let s2 = Segment { a: c.clone(), b: d.clone() };
    !matches!(crate::geom::intersect_segments(&s1, &s2), SegmentIntersection::Empty)
}

/// Random simple polygon on `n` distinct integer points in `[0, size]²`
/// with no three corners collinear, untangled by 2-opt moves.
pub fn random_polygon<R: Rng>(rng: &mut R, n: usize, size: i64) -> SimplePolygon {
    assert!(n >= 3, "a polygon needs at least 3 corners");
    loop {
        let mut pts: Vec<Point> = Vec::with_capacity(n);
        while pts.len() < n {
            let p = Point::int(rng.gen_range(0..=size), rng.gen_range(0..=size));
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        if has_collinear_triple(&pts) {
            continue;
        }
        pts.shuffle(rng);
        // Any crossing of non-adjacent edges is removed by reversing the
        // chain between them, which strictly shortens the tour.
        let mut guard = 0;
        'untangle: loop {
            guard += 1;
            if guard > 10 * n * n {
                break;
            }
            for i in 0..n {
                for j in (i + 2)..n {
                    if i == 0 && j == n - 1 {
                        continue;
                    }
                    let (a, b) = (&pts[i], &pts[i + 1]);
                    let (c, d) = (&pts[j], &pts[(j + 1) % n]);
                    if crosses(a, b, c, d) {
                        pts[i + 1..=j].reverse();
                        continue 'untangle;
                    }
                }
            }
            break;
        }
        if let Ok(p) = SimplePolygon::new(pts) {
            if p.n() == n {
                return p;
            }
        }
    }
}

/// Random star-shaped polygon: corners at random radii around a centre,
/// sorted by angle, with a nonempty kernel checked.
pub fn random_star<R: Rng>(rng: &mut R, n: usize, size: i64) -> SimplePolygon {
    assert!(n >= 3, "a polygon needs at least 3 corners");
    let c = size / 2;
    loop {
        let mut pts: Vec<(i64, i64)> = Vec::with_capacity(n);
        while pts.len() < n {
            let p = (rng.gen_range(0..=size) - c, rng.gen_range(0..=size) - c);
            if p != (0, 0) && !pts.contains(&p) {
                pts.push(p);
            }
        }
        pts.sort_by(|a, b| (a.1 as f64).atan2(a.0 as f64).total_cmp(&(b.1 as f64).atan2(b.0 as f64)));
        let corners: Vec<Point> = pts.iter().map(|&(x, y)| Point::int(x + c, y + c)).collect();
        if has_collinear_triple(&corners) {
            continue;
        }
        if let Ok(p) = SimplePolygon::new(corners) {
            if p.n() == n && !kernel(&p).is_empty() && !p.reflex_corners().is_empty() {
                return p;
            }
        }
    }
}

/// Random polygon with one or two reflex corners: a convex polygon with one
/// or two edges pushed inward at a point.
pub fn random_two_reflex<R: Rng>(rng: &mut R, n: usize, size: i64) -> SimplePolygon {
    assert!(n >= 5, "need at least 5 corners for two dents");
    loop {
        let dents = rng.gen_range(1..=2usize);
        let hull_n = n - dents;
        let mut pts: Vec<Point> = Vec::new();
        for _ in 0..(hull_n * 4) {
            pts.push(Point::int(rng.gen_range(0..=size), rng.gen_range(0..=size)));
        }
        let mut hull = crate::arrangement::convex_hull(&pts);
        if hull.len() < hull_n {
            continue;
        }
        hull.truncate(hull_n);
        let hull = crate::arrangement::convex_hull(&hull);
        if hull.len() != hull_n {
            continue;
        }
        let mut edges: Vec<usize> = (0..hull_n).collect();
        edges.shuffle(rng);
        edges.truncate(dents);
        edges.sort_unstable_by(|a, b| b.cmp(a));
        let mut corners = hull.clone();
        for &e in &edges {
            let a = &hull[e];
            let b = &hull[(e + 1) % hull_n];
            // Inward normal of a counter-clockwise edge is its left normal.
            let d = b.sub(a);
            let t = qf(rng.gen_range(1..=9), 10);
            let depth = qf(rng.gen_range(1..=6), 20);
            let inward = Point::new(-d.y.clone() * &depth, d.x.clone() * &depth);
            corners.insert(e + 1, a.lerp(b, &t).add(&inward));
        }
        if has_collinear_triple(&corners) {
            continue;
        }
        if let Ok(p) = SimplePolygon::new(corners) {
            let r = p.reflex_corners().len();
            if p.n() == n && (1..=2).contains(&r) {
                return p;
            }
        }
    }
}

/// Right-angled spiral corridor of width 1 making `turns` left turns.
pub fn spiral(turns: usize) -> SimplePolygon {
    assert!(turns >= 1, "a spiral needs at least one turn");
    let len = 2 * (turns as i64 / 2) + 4;
    // Centre line: E, N, W, S, ... with lengths shrinking by 2 every two legs
    // after the first three.
    let dirs = [(1, 0), (0, 1), (-1, 0), (0, -1)];
    let mut path = vec![(0i64, 0i64)];
    let mut lengths = Vec::new();
    let mut l = len * 2;
    for k in 0..=turns {
        if k >= 3 && k % 2 == 1 {
            l -= 2;
        }
        lengths.push(l);
    }
    let mut cur = (0i64, 0i64);
    for (k, l) in lengths.iter().enumerate() {
        let d = dirs[k % 4];
        cur = (cur.0 + d.0 * l, cur.1 + d.1 * l);
        path.push(cur);
    }
    let h = qf(1, 2);
    let pt = |p: (i64, i64)| Point::int(p.0, p.1);
    let normal = |d: (i64, i64)| Point::int(-d.1, d.0);
    let mut left = Vec::new();
    let mut right = Vec::new();
    for i in 0..path.len() {
        let din = if i > 0 { Some(dirs[(i - 1) % 4]) } else { None };
        let dout = if i + 1 < path.len() { Some(dirs[i % 4]) } else { None };
        let off = match (din, dout) {
            (Some(a), Some(b)) => normal(a).add(&normal(b)),
            (Some(a), None) => normal(a),
            (None, Some(b)) => normal(b),
            (None, None) => unreachable!(),
        };
        let off = off.scale(&h);
        left.push(pt(path[i]).add(&off));
        right.push(pt(path[i]).sub(&off));
    }
    right.extend(left.into_iter().rev());
    SimplePolygon::new(right).expect("spiral is simple")
}

/// `m` random sites strictly inside `poly` on a lattice of pitch `1/den`,
/// none collinear with two other corners or sites, and with the resulting
/// windows in general position. `None` if 200 draws all fail.
pub fn random_sites<R: Rng>(rng: &mut R, poly: &SimplePolygon, m: usize, den: i64) -> Option<GuardSiteSet> {
    let (lo, hi) = poly.bbox();
    let dq = q(den);
    let span = |a: &Q, b: &Q| -> (i64, i64) {
        let lo = (a * &dq).ceil().to_integer();
        let hi = (b * &dq).floor().to_integer();
        (i64::try_from(lo).expect("small"), i64::try_from(hi).expect("small"))
    };
    let (x0, x1) = span(&lo.x, &hi.x);
    let (y0, y1) = span(&lo.y, &hi.y);
    for _ in 0..200 {
        let mut pts: Vec<Point> = poly.vertices().to_vec();
        let mut sites = Vec::new();
        let mut tries = 0;
        while sites.len() < m && tries < 10_000 {
            tries += 1;
            let p = Point::new(qf(rng.gen_range(x0..=x1), den), qf(rng.gen_range(y0..=y1), den));
            if !poly.classify_point(&p).is_interior() || collinear_with_pair(&pts, &p) {
                continue;
            }
            pts.push(p.clone());
            sites.push(p);
        }
        if sites.len() < m {
            continue;
        }
        let Ok(a) = GuardSiteSet::from_points(poly, sites) else { continue };
        if let Ok(w) = build_windows(poly, &a, &feasible_pairs(poly, &a)) {
            if check_general_position(poly, &a, &w).is_ok() {
                return Some(a);
            }
        }
    }
    None
}

fn collinear_with_pair(pts: &[Point], p: &Point) -> bool {
    for i in 0..pts.len() {
        if &pts[i] == p {
            return true;
        }
        for j in (i + 1)..pts.len() {
            if orient(&pts[i], &pts[j], p) == Sign::Zero {
                return true;
            }
        }
    }
    false
}
