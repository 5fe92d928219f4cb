//! The gallery: a validated counter-clockwise simple polygon with exact
//! vertices, plus containment, ray shooting and the boundary parameterization.

use std::fmt;

use num_traits::{One, Zero};

use crate::geom::{in_box, line_param, orient, signed_area2, Point, Segment, Sign, Q};
use crate::interval::{interval_union_measure, IntervalSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolygonError {
    #[error("a polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("zero-length edge at vertex {index} {point}")]
    ZeroLengthEdge { index: usize, point: Point },
    #[error("polygon is not simple: edge {first:?} meets edge {second:?}")]
    NotSimple { first: Segment, second: Segment },
    #[error("point {0} lies outside the polygon")]
    PointOutside(Point),
    #[error("ray from {origin} has no boundary hit")]
    NoHit { origin: Point },
    #[error("ray from {origin} runs along wall {edge}")]
    DegenerateAlongEdge { origin: Point, edge: usize },
}

/// A position on the walls: `edge + t` with `t` in `[0, 1)` after
/// normalization.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoundaryPos {
    pub edge: usize,
    pub t: Q,
}

impl BoundaryPos {
    pub fn new(edge: usize, t: Q, n: usize) -> Self {
        assert!(t >= Q::zero() && t <= Q::one(), "boundary parameter outside [0, 1]");
        if t.is_one() {
            BoundaryPos { edge: (edge + 1) % n, t: Q::zero() }
        } else {
            BoundaryPos { edge, t }
        }
    }

    /// Position on the circle `[0, n)`.
    pub fn value(&self) -> Q {
        Q::from_integer(self.edge.into()) + &self.t
    }
}

impl PartialOrd for BoundaryPos {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BoundaryPos {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.edge, &self.t).cmp(&(other.edge, &other.t))
    }
}

impl fmt::Debug for BoundaryPos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "edge {} @ {}", self.edge, self.t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointLocation {
    Interior,
    Boundary(BoundaryPos),
    Exterior,
}

impl PointLocation {
    pub fn is_exterior(&self) -> bool {
        matches!(self, PointLocation::Exterior)
    }

    pub fn is_interior(&self) -> bool {
        matches!(self, PointLocation::Interior)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct SimplePolygon {
    vertices: Vec<Point>,
}

impl fmt::Debug for SimplePolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.vertices).finish()
    }
}

impl SimplePolygon {
    /// Validates a vertex loop. Clockwise input is reversed (keeping the
    /// first vertex first) and runs of collinear edges are merged.
    pub fn new(vertices: Vec<Point>) -> Result<Self, PolygonError> {
        if vertices.len() < 3 {
            return Err(PolygonError::TooFewVertices(vertices.len()));
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(PolygonError::ZeroLengthEdge { index: i, point: vertices[i].clone() });
            }
        }
        let mut vs = vertices;
        loop {
            let n = vs.len();
            if n < 3 {
                return Err(PolygonError::TooFewVertices(n));
            }
            let mut removed = false;
            for i in 0..n {
                let (p, v, nx) = (&vs[(i + n - 1) % n], &vs[i], &vs[(i + 1) % n]);
                if orient(p, v, nx) != Sign::Zero {
                    continue;
                }
                if in_box(p, nx, v) {
                    vs.remove(i);
                    removed = true;
                    break;
                }
                // The chain doubles back on itself.
                return Err(PolygonError::NotSimple {
                    first: Segment { a: p.clone(), b: v.clone() },
                    second: Segment { a: v.clone(), b: nx.clone() },
                });
            }
            if !removed {
                break;
            }
        }
        let poly = SimplePolygon { vertices: vs };
        poly.check_simple()?;
        let mut poly = poly;
        if signed_area2(&poly.vertices) < Q::zero() {
            poly.vertices[1..].reverse();
        }
        Ok(poly)
    }

    fn check_simple(&self) -> Result<(), PolygonError> {
        use crate::geom::{intersect_segments, SegmentIntersection};
        let n = self.n();
        for i in 0..n {
            let ei = self.edge(i);
            for j in (i + 1)..n {
                let ej = self.edge(j);
                let hit = intersect_segments(&ei, &ej);
                let ok = if j == i + 1 {
                    hit == SegmentIntersection::Point(self.vertices[j].clone())
                } else if i == 0 && j == n - 1 {
                    hit == SegmentIntersection::Point(self.vertices[0].clone())
                } else {
                    hit == SegmentIntersection::Empty
                };
                if !ok {
                    return Err(PolygonError::NotSimple { first: ei, second: ej });
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i % self.n()]
    }

    pub fn prev(&self, i: usize) -> usize {
        (i + self.n() - 1) % self.n()
    }

    pub fn next(&self, i: usize) -> usize {
        (i + 1) % self.n()
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> Segment {
        Segment { a: self.vertex(i).clone(), b: self.vertex(i + 1).clone() }
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        (0..self.n()).map(move |i| self.edge(i))
    }

    /// Total parameter length of the walls (one unit per edge).
    pub fn perimeter_param(&self) -> Q {
        Q::from_integer(self.n().into())
    }

    /// Twice the enclosed area.
    pub fn area2(&self) -> Q {
        signed_area2(&self.vertices)
    }

    pub fn is_reflex(&self, i: usize) -> bool {
        orient(self.vertex(self.prev(i)), self.vertex(i), self.vertex(self.next(i))) == Sign::Negative
    }

    /// Vertices whose interior angle exceeds a half turn.
    pub fn reflex_corners(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.is_reflex(i)).collect()
    }

    pub fn is_convex(&self) -> bool {
        self.reflex_corners().is_empty()
    }

    /// Same boundary loop up to the choice of starting vertex.
    pub fn same_loop(&self, other: &SimplePolygon) -> bool {
        let n = self.n();
        if n != other.n() {
            return false;
        }
        match other.vertices.iter().position(|v| v == &self.vertices[0]) {
            Some(s) => (0..n).all(|i| self.vertices[i] == other.vertices[(s + i) % n]),
            None => false,
        }
    }

    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = self.vertices[0].clone();
        let mut hi = self.vertices[0].clone();
        for v in &self.vertices[1..] {
            if v.x < lo.x {
                lo.x = v.x.clone();
            }
            if v.y < lo.y {
                lo.y = v.y.clone();
            }
            if v.x > hi.x {
                hi.x = v.x.clone();
            }
            if v.y > hi.y {
                hi.y = v.y.clone();
            }
        }
        (lo, hi)
    }

    pub fn boundary_point(&self, pos: &BoundaryPos) -> Point {
        self.edge(pos.edge).at(&pos.t)
    }

    /// Boundary position of `p`, if `p` lies on a wall.
    pub fn boundary_pos(&self, p: &Point) -> Option<BoundaryPos> {
        for (i, e) in self.edges().enumerate() {
            if e.contains(p) {
                return Some(BoundaryPos::new(i, e.param_of(p), self.n()));
            }
        }
        None
    }

    /// Crossing-number classification with exact predicates.
    pub fn classify_point(&self, p: &Point) -> PointLocation {
        if let Some(pos) = self.boundary_pos(p) {
            return PointLocation::Boundary(pos);
        }
        let mut inside = false;
        for e in self.edges() {
            let (a, b) = (&e.a, &e.b);
            let a_above = a.y > p.y;
            let b_above = b.y > p.y;
            if a_above == b_above {
                continue;
            }
            let side = orient(a, b, p);
            let crosses = if b_above { side == Sign::Positive } else { side == Sign::Negative };
            if crosses {
                inside = !inside;
            }
        }
        if inside {
            PointLocation::Interior
        } else {
            PointLocation::Exterior
        }
    }

    pub fn contains_closed(&self, p: &Point) -> bool {
        !self.classify_point(p).is_exterior()
    }

    /// Closed visibility: true iff every point of `ab` lies in the closed
    /// polygon. Grazing the walls is allowed.
    pub fn segment_inside(&self, a: &Point, b: &Point) -> Result<bool, PolygonError> {
        for p in [a, b] {
            if self.classify_point(p).is_exterior() {
                return Err(PolygonError::PointOutside(p.clone()));
            }
        }
        Ok(self.segment_inside_unchecked(a, b))
    }

    /// [`Self::segment_inside`] for endpoints already known to be in the
    /// closed polygon.
    pub fn segment_inside_unchecked(&self, a: &Point, b: &Point) -> bool {
        if a == b {
            return true;
        }
        let n = self.n();
        let sides: Vec<Sign> = self.vertices.iter().map(|v| orient(a, b, v)).collect();
        let mut splits: Vec<Q> = vec![Q::zero(), Q::one()];
        let d = b.sub(a);
        for i in 0..n {
            let j = (i + 1) % n;
            let (si, sj) = (sides[i], sides[j]);
            if si != Sign::Zero && sj != Sign::Zero && si != sj {
                let (u, v) = (&self.vertices[i], &self.vertices[j]);
                let o3 = orient(u, v, a);
                let o4 = orient(u, v, b);
                if o3 != Sign::Zero && o4 != Sign::Zero && o3 != o4 {
                    return false;
                }
            }
            if si == Sign::Zero {
                let v = &self.vertices[i];
                if in_box(a, b, v) {
                    let t = if !d.x.is_zero() { (&v.x - &a.x) / &d.x } else { (&v.y - &a.y) / &d.y };
                    splits.push(t);
                }
            }
        }
        splits.sort();
        splits.dedup();
        let half = crate::geom::half();
        splits.windows(2).all(|w| {
            let t = (&w[0] + &w[1]) * &half;
            !self.classify_point(&a.lerp(b, &t)).is_exterior()
        })
    }

    /// Shoots a ray from `origin` along `dir` and returns the point where it
    /// leaves the closed polygon. Grazing contacts with reflex corners do not
    /// stop the ray.
    pub fn ray_shoot(&self, origin: &Point, dir: &Point) -> Result<(Point, BoundaryPos), PolygonError> {
        assert!(!dir.is_zero(), "ray direction must be nonzero");
        let tip = origin.add(dir);
        let mut events: Vec<Q> = Vec::new();
        let mut overlaps: Vec<(Q, Q, usize)> = Vec::new();
        for (i, e) in self.edges().enumerate() {
            let oa = orient(origin, &tip, &e.a);
            let ob = orient(origin, &tip, &e.b);
            if oa == Sign::Zero && ob == Sign::Zero {
                let sa = ray_param(origin, dir, &e.a);
                let sb = ray_param(origin, dir, &e.b);
                let (lo, hi) = if sa <= sb { (sa, sb) } else { (sb, sa) };
                if hi > Q::zero() {
                    overlaps.push((lo.clone(), hi.clone(), i));
                    if lo > Q::zero() {
                        events.push(lo);
                    }
                    events.push(hi);
                }
                continue;
            }
            if oa != Sign::Zero && oa == ob {
                continue;
            }
            if let Some(s) = line_param(origin, dir, &e.a, &e.dir()) {
                if s > Q::zero() {
                    events.push(s);
                }
            }
        }
        events.sort();
        events.dedup();
        if events.is_empty() {
            return Err(PolygonError::NoHit { origin: origin.clone() });
        }
        let half = crate::geom::half();
        let mut prev = Q::zero();
        let mut exit: Option<Q> = None;
        for s in events.iter() {
            let mid = (&prev + s) * &half;
            if let Some((_, _, edge)) = overlaps.iter().find(|(lo, hi, _)| *lo <= mid && mid <= *hi) {
                return Err(PolygonError::DegenerateAlongEdge { origin: origin.clone(), edge: *edge });
            }
            let p = origin.add(&dir.scale(&mid));
            if self.classify_point(&p).is_exterior() {
                if prev.is_zero() {
                    return Err(PolygonError::NoHit { origin: origin.clone() });
                }
                exit = Some(prev.clone());
                break;
            }
            prev = s.clone();
        }
        let s = exit.unwrap_or(prev);
        let hit = origin.add(&dir.scale(&s));
        let pos = self.boundary_pos(&hit).expect("ray exit lies on a wall");
        Ok((hit, pos))
    }

    /// Union of wall portions as intervals on `[0, n)`.
    pub fn walls_measure(&self, sets: &[IntervalSet]) -> (IntervalSet, Q) {
        interval_union_measure(sets, self.perimeter_param())
    }

    /// A point strictly inside the polygon: the midpoint between the first two
    /// wall crossings of a horizontal line that misses every vertex.
    pub fn interior_probe(&self) -> Point {
        let (lo, hi) = self.bbox();
        let mid_y = lo.y.clone() + (&hi.y - &lo.y) * crate::geom::qf(1, 3);
        // Scan a horizontal line that avoids every vertex height.
        let mut y = mid_y;
        while self.vertices.iter().any(|v| v.y == y) {
            y = (&y + &hi.y) * crate::geom::half();
        }
        let mut xs: Vec<Q> = Vec::new();
        for e in self.edges() {
            if (e.a.y < y) != (e.b.y < y) {
                let t = (&y - &e.a.y) / (&e.b.y - &e.a.y);
                xs.push(&e.a.x + (&e.b.x - &e.a.x) * t);
            }
        }
        xs.sort();
        let x = (&xs[0] + &xs[1]) * crate::geom::half();
        Point::new(x, y)
    }
}

fn ray_param(origin: &Point, dir: &Point, p: &Point) -> Q {
    if !dir.x.is_zero() {
        (&p.x - &origin.x) / &dir.x
    } else {
        (&p.y - &origin.y) / &dir.y
    }
}

/// Area of the polygon as an exact rational.
pub fn area(poly: &SimplePolygon) -> Q {
    poly.area2() * crate::geom::half()
}
