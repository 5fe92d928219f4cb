//! Views of points, the kernel, and the convex-view cover certificate.

use num_traits::{One, Zero};

use crate::arrangement::Arrangement;
use crate::geom::{half, line_param, orient, Point, Segment, Sign, Q};
use crate::interval::IntervalSet;
use crate::polygon::{PolygonError, SimplePolygon};

/// The visibility polygon of `site`, together with the wall portions it sees.
#[derive(Clone, Debug)]
pub struct View {
    pub site: Point,
    pub polygon: SimplePolygon,
    pub walls: IntervalSet,
}

impl View {
    /// Boundary segments of the view that are not wall pieces.
    pub fn chords(&self, gallery: &SimplePolygon) -> Vec<Segment> {
        self.polygon
            .edges()
            .filter(|e| !on_some_wall(gallery, e))
            .collect()
    }

    /// Closed containment in the view.
    pub fn contains(&self, p: &Point) -> bool {
        self.polygon.contains_closed(p)
    }
}

fn on_some_wall(gallery: &SimplePolygon, s: &Segment) -> bool {
    let mid = s.a.midpoint(&s.b);
    gallery.edges().any(|w| w.contains(&s.a) && w.contains(&s.b) && w.contains(&mid))
}

/// Exact breakpoints along edge `i` where visibility from `p` can change.
fn edge_breakpoints(poly: &SimplePolygon, i: usize, p: &Point) -> Vec<Q> {
    let e = poly.edge(i);
    let mut ts = vec![Q::zero(), Q::one()];
    if orient(&e.a, &e.b, p) == Sign::Zero {
        if e.contains(p) {
            ts.push(e.param_of(p));
        }
    } else {
        let d = e.dir();
        for w in poly.vertices() {
            if w == p {
                continue;
            }
            if let Some(t) = line_param(&e.a, &d, p, &w.sub(p)) {
                if t > Q::zero() && t < Q::one() {
                    ts.push(t);
                }
            }
        }
    }
    ts.sort();
    ts.dedup();
    ts
}

/// Portions of the walls visible from `p`, as closed intervals on `[0, n)`.
///
/// Along an edge, visibility from `p` only changes where the sight line
/// sweeps across a vertex, so each edge is cut at the lines through `p` and
/// every vertex and each piece is decided by one containment test.
pub fn wall_view(poly: &SimplePolygon, p: &Point) -> Result<IntervalSet, PolygonError> {
    if poly.classify_point(p).is_exterior() {
        return Err(PolygonError::PointOutside(p.clone()));
    }
    let h = half();
    let mut items: Vec<(Q, Q)> = Vec::new();
    for i in 0..poly.n() {
        let e = poly.edge(i);
        let base = Q::from_integer(i.into());
        let ts = edge_breakpoints(poly, i, p);
        let seen: Vec<bool> = ts.iter().map(|t| poly.segment_inside_unchecked(p, &e.at(t))).collect();
        let mut run_start: Option<Q> = None;
        for k in 0..ts.len() {
            if k > 0 {
                let mid = (&ts[k - 1] + &ts[k]) * &h;
                let piece = poly.segment_inside_unchecked(p, &e.at(&mid));
                match (&run_start, piece) {
                    (None, true) => run_start = Some(ts[k - 1].clone()),
                    (Some(s), false) => {
                        items.push((&base + s, &base + &ts[k - 1]));
                        run_start = None;
                    }
                    _ => {}
                }
            }
            if run_start.is_none() && seen[k] {
                // Isolated visible breakpoint, unless the next piece opens a run.
                let opens = k + 1 < ts.len() && {
                    let mid = (&ts[k] + &ts[k + 1]) * &h;
                    poly.segment_inside_unchecked(p, &e.at(&mid))
                };
                if !opens {
                    items.push((&base + &ts[k], &base + &ts[k]));
                }
            }
        }
        if let Some(s) = run_start {
            items.push((&base + s, &base + Q::one()));
        }
    }
    Ok(IntervalSet::from_intervals(poly.perimeter_param(), items))
}

/// Drops repeated and collinear vertices (including zero-width spikes).
fn clean_loop(mut pts: Vec<Point>) -> Vec<Point> {
    loop {
        let n = pts.len();
        if n < 3 {
            return pts;
        }
        let mut changed = false;
        for i in 0..n {
            let (a, b, c) = (&pts[(i + n - 1) % n], &pts[i], &pts[(i + 1) % n]);
            if a == b || orient(a, b, c) == Sign::Zero {
                pts.remove(i);
                changed = true;
                break;
            }
        }
        if !changed {
            return pts;
        }
    }
}

/// The visibility polygon of `p`.
///
/// The view of a point is star-shaped around it, so its boundary visits the
/// visible wall pieces in boundary order; consecutive pieces are joined by
/// the window chords that cut off hidden pockets.
pub fn visibility_polygon(poly: &SimplePolygon, p: &Point) -> Result<View, PolygonError> {
    let walls = wall_view(poly, p)?;
    let n = poly.n();
    let period = poly.perimeter_param();
    let mut pieces: Vec<(Q, Q)> = walls.intervals().to_vec();
    // Fuse the piece running into the wrap point with the one leaving it.
    if pieces.len() >= 2 && pieces[0].0.is_zero() && pieces[pieces.len() - 1].1 == period {
        let first = pieces.remove(0);
        let last = pieces.last_mut().expect("nonempty");
        last.1 = &period + first.1;
    }
    let mut loop_pts: Vec<Point> = Vec::new();
    let at = |v: &Q| -> Point {
        let mut v = v.clone();
        while v >= period {
            v -= &period;
        }
        let edge = v.floor();
        let t = &v - &edge;
        let idx: usize = edge.to_integer().try_into().expect("edge index");
        poly.edge(idx).at(&t)
    };
    for (lo, hi) in &pieces {
        loop_pts.push(at(lo));
        let first_vertex = lo.floor() + Q::one();
        let mut v = first_vertex;
        while &v < hi {
            let idx: usize = (v.to_integer() % BigIntN::from(n)).try_into().expect("vertex index");
            loop_pts.push(poly.vertex(idx).clone());
            v += Q::one();
        }
        if hi != lo {
            loop_pts.push(at(hi));
        }
    }
    let cleaned = clean_loop(loop_pts);
    let polygon = SimplePolygon::new(cleaned)?;
    Ok(View { site: p.clone(), polygon, walls })
}

type BigIntN = num_bigint::BigInt;

/// Whether the view of `p` is convex.
pub fn view_is_convex(poly: &SimplePolygon, p: &Point) -> Result<bool, PolygonError> {
    Ok(visibility_polygon(poly, p)?.polygon.is_convex())
}

/// Intersection of the inner closed half-planes of all walls. May be empty or
/// degenerate (a segment or a single point).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    pub vertices: Vec<Point>,
}

impl Kernel {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Average of the kernel vertices; a kernel point when nonempty.
    pub fn point(&self) -> Option<Point> {
        if self.vertices.is_empty() {
            return None;
        }
        let k = Q::from_integer(self.vertices.len().into());
        let sx = self.vertices.iter().fold(Q::zero(), |a, v| a + &v.x);
        let sy = self.vertices.iter().fold(Q::zero(), |a, v| a + &v.y);
        Some(Point::new(sx / &k, sy / k))
    }

    pub fn contains(&self, p: &Point) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => &self.vertices[0] == p,
            2 => Segment { a: self.vertices[0].clone(), b: self.vertices[1].clone() }.contains(p),
            n => (0..n).all(|i| orient(&self.vertices[i], &self.vertices[(i + 1) % n], p) != Sign::Negative),
        }
    }
}

/// Clips a convex loop to the closed left half-plane of `a -> b`.
fn clip_left(subject: &[Point], a: &Point, b: &Point) -> Vec<Point> {
    if subject.len() == 1 {
        return if orient(a, b, &subject[0]) != Sign::Negative { subject.to_vec() } else { Vec::new() };
    }
    let mut out: Vec<Point> = Vec::new();
    let n = subject.len();
    for i in 0..n {
        let cur = &subject[i];
        let nxt = &subject[(i + 1) % n];
        let sc = orient(a, b, cur);
        let sn = orient(a, b, nxt);
        if sc != Sign::Negative {
            out.push(cur.clone());
        }
        if (sc == Sign::Positive && sn == Sign::Negative) || (sc == Sign::Negative && sn == Sign::Positive) {
            let t = line_param(cur, &nxt.sub(cur), a, &b.sub(a)).expect("crossing edge");
            out.push(cur.lerp(nxt, &t));
        }
    }
    out.dedup();
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

/// Kernel by successive half-plane clipping of the bounding box.
pub fn kernel(poly: &SimplePolygon) -> Kernel {
    let (lo, hi) = poly.bbox();
    let mut region = vec![
        lo.clone(),
        Point::new(hi.x.clone(), lo.y.clone()),
        hi.clone(),
        Point::new(lo.x.clone(), hi.y.clone()),
    ];
    for e in poly.edges() {
        region = clip_left(&region, &e.a, &e.b);
        if region.is_empty() {
            break;
        }
    }
    if region.len() >= 3 {
        region = clean_loop(region);
    }
    Kernel { vertices: region }
}

/// Candidate wall points whose views are tested for convexity: the convex
/// endpoints of edges next to reflex corners, and midpoints of edges joining
/// two reflex corners.
pub fn convex_cover_candidates(poly: &SimplePolygon) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    let reflex: Vec<bool> = (0..poly.n()).map(|i| poly.is_reflex(i)).collect();
    for i in 0..poly.n() {
        let j = poly.next(i);
        let p = match (reflex[i], reflex[j]) {
            (true, true) => poly.vertex(i).midpoint(poly.vertex(j)),
            (true, false) => poly.vertex(j).clone(),
            (false, true) => poly.vertex(i).clone(),
            (false, false) => continue,
        };
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// A set of wall points with convex views whose union is the whole gallery,
/// if the candidate recipe finds one. `None` means inconclusive, not "not
/// normal".
pub fn convex_cover_certificate(poly: &SimplePolygon) -> Option<Vec<Point>> {
    if poly.is_convex() {
        return Some(vec![poly.vertex(0).clone()]);
    }
    let views: Vec<View> = convex_cover_candidates(poly)
        .into_iter()
        .filter_map(|p| visibility_polygon(poly, &p).ok())
        .filter(|v| v.polygon.is_convex())
        .collect();
    if views.is_empty() {
        return None;
    }
    if views_cover_gallery(poly, &views) {
        Some(views.into_iter().map(|v| v.site).collect())
    } else {
        None
    }
}

/// Cuts the gallery with every view chord and checks that each resulting
/// cell lies in some view.
pub fn views_cover_gallery(poly: &SimplePolygon, views: &[View]) -> bool {
    let chords: Vec<Segment> = views.iter().flat_map(|v| v.chords(poly)).collect();
    let arr = Arrangement::build(poly, &chords);
    arr.cells.iter().all(|c| {
        let rep = c.representative();
        views.iter().any(|v| v.contains(&rep))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{q, qf};
    use crate::polygon::{area, tests::lshape, tests::pts, tests::square};

    #[test]
    fn square_views() {
        let s = square();
        let v = visibility_polygon(&s, &Point::int(2, 2)).unwrap();
        assert!(v.polygon.same_loop(&s));
        assert!(v.walls.covers_all());
        for p in [Point::int(1, 3), Point::int(0, 0), Point::int(4, 1)] {
            assert!(wall_view(&s, &p).unwrap().covers_all());
        }
    }

    #[test]
    fn lshape_kernel_point_sees_everything() {
        let l = lshape();
        let v = visibility_polygon(&l, &Point::int(0, 0)).unwrap();
        assert!(v.polygon.same_loop(&l));
        assert_eq!(v.walls.measure(), q(6));
    }

    #[test]
    fn lshape_view_from_right_arm() {
        let l = lshape();
        let v = visibility_polygon(&l, &Point::int(4, 1)).unwrap();
        let expected = SimplePolygon::new(pts(&[(0, 0), (4, 0), (4, 2), (2, 2), (0, 3)])).unwrap();
        assert!(v.polygon.same_loop(&expected), "{:?}", v.polygon);
        // Hidden: from (0,3) on edge 5 back through (0,4), (2,4) to (2,2).
        assert_eq!(
            v.walls.intervals(),
            &[(q(0), q(3)), (qf(21, 4), q(6))]
        );
        assert_eq!(area(&v.polygon), q(9));
        assert_eq!(v.chords(&l), vec![Segment::new(Point::int(2, 2), Point::int(0, 3)).unwrap()]);
    }

    #[test]
    fn convexity_of_views() {
        let l = lshape();
        assert!(view_is_convex(&square(), &Point::int(2, 2)).unwrap());
        assert!(!view_is_convex(&l, &Point::int(4, 1)).unwrap());
        // (2,0) is a kernel point, so its view is the whole non-convex L.
        assert!(!view_is_convex(&l, &Point::int(2, 0)).unwrap());
        assert!(view_is_convex(&l, &Point::int(4, 2)).unwrap());
        let v = visibility_polygon(&l, &Point::int(4, 2)).unwrap();
        assert!(v.polygon.same_loop(&SimplePolygon::new(pts(&[(0, 0), (4, 0), (4, 2), (0, 2)])).unwrap()));
        assert!(matches!(view_is_convex(&l, &Point::int(3, 3)), Err(PolygonError::PointOutside(_))));
    }

    #[test]
    fn kernels() {
        let s = square();
        let k = kernel(&s);
        assert!(SimplePolygon::new(k.vertices.clone()).unwrap().same_loop(&s));
        let k = kernel(&lshape());
        assert!(SimplePolygon::new(k.vertices.clone())
            .unwrap()
            .same_loop(&SimplePolygon::new(pts(&[(0, 0), (2, 0), (2, 2), (0, 2)])).unwrap()));
        // A comb with two teeth has no kernel.
        let comb = SimplePolygon::new(pts(&[(0, 0), (6, 0), (6, 4), (5, 4), (5, 1), (1, 1), (1, 4), (0, 4)])).unwrap();
        assert!(kernel(&comb).is_empty());
    }

    #[test]
    fn degenerate_single_point_kernel() {
        // Two notches whose supporting lines meet in exactly one point.
        let p = SimplePolygon::new(pts(&[(0, 0), (4, 0), (4, 4), (3, 4), (2, 2), (1, 4), (0, 4)])).unwrap();
        let k = kernel(&p);
        assert!(!k.is_empty());
        let kp = k.point().unwrap();
        assert!(wall_view(&p, &kp).unwrap().covers_all());
    }

    #[test]
    fn lshape_convex_cover() {
        let l = lshape();
        let cands = convex_cover_candidates(&l);
        assert_eq!(cands, vec![Point::int(4, 2), Point::int(2, 4)]);
        let cert = convex_cover_certificate(&l).unwrap();
        assert_eq!(cert.len(), 2);
        for p in &cert {
            assert!(view_is_convex(&l, p).unwrap());
        }
    }

    #[test]
    fn boundary_site_views() {
        let l = lshape();
        // Site at the reflex corner sees everything.
        let v = visibility_polygon(&l, &Point::int(2, 2)).unwrap();
        assert!(v.polygon.same_loop(&l));
        // Site at the far end of the upper arm.
        let v = visibility_polygon(&l, &Point::int(1, 4)).unwrap();
        assert!(v.walls.measure() < q(6));
        assert!(v.contains(&Point::int(0, 0)));
        assert!(!v.contains(&Point::frac(39, 10, 1, 10)));
    }
}
