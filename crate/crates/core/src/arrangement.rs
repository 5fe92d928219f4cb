//! Vertical trapezoidal decomposition of a polygon interior cut by extra
//! segments (windows, view chords).
//!
//! The x-axis is split into open slabs at every segment endpoint and every
//! pairwise intersection, so no two segments cross inside a slab. Within a
//! slab the spanning segments are totally ordered by height and the gaps
//! between consecutive ones are the cells. Cells in neighbouring slabs are
//! linked when they share a stretch of the slab boundary that no vertical
//! segment covers; cells on opposite sides of an extra segment are recorded
//! as contacts instead.

use num_traits::Zero;

use crate::geom::{half, intersect_segments, Point, Segment, SegmentIntersection, Q};
use crate::polygon::SimplePolygon;

/// One trapezoid between two segments over a slab `[x0, x1]`.
#[derive(Clone, Debug)]
pub struct Cell {
    pub slab: usize,
    pub lower: usize,
    pub upper: usize,
    pub x0: Q,
    pub x1: Q,
    pub lo0: Q,
    pub hi0: Q,
    pub lo1: Q,
    pub hi1: Q,
}

impl Cell {
    pub fn area(&self) -> Q {
        (&self.x1 - &self.x0) * ((&self.hi0 - &self.lo0) + (&self.hi1 - &self.lo1)) * half()
    }

    /// Centre of the vertical midline; equal to the average of the four
    /// corners, and strictly inside the cell.
    pub fn representative(&self) -> Point {
        let h = half();
        let x = (&self.x0 + &self.x1) * &h;
        let lo = (&self.lo0 + &self.lo1) * &h;
        let hi = (&self.hi0 + &self.hi1) * &h;
        Point::new(x, (lo + hi) * h)
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            Point::new(self.x0.clone(), self.lo0.clone()),
            Point::new(self.x1.clone(), self.lo1.clone()),
            Point::new(self.x1.clone(), self.hi1.clone()),
            Point::new(self.x0.clone(), self.hi0.clone()),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contact {
    pub first: usize,
    pub second: usize,
    /// Indices into the extra segments (not the wall list).
    pub separators: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    pub walls: usize,
    pub segments: Vec<Segment>,
    pub xs: Vec<Q>,
    pub cells: Vec<Cell>,
    /// Pairs of cells in the same face.
    pub links: Vec<(usize, usize)>,
    /// Pairs of cells on opposite sides of extra segments.
    pub contacts: Vec<Contact>,
}

struct Vertical {
    lo: Q,
    hi: Q,
    seg: usize,
}

fn y_at(s: &Segment, x: &Q) -> Q {
    let t = (x - &s.a.x) / (&s.b.x - &s.a.x);
    &s.a.y + (&s.b.y - &s.a.y) * t
}

fn x_range(s: &Segment) -> (&Q, &Q) {
    if s.a.x <= s.b.x {
        (&s.a.x, &s.b.x)
    } else {
        (&s.b.x, &s.a.x)
    }
}

impl Arrangement {
    /// Decomposes the interior of `poly` cut by `extras`. Extras must lie in
    /// the closed polygon.
    pub fn build(poly: &SimplePolygon, extras: &[Segment]) -> Arrangement {
        let walls = poly.n();
        let mut segments: Vec<Segment> = poly.edges().collect();
        segments.extend(extras.iter().cloned());

        let mut xs: Vec<Q> = Vec::new();
        for s in &segments {
            xs.push(s.a.x.clone());
            xs.push(s.b.x.clone());
        }
        for i in 0..segments.len() {
            for j in (i + 1)..segments.len() {
                if i < walls && j < walls {
                    continue;
                }
                match intersect_segments(&segments[i], &segments[j]) {
                    SegmentIntersection::Empty => {}
                    SegmentIntersection::Point(p) => xs.push(p.x),
                    SegmentIntersection::Overlap(o) => {
                        xs.push(o.a.x);
                        xs.push(o.b.x);
                    }
                }
            }
        }
        xs.sort();
        xs.dedup();

        let mut verticals: Vec<Vec<Vertical>> = (0..xs.len()).map(|_| Vec::new()).collect();
        for (k, s) in segments.iter().enumerate() {
            if s.a.x == s.b.x {
                let i = xs.binary_search(&s.a.x).expect("endpoint x is an event");
                let (lo, hi) = if s.a.y <= s.b.y { (&s.a.y, &s.b.y) } else { (&s.b.y, &s.a.y) };
                verticals[i].push(Vertical { lo: lo.clone(), hi: hi.clone(), seg: k });
            }
        }

        let mut cells: Vec<Cell> = Vec::new();
        let mut contacts: Vec<Contact> = Vec::new();
        let mut slab_cells: Vec<std::ops::Range<usize>> = Vec::with_capacity(xs.len().saturating_sub(1));
        for slab in 0..xs.len().saturating_sub(1) {
            let (x0, x1) = (&xs[slab], &xs[slab + 1]);
            let mut active: Vec<(Q, Q, usize)> = segments
                .iter()
                .enumerate()
                .filter(|(_, s)| {
                    let (l, r) = x_range(s);
                    l <= x0 && r >= x1 && l != r
                })
                .map(|(k, s)| (y_at(s, x0), y_at(s, x1), k))
                .collect();
            active.sort_by(|a, b| (&a.0 + &a.1).cmp(&(&b.0 + &b.1)).then(a.2.cmp(&b.2)));

            let start = cells.len();
            let mut walls_below = 0usize;
            let mut pending_separators: Vec<usize> = Vec::new();
            let mut last_interior: Option<usize> = None;
            for w in 0..active.len() {
                let (ref l0, ref l1, lk) = active[w];
                if lk < walls {
                    walls_below += 1;
                    pending_separators.clear();
                    last_interior = None;
                } else {
                    pending_separators.push(lk - walls);
                }
                let Some((u0, u1, uk)) = active.get(w + 1) else { break };
                if u0 == l0 && u1 == l1 {
                    // Coincident segments leave no gap.
                    continue;
                }
                if walls_below % 2 == 1 {
                    let id = cells.len();
                    cells.push(Cell {
                        slab,
                        lower: lk,
                        upper: *uk,
                        x0: x0.clone(),
                        x1: x1.clone(),
                        lo0: l0.clone(),
                        hi0: u0.clone(),
                        lo1: l1.clone(),
                        hi1: u1.clone(),
                    });
                    if let Some(prev) = last_interior {
                        if !pending_separators.is_empty() {
                            contacts.push(Contact {
                                first: prev,
                                second: id,
                                separators: std::mem::take(&mut pending_separators),
                            });
                        }
                    }
                    last_interior = Some(id);
                    pending_separators.clear();
                }
            }
            slab_cells.push(start..cells.len());
        }

        let mut links: Vec<(usize, usize)> = Vec::new();
        for b in 1..slab_cells.len() {
            let left = slab_cells[b - 1].clone();
            let right = slab_cells[b].clone();
            let vs = &verticals[b];
            for li in left.clone() {
                for ri in right.clone() {
                    let (lc, rc) = (&cells[li], &cells[ri]);
                    let lo = if lc.lo1 > rc.lo0 { &lc.lo1 } else { &rc.lo0 };
                    let hi = if lc.hi1 < rc.hi0 { &lc.hi1 } else { &rc.hi0 };
                    if lo >= hi {
                        continue;
                    }
                    let (open, covering) = uncovered(lo, hi, vs, walls);
                    if open {
                        links.push((li, ri));
                    }
                    if !covering.is_empty() {
                        contacts.push(Contact { first: li, second: ri, separators: covering });
                    }
                }
            }
        }

        Arrangement { walls, segments, xs, cells, links, contacts }
    }

    pub fn total_area(&self) -> Q {
        self.cells.iter().fold(Q::zero(), |acc, c| acc + c.area())
    }
}

/// Whether `(lo, hi)` keeps a positive-length stretch outside every vertical
/// segment, and which extra segments cover part of it.
fn uncovered(lo: &Q, hi: &Q, vs: &[Vertical], walls: usize) -> (bool, Vec<usize>) {
    let mut spans: Vec<(Q, Q)> = Vec::new();
    let mut covering = Vec::new();
    for v in vs {
        let a = if &v.lo > lo { &v.lo } else { lo };
        let b = if &v.hi < hi { &v.hi } else { hi };
        if a < b {
            spans.push((a.clone(), b.clone()));
            if v.seg >= walls {
                covering.push(v.seg - walls);
            }
        }
    }
    spans.sort();
    let mut cursor = lo.clone();
    for (a, b) in spans {
        if a > cursor {
            return (true, covering);
        }
        if b > cursor {
            cursor = b;
        }
    }
    (&cursor < hi, covering)
}

/// Disjoint-set forest over cell indices.
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Joins the two sets, keeping the smaller root.
    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Faces of an arrangement: cells grouped by links, numbered by their
/// smallest cell.
pub fn faces(arr: &Arrangement) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut uf = UnionFind::new(arr.cells.len());
    for &(a, b) in &arr.links {
        uf.union(a, b);
    }
    let mut face_of = vec![usize::MAX; arr.cells.len()];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for c in 0..arr.cells.len() {
        let root = uf.find(c);
        if face_of[root] == usize::MAX {
            face_of[root] = members.len();
            members.push(Vec::new());
        }
        let f = face_of[root];
        face_of[c] = f;
        members[f].push(c);
    }
    (face_of, members)
}

/// Exact convex hull (counter-clockwise, no collinear points).
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    use crate::geom::{orient, Sign};
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p) != Sign::Positive {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p) != Sign::Positive {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// True iff the union of the given cells has a convex closure: the union's
/// area equals the area of the hull of the cell corners.
pub fn cells_form_convex_set(arr: &Arrangement, cells: &[usize]) -> bool {
    let mut pts = Vec::new();
    let mut area = Q::zero();
    for &c in cells {
        pts.extend(arr.cells[c].corners());
        area += arr.cells[c].area();
    }
    let hull = convex_hull(&pts);
    if hull.len() < 3 {
        return false;
    }
    crate::geom::signed_area2(&hull) * half() == area
}
