//! Brute-force checks that share as little as possible with the main
//! pipeline: their own point classification, segment visibility, wall views
//! and interval merging.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arrangement::Arrangement;
use crate::decomposition::{build_decomposition, build_windows, feasible_pairs, GuardSiteSet, SiteSet};
use crate::geom::{half, Point, Q};
use crate::polygon::SimplePolygon;

fn cross(o: &Point, a: &Point, b: &Point) -> Q {
    (&a.x - &o.x) * (&b.y - &o.y) - (&a.y - &o.y) * (&b.x - &o.x)
}

fn on_edge(a: &Point, b: &Point, p: &Point) -> bool {
    cross(a, b, p).is_zero()
        && (&p.x - &a.x) * (&p.x - &b.x) <= Q::zero()
        && (&p.y - &a.y) * (&p.y - &b.y) <= Q::zero()
}

/// Winding-number test: true iff `p` is inside or on the boundary.
pub fn in_closed(poly: &SimplePolygon, p: &Point) -> bool {
    let v = poly.vertices();
    let n = v.len();
    let mut winding = 0i64;
    for i in 0..n {
        let (a, b) = (&v[i], &v[(i + 1) % n]);
        if on_edge(a, b, p) {
            return true;
        }
        if a.y <= p.y {
            if b.y > p.y && cross(a, b, p).is_positive() {
                winding += 1;
            }
        } else if b.y <= p.y && cross(a, b, p).is_negative() {
            winding -= 1;
        }
    }
    winding != 0
}

/// Strictly inside, by the same winding test.
pub fn in_open(poly: &SimplePolygon, p: &Point) -> bool {
    let v = poly.vertices();
    let n = v.len();
    !(0..n).any(|i| on_edge(&v[i], &v[(i + 1) % n], p)) && in_closed(poly, p)
}

/// Closed visibility by brute force: cut `pq` wherever it meets the line of
/// any edge and test the midpoint of every piece.
pub fn naive_visible(poly: &SimplePolygon, p: &Point, q: &Point) -> bool {
    if p == q {
        return true;
    }
    let d = q.sub(p);
    let v = poly.vertices();
    let n = v.len();
    let mut ts: Vec<Q> = vec![Q::zero(), Q::one()];
    for i in 0..n {
        let (a, b) = (&v[i], &v[(i + 1) % n]);
        let e = b.sub(a);
        let den = d.cross(&e);
        if den.is_zero() {
            // Parallel: only the edge endpoints can matter.
            for c in [a, b] {
                if cross(p, q, c).is_zero() {
                    let t = if d.x.is_zero() { (&c.y - &p.y) / &d.y } else { (&c.x - &p.x) / &d.x };
                    if t > Q::zero() && t < Q::one() {
                        ts.push(t);
                    }
                }
            }
        } else {
            let t = a.sub(p).cross(&e) / &den;
            if t > Q::zero() && t < Q::one() {
                ts.push(t);
            }
        }
    }
    ts.sort();
    ts.dedup();
    let h = half();
    ts.windows(2).all(|w| {
        let t = (&w[0] + &w[1]) * &h;
        in_closed(poly, &p.add(&d.scale(&t)))
    }) && in_closed(poly, p)
        && in_closed(poly, q)
}

/// Wall portions visible from `p`, as sorted disjoint closed intervals on
/// `[0, n]` (merged naively; the wrap point is not fused).
pub fn oracle_wall_view(poly: &SimplePolygon, p: &Point) -> Vec<(Q, Q)> {
    let v = poly.vertices();
    let n = v.len();
    let h = half();
    let mut out: Vec<(Q, Q)> = Vec::new();
    for i in 0..n {
        let (a, b) = (&v[i], &v[(i + 1) % n]);
        let e = b.sub(a);
        let mut ts: Vec<Q> = vec![Q::zero(), Q::one()];
        for w in v {
            if w == p {
                continue;
            }
            let dw = w.sub(p);
            let den = e.cross(&dw);
            if !den.is_zero() {
                // a + t e on the line through p and w.
                let t = p.sub(a).cross(&dw) / den;
                if t > Q::zero() && t < Q::one() {
                    ts.push(t);
                }
            }
        }
        if cross(a, b, p).is_zero() {
            let t = if e.x.is_zero() { (&p.y - &a.y) / &e.y } else { (&p.x - &a.x) / &e.x };
            if t > Q::zero() && t < Q::one() {
                ts.push(t);
            }
        }
        ts.sort();
        ts.dedup();
        let base = Q::from_integer(BigInt::from(i));
        let at = |t: &Q| a.add(&e.scale(t));
        for k in 0..ts.len() {
            if naive_visible(poly, p, &at(&ts[k])) {
                out.push((&base + &ts[k], &base + &ts[k]));
            }
            if k + 1 < ts.len() {
                let mid = (&ts[k] + &ts[k + 1]) * &h;
                if naive_visible(poly, p, &at(&mid)) {
                    out.push((&base + &ts[k], &base + &ts[k + 1]));
                }
            }
        }
    }
    naive_merge(out)
}

/// Repeatedly fuses any two overlapping or touching intervals.
pub fn naive_merge(mut items: Vec<(Q, Q)>) -> Vec<(Q, Q)> {
    loop {
        let mut fused = false;
        'outer: for i in 0..items.len() {
            for j in (i + 1)..items.len() {
                let (a, b) = (&items[i], &items[j]);
                if a.0 <= b.1 && b.0 <= a.1 {
                    let lo = if a.0 < b.0 { a.0.clone() } else { b.0.clone() };
                    let hi = if a.1 > b.1 { a.1.clone() } else { b.1.clone() };
                    items[i] = (lo, hi);
                    items.swap_remove(j);
                    fused = true;
                    break 'outer;
                }
            }
        }
        if !fused {
            break;
        }
    }
    items.sort();
    items
}

pub fn naive_measure(items: &[(Q, Q)]) -> Q {
    naive_merge(items.to_vec()).iter().fold(Q::zero(), |acc, (a, b)| acc + (b - a))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{sites} sites exceed the brute-force cap of {cap}")]
    CapExceeded { sites: usize, cap: usize },
}

pub const DEFAULT_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForceResult {
    pub normal: bool,
    /// First failing subset in (size, index order), with a hidden point.
    pub witness: Option<(SiteSet, Point)>,
    /// Number of candidate interior points examined per subset.
    pub candidates: usize,
}

/// Interior points at which hidden regions are looked for: one per cell of the
/// region decomposition; if that cannot be built, the cells cut by whatever
/// windows exist plus a sample grid.
pub fn candidate_points(poly: &SimplePolygon, sites: &GuardSiteSet, grid: usize) -> Vec<Point> {
    if let Ok(d) = build_decomposition(poly, sites) {
        return d.regions.iter().map(|r| r.representative.clone()).collect();
    }
    let pairs = feasible_pairs(poly, sites);
    let segs: Vec<_> = pairs
        .iter()
        .filter_map(|p| build_windows(poly, sites, &[*p]).ok())
        .flatten()
        .map(|w| w.segment())
        .collect();
    let arr = Arrangement::build(poly, &segs);
    let mut pts: Vec<Point> = arr.cells.iter().map(|c| c.representative()).collect();
    pts.extend(SampleGrid::new(poly, grid).points.into_iter().map(|g| g.point));
    pts
}

/// Tries every nonempty subset of the sites.
pub fn brute_force_normal_wrt(
    poly: &SimplePolygon,
    sites: &GuardSiteSet,
    cap: usize,
    grid: usize,
) -> Result<BruteForceResult, OracleError> {
    let m = sites.len();
    if m > cap {
        return Err(OracleError::CapExceeded { sites: m, cap });
    }
    let views: Vec<Vec<(Q, Q)>> = sites.sites().iter().map(|s| oracle_wall_view(poly, &s.point)).collect();
    let candidates = candidate_points(poly, sites, grid);
    let seen_by: Vec<u64> = candidates
        .iter()
        .map(|c| {
            (0..m)
                .filter(|&i| naive_visible(poly, &sites.get(i).point, c))
                .fold(0u64, |acc, i| acc | (1 << i))
        })
        .collect();
    let period = Q::from_integer(BigInt::from(poly.n()));
    for mask in subsets_by_size(m) {
        let hidden = seen_by.iter().position(|s| s & mask == 0);
        let Some(h) = hidden else { continue };
        let items: Vec<(Q, Q)> = (0..m).filter(|i| mask >> i & 1 == 1).flat_map(|i| views[i].clone()).collect();
        if naive_measure(&items) == period {
            let set = SiteSet::from_indices(m, (0..m).filter(|i| mask >> i & 1 == 1));
            return Ok(BruteForceResult {
                normal: false,
                witness: Some((set, candidates[h].clone())),
                candidates: candidates.len(),
            });
        }
    }
    Ok(BruteForceResult { normal: true, witness: None, candidates: candidates.len() })
}

/// Nonempty subsets of `0..m` as bitmasks, by size and then lexicographically
/// by sorted index list.
pub fn subsets_by_size(m: usize) -> impl Iterator<Item = u64> {
    (1..=m).flat_map(move |k| Combinations::new(m, k).map(|c| c.iter().fold(0u64, |a, &i| a | (1 << i))))
}

/// `k`-subsets of `0..m` in lexicographic order.
pub struct Combinations {
    m: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(m: usize, k: usize) -> Self {
        Combinations { m, idx: (0..k).collect(), done: k > m }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.m - k + i {
                self.idx[i] += 1;
                for j in (i + 1)..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[derive(Clone, Debug)]
pub struct GridPoint {
    pub i: usize,
    pub j: usize,
    pub point: Point,
}

/// Centres of a `k` by `k` grid over the bounding box, kept if strictly
/// inside the gallery.
#[derive(Clone, Debug)]
pub struct SampleGrid {
    pub k: usize,
    pub origin: Point,
    pub pitch: Point,
    pub points: Vec<GridPoint>,
}

impl SampleGrid {
    pub fn new(poly: &SimplePolygon, k: usize) -> Self {
        assert!(k > 0, "grid resolution must be positive");
        let (lo, hi) = poly.bbox();
        let kq = Q::from_integer(BigInt::from(k));
        let pitch = Point::new((&hi.x - &lo.x) / &kq, (&hi.y - &lo.y) / &kq);
        let lattice = Lattice::new(poly, &[], 2 * k);
        let h = half();
        let mut points = Vec::new();
        for j in 0..k {
            for i in 0..k {
                let fi = Q::from_integer(BigInt::from(i)) + &h;
                let fj = Q::from_integer(BigInt::from(j)) + &h;
                let p = Point::new(&lo.x + &pitch.x * fi, &lo.y + &pitch.y * fj);
                let inside = match &lattice {
                    Some(l) => l.inside_open(&l.scale(&p)),
                    None => in_open(poly, &p),
                };
                if inside {
                    points.push(GridPoint { i, j, point: p });
                }
            }
        }
        SampleGrid { k, origin: lo, pitch, points }
    }
}

/// Grid points hidden from every guard, grouped by 4-neighbour adjacency.
/// Components are ordered by their first point in row-major order.
pub fn hidden_components(poly: &SimplePolygon, guards: &[Point], grid: &SampleGrid) -> Vec<Vec<Point>> {
    let lattice = Lattice::new(poly, guards, 2 * grid.k);
    let k = grid.k;
    let mut hidden = vec![None; k * k];
    for (n, g) in grid.points.iter().enumerate() {
        let seen = match &lattice {
            Some(l) => {
                let gp = l.scale(&g.point);
                guards.iter().any(|s| l.visible(&l.scale(s), &gp))
            }
            None => guards.iter().any(|s| naive_visible(poly, s, &g.point)),
        };
        if !seen {
            hidden[g.j * k + g.i] = Some(n);
        }
    }
    let mut comps = Vec::new();
    let mut visited = vec![false; k * k];
    for start in 0..k * k {
        if hidden[start].is_none() || visited[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut queue = VecDeque::from([start]);
        visited[start] = true;
        while let Some(c) = queue.pop_front() {
            comp.push(grid.points[hidden[c].expect("hidden cell")].point.clone());
            let (i, j) = (c % k, c / k);
            let mut nbrs = Vec::with_capacity(4);
            if i > 0 {
                nbrs.push(c - 1);
            }
            if i + 1 < k {
                nbrs.push(c + 1);
            }
            if j > 0 {
                nbrs.push(c - k);
            }
            if j + 1 < k {
                nbrs.push(c + k);
            }
            for nb in nbrs {
                if hidden[nb].is_some() && !visited[nb] {
                    visited[nb] = true;
                    queue.push_back(nb);
                }
            }
        }
        comps.push(comp);
    }
    comps
}

type IPt = (i128, i128);

fn icross(o: IPt, a: IPt, b: IPt) -> i128 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// The gallery rescaled to integer coordinates, for fast exact tests on
/// many lattice points. Visibility here is decided by proper crossings and
/// the interior angle at every boundary point the segment touches.
pub struct Lattice {
    scale: BigInt,
    v: Vec<IPt>,
}

const LATTICE_LIMIT: i128 = 1 << 60;

impl Lattice {
    /// Scales by the least common multiple of all denominators and `extra`;
    /// `None` if coordinates would grow too large for 128-bit products.
    pub fn new(poly: &SimplePolygon, points: &[Point], extra: usize) -> Option<Lattice> {
        let (lo, hi) = poly.bbox();
        let mut l = BigInt::one();
        for p in poly.vertices().iter().chain(points).chain([&lo, &hi]) {
            l = l.lcm(p.x.denom()).lcm(p.y.denom());
        }
        let mut lat = Lattice { scale: l * BigInt::from(extra.max(1)), v: Vec::new() };
        let mut v = Vec::with_capacity(poly.n());
        for p in poly.vertices() {
            v.push(lat.try_scale(p)?);
        }
        for p in points {
            lat.try_scale(p)?;
        }
        lat.v = v;
        Some(lat)
    }

    fn try_scale(&self, p: &Point) -> Option<IPt> {
        let conv = |c: &Q| -> Option<i128> {
            let s = c * Q::from_integer(self.scale.clone());
            if !s.is_integer() {
                return None;
            }
            let r = s.to_integer().to_i128()?;
            (r.abs() < LATTICE_LIMIT).then_some(r)
        };
        Some((conv(&p.x)?, conv(&p.y)?))
    }

    /// Scaled coordinates of a point whose denominators divide the scale.
    pub fn scale(&self, p: &Point) -> IPt {
        self.try_scale(p).expect("point fits the lattice")
    }

    fn on_edge(a: IPt, b: IPt, p: IPt) -> bool {
        icross(a, b, p) == 0 && (p.0 - a.0) * (p.0 - b.0) <= 0 && (p.1 - a.1) * (p.1 - b.1) <= 0
    }

    pub fn inside_closed(&self, p: &IPt) -> bool {
        let n = self.v.len();
        let mut w = 0i64;
        for i in 0..n {
            let (a, b) = (self.v[i], self.v[(i + 1) % n]);
            if Self::on_edge(a, b, *p) {
                return true;
            }
            if a.1 <= p.1 {
                if b.1 > p.1 && icross(a, b, *p) > 0 {
                    w += 1;
                }
            } else if b.1 <= p.1 && icross(a, b, *p) < 0 {
                w -= 1;
            }
        }
        w != 0
    }

    pub fn inside_open(&self, p: &IPt) -> bool {
        let n = self.v.len();
        !(0..n).any(|i| Self::on_edge(self.v[i], self.v[(i + 1) % n], *p)) && self.inside_closed(p)
    }

    /// Direction `d` leaves `v[i]` into the closed interior angle.
    fn in_cone(&self, i: usize, d: IPt) -> bool {
        let n = self.v.len();
        let v = self.v[i];
        let u = self.v[(i + n - 1) % n];
        let w = self.v[(i + 1) % n];
        let o = (0, 0);
        let to_next = (w.0 - v.0, w.1 - v.1);
        let to_prev = (u.0 - v.0, u.1 - v.1);
        let a = icross(o, to_next, d) >= 0;
        let b = icross(o, d, to_prev) >= 0;
        if icross(u, v, w) > 0 {
            a && b
        } else {
            a || b
        }
    }

    /// Closed visibility between two points of the closed gallery.
    pub fn visible(&self, p: &IPt, q: &IPt) -> bool {
        if p == q {
            return true;
        }
        let n = self.v.len();
        for i in 0..n {
            let (a, b) = (self.v[i], self.v[(i + 1) % n]);
            let o1 = icross(*p, *q, a).signum();
            let o2 = icross(*p, *q, b).signum();
            let o3 = icross(a, b, *p).signum();
            let o4 = icross(a, b, *q).signum();
            if o1 * o2 < 0 && o3 * o4 < 0 {
                return false;
            }
        }
        for i in 0..n {
            let v = self.v[i];
            if !Self::on_edge(*p, *q, v) {
                continue;
            }
            if v != *p && !self.in_cone(i, (p.0 - v.0, p.1 - v.1)) {
                return false;
            }
            if v != *q && !self.in_cone(i, (q.0 - v.0, q.1 - v.1)) {
                return false;
            }
        }
        for (from, to) in [(p, q), (q, p)] {
            if self.v.contains(from) {
                continue;
            }
            for i in 0..n {
                let (a, b) = (self.v[i], self.v[(i + 1) % n]);
                if Self::on_edge(a, b, *from) {
                    let e = (b.0 - a.0, b.1 - a.1);
                    let d = (to.0 - from.0, to.1 - from.1);
                    if icross((0, 0), e, d) < 0 {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::q;
    use crate::polygon::tests::{lshape, pts, square};

    #[test]
    fn naive_visible_examples() {
        let l = lshape();
        assert!(naive_visible(&l, &Point::int(0, 0), &Point::int(4, 2)));
        assert!(!naive_visible(&l, &Point::int(4, 1), &Point::int(1, 4)));
        assert!(naive_visible(&l, &Point::int(3, 1), &Point::int(3, 1)));
        // Grazing the reflex corner.
        assert!(naive_visible(&l, &Point::int(4, 2), &Point::int(0, 2)));
        assert!(naive_visible(&l, &Point::int(2, 0), &Point::int(2, 4)));
    }

    #[test]
    fn oracle_wall_views() {
        let l = lshape();
        assert_eq!(naive_measure(&oracle_wall_view(&l, &Point::int(0, 0))), q(6));
        let v = oracle_wall_view(&l, &Point::int(4, 1));
        assert_eq!(v, vec![(q(0), q(3)), (crate::geom::qf(21, 4), q(6))]);
    }

    #[test]
    fn merge_is_naive_union() {
        let m = naive_merge(vec![(q(2), q(3)), (q(0), q(1)), (q(1), q(2)), (q(5), q(5))]);
        assert_eq!(m, vec![(q(0), q(3)), (q(5), q(5))]);
    }

    #[test]
    fn combinations_in_order() {
        let all: Vec<Vec<usize>> = Combinations::new(4, 2).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(subsets_by_size(3).collect::<Vec<_>>(), vec![1, 2, 4, 3, 5, 6, 7]);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }

    #[test]
    fn lattice_matches_naive() {
        let l = lshape();
        let lat = Lattice::new(&l, &[], 8).unwrap();
        let mut probes = Vec::new();
        for x in 0..=8 {
            for y in 0..=8 {
                let p = Point::frac(x, 2, y, 2);
                if in_closed(&l, &p) {
                    probes.push(p);
                }
            }
        }
        for a in &probes {
            for b in &probes {
                assert_eq!(
                    lat.visible(&lat.scale(a), &lat.scale(b)),
                    naive_visible(&l, a, b),
                    "{a:?} {b:?}"
                );
            }
        }
    }

    #[test]
    fn square_is_normal() {
        let s = square();
        let a = GuardSiteSet::from_points(&s, pts(&[(1, 1), (0, 0), (4, 3)])).unwrap();
        let r = brute_force_normal_wrt(&s, &a, DEFAULT_CAP, 16).unwrap();
        assert!(r.normal);
    }

    #[test]
    fn cap_is_enforced() {
        let s = square();
        let pts: Vec<Point> = (0..13).map(|i| Point::frac(i + 1, 4, 1, 1)).collect();
        let a = GuardSiteSet::from_points(&s, pts).unwrap();
        assert_eq!(
            brute_force_normal_wrt(&s, &a, DEFAULT_CAP, 8),
            Err(OracleError::CapExceeded { sites: 13, cap: 12 })
        );
    }

    #[test]
    fn grid_components() {
        let l = lshape();
        let grid = SampleGrid::new(&l, 8);
        assert_eq!(grid.points.len(), 48);
        assert!(hidden_components(&l, &[Point::int(0, 0)], &grid).is_empty());
        let comps = hidden_components(&l, &[Point::int(4, 1)], &grid);
        assert_eq!(comps.len(), 1);
    }
}
