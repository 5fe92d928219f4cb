//! Windows cast by sites past reflex corners, the regions they cut the
//! gallery into, and which sites see each region.

use std::collections::HashSet;
use std::fmt;

use num_traits::Zero;

use crate::arrangement::{faces, Arrangement};
use crate::geom::{intersect_segments, orient, Point, Segment, SegmentIntersection, Q};
use crate::polygon::{BoundaryPos, PolygonError, SimplePolygon};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Site {
    pub name: String,
    pub point: Point,
}

impl Site {
    pub fn new(name: impl Into<String>, point: Point) -> Self {
        Site { name: name.into(), point }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SiteError {
    #[error("site {name} at {point} lies outside the gallery")]
    Outside { name: String, point: Point },
    #[error("site name {0} is used twice")]
    DuplicateName(String),
    #[error("sites {first} and {second} share the point {point}")]
    DuplicateCoordinate { first: String, second: String, point: Point },
}

/// Ordered, named candidate positions for guards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardSiteSet {
    sites: Vec<Site>,
}

impl GuardSiteSet {
    pub fn new(poly: &SimplePolygon, sites: Vec<Site>) -> Result<Self, SiteError> {
        let mut names = HashSet::new();
        for (i, s) in sites.iter().enumerate() {
            if !poly.contains_closed(&s.point) {
                return Err(SiteError::Outside { name: s.name.clone(), point: s.point.clone() });
            }
            if !names.insert(s.name.as_str()) {
                return Err(SiteError::DuplicateName(s.name.clone()));
            }
            if let Some(t) = sites[..i].iter().find(|t| t.point == s.point) {
                return Err(SiteError::DuplicateCoordinate {
                    first: t.name.clone(),
                    second: s.name.clone(),
                    point: s.point.clone(),
                });
            }
        }
        Ok(GuardSiteSet { sites })
    }

    /// Sites named `s1`, `s2`, ... in the given order.
    pub fn from_points(poly: &SimplePolygon, points: Vec<Point>) -> Result<Self, SiteError> {
        let sites = points
            .into_iter()
            .enumerate()
            .map(|(i, p)| Site::new(format!("s{}", i + 1), p))
            .collect();
        GuardSiteSet::new(poly, sites)
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn get(&self, i: usize) -> &Site {
        &self.sites[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.sites.iter().position(|s| s.name == name)
    }

    pub fn points(&self) -> Vec<Point> {
        self.sites.iter().map(|s| s.point.clone()).collect()
    }

    /// Points of the sites in `set`, in index order.
    pub fn points_of(&self, set: &SiteSet) -> Vec<Point> {
        set.iter().map(|i| self.sites[i].point.clone()).collect()
    }

    pub fn names_of(&self, set: &SiteSet) -> Vec<String> {
        set.iter().map(|i| self.sites[i].name.clone()).collect()
    }

    /// The subset with the given names; `None` if a name is unknown.
    pub fn subset(&self, names: &[&str]) -> Option<SiteSet> {
        let mut s = SiteSet::empty(self.len());
        for n in names {
            s.insert(self.index_of(n)?);
        }
        Some(s)
    }
}

/// A subset of site indices, stored as a bitset over a fixed universe.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SiteSet {
    universe: usize,
    words: Vec<u64>,
}

impl SiteSet {
    pub fn empty(universe: usize) -> Self {
        SiteSet { universe, words: vec![0; universe.div_ceil(64)] }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = SiteSet::empty(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(universe: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut s = SiteSet::empty(universe);
        for i in idx {
            s.insert(i);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.universe, "site index {i} out of range");
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn is_subset(&self, other: &SiteSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn complement(&self) -> SiteSet {
        SiteSet::from_indices(self.universe, (0..self.universe).filter(|&i| !self.contains(i)))
    }

    pub fn intersects(&self, other: &SiteSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&i| self.contains(i))
    }
}

impl fmt::Debug for SiteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Site `site` sees reflex corner `base` with both walls at the corner on
/// one closed side of the sight line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeasiblePair {
    pub site: usize,
    pub base: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub pair: FeasiblePair,
    pub base: Point,
    pub tip: Point,
    pub tip_pos: BoundaryPos,
}

impl Window {
    pub fn segment(&self) -> Segment {
        Segment { a: self.base.clone(), b: self.tip.clone() }
    }
}

pub fn feasible_pairs(poly: &SimplePolygon, sites: &GuardSiteSet) -> Vec<FeasiblePair> {
    let mut out = Vec::new();
    for (s, site) in sites.sites().iter().enumerate() {
        let p = &site.point;
        for c in poly.reflex_corners() {
            let corner = poly.vertex(c);
            if p == corner || !poly.segment_inside_unchecked(p, corner) {
                continue;
            }
            let a = orient(p, corner, poly.vertex(poly.prev(c)));
            let b = orient(p, corner, poly.vertex(poly.next(c)));
            if a.as_i8() * b.as_i8() >= 0 {
                out.push(FeasiblePair { site: s, base: c });
            }
        }
    }
    out
}

/// Problems that break the assumptions the region construction relies on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    /// Two windows on one line whose spans overlap in more than a point.
    CollinearWindows { first: FeasiblePair, second: FeasiblePair },
    /// A site sits strictly inside a window cast by another site.
    SiteOnWindow { site: usize, window: FeasiblePair },
    /// The window ray runs along a wall or finds no hit.
    DegenerateWindow { pair: FeasiblePair, reason: PolygonError },
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degeneracy::CollinearWindows { first, second } => write!(
                f,
                "windows (site {}, corner {}) and (site {}, corner {}) overlap on one line",
                first.site, first.base, second.site, second.base
            ),
            Degeneracy::SiteOnWindow { site, window } => write!(
                f,
                "site {} lies on the window of (site {}, corner {})",
                site, window.site, window.base
            ),
            Degeneracy::DegenerateWindow { pair, reason } => {
                write!(f, "window of (site {}, corner {}) is degenerate: {}", pair.site, pair.base, reason)
            }
        }
    }
}

/// Inputs worth flagging that do not block the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Note {
    /// A boundary site on a wall ending at the base corner of its window.
    SiteOnBaseWall { pair: FeasiblePair },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegeneracyReport {
    pub violations: Vec<Degeneracy>,
    pub notes: Vec<Note>,
}

impl DegeneracyReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for DegeneracyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "general position");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// One window per pair, shot from the base corner away from the site.
pub fn build_windows(
    poly: &SimplePolygon,
    sites: &GuardSiteSet,
    pairs: &[FeasiblePair],
) -> Result<Vec<Window>, Degeneracy> {
    pairs
        .iter()
        .map(|&pair| {
            let base = poly.vertex(pair.base).clone();
            let dir = base.sub(&sites.get(pair.site).point);
            match poly.ray_shoot(&base, &dir) {
                Ok((tip, tip_pos)) => Ok(Window { pair, base, tip, tip_pos }),
                Err(reason) => Err(Degeneracy::DegenerateWindow { pair, reason }),
            }
        })
        .collect()
}

pub fn check_general_position(poly: &SimplePolygon, sites: &GuardSiteSet, windows: &[Window]) -> DegeneracyReport {
    let mut report = DegeneracyReport::default();
    let segs: Vec<Segment> = windows.iter().map(Window::segment).collect();
    for i in 0..windows.len() {
        for j in (i + 1)..windows.len() {
            if let SegmentIntersection::Overlap(_) = intersect_segments(&segs[i], &segs[j]) {
                report.violations.push(Degeneracy::CollinearWindows {
                    first: windows[i].pair,
                    second: windows[j].pair,
                });
            }
        }
    }
    for w in windows {
        let seg = &segs[windows.iter().position(|x| x == w).expect("own window")];
        for (s, site) in sites.sites().iter().enumerate() {
            if s != w.pair.site && seg.contains_strictly(&site.point) {
                report.violations.push(Degeneracy::SiteOnWindow { site: s, window: w.pair });
            }
        }
        let p = &sites.get(w.pair.site).point;
        let c = w.pair.base;
        let walls = [poly.edge(poly.prev(c)), poly.edge(c)];
        if walls.iter().any(|e| e.contains(p)) {
            report.notes.push(Note::SiteOnBaseWall { pair: w.pair });
        }
    }
    report
}

#[derive(Clone, Debug)]
pub struct Region {
    pub id: usize,
    pub representative: Point,
    pub visible: SiteSet,
    pub cells: Vec<usize>,
    pub area: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjacency {
    pub first: usize,
    pub second: usize,
    /// Indices into the window list.
    pub windows: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecompositionError {
    #[error("degenerate input: {0}")]
    Degenerate(DegeneracyReport),
    #[error("adjacent regions {first} and {second} have incomparable visible sets")]
    IncomparableNeighbors { first: usize, second: usize },
    #[error("adjacent regions {first} and {second} have equal visible sets")]
    EqualNeighbors { first: usize, second: usize },
    #[error("region {0} has its representative on a window")]
    RepresentativeOnWindow(usize),
    #[error("dual graph has a cycle")]
    Cyclic,
}

#[derive(Clone, Debug)]
pub struct VisibilityDecomposition {
    pub windows: Vec<Window>,
    pub arrangement: Arrangement,
    pub regions: Vec<Region>,
    pub adjacency: Vec<Adjacency>,
    pub sinks: Vec<usize>,
    pub report: DegeneracyReport,
}

impl VisibilityDecomposition {
    pub fn region_of_cell(&self, cell: usize) -> usize {
        self.regions.iter().position(|r| r.cells.contains(&cell)).expect("every cell has a region")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    pub nodes: usize,
    /// `(from, to)` with `V(from)` a strict superset of `V(to)`.
    pub edges: Vec<(usize, usize)>,
    pub sinks: Vec<usize>,
}

impl DualGraph {
    pub fn is_acyclic(&self) -> bool {
        let mut indeg = vec![0usize; self.nodes];
        for &(_, b) in &self.edges {
            indeg[b] += 1;
        }
        let mut stack: Vec<usize> = (0..self.nodes).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &(a, b) in &self.edges {
                if a == v {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        stack.push(b);
                    }
                }
            }
        }
        seen == self.nodes
    }
}

/// Windows, faces and visible sets for `sites`. Fails on inputs outside
/// general position.
pub fn build_decomposition(
    poly: &SimplePolygon,
    sites: &GuardSiteSet,
) -> Result<VisibilityDecomposition, DecompositionError> {
    let pairs = feasible_pairs(poly, sites);
    let windows = build_windows(poly, sites, &pairs).map_err(|d| {
        DecompositionError::Degenerate(DegeneracyReport { violations: vec![d], notes: Vec::new() })
    })?;
    let report = check_general_position(poly, sites, &windows);
    if !report.is_ok() {
        return Err(DecompositionError::Degenerate(report));
    }
    let segs: Vec<Segment> = windows.iter().map(Window::segment).collect();
    let arrangement = Arrangement::build(poly, &segs);
    let (face_of, members) = faces(&arrangement);

    let mut regions = Vec::with_capacity(members.len());
    for (id, cells) in members.into_iter().enumerate() {
        let representative = arrangement.cells[cells[0]].representative();
        if segs.iter().any(|s| s.contains(&representative)) {
            return Err(DecompositionError::RepresentativeOnWindow(id));
        }
        let visible = visible_sites(poly, sites, &representative);
        let area = cells.iter().fold(Q::zero(), |a, &c| a + arrangement.cells[c].area());
        regions.push(Region { id, representative, visible, cells, area });
    }

    let mut adjacency: Vec<Adjacency> = Vec::new();
    for c in &arrangement.contacts {
        let (a, b) = (face_of[c.first], face_of[c.second]);
        if a == b {
            continue;
        }
        let (first, second) = if a < b { (a, b) } else { (b, a) };
        match adjacency.iter_mut().find(|x| x.first == first && x.second == second) {
            Some(adj) => {
                for w in &c.separators {
                    if !adj.windows.contains(w) {
                        adj.windows.push(*w);
                    }
                }
            }
            None => adjacency.push(Adjacency { first, second, windows: c.separators.clone() }),
        }
    }
    adjacency.sort_by_key(|a| (a.first, a.second));
    for a in &mut adjacency {
        a.windows.sort();
    }

    let mut d = VisibilityDecomposition { windows, arrangement, regions, adjacency, sinks: Vec::new(), report };
    d.sinks = dual_graph_and_sinks(&d)?.sinks;
    Ok(d)
}

/// Sites that see `p`.
pub fn visible_sites(poly: &SimplePolygon, sites: &GuardSiteSet, p: &Point) -> SiteSet {
    SiteSet::from_indices(
        sites.len(),
        (0..sites.len()).filter(|&i| poly.segment_inside_unchecked(&sites.get(i).point, p)),
    )
}

pub fn dual_graph_and_sinks(d: &VisibilityDecomposition) -> Result<DualGraph, DecompositionError> {
    let mut edges = Vec::new();
    for adj in &d.adjacency {
        let (a, b) = (&d.regions[adj.first].visible, &d.regions[adj.second].visible);
        let (first, second) = (adj.first, adj.second);
        match (b.is_subset(a), a.is_subset(b)) {
            (true, true) => return Err(DecompositionError::EqualNeighbors { first, second }),
            (true, false) => edges.push((first, second)),
            (false, true) => edges.push((second, first)),
            (false, false) => return Err(DecompositionError::IncomparableNeighbors { first, second }),
        }
    }
    let nodes = d.regions.len();
    let sinks = (0..nodes).filter(|&v| !edges.iter().any(|&(a, _)| a == v)).collect();
    let g = DualGraph { nodes, edges, sinks };
    if !g.is_acyclic() {
        return Err(DecompositionError::Cyclic);
    }
    Ok(g)
}
