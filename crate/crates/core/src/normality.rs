//! Does every guard set drawn from the sites that sees all walls also see the
//! whole gallery?

use std::fmt;
use std::time::{Duration, Instant};

use crate::arrangement::{cells_form_convex_set, faces, Arrangement, UnionFind};
use crate::decomposition::{
    build_decomposition, build_windows, feasible_pairs, DecompositionError, DegeneracyReport, GuardSiteSet, SiteSet,
    VisibilityDecomposition,
};
use crate::geom::{Point, Segment};
use crate::interval::{interval_union_measure, IntervalSet};
use crate::oracle::{self, Combinations, OracleError};
use crate::polygon::SimplePolygon;
use crate::visibility::{convex_cover_certificate, kernel, wall_view};

/// True iff the sites' wall views together cover every wall.
pub fn covers_walls(poly: &SimplePolygon, sites: &[Point]) -> bool {
    let views: Vec<IntervalSet> = sites
        .iter()
        .map(|p| wall_view(poly, p).expect("site inside the gallery"))
        .collect();
    interval_union_measure(&views, poly.perimeter_param()).0.covers_all()
}

/// Wall views of every site, computed once.
pub struct WallViews {
    period: crate::geom::Q,
    views: Vec<IntervalSet>,
}

impl WallViews {
    pub fn new(poly: &SimplePolygon, sites: &GuardSiteSet) -> Self {
        let views = sites
            .sites()
            .iter()
            .map(|s| wall_view(poly, &s.point).expect("validated site"))
            .collect();
        WallViews { period: poly.perimeter_param(), views }
    }

    pub fn union(&self, set: &SiteSet) -> IntervalSet {
        let chosen: Vec<IntervalSet> = set.iter().map(|i| self.views[i].clone()).collect();
        interval_union_measure(&chosen, self.period.clone()).0
    }

    pub fn covers(&self, set: &SiteSet) -> bool {
        self.union(set).covers_all()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Normal,
    NotNormal,
    InconclusiveDegenerate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Normal => "NORMAL",
            Verdict::NotNormal => "NOT NORMAL",
            Verdict::InconclusiveDegenerate => "INCONCLUSIVE (degenerate input)",
        })
    }
}

/// Sites that see every wall yet miss `uncovered_point`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessSet {
    pub sites: SiteSet,
    pub names: Vec<String>,
    pub uncovered_point: Point,
    pub walls: IntervalSet,
    pub all_on_boundary: bool,
}

impl WitnessSet {
    fn new(poly: &SimplePolygon, a: &GuardSiteSet, views: &WallViews, sites: SiteSet, uncovered_point: Point) -> Self {
        let walls = views.union(&sites);
        let all_on_boundary = sites.iter().all(|i| poly.boundary_pos(&a.get(i).point).is_some());
        WitnessSet { names: a.names_of(&sites), sites, uncovered_point, walls, all_on_boundary }
    }

    /// Recomputes everything from scratch: full wall measure, and no witness
    /// site sees the uncovered point.
    pub fn verify(&self, poly: &SimplePolygon, a: &GuardSiteSet) -> bool {
        let pts = a.points_of(&self.sites);
        covers_walls(poly, &pts)
            && poly.classify_point(&self.uncovered_point).is_interior()
            && pts.iter().all(|p| !poly.segment_inside_unchecked(p, &self.uncovered_point))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SinkStats {
    pub regions: usize,
    pub sinks: usize,
    pub checked: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Timings {
    pub decomposition: Duration,
    pub wall_views: Duration,
    pub sinks: Duration,
    pub oracle: Duration,
}

#[derive(Clone, Debug)]
pub struct NormalityReport {
    pub verdict: Verdict,
    pub witness: Option<WitnessSet>,
    pub stats: SinkStats,
    pub timings: Timings,
    pub degeneracy: Option<DegeneracyReport>,
    /// Set when the brute-force oracle produced the verdict.
    pub via_oracle: bool,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub oracle_fallback: bool,
    pub grid: usize,
    pub cap: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { oracle_fallback: false, grid: 64, cap: oracle::DEFAULT_CAP }
    }
}

pub fn check_normal_wrt(poly: &SimplePolygon, a: &GuardSiteSet) -> NormalityReport {
    check_normal_wrt_with(poly, a, CheckOptions::default())
}

/// Builds the decomposition and tests the complement of each sink's visible
/// set, in region order. A failing subset always fits inside such a
/// complement, so sinks are the only places to look.
pub fn check_normal_wrt_with(poly: &SimplePolygon, a: &GuardSiteSet, opts: CheckOptions) -> NormalityReport {
    let mut timings = Timings::default();
    let t0 = Instant::now();
    let built = build_decomposition(poly, a);
    timings.decomposition = t0.elapsed();
    let d = match built {
        Ok(d) => d,
        Err(e) => return degenerate(poly, a, e, opts, timings),
    };
    let t1 = Instant::now();
    let views = WallViews::new(poly, a);
    timings.wall_views = t1.elapsed();

    let t2 = Instant::now();
    let mut stats = SinkStats { regions: d.regions.len(), sinks: d.sinks.len(), checked: 0 };
    let mut witness = None;
    for &s in &d.sinks {
        stats.checked += 1;
        let region = &d.regions[s];
        let comp = region.visible.complement();
        if views.covers(&comp) {
            witness = Some(WitnessSet::new(poly, a, &views, comp, region.representative.clone()));
            break;
        }
    }
    timings.sinks = t2.elapsed();

    let mut notes = Vec::new();
    let verdict = if witness.is_some() {
        Verdict::NotNormal
    } else {
        if !views.covers(&SiteSet::full(a.len())) {
            notes.push("no subset of the sites covers the walls; normal vacuously".to_string());
        }
        Verdict::Normal
    };
    NormalityReport {
        verdict,
        witness,
        stats,
        timings,
        degeneracy: (!d.report.notes.is_empty()).then(|| d.report.clone()),
        via_oracle: false,
        notes,
    }
}

fn degenerate(
    poly: &SimplePolygon,
    a: &GuardSiteSet,
    err: DecompositionError,
    opts: CheckOptions,
    mut timings: Timings,
) -> NormalityReport {
    let report = match &err {
        DecompositionError::Degenerate(r) => r.clone(),
        _ => DegeneracyReport::default(),
    };
    let mut out = NormalityReport {
        verdict: Verdict::InconclusiveDegenerate,
        witness: None,
        stats: SinkStats::default(),
        timings: Timings::default(),
        degeneracy: Some(report),
        via_oracle: false,
        notes: vec![err.to_string()],
    };
    if !opts.oracle_fallback {
        out.timings = timings;
        return out;
    }
    let t = Instant::now();
    match oracle::brute_force_normal_wrt(poly, a, opts.cap, opts.grid) {
        Ok(r) => {
            out.via_oracle = true;
            out.notes.push(format!("decided by brute force over {} candidate points", r.candidates));
            match r.witness {
                Some((set, p)) => {
                    let views = WallViews::new(poly, a);
                    out.witness = Some(WitnessSet::new(poly, a, &views, set, p));
                    out.verdict = Verdict::NotNormal;
                }
                None => out.verdict = Verdict::Normal,
            }
        }
        Err(e @ OracleError::CapExceeded { .. }) => out.notes.push(e.to_string()),
    }
    timings.oracle = t.elapsed();
    out.timings = timings;
    out
}

/// Smallest failing subset, first in (size, index order), among the subsets
/// of complements of failing sinks. `None` if the sites are normal.
pub fn minimal_witness(poly: &SimplePolygon, a: &GuardSiteSet) -> Result<Option<WitnessSet>, DecompositionError> {
    let d = build_decomposition(poly, a)?;
    Ok(minimal_witness_in(poly, a, &d))
}

pub fn minimal_witness_in(poly: &SimplePolygon, a: &GuardSiteSet, d: &VisibilityDecomposition) -> Option<WitnessSet> {
    let views = WallViews::new(poly, a);
    let failing: Vec<(SiteSet, Point)> = d
        .sinks
        .iter()
        .map(|&s| (d.regions[s].visible.complement(), d.regions[s].representative.clone()))
        .filter(|(c, _)| views.covers(c))
        .collect();
    if failing.is_empty() {
        return None;
    }
    let m = a.len();
    for k in 1..=m {
        for combo in Combinations::new(m, k) {
            let s = SiteSet::from_indices(m, combo);
            let Some((_, rep)) = failing.iter().find(|(c, _)| s.is_subset(c)) else { continue };
            if views.covers(&s) {
                return Some(WitnessSet::new(poly, a, &views, s, rep.clone()));
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SufficientConditions {
    pub reflex_le_2: bool,
    pub star: bool,
    pub convex_cover: bool,
    pub implies_normal: bool,
    pub kernel_point: Option<Point>,
    pub certificate: Option<Vec<Point>>,
}

/// Tests that each certify normality with respect to every guard set.
pub fn sufficient_conditions(poly: &SimplePolygon) -> SufficientConditions {
    let reflex_le_2 = poly.reflex_corners().len() <= 2;
    let kernel_point = kernel(poly).point();
    let certificate = convex_cover_certificate(poly);
    let star = kernel_point.is_some();
    let convex_cover = certificate.is_some();
    SufficientConditions {
        reflex_le_2,
        star,
        convex_cover,
        implies_normal: reflex_le_2 || star || convex_cover,
        kernel_point,
        certificate,
    }
}

/// The gallery cut by the windows of `guards`, with the faces no guard sees
/// grouped into connected components.
pub struct HiddenRegions {
    pub arrangement: Arrangement,
    pub components: Vec<Vec<usize>>,
}

impl HiddenRegions {
    pub fn all_convex(&self) -> bool {
        self.components.iter().all(|c| cells_form_convex_set(&self.arrangement, c))
    }
}

pub fn hidden_regions(poly: &SimplePolygon, guards: &[Point]) -> Result<HiddenRegions, DecompositionError> {
    let a = GuardSiteSet::from_points(poly, guards.to_vec()).expect("guards inside the gallery");
    let pairs = feasible_pairs(poly, &a);
    let windows = build_windows(poly, &a, &pairs).map_err(|d| {
        DecompositionError::Degenerate(DegeneracyReport { violations: vec![d], notes: Vec::new() })
    })?;
    let segs: Vec<Segment> = windows.iter().map(|w| w.segment()).collect();
    let arrangement = Arrangement::build(poly, &segs);
    let (face_of, members) = faces(&arrangement);
    let hidden: Vec<bool> = members
        .iter()
        .map(|cells| {
            let rep = arrangement.cells[cells[0]].representative();
            !guards.iter().any(|g| poly.segment_inside_unchecked(g, &rep))
        })
        .collect();
    let mut uf = UnionFind::new(members.len());
    for c in &arrangement.contacts {
        let (f, g) = (face_of[c.first], face_of[c.second]);
        if hidden[f] && hidden[g] {
            uf.union(f, g);
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for (f, cells) in members.iter().enumerate() {
        if !hidden[f] {
            continue;
        }
        let root = uf.find(f);
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, v)) => v.extend(cells),
            None => groups.push((root, cells.clone())),
        }
    }
    Ok(HiddenRegions { arrangement, components: groups.into_iter().map(|(_, v)| v).collect() })
}
