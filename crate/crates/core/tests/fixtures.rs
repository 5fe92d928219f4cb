//! Every fixture's advertised property, re-derived through the oracle.

use artgallery::arrangement::convex_hull;
use artgallery::decomposition::{
    build_decomposition, build_windows, check_general_position, feasible_pairs, GuardSiteSet, Site, SiteSet,
};
use artgallery::fixtures::{self, Fixture};
use artgallery::geom::{orient, Point, Sign, Q};
use artgallery::normality::{check_normal_wrt, covers_walls, hidden_regions, minimal_witness, Verdict};
use artgallery::oracle::{
    brute_force_normal_wrt, hidden_components, naive_measure, naive_merge, naive_visible, oracle_wall_view, Combinations,
    SampleGrid,
};
use artgallery::visibility::{kernel, view_is_convex, visibility_polygon};

fn idx(a: &GuardSiteSet, name: &str) -> usize {
    a.index_of(name).unwrap_or_else(|| panic!("no site {name}"))
}

fn set(a: &GuardSiteSet, names: &[&str]) -> SiteSet {
    a.subset(names).expect("known names")
}

fn points(a: &GuardSiteSet, names: &[&str]) -> Vec<Point> {
    names.iter().map(|n| a.get(idx(a, n)).point.clone()).collect()
}

fn with_extra(f: &Fixture, extra: &[&str]) -> GuardSiteSet {
    let mut sites: Vec<Site> = f.corner_sites().sites().to_vec();
    for name in extra {
        sites.push(f.sites.get(idx(&f.sites, name)).clone());
    }
    GuardSiteSet::new(&f.polygon, sites).unwrap()
}

/// All failing subsets of the smallest failing size, by brute force.
fn minimal_witnesses(f: &Fixture, a: &GuardSiteSet) -> Vec<Vec<String>> {
    let first = brute_force_normal_wrt(&f.polygon, a, 12, 64).unwrap();
    let Some((w, _)) = first.witness else { return Vec::new() };
    let k = w.len();
    let reps: Vec<Point> = build_decomposition(&f.polygon, a).unwrap().regions.iter().map(|r| r.representative.clone()).collect();
    let mut out = Vec::new();
    for c in Combinations::new(a.len(), k) {
        let pts: Vec<Point> = c.iter().map(|&i| a.get(i).point.clone()).collect();
        let walls: Vec<_> = pts.iter().flat_map(|p| oracle_wall_view(&f.polygon, p)).collect();
        if naive_measure(&walls) != Q::from_integer(f.polygon.n().into()) {
            continue;
        }
        if reps.iter().any(|r| pts.iter().all(|p| !naive_visible(&f.polygon, p, r))) {
            let mut names: Vec<String> = c.iter().map(|&i| a.get(i).name.clone()).collect();
            names.sort();
            out.push(names);
        }
    }
    out
}

#[test]
fn every_fixture_site_set_is_in_general_position() {
    for f in fixtures::all() {
        for (label, a) in [("named", f.sites.clone()), ("corners", f.corner_sites())] {
            if f.name == "fig2_right" && label == "corners" {
                continue;
            }
            let w = build_windows(&f.polygon, &a, &feasible_pairs(&f.polygon, &a)).expect("windows build");
            let r = check_general_position(&f.polygon, &a, &w);
            assert!(r.is_ok(), "{} {label}: {r}", f.name);
        }
    }
}

#[test]
fn gamma6_three_guards_cover_walls_but_not_d() {
    let f = fixtures::gamma6();
    let abc = points(&f.sites, &["A", "B", "C"]);
    let d = points(&f.sites, &["D"]).remove(0);
    assert!(covers_walls(&f.polygon, &abc));
    assert!(abc.iter().all(|g| !naive_visible(&f.polygon, g, &d)));
    let exact = hidden_regions(&f.polygon, &abc).unwrap();
    assert_eq!(exact.components.len(), 1);
    assert!(exact.all_convex());
    let r = check_normal_wrt(&f.polygon, &f.sites);
    assert_eq!(r.verdict, Verdict::NotNormal);
    assert_eq!(r.witness.unwrap().names, vec!["A", "B", "C"]);
}

#[test]
fn gamma6_is_not_caught_by_sufficient_tests() {
    let f = fixtures::gamma6();
    assert!(f.polygon.reflex_corners().len() > 2);
    assert!(kernel(&f.polygon).is_empty());
}

#[test]
fn gamma8_reflex_corners_are_3_6_7() {
    let f = fixtures::gamma8();
    let a = f.corner_sites();
    let mut names: Vec<String> = f.polygon.reflex_corners().iter().map(|&v| a.get(v).name.clone()).collect();
    names.sort();
    assert_eq!(names, vec!["3", "6", "7"]);
}

#[test]
fn gamma8_window_tips() {
    let f = fixtures::gamma8();
    let a = f.corner_sites();
    let pairs = feasible_pairs(&f.polygon, &a);
    let windows = build_windows(&f.polygon, &a, &pairs).unwrap();
    let tip = |site: &str, base: &str| {
        let (s, b) = (idx(&a, site), idx(&a, base));
        windows.iter().find(|w| w.pair.site == s && w.pair.base == b).map(|w| w.tip.clone())
    };
    let w87 = tip("8", "7").expect("(8,7) is feasible");
    assert_eq!(w87, Point::int(50, 40));
    // Corner 1 sits at (10, 51); both tips land on wall 8-1 just below it.
    let wall = artgallery::geom::Segment::new(Point::int(10, 40), Point::int(10, 51)).unwrap();
    for site in ["3", "4"] {
        let w = tip(site, "7").expect("feasible");
        assert!(wall.contains(&w), "W_{site},7 = {w}");
    }
    assert_eq!(tip("3", "7").unwrap(), Point::frac(10, 1, 149, 3));
    assert_eq!(tip("4", "7").unwrap(), Point::int(10, 50));
}

#[test]
fn gamma8_h458_is_a_sink_with_larger_neighbours() {
    let f = fixtures::gamma8();
    let a = f.corner_sites();
    let d = build_decomposition(&f.polygon, &a).unwrap();
    let hidden = set(&a, &["4", "5", "8"]);
    let h = d.regions.iter().find(|r| r.visible.complement() == hidden).expect("H_{4,5,8} exists");
    assert!(d.sinks.contains(&h.id));
    let mut neighbours = 0;
    for e in d.adjacency.iter().filter(|e| e.first == h.id || e.second == h.id) {
        let other = if e.first == h.id { e.second } else { e.first };
        assert!(h.visible.is_subset(&d.regions[other].visible));
        assert_ne!(h.visible, d.regions[other].visible);
        neighbours += 1;
    }
    assert!(neighbours > 0);
    // Every corner outside {4, 5, 8} sees the representative.
    for i in 0..a.len() {
        assert_eq!(naive_visible(&f.polygon, &a.get(i).point, &h.representative), !hidden.contains(i));
    }
    // H_{4,5} is visible from 8.
    let h45 = set(&a, &["4", "5"]);
    assert!(d.regions.iter().any(|r| r.visible.complement() == h45));
}

#[test]
fn gamma8_has_a_unique_minimal_witness() {
    let f = fixtures::gamma8();
    let a = f.corner_sites();
    assert_eq!(minimal_witnesses(&f, &a), vec![vec!["4", "5", "8"]]);
    let w = minimal_witness(&f.polygon, &a).unwrap().unwrap();
    assert!(w.verify(&f.polygon, &a));
    let pts = points(&a, &["4", "5", "8"]);
    let hidden = hidden_regions(&f.polygon, &pts).unwrap();
    assert_eq!(hidden.components.len(), 1);
    assert!(hidden.all_convex());
}

#[test]
fn gamma9_feasible_pair_exclusions() {
    let f = fixtures::gamma9();
    let a = f.corner_sites();
    let pairs = feasible_pairs(&f.polygon, &a);
    let has = |s: &str, b: &str| pairs.iter().any(|p| p.site == idx(&a, s) && p.base == idx(&a, b));
    let pt = |n: &str| a.get(idx(&a, n)).point.clone();
    assert!(!naive_visible(&f.polygon, &pt("4"), &pt("8")));
    assert!(!has("4", "8"));
    let s2 = orient(&pt("6"), &pt("3"), &pt("2"));
    let s4 = orient(&pt("6"), &pt("3"), &pt("4"));
    assert!(s2 != Sign::Zero && s4 != Sign::Zero && s2 != s4);
    assert!(naive_visible(&f.polygon, &pt("6"), &pt("3")));
    assert!(!has("6", "3"));
}

#[test]
fn gamma9_corners_are_normal_until_g_is_added() {
    let f = fixtures::gamma9();
    let a = f.corner_sites();
    assert_eq!(check_normal_wrt(&f.polygon, &a).verdict, Verdict::Normal);
    assert!(brute_force_normal_wrt(&f.polygon, &a, 12, 64).unwrap().normal);

    let ag = with_extra(&f, &["G"]);
    assert_eq!(check_normal_wrt(&f.polygon, &ag).verdict, Verdict::NotNormal);
    assert!(!brute_force_normal_wrt(&f.polygon, &ag, 12, 64).unwrap().normal);
    let w = minimal_witness(&f.polygon, &ag).unwrap().unwrap();
    let mut names = w.names.clone();
    names.sort();
    assert_eq!(names, vec!["6", "9", "G"]);
    assert!(minimal_witnesses(&f, &ag).contains(&vec!["6".to_string(), "9".to_string(), "G".to_string()]));
}

#[test]
fn fig2_left_hidden_region_has_two_components() {
    let f = fixtures::fig2_left();
    let guards = f.sites.points();
    assert!(covers_walls(&f.polygon, &guards));
    for k in [64, 128] {
        let grid = SampleGrid::new(&f.polygon, k);
        assert_eq!(hidden_components(&f.polygon, &guards, &grid).len(), 2, "k = {k}");
    }
    let exact = hidden_regions(&f.polygon, &guards).unwrap();
    assert_eq!(exact.components.len(), 2);
    assert!(exact.all_convex());
}

#[test]
fn fig2_right_is_normal_without_a_kernel() {
    let f = fixtures::fig2_right();
    assert!(kernel(&f.polygon).is_empty());
    let cert = artgallery::visibility::convex_cover_certificate(&f.polygon).expect("certificate");
    for p in &cert {
        assert!(view_is_convex(&f.polygon, p).unwrap());
    }
    // Every sample point is seen from some certificate point.
    let grid = SampleGrid::new(&f.polygon, 32);
    assert!(grid.points.iter().all(|g| cert.iter().any(|c| naive_visible(&f.polygon, c, &g.point))));
    assert_eq!(check_normal_wrt(&f.polygon, &f.sites).verdict, Verdict::Normal);
    assert!(brute_force_normal_wrt(&f.polygon, &f.sites, 12, 64).unwrap().normal);
}

#[test]
fn lshape_kernel_guard_leaves_nothing_hidden() {
    let f = fixtures::lshape();
    let origin = points(&f.sites, &["origin"]);
    let grid = SampleGrid::new(&f.polygon, 16);
    assert!(hidden_components(&f.polygon, &origin, &grid).is_empty());
    assert!(kernel(&f.polygon).contains(&origin[0]));
}

#[test]
fn component_counts_survive_grid_refinement() {
    for f in fixtures::all() {
        let guards = f.sites.points();
        if !covers_walls(&f.polygon, &guards) {
            continue;
        }
        let coarse = hidden_components(&f.polygon, &guards, &SampleGrid::new(&f.polygon, 64)).len();
        let fine = hidden_components(&f.polygon, &guards, &SampleGrid::new(&f.polygon, 128)).len();
        assert_eq!(coarse, fine, "{}", f.name);
    }
}

#[test]
fn views_agree_with_the_oracle_on_fixture_sites() {
    for f in fixtures::all() {
        for s in f.corner_sites().sites().iter().chain(f.sites.sites()) {
            let v = visibility_polygon(&f.polygon, &s.point).unwrap();
            let naive = oracle_wall_view(&f.polygon, &s.point);
            let merged = naive_merge(naive);
            let ours: Vec<_> = v.walls.intervals().to_vec();
            assert_eq!(
                naive_measure(&merged),
                v.walls.measure(),
                "{} {}: {:?} vs {:?}",
                f.name,
                s.name,
                merged,
                ours
            );
        }
    }
}

#[test]
fn hidden_pockets_sit_inside_their_sample_hulls() {
    let f = fixtures::gamma6();
    let abc = points(&f.sites, &["A", "B", "C"]);
    let d = points(&f.sites, &["D"]).remove(0);
    let comps = hidden_components(&f.polygon, &abc, &SampleGrid::new(&f.polygon, 64));
    assert_eq!(comps.len(), 1);
    let hull = convex_hull(&comps[0]);
    let n = hull.len();
    assert!((0..n).all(|i| orient(&hull[i], &hull[(i + 1) % n], &d) != Sign::Negative));
}
