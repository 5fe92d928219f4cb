use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use artgallery::decomposition::{build_decomposition, GuardSiteSet};
use artgallery::fixtures;
use artgallery::gallery_file::GalleryFile;
use artgallery::geom::{Point, Q};
use artgallery::interval::{interval_union_measure, IntervalSet};
use artgallery::normality::{check_normal_wrt, Verdict};
use artgallery::oracle::{brute_force_normal_wrt, naive_visible, SampleGrid};
use artgallery::polygon::area;
use artgallery::visibility::{kernel, visibility_polygon};

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn interval_set() -> impl Strategy<Value = IntervalSet> {
    prop::collection::vec((0i64..=48, 0i64..=48), 0..5).prop_map(|v| {
        IntervalSet::from_intervals(q(8, 1), v.into_iter().map(|(a, b)| (q(a.min(b), 6), q(a.max(b), 6))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn union_is_commutative_and_idempotent(a in interval_set(), b in interval_set()) {
        let p = q(8, 1);
        let (ab, mab) = interval_union_measure(&[a.clone(), b.clone()], p.clone());
        let (ba, _) = interval_union_measure(&[b.clone(), a.clone()], p.clone());
        prop_assert_eq!(&ab, &ba);
        prop_assert_eq!(ab.union(&a), ab.clone());
        prop_assert!(mab <= p);
        prop_assert!(mab >= a.measure().max(b.measure()));
    }

    #[test]
    fn segment_containment_matches_the_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let poly = fixtures::random_polygon(&mut rng, 9, 20);
        let grid = SampleGrid::new(&poly, 6);
        let mut pts: Vec<Point> = grid.points.iter().map(|g| g.point.clone()).collect();
        pts.extend(poly.vertices().iter().cloned());
        for (i, p) in pts.iter().enumerate() {
            for r in pts.iter().skip(i + 1).step_by(3) {
                prop_assert_eq!(poly.segment_inside_unchecked(p, r), naive_visible(&poly, p, r), "{} {}", p, r);
            }
        }
    }

    #[test]
    fn views_contain_their_site_and_fit_inside(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let poly = fixtures::random_polygon(&mut rng, 10, 30);
        for v in poly.vertices() {
            let view = visibility_polygon(&poly, v).unwrap();
            prop_assert!(view.contains(v));
            prop_assert!(area(&view.polygon) <= area(&poly));
            for w in view.polygon.vertices() {
                prop_assert!(poly.contains_closed(w));
            }
        }
    }

    #[test]
    fn a_kernel_point_sees_the_whole_star(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let poly = fixtures::random_star(&mut rng, 8, 30);
        let k = kernel(&poly).point().expect("star");
        let view = visibility_polygon(&poly, &k).unwrap();
        prop_assert_eq!(area(&view.polygon), area(&poly));
        prop_assert!(view.walls.covers_all());
    }

    #[test]
    fn sink_test_matches_brute_force_on_small_instances(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let poly = fixtures::random_polygon(&mut rng, 8, 20);
        let Some(inner) = fixtures::random_sites(&mut rng, &poly, 3, 2) else { return Ok(()) };
        let mut sites = fixtures::corner_sites(&poly, &inner).sites().to_vec();
        sites.truncate(5);
        sites.extend(inner.sites().iter().cloned());
        let a = GuardSiteSet::new(&poly, sites).unwrap();
        let r = check_normal_wrt(&poly, &a);
        prop_assume!(r.verdict != Verdict::InconclusiveDegenerate);
        let bf = brute_force_normal_wrt(&poly, &a, 12, 32).unwrap();
        prop_assert_eq!(r.verdict == Verdict::Normal, bf.normal);
        if let Some(w) = r.witness {
            prop_assert!(w.verify(&poly, &a));
        }
    }

    #[test]
    fn regions_tile_the_gallery(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let poly = fixtures::random_polygon(&mut rng, 10, 30);
        let Some(a) = fixtures::random_sites(&mut rng, &poly, 4, 2) else { return Ok(()) };
        let d = build_decomposition(&poly, &a).unwrap();
        let total = d.regions.iter().fold(Q::from_integer(0.into()), |acc, r| acc + &r.area);
        prop_assert_eq!(total, area(&poly));
        for s in &d.sinks {
            for e in &d.adjacency {
                if e.first == *s || e.second == *s {
                    let other = if e.first == *s { e.second } else { e.first };
                    prop_assert!(d.regions[*s].visible.is_subset(&d.regions[other].visible));
                }
            }
        }
    }

    #[test]
    fn generated_galleries_round_trip_through_text(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let poly = fixtures::random_two_reflex(&mut rng, 7, 25);
        let a = fixtures::random_sites(&mut rng, &poly, 3, 5).unwrap();
        let text = GalleryFile::from_gallery(&poly, &a).to_string();
        let (p2, a2) = GalleryFile::parse(&text).unwrap().build().unwrap();
        prop_assert!(p2.same_loop(&poly));
        prop_assert_eq!(a2.sites(), a.sites());
    }
}

#[test]
fn spirals_have_one_reflex_corner_per_turn() {
    for turns in 1..=8 {
        let s = fixtures::spiral(turns);
        assert_eq!(s.reflex_corners().len(), turns, "turns = {turns}");
        assert_eq!(s.n(), 2 * (turns + 2));
    }
}
