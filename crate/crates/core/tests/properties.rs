// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

mod common;

use std::collections::HashMap;
use std::sync::Arc;

use gridroute::bench;
use gridroute::geometry::{hull, lattice_points, Point};
use gridroute::io;
use gridroute::lattice::{check_ramp, IsoTransform, LatticeGraph, Pt};
use gridroute::oracle;
use gridroute::routing::convex::{stretch_coloring, ConvexRouter};
use gridroute::routing::ramp::{is_monotonic, make_monotonic};
use gridroute::routing::{
    apply, route_path, route_ramp_unlabeled, route_rect, route_rect_unlabeled, route_tree, validate, Color, ColorConfig,
    LabeledConfig, Schedule,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn replay<T: gridroute::routing::Token>(
    x: &gridroute::routing::Config<T>,
    s: &Schedule,
) -> gridroute::routing::Config<T> {
    s.steps.iter().fold(x.clone(), |c, st| apply(&c, st).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_contains_its_points(pts in prop::collection::vec((0i64..=50, 0i64..=50), 1..100)) {
        let ps: Vec<Point> = pts.iter().map(|&(x, y)| Point::int(x, y)).collect();
        let h = hull(&ps);
        for p in &ps {
            prop_assert!(h.contains(p));
        }
        for v in h.vertices() {
            prop_assert!(ps.contains(v));
        }
    }

    #[test]
    fn lattice_points_match_enumeration(seed in any::<u64>(), w in 1u32..30, h in 1u32..30) {
        let poly = bench::random_convex(&mut rng(seed), w, h);
        let mut brute = Vec::new();
        for y in 0..=h as i32 {
            for x in 0..=w as i32 {
                if poly.contains(&Point::from(Pt::new(x, y))) {
                    brute.push(Pt::new(x, y));
                }
            }
        }
        let mut got = lattice_points(&poly);
        got.sort();
        brute.sort();
        prop_assert_eq!(got, brute);
    }

    #[test]
    fn symmetries_invert(seed in any::<u64>(), k in 0usize..8) {
        let g = random_blob(&mut rng(seed), 12, false);
        let t = IsoTransform::symmetries()[k];
        let back = g.transform(&t).transform(&t.inverse());
        prop_assert_eq!(back.points(), g.points());
        prop_assert!(g.transform(&t).is_connected());
    }

    #[test]
    fn path_routing_within_n(seed in any::<u64>(), n in 1i32..50) {
        let g = Arc::new(LatticeGraph::from_points((0..n).map(|x| Pt::new(x, 0))));
        let (a, b) = shuffled(&mut rng(seed), &g);
        let s = route_path(&a, &b).unwrap();
        prop_assert!(s.len() <= n as usize);
        prop_assert_eq!(replay(&a, &s), b.clone());
        prop_assert_eq!(replay(&b, &s.reverse()), a);
    }

    #[test]
    fn tree_routing_within_3n(seed in any::<u64>(), n in 1usize..150, tree in any::<bool>()) {
        let mut r = rng(seed);
        let g = Arc::new(random_blob(&mut r, n, tree));
        let (a, b) = shuffled(&mut r, &g);
        let s = route_tree(&a, &b).unwrap();
        prop_assert!(s.len() <= 3 * n);
        prop_assert!(validate(&s, &a, &b).ok);
    }

    #[test]
    fn rectangles_within_2p_plus_q(seed in any::<u64>(), p in 1i32..14, q in 1i32..14) {
        let g = Arc::new(LatticeGraph::from_points((0..p).flat_map(|x| (0..q).map(move |y| Pt::new(x, y)))));
        let mut r = rng(seed);
        let (a, b) = shuffled(&mut r, &g);
        let bound = (2 * p.min(q) + p.max(q)) as usize;
        let s = route_rect(&a, &b).unwrap();
        prop_assert!(s.len() <= bound);
        let k = (seed % (g.len() as u64 + 1)) as usize;
        let (x, y) = (random_colors(&mut r, &g, k), random_colors(&mut r, &g, k));
        let s = route_rect_unlabeled(&x, &y).unwrap();
        prop_assert!(s.len() <= bound);
        prop_assert!(validate(&s, &x, &y).ok);
    }

    #[test]
    fn ramps_become_monotonic_and_route(seed in any::<u64>(), m in 1u32..30, n in 1u32..30) {
        let mut r = rng(seed);
        let g = Arc::new(LatticeGraph::cut(&bench::random_ramp(&mut r, m, n)));
        let ramp = check_ramp(&g).unwrap();
        let k = (seed % (g.len() as u64 + 1)) as usize;
        let (x, y) = (random_colors(&mut r, &g, k), random_colors(&mut r, &g, k));
        let s = make_monotonic(&ramp, &x).unwrap();
        prop_assert!(is_monotonic(&ramp, &replay(&x, &s)));
        let s = route_ramp_unlabeled(&x, &y).unwrap();
        prop_assert!(s.len() as u64 <= s.declared_bound);
        prop_assert_eq!(replay(&x, &s), y);
    }

    #[test]
    fn schedule_files_round_trip(seed in any::<u64>(), n in 2usize..40) {
        let mut r = rng(seed);
        let g = Arc::new(random_blob(&mut r, n, false));
        let (a, b) = shuffled(&mut r, &g);
        let s = route_tree(&a, &b).unwrap();
        let (h, back) = io::parse_schedule(&io::schedule_jsonl(&s, &g)).unwrap();
        prop_assert_eq!(h.n_steps, s.len());
        prop_assert_eq!(back, s);
        prop_assert_eq!(io::parse_labeled(&io::labeled_json(&b), g.clone()).unwrap(), b);
    }

    #[test]
    fn oracle_is_symmetric(seed in any::<u64>(), n in 2usize..7) {
        let mut r = rng(seed);
        let g = Arc::new(random_blob(&mut r, n, false));
        let (a, b) = shuffled(&mut r, &g);
        prop_assert_eq!(oracle::exact_distance(&a, &b).unwrap(), oracle::exact_distance(&b, &a).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn convex_routing_validates(seed in any::<u64>(), size in 4u32..60) {
        let mut r = rng(seed);
        let g = Arc::new(LatticeGraph::cut(&bench::generate(bench::Family::Convex, &mut r, size)));
        let router = ConvexRouter::new(&g).unwrap();
        let (a, b) = shuffled(&mut r, &g);
        let s = router.route(&a, &b).unwrap();
        prop_assert!(s.len() as u64 <= s.declared_bound);
        prop_assert_eq!(replay(&a, &s), b);
        let k = (seed % (g.len() as u64 + 1)) as usize;
        let (x, y) = (random_colors(&mut r, &g, k), random_colors(&mut r, &g, k));
        let s = router.route_colored(&x, &y).unwrap();
        prop_assert_eq!(replay(&x, &s), y);
        prop_assert!(router.route(&a, &a).unwrap().is_empty());
    }

    #[test]
    fn same_pair_color_paths_are_disjoint(seed in any::<u64>(), size in 8u32..40) {
        let mut r = rng(seed);
        let g = Arc::new(LatticeGraph::cut(&bench::generate(bench::Family::Convex, &mut r, size)));
        let c = stretch_coloring(g.clone(), 3);
        prop_assert!(c.color_count() <= c.color_limit());
        let mut by_color: HashMap<u32, Vec<Vec<Pt>>> = HashMap::new();
        for &a in g.points() {
            for &b in g.points() {
                if a < b && a.manhattan(b) <= 3 {
                    if let (Some(k), Some(p)) = (c.pair_color(a, b), c.path(a, b)) {
                        prop_assert!(p.len() <= 4);
                        by_color.entry(k).or_default().push(p);
                    }
                }
            }
        }
        for paths in by_color.values() {
            for (i, p) in paths.iter().enumerate() {
                for q in &paths[i + 1..] {
                    prop_assert!(p.iter().all(|v| !q.contains(v)), "{:?} meets {:?}", p, q);
                }
            }
        }
    }
}

#[test]
fn colored_configs_round_trip() {
    let g = Arc::new(LatticeGraph::from_points((0..5).map(|x| Pt::new(x, 0))));
    let c = ColorConfig::from_fn(g.clone(), |p| Color::from_bit(p.x % 2 == 0));
    assert_eq!(io::colored_json(&c), "[1,0,1,0,1]");
    assert_eq!(io::parse_colored("[1,0,1,0,1]", g.clone()).unwrap(), c);
    assert!(io::parse_colored("[1,0,2,0,1]", g.clone()).is_err());
    assert!(io::parse_labeled("[1,2]", g).is_err());
    let _ = LabeledConfig::identity(Arc::new(LatticeGraph::from_points([Pt::new(0, 0)])));
}
