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

//! Cross-checks the exhaustive oracle against an independent
//! iterative-deepening search, then uses the oracle as a floor for the
//! routers on small graphs.

mod common;

use std::sync::Arc;

use gridroute::bench;
use gridroute::lattice::{LatticeGraph, Pt};
use gridroute::oracle;
use gridroute::routing::{
    route_burger_bun_colored, route_path, route_ramp_unlabeled, route_rect_unlabeled, route_tree, validate, Color,
    ColorConfig, LabeledConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

/// All matchings of `edges`, found by filtering edge subsets.
fn matchings(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    assert!(edges.len() < 24);
    (0u32..1 << edges.len())
        .filter_map(|mask| {
            let chosen: Vec<_> = (0..edges.len()).filter(|i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
            let mut used = vec![false; n];
            for &(a, b) in &chosen {
                if used[a] || used[b] {
                    return None;
                }
                used[a] = true;
                used[b] = true;
            }
            Some(chosen)
        })
        .collect()
}

fn all_pairs(g: &LatticeGraph) -> Vec<Vec<u32>> {
    (0..g.len()).map(|i| g.bfs([i])).collect()
}

/// Iterative-deepening search with the largest token displacement as the
/// admissible estimate. `state[i]` is the goal vertex of the token at `i`;
/// for colored searches it is `usize::MAX` for white tokens and the goal
/// test compares against the black set instead.
struct Ida {
    ms: Vec<Vec<(usize, usize)>>,
    dist: Vec<Vec<u32>>,
}

impl Ida {
    fn new(g: &LatticeGraph) -> Self {
        Ida { ms: matchings(g.len(), &g.edges()), dist: all_pairs(g) }
    }

    fn labeled(&self, start: Vec<usize>) -> u32 {
        let h = |s: &[usize]| s.iter().enumerate().map(|(i, &t)| self.dist[i][t]).max().unwrap_or(0);
        let mut bound = h(&start);
        loop {
            if self.dfs(&mut start.clone(), 0, bound, &h, &|s: &[usize]| s.iter().enumerate().all(|(i, &t)| i == t)) {
                return bound;
            }
            bound += 1;
        }
    }

    fn colored(&self, start: Vec<bool>, goal: Vec<bool>) -> u32 {
        let mut bound = 0;
        let g = goal.clone();
        loop {
            let h = |_: &[bool]| 0;
            if self.dfs(&mut start.clone(), 0, bound, &h, &|s: &[bool]| s == &g[..]) {
                return bound;
            }
            bound += 1;
        }
    }

    fn dfs<T: Copy>(
        &self,
        s: &mut Vec<T>,
        depth: u32,
        bound: u32,
        h: &dyn Fn(&[T]) -> u32,
        goal: &dyn Fn(&[T]) -> bool,
    ) -> bool {
        if goal(s) {
            return true;
        }
        if depth + h(s) > bound || depth == bound {
            return false;
        }
        for m in self.ms.iter().filter(|m| !m.is_empty()) {
            for &(a, b) in m {
                s.swap(a, b);
            }
            let found = self.dfs(s, depth + 1, bound, h, goal);
            for &(a, b) in m {
                s.swap(a, b);
            }
            if found {
                return true;
            }
        }
        false
    }
}

fn path(n: i32) -> Arc<LatticeGraph> {
    Arc::new(LatticeGraph::from_points((0..n).map(|x| Pt::new(x, 0))))
}

fn grid(w: i32, h: i32) -> Arc<LatticeGraph> {
    Arc::new(LatticeGraph::from_points((0..w).flat_map(|x| (0..h).map(move |y| Pt::new(x, y)))))
}

fn labeled(g: &Arc<LatticeGraph>, tokens: Vec<u32>) -> LabeledConfig {
    LabeledConfig::new(g.clone(), tokens).unwrap()
}

fn colored(g: &Arc<LatticeGraph>, bits: &[u8]) -> ColorConfig {
    ColorConfig::new(g.clone(), bits.iter().map(|&b| Color::from_bit(b == 1)).collect()).unwrap()
}

/// Goal vertex of each token of `from` when routing to `to`.
fn goals(from: &LabeledConfig, to: &LabeledConfig) -> Vec<usize> {
    from.tokens().iter().map(|t| to.tokens().iter().position(|u| u == t).unwrap()).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn ida_rt(g: &LatticeGraph) -> u32 {
    let ida = Ida::new(g);
    permutations(g.len()).into_iter().map(|p| ida.labeled(p)).max().unwrap()
}

#[test]
fn oracle_matches_independent_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..60 {
        let n = rng.gen_range(2..=6);
        let g = Arc::new(random_blob(&mut rng, n, false));
        let ida = Ida::new(&g);
        let (a, b) = shuffled(&mut rng, &g);
        assert_eq!(oracle::exact_distance(&a, &b).unwrap(), ida.labeled(goals(&a, &b)), "{:?}", g.points());
        let k = rng.gen_range(0..=n);
        let (x, y) = (random_colors(&mut rng, &g, k), random_colors(&mut rng, &g, k));
        let bits = |c: &ColorConfig| c.tokens().iter().map(|t| t.is_black()).collect::<Vec<_>>();
        assert_eq!(oracle::exact_distance_colored(&x, &y).unwrap(), ida.colored(bits(&x), bits(&y)));
    }
}

#[test]
fn routing_numbers_of_tiny_graphs() {
    let k2 = path(2);
    assert_eq!(oracle::exact_rt(&k2).unwrap(), 1);
    let p3 = path(3);
    assert_eq!(oracle::exact_rt(&p3).unwrap(), 3);
    assert_eq!(oracle::exact_urt(&p3).unwrap(), 2);
    for g in [path(4), path(5), grid(2, 2), grid(2, 3), Arc::new(LatticeGraph::from_points([
        Pt::new(1, 1),
        Pt::new(0, 1),
        Pt::new(2, 1),
        Pt::new(1, 0),
        Pt::new(1, 2),
    ]))] {
        let rt = oracle::exact_rt(&g).unwrap();
        let urt = oracle::exact_urt(&g).unwrap();
        let diameter = all_pairs(&g).into_iter().flatten().max().unwrap();
        assert!(urt <= rt && rt >= diameter, "{:?}", g.points());
        if g.len() <= 6 {
            assert_eq!(rt, ida_rt(&g), "{:?}", g.points());
        }
    }
}

#[test]
fn path_reversal_and_colored_sort() {
    let g = path(4);
    let (a, b) = (LabeledConfig::identity(g.clone()), labeled(&g, vec![4, 3, 2, 1]));
    let d = oracle::exact_distance(&a, &b).unwrap();
    assert_eq!(d, 4);
    let s = route_path(&a, &b).unwrap();
    assert!(validate(&s, &a, &b).ok && s.len() as u32 >= d && s.len() <= 4);

    let (x, y) = (colored(&g, &[1, 0, 1, 0]), colored(&g, &[1, 1, 0, 0]));
    let d = oracle::exact_distance_colored(&x, &y).unwrap();
    assert_eq!(d, Ida::new(&g).colored(vec![true, false, true, false], vec![true, true, false, false]));
    let s = route_path(&x, &y).unwrap();
    assert!(validate(&s, &x, &y).ok && s.len() as u32 >= d);
}

#[test]
fn star_rotation() {
    let g = Arc::new(LatticeGraph::from_points([
        Pt::new(1, 1),
        Pt::new(0, 1),
        Pt::new(2, 1),
        Pt::new(1, 0),
        Pt::new(1, 2),
    ]));
    let a = LabeledConfig::identity(g.clone());
    let centre = g.index_of(Pt::new(1, 1)).unwrap();
    let leaves: Vec<usize> = (0..g.len()).filter(|&i| i != centre).collect();
    let mut tokens = a.tokens().to_vec();
    for (k, &i) in leaves.iter().enumerate() {
        tokens[leaves[(k + 1) % leaves.len()]] = a.at(i);
    }
    let b = labeled(&g, tokens);
    let s = route_tree(&a, &b).unwrap();
    assert!(validate(&s, &a, &b).ok);
    assert!(s.len() <= 12);
    assert!(s.len() as u32 >= oracle::exact_distance(&a, &b).unwrap());
}

#[test]
fn trees_never_beat_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut count = 0;
    while count < 500 {
        let n = rng.gen_range(2..=oracle::LABELED_LIMIT);
        let g = Arc::new(random_blob(&mut rng, n, true));
        let id = LabeledConfig::identity(g.clone());
        let dist = oracle::labeled_distances(&id).unwrap();
        for _ in 0..25 {
            let (a, _) = shuffled(&mut rng, &g);
            let s = route_tree(&a, &id).unwrap();
            assert!(validate(&s, &a, &id).ok);
            assert!(s.len() <= 3 * n);
            assert!(s.len() as u32 >= dist[a.tokens()]);
            count += 1;
        }
    }
}

#[test]
fn rectangles_and_ramps_never_beat_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let mut shapes: Vec<Arc<LatticeGraph>> = Vec::new();
    for w in 1..=4 {
        for h in 1..=4 {
            shapes.push(grid(w, h));
        }
    }
    for _ in 0..40 {
        let (m, n) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let g = LatticeGraph::cut(&bench::random_ramp(&mut rng, m, n));
        if g.len() <= 14 {
            shapes.push(Arc::new(g));
        }
    }
    let mut checked = 0;
    for g in &shapes {
        let rect = is_rectangle(g);
        for _ in 0..20 {
            let k = rng.gen_range(0..=g.len());
            let x = random_colors(&mut rng, g, k);
            let dist = oracle::colored_distances(&x).unwrap();
            let y = random_colors(&mut rng, g, k);
            let d = dist[&y.tokens().iter().map(|t| t.is_black()).collect::<Vec<_>>()];
            let s = if rect { route_rect_unlabeled(&x, &y) } else { route_ramp_unlabeled(&x, &y) }.unwrap();
            assert!(validate(&s, &x, &y).ok);
            assert!(s.len() as u32 >= d);
            checked += 1;
        }
    }
    assert!(checked >= 500);
}

#[test]
fn burger_buns_never_beat_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut routed = 0;
    for _ in 0..400 {
        let (w, h) = (rng.gen_range(1..=4), rng.gen_range(1..=3));
        let g = Arc::new(LatticeGraph::cut(&bench::random_burger_bun(&mut rng, w, h)));
        if g.len() > 8 {
            continue;
        }
        let k = rng.gen_range(0..=g.len());
        let (x, y) = (random_colors(&mut rng, &g, k), random_colors(&mut rng, &g, k));
        match route_burger_bun_colored(&x, &y) {
            Ok(s) => {
                assert!(validate(&s, &x, &y).ok);
                assert!(s.len() as u32 >= oracle::exact_distance_colored(&x, &y).unwrap());
                routed += 1;
            }
            Err(e) => assert!(not_applicable(&e), "{e}"),
        }
    }
    assert!(routed >= 50, "only {routed} burger buns routed");
}
