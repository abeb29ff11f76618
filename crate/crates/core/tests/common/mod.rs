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

//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;
use std::sync::Arc;

use gridroute::geometry::{hull, lattice_points, Point};
use gridroute::lattice::{LatticeGraph, Pt};
use gridroute::routing::convex::ConvexRouter;
use gridroute::routing::{
    route_burger_bun, route_burger_bun_colored, route_path, route_ramp_labeled, route_ramp_unlabeled, route_rect,
    route_rect_unlabeled, route_tree, ColorConfig, LabeledConfig, Schedule,
};
use gridroute::{Result, RouteError};
use rand::seq::SliceRandom;
use rand::Rng;

/// Whether a finite point set is the full set of lattice points of its hull.
pub fn lattice_convex(s: &[Pt]) -> bool {
    let pts: Vec<Point> = s.iter().map(|&p| Point::from(p)).collect();
    let h = hull(&pts);
    h.is_degenerate() || lattice_points(&h).len() == s.len()
}

/// Every connected convex cut graph with at most `max_n` vertices, up to
/// translation, grouped by size (index 0 holds one-vertex graphs).
/// Grown vertex by vertex, keeping only convex sets.
pub fn convex_shapes(max_n: usize) -> Vec<Vec<Vec<Pt>>> {
    let mut out = vec![vec![vec![Pt::new(0, 0)]]];
    while out.len() < max_n {
        let mut next: HashSet<Vec<Pt>> = HashSet::new();
        for s in out.last().unwrap() {
            for p in s {
                for q in p.neighbors() {
                    if s.contains(&q) {
                        continue;
                    }
                    let mut t = s.clone();
                    t.push(q);
                    let mx = t.iter().map(|p| p.x).min().unwrap();
                    let my = t.iter().map(|p| p.y).min().unwrap();
                    let mut t: Vec<Pt> = t.iter().map(|p| Pt::new(p.x - mx, p.y - my)).collect();
                    t.sort();
                    if lattice_convex(&t) {
                        next.insert(t);
                    }
                }
            }
        }
        let mut v: Vec<Vec<Pt>> = next.into_iter().collect();
        v.sort();
        out.push(v);
    }
    out
}

/// Random connected vertex set grown from the origin; with `tree_only`
/// the induced graph is a tree.
pub fn random_blob(rng: &mut impl Rng, n: usize, tree_only: bool) -> LatticeGraph {
    let mut pts = vec![Pt::new(0, 0)];
    let mut set = HashSet::from([Pt::new(0, 0)]);
    while pts.len() < n {
        let p = pts[rng.gen_range(0..pts.len())];
        let q = p.neighbors()[rng.gen_range(0..4)];
        if set.contains(&q) {
            continue;
        }
        if tree_only && q.neighbors().iter().filter(|r| set.contains(r)).count() != 1 {
            continue;
        }
        set.insert(q);
        pts.push(q);
    }
    LatticeGraph::from_points(pts)
}

pub fn shuffled(rng: &mut impl Rng, g: &Arc<LatticeGraph>) -> (LabeledConfig, LabeledConfig) {
    let a = LabeledConfig::identity(g.clone());
    let mut t = a.tokens().to_vec();
    t.shuffle(rng);
    (a, LabeledConfig::new(g.clone(), t).unwrap())
}

pub fn random_colors(rng: &mut impl Rng, g: &Arc<LatticeGraph>, blacks: usize) -> ColorConfig {
    let mut bits: Vec<bool> = (0..g.len()).map(|i| i < blacks).collect();
    bits.shuffle(rng);
    ColorConfig::new(g.clone(), bits.into_iter().map(gridroute::routing::Color::from_bit).collect()).unwrap()
}

/// Errors that mean "this router does not apply to this graph".
pub fn not_applicable(e: &RouteError) -> bool {
    matches!(e, RouteError::Precondition(_) | RouteError::NotAPath)
}

pub fn is_rectangle(g: &LatticeGraph) -> bool {
    g.len() == (g.width() as usize + 1) * (g.height() as usize + 1)
}

/// Every router that accepts the graph, by name.
pub fn labeled_routers(from: &LabeledConfig, to: &LabeledConfig) -> Vec<(&'static str, Result<Schedule>)> {
    let g = from.graph();
    let mut out = vec![
        ("convex", ConvexRouter::new(g).and_then(|r| r.route(from, to))),
        ("tree", route_tree(from, to)),
        ("ramp", route_ramp_labeled(from, to)),
        ("burgerbun", route_burger_bun(from, to)),
    ];
    if g.path_order().is_some() {
        out.push(("path", route_path(from, to)));
    }
    if is_rectangle(g) {
        out.push(("rect", route_rect(from, to)));
    }
    out.retain(|(_, r)| !matches!(r, Err(e) if not_applicable(e)));
    out
}

pub fn colored_routers(from: &ColorConfig, to: &ColorConfig) -> Vec<(&'static str, Result<Schedule>)> {
    let g = from.graph();
    let mut out = vec![
        ("convex", ConvexRouter::new(g).and_then(|r| r.route_colored(from, to))),
        ("tree", route_tree(from, to)),
        ("ramp", route_ramp_unlabeled(from, to)),
        ("burgerbun", route_burger_bun_colored(from, to)),
    ];
    if g.path_order().is_some() {
        out.push(("path", route_path(from, to)));
    }
    if is_rectangle(g) {
        out.push(("rect", route_rect_unlabeled(from, to)));
    }
    out.retain(|(_, r)| !matches!(r, Err(e) if not_applicable(e)));
    out
}
