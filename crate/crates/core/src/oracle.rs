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

//! Exact routing distances by breadth-first search over configurations.
//! Only for tiny graphs; every entry point enforces a hard size guard.

use std::collections::{HashMap, VecDeque};

use crate::error::{Result, RouteError};
use crate::lattice::LatticeGraph;
use crate::par;
use crate::routing::{ColorConfig, LabeledConfig};

/// Largest graph for labeled distances.
pub const LABELED_LIMIT: usize = 8;
/// Largest graph for colored distances and `urt`.
pub const COLORED_LIMIT: usize = 16;
/// Largest graph for `rt`.
pub const RT_LIMIT: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Labeled,
    Colored,
}

fn guard(what: &'static str, size: usize, limit: usize) -> Result<()> {
    if size > limit {
        Err(RouteError::ResourceGuard { what, size, limit })
    } else {
        Ok(())
    }
}

/// A graph with its nonempty matchings, which are exactly the possible
/// routing steps.
#[derive(Clone, Debug)]
pub struct StateSpace {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub matchings: Vec<Vec<(usize, usize)>>,
}

impl StateSpace {
    pub fn new(g: &LatticeGraph) -> Self {
        let edges = g.edges();
        let mut matchings = Vec::new();
        let mut cur = Vec::new();
        collect_matchings(&edges, 0, 0, &mut cur, &mut matchings);
        StateSpace {
            n: g.len(),
            edges,
            matchings,
        }
    }
}

/// Include/exclude each edge in canonical order.
fn collect_matchings(
    edges: &[(usize, usize)],
    k: usize,
    used: u64,
    cur: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    if k == edges.len() {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        return;
    }
    collect_matchings(edges, k + 1, used, cur, out);
    let (a, b) = edges[k];
    let m = 1u64 << a | 1u64 << b;
    if used & m == 0 {
        cur.push((a, b));
        collect_matchings(edges, k + 1, used | m, cur, out);
        cur.pop();
    }
}

/// Permutation state: four bits per vertex holding the target index of
/// the token there.
fn pack(v: &[usize]) -> u64 {
    v.iter().enumerate().fold(0, |s, (i, &x)| s | (x as u64) << (4 * i))
}

fn swap_nibbles(s: u64, a: usize, b: usize) -> u64 {
    let (x, y) = ((s >> (4 * a)) & 15, (s >> (4 * b)) & 15);
    let clear = !(15u64 << (4 * a) | 15u64 << (4 * b));
    (s & clear) | x << (4 * b) | y << (4 * a)
}

/// Distances from `start` to all reached states, stopping early at `goal`.
fn bfs_labeled(space: &StateSpace, start: u64, goal: Option<u64>) -> HashMap<u64, u32> {
    let mut dist = HashMap::from([(start, 0)]);
    let mut q = VecDeque::from([start]);
    while let Some(s) = q.pop_front() {
        if Some(s) == goal {
            break;
        }
        let d = dist[&s];
        for m in &space.matchings {
            let t = m.iter().fold(s, |t, &(a, b)| swap_nibbles(t, a, b));
            dist.entry(t).or_insert_with(|| {
                q.push_back(t);
                d + 1
            });
        }
    }
    dist
}

/// Colored neighbors: matchings of the edges whose endpoints differ.
fn colored_neighbors(edges: &[(usize, usize)], s: u32, out: &mut Vec<u32>) {
    let active: Vec<u32> = edges
        .iter()
        .filter(|&&(a, b)| (s >> a ^ s >> b) & 1 == 1)
        .map(|&(a, b)| 1 << a | 1 << b)
        .collect();
    fn rec(active: &[u32], k: usize, used: u32, s: u32, any: bool, out: &mut Vec<u32>) {
        if k == active.len() {
            if any {
                out.push(s);
            }
            return;
        }
        rec(active, k + 1, used, s, any, out);
        if used & active[k] == 0 {
            rec(active, k + 1, used | active[k], s ^ active[k], true, out);
        }
    }
    rec(&active, 0, 0, s, false, out);
}

fn bfs_colored(edges: &[(usize, usize)], start: u32, goal: Option<u32>) -> HashMap<u32, u32> {
    let mut dist = HashMap::from([(start, 0)]);
    let mut q = VecDeque::from([start]);
    let mut buf = Vec::new();
    while let Some(s) = q.pop_front() {
        if Some(s) == goal {
            break;
        }
        let d = dist[&s];
        buf.clear();
        colored_neighbors(edges, s, &mut buf);
        for &t in &buf {
            dist.entry(t).or_insert_with(|| {
                q.push_back(t);
                d + 1
            });
        }
    }
    dist
}

fn connected(g: &LatticeGraph) -> Result<()> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(RouteError::Disconnected)
    }
}

/// Minimum number of steps between two labeled configurations.
pub fn exact_distance(from: &LabeledConfig, to: &LabeledConfig) -> Result<u32> {
    let g = from.graph();
    guard("labeled oracle vertices", g.len(), LABELED_LIMIT)?;
    connected(g)?;
    if !from.same_graph(to) || !from.same_tokens(to) {
        return Err(RouteError::ConfigMismatch("configurations do not match".into()));
    }
    let dest = from.destinations(to)?;
    let goal = pack(&(0..g.len()).collect::<Vec<_>>());
    let dist = bfs_labeled(&StateSpace::new(g), pack(&dest), Some(goal));
    dist.get(&goal).copied().ok_or_else(|| RouteError::invariant("target unreachable"))
}

fn color_mask(c: &ColorConfig) -> u32 {
    c.tokens().iter().enumerate().fold(0, |m, (i, t)| m | (t.is_black() as u32) << i)
}

/// Minimum number of steps between two colored configurations.
pub fn exact_distance_colored(from: &ColorConfig, to: &ColorConfig) -> Result<u32> {
    let g = from.graph();
    guard("colored oracle vertices", g.len(), COLORED_LIMIT)?;
    connected(g)?;
    if !from.same_graph(to) || from.black_count() != to.black_count() {
        return Err(RouteError::ConfigMismatch("configurations do not match".into()));
    }
    let (s, t) = (color_mask(from), color_mask(to));
    let dist = bfs_colored(&g.edges(), s, Some(t));
    dist.get(&t).copied().ok_or_else(|| RouteError::invariant("target unreachable"))
}

/// Distances from `from` to every reachable labeled configuration, keyed
/// by token vector in canonical vertex order.
pub fn labeled_distances(from: &LabeledConfig) -> Result<HashMap<Vec<u32>, u32>> {
    let g = from.graph();
    guard("labeled oracle vertices", g.len(), LABELED_LIMIT)?;
    connected(g)?;
    let n = g.len();
    let dist = bfs_labeled(&StateSpace::new(g), pack(&(0..n).collect::<Vec<_>>()), None);
    // State `s` holds, at vertex i, the index of the `from` vertex whose
    // token sits there.
    Ok(dist
        .into_iter()
        .map(|(s, d)| ((0..n).map(|i| from.at(((s >> (4 * i)) & 15) as usize)).collect(), d))
        .collect())
}

/// Distances from `from` to every colored configuration with the same
/// black count, keyed by black flags in canonical vertex order.
pub fn colored_distances(from: &ColorConfig) -> Result<HashMap<Vec<bool>, u32>> {
    let g = from.graph();
    guard("colored oracle vertices", g.len(), COLORED_LIMIT)?;
    connected(g)?;
    let n = g.len();
    let dist = bfs_colored(&g.edges(), color_mask(from), None);
    Ok(dist
        .into_iter()
        .map(|(s, d)| ((0..n).map(|i| s >> i & 1 == 1).collect(), d))
        .collect())
}

/// Routing number: the largest distance from the identity to any
/// permutation. Steps are invertible and compose with relabeling, so one
/// source suffices.
pub fn exact_rt(g: &LatticeGraph) -> Result<u32> {
    guard("rt oracle vertices", g.len(), RT_LIMIT)?;
    connected(g)?;
    let id = pack(&(0..g.len()).collect::<Vec<_>>());
    Ok(bfs_labeled(&StateSpace::new(g), id, None).into_values().max().unwrap_or(0))
}

/// Unlabeled routing number: the largest colored distance over all black
/// counts and all pairs of arrangements.
pub fn exact_urt(g: &LatticeGraph) -> Result<u32> {
    guard("urt oracle vertices", g.len(), COLORED_LIMIT)?;
    connected(g)?;
    let n = g.len();
    let edges = g.edges();
    // Complementing colors is an isomorphism, so black counts up to n/2 suffice.
    let starts: Vec<u32> = (0..1u32 << n).filter(|s| s.count_ones() as usize <= n / 2).collect();
    let ecc = par::map(starts, |s| bfs_colored(&edges, s, None).into_values().max().unwrap_or(0));
    Ok(ecc.into_iter().max().unwrap_or(0))
}

/// Dispatches on `mode` for the CLI.
pub fn exact_number(g: &LatticeGraph, mode: Mode) -> Result<u32> {
    match mode {
        Mode::Labeled => exact_rt(g),
        Mode::Colored => exact_urt(g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Pt;
    use std::sync::Arc;

    fn path(n: i32) -> Arc<LatticeGraph> {
        Arc::new(LatticeGraph::from_points((0..n).map(|x| Pt::new(x, 0))))
    }

    #[test]
    fn edge_and_identity() {
        let g = path(2);
        assert_eq!(exact_rt(&g).unwrap(), 1);
        assert_eq!(exact_urt(&g).unwrap(), 1);
        let a = LabeledConfig::identity(g.clone());
        assert_eq!(exact_distance(&a, &a).unwrap(), 0);
        let b = LabeledConfig::new(g, vec![2, 1]).unwrap();
        assert_eq!(exact_distance(&a, &b).unwrap(), 1);
    }

    #[test]
    fn matchings_of_small_paths() {
        // Nonempty matchings of P_n: Fibonacci(n + 1) - 1.
        for (n, want) in [(2, 1), (3, 2), (4, 4), (5, 7)] {
            assert_eq!(StateSpace::new(&path(n)).matchings.len(), want);
        }
    }

    #[test]
    fn distance_maps_agree_with_single_queries() {
        let g = Arc::new(LatticeGraph::from_points([Pt::new(0, 0), Pt::new(1, 0), Pt::new(0, 1), Pt::new(1, 1)]));
        let a = LabeledConfig::new(g.clone(), vec![4, 2, 3, 1]).unwrap();
        let all = labeled_distances(&a).unwrap();
        assert_eq!(all.len(), 24);
        for (t, d) in &all {
            let b = LabeledConfig::new(g.clone(), t.clone()).unwrap();
            assert_eq!(exact_distance(&a, &b).unwrap(), *d);
        }
        let c = ColorConfig::from_fn(g.clone(), |p| crate::routing::Color::from_bit(p.x == 0));
        let all = colored_distances(&c).unwrap();
        assert_eq!(all.len(), 6);
        for (t, d) in &all {
            let b = ColorConfig::new(g.clone(), t.iter().map(|&x| crate::routing::Color::from_bit(x)).collect()).unwrap();
            assert_eq!(exact_distance_colored(&c, &b).unwrap(), *d);
        }
    }

    #[test]
    fn guards() {
        let g = LatticeGraph::from_points((0..3).flat_map(|x| (0..3).map(move |y| Pt::new(x, y))));
        assert!(matches!(exact_rt(&g), Err(RouteError::ResourceGuard { .. })));
    }
}
