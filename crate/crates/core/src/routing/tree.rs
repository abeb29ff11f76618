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

//! Routing on arbitrary connected graphs through a spanning tree.
//!
//! When the graph has a row or column snake (a Hamiltonian path that runs
//! along rows or columns, alternating direction as needed), the path router
//! is used directly. Otherwise a breadth-first spanning tree is split at its
//! most balanced edge; tokens that must cross the edge bubble towards its
//! endpoints and swap across it, and both sides recurse in parallel.

use crate::error::{Result, RouteError};
use crate::lattice::{IsoTransform, LatticeGraph, Pt};
use crate::par;

use super::config::{Config, Token};
use super::path::odd_even;
use super::schedule::{ensure_valid, zip_parallel, Schedule, Step};

/// Routes on any connected graph. Length at most `3n`.
pub fn route_tree<T: Token>(from: &Config<T>, to: &Config<T>) -> Result<Schedule> {
    let g = from.graph();
    if !g.is_connected() {
        return Err(RouteError::Disconnected);
    }
    let dest = from.destinations(to)?;
    let s = Schedule::from_steps(tree_steps(g, dest), 3 * g.len() as u64);
    ensure_valid("tree", &s, from, to)?;
    Ok(s)
}

/// Steps moving the token at vertex `i` to vertex `dest[i]` for all `i`.
pub(crate) fn tree_steps(g: &LatticeGraph, dest: Vec<usize>) -> Vec<Step> {
    if dest.iter().enumerate().all(|(i, &d)| i == d) {
        return Vec::new();
    }
    if let Some(order) = g.path_order().or_else(|| snake(g)) {
        let line: Vec<Pt> = order.iter().map(|&i| g.point(i)).collect();
        let mut rank = vec![0; g.len()];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }
        let mut keys: Vec<usize> = order.iter().map(|&v| rank[dest[v]]).collect();
        return odd_even(&line, &mut keys);
    }
    let root = center(g);
    let mut parent = vec![usize::MAX; g.len()];
    let mut seen = vec![false; g.len()];
    let mut queue = std::collections::VecDeque::from([root]);
    seen[root] = true;
    while let Some(u) = queue.pop_front() {
        for v in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    let mut adj = vec![Vec::new(); g.len()];
    for v in 0..g.len() {
        if parent[v] != usize::MAX {
            adj[v].push(parent[v]);
            adj[parent[v]].push(v);
        }
    }
    let sub = SubTree {
        pts: g.points().to_vec(),
        adj,
    };
    sub.route(dest)
}

/// A double-sweep estimate of a central vertex.
fn center(g: &LatticeGraph) -> usize {
    let d0 = g.bfs([0]);
    let far = (0..g.len()).max_by_key(|&i| (d0[i], std::cmp::Reverse(i))).unwrap();
    let d1 = g.bfs([far]);
    let other = (0..g.len()).max_by_key(|&i| (d1[i], std::cmp::Reverse(i))).unwrap();
    let d2 = g.bfs([other]);
    (0..g.len())
        .min_by_key(|&i| (d1[i].max(d2[i]), i))
        .unwrap()
}

/// A Hamiltonian path through the rows (or, failing that, the columns),
/// each traversed in one direction.
fn snake(g: &LatticeGraph) -> Option<Vec<usize>> {
    if let Some(p) = row_snake(g) {
        return Some(p);
    }
    let t = IsoTransform::transpose();
    let tg = g.transform(&t);
    let p = row_snake(&tg)?;
    Some(
        p.into_iter()
            .map(|i| g.index_of(t.apply(tg.point(i))).unwrap())
            .collect(),
    )
}

fn row_snake(g: &LatticeGraph) -> Option<Vec<usize>> {
    let rows = g.rows();
    for w in rows.windows(2) {
        if w[0].0 != w[1].0 + 1 {
            return None;
        }
    }
    for (_, r) in &rows {
        if (r[r.len() - 1].x - r[0].x) as usize + 1 != r.len() {
            return None;
        }
    }
    // reach[i][d]: row i can be entered and traversed in direction d
    // (0 = left to right, 1 = right to left) continuing a snake from the top.
    let ends = |r: &[Pt], d: usize| {
        let (a, b) = (r[0].x, r[r.len() - 1].x);
        if d == 0 {
            (a, b)
        } else {
            (b, a)
        }
    };
    let m = rows.len();
    let mut from = vec![[None::<usize>; 2]; m];
    let mut ok = vec![[false; 2]; m];
    ok[0] = [true, rows[0].1.len() > 1];
    for i in 1..m {
        for d in 0..2 {
            if d == 1 && rows[i].1.len() == 1 {
                continue;
            }
            let (start, _) = ends(rows[i].1, d);
            for pd in 0..2 {
                if ok[i - 1][pd] && ends(rows[i - 1].1, pd).1 == start {
                    ok[i][d] = true;
                    from[i][d] = Some(pd);
                    break;
                }
            }
        }
    }
    let mut d = (0..2).find(|&d| ok[m - 1][d])?;
    let mut dirs = vec![0; m];
    for i in (0..m).rev() {
        dirs[i] = d;
        if i > 0 {
            d = from[i][d].unwrap();
        }
    }
    let mut out = Vec::with_capacity(g.len());
    for (i, (_, r)) in rows.iter().enumerate() {
        let idx = r.iter().map(|&p| g.index_of(p).unwrap());
        if dirs[i] == 0 {
            out.extend(idx);
        } else {
            out.extend(idx.rev());
        }
    }
    Some(out)
}

/// A tree on local vertex indices.
struct SubTree {
    pts: Vec<Pt>,
    adj: Vec<Vec<usize>>,
}

impl SubTree {
    fn len(&self) -> usize {
        self.pts.len()
    }

    fn route(self, mut dest: Vec<usize>) -> Vec<Step> {
        let n = self.len();
        if n <= 1 || dest.iter().enumerate().all(|(i, &d)| i == d) {
            return Vec::new();
        }
        if let Some(order) = self.path_order() {
            let line: Vec<Pt> = order.iter().map(|&i| self.pts[i]).collect();
            let mut rank = vec![0; n];
            for (r, &v) in order.iter().enumerate() {
                rank[v] = r;
            }
            let mut keys: Vec<usize> = order.iter().map(|&v| rank[dest[v]]).collect();
            return odd_even(&line, &mut keys);
        }
        let (a, b, side) = self.balanced_edge();
        let mut steps = self.exchange(a, b, &side, &mut dest);
        let (left, right) = self.split(&side, &dest);
        let (sa, sb) = par::join(
            move || left.0.route(left.1),
            move || right.0.route(right.1),
        );
        let tail = zip_parallel([
            Schedule::from_steps(sa, 0),
            Schedule::from_steps(sb, 0),
        ]);
        steps.extend(tail.steps);
        steps
    }

    fn path_order(&self) -> Option<Vec<usize>> {
        if self.adj.iter().any(|a| a.len() > 2) {
            return None;
        }
        let start = (0..self.len()).find(|&i| self.adj[i].len() <= 1)?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = self.adj[cur].iter().find(|&&v| v != prev) {
            prev = cur;
            cur = next;
            order.push(cur);
        }
        Some(order)
    }

    /// Edge `(a, b)` minimizing the larger side; `side[v]` is true on `a`'s side.
    fn balanced_edge(&self) -> (usize, usize, Vec<bool>) {
        let n = self.len();
        let mut parent = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![0];
        let mut seen = vec![false; n];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            order.push(u);
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = u;
                    stack.push(v);
                }
            }
        }
        let mut size = vec![1usize; n];
        for &u in order.iter().rev() {
            if parent[u] != usize::MAX {
                size[parent[u]] += size[u];
            }
        }
        let v = (1..n)
            .filter(|&v| parent[v] != usize::MAX)
            .min_by_key(|&v| (size[v].max(n - size[v]), v))
            .unwrap();
        let mut side = vec![false; n];
        let mut stack = vec![v];
        side[v] = true;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if w != parent[u] && !side[w] {
                    side[w] = true;
                    stack.push(w);
                }
            }
        }
        (v, parent[v], side)
    }

    /// Moves every token whose destination lies across edge `(a, b)` over it.
    fn exchange(&self, a: usize, b: usize, side: &[bool], dest: &mut [usize]) -> Vec<Step> {
        let n = self.len();
        let marked = |v: usize, dest: &[usize]| side[v] != side[dest[v]];
        // Orient each side as a tree rooted at its endpoint of the cut edge.
        let mut parent = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for r in [a, b] {
            seen[r] = true;
            let mut queue = std::collections::VecDeque::from([r]);
            while let Some(u) = queue.pop_front() {
                order.push(u);
                for &v in &self.adj[u] {
                    if !seen[v] && side[v] == side[u] {
                        seen[v] = true;
                        parent[v] = u;
                        queue.push_back(v);
                    }
                }
            }
        }
        let mut count = vec![0usize; n];
        for &u in order.iter().rev() {
            if marked(u, dest) {
                count[u] += 1;
            }
            if parent[u] != usize::MAX {
                count[parent[u]] += count[u];
            }
        }
        let mut steps = Vec::new();
        let mut used = vec![false; n];
        while count[a] + count[b] > 0 {
            used.iter_mut().for_each(|u| *u = false);
            let mut step = Step::new();
            if marked(a, dest) && marked(b, dest) {
                dest.swap(a, b);
                step.push(self.pts[a], self.pts[b]);
                used[a] = true;
                used[b] = true;
                count[a] -= 1;
                count[b] -= 1;
            }
            for &u in &order {
                if used[u] || marked(u, dest) {
                    continue;
                }
                let child = self.adj[u]
                    .iter()
                    .copied()
                    .filter(|&c| parent[c] == u && !used[c] && marked(c, dest))
                    .max_by_key(|&c| (count[c], std::cmp::Reverse(c)));
                if let Some(c) = child {
                    dest.swap(u, c);
                    count[c] -= 1;
                    used[u] = true;
                    used[c] = true;
                    step.push(self.pts[u], self.pts[c]);
                }
            }
            debug_assert!(!step.is_empty());
            steps.push(step);
        }
        steps
    }

    fn split(&self, side: &[bool], dest: &[usize]) -> ((SubTree, Vec<usize>), (SubTree, Vec<usize>)) {
        let n = self.len();
        let mut local = vec![0usize; n];
        let mut counts = [0usize; 2];
        for v in 0..n {
            let s = side[v] as usize;
            local[v] = counts[s];
            counts[s] += 1;
        }
        let mut parts: [(SubTree, Vec<usize>); 2] = [0, 1].map(|s| {
            (
                SubTree {
                    pts: Vec::with_capacity(counts[s]),
                    adj: Vec::with_capacity(counts[s]),
                },
                Vec::with_capacity(counts[s]),
            )
        });
        for v in 0..n {
            let s = side[v] as usize;
            let part = &mut parts[s];
            part.0.pts.push(self.pts[v]);
            part.0.adj.push(
                self.adj[v]
                    .iter()
                    .filter(|&&w| side[w] == side[v])
                    .map(|&w| local[w])
                    .collect(),
            );
            debug_assert_eq!(side[dest[v]], side[v]);
            part.1.push(local[dest[v]]);
        }
        let [p0, p1] = parts;
        (p0, p1)
    }
}
