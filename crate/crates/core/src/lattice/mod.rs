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

//! Lattice graphs: finite sets of integer points joined by unit edges.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::geometry::{lattice_points, Point, Polygon};

mod ramp;
mod trim;

pub use ramp::{canonicalize_ramp, check_ramp, half_cols, half_rows, quadrants, Quadrant, RampGraph, Violation};
pub use trim::{drop_rightmost, psi, skin, trim_margins, Trimmed, VertexMap};

/// An integer lattice point.
///
/// The ordering is the canonical vertex order: rows from top to bottom,
/// left to right within a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pt {
    pub x: i32,
    pub y: i32,
}

impl Pt {
    pub const fn new(x: i32, y: i32) -> Self {
        Pt { x, y }
    }

    pub fn manhattan(self, other: Pt) -> u32 {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y)
    }

    pub fn is_adjacent(self, other: Pt) -> bool {
        self.manhattan(other) == 1
    }

    pub fn neighbors(self) -> [Pt; 4] {
        [
            Pt::new(self.x, self.y + 1),
            Pt::new(self.x - 1, self.y),
            Pt::new(self.x + 1, self.y),
            Pt::new(self.x, self.y - 1),
        ]
    }
}

impl Ord for Pt {
    fn cmp(&self, other: &Self) -> Ordering {
        other.y.cmp(&self.y).then(self.x.cmp(&other.x))
    }
}

impl PartialOrd for Pt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for Pt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

const ABSENT: u32 = u32::MAX;

/// Induced subgraph of the square lattice on a finite vertex set.
///
/// Vertices are kept in canonical order and indexed through a dense
/// bounding-box table, so membership and index lookups are O(1).
#[derive(Clone, Debug)]
pub struct LatticeGraph {
    points: Vec<Pt>,
    min_x: i32,
    min_y: i32,
    box_w: i32,
    box_h: i32,
    index: Vec<u32>,
}

impl PartialEq for LatticeGraph {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
    }
}

impl Eq for LatticeGraph {}

impl LatticeGraph {
    pub fn from_points(points: impl IntoIterator<Item = Pt>) -> Self {
        let mut points: Vec<Pt> = points.into_iter().collect();
        points.sort();
        points.dedup();
        Self::from_sorted(points)
    }

    fn from_sorted(points: Vec<Pt>) -> Self {
        if points.is_empty() {
            return LatticeGraph {
                points,
                min_x: 0,
                min_y: 0,
                box_w: 0,
                box_h: 0,
                index: Vec::new(),
            };
        }
        let min_x = points.iter().map(|p| p.x).min().unwrap();
        let max_x = points.iter().map(|p| p.x).max().unwrap();
        let min_y = points.iter().map(|p| p.y).min().unwrap();
        let max_y = points.iter().map(|p| p.y).max().unwrap();
        let box_w = max_x - min_x + 1;
        let box_h = max_y - min_y + 1;
        let mut index = vec![ABSENT; box_w as usize * box_h as usize];
        for (i, p) in points.iter().enumerate() {
            index[((p.y - min_y) * box_w + (p.x - min_x)) as usize] = i as u32;
        }
        LatticeGraph {
            points,
            min_x,
            min_y,
            box_w,
            box_h,
            index,
        }
    }

    /// The graph cut out by a polygon.
    pub fn cut(poly: &Polygon) -> Self {
        Self::from_sorted(lattice_points(poly))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Pt] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Pt {
        self.points[i]
    }

    pub fn index_of(&self, p: Pt) -> Option<usize> {
        let dx = p.x - self.min_x;
        let dy = p.y - self.min_y;
        if dx < 0 || dy < 0 || dx >= self.box_w || dy >= self.box_h {
            return None;
        }
        let v = self.index[(dy * self.box_w + dx) as usize];
        (v != ABSENT).then_some(v as usize)
    }

    pub fn contains(&self, p: Pt) -> bool {
        self.index_of(p).is_some()
    }

    pub fn min_x(&self) -> i32 {
        self.min_x
    }

    pub fn min_y(&self) -> i32 {
        self.min_y
    }

    pub fn max_x(&self) -> i32 {
        self.min_x + self.box_w - 1
    }

    pub fn max_y(&self) -> i32 {
        self.min_y + self.box_h - 1
    }

    /// Width as a lattice graph (max x minus min x).
    pub fn width(&self) -> u32 {
        if self.is_empty() {
            0
        } else {
            (self.box_w - 1) as u32
        }
    }

    pub fn height(&self) -> u32 {
        if self.is_empty() {
            0
        } else {
            (self.box_h - 1) as u32
        }
    }

    /// `w(G) + h(G)`.
    pub fn perimeter_measure(&self) -> u64 {
        self.width() as u64 + self.height() as u64
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.points[i]
            .neighbors()
            .into_iter()
            .filter_map(move |q| self.index_of(q))
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors(i).count()
    }

    /// Edges `(i, j)` with `i < j`, in canonical order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, p) in self.points.iter().enumerate() {
            for q in [Pt::new(p.x + 1, p.y), Pt::new(p.x, p.y - 1)] {
                if let Some(j) = self.index_of(q) {
                    out.push((i.min(j), i.max(j)));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Breadth-first distances from a set of sources; `u32::MAX` if unreachable.
    pub fn bfs(&self, sources: impl IntoIterator<Item = usize>) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.len()];
        let mut queue = VecDeque::new();
        for s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for v in self.neighbors(u) {
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Component id per vertex and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.len()];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.len() {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for v in self.neighbors(u) {
                    if comp[v] == usize::MAX {
                        comp[v] = count;
                        stack.push(v);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.components().1 <= 1
    }

    /// The induced subgraph on the given points (which must all be present).
    pub fn induced(&self, pts: impl IntoIterator<Item = Pt>) -> LatticeGraph {
        let g = LatticeGraph::from_points(pts);
        debug_assert!(g.points.iter().all(|&p| self.contains(p)));
        g
    }

    /// Rows as `(y, points left to right)`, top row first.
    pub fn rows(&self) -> Vec<(i32, &[Pt])> {
        let mut out = Vec::new();
        let mut start = 0;
        while start < self.points.len() {
            let y = self.points[start].y;
            let mut end = start;
            while end < self.points.len() && self.points[end].y == y {
                end += 1;
            }
            out.push((y, &self.points[start..end]));
            start = end;
        }
        out
    }

    /// If the graph is a simple path, its vertex indices from one end to the other.
    pub fn path_order(&self) -> Option<Vec<usize>> {
        let n = self.len();
        if n == 0 {
            return Some(Vec::new());
        }
        if n == 1 {
            return Some(vec![0]);
        }
        if self.edge_count() != n - 1 || (0..n).any(|i| self.degree(i) > 2) {
            return None;
        }
        let start = (0..n).find(|&i| self.degree(i) == 1)?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while order.len() < n {
            let next = self.neighbors(cur).find(|&v| v != prev)?;
            prev = cur;
            cur = next;
            order.push(cur);
        }
        Some(order)
    }

    pub fn transform(&self, t: &IsoTransform) -> LatticeGraph {
        LatticeGraph::from_points(self.points.iter().map(|&p| t.apply(p)))
    }

    /// Textual dump: one line per row from the top, prefixed by `y`, with
    /// `#` for a vertex and `.` for a hole inside the bounding box.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        if self.is_empty() {
            return s;
        }
        let pad = self
            .max_y()
            .to_string()
            .len()
            .max(self.min_y.to_string().len());
        for y in (self.min_y..=self.max_y()).rev() {
            let _ = write!(s, "{:>pad$} ", y, pad = pad);
            for x in self.min_x..=self.max_x() {
                s.push(if self.contains(Pt::new(x, y)) { '#' } else { '.' });
            }
            s.push('\n');
        }
        s
    }
}

/// One of the eight lattice symmetries followed by an integer translation:
/// `p -> M p + t` with `M` a signed permutation matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IsoTransform {
    m: [[i32; 2]; 2],
    t: (i32, i32),
}

impl IsoTransform {
    pub const IDENTITY: IsoTransform = IsoTransform {
        m: [[1, 0], [0, 1]],
        t: (0, 0),
    };

    /// The eight linear symmetries: identity, rotations by 90, 180 and 270
    /// degrees counter-clockwise, then reflections in the y-axis, the x-axis,
    /// the diagonal and the anti-diagonal.
    pub fn symmetries() -> [IsoTransform; 8] {
        let mk = |m| IsoTransform { m, t: (0, 0) };
        [
            mk([[1, 0], [0, 1]]),
            mk([[0, -1], [1, 0]]),
            mk([[-1, 0], [0, -1]]),
            mk([[0, 1], [-1, 0]]),
            mk([[-1, 0], [0, 1]]),
            mk([[1, 0], [0, -1]]),
            mk([[0, 1], [1, 0]]),
            mk([[0, -1], [-1, 0]]),
        ]
    }

    pub fn rot90() -> Self {
        Self::symmetries()[1]
    }

    pub fn transpose() -> Self {
        Self::symmetries()[6]
    }

    pub fn translation(dx: i32, dy: i32) -> Self {
        IsoTransform {
            m: [[1, 0], [0, 1]],
            t: (dx, dy),
        }
    }

    pub fn apply(&self, p: Pt) -> Pt {
        Pt::new(
            self.m[0][0] * p.x + self.m[0][1] * p.y + self.t.0,
            self.m[1][0] * p.x + self.m[1][1] * p.y + self.t.1,
        )
    }

    pub fn apply_point(&self, p: &Point) -> Point {
        let c = |v: i32| crate::geometry::rat(v as i64);
        Point::new(
            c(self.m[0][0]) * p.x + c(self.m[0][1]) * p.y + c(self.t.0),
            c(self.m[1][0]) * p.x + c(self.m[1][1]) * p.y + c(self.t.1),
        )
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &IsoTransform) -> IsoTransform {
        let a = &self.m;
        let b = &first.m;
        let m = [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ];
        let tp = self.apply(Pt::new(first.t.0, first.t.1));
        IsoTransform { m, t: (tp.x, tp.y) }
    }

    /// Linear part, row-major.
    pub fn matrix(&self) -> [[i32; 2]; 2] {
        self.m
    }

    pub fn inverse(&self) -> IsoTransform {
        // Signed permutation matrices are orthogonal.
        let m = [[self.m[0][0], self.m[1][0]], [self.m[0][1], self.m[1][1]]];
        let lin = IsoTransform { m, t: (0, 0) };
        let t = lin.apply(Pt::new(-self.t.0, -self.t.1));
        IsoTransform { m, t: (t.x, t.y) }
    }

    /// Whether the transform exchanges the roles of x and y.
    pub fn swaps_axes(&self) -> bool {
        self.m[0][0] == 0
    }
}

impl Default for IsoTransform {
    fn default() -> Self {
        Self::IDENTITY
    }
}
