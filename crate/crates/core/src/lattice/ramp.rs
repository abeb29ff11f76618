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

//! Ramp-like graphs: contiguous rows from x = 0, contiguous columns from
//! y = 0 and a discretely convex right border.

use std::fmt;

use crate::error::{Result, RouteError};

use super::{IsoTransform, LatticeGraph, Pt};

/// A validated ramp-like graph anchored at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RampGraph {
    graph: LatticeGraph,
    row_end: Vec<i32>,
    col_top: Vec<i32>,
}

/// Why a graph failed the ramp-like check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A row does not run contiguously from x = 0; `missing` is absent.
    RowGap { missing: Pt },
    /// A column does not run contiguously from y = 0; `missing` is absent.
    ColumnGap { missing: Pt },
    /// `n[i-c] - n[i] < n[j-c] - n[j] - 1`.
    Border { i: usize, j: usize, c: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RowGap { missing } => write!(f, "row not contiguous: {missing} missing"),
            Violation::ColumnGap { missing } => {
                write!(f, "column not contiguous: {missing} missing")
            }
            Violation::Border { i, j, c } => {
                write!(f, "border not discretely convex at i={i}, j={j}, c={c}")
            }
        }
    }
}

impl RampGraph {
    pub fn empty() -> Self {
        RampGraph {
            graph: LatticeGraph::from_points([]),
            row_end: Vec::new(),
            col_top: Vec::new(),
        }
    }

    /// Full `rows x cols` rectangle.
    pub fn rectangle(rows: usize, cols: usize) -> Self {
        let pts = (0..rows as i32).flat_map(|y| (0..cols as i32).map(move |x| Pt::new(x, y)));
        check_ramp(&LatticeGraph::from_points(pts)).expect("rectangles are ramp-like")
    }

    /// Ramp with the given row ends `n_0, n_1, ...` (bottom to top).
    pub fn from_row_ends(row_end: &[i32]) -> std::result::Result<Self, Violation> {
        let pts = row_end
            .iter()
            .enumerate()
            .flat_map(|(y, &n)| (0..=n).map(move |x| Pt::new(x, y as i32)));
        check_ramp(&LatticeGraph::from_points(pts))
    }

    pub fn graph(&self) -> &LatticeGraph {
        &self.graph
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    /// Number of rows `m`.
    pub fn rows(&self) -> usize {
        self.row_end.len()
    }

    /// Number of columns `n`.
    pub fn cols(&self) -> usize {
        self.col_top.len()
    }

    /// Greatest x in row `y`.
    pub fn row_end(&self, y: usize) -> i32 {
        self.row_end[y]
    }

    pub fn row_ends(&self) -> &[i32] {
        &self.row_end
    }

    /// Greatest y in column `x`.
    pub fn col_top(&self, x: usize) -> i32 {
        self.col_top[x]
    }

    /// Number of vertices in row `y`.
    pub fn row_len(&self, y: usize) -> usize {
        (self.row_end[y] + 1) as usize
    }

    pub fn col_len(&self, x: usize) -> usize {
        (self.col_top[x] + 1) as usize
    }

    pub fn contains(&self, p: Pt) -> bool {
        p.y >= 0
            && (p.y as usize) < self.row_end.len()
            && p.x >= 0
            && p.x <= self.row_end[p.y as usize]
    }
}

/// Validates the three ramp-like properties after translating the minimum
/// coordinates to the origin.
pub fn check_ramp(g: &LatticeGraph) -> std::result::Result<RampGraph, Violation> {
    if g.is_empty() {
        return Ok(RampGraph::empty());
    }
    let (ox, oy) = (g.min_x(), g.min_y());
    for &p in g.points() {
        let q = Pt::new(p.x - ox, p.y - oy);
        if q.x > 0 && !g.contains(Pt::new(p.x - 1, p.y)) {
            return Err(Violation::RowGap {
                missing: Pt::new(q.x - 1, q.y),
            });
        }
    }
    for &p in g.points() {
        let q = Pt::new(p.x - ox, p.y - oy);
        if q.y > 0 && !g.contains(Pt::new(p.x, p.y - 1)) {
            return Err(Violation::ColumnGap {
                missing: Pt::new(q.x, q.y - 1),
            });
        }
    }
    let m = g.height() as usize + 1;
    let mut row_end = vec![-1; m];
    for &p in g.points() {
        let y = (p.y - oy) as usize;
        row_end[y] = row_end[y].max(p.x - ox);
    }
    if let Some(v) = border_violation(&row_end) {
        return Err(v);
    }
    let n = (row_end[0] + 1) as usize;
    let col_top = (0..n as i32)
        .map(|x| row_end.iter().rposition(|&e| e >= x).unwrap() as i32)
        .collect();
    let graph = if ox == 0 && oy == 0 {
        g.clone()
    } else {
        g.transform(&IsoTransform::translation(-ox, -oy))
    };
    Ok(RampGraph {
        graph,
        row_end,
        col_top,
    })
}

/// Checks `n[i-c] - n[i] >= n[j-c] - n[j] - 1` for all `i > j >= c > 0` by
/// keeping, for each `c`, the running maximum of the left-hand difference.
fn border_violation(n: &[i32]) -> Option<Violation> {
    let m = n.len();
    for c in 1..m {
        let mut best = i32::MIN;
        let mut best_j = 0;
        for i in c..m {
            let d = n[i - c] - n[i];
            if i > c && d < best - 1 {
                return Some(Violation::Border { i, j: best_j, c });
            }
            if d > best {
                best = d;
                best_j = i;
            }
        }
    }
    None
}

/// Finds a lattice symmetry taking `g` to a ramp-like graph. Symmetries are
/// tried in the order of [`IsoTransform::symmetries`]; the returned transform
/// maps `g` onto the ramp's coordinates.
pub fn canonicalize_ramp(
    g: &LatticeGraph,
) -> std::result::Result<(RampGraph, IsoTransform), Violation> {
    let mut first_err = None;
    for sym in IsoTransform::symmetries() {
        let moved = g.transform(&sym);
        let t = IsoTransform::translation(-moved.min_x(), -moved.min_y()).compose(&sym);
        match check_ramp(&moved) {
            Ok(r) => return Ok((r, t)),
            Err(v) => {
                first_err.get_or_insert(v);
            }
        }
    }
    Err(first_err.unwrap_or(Violation::RowGap {
        missing: Pt::new(0, 0),
    }))
}

/// One piece of a quadrant split.
#[derive(Clone, Debug)]
pub struct Quadrant {
    /// Vertices in the parent ramp's coordinates, canonical order.
    pub points: Vec<Pt>,
    pub ramp: RampGraph,
    /// Parent coordinates to the quadrant ramp's coordinates.
    pub transform: IsoTransform,
}

/// Splits a subset of a ramp by `x < split_x` or not; both sides must be
/// ramp-like up to symmetry.
pub(crate) fn sub_ramp(points: Vec<Pt>) -> Result<Quadrant> {
    let g = LatticeGraph::from_points(points.iter().copied());
    let (ramp, transform) = canonicalize_ramp(&g)
        .map_err(|v| RouteError::invariant(format!("piece is not ramp-like: {v}")))?;
    Ok(Quadrant {
        points: g.points().to_vec(),
        ramp,
        transform,
    })
}

/// Column split point `ceil(n/2)`: columns below it form the left half.
pub fn half_cols(r: &RampGraph) -> i32 {
    r.cols().div_ceil(2) as i32
}

/// Row split point `ceil(m/2)`: rows below it form the bottom half.
pub fn half_rows(r: &RampGraph) -> i32 {
    r.rows().div_ceil(2) as i32
}

/// Splits at `x = ceil(n/2) - 1/2` and `y = ceil(m/2) - 1/2`. Returns the
/// four quadrants (bottom-left, bottom-right, top-left, top-right); empty
/// ones have no points.
pub fn quadrants(r: &RampGraph) -> Result<[Quadrant; 4]> {
    let sx = half_cols(r);
    let sy = half_rows(r);
    let mut parts: [Vec<Pt>; 4] = Default::default();
    for &p in r.graph().points() {
        let k = (p.x >= sx) as usize + 2 * (p.y >= sy) as usize;
        parts[k].push(p);
    }
    let [a, b, c, d] = parts;
    Ok([sub_ramp(a)?, sub_ramp(b)?, sub_ramp(c)?, sub_ramp(d)?])
}
