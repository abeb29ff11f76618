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

//! Boundary circuits, margin trimming and the row-wise embedding used by
//! the convex pipeline.

use std::collections::HashMap;

use crate::error::{Result, RouteError};
use crate::geometry::{hull, Point};

use super::{LatticeGraph, Pt};

/// The circuit of vertices enclosing a connected convex cut graph `k`.
///
/// Each hull edge is replaced by the inner half of the boundary of the
/// grid squares it passes through. The hull is taken over `k`'s own vertices.
pub fn skin(k: &LatticeGraph) -> Result<Vec<Pt>> {
    if !k.is_connected() {
        return Err(RouteError::Disconnected);
    }
    let pts: Vec<Point> = k.points().iter().map(|&p| Point::from(p)).collect();
    if pts.is_empty() {
        return Ok(Vec::new());
    }
    let poly = hull(&pts);
    if poly.is_degenerate() {
        return Ok(k.points().to_vec());
    }
    let mut out = vec![false; k.len()];
    let mut mark = |p: Pt| -> Result<()> {
        let i = k.index_of(p).ok_or_else(|| {
            RouteError::invariant(format!("skin corner {p} lies outside the graph"))
        })?;
        out[i] = true;
        Ok(())
    };
    for (a, b) in poly.edges() {
        let a = a.to_lattice().expect("hull of lattice points");
        let b = b.to_lattice().expect("hull of lattice points");
        let (dx, dy) = ((b.x - a.x) as i64, (b.y - a.y) as i64);
        let g = num_integer::gcd(dx, dy);
        for s in 0..=g {
            mark(Pt::new(
                a.x + (dx / g * s) as i32,
                a.y + (dy / g * s) as i32,
            ))?;
        }
        if dx == 0 || dy == 0 {
            continue;
        }
        let side = |c: Pt| -> i64 { dx * (c.y - a.y) as i64 - dy * (c.x - a.x) as i64 };
        let (x0, x1) = (a.x.min(b.x), a.x.max(b.x));
        for i in x0..x1 {
            // y along the edge at x = i and x = i + 1, as fractions over dx.
            let ya = a.y as i64 * dx + dy * (i - a.x) as i64;
            let yb = a.y as i64 * dx + dy * (i + 1 - a.x) as i64;
            let (lo, hi) = (ya.min(yb), ya.max(yb));
            let adx = dx.abs();
            let (lo, hi) = if dx < 0 { (-hi, -lo) } else { (lo, hi) };
            let j0 = lo.div_euclid(adx);
            let j1 = (hi + adx - 1).div_euclid(adx);
            for j in j0..j1 {
                for (cx, cy) in [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)] {
                    let c = Pt::new(cx, cy as i32);
                    if side(c) >= 0 {
                        mark(c)?;
                    }
                }
            }
        }
    }
    let s: Vec<Pt> = k
        .points()
        .iter()
        .zip(&out)
        .filter(|(_, &m)| m)
        .map(|(&p, _)| p)
        .collect();
    if !LatticeGraph::from_points(s.iter().copied()).is_connected() {
        return Err(RouteError::invariant("skin circuit is not connected"));
    }
    Ok(s)
}

/// Result of [`trim_margins`].
#[derive(Clone, Debug)]
pub struct Trimmed {
    pub core: LatticeGraph,
    pub removed: Vec<Pt>,
}

/// Repeatedly deletes the top row, bottom row, leftmost column or rightmost
/// column (checked in that order each sweep) while it has at most four points.
pub fn trim_margins(g: &LatticeGraph) -> Result<Trimmed> {
    let budget = 4 * g.perimeter_measure();
    if g.len() as u64 <= budget {
        return Err(RouteError::precondition(format!(
            "trimming needs more than 4(w+h) = {budget} vertices, found {}",
            g.len()
        )));
    }
    let (mut top, mut bottom, mut left, mut right) = (g.max_y(), g.min_y(), g.min_x(), g.max_x());
    let row_count = |y: i32, l: i32, r: i32| (l..=r).filter(|&x| g.contains(Pt::new(x, y))).count();
    let col_count = |x: i32, b: i32, t: i32| (b..=t).filter(|&y| g.contains(Pt::new(x, y))).count();
    loop {
        let mut changed = false;
        if top > bottom && row_count(top, left, right) <= 4 {
            top -= 1;
            changed = true;
        }
        if top > bottom && row_count(bottom, left, right) <= 4 {
            bottom += 1;
            changed = true;
        }
        if right > left && col_count(left, bottom, top) <= 4 {
            left += 1;
            changed = true;
        }
        if right > left && col_count(right, bottom, top) <= 4 {
            right -= 1;
            changed = true;
        }
        if !changed {
            break;
        }
    }
    let (kept, removed): (Vec<Pt>, Vec<Pt>) = g
        .points()
        .iter()
        .partition(|p| p.x >= left && p.x <= right && p.y >= bottom && p.y <= top);
    if removed.len() as u64 > budget {
        return Err(RouteError::invariant("trimming removed more than 4(w+h) vertices"));
    }
    let core = LatticeGraph::from_points(kept);
    check_overlap(&core)?;
    Ok(Trimmed { core, removed })
}

/// Every row and column has at least four points; consecutive rows share at
/// least three columns and consecutive columns share at least three rows.
fn check_overlap(core: &LatticeGraph) -> Result<()> {
    let rows = core.rows();
    for (y, r) in &rows {
        if r.len() < 4 {
            return Err(RouteError::invariant(format!("trimmed row {y} has {} points", r.len())));
        }
    }
    for w in rows.windows(2) {
        let (a, b) = (w[0].1, w[1].1);
        let shared = (a[a.len() - 1].x.min(b[b.len() - 1].x) - a[0].x.max(b[0].x) + 1).max(0);
        if shared < 3 {
            return Err(RouteError::invariant(format!(
                "rows {} and {} share {shared} columns",
                w[0].0, w[1].0
            )));
        }
    }
    let t = core.transform(&super::IsoTransform::transpose());
    let cols = t.rows();
    for (x, c) in &cols {
        if c.len() < 4 {
            return Err(RouteError::invariant(format!("trimmed column {x} has {} points", c.len())));
        }
    }
    for w in cols.windows(2) {
        let (a, b) = (w[0].1, w[1].1);
        let shared = (a[a.len() - 1].x.min(b[b.len() - 1].x) - a[0].x.max(b[0].x) + 1).max(0);
        if shared < 3 {
            return Err(RouteError::invariant(format!(
                "columns {} and {} share {shared} rows",
                w[0].0, w[1].0
            )));
        }
    }
    Ok(())
}

/// Removes the rightmost vertex of every row.
pub fn drop_rightmost(core: &LatticeGraph) -> LatticeGraph {
    LatticeGraph::from_points(
        core.rows()
            .into_iter()
            .flat_map(|(_, r)| r[..r.len() - 1].iter().copied()),
    )
}

/// An injective map between vertex sets of two lattice graphs.
#[derive(Clone, Debug, Default)]
pub struct VertexMap {
    forward: HashMap<Pt, Pt>,
    backward: HashMap<Pt, Pt>,
    pairs: Vec<(Pt, Pt)>,
}

impl VertexMap {
    pub fn from_pairs(pairs: Vec<(Pt, Pt)>) -> Result<Self> {
        let mut m = VertexMap::default();
        for &(a, b) in &pairs {
            if m.forward.insert(a, b).is_some() || m.backward.insert(b, a).is_some() {
                return Err(RouteError::invariant(format!("map is not injective at {a} -> {b}")));
            }
        }
        m.pairs = pairs;
        Ok(m)
    }

    pub fn get(&self, p: Pt) -> Option<Pt> {
        self.forward.get(&p).copied()
    }

    pub fn preimage(&self, q: Pt) -> Option<Pt> {
        self.backward.get(&q).copied()
    }

    pub fn pairs(&self) -> &[(Pt, Pt)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn image(&self) -> impl Iterator<Item = Pt> + '_ {
        self.pairs.iter().map(|&(_, b)| b)
    }
}

/// Sends the j-th vertex (left to right) of row `y` of `from` to the j-th
/// vertex of row `y` of `to`.
pub fn psi(to: &LatticeGraph, from: &LatticeGraph) -> Result<VertexMap> {
    let target: HashMap<i32, &[Pt]> = to.rows().into_iter().collect();
    let mut pairs = Vec::with_capacity(from.len());
    for (y, row) in from.rows() {
        let dest = target
            .get(&y)
            .ok_or_else(|| RouteError::invariant(format!("row {y} missing from the target")))?;
        if row.len() > dest.len() {
            return Err(RouteError::invariant(format!(
                "row {y} has {} points but its target row has {}",
                row.len(),
                dest.len()
            )));
        }
        pairs.extend(row.iter().copied().zip(dest.iter().copied()));
    }
    VertexMap::from_pairs(pairs)
}
