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

//! Three-phase routing on full rectangles.
//!
//! Both routers move tokens along columns, then rows, then columns (or the
//! transpose, whichever is shorter), for at most `2p + q` steps on `p` rows
//! and `q` columns.

use crate::error::{Result, RouteError};
use crate::lattice::{LatticeGraph, Pt};

use super::config::{Color, ColorConfig, Config, Token};
use super::path::{parallel_lines, Line};
use super::schedule::{ensure_valid, Schedule, Step};

/// A rectangle viewed as `rows x cols` cells, possibly transposed so that
/// "rows" run vertically.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Grid {
    pub x0: i32,
    pub y0: i32,
    pub rows: usize,
    pub cols: usize,
    pub transposed: bool,
}

impl Grid {
    /// The orientation with the smaller bound `2 rows + cols` for a
    /// rectangle of `height` rows and `width` columns.
    pub fn best(x0: i32, y0: i32, width: usize, height: usize) -> Grid {
        if width < height {
            Grid {
                x0,
                y0,
                rows: width,
                cols: height,
                transposed: true,
            }
        } else {
            Grid {
                x0,
                y0,
                rows: height,
                cols: width,
                transposed: false,
            }
        }
    }

    pub fn cell(&self, r: usize, c: usize) -> Pt {
        if self.transposed {
            Pt::new(self.x0 + r as i32, self.y0 + c as i32)
        } else {
            Pt::new(self.x0 + c as i32, self.y0 + r as i32)
        }
    }

    pub fn bound(&self) -> u64 {
        (2 * self.rows + self.cols) as u64
    }

    fn column(&self, c: usize) -> Vec<Pt> {
        (0..self.rows).map(|r| self.cell(r, c)).collect()
    }

    fn row(&self, r: usize) -> Vec<Pt> {
        (0..self.cols).map(|c| self.cell(r, c)).collect()
    }
}

/// The bounding box of `g` if `g` is a full rectangle.
pub(crate) fn rectangle_of(g: &LatticeGraph) -> Option<(i32, i32, usize, usize)> {
    if g.is_empty() {
        return None;
    }
    let w = g.width() as usize + 1;
    let h = g.height() as usize + 1;
    (w * h == g.len()).then_some((g.min_x(), g.min_y(), w, h))
}

/// Labeled routing on a full rectangle.
pub fn route_rect<T: Token>(from: &Config<T>, to: &Config<T>) -> Result<Schedule> {
    let g = from.graph();
    let (x0, y0, w, h) = rectangle_of(g)
        .ok_or_else(|| RouteError::precondition("graph is not a full rectangle"))?;
    let grid = Grid::best(x0, y0, w, h);
    let dest = from.destinations(to)?;
    let n = g.len();
    // dest_cell[k] for the token on grid cell k = r * cols + c.
    let mut dest_cell = vec![(0usize, 0usize); n];
    let to_rc = |p: Pt| -> (usize, usize) {
        if grid.transposed {
            ((p.x - x0) as usize, (p.y - y0) as usize)
        } else {
            ((p.y - y0) as usize, (p.x - x0) as usize)
        }
    };
    for (i, &d) in dest.iter().enumerate() {
        let (r, c) = to_rc(g.point(i));
        dest_cell[r * grid.cols + c] = to_rc(g.point(d));
    }
    let s = Schedule::from_steps(permute_grid(&grid, &dest_cell)?, grid.bound());
    ensure_valid("rectangle", &s, from, to)?;
    Ok(s)
}

/// Steps realizing `dest[r * cols + c] = (r', c')` on a grid.
pub(crate) fn permute_grid(grid: &Grid, dest: &[(usize, usize)]) -> Result<Vec<Step>> {
    let (p, q) = (grid.rows, grid.cols);
    let mut cnt = vec![vec![0u32; q]; q];
    for c in 0..q {
        for r in 0..p {
            cnt[c][dest[r * q + c].1] += 1;
        }
    }
    let matchings = decompose(&mut cnt, p)?;
    // Assign each token an intermediate row so that row r carries matching r.
    let mut mid_row = vec![usize::MAX; p * q];
    for c in 0..q {
        let mut by_dest: Vec<Vec<usize>> = vec![Vec::new(); q];
        for r in (0..p).rev() {
            by_dest[dest[r * q + c].1].push(r);
        }
        for (k, m) in matchings.iter().enumerate() {
            let r = by_dest[m[c]]
                .pop()
                .ok_or_else(|| RouteError::invariant("matching uses a missing token"))?;
            mid_row[r * q + c] = k;
        }
    }
    // Phase 1: columns, to intermediate rows.
    let phase1: Vec<Line<u32>> = (0..q)
        .map(|c| {
            let from: Vec<u32> = (0..p).map(|r| mid_row[r * q + c] as u32).collect();
            let to: Vec<u32> = (0..p as u32).collect();
            (grid.column(c), from, to)
        })
        .collect();
    let mut steps = parallel_lines(phase1)?;
    // Token now on (k, c) is the one from (r, c) with mid_row = k.
    let mut cur = vec![(0usize, 0usize); p * q];
    for c in 0..q {
        for r in 0..p {
            cur[mid_row[r * q + c] * q + c] = dest[r * q + c];
        }
    }
    // Phase 2: rows, to destination columns (distinct within a row).
    let phase2: Vec<Line<u32>> = (0..p)
        .map(|r| {
            let from: Vec<u32> = (0..q).map(|c| cur[r * q + c].1 as u32).collect();
            let to: Vec<u32> = (0..q as u32).collect();
            (grid.row(r), from, to)
        })
        .collect();
    steps.extend(parallel_lines(phase2)?);
    let mut after = vec![0usize; p * q];
    for r in 0..p {
        for c in 0..q {
            let (dr, dc) = cur[r * q + c];
            after[r * q + dc] = dr;
        }
    }
    // Phase 3: columns, to destination rows.
    let phase3: Vec<Line<u32>> = (0..q)
        .map(|c| {
            let from: Vec<u32> = (0..p).map(|r| after[r * q + c] as u32).collect();
            let to: Vec<u32> = (0..p as u32).collect();
            (grid.column(c), from, to)
        })
        .collect();
    steps.extend(parallel_lines(phase3)?);
    Ok(steps)
}

/// Splits a `p`-regular bipartite multigraph (given as a `q x q` count
/// matrix) into `p` perfect matchings, each as `left -> right`.
pub(crate) fn decompose(cnt: &mut [Vec<u32>], p: usize) -> Result<Vec<Vec<usize>>> {
    let q = cnt.len();
    let mut match_l = vec![usize::MAX; q];
    let mut match_r = vec![usize::MAX; q];
    let mut out = Vec::with_capacity(p);
    for _ in 0..p {
        for l in 0..q {
            let r = match_l[l];
            if r != usize::MAX && cnt[l][r] == 0 {
                match_l[l] = usize::MAX;
                match_r[r] = usize::MAX;
            }
        }
        for l in 0..q {
            if match_l[l] == usize::MAX {
                let mut seen = vec![false; q];
                if !augment(l, cnt, &mut match_l, &mut match_r, &mut seen) {
                    return Err(RouteError::invariant("multigraph has no perfect matching"));
                }
            }
        }
        for l in 0..q {
            cnt[l][match_l[l]] -= 1;
        }
        out.push(match_l.clone());
    }
    if cnt.iter().any(|row| row.iter().any(|&c| c != 0)) {
        return Err(RouteError::invariant("multigraph is not regular"));
    }
    Ok(out)
}

fn augment(
    l: usize,
    cnt: &[Vec<u32>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    seen: &mut [bool],
) -> bool {
    for r in 0..cnt.len() {
        if cnt[l][r] == 0 || seen[r] {
            continue;
        }
        seen[r] = true;
        if match_r[r] == usize::MAX || augment(match_r[r], cnt, match_l, match_r, seen) {
            match_l[l] = r;
            match_r[r] = l;
            return true;
        }
    }
    false
}

/// Colored routing on a full rectangle.
pub fn route_rect_unlabeled(from: &ColorConfig, to: &ColorConfig) -> Result<Schedule> {
    let g = from.graph();
    if !from.same_graph(to) {
        return Err(RouteError::ConfigMismatch("configurations live on different graphs".into()));
    }
    if from.black_count() != to.black_count() {
        return Err(RouteError::ConfigMismatch("black counts differ".into()));
    }
    let (x0, y0, w, h) = rectangle_of(g)
        .ok_or_else(|| RouteError::precondition("graph is not a full rectangle"))?;
    let grid = Grid::best(x0, y0, w, h);
    let read = |c: &ColorConfig| -> Vec<bool> {
        let mut out = vec![false; g.len()];
        for r in 0..grid.rows {
            for k in 0..grid.cols {
                out[r * grid.cols + k] = c.get(grid.cell(r, k)).unwrap().is_black();
            }
        }
        out
    };
    let steps = color_grid(&grid, &read(from), &read(to))?;
    let s = Schedule::from_steps(steps, grid.bound());
    ensure_valid("rectangle-unlabeled", &s, from, to)?;
    Ok(s)
}

/// Colored three-phase routing between 0-1 matrices (row-major over the
/// grid) with equal totals.
pub(crate) fn color_grid(grid: &Grid, from: &[bool], to: &[bool]) -> Result<Vec<Step>> {
    let (p, q) = (grid.rows, grid.cols);
    let colors = |v: &[bool]| -> Vec<Color> { v.iter().map(|&b| Color::from_bit(b)).collect() };
    // Phase 1: columns, spreading blacks cyclically so row sums differ by at most one.
    let mut mid = vec![false; p * q];
    let mut offset = 0;
    for c in 0..q {
        let b = (0..p).filter(|&r| from[r * q + c]).count();
        for i in 0..b {
            mid[((offset + i) % p) * q + c] = true;
        }
        offset = (offset + b) % p.max(1);
    }
    let column_lines = |a: &[bool], b: &[bool]| -> Vec<Line<Color>> {
        (0..q)
            .map(|c| {
                let fa: Vec<bool> = (0..p).map(|r| a[r * q + c]).collect();
                let fb: Vec<bool> = (0..p).map(|r| b[r * q + c]).collect();
                (grid.column(c), colors(&fa), colors(&fb))
            })
            .collect()
    };
    let mut steps = parallel_lines(column_lines(from, &mid))?;
    // Phase 2 target: row sums as in `mid`, column sums as in `to`.
    let mut row_left: Vec<usize> = (0..p).map(|r| (0..q).filter(|&c| mid[r * q + c]).count()).collect();
    let col_sum: Vec<usize> = (0..q).map(|c| (0..p).filter(|&r| to[r * q + c]).count()).collect();
    let mut cols: Vec<usize> = (0..q).collect();
    cols.sort_by_key(|&c| (std::cmp::Reverse(col_sum[c]), c));
    let mut target = vec![false; p * q];
    let mut rows: Vec<usize> = (0..p).collect();
    for &c in &cols {
        rows.sort_by_key(|&r| (std::cmp::Reverse(row_left[r]), r));
        for &r in rows.iter().take(col_sum[c]) {
            if row_left[r] == 0 {
                return Err(RouteError::invariant("no 0-1 matrix with the required margins"));
            }
            row_left[r] -= 1;
            target[r * q + c] = true;
        }
    }
    if row_left.iter().any(|&x| x != 0) {
        return Err(RouteError::invariant("no 0-1 matrix with the required margins"));
    }
    let row_lines: Vec<Line<Color>> = (0..p)
        .map(|r| {
            (
                grid.row(r),
                colors(&mid[r * q..(r + 1) * q]),
                colors(&target[r * q..(r + 1) * q]),
            )
        })
        .collect();
    steps.extend(parallel_lines(row_lines)?);
    steps.extend(parallel_lines(column_lines(&target, to))?);
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::routing::config::LabeledConfig;
    use std::sync::Arc;

    fn rect(w: i32, h: i32) -> Arc<LatticeGraph> {
        Arc::new(LatticeGraph::from_points(
            (0..h).flat_map(|y| (0..w).map(move |x| Pt::new(x, y))),
        ))
    }

    #[test]
    fn identity_3x3() {
        let a = LabeledConfig::identity(rect(3, 3));
        assert_eq!(route_rect(&a, &a).unwrap().len(), 0);
    }

    #[test]
    fn reversal_2x2() {
        let g = rect(2, 2);
        let a = LabeledConfig::identity(g.clone());
        let b = LabeledConfig::new(g, vec![4, 3, 2, 1]).unwrap();
        assert!(route_rect(&a, &b).unwrap().len() <= 6);
    }

    #[test]
    fn bottom_row_to_top_row() {
        let g = rect(3, 3);
        let a = ColorConfig::from_fn(g.clone(), |p| Color::from_bit(p.y == 0));
        let b = ColorConfig::from_fn(g, |p| Color::from_bit(p.y == 2));
        let s = route_rect_unlabeled(&a, &b).unwrap();
        assert!(s.len() <= 9);
    }

    #[test]
    fn two_phase_counterexample_is_handled() {
        // Row sums (2, 0) and target column sums (2, 0).
        let g = rect(2, 2);
        let a = ColorConfig::from_fn(g.clone(), |p| Color::from_bit(p.y == 1));
        let b = ColorConfig::from_fn(g, |p| Color::from_bit(p.x == 0));
        assert!(route_rect_unlabeled(&a, &b).is_ok());
    }

    #[test]
    fn decompose_regular() {
        let mut cnt = vec![vec![2, 1, 0], vec![0, 1, 2], vec![1, 1, 1]];
        let m = decompose(&mut cnt, 3).unwrap();
        assert_eq!(m.len(), 3);
        for mm in &m {
            let mut seen = mm.clone();
            seen.sort();
            assert_eq!(seen, vec![0, 1, 2]);
        }
    }
}
