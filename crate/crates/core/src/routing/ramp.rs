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

//! Unlabeled and labeled routing on ramp-like graphs.
//!
//! Internally a configuration on a ramp is a vector of rows (bottom row
//! first) of black flags; row `k` of a slice holds the vertices with
//! `y = y0 + k`.

use std::collections::HashMap;

use crate::bounds;
use crate::error::{Result, RouteError};
use crate::lattice::{canonicalize_ramp, half_cols, half_rows, IsoTransform, LatticeGraph, Pt, RampGraph};
use crate::par;

use super::config::{Color, ColorConfig, LabeledConfig};
use super::path::{line_steps, parallel_lines, Line};
use super::rect::{color_grid, Grid};
use super::schedule::{ensure_valid, zip_parallel, Schedule, Step};

/// Direction of a push.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Up,
    Left,
}

/// Column preparation data for a monotonic configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnPlan {
    /// Total number of black tokens.
    pub t: usize,
    /// Black tokens in the top slice (the top `m1 - 1` rows).
    pub t1: usize,
    /// Fewest top rows holding `t` vertices; 0 when `t = 0`.
    pub m1: usize,
    /// Fewest top rows holding `t1` vertices; 0 when `t1 = 0`.
    pub m0: usize,
    /// Black tokens per column of `RM(t)` minus those of `RM(t1)`.
    pub z: Vec<usize>,
    /// Rightmost black x in row `m - m1` of `RM(t)`.
    pub delta: Option<i32>,
    /// Rightmost black x in row `m - m0` of `RM(t1)`.
    pub delta1: Option<i32>,
}

type Rows = Vec<Vec<bool>>;

fn zip_steps(parts: Vec<Vec<Step>>) -> Vec<Step> {
    zip_parallel(parts.into_iter().map(|s| Schedule::from_steps(s, 0))).steps
}

fn map_steps(steps: Vec<Step>, t: &IsoTransform) -> Vec<Step> {
    Schedule::from_steps(steps, 0).conjugate(t).steps
}

fn colors(v: impl IntoIterator<Item = bool>) -> Vec<Color> {
    v.into_iter().map(Color::from_bit).collect()
}

fn blacks_first(len: usize, b: usize) -> Vec<Color> {
    colors((0..len).map(|i| i < b))
}

fn column_height(rows: &[Vec<bool>], x: usize) -> usize {
    rows.iter().take_while(|r| r.len() > x).count()
}

fn push_rows(rows: &mut [Vec<bool>], y0: i32, dir: Direction) -> Result<Vec<Step>> {
    let mut lines: Vec<Line<Color>> = Vec::new();
    match dir {
        Direction::Up => {
            let n = rows.first().map_or(0, Vec::len);
            for x in 0..n {
                let h = column_height(rows, x);
                let line: Vec<Pt> = (0..h).rev().map(|k| Pt::new(x as i32, y0 + k as i32)).collect();
                let from: Vec<bool> = (0..h).rev().map(|k| rows[k][x]).collect();
                let b = from.iter().filter(|&&c| c).count();
                for (i, k) in (0..h).rev().enumerate() {
                    rows[k][x] = i < b;
                }
                lines.push((line, colors(from), blacks_first(h, b)));
            }
        }
        Direction::Left => {
            for (k, row) in rows.iter_mut().enumerate() {
                let line: Vec<Pt> = (0..row.len()).map(|x| Pt::new(x as i32, y0 + k as i32)).collect();
                let from = colors(row.iter().copied());
                let b = row.iter().filter(|&&c| c).count();
                for (x, c) in row.iter_mut().enumerate() {
                    *c = x < b;
                }
                lines.push((line, from, blacks_first(row.len(), b)));
            }
        }
    }
    parallel_lines(lines)
}

fn up_aligned(rows: &[Vec<bool>]) -> bool {
    rows.iter().enumerate().all(|(k, row)| {
        row.iter().enumerate().all(|(x, &b)| {
            !b || rows.get(k + 1).and_then(|r| r.get(x)).copied().unwrap_or(true)
        })
    })
}

fn left_aligned(rows: &[Vec<bool>]) -> bool {
    rows.iter().all(|row| row.windows(2).all(|w| w[0] || !w[1]))
}

fn monotonic_rows(rows: &mut [Vec<bool>], y0: i32) -> Result<Vec<Step>> {
    let mut steps = Vec::new();
    for dir in [Direction::Up, Direction::Left, Direction::Up, Direction::Left] {
        steps.extend(push_rows(rows, y0, dir)?);
    }
    Ok(steps)
}

/// Black counts per column of the row-major configuration with `t` blacks.
fn rm_columns(rows: &[Vec<bool>], mut t: usize) -> Vec<usize> {
    let mut z = vec![0; rows.first().map_or(0, Vec::len)];
    for row in rows.iter().rev() {
        let k = t.min(row.len());
        for c in z.iter_mut().take(k) {
            *c += 1;
        }
        t -= k;
    }
    z
}

/// Fewest top rows whose vertex count reaches `t`, and their vertex count
/// without the last of them.
fn rows_for(rows: &[Vec<bool>], t: usize) -> (usize, usize) {
    if t == 0 {
        return (0, 0);
    }
    let mut acc = 0;
    for (i, row) in rows.iter().rev().enumerate() {
        if acc + row.len() >= t {
            return (i + 1, acc);
        }
        acc += row.len();
    }
    (rows.len() + 1, acc)
}

fn dump_rows(rows: &[Vec<bool>]) -> String {
    rows.iter()
        .rev()
        .map(|r| r.iter().map(|&b| if b { '#' } else { '.' }).collect::<String>())
        .collect::<Vec<_>>()
        .join("\n")
}

fn plan_rows(rows: &[Vec<bool>]) -> Result<ColumnPlan> {
    let m = rows.len();
    let count = |rs: &[Vec<bool>]| rs.iter().flatten().filter(|&&b| b).count();
    let t = count(rows);
    let (m1, before1) = rows_for(rows, t);
    if m1 > m {
        return Err(RouteError::invariant("more black tokens than vertices"));
    }
    let t1 = if m1 == 0 { 0 } else { count(&rows[m - m1 + 1..]) };
    let (m0, before0) = rows_for(rows, t1);
    let full = rm_columns(rows, t);
    let top = rm_columns(rows, t1);
    let z: Vec<usize> = full.iter().zip(&top).map(|(a, b)| a - b).collect();
    let delta = (m1 > 0).then(|| (t - before1) as i32 - 1);
    let delta1 = (m0 > 0).then(|| (t1 - before0) as i32 - 1);
    let plan = ColumnPlan {
        t,
        t1,
        m1,
        m0,
        z,
        delta,
        delta1,
    };
    if m1 > 0 {
        let cap = m - m1 + 1;
        let width = rows[m - m1].len();
        let bad = plan
            .z
            .iter()
            .enumerate()
            .find(|&(j, &zj)| zj > cap || (j >= width && zj > 0));
        if let Some((j, &zj)) = bad {
            return Err(RouteError::invariant(format!(
                "column {j} needs {zj} blacks but the bottom slice holds {cap}; plan {plan:?}\n{}",
                dump_rows(rows)
            )));
        }
    }
    if plan.z.iter().sum::<usize>() != t - t1 {
        return Err(RouteError::invariant("column targets do not sum to t - t1"));
    }
    Ok(plan)
}

fn realize_rows(rows: &mut [Vec<bool>], y0: i32) -> Result<Vec<Step>> {
    let plan = plan_rows(rows)?;
    if plan.t == 0 {
        return Ok(Vec::new());
    }
    let m = rows.len();
    let n = rows[0].len();
    let kr = m - plan.m1;
    let width = rows[kr].len();
    if let Some((k, x)) = (0..=kr).find_map(|k| rows[k][width..].iter().position(|&b| b).map(|x| (k, x + width))) {
        return Err(RouteError::invariant(format!(
            "black token right of the rectangle at ({x}, {})",
            y0 + k as i32
        )));
    }
    let grid = Grid::best(0, y0, width, kr + 1);
    let (bottom, top) = rows.split_at_mut(kr + 1);
    let z = &plan.z;
    let (rect, rest) = par::join(
        || -> Result<Vec<Step>> {
            let cells = grid.rows * grid.cols;
            let mut from = vec![false; cells];
            let mut to = vec![false; cells];
            for r in 0..grid.rows {
                for c in 0..grid.cols {
                    let p = grid.cell(r, c);
                    let (x, k) = (p.x as usize, (p.y - y0) as usize);
                    from[r * grid.cols + c] = bottom[k][x];
                    to[r * grid.cols + c] = k < z[x];
                }
            }
            let steps = color_grid(&grid, &from, &to)?;
            for (k, row) in bottom.iter_mut().enumerate() {
                for (x, b) in row.iter_mut().take(width).enumerate() {
                    *b = k < z[x];
                }
            }
            Ok(steps)
        },
        || realize_rows(top, y0 + kr as i32 + 1),
    );
    let steps = zip_steps(vec![rect?, rest?]);
    if steps.len() > 2 * (m + n) {
        return Err(RouteError::invariant(format!(
            "column preparation took {} steps on {m} rows and {n} columns",
            steps.len()
        )));
    }
    Ok(steps)
}

/// Routes a configuration on a ramp (rows with `y0 = 0`) to row-major order.
fn to_row_major(rows: &mut Rows) -> Result<Vec<Step>> {
    let mut steps = monotonic_rows(rows, 0)?;
    steps.extend(realize_rows(rows, 0)?);
    steps.extend(push_rows(rows, 0, Direction::Up)?);
    let t = rows.iter().flatten().filter(|&&b| b).count();
    let mut seen = 0;
    for row in rows.iter().rev() {
        for &b in row {
            if b != (seen < t) {
                return Err(RouteError::invariant(format!(
                    "final push did not reach row-major order\n{}",
                    dump_rows(rows)
                )));
            }
            seen += 1;
        }
    }
    Ok(steps)
}

fn rows_of(r: &RampGraph, black: impl Fn(Pt) -> bool) -> Rows {
    (0..r.rows())
        .map(|y| (0..r.row_len(y)).map(|x| black(Pt::new(x as i32, y as i32))).collect())
        .collect()
}

fn config_rows(r: &RampGraph, x: &ColorConfig) -> Result<Rows> {
    if x.graph().points() != r.graph().points() {
        return Err(RouteError::ConfigMismatch("configuration is not on the ramp".into()));
    }
    Ok(rows_of(r, |p| x.get(p).is_some_and(Color::is_black)))
}

fn rows_config(x: &ColorConfig, rows: &[Vec<bool>]) -> ColorConfig {
    ColorConfig::from_fn(x.graph().clone(), |p| Color::from_bit(rows[p.y as usize][p.x as usize]))
}

/// Pushes every black token as far up its column (or left in its row) as
/// possible. At most `m` (or `n`) steps.
pub fn push(r: &RampGraph, x: &ColorConfig, dir: Direction) -> Result<Schedule> {
    let mut rows = config_rows(r, x)?;
    let steps = push_rows(&mut rows, 0, dir)?;
    let bound = match dir {
        Direction::Up => r.rows(),
        Direction::Left => r.cols(),
    };
    let s = Schedule::from_steps(steps, bound as u64);
    ensure_valid("push", &s, x, &rows_config(x, &rows))?;
    Ok(s)
}

/// Pushes up, left, up, left. The result is monotonic; at most `2m + 2n`
/// steps.
pub fn make_monotonic(r: &RampGraph, x: &ColorConfig) -> Result<Schedule> {
    let mut rows = config_rows(r, x)?;
    let steps = monotonic_rows(&mut rows, 0)?;
    if !(up_aligned(&rows) && left_aligned(&rows)) {
        return Err(RouteError::invariant(format!(
            "pushes did not give a monotonic configuration\n{}",
            dump_rows(&rows)
        )));
    }
    let s = Schedule::from_steps(steps, 2 * (r.rows() + r.cols()) as u64);
    ensure_valid("make-monotonic", &s, x, &rows_config(x, &rows))?;
    Ok(s)
}

pub fn is_up_aligned(r: &RampGraph, x: &ColorConfig) -> bool {
    config_rows(r, x).is_ok_and(|rows| up_aligned(&rows))
}

pub fn is_left_aligned(r: &RampGraph, x: &ColorConfig) -> bool {
    config_rows(r, x).is_ok_and(|rows| left_aligned(&rows))
}

pub fn is_monotonic(r: &RampGraph, x: &ColorConfig) -> bool {
    config_rows(r, x).is_ok_and(|rows| up_aligned(&rows) && left_aligned(&rows))
}

/// Row-major configuration `RM(t)`: the first `t` vertices in canonical
/// order (top row first, left to right) are black.
pub fn row_major(graph: &std::sync::Arc<LatticeGraph>, t: usize) -> ColorConfig {
    let mut k = 0;
    let tokens = graph
        .points()
        .iter()
        .map(|_| {
            k += 1;
            Color::from_bit(k <= t)
        })
        .collect();
    ColorConfig::new(graph.clone(), tokens).expect("one token per vertex")
}

/// Column preparation plan for a monotonic configuration, with the
/// capacity of every bottom-slice column certified.
pub fn plan_columns(r: &RampGraph, x: &ColorConfig) -> Result<ColumnPlan> {
    let rows = config_rows(r, x)?;
    if !(up_aligned(&rows) && left_aligned(&rows)) {
        return Err(RouteError::precondition("configuration is not monotonic"));
    }
    plan_rows(&rows)
}

/// Moves a monotonic configuration to one whose column counts match
/// `RM(t)`, keeping the top slice's counts. At most `2(m + n)` steps.
pub fn realize_columns(r: &RampGraph, x: &ColorConfig) -> Result<Schedule> {
    let mut rows = config_rows(r, x)?;
    if !(up_aligned(&rows) && left_aligned(&rows)) {
        return Err(RouteError::precondition("configuration is not monotonic"));
    }
    let steps = realize_rows(&mut rows, 0)?;
    let s = Schedule::from_steps(steps, 2 * (r.rows() + r.cols()) as u64);
    ensure_valid("realize-columns", &s, x, &rows_config(x, &rows))?;
    Ok(s)
}

/// Colored routing between black sets on a ramp-like vertex set given in
/// canonical order.
pub(crate) fn unlabeled_steps(points: &[Pt], from: &[bool], to: &[bool]) -> Result<Vec<Step>> {
    if from == to {
        return Ok(Vec::new());
    }
    let g = LatticeGraph::from_points(points.iter().copied());
    let index = |p: Pt| g.index_of(p).expect("point of the piece");
    if g.width() == 0 || g.height() == 0 {
        let order = g.path_order().ok_or(RouteError::NotAPath)?;
        let line: Vec<Pt> = order.iter().map(|&i| g.point(i)).collect();
        let f = colors(line.iter().map(|&p| from[index(p)]));
        let t = colors(line.iter().map(|&p| to[index(p)]));
        return line_steps(&line, &f, &t);
    }
    let (r, tr) = canonicalize_ramp(&g)
        .map_err(|v| RouteError::precondition(format!("graph is not ramp-like: {v}")))?;
    let back = tr.inverse();
    let read = |v: &[bool]| rows_of(&r, |p| v[index(back.apply(p))]);
    let (mut a, mut b) = (read(from), read(to));
    let (fa, fb) = par::join(|| to_row_major(&mut a), || to_row_major(&mut b));
    let mut steps = fa?;
    steps.extend(fb?.into_iter().rev());
    Ok(map_steps(steps, &back))
}

fn check_pair<T: super::config::Token>(
    from: &super::config::Config<T>,
    to: &super::config::Config<T>,
) -> Result<()> {
    if !from.same_graph(to) {
        return Err(RouteError::ConfigMismatch("configurations live on different graphs".into()));
    }
    Ok(())
}

/// Colored routing on any ramp-like graph (in any position and
/// orientation): both configurations go to row-major order and the second
/// leg is reversed. Declared bound `20(w + h)`.
pub fn route_ramp_unlabeled(from: &ColorConfig, to: &ColorConfig) -> Result<Schedule> {
    check_pair(from, to)?;
    if from.black_count() != to.black_count() {
        return Err(RouteError::ConfigMismatch("black counts differ".into()));
    }
    let g = from.graph();
    let bound = bounds::scaled(bounds::RAMP_UNLABELED, g.width(), g.height());
    let bits = |c: &ColorConfig| -> Vec<bool> { c.tokens().iter().map(|t| t.is_black()).collect() };
    let steps = unlabeled_steps(g.points(), &bits(from), &bits(to))?;
    let s = Schedule::from_steps(steps, bound);
    ensure_valid("ramp-unlabeled", &s, from, to)?;
    Ok(s)
}

fn apply_steps(g: &LatticeGraph, tokens: &mut [u32], steps: &[Step]) {
    for s in steps {
        for &(a, b) in s.swaps() {
            let (i, j) = (g.index_of(a).unwrap(), g.index_of(b).unwrap());
            tokens.swap(i, j);
        }
    }
}

/// Labeled routing by splitting into halves, then quadrants, and recursing.
pub(crate) fn labeled_steps(points: &[Pt], from: &[u32], to: &[u32]) -> Result<Vec<Step>> {
    if from == to {
        return Ok(Vec::new());
    }
    let g = LatticeGraph::from_points(points.iter().copied());
    if g.width() == 0 || g.height() == 0 {
        let order = g.path_order().ok_or(RouteError::NotAPath)?;
        let line: Vec<Pt> = order.iter().map(|&i| g.point(i)).collect();
        let f: Vec<u32> = order.iter().map(|&i| from[i]).collect();
        let t: Vec<u32> = order.iter().map(|&i| to[i]).collect();
        return line_steps(&line, &f, &t);
    }
    let (r, tr) = canonicalize_ramp(&g)
        .map_err(|v| RouteError::precondition(format!("graph is not ramp-like: {v}")))?;
    let back = tr.inverse();
    // Work in ramp coordinates.
    let rg = r.graph();
    let mut cur = vec![0u32; rg.len()];
    let mut dest: HashMap<u32, Pt> = HashMap::with_capacity(rg.len());
    for (i, &p) in g.points().iter().enumerate() {
        let q = tr.apply(p);
        cur[rg.index_of(q).unwrap()] = from[i];
        dest.insert(to[i], q);
    }
    let target = |tok: u32| -> Result<Pt> {
        dest.get(&tok)
            .copied()
            .ok_or_else(|| RouteError::ConfigMismatch(format!("token {tok} has no target")))
    };
    let sx = half_cols(&r);
    let sy = half_rows(&r);
    let pts = rg.points();

    let mut steps = Vec::new();
    // Halves.
    let f: Vec<bool> = cur.iter().map(|&k| target(k).map(|d| d.x < sx)).collect::<Result<_>>()?;
    let t: Vec<bool> = pts.iter().map(|p| p.x < sx).collect();
    let s = unlabeled_steps(pts, &f, &t)?;
    apply_steps(rg, &mut cur, &s);
    steps.extend(s);

    // Quarters within both halves at once.
    let half = |left: bool| -> Result<Vec<Step>> {
        let idx: Vec<usize> = (0..pts.len()).filter(|&i| (pts[i].x < sx) == left).collect();
        let hp: Vec<Pt> = idx.iter().map(|&i| pts[i]).collect();
        let f: Vec<bool> = idx.iter().map(|&i| target(cur[i]).map(|d| d.y < sy)).collect::<Result<_>>()?;
        let t: Vec<bool> = hp.iter().map(|p| p.y < sy).collect();
        unlabeled_steps(&hp, &f, &t)
    };
    let (a, b) = par::join(|| half(true), || half(false));
    let s = zip_steps(vec![a?, b?]);
    apply_steps(rg, &mut cur, &s);
    steps.extend(s);

    // Quadrants.
    let mut parts: [Vec<usize>; 4] = Default::default();
    for (i, p) in pts.iter().enumerate() {
        parts[(p.x >= sx) as usize + 2 * (p.y >= sy) as usize].push(i);
    }
    let jobs: Vec<(Vec<Pt>, Vec<u32>, Vec<u32>)> = parts
        .into_iter()
        .filter(|idx| !idx.is_empty())
        .map(|idx| {
            let qp: Vec<Pt> = idx.iter().map(|&i| pts[i]).collect();
            let f: Vec<u32> = idx.iter().map(|&i| cur[i]).collect();
            let mut t = vec![0u32; idx.len()];
            let local: HashMap<Pt, usize> = qp.iter().enumerate().map(|(k, &p)| (p, k)).collect();
            for &k in &f {
                let d = target(k)?;
                let slot = local
                    .get(&d)
                    .ok_or_else(|| RouteError::invariant(format!("token {k} left its quadrant")))?;
                t[*slot] = k;
            }
            Ok((qp, f, t))
        })
        .collect::<Result<_>>()?;
    let sub = par::map(jobs, |(qp, f, t)| labeled_steps(&qp, &f, &t));
    steps.extend(zip_steps(sub.into_iter().collect::<Result<_>>()?));
    Ok(map_steps(steps, &back))
}

/// Labeled routing on any ramp-like graph. Declared bound `80(w + h)`.
pub fn route_ramp_labeled(from: &LabeledConfig, to: &LabeledConfig) -> Result<Schedule> {
    check_pair(from, to)?;
    if !from.same_tokens(to) {
        return Err(RouteError::ConfigMismatch("token sets differ".into()));
    }
    let g = from.graph();
    let bound = bounds::scaled(bounds::RAMP_LABELED, g.width(), g.height());
    let steps = labeled_steps(g.points(), from.tokens(), to.tokens())?;
    let s = Schedule::from_steps(steps, bound);
    ensure_valid("ramp-labeled", &s, from, to)?;
    Ok(s)
}
