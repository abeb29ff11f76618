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

//! Routing across a shared spine: mirror exchange between two halves, the
//! union of two ramps, burger buns, and the hair reduction.
//!
//! Every piece router works in its own coordinates and takes token slices
//! aligned with its points in canonical order.

use std::collections::HashMap;

use crate::bounds;
use crate::error::{Result, RouteError};
use crate::geometry::{find_spine, hull, mirror_axis, Point, Rational, SpineInfo, SpineOrientation};
use crate::lattice::{canonicalize_ramp, IsoTransform, LatticeGraph, Pt};
use crate::par;

use super::config::{Color, ColorConfig, LabeledConfig, Token};
use super::path::{parallel_lines, Line};
use super::ramp::{labeled_steps, unlabeled_steps};
use super::schedule::{ensure_valid, zip_parallel, Schedule, Step};
use super::tree::tree_steps;

/// A vertex set with its own labeled and colored routing.
pub trait PieceRouter: Send + Sync {
    /// Vertices in canonical order.
    fn points(&self) -> &[Pt];
    /// Colored routing; `from` and `to` flag black vertices.
    fn route_colored(&self, from: &[bool], to: &[bool]) -> Result<Vec<Step>>;
    /// Labeled routing between two arrangements of distinct tokens.
    fn route_labeled(&self, from: &[u32], to: &[u32]) -> Result<Vec<Step>>;
}

/// A ramp-like piece in any position and orientation.
pub struct RampPiece {
    points: Vec<Pt>,
}

impl RampPiece {
    pub fn new(points: Vec<Pt>) -> Result<Self> {
        let g = LatticeGraph::from_points(points);
        canonicalize_ramp(&g)
            .map_err(|v| RouteError::precondition(format!("piece is not ramp-like: {v}")))?;
        Ok(RampPiece {
            points: g.points().to_vec(),
        })
    }
}

impl PieceRouter for RampPiece {
    fn points(&self) -> &[Pt] {
        &self.points
    }

    fn route_colored(&self, from: &[bool], to: &[bool]) -> Result<Vec<Step>> {
        unlabeled_steps(&self.points, from, to)
    }

    fn route_labeled(&self, from: &[u32], to: &[u32]) -> Result<Vec<Step>> {
        labeled_steps(&self.points, from, to)
    }
}

/// A piece router viewed through an isometry: `t` maps these coordinates
/// to the inner router's.
pub struct Framed {
    points: Vec<Pt>,
    inner: Box<dyn PieceRouter>,
    back: IsoTransform,
    /// `perm[i]` is the inner index of `points[i]`.
    perm: Vec<usize>,
}

impl Framed {
    pub fn new(inner: Box<dyn PieceRouter>, t: IsoTransform) -> Self {
        let back = t.inverse();
        let g = LatticeGraph::from_points(inner.points().iter().map(|&p| back.apply(p)));
        let index: HashMap<Pt, usize> =
            inner.points().iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let perm = g.points().iter().map(|&p| index[&t.apply(p)]).collect();
        Framed {
            points: g.points().to_vec(),
            inner,
            back,
            perm,
        }
    }

    fn inner_order<T: Copy + Default>(&self, v: &[T]) -> Vec<T> {
        let mut out = vec![T::default(); v.len()];
        for (i, &x) in v.iter().enumerate() {
            out[self.perm[i]] = x;
        }
        out
    }

    fn map_back(&self, steps: Vec<Step>) -> Vec<Step> {
        Schedule::from_steps(steps, 0).conjugate(&self.back).steps
    }
}

impl PieceRouter for Framed {
    fn points(&self) -> &[Pt] {
        &self.points
    }

    fn route_colored(&self, from: &[bool], to: &[bool]) -> Result<Vec<Step>> {
        let s = self
            .inner
            .route_colored(&self.inner_order(from), &self.inner_order(to))?;
        Ok(self.map_back(s))
    }

    fn route_labeled(&self, from: &[u32], to: &[u32]) -> Result<Vec<Step>> {
        let s = self
            .inner
            .route_labeled(&self.inner_order(from), &self.inner_order(to))?;
        Ok(self.map_back(s))
    }
}

/// Mirror-image subgraphs of two halves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorPair {
    /// Left vertices (off the spine column) whose reflection lies in the
    /// right half, canonical order.
    pub g1: Vec<Pt>,
    /// Reflections of `g1`, index by index.
    pub g2: Vec<Pt>,
    /// Reflection axis `x = axis`; `2 * axis` is an integer.
    pub axis: Rational,
    pub size: usize,
}

impl MirrorPair {
    pub fn reflect(&self, p: Pt) -> Pt {
        let a2 = (self.axis * Rational::from_integer(2)).to_integer() as i32;
        Pt::new(a2 - p.x, p.y)
    }
}

/// Direct mirrored intersection of two halves across the vertical spine
/// `x = spine_x`.
pub fn mirror_subgraphs(left: &LatticeGraph, right: &LatticeGraph, spine_x: Rational) -> MirrorPair {
    let axis = mirror_axis(spine_x);
    let mut pair = MirrorPair {
        g1: Vec::new(),
        g2: Vec::new(),
        axis,
        size: 0,
    };
    for &p in left.points() {
        if Rational::from_integer(p.x as i128) >= axis {
            continue;
        }
        let q = pair.reflect(p);
        if right.contains(q) {
            pair.g1.push(p);
            pair.g2.push(q);
        }
    }
    pair.size = pair.g1.len();
    pair
}

/// Core, hair and skin of a graph with the constants they certify.
#[derive(Clone, Debug)]
pub struct HairParams {
    pub core: Vec<Pt>,
    pub hair: Vec<Pt>,
    pub skin: Vec<Pt>,
    pub c1: u64,
    pub c2: u64,
    pub c3: u64,
}

impl HairParams {
    /// Checks sizes against `w + h` of `core` plus `hair`, and that
    /// `skin` lies in the core with `skin` plus `hair` connected.
    pub fn check(&self, w: u32, h: u32) -> Result<()> {
        let s = w as u64 + h as u64;
        if self.hair.len() as u64 > self.c1 * s {
            return Err(RouteError::invariant(format!(
                "hair has {} vertices, more than {} (w + h)",
                self.hair.len(),
                self.c1
            )));
        }
        if self.skin.len() as u64 > self.c2 * s {
            return Err(RouteError::invariant(format!(
                "skin has {} vertices, more than {} (w + h)",
                self.skin.len(),
                self.c2
            )));
        }
        let core = LatticeGraph::from_points(self.core.iter().copied());
        if let Some(&p) = self.skin.iter().find(|&&p| !core.contains(p)) {
            return Err(RouteError::invariant(format!("skin vertex {p} is not in the core")));
        }
        if !self.hair.is_empty() {
            let sh = LatticeGraph::from_points(self.skin.iter().chain(&self.hair).copied());
            if !sh.is_connected() {
                return Err(RouteError::invariant("skin and hair are not connected"));
            }
        }
        Ok(())
    }
}

/// Union of two arrays positioned by a graph, with token moves tracked.
struct Board<'a> {
    g: &'a LatticeGraph,
    cur: Vec<u32>,
    /// Home index of every token.
    home: HashMap<u32, usize>,
}

impl<'a> Board<'a> {
    fn new(g: &'a LatticeGraph, from: &[u32], to: &[u32]) -> Result<Self> {
        let home: HashMap<u32, usize> = to.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        if home.len() != to.len() || from.iter().any(|k| !home.contains_key(k)) {
            return Err(RouteError::ConfigMismatch("token sets differ".into()));
        }
        Ok(Board {
            g,
            cur: from.to_vec(),
            home,
        })
    }

    fn home_of(&self, i: usize) -> Pt {
        self.g.point(self.home[&self.cur[i]])
    }

    fn apply(&mut self, steps: &[Step]) {
        for s in steps {
            for &(a, b) in s.swaps() {
                let (i, j) = (self.g.index_of(a).unwrap(), self.g.index_of(b).unwrap());
                self.cur.swap(i, j);
            }
        }
    }

    /// Indices of `pts` in the board.
    fn indices(&self, pts: &[Pt]) -> Vec<usize> {
        pts.iter().map(|&p| self.g.index_of(p).unwrap()).collect()
    }
}

fn zip_steps(parts: Vec<Vec<Step>>) -> Vec<Step> {
    zip_parallel(parts.into_iter().map(|s| Schedule::from_steps(s, 0))).steps
}

/// What to do once every token is in its home half.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Finish {
    Labeled,
    /// Colored finish; the flags give each token's color.
    Colored,
}

/// Two halves split by a vertical spine with the mirror exchange or the
/// hair reduction.
pub struct SpineUnion {
    points: Vec<Pt>,
    graph: LatticeGraph,
    left: Box<dyn PieceRouter>,
    right: Box<dyn PieceRouter>,
    pair: MirrorPair,
    rounds_cap: usize,
    strategy: Strategy,
}

enum Strategy {
    Mirror,
    /// Route the hair half through the core half.
    Hair { core_is_left: bool, params: HairParams },
}

/// Widths, spine length and the pair-size fraction that enable the mirror
/// exchange.
struct Thresholds {
    need_half_heights: bool,
    fraction_denom: usize,
    /// Labeled constant of either half, used when one half is hair.
    core_constant: u64,
}

impl SpineUnion {
    fn build(
        left: Box<dyn PieceRouter>,
        right: Box<dyn PieceRouter>,
        spine_x: Rational,
        rounds_cap: usize,
        th: Thresholds,
    ) -> Result<Self> {
        let lg = LatticeGraph::from_points(left.points().iter().copied());
        let rg = LatticeGraph::from_points(right.points().iter().copied());
        let graph = LatticeGraph::from_points(lg.points().iter().chain(rg.points()).copied());
        if graph.len() != lg.len() + rg.len() {
            return Err(RouteError::precondition("halves overlap"));
        }
        if !graph.is_connected() {
            return Err(RouteError::Disconnected);
        }
        let pair = mirror_subgraphs(&lg, &rg, spine_x);
        let t = bounds::MIRROR_THRESHOLD;
        let big = |g: &LatticeGraph| g.width() >= t && (!th.need_half_heights || g.height() >= t);
        let spine_ok = graph.height() >= t;
        let small = lg.len().min(rg.len());
        let strategy = if big(&lg) && big(&rg) && spine_ok {
            if pair.size * th.fraction_denom < small {
                return Err(RouteError::invariant(format!(
                    "mirror pair of size {} is below 1/{} of {small}",
                    pair.size, th.fraction_denom
                )));
            }
            Strategy::Mirror
        } else {
            let core_is_left = lg.len() >= rg.len();
            let (core, hair) = if core_is_left { (&lg, &rg) } else { (&rg, &lg) };
            let col = if core_is_left { core.max_x() } else { core.min_x() };
            let skin: Vec<Pt> = core.points().iter().copied().filter(|p| p.x == col).collect();
            let params = HairParams {
                core: core.points().to_vec(),
                hair: hair.points().to_vec(),
                skin,
                c1: bounds::HAIR_C1,
                c2: bounds::HAIR_C2,
                c3: th.core_constant,
            };
            params.check(graph.width(), graph.height())?;
            Strategy::Hair {
                core_is_left,
                params,
            }
        };
        Ok(SpineUnion {
            points: graph.points().to_vec(),
            graph,
            left,
            right,
            pair,
            rounds_cap,
            strategy,
        })
    }

    pub fn pair(&self) -> &MirrorPair {
        &self.pair
    }

    pub fn uses_mirror(&self) -> bool {
        matches!(self.strategy, Strategy::Mirror)
    }

    fn split(&self, b: &Board) -> (Vec<usize>, Vec<usize>) {
        (b.indices(self.left.points()), b.indices(self.right.points()))
    }

    /// Moves every token into its home half; returns steps and rounds.
    fn exchange(&self, b: &mut Board) -> Result<(Vec<Step>, usize)> {
        let (li, ri) = self.split(b);
        let left_set = LatticeGraph::from_points(self.left.points().iter().copied());
        let improper_at = |b: &Board, i: usize, in_left: bool| left_set.contains(b.home_of(i)) != in_left;
        let l_local: HashMap<Pt, usize> =
            self.left.points().iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let r_local: HashMap<Pt, usize> =
            self.right.points().iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let g1: Vec<usize> = self.pair.g1.iter().map(|p| l_local[p]).collect();
        let g2: Vec<usize> = self.pair.g2.iter().map(|p| r_local[p]).collect();
        let mut steps = Vec::new();
        let mut rounds = 0;
        loop {
            let il: Vec<bool> = li.iter().map(|&i| improper_at(b, i, true)).collect();
            let ir: Vec<bool> = ri.iter().map(|&i| improper_at(b, i, false)).collect();
            let k = il.iter().filter(|&&x| x).count();
            if k != ir.iter().filter(|&&x| x).count() {
                return Err(RouteError::invariant("improper counts of the halves differ"));
            }
            if k == 0 {
                break;
            }
            rounds += 1;
            if rounds > self.rounds_cap || self.pair.size == 0 {
                return Err(RouteError::invariant(format!(
                    "{k} improper tokens remain after {} rounds with pair size {}",
                    rounds - 1,
                    self.pair.size
                )));
            }
            let fill = k.min(self.pair.size);
            // Phase 1: improper tokens onto the first `fill` pair vertices.
            let target = |cur: &[bool], chosen: &[usize]| -> Vec<bool> {
                let mut t = vec![false; cur.len()];
                for &c in chosen {
                    t[c] = true;
                }
                let mut extra = k - chosen.len();
                for pass in [true, false] {
                    for i in 0..cur.len() {
                        if extra > 0 && !t[i] && cur[i] == pass {
                            t[i] = true;
                            extra -= 1;
                        }
                    }
                }
                t
            };
            let tl = target(&il, &g1[..fill]);
            let tr = target(&ir, &g2[..fill]);
            let (a, c) = par::join(
                || self.left.route_colored(&il, &tl),
                || self.right.route_colored(&ir, &tr),
            );
            let s = zip_steps(vec![a?, c?]);
            b.apply(&s);
            steps.extend(s);
            // Phase 2: mirror the improper positions of the left pair set.
            let ir: Vec<bool> = ri.iter().map(|&i| improper_at(b, i, false)).collect();
            let mut t2 = ir.clone();
            for (&p1, &p2) in g1.iter().zip(&g2) {
                t2[p2] = improper_at(b, li[p1], true);
            }
            if t2.iter().filter(|&&x| x).count() != k {
                return Err(RouteError::invariant("pair sets hold unequal improper counts"));
            }
            let s = self.right.route_colored(&ir, &t2)?;
            b.apply(&s);
            steps.extend(s);
            // Phase 3: swap mirrored improper pairs along rows.
            let mut rows: HashMap<i32, Vec<(usize, usize)>> = HashMap::new();
            for (&p1, &p2) in g1.iter().zip(&g2) {
                let (i, j) = (li[p1], ri[p2]);
                if improper_at(b, i, true) {
                    if !improper_at(b, j, false) {
                        return Err(RouteError::invariant("mirror partner is not improper"));
                    }
                    rows.entry(self.graph.point(i).y).or_default().push((i, j));
                }
            }
            let mut lines: Vec<Line<u32>> = Vec::new();
            let mut keys: Vec<i32> = rows.keys().copied().collect();
            keys.sort_unstable();
            for y in keys {
                let swaps = &rows[&y];
                let row: Vec<usize> = (0..self.graph.len()).filter(|&i| self.graph.point(i).y == y).collect();
                let line: Vec<Pt> = row.iter().map(|&i| self.graph.point(i)).collect();
                if line.windows(2).any(|w| w[1].x != w[0].x + 1) {
                    return Err(RouteError::invariant(format!("row {y} of the union has a gap")));
                }
                let from: Vec<u32> = row.iter().map(|&i| b.cur[i]).collect();
                let mut to = from.clone();
                let x0 = line[0].x;
                for &(i, j) in swaps {
                    let (pi, pj) = (self.graph.point(i), self.graph.point(j));
                    to.swap((pi.x - x0) as usize, (pj.x - x0) as usize);
                }
                lines.push((line, from, to));
            }
            let s = parallel_lines(lines)?;
            b.apply(&s);
            steps.extend(s);
            let after = li.iter().filter(|&&i| improper_at(b, i, true)).count();
            if after + fill != k {
                return Err(RouteError::invariant(format!(
                    "round {rounds} cleared {} improper tokens, expected {fill}",
                    k - after
                )));
            }
        }
        Ok((steps, rounds))
    }

    fn finish(&self, b: &Board, mode: Finish, color: &HashMap<u32, bool>) -> Result<Vec<Step>> {
        let (li, ri) = self.split(b);
        let run = |piece: &dyn PieceRouter, idx: &[usize]| -> Result<Vec<Step>> {
            let from: Vec<u32> = idx.iter().map(|&i| b.cur[i]).collect();
            let mut to = vec![0u32; idx.len()];
            let local: HashMap<usize, usize> = idx.iter().enumerate().map(|(k, &i)| (i, k)).collect();
            for &tok in &from {
                let slot = local.get(&b.home[&tok]).ok_or_else(|| {
                    RouteError::invariant(format!("token {tok} is outside its home half"))
                })?;
                to[*slot] = tok;
            }
            match mode {
                Finish::Labeled => piece.route_labeled(&from, &to),
                Finish::Colored => {
                    let f: Vec<bool> = from.iter().map(|k| color[k]).collect();
                    let t: Vec<bool> = to.iter().map(|k| color[k]).collect();
                    piece.route_colored(&f, &t)
                }
            }
        };
        let (a, c) = par::join(|| run(self.left.as_ref(), &li), || run(self.right.as_ref(), &ri));
        Ok(zip_steps(vec![a?, c?]))
    }

    fn route(&self, from: &[u32], to: &[u32], mode: Finish, color: &HashMap<u32, bool>) -> Result<Vec<Step>> {
        if from == to {
            return Ok(Vec::new());
        }
        let mut b = Board::new(&self.graph, from, to)?;
        match &self.strategy {
            Strategy::Mirror => {
                let (mut steps, _) = self.exchange(&mut b)?;
                steps.extend(self.finish(&b, mode, color)?);
                Ok(steps)
            }
            Strategy::Hair {
                core_is_left,
                params,
            } => {
                let core = if *core_is_left { &self.left } else { &self.right };
                hair_steps(&mut b, params, core.as_ref())
            }
        }
    }
}

impl PieceRouter for SpineUnion {
    fn points(&self) -> &[Pt] {
        &self.points
    }

    fn route_colored(&self, from: &[bool], to: &[bool]) -> Result<Vec<Step>> {
        let (lf, lt) = labels_for_colors(from, to)?;
        let color: HashMap<u32, bool> = lf.iter().zip(from).map(|(&k, &c)| (k, c)).collect();
        self.route(&lf, &lt, Finish::Colored, &color)
    }

    fn route_labeled(&self, from: &[u32], to: &[u32]) -> Result<Vec<Step>> {
        self.route(from, to, Finish::Labeled, &HashMap::new())
    }
}

/// Labels `1..=n` on `from` and the stable color matching on `to`.
fn labels_for_colors(from: &[bool], to: &[bool]) -> Result<(Vec<u32>, Vec<u32>)> {
    let f: Vec<Color> = from.iter().map(|&b| Color::from_bit(b)).collect();
    let t: Vec<Color> = to.iter().map(|&b| Color::from_bit(b)).collect();
    let dest = Color::destinations(&f, &t)?;
    let lf: Vec<u32> = (1..=from.len() as u32).collect();
    let mut lt = vec![0u32; from.len()];
    for (i, &d) in dest.iter().enumerate() {
        lt[d] = lf[i];
    }
    Ok((lf, lt))
}

/// Labeled configurations equivalent to a colored routing problem: labels
/// `1..=n` in canonical order on `from`, each carried to the vertex the
/// stable color matching assigns it.
pub fn colored_to_labeled(from: &ColorConfig, to: &ColorConfig) -> Result<(LabeledConfig, LabeledConfig)> {
    if !from.same_graph(to) {
        return Err(RouteError::ConfigMismatch("configurations live on different graphs".into()));
    }
    let bits = |c: &ColorConfig| -> Vec<bool> { c.tokens().iter().map(|t| t.is_black()).collect() };
    let (lf, lt) = labels_for_colors(&bits(from), &bits(to))?;
    Ok((
        LabeledConfig::new(from.graph().clone(), lf)?,
        LabeledConfig::new(from.graph().clone(), lt)?,
    ))
}

/// Hair reduction on a board whose graph is core plus hair.
fn hair_steps(b: &mut Board, params: &HairParams, core: &dyn PieceRouter) -> Result<Vec<Step>> {
    let hair_g = LatticeGraph::from_points(params.hair.iter().copied());
    let ci = b.indices(core.points());
    let mut steps = Vec::new();
    // Phase 1: hair-bound tokens to the core vertices nearest the skin.
    let core_g = LatticeGraph::from_points(core.points().iter().copied());
    let skin: Vec<usize> = params.skin.iter().map(|&p| core_g.index_of(p).unwrap()).collect();
    let dist = core_g.bfs(skin.iter().copied());
    let mut order: Vec<usize> = (0..ci.len()).collect();
    order.sort_by_key(|&k| (dist[k], k));
    let from: Vec<bool> = ci.iter().map(|&i| hair_g.contains(b.home_of(i))).collect();
    let need = from.iter().filter(|&&x| x).count();
    let mut to = vec![false; ci.len()];
    for &k in order.iter().take(need) {
        to[k] = true;
    }
    let s = core.route_colored(&from, &to)?;
    b.apply(&s);
    steps.extend(s);
    let far = ci.iter().enumerate().filter(|&(_, &i)| hair_g.contains(b.home_of(i))).map(|(k, _)| dist[k]).max();
    let near = ci.iter().enumerate().filter(|&(_, &i)| !hair_g.contains(b.home_of(i))).map(|(k, _)| dist[k]).min();
    if let (Some(f), Some(n)) = (far, near) {
        if f > n {
            return Err(RouteError::invariant("hair tokens are not nearest the skin"));
        }
    }
    // Phase 2: tree routing on hair, skin and the vertices holding hair tokens.
    let mut sp: Vec<Pt> = params.hair.iter().chain(&params.skin).copied().collect();
    sp.extend(ci.iter().filter(|&&i| hair_g.contains(b.home_of(i))).map(|&i| b.g.point(i)));
    let spg = LatticeGraph::from_points(sp);
    if !spg.is_connected() {
        return Err(RouteError::invariant("hair subgraph is disconnected"));
    }
    let idx = b.indices(spg.points());
    let mut dest = vec![usize::MAX; idx.len()];
    let mut vacated = Vec::new();
    let mut movers = Vec::new();
    for (k, &i) in idx.iter().enumerate() {
        let p = spg.point(k);
        let home = b.home_of(i);
        if hair_g.contains(home) {
            dest[k] = spg.index_of(home).unwrap();
            if !hair_g.contains(p) {
                vacated.push(k);
            }
        } else if hair_g.contains(p) {
            movers.push(k);
        } else {
            dest[k] = k;
        }
    }
    if vacated.len() != movers.len() {
        return Err(RouteError::invariant("hair exchange is unbalanced"));
    }
    for (&m, &v) in movers.iter().zip(&vacated) {
        dest[m] = v;
    }
    let s = tree_steps(&spg, dest);
    if s.len() > 3 * spg.len() {
        return Err(RouteError::invariant("tree routing exceeded 3n on the hair subgraph"));
    }
    b.apply(&s);
    steps.extend(s);
    // Phase 3: finish inside the core.
    let from: Vec<u32> = ci.iter().map(|&i| b.cur[i]).collect();
    let local: HashMap<usize, usize> = ci.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut to = vec![0u32; ci.len()];
    for &tok in &from {
        let slot = local
            .get(&b.home[&tok])
            .ok_or_else(|| RouteError::invariant(format!("token {tok} is still outside the core")))?;
        to[*slot] = tok;
    }
    steps.extend(core.route_labeled(&from, &to)?);
    Ok(steps)
}

/// A graph split into core and hair, routed by the hair reduction.
pub struct HairUnion {
    points: Vec<Pt>,
    graph: LatticeGraph,
    params: HairParams,
    core: Box<dyn PieceRouter>,
}

impl HairUnion {
    /// Checks the parameters against the union of core and hair.
    pub fn new(params: HairParams, core: Box<dyn PieceRouter>) -> Result<Self> {
        let graph = LatticeGraph::from_points(params.core.iter().chain(&params.hair).copied());
        if graph.len() != params.core.len() + params.hair.len() {
            return Err(RouteError::precondition("core and hair overlap"));
        }
        if !graph.is_connected() {
            return Err(RouteError::Disconnected);
        }
        params.check(graph.width(), graph.height())?;
        if core.points() != LatticeGraph::from_points(params.core.iter().copied()).points() {
            return Err(RouteError::precondition("core router does not cover the core"));
        }
        Ok(HairUnion {
            points: graph.points().to_vec(),
            graph,
            params,
            core,
        })
    }

    pub fn params(&self) -> &HairParams {
        &self.params
    }

    /// `(6 c1 + 3 c2 + 2 c3)`.
    pub fn constant(&self) -> u64 {
        bounds::hair(self.params.c1, self.params.c2, self.params.c3)
    }
}

impl PieceRouter for HairUnion {
    fn points(&self) -> &[Pt] {
        &self.points
    }

    fn route_colored(&self, from: &[bool], to: &[bool]) -> Result<Vec<Step>> {
        let (lf, lt) = labels_for_colors(from, to)?;
        self.route_labeled(&lf, &lt)
    }

    fn route_labeled(&self, from: &[u32], to: &[u32]) -> Result<Vec<Step>> {
        if from == to {
            return Ok(Vec::new());
        }
        let mut b = Board::new(&self.graph, from, to)?;
        hair_steps(&mut b, &self.params, self.core.as_ref())
    }
}

/// Labeled routing with the hair reduction and a router for the core.
/// Declared bound `(6 c1 + 3 c2 + 2 c3)(w + h)`.
pub fn route_with_hair(
    params: &HairParams,
    core: Box<dyn PieceRouter>,
    from: &LabeledConfig,
    to: &LabeledConfig,
) -> Result<Schedule> {
    let router = HairUnion::new(params.clone(), core)?;
    if router.points() != from.graph().points() {
        return Err(RouteError::precondition("core and hair do not cover the graph"));
    }
    run_labeled("hair", &router, router.constant(), from, to)
}

/// Spine of two vertex sets split by a vertical line: the left set's last
/// column and the right set's first. Shared columns go to the left set.
fn vertical_split(a: &[Pt], b: &[Pt]) -> Option<(Vec<Pt>, Vec<Pt>, Rational)> {
    let (ga, gb) = (LatticeGraph::from_points(a.iter().copied()), LatticeGraph::from_points(b.iter().copied()));
    let (l, r) = if ga.min_x() <= gb.min_x() { (ga, gb) } else { (gb, ga) };
    if l.max_x() > r.min_x() {
        return None;
    }
    let spine = if l.max_x() == r.min_x() {
        Rational::from_integer(l.max_x() as i128)
    } else {
        Rational::new(2 * l.max_x() as i128 + 1, 2)
    };
    let right: Vec<Pt> = r.points().iter().copied().filter(|p| !l.contains(*p)).collect();
    Some((l.points().to_vec(), right, spine))
}

/// Maps `(x, y)` to `(y, -x)`: a horizontal spine at `y = c` becomes the
/// vertical spine `x = c`, with lower rows on the left.
fn turn() -> IsoTransform {
    IsoTransform::symmetries()[3]
}

/// Two ramps with a common spine; vertical if they are separated by a
/// vertical line, horizontal otherwise.
pub fn two_ramps(p1: &[Pt], p2: &[Pt]) -> Result<Box<dyn PieceRouter>> {
    let build = |a: &[Pt], b: &[Pt]| -> Result<Option<SpineUnion>> {
        let Some((l, r, spine)) = vertical_split(a, b) else {
            return Ok(None);
        };
        let u = SpineUnion::build(
            Box::new(RampPiece::new(l)?),
            Box::new(RampPiece::new(r)?),
            spine,
            bounds::TWO_RAMPS_ROUNDS as usize,
            Thresholds {
                need_half_heights: false,
                fraction_denom: 20,
                core_constant: bounds::RAMP_LABELED,
            },
        )?;
        Ok(Some(u))
    };
    if let Some(u) = build(p1, p2)? {
        return Ok(Box::new(u));
    }
    let t = turn();
    let ta: Vec<Pt> = p1.iter().map(|&p| t.apply(p)).collect();
    let tb: Vec<Pt> = p2.iter().map(|&p| t.apply(p)).collect();
    match build(&ta, &tb)? {
        Some(u) => Ok(Box::new(Framed::new(Box::new(u), t))),
        None => Err(RouteError::precondition("ramps do not share a spine")),
    }
}

/// Labeled routing on the union of two ramps with a common spine.
pub fn route_two_ramps(p1: &[Pt], p2: &[Pt], from: &LabeledConfig, to: &LabeledConfig) -> Result<Schedule> {
    let router = two_ramps(p1, p2)?;
    let g = from.graph();
    if router.points() != g.points() {
        return Err(RouteError::precondition("configurations are not on the union of the ramps"));
    }
    let c = bounds::TWO_RAMPS_LABELED.max(bounds::TWO_RAMPS_HAIR);
    run_labeled("two-ramps", router.as_ref(), c, from, to)
}

fn run_labeled(name: &'static str, router: &dyn PieceRouter, c: u64, from: &LabeledConfig, to: &LabeledConfig) -> Result<Schedule> {
    if !from.same_graph(to) || !from.same_tokens(to) {
        return Err(RouteError::ConfigMismatch("configurations do not match".into()));
    }
    let g = from.graph();
    let steps = router.route_labeled(from.tokens(), to.tokens())?;
    let s = Schedule::from_steps(steps, bounds::scaled(c, g.width(), g.height()));
    ensure_valid(name, &s, from, to)?;
    Ok(s)
}

/// One half of a burger bun (spine vertical on its `spine_side`): a ramp,
/// or two ramps split at the row of the vertex farthest from the spine.
fn burger_half(points: Vec<Pt>, far_is_left: bool) -> Result<Box<dyn PieceRouter>> {
    if let Ok(r) = RampPiece::new(points.clone()) {
        return Ok(Box::new(r));
    }
    let g = LatticeGraph::from_points(points);
    let key = |p: &Pt| if far_is_left { p.x } else { -p.x };
    let far = g.points().iter().min_by_key(|p| (key(p), p.y)).copied().unwrap();
    let (bottom, top): (Vec<Pt>, Vec<Pt>) = g.points().iter().partition(|p| p.y <= far.y);
    two_ramps(&bottom, &top)
}

/// Burger bun router in any orientation, with the spine of the hull of
/// the graph's vertices.
pub fn burger_bun(g: &LatticeGraph) -> Result<Box<dyn PieceRouter>> {
    let pts: Vec<Point> = g.points().iter().map(|&p| Point::from(p)).collect();
    burger_bun_with_spine(g, &find_spine(&hull(&pts)))
}

/// Burger bun router for a graph cut out by a polygon with the given spine.
pub fn burger_bun_with_spine(g: &LatticeGraph, spine: &SpineInfo) -> Result<Box<dyn PieceRouter>> {
    if g.is_empty() || !g.is_connected() {
        return Err(RouteError::Disconnected);
    }
    let t = match spine.orientation {
        SpineOrientation::Vertical => IsoTransform::IDENTITY,
        SpineOrientation::Horizontal => turn(),
        SpineOrientation::None => return Err(RouteError::precondition("no spine")),
    };
    let s = spine.coordinate;
    let frame: Vec<Pt> = g.points().iter().map(|&p| t.apply(p)).collect();
    let (left, right): (Vec<Pt>, Vec<Pt>) =
        frame.iter().partition(|p| Rational::from_integer(p.x as i128) <= s);
    let inner: Box<dyn PieceRouter> = if left.is_empty() || right.is_empty() {
        let all = if left.is_empty() { right } else { left };
        burger_half(all, true)?
    } else {
        Box::new(SpineUnion::build(
            burger_half(left, true)?,
            burger_half(right, false)?,
            s,
            bounds::BURGER_BUN_ROUNDS as usize,
            Thresholds {
                need_half_heights: true,
                fraction_denom: 40,
                core_constant: bounds::HALF_LABELED,
            },
        )?)
    };
    Ok(if t == IsoTransform::IDENTITY {
        inner
    } else {
        Box::new(Framed::new(inner, t))
    })
}

/// Labeled routing on a burger bun graph.
pub fn route_burger_bun(from: &LabeledConfig, to: &LabeledConfig) -> Result<Schedule> {
    let router = burger_bun(from.graph())?;
    run_labeled("burger-bun", router.as_ref(), bounds::BURGER_BUN, from, to)
}

/// Colored routing on a burger bun graph.
pub fn route_burger_bun_colored(from: &ColorConfig, to: &ColorConfig) -> Result<Schedule> {
    let router = burger_bun(from.graph())?;
    if !from.same_graph(to) || from.black_count() != to.black_count() {
        return Err(RouteError::ConfigMismatch("configurations do not match".into()));
    }
    let g = from.graph();
    let bits = |c: &ColorConfig| -> Vec<bool> { c.tokens().iter().map(|t| t.is_black()).collect() };
    let steps = router.route_colored(&bits(from), &bits(to))?;
    let s = Schedule::from_steps(steps, bounds::scaled(bounds::BURGER_BUN, g.width(), g.height()));
    ensure_valid("burger-bun", &s, from, to)?;
    Ok(s)
}
