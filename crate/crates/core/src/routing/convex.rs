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

//! Routing on arbitrary convex cuts: trim, shear to a burger bun, route the
//! burger bun, carry its schedule into the original graph through a
//! bounded-stretch embedding, and finish with the hair reduction.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use serde::Serialize;

use crate::bounds;
use crate::error::{Result, RouteError};
use crate::geometry::{find_spine, hull, shear_to_burger_bun, Point, Polygon, Rational, SpineInfo};
use crate::lattice::{drop_rightmost, psi, skin, trim_margins, IsoTransform, LatticeGraph, Pt, VertexMap};

use super::composite::{burger_bun_with_spine, Framed, HairParams, HairUnion, PieceRouter};
use super::config::{ColorConfig, LabeledConfig};
use super::path::{parallel_lines, Line};
use super::schedule::{ensure_valid, Schedule, Step};
use super::tree::route_tree;

/// Vertices within distance `r` of `src` in `g`, with distances, in BFS
/// order.
fn ball(g: &LatticeGraph, src: usize, r: u32) -> Vec<(usize, u32)> {
    let mut seen: HashMap<usize, u32> = HashMap::from([(src, 0)]);
    let mut out = vec![(src, 0)];
    let mut head = 0;
    while head < out.len() {
        let (v, d) = out[head];
        head += 1;
        if d == r {
            continue;
        }
        for u in g.neighbors(v) {
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(u) {
                e.insert(d + 1);
                out.push((u, d + 1));
            }
        }
    }
    out
}

/// Vertex coloring with same-colored vertices more than `2c` apart, and the
/// induced coloring of vertex pairs.
#[derive(Clone, Debug)]
pub struct StretchColoring {
    pub c: u32,
    graph: Arc<LatticeGraph>,
    vertex_color: Vec<u32>,
    colors: u32,
    /// Frozen shortest paths, keyed by ordered endpoint pair.
    paths: HashMap<(Pt, Pt), Vec<Pt>>,
}

/// Greedy coloring of the distance-`2c` conflict graph in canonical order.
pub fn stretch_coloring(b: Arc<LatticeGraph>, c: u32) -> StretchColoring {
    let mut color = vec![u32::MAX; b.len()];
    let mut colors = 0;
    let mut used = Vec::new();
    for v in 0..b.len() {
        used.clear();
        used.extend(
            ball(&b, v, 2 * c)
                .into_iter()
                .map(|(u, _)| color[u])
                .filter(|&k| k != u32::MAX),
        );
        let k = (0..).find(|k| !used.contains(k)).unwrap();
        color[v] = k;
        colors = colors.max(k + 1);
    }
    StretchColoring {
        c,
        graph: b,
        vertex_color: color,
        colors,
        paths: HashMap::new(),
    }
}

impl StretchColoring {
    pub fn graph(&self) -> &Arc<LatticeGraph> {
        &self.graph
    }

    pub fn color_count(&self) -> u32 {
        self.colors
    }

    /// `4c(2c + 1) + 1`.
    pub fn color_limit(&self) -> u32 {
        4 * self.c * (2 * self.c + 1) + 1
    }

    pub fn vertex_color(&self, p: Pt) -> Option<u32> {
        self.graph.index_of(p).map(|i| self.vertex_color[i])
    }

    /// Color of an unordered pair of differently colored vertices:
    /// the index of `{lo, hi}` among all color pairs.
    pub fn pair_color(&self, a: Pt, b: Pt) -> Option<u32> {
        let (x, y) = (self.vertex_color(a)?, self.vertex_color(b)?);
        if x == y {
            return None;
        }
        let (lo, hi) = (x.min(y), x.max(y));
        Some(hi * (hi - 1) / 2 + lo)
    }

    /// Computes and stores the paths for `pairs`; fails on the first pair
    /// more than `c` apart.
    pub fn freeze(&mut self, pairs: impl IntoIterator<Item = (Pt, Pt)>) -> std::result::Result<(), (Pt, Pt)> {
        for (a, b) in pairs {
            let key = (a.min(b), a.max(b));
            if self.paths.contains_key(&key) {
                continue;
            }
            let p = self.shortest_path(key.0, key.1).ok_or((a, b))?;
            self.paths.insert(key, p);
        }
        Ok(())
    }

    /// The frozen path between `a` and `b` (in either direction), or a
    /// fresh one if the pair was never frozen.
    pub fn path(&self, a: Pt, b: Pt) -> Option<Vec<Pt>> {
        let key = (a.min(b), a.max(b));
        let mut p = match self.paths.get(&key) {
            Some(p) => p.clone(),
            None => self.shortest_path(key.0, key.1)?,
        };
        if a != key.0 {
            p.reverse();
        }
        Some(p)
    }

    /// A shortest path from `a` to `b` of length at most `c`, with
    /// neighbors explored in canonical order.
    pub fn shortest_path(&self, a: Pt, b: Pt) -> Option<Vec<Pt>> {
        let g = &self.graph;
        let (s, t) = (g.index_of(a)?, g.index_of(b)?);
        let mut parent: HashMap<usize, usize> = HashMap::from([(s, s)]);
        let mut frontier = vec![s];
        for _ in 0..self.c {
            if parent.contains_key(&t) {
                break;
            }
            let mut next = Vec::new();
            for &v in &frontier {
                for u in g.neighbors(v) {
                    if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(u) {
                        e.insert(v);
                        next.push(u);
                    }
                }
            }
            frontier = next;
        }
        parent.get(&t)?;
        let mut path = vec![t];
        let mut v = t;
        while v != s {
            v = parent[&v];
            path.push(v);
        }
        path.reverse();
        Some(path.into_iter().map(|i| g.point(i)).collect())
    }
}

/// Outcome of [`simulate`].
#[derive(Clone, Debug)]
pub struct Simulation {
    pub schedule: Schedule,
    /// Largest number of steps one simulated step expanded into.
    pub max_expansion: usize,
}

/// One exchange of the end tokens of a path.
struct Exchange {
    path: Vec<Pt>,
    color: u32,
}

/// Expands one step on the source graph into steps on the target graph.
/// Exchanges are batched first-fit (sorted by path length, then pair
/// color) into groups of vertex-disjoint paths; each group takes at most
/// `c + 1` steps.
fn simulate_step(step: &Step, map: &VertexMap, coloring: &StretchColoring) -> Result<Vec<Step>> {
    let mut images = Vec::with_capacity(step.len());
    for &(u, v) in step.swaps() {
        match (map.get(u), map.get(v)) {
            (Some(a), Some(b)) => images.push((a, b)),
            _ => return Err(RouteError::invariant(format!("swap {u}-{v} leaves the embedded graph"))),
        }
    }
    // The embedding is injective, so adjacent images of a matching are a
    // matching.
    if images.is_empty() {
        return Ok(Vec::new());
    }
    if images.iter().all(|&(a, b)| a.is_adjacent(b)) {
        return Ok(vec![Step(images)]);
    }
    let mut ex = Vec::with_capacity(step.len());
    for (a, b) in images {
        let path = if a.is_adjacent(b) { Some(vec![a, b]) } else { coloring.path(a, b) };
        let path = path.ok_or_else(|| {
            RouteError::invariant(format!("images {a} and {b} are more than {} apart", coloring.c))
        })?;
        let color = coloring.pair_color(a, b).unwrap_or(u32::MAX);
        ex.push(Exchange { path, color });
    }
    ex.sort_by_key(|e| (e.path.len(), e.color));
    let mut batches: Vec<Vec<usize>> = Vec::new();
    let mut owner: HashMap<Pt, u128> = HashMap::new();
    for (k, e) in ex.iter().enumerate() {
        let busy = e.path.iter().fold(0u128, |m, p| m | owner.get(p).copied().unwrap_or(0));
        let slot = (!busy).trailing_zeros() as usize;
        if slot >= 128 {
            return Err(RouteError::invariant("more than 128 exchange batches in one step"));
        }
        if slot == batches.len() {
            batches.push(Vec::new());
        }
        batches[slot].push(k);
        for p in &e.path {
            *owner.entry(*p).or_default() |= 1 << slot;
        }
    }
    let mut out = Vec::new();
    for batch in batches {
        // Adjacent endpoints exchange in one swap; longer paths need the
        // line router and are padded into the same steps.
        let (short, long): (Vec<usize>, Vec<usize>) = batch.into_iter().partition(|&k| ex[k].path.len() == 2);
        let lines: Vec<Line<u32>> = long
            .iter()
            .map(|&k| {
                let path = ex[k].path.clone();
                let n = path.len() as u32;
                let from: Vec<u32> = (0..n).collect();
                let mut to = from.clone();
                to.swap(0, n as usize - 1);
                (path, from, to)
            })
            .collect();
        let mut steps = if lines.is_empty() { Vec::new() } else { parallel_lines(lines)? };
        if !short.is_empty() {
            if steps.is_empty() {
                steps.push(Step::new());
            }
            for k in short {
                steps[0].push(ex[k].path[0], ex[k].path[1]);
            }
        }
        out.extend(steps);
    }
    Ok(out)
}

fn simulate_steps(steps: &[Step], map: &VertexMap, coloring: &StretchColoring) -> Result<(Vec<Step>, usize)> {
    let limit = bounds::simulation(coloring.c as u64) as usize;
    let mut out = Vec::new();
    let mut max_expansion = 0;
    for s in steps {
        let e = simulate_step(s, map, coloring)?;
        if e.len() > limit {
            return Err(RouteError::invariant(format!("one step expanded into {} > {limit}", e.len())));
        }
        max_expansion = max_expansion.max(e.len());
        out.extend(e);
    }
    Ok((out, max_expansion))
}

/// Carries a schedule on the source graph of `map` into its image, which is
/// the graph of `coloring`.
pub fn simulate(schedule: &Schedule, map: &VertexMap, coloring: &StretchColoring) -> Result<Simulation> {
    let (steps, max_expansion) = simulate_steps(&schedule.steps, map, coloring)?;
    let bound = schedule.declared_bound * bounds::simulation(coloring.c as u64);
    Ok(Simulation {
        schedule: Schedule::from_steps(steps, bound),
        max_expansion,
    })
}

/// Routes the image of an embedding by routing the source graph and
/// simulating every step.
pub struct Simulated {
    points: Vec<Pt>,
    source: Box<dyn PieceRouter>,
    map: VertexMap,
    coloring: StretchColoring,
    /// Source index of each image vertex.
    source_index: Vec<usize>,
    max_expansion: Arc<AtomicUsize>,
}

impl Simulated {
    pub fn new(source: Box<dyn PieceRouter>, map: VertexMap, c: u32) -> Result<Self> {
        let image = Arc::new(LatticeGraph::from_points(map.image()));
        if image.len() != source.points().len() {
            return Err(RouteError::invariant("embedding does not cover the source router"));
        }
        let src: HashMap<Pt, usize> = source.points().iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let source_index = image
            .points()
            .iter()
            .map(|&q| map.preimage(q).and_then(|p| src.get(&p).copied()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| RouteError::invariant("embedding and source router disagree"))?;
        let mut coloring = stretch_coloring(image.clone(), c);
        let edges = source_edges(source.points());
        let pairs = edges.iter().map(|&(u, v)| (map.get(u).unwrap(), map.get(v).unwrap()));
        coloring.freeze(pairs).map_err(|(a, b)| {
            RouteError::invariant(format!("an edge stretches beyond {c}: images {a} and {b}"))
        })?;
        Ok(Simulated {
            points: image.points().to_vec(),
            source,
            map,
            coloring,
            source_index,
            max_expansion: Arc::new(AtomicUsize::new(0)),
        })
    }

    pub fn coloring(&self) -> &StretchColoring {
        &self.coloring
    }

    /// Largest expansion of one source step seen so far.
    pub fn max_expansion(&self) -> usize {
        self.max_expansion.load(Ordering::Relaxed)
    }

    /// Shared handle to the expansion counter.
    pub fn expansion_counter(&self) -> Arc<AtomicUsize> {
        self.max_expansion.clone()
    }

    fn to_source<T: Copy + Default>(&self, v: &[T]) -> Vec<T> {
        let mut out = vec![T::default(); v.len()];
        for (i, &x) in v.iter().enumerate() {
            out[self.source_index[i]] = x;
        }
        out
    }

    fn expand(&self, steps: Vec<Step>) -> Result<Vec<Step>> {
        let (out, e) = simulate_steps(&steps, &self.map, &self.coloring)?;
        self.max_expansion.fetch_max(e, Ordering::Relaxed);
        Ok(out)
    }
}

fn source_edges(points: &[Pt]) -> Vec<(Pt, Pt)> {
    let g = LatticeGraph::from_points(points.iter().copied());
    g.edges().into_iter().map(|(i, j)| (g.point(i), g.point(j))).collect()
}

impl PieceRouter for Simulated {
    fn points(&self) -> &[Pt] {
        &self.points
    }

    fn route_colored(&self, from: &[bool], to: &[bool]) -> Result<Vec<Step>> {
        let s = self.source.route_colored(&self.to_source(from), &self.to_source(to))?;
        self.expand(s)
    }

    fn route_labeled(&self, from: &[u32], to: &[u32]) -> Result<Vec<Step>> {
        let s = self.source.route_labeled(&self.to_source(from), &self.to_source(to))?;
        self.expand(s)
    }
}

/// Intermediate graphs of the convex pipeline, in working coordinates
/// (the input rotated so that the trimmed core is at least as tall as it
/// is wide).
#[derive(Clone, Debug)]
pub struct PipelineArtifacts {
    /// Input coordinates to working coordinates.
    pub transform: IsoTransform,
    /// The whole graph.
    pub graph: LatticeGraph,
    pub p1: LatticeGraph,
    pub p2: LatticeGraph,
    pub shear: Rational,
    pub p3_polygon: Polygon,
    pub spine: SpineInfo,
    pub p3: LatticeGraph,
    pub psi: VertexMap,
    pub core: Vec<Pt>,
    pub hair: Vec<Pt>,
    pub skin: Vec<Pt>,
}

#[derive(Serialize)]
struct ArtifactsDump<'a> {
    p1: &'a [Pt],
    p2: &'a [Pt],
    p3: &'a [Pt],
    core: &'a [Pt],
    hair: &'a [Pt],
    skin: &'a [Pt],
    shear: [i64; 2],
    transform: [[i32; 2]; 2],
}

impl PipelineArtifacts {
    /// JSON dump of the vertex lists and the shear.
    pub fn to_json(&self) -> String {
        let d = ArtifactsDump {
            p1: self.p1.points(),
            p2: self.p2.points(),
            p3: self.p3.points(),
            core: &self.core,
            hair: &self.hair,
            skin: &self.skin,
            shear: [*self.shear.numer() as i64, *self.shear.denom() as i64],
            transform: self.transform.matrix(),
        };
        serde_json::to_string(&d).expect("serializable")
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(RouteError::invariant(msg()))
    }
}

/// Builds the pipeline for the graph cut out by a polygon.
pub fn build_pipeline(poly: &Polygon) -> Result<PipelineArtifacts> {
    build_pipeline_graph(&LatticeGraph::cut(poly))
}

/// Builds the pipeline for a connected convex cut graph with more than
/// `4(w + h)` vertices.
pub fn build_pipeline_graph(g: &LatticeGraph) -> Result<PipelineArtifacts> {
    if !g.is_connected() {
        return Err(RouteError::Disconnected);
    }
    let s = g.width() as usize + g.height() as usize;
    if g.len() <= 4 * s.max(1) {
        return Err(RouteError::precondition("graph has at most 4(w + h) vertices"));
    }
    let trimmed = trim_margins(g)?;
    let transform = if trimmed.core.height() < trimmed.core.width() {
        IsoTransform::rot90()
    } else {
        IsoTransform::IDENTITY
    };
    let graph = g.transform(&transform);
    let p1 = trimmed.core.transform(&transform);
    let p2 = drop_rightmost(&p1);
    let p2_pts: Vec<Point> = p2.points().iter().map(|&p| Point::from(p)).collect();
    let (shear, p3_polygon) = shear_to_burger_bun(&hull(&p2_pts))?;
    let spine = find_spine(&p3_polygon);
    let p3 = LatticeGraph::cut(&p3_polygon);
    ensure(p3.is_connected(), || "sheared graph is disconnected".into())?;
    ensure(p3.len() >= 3 * p3.width() as usize, || {
        format!("sheared graph has {} < 3 w = {} vertices", p3.len(), 3 * p3.width())
    })?;
    let p1_rows: HashMap<i32, usize> = p1.rows().into_iter().map(|(y, r)| (y, r.len())).collect();
    for (y, row) in p3.rows() {
        ensure(row.len() >= 2, || format!("sheared row {y} has {} vertices", row.len()))?;
        ensure(row.len() <= p1_rows.get(&y).copied().unwrap_or(0), || {
            format!("sheared row {y} is longer than the trimmed row")
        })?;
    }
    let map = psi(&p1, &p3)?;
    let core_g = LatticeGraph::from_points(map.image());
    let p4 = drop_rightmost(&p2);
    ensure(p4.points().iter().all(|&p| core_g.contains(p)), || {
        "embedding image does not contain the twice-trimmed graph".into()
    })?;
    let hair: Vec<Pt> = graph.points().iter().copied().filter(|&p| !core_g.contains(p)).collect();
    let mut skin_pts = skin(&p4)?;
    skin_pts.extend(core_g.points().iter().copied().filter(|&p| !p4.contains(p)));
    let skin_g = LatticeGraph::from_points(skin_pts);
    ensure(hair.len() <= 6 * s, || format!("hair has {} > 6(w + h) vertices", hair.len()))?;
    ensure(skin_g.len() <= 4 * s, || format!("skin has {} > 4(w + h) vertices", skin_g.len()))?;
    Ok(PipelineArtifacts {
        transform,
        graph,
        p1,
        p2,
        shear: shear.m,
        p3_polygon,
        spine,
        p3,
        psi: map,
        core: core_g.points().to_vec(),
        hair,
        skin: skin_g.points().to_vec(),
    })
}

/// The pipeline router together with the artifacts it was built from.
pub struct ConvexRouter {
    router: Box<dyn PieceRouter>,
    pub artifacts: Option<PipelineArtifacts>,
    constant: u64,
    expansion: Option<Arc<AtomicUsize>>,
}

impl ConvexRouter {
    /// Builds the router for a connected convex cut graph. Small graphs
    /// (at most `4(w + h)` vertices) use tree routing.
    pub fn new(g: &LatticeGraph) -> Result<Self> {
        let s = g.width() as usize + g.height() as usize;
        if g.len() <= 4 * s.max(1) {
            return Ok(ConvexRouter {
                router: Box::new(TreePiece(g.points().to_vec())),
                artifacts: None,
                constant: bounds::SMALL_TREE,
                expansion: None,
            });
        }
        let a = build_pipeline_graph(g)?;
        let bun = burger_bun_with_spine(&a.p3, &a.spine)?;
        let core = Simulated::new(bun, a.psi.clone(), bounds::STRETCH as u32)?;
        let expansion = Some(core.expansion_counter());
        let params = HairParams {
            core: a.core.clone(),
            hair: a.hair.clone(),
            skin: a.skin.clone(),
            c1: bounds::PIPELINE_C1,
            c2: bounds::PIPELINE_C2,
            c3: bounds::PIPELINE_CORE,
        };
        let union = HairUnion::new(params, Box::new(core))?;
        let router: Box<dyn PieceRouter> = if a.transform == IsoTransform::IDENTITY {
            Box::new(union)
        } else {
            Box::new(Framed::new(Box::new(union), a.transform))
        };
        Ok(ConvexRouter {
            router,
            artifacts: Some(a),
            constant: bounds::CONVEX,
            expansion,
        })
    }

    /// Declared constant: `12` for small graphs, the pipeline constant
    /// otherwise.
    pub fn constant(&self) -> u64 {
        self.constant
    }

    /// Largest number of steps one simulated burger bun step has expanded
    /// into so far; `None` for tree routing.
    pub fn max_expansion(&self) -> Option<usize> {
        self.expansion.as_ref().map(|e| e.load(Ordering::Relaxed))
    }

    pub fn router(&self) -> &dyn PieceRouter {
        self.router.as_ref()
    }
}

/// Tree routing as a piece router.
struct TreePiece(Vec<Pt>);

impl PieceRouter for TreePiece {
    fn points(&self) -> &[Pt] {
        &self.0
    }

    fn route_colored(&self, from: &[bool], to: &[bool]) -> Result<Vec<Step>> {
        let g = Arc::new(LatticeGraph::from_points(self.0.iter().copied()));
        let f = ColorConfig::new(g.clone(), from.iter().map(|&b| super::Color::from_bit(b)).collect())?;
        let t = ColorConfig::new(g, to.iter().map(|&b| super::Color::from_bit(b)).collect())?;
        Ok(route_tree(&f, &t)?.steps)
    }

    fn route_labeled(&self, from: &[u32], to: &[u32]) -> Result<Vec<Step>> {
        let g = Arc::new(LatticeGraph::from_points(self.0.iter().copied()));
        let f = LabeledConfig::new(g.clone(), from.to_vec())?;
        let t = LabeledConfig::new(g, to.to_vec())?;
        Ok(route_tree(&f, &t)?.steps)
    }
}

impl ConvexRouter {
    fn check_graph(&self, g: &LatticeGraph) -> Result<u64> {
        if self.router.points() != g.points() {
            return Err(RouteError::ConfigMismatch("configuration is on another graph".into()));
        }
        Ok(bounds::scaled(self.constant, g.width(), g.height()))
    }

    /// Labeled routing with the declared bound `C (w + h)`.
    pub fn route(&self, from: &LabeledConfig, to: &LabeledConfig) -> Result<Schedule> {
        if !from.same_graph(to) || !from.same_tokens(to) {
            return Err(RouteError::ConfigMismatch("configurations do not match".into()));
        }
        let bound = self.check_graph(from.graph())?;
        let steps = if from == to {
            Vec::new()
        } else {
            self.router.route_labeled(from.tokens(), to.tokens())?
        };
        let s = Schedule::from_steps(steps, bound);
        ensure_valid("convex", &s, from, to)?;
        Ok(s)
    }

    /// Colored routing with the declared bound `C (w + h)`.
    pub fn route_colored(&self, from: &ColorConfig, to: &ColorConfig) -> Result<Schedule> {
        if !from.same_graph(to) || from.black_count() != to.black_count() {
            return Err(RouteError::ConfigMismatch("configurations do not match".into()));
        }
        let bound = self.check_graph(from.graph())?;
        let bits = |c: &ColorConfig| -> Vec<bool> { c.tokens().iter().map(|t| t.is_black()).collect() };
        let steps = self.router.route_colored(&bits(from), &bits(to))?;
        let s = Schedule::from_steps(steps, bound);
        ensure_valid("convex", &s, from, to)?;
        Ok(s)
    }
}

fn connected(g: &LatticeGraph) -> Result<()> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(RouteError::Disconnected)
    }
}

/// Labeled routing on the graph cut out by a convex polygon.
pub fn route_convex(from: &LabeledConfig, to: &LabeledConfig) -> Result<Schedule> {
    connected(from.graph())?;
    ConvexRouter::new(from.graph())?.route(from, to)
}

/// Colored routing on the graph cut out by a convex polygon.
pub fn route_convex_colored(from: &ColorConfig, to: &ColorConfig) -> Result<Schedule> {
    connected(from.graph())?;
    ConvexRouter::new(from.graph())?.route_colored(from, to)
}
