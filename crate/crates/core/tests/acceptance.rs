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

//! Acceptance suite: one pass/fail line per criterion. Set `ACCEPTANCE_ONLY`
//! to a comma-separated list of criterion numbers to run a subset.

mod common;

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;
use std::time::Instant;

use gridroute::bench::{self, BenchOptions, Family};
use gridroute::bounds;
use gridroute::geometry::{lattice_points, Point, Polygon, Rational};
use gridroute::io;
use gridroute::lattice::{check_ramp, drop_rightmost, skin, trim_margins, LatticeGraph, Pt, RampGraph};
use gridroute::oracle;
use gridroute::routing::composite::{mirror_subgraphs, route_with_hair, HairParams, RampPiece};
use gridroute::routing::convex::{stretch_coloring, ConvexRouter};
use gridroute::routing::ramp::{make_monotonic, plan_columns, push, realize_columns, Direction};
use gridroute::routing::{
    apply, route_path, route_rect, route_tree, validate, Color, ColorConfig, LabeledConfig, Schedule,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

type Outcome = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

fn run_schedule<T: gridroute::routing::Token>(
    x: &gridroute::routing::Config<T>,
    s: &Schedule,
) -> gridroute::routing::Config<T> {
    s.steps.iter().fold(x.clone(), |c, st| apply(&c, st).expect("valid step"))
}

/// Independent monotonicity check: blacks closed upward in columns and
/// leftward in rows.
fn monotonic(x: &ColorConfig) -> bool {
    let g = x.graph();
    x.iter().all(|(p, c)| {
        !c.is_black()
            || [Pt::new(p.x, p.y + 1), Pt::new(p.x - 1, p.y)]
                .iter()
                .all(|&q| !g.contains(q) || x.get(q).unwrap().is_black())
    })
}

/// Independent row-major check: the first `t` vertices by (y descending,
/// x ascending) are black.
fn is_row_major(x: &ColorConfig) -> bool {
    let mut pts: Vec<Pt> = x.graph().points().to_vec();
    pts.sort_by_key(|p| (-p.y, p.x));
    let t = x.black_count();
    pts.iter().enumerate().all(|(i, &p)| x.get(p).unwrap().is_black() == (i < t))
}

fn ramp_corpus() -> Vec<(RampGraph, ColorConfig)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    (0..5000)
        .map(|_| {
            let (m, n) = (rng.gen_range(1..=40), rng.gen_range(1..=40));
            let g = LatticeGraph::cut(&bench::random_ramp(&mut rng, m, n));
            let r = check_ramp(&g).expect("generator yields ramps");
            let g = Arc::new(g);
            let density = rng.gen_range(0.0..1.0);
            let bits: Vec<Color> = (0..g.len()).map(|_| Color::from_bit(rng.gen_bool(density))).collect();
            (r, ColorConfig::new(g, bits).unwrap())
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let corpus = ramp_corpus();
    for (k, (r, x)) in corpus.iter().enumerate() {
        let mut y = x.clone();
        for dir in [Direction::Up, Direction::Left, Direction::Up, Direction::Left] {
            let s = push(r, &y, dir).map_err(|e| format!("case {k}: {e}"))?;
            y = run_schedule(&y, &s);
        }
        ensure!(monotonic(&y), "case {k}: not monotonic after four pushes\n{}", r.graph().dump());
    }
    Ok(format!("{} ramp configurations monotonic after up/left/up/left", corpus.len()))
}

fn criterion_2() -> Outcome {
    let corpus = ramp_corpus();
    let mut tight = 0;
    for (k, (r, x)) in corpus.iter().enumerate() {
        let s = make_monotonic(r, x).map_err(|e| format!("case {k}: {e}"))?;
        let y = run_schedule(x, &s);
        let plan = plan_columns(r, &y).map_err(|e| format!("case {k}: {e}"))?;
        let m = r.rows();
        for (j, &z) in plan.z.iter().enumerate() {
            ensure!(plan.m1 == 0 || z + plan.m1 <= m + 1, "case {k}: z[{j}] = {z} exceeds m - m1 + 1");
            if plan.m1 > 0 && z + plan.m1 == m + 1 {
                tight += 1;
            }
        }
        let s = realize_columns(r, &y).map_err(|e| format!("case {k}: {e}"))?;
        let mut y = run_schedule(&y, &s);
        let s = push(r, &y, Direction::Up).map_err(|e| format!("case {k}: {e}"))?;
        y = run_schedule(&y, &s);
        ensure!(is_row_major(&y), "case {k}: result is not row-major");
    }
    Ok(format!("{} cases reach RM(t); {tight} columns met the capacity exactly", corpus.len()))
}

fn criterion_3() -> Outcome {
    let shapes = convex_shapes(12);
    let mut labeled_runs = 0u64;
    for (size, group) in shapes.iter().enumerate().take(7) {
        for pts in group {
            let g = Arc::new(LatticeGraph::from_points(pts.iter().copied()));
            let from = LabeledConfig::identity(g.clone());
            let dist = oracle::labeled_distances(&from).map_err(|e| e.to_string())?;
            ensure!(dist.len() == (1..=size + 1).product::<usize>(), "oracle missed permutations");
            for (t, &d) in &dist {
                let to = LabeledConfig::new(g.clone(), t.clone()).unwrap();
                for (name, r) in labeled_routers(&from, &to) {
                    let s = r.map_err(|e| format!("{name} on {pts:?} -> {t:?}: {e}"))?;
                    ensure!(validate(&s, &from, &to).ok, "{name} invalid on {pts:?}");
                    ensure!(s.len() as u32 >= d, "{name} beat the oracle on {pts:?}");
                    labeled_runs += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut colored_runs = 0u64;
    let mut graphs = 0;
    for (size, group) in shapes.iter().enumerate() {
        let n = size + 1;
        for pts in group {
            graphs += 1;
            let g = Arc::new(LatticeGraph::from_points(pts.iter().copied()));
            // Exhaustive below six vertices, two sources with three
            // targets each above.
            let sources: Vec<ColorConfig> = if n <= 5 {
                (0..1u32 << n)
                    .map(|m| ColorConfig::new(g.clone(), (0..n).map(|i| Color::from_bit(m >> i & 1 == 1)).collect()).unwrap())
                    .collect()
            } else {
                (0..2)
                    .map(|_| {
                        let k = rng.gen_range(0..=n);
                        random_colors(&mut rng, &g, k)
                    })
                    .collect()
            };
            for from in sources {
                let dist = oracle::colored_distances(&from).map_err(|e| e.to_string())?;
                let mut targets: Vec<(&Vec<bool>, &u32)> = dist.iter().collect();
                targets.sort();
                if n > 5 {
                    targets = (0..3).map(|_| *targets.choose(&mut rng).unwrap()).collect();
                }
                for (t, &d) in targets {
                    let to = ColorConfig::new(g.clone(), t.iter().map(|&b| Color::from_bit(b)).collect()).unwrap();
                    for (name, r) in colored_routers(&from, &to) {
                        let s = r.map_err(|e| format!("{name} on {pts:?}: {e}"))?;
                        ensure!(validate(&s, &from, &to).ok, "{name} invalid on {pts:?}");
                        ensure!(s.len() as u32 >= d, "{name} beat the oracle on {pts:?}");
                        colored_runs += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{labeled_runs} labeled runs on all convex graphs with <= 7 vertices; {colored_runs} colored runs on {graphs} graphs with <= 12 vertices; no invalid schedule"
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let (mut checked, mut trimmed) = (0, 0);
    for _ in 0..300 {
        let n = rng.gen_range(1..60);
        let g = Arc::new(LatticeGraph::from_points((0..n).map(|x| Pt::new(x, 0))));
        let (a, b) = shuffled(&mut rng, &g);
        let s = route_path(&a, &b).map_err(|e| e.to_string())?;
        ensure!(s.len() <= n as usize, "path: {} > {n}", s.len());
        checked += 1;
    }
    for k in 0..300 {
        let n = rng.gen_range(1..120);
        let g = Arc::new(random_blob(&mut rng, n, k % 2 == 0));
        let (a, b) = shuffled(&mut rng, &g);
        let s = route_tree(&a, &b).map_err(|e| e.to_string())?;
        ensure!(s.len() <= 3 * n, "tree: {} > 3n = {}", s.len(), 3 * n);
        checked += 1;
    }
    for _ in 0..200 {
        let (p, q) = (rng.gen_range(1..16), rng.gen_range(1..16));
        let g = Arc::new(LatticeGraph::from_points((0..p).flat_map(|x| (0..q).map(move |y| Pt::new(x, y)))));
        let (a, b) = shuffled(&mut rng, &g);
        let s = route_rect(&a, &b).map_err(|e| e.to_string())?;
        let (lo, hi) = (p.min(q) as usize, p.max(q) as usize);
        ensure!(s.len() <= 2 * lo + hi, "rect {p}x{q}: {} > 2p + q", s.len());
        checked += 1;
    }
    for _ in 0..100 {
        // A rectangle core with a hair strand hanging off its right side.
        let (p, q) = (rng.gen_range(2..10), rng.gen_range(2..10));
        let core: Vec<Pt> = (0..p).flat_map(|x| (0..q).map(move |y| Pt::new(x, y))).collect();
        let y = rng.gen_range(0..q);
        let len = rng.gen_range(0..=p + q);
        let hair: Vec<Pt> = (0..len).map(|i| Pt::new(p + i, y)).collect();
        let params = HairParams {
            core: core.clone(),
            hair: hair.clone(),
            skin: vec![Pt::new(p - 1, y)],
            c1: 2,
            c2: 1,
            c3: bounds::RAMP_LABELED,
        };
        let g = Arc::new(LatticeGraph::from_points(core.iter().chain(&hair).copied()));
        let (a, b) = shuffled(&mut rng, &g);
        let s = route_with_hair(&params, Box::new(RampPiece::new(core).unwrap()), &a, &b)
            .map_err(|e| e.to_string())?;
        let c = bounds::hair(2, 1, bounds::RAMP_LABELED) * (g.width() + g.height()) as u64;
        ensure!(s.len() as u64 <= c, "hair: {} > {c}", s.len());
        checked += 1;
    }
    for _ in 0..200 {
        let size = rng.gen_range(4..200);
        let poly = bench::generate(Family::Convex, &mut rng, size);
        let g = LatticeGraph::cut(&poly);
        let s = (g.width() + g.height()) as usize;
        let sk = skin(&g).map_err(|e| e.to_string())?;
        ensure!(sk.len() <= 2 * s, "skin: {} > 2(w + h) = {}", sk.len(), 2 * s);
        if g.len() > 4 * s {
            let t = trim_margins(&g).map_err(|e| e.to_string())?;
            ensure!(t.removed.len() <= 4 * s, "trim removed {} > 4(w + h)", t.removed.len());
            trimmed += 1;
        }
        if let Ok(r) = ConvexRouter::new(&g) {
            if let Some(a) = r.artifacts {
                ensure!(a.hair.len() <= 6 * s, "pipeline hair {} > 6(w + h)", a.hair.len());
                ensure!(a.skin.len() <= 4 * s, "pipeline skin {} > 4(w + h)", a.skin.len());
            }
        }
        checked += 1;
    }
    Ok(format!(
        "{checked} instances within path, tree, rectangle, hair, skin and pipeline bounds; {trimmed} trims"
    ))
}

/// Ramp reflected into `x <= 0`, and a ramp starting at `x = 1`.
fn two_ramp_union(rng: &mut impl Rng) -> (LatticeGraph, LatticeGraph) {
    let h = rng.gen_range(42..=91);
    let (wl, wr) = (rng.gen_range(42..=90), rng.gen_range(42..=90));
    let left = LatticeGraph::cut(&bench::random_ramp(rng, h, wl));
    let right = LatticeGraph::cut(&bench::random_ramp(rng, h, wr));
    (
        LatticeGraph::from_points(left.points().iter().map(|p| Pt::new(-p.x, p.y))),
        LatticeGraph::from_points(right.points().iter().map(|p| Pt::new(p.x + 1, p.y))),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut worst = f64::INFINITY;
    for k in 0..300 {
        let (l, r) = two_ramp_union(&mut rng);
        ensure!(l.width() >= 41 && r.width() >= 41 && l.height() >= 41, "case {k}: too small");
        let pair = mirror_subgraphs(&l, &r, Rational::new(1, 2));
        // Independent count of left vertices mirrored into the right half.
        let count = l.points().iter().filter(|p| r.contains(Pt::new(1 - p.x, p.y))).count();
        ensure!(pair.size == count, "case {k}: mirror size {} but {count} mirrored vertices", pair.size);
        let need = l.len().min(r.len()).div_ceil(20);
        ensure!(count >= need, "case {k}: mirror {count} < {need}");
        worst = worst.min(count as f64 / l.len().min(r.len()) as f64);
    }
    for a in 41i128..=400 {
        for b in 41i128..=400 {
            let lhs = Rational::new(a * b, 4) - Rational::from_integer(4 * (a + b)) + Rational::from_integer(1);
            ensure!(lhs >= Rational::new((a + 1) * (b + 1), 20), "inequality fails at a={a}, b={b}");
        }
    }
    Ok(format!("300 unions, smallest mirror fraction {worst:.3} >= 0.05; inequality holds on [41, 400]^2"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let (mut meaningful, mut pick) = (0, 0);
    for k in 0..200 {
        let den = if k % 2 == 0 { 1 } else { rng.gen_range(2..5) };
        let r = |rng: &mut ChaCha8Rng, lo: i64, hi: i64| Rational::new(rng.gen_range(lo * den..=hi * den) as i128, den as i128);
        let (x0, y0) = (r(&mut rng, -20, 20), r(&mut rng, -20, 20));
        let (a, b) = (r(&mut rng, 1, 200), r(&mut rng, 1, 200));
        let (sx, sy) = (if rng.gen_bool(0.5) { a } else { -a }, if rng.gen_bool(0.5) { b } else { -b });
        let tri = Polygon::from_points(&[
            Point::new(x0, y0),
            Point::new(x0 + sx, y0),
            Point::new(x0, y0 + sy),
        ])
        .map_err(|e| e.to_string())?;
        let bound = gridroute::geometry::triangle_point_bound(&tri).map_err(|e| e.to_string())?;
        let all = lattice_points(&tri);
        let interior = all.iter().filter(|&&p| tri.contains_strictly(&Point::from(p))).count() as i64;
        if bound >= 1 {
            meaningful += 1;
            ensure!(interior >= bound, "case {k}: {interior} interior points < bound {bound}");
        }
        if den == 1 {
            let boundary = all.len() as i64 - interior;
            let twice_area = tri.double_area();
            ensure!(
                twice_area == Rational::from_integer((2 * interior + boundary - 2) as i128),
                "case {k}: Pick's formula fails"
            );
            pick += 1;
        }
    }
    Ok(format!("{meaningful} triangles with a positive bound all satisfy it; Pick exact on {pick}"))
}

/// BFS distances in `g` from `src`, up to `limit`.
fn local_distances(g: &LatticeGraph, src: Pt, limit: u32) -> HashMap<Pt, u32> {
    let mut d = HashMap::from([(src, 0)]);
    let mut q = VecDeque::from([src]);
    while let Some(p) = q.pop_front() {
        let dp = d[&p];
        if dp == limit {
            continue;
        }
        for n in p.neighbors() {
            if g.contains(n) && !d.contains_key(&n) {
                d.insert(n, dp + 1);
                q.push_back(n);
            }
        }
    }
    d
}

struct ConvexCase {
    id: u32,
    graph: Arc<LatticeGraph>,
    router: ConvexRouter,
}

fn convex_corpus() -> Vec<ConvexCase> {
    (0..200)
        .map(|k| {
            let mut rng = bench::instance_rng(8, Family::Convex, 0, k);
            let size = rng.gen_range(60..=300);
            let g = Arc::new(LatticeGraph::cut(&bench::generate(Family::Convex, &mut rng, size)));
            let router = ConvexRouter::new(&g).unwrap_or_else(|e| panic!("instance {k}: {e}"));
            ConvexCase { id: k, graph: g, router }
        })
        .collect()
}

fn criterion_7(corpus: &[ConvexCase]) -> Outcome {
    let (mut max_stretch, mut max_colors) = (0, 0);
    for case in corpus {
        let a = case.router.artifacts.as_ref().ok_or(format!("instance {} fell back to trees", case.id))?;
        let k = LatticeGraph::from_points(a.core.iter().copied());
        for (i, j) in a.p3.edges() {
            let (u, v) = (a.psi.get(a.p3.point(i)).unwrap(), a.psi.get(a.p3.point(j)).unwrap());
            let d = local_distances(&k, u, 3).get(&v).copied();
            ensure!(d.is_some(), "instance {}: edge {u}-{v} stretched beyond 3", case.id);
            max_stretch = max_stretch.max(d.unwrap());
        }
        for (y, row) in a.p3.rows() {
            let p1 = a.p1.rows().into_iter().find(|(z, _)| *z == y).map_or(0, |(_, r)| r.len());
            ensure!(row.len() <= p1, "instance {}: row {y} of P3 longer than P1", case.id);
        }
        let c = stretch_coloring(Arc::new(k.clone()), 3);
        ensure!(c.color_count() <= 85, "instance {}: {} colors", case.id, c.color_count());
        max_colors = max_colors.max(c.color_count());
        for &p in k.points().iter().step_by(97) {
            for (q, d) in local_distances(&k, p, 6) {
                ensure!(d == 0 || c.vertex_color(p) != c.vertex_color(q), "instance {}: close same colors", case.id);
            }
        }
        ensure!(drop_rightmost(&a.p2).points().iter().all(|&p| k.contains(p)), "instance {}: P4 outside core", case.id);
    }
    Ok(format!("{} pipelines; max edge stretch {max_stretch} <= 3; max colors {max_colors} <= 85", corpus.len()))
}

fn criterion_8(corpus: &[ConvexCase]) -> Outcome {
    let mut worst = 0.0f64;
    let mut declared = 0u64;
    let mut max_expansion = 0;
    for case in corpus {
        let g = &case.graph;
        let mut rng = ChaCha8Rng::seed_from_u64(800 + case.id as u64);
        let (a, b) = shuffled(&mut rng, g);
        let s = case.router.route(&a, &b).map_err(|e| format!("instance {}: {e}", case.id))?;
        ensure!(validate(&s, &a, &b).ok, "instance {}: invalid schedule", case.id);
        let sz = (g.width() + g.height()) as u64;
        ensure!(s.len() as u64 <= s.declared_bound, "instance {}: over the declared bound", case.id);
        worst = worst.max(s.len() as f64 / sz as f64);
        declared = declared.max(s.declared_bound / sz);
        max_expansion = max_expansion.max(case.router.max_expansion().unwrap_or(0));
    }
    Ok(format!(
        "{} routes valid; measured max length/(w+h) = {worst:.1}, declared constant {declared}; max simulated step expansion {max_expansion} <= {}",
        corpus.len(),
        bounds::simulation(3)
    ))
}

fn criterion_9() -> Outcome {
    let mut rng = bench::instance_rng(9, Family::Convex, 90, 0);
    let g = Arc::new(LatticeGraph::cut(&bench::generate(Family::Convex, &mut rng, 90)));
    let (a, b) = shuffled(&mut rng, &g);
    let once = || -> std::result::Result<String, String> {
        let s = gridroute::routing::route_convex(&a, &b).map_err(|e| e.to_string())?;
        Ok(io::schedule_jsonl(&s, &g))
    };
    ensure!(once()? == once()?, "schedules differ between runs");
    let opts = BenchOptions {
        families: vec![Family::Ramps, Family::BurgerBuns, Family::Convex],
        sizes: vec![20, 60],
        seed: 7,
        samples: 2,
        fixed_time: true,
    };
    let csv = || bench::run_bench(&opts).map(|r| bench::to_csv(&r)).map_err(|e| e.to_string());
    ensure!(csv()? == csv()?, "bench CSVs differ between runs");
    Ok("schedules and bench CSVs byte-identical across runs".into())
}

fn main() {
    let only: Option<Vec<u32>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let want = |k: u32| only.as_ref().is_none_or(|o| o.contains(&k));
    let mut failed = 0;
    let mut report = |k: u32, name: &str, start: Instant, r: Outcome| {
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("criterion {k} ({name}): PASS [{secs:.1}s] {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {k} ({name}): FAIL [{secs:.1}s] {msg}");
            }
        }
    };
    let simple: [(u32, &str, fn() -> Outcome); 6] = [
        (1, "monotonicity", criterion_1),
        (2, "column preparation", criterion_2),
        (3, "oracle floor", criterion_3),
        (4, "bound ceilings", criterion_4),
        (5, "intersection magnitude", criterion_5),
        (6, "triangle trimming", criterion_6),
    ];
    for (k, name, f) in simple {
        if want(k) {
            let t = Instant::now();
            report(k, name, t, f());
        }
    }
    if want(7) || want(8) {
        let t = Instant::now();
        let corpus = convex_corpus();
        if want(7) {
            report(7, "psi stretch", t, criterion_7(&corpus));
        }
        if want(8) {
            let t = Instant::now();
            report(8, "end to end", t, criterion_8(&corpus));
        }
    }
    if want(9) {
        let t = Instant::now();
        report(9, "determinism", t, criterion_9());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
