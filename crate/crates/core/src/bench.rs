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

//! Seeded polygon families and the benchmark runner behind `gridroute bench`.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, RouteError};
use crate::geometry::{hull, Point, Polygon};
use crate::lattice::{check_ramp, LatticeGraph};
use crate::par;
use crate::routing::convex::ConvexRouter;
use crate::routing::{route_burger_bun, route_ramp_labeled, LabeledConfig, Schedule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Ramps,
    BurgerBuns,
    Convex,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Ramps => "ramps",
            Family::BurgerBuns => "burgerbuns",
            Family::Convex => "convex",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ramps" => Ok(Family::Ramps),
            "burgerbuns" => Ok(Family::BurgerBuns),
            "convex" => Ok(Family::Convex),
            _ => Err(RouteError::Parse(format!("unknown family {s:?}"))),
        }
    }

    fn tag(self) -> u64 {
        match self {
            Family::Ramps => 1,
            Family::BurgerBuns => 2,
            Family::Convex => 3,
        }
    }
}

/// Environment variable capping bench parallelism.
pub const THREADS_ENV: &str = "GRID_ROUTER_THREADS";

/// Applies `GRID_ROUTER_THREADS` if it holds a positive integer.
pub fn configure_threads_from_env() -> Result<()> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                par::set_threads(n);
                Ok(())
            }
            _ => Err(RouteError::Parse(format!("{THREADS_ENV}={v:?} is not a positive integer"))),
        },
        Err(_) => Ok(()),
    }
}

/// Deterministic generator for one instance.
pub fn instance_rng(seed: u64, family: Family, size: u32, sample: u32) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(family.tag() << 48 | (size as u64) << 24 | sample as u64);
    r
}

fn int_hull(points: &[(i64, i64)]) -> Polygon {
    let pts: Vec<Point> = points.iter().map(|&(x, y)| Point::int(x, y)).collect();
    hull(&pts)
}

/// Convex hull of `k` random points in `[0, w] x [0, h]`, redrawn until the
/// cut graph is connected and spans the full box.
pub fn random_convex(rng: &mut impl Rng, w: u32, h: u32) -> Polygon {
    let (w, h) = (w as i64, h as i64);
    loop {
        let k = rng.gen_range(3..=10);
        let mut pts: Vec<(i64, i64)> = (0..k).map(|_| (rng.gen_range(0..=w), rng.gen_range(0..=h))).collect();
        // Pin one point to each side so the box is spanned.
        pts.push((0, rng.gen_range(0..=h)));
        pts.push((w, rng.gen_range(0..=h)));
        pts.push((rng.gen_range(0..=w), 0));
        pts.push((rng.gen_range(0..=w), h));
        let p = int_hull(&pts);
        if p.is_degenerate() {
            continue;
        }
        if LatticeGraph::cut(&p).is_connected() {
            return p;
        }
    }
}

/// A ramp with `rows` rows and `cols` columns: the hull of the origin
/// corner, the two axis ends and random points below the anti-diagonal
/// band, redrawn until it passes the ramp check.
pub fn random_ramp(rng: &mut impl Rng, rows: u32, cols: u32) -> Polygon {
    let (w, h) = (cols as i64 - 1, rows as i64 - 1);
    loop {
        let mut pts = vec![(0, 0), (w, 0), (0, h)];
        for _ in 0..rng.gen_range(0..6) {
            pts.push((rng.gen_range(0..=w), rng.gen_range(0..=h)));
        }
        let p = int_hull(&pts);
        if check_ramp(&LatticeGraph::cut(&p)).is_ok() {
            return p;
        }
    }
}

/// A convex polygon whose top and bottom vertices lie on `x = spine`, with
/// all other vertices strictly between in height.
pub fn random_burger_bun(rng: &mut impl Rng, w: u32, h: u32) -> Polygon {
    let (w, h) = (w as i64, h as i64);
    loop {
        let s = rng.gen_range(0..=w);
        let mut pts = vec![(s, 0), (s, h)];
        pts.push((0, rng.gen_range(1..h.max(2))));
        pts.push((w, rng.gen_range(1..h.max(2))));
        for _ in 0..rng.gen_range(0..6) {
            pts.push((rng.gen_range(0..=w), rng.gen_range(1..h.max(2))));
        }
        let p = int_hull(&pts);
        if !p.is_degenerate() && LatticeGraph::cut(&p).is_connected() {
            return p;
        }
    }
}

/// Splits `size = w + h` into a box with both sides at least one.
fn split(rng: &mut impl Rng, size: u32) -> (u32, u32) {
    let size = size.max(2);
    let w = rng.gen_range(size / 3..=size - size / 3).clamp(1, size - 1);
    (w, size - w)
}

pub fn generate(family: Family, rng: &mut impl Rng, size: u32) -> Polygon {
    let (w, h) = split(rng, size);
    match family {
        Family::Ramps => random_ramp(rng, h + 1, w + 1),
        Family::BurgerBuns => random_burger_bun(rng, w, h),
        Family::Convex => random_convex(rng, w, h),
    }
}

/// Random permutation pair: identity to a seeded shuffle.
pub fn random_permutation(rng: &mut impl Rng, g: Arc<LatticeGraph>) -> (LabeledConfig, LabeledConfig) {
    let from = LabeledConfig::identity(g.clone());
    let mut t = from.tokens().to_vec();
    t.shuffle(rng);
    (from, LabeledConfig::new(g, t).expect("permutation of the identity"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub polygon_id: String,
    pub w: u32,
    pub h: u32,
    pub vertices: usize,
    pub router: String,
    pub length: usize,
    pub declared_bound: u64,
    pub ratio: f64,
    pub wall_time: f64,
}

pub const CSV_HEADER: &str = "polygon_id,w,h,vertices,router,length,declared_bound,ratio,wall_time_s";

impl BenchRecord {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.6},{:.6}",
            self.polygon_id,
            self.w,
            self.h,
            self.vertices,
            self.router,
            self.length,
            self.declared_bound,
            self.ratio,
            self.wall_time
        )
    }

    /// Declared constant, `declared_bound / (w + h)`.
    pub fn declared_constant(&self) -> f64 {
        self.declared_bound as f64 / (self.w + self.h) as f64
    }
}

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub families: Vec<Family>,
    pub sizes: Vec<u32>,
    pub seed: u64,
    pub samples: u32,
    /// Record zero wall time so that repeated runs give identical CSVs.
    pub fixed_time: bool,
}

/// Routes one instance and reports it.
pub fn run_instance(family: Family, seed: u64, size: u32, sample: u32, fixed_time: bool) -> Result<BenchRecord> {
    let mut rng = instance_rng(seed, family, size, sample);
    let poly = generate(family, &mut rng, size);
    let g = Arc::new(LatticeGraph::cut(&poly));
    let (from, to) = random_permutation(&mut rng, g.clone());
    let start = Instant::now();
    let (router, schedule): (&str, Schedule) = match family {
        Family::Ramps => ("ramp", route_ramp_labeled(&from, &to)?),
        Family::BurgerBuns => ("burgerbun", route_burger_bun(&from, &to)?),
        Family::Convex => {
            let name = if ConvexRouter::new(&g)?.artifacts.is_some() { "convex" } else { "tree" };
            (name, crate::routing::route_convex(&from, &to)?)
        }
    };
    let wall = start.elapsed().as_secs_f64();
    let (w, h) = (g.width(), g.height());
    Ok(BenchRecord {
        polygon_id: format!("{}-{size}-{sample}", family.name()),
        w,
        h,
        vertices: g.len(),
        router: router.into(),
        length: schedule.len(),
        declared_bound: schedule.declared_bound,
        ratio: schedule.len() as f64 / (w + h).max(1) as f64,
        wall_time: if fixed_time { 0.0 } else { wall },
    })
}

/// Runs every (family, size, sample) instance; the output order does not
/// depend on scheduling.
pub fn run_bench(opts: &BenchOptions) -> Result<Vec<BenchRecord>> {
    let jobs: Vec<(Family, u32, u32)> = opts
        .families
        .iter()
        .flat_map(|&f| opts.sizes.iter().flat_map(move |&s| (0..opts.samples).map(move |k| (f, s, k))))
        .collect();
    par::map(jobs, |(f, s, k)| run_instance(f, opts.seed, s, k, opts.fixed_time))
        .into_iter()
        .collect()
}

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

/// One line per family: instance count, max observed ratio and the largest
/// declared constant.
pub fn summary(records: &[BenchRecord]) -> String {
    let mut out = String::new();
    let mut fams: Vec<&str> = Vec::new();
    for r in records {
        let f = r.polygon_id.split('-').next().unwrap_or("");
        if !fams.contains(&f) {
            fams.push(f);
        }
    }
    for f in fams {
        let rs: Vec<&BenchRecord> = records.iter().filter(|r| r.polygon_id.starts_with(f)).collect();
        let max_ratio = rs.iter().map(|r| r.ratio).fold(0.0, f64::max);
        let declared = rs.iter().map(|r| r.declared_constant()).fold(0.0, f64::max);
        let within = rs.iter().all(|r| r.length as u64 <= r.declared_bound);
        let _ = writeln!(
            out,
            "{f}: instances={} max_ratio={max_ratio:.3} declared={declared:.0} within_bound={within}",
            rs.len()
        );
    }
    out
}
