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

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use gridroute::bench::{self, BenchOptions, Family};
use gridroute::geometry::{find_spine, hull, Point, SpineOrientation};
use gridroute::io;
use gridroute::lattice::{check_ramp, LatticeGraph};
use gridroute::oracle;
use gridroute::routing::convex::ConvexRouter;
use gridroute::routing::{
    route_burger_bun, route_burger_bun_colored, route_convex, route_convex_colored, route_ramp_labeled,
    route_ramp_unlabeled, route_tree, validate, Schedule,
};
use gridroute::{Result, RouteError};

#[derive(Parser)]
#[command(name = "gridroute", version, about = "Token routing on convex pieces of the square grid")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TokenMode {
    Labeled,
    Colored,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouterChoice {
    Auto,
    Ramp,
    Burgerbun,
    Tree,
    Convex,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleMode {
    Rt,
    Urt,
    Distance,
}

#[derive(Subcommand)]
enum Command {
    /// Print the lattice graph cut out by a polygon.
    Cut { polygon: PathBuf },
    /// Route one configuration to another and write the schedule.
    Route {
        polygon: PathBuf,
        from: PathBuf,
        to: PathBuf,
        #[arg(long, value_enum, default_value = "labeled")]
        mode: TokenMode,
        #[arg(long, value_enum, default_value = "auto")]
        router: RouterChoice,
        #[arg(long)]
        out: PathBuf,
        /// Also write the convex pipeline's intermediate graphs as JSON.
        #[arg(long)]
        artifacts: Option<PathBuf>,
    },
    /// Replay a schedule and check it against its declared bound.
    Verify {
        polygon: PathBuf,
        from: PathBuf,
        to: PathBuf,
        schedule: PathBuf,
        #[arg(long, value_enum, default_value = "labeled")]
        mode: TokenMode,
    },
    /// Exact routing numbers and distances on tiny graphs.
    Oracle {
        polygon: PathBuf,
        #[arg(long, value_enum)]
        mode: OracleMode,
        #[arg(long, requires = "to")]
        from: Option<PathBuf>,
        #[arg(long, requires = "from")]
        to: Option<PathBuf>,
        /// Token kind for `--mode distance`.
        #[arg(long, value_enum, default_value = "labeled")]
        tokens: TokenMode,
    },
    /// Route random permutations on seeded polygon families.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "ramps,burgerbuns,convex")]
        families: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "20,40,80")]
        sizes: Vec<u32>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        samples: u32,
        #[arg(long)]
        csv: PathBuf,
        /// Write zero wall times so that reruns give identical files.
        #[arg(long)]
        fixed_time: bool,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| RouteError::Parse(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Arc<LatticeGraph>> {
    Ok(Arc::new(LatticeGraph::cut(&io::parse_polygon(&read(path)?)?)))
}

fn has_spine(g: &LatticeGraph) -> bool {
    let pts: Vec<Point> = g.points().iter().map(|&p| Point::from(p)).collect();
    pts.len() >= 3 && find_spine(&hull(&pts)).orientation != SpineOrientation::None
}

fn pick(choice: RouterChoice, g: &LatticeGraph) -> RouterChoice {
    match choice {
        RouterChoice::Auto if check_ramp(g).is_ok() => RouterChoice::Ramp,
        RouterChoice::Auto if has_spine(g) => RouterChoice::Burgerbun,
        RouterChoice::Auto => RouterChoice::Convex,
        c => c,
    }
}

fn router_name(c: RouterChoice) -> &'static str {
    match c {
        RouterChoice::Auto => "auto",
        RouterChoice::Ramp => "ramp",
        RouterChoice::Burgerbun => "burgerbun",
        RouterChoice::Tree => "tree",
        RouterChoice::Convex => "convex",
    }
}

fn cmd_cut(polygon: &Path) -> Result<ExitCode> {
    let g = load_graph(polygon)?;
    print!("{}", g.dump());
    println!("vertices: {}", g.len());
    println!("width: {}", g.width());
    println!("height: {}", g.height());
    println!("connected: {}", g.is_connected());
    Ok(ExitCode::SUCCESS)
}

fn cmd_route(
    polygon: &Path,
    from: &Path,
    to: &Path,
    mode: TokenMode,
    choice: RouterChoice,
    out: &Path,
    artifacts: Option<&Path>,
) -> Result<ExitCode> {
    let g = load_graph(polygon)?;
    let choice = pick(choice, &g);
    let (schedule, ok): (Schedule, bool) = match mode {
        TokenMode::Labeled => {
            let (a, b) = (io::parse_labeled(&read(from)?, g.clone())?, io::parse_labeled(&read(to)?, g.clone())?);
            let s = match choice {
                RouterChoice::Ramp => route_ramp_labeled(&a, &b)?,
                RouterChoice::Burgerbun => route_burger_bun(&a, &b)?,
                RouterChoice::Tree => route_tree(&a, &b)?,
                _ => route_convex(&a, &b)?,
            };
            let ok = validate(&s, &a, &b).ok;
            (s, ok)
        }
        TokenMode::Colored => {
            let (a, b) = (io::parse_colored(&read(from)?, g.clone())?, io::parse_colored(&read(to)?, g.clone())?);
            let s = match choice {
                RouterChoice::Ramp => route_ramp_unlabeled(&a, &b)?,
                RouterChoice::Burgerbun => route_burger_bun_colored(&a, &b)?,
                RouterChoice::Tree => route_tree(&a, &b)?,
                _ => route_convex_colored(&a, &b)?,
            };
            let ok = validate(&s, &a, &b).ok;
            (s, ok)
        }
    };
    fs::write(out, io::schedule_jsonl(&schedule, &g))?;
    if let Some(path) = artifacts {
        match ConvexRouter::new(&g)?.artifacts {
            Some(a) => fs::write(path, a.to_json())?,
            None => eprintln!("note: graph is routed by trees; no pipeline artifacts"),
        }
    }
    println!("router: {}", router_name(choice));
    println!("length: {}", schedule.len());
    println!("declared_bound: {}", schedule.declared_bound);
    println!("valid: {ok}");
    Ok(if ok && schedule.len() as u64 <= schedule.declared_bound {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn cmd_verify(polygon: &Path, from: &Path, to: &Path, schedule: &Path, mode: TokenMode) -> Result<ExitCode> {
    let g = load_graph(polygon)?;
    let (header, s) = io::parse_schedule(&read(schedule)?)?;
    let v = match mode {
        TokenMode::Labeled => validate(
            &s,
            &io::parse_labeled(&read(from)?, g.clone())?,
            &io::parse_labeled(&read(to)?, g.clone())?,
        ),
        TokenMode::Colored => validate(
            &s,
            &io::parse_colored(&read(from)?, g.clone())?,
            &io::parse_colored(&read(to)?, g.clone())?,
        ),
    };
    if !v.ok {
        match v.failed_step {
            Some(i) => eprintln!("invalid: step {i}: {}", v.message),
            None => eprintln!("invalid: {}", v.message),
        }
        return Ok(ExitCode::FAILURE);
    }
    if s.len() as u64 > header.declared_bound {
        eprintln!("invalid: length {} exceeds declared bound {}", s.len(), header.declared_bound);
        return Ok(ExitCode::FAILURE);
    }
    println!("valid: {} steps, declared bound {}", s.len(), header.declared_bound);
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(
    polygon: &Path,
    mode: OracleMode,
    from: Option<&Path>,
    to: Option<&Path>,
    tokens: TokenMode,
) -> Result<ExitCode> {
    let g = load_graph(polygon)?;
    let value = match mode {
        OracleMode::Rt => oracle::exact_rt(&g)?,
        OracleMode::Urt => oracle::exact_urt(&g)?,
        OracleMode::Distance => {
            let (Some(f), Some(t)) = (from, to) else {
                return Err(RouteError::Parse("--mode distance needs --from and --to".into()));
            };
            match tokens {
                TokenMode::Labeled => oracle::exact_distance(
                    &io::parse_labeled(&read(f)?, g.clone())?,
                    &io::parse_labeled(&read(t)?, g.clone())?,
                )?,
                TokenMode::Colored => oracle::exact_distance_colored(
                    &io::parse_colored(&read(f)?, g.clone())?,
                    &io::parse_colored(&read(t)?, g.clone())?,
                )?,
            }
        }
    };
    println!("{value}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(
    families: &[String],
    sizes: Vec<u32>,
    seed: u64,
    samples: u32,
    csv: &Path,
    fixed_time: bool,
) -> Result<ExitCode> {
    let opts = BenchOptions {
        families: families.iter().map(|f| Family::parse(f.trim())).collect::<Result<_>>()?,
        sizes,
        seed,
        samples,
        fixed_time,
    };
    let records = bench::run_bench(&opts)?;
    fs::write(csv, bench::to_csv(&records))?;
    print!("{}", bench::summary(&records));
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    bench::configure_threads_from_env()?;
    match cli.command {
        Command::Cut { polygon } => cmd_cut(&polygon),
        Command::Route {
            polygon,
            from,
            to,
            mode,
            router,
            out,
            artifacts,
        } => cmd_route(&polygon, &from, &to, mode, router, &out, artifacts.as_deref()),
        Command::Verify {
            polygon,
            from,
            to,
            schedule,
            mode,
        } => cmd_verify(&polygon, &from, &to, &schedule, mode),
        Command::Oracle {
            polygon,
            mode,
            from,
            to,
            tokens,
        } => cmd_oracle(&polygon, mode, from.as_deref(), to.as_deref(), tokens),
        Command::Bench {
            families,
            sizes,
            seed,
            samples,
            csv,
            fixed_time,
        } => cmd_bench(&families, sizes, seed, samples, &csv, fixed_time),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
