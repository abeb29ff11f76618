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

//! Odd-even transposition routing on paths.

use std::sync::Arc;

use crate::error::{Result, RouteError};
use crate::lattice::{LatticeGraph, Pt};

use super::config::{Config, Token};
use super::schedule::{ensure_valid, Schedule, Step};

/// Sorts `keys` along `line` by odd-even transposition, swapping a pair only
/// when it is out of order. At most `line.len()` rounds; empty rounds are
/// dropped.
pub(crate) fn odd_even(line: &[Pt], keys: &mut [usize]) -> Vec<Step> {
    let n = line.len();
    let mut steps = Vec::new();
    let mut idle = 0;
    for round in 0..n {
        let mut step = Step::new();
        let mut i = round % 2;
        while i + 1 < n {
            if keys[i] > keys[i + 1] {
                keys.swap(i, i + 1);
                step.push(line[i], line[i + 1]);
            }
            i += 2;
        }
        if step.is_empty() {
            idle += 1;
            if idle >= 2 {
                break;
            }
        } else {
            idle = 0;
            steps.push(step);
        }
    }
    debug_assert!(keys.windows(2).all(|w| w[0] <= w[1]));
    steps
}

/// Routes the tokens on `line` (consecutive vertices adjacent) from `from`
/// to `to`, both listed along the line.
pub(crate) fn line_steps<T: Token>(line: &[Pt], from: &[T], to: &[T]) -> Result<Vec<Step>> {
    let mut keys = T::destinations(from, to)?;
    Ok(odd_even(line, &mut keys))
}

/// A line of vertices with its current and target tokens.
pub(crate) type Line<T> = (Vec<Pt>, Vec<T>, Vec<T>);

/// Routes vertex-disjoint lines simultaneously; the result has as many
/// steps as the longest line needs.
pub(crate) fn parallel_lines<T: Token>(lines: Vec<Line<T>>) -> Result<Vec<Step>> {
    let per_line = crate::par::map(lines, |(line, f, t)| line_steps(&line, &f, &t));
    let mut parts = Vec::with_capacity(per_line.len());
    for r in per_line {
        parts.push(Schedule::from_steps(r?, 0));
    }
    Ok(super::schedule::zip_parallel(parts).steps)
}

/// Routes on a graph that is a simple path. Length at most `n`.
pub fn route_path<T: Token>(from: &Config<T>, to: &Config<T>) -> Result<Schedule> {
    let g: &Arc<LatticeGraph> = from.graph();
    let order = g.path_order().ok_or(RouteError::NotAPath)?;
    let line: Vec<Pt> = order.iter().map(|&i| g.point(i)).collect();
    let f: Vec<T> = order.iter().map(|&i| from.at(i)).collect();
    if !from.same_graph(to) {
        return Err(RouteError::ConfigMismatch("configurations live on different graphs".into()));
    }
    let t: Vec<T> = order.iter().map(|&i| to.at(i)).collect();
    let s = Schedule::from_steps(line_steps(&line, &f, &t)?, g.len() as u64);
    ensure_valid("path", &s, from, to)?;
    Ok(s)
}
