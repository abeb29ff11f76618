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

//! Routing steps and schedules.

use std::collections::HashSet;

use crate::error::{Result, RouteError};
use crate::lattice::{IsoTransform, LatticeGraph, Pt};

use super::config::{Config, Token};

/// A set of vertex-disjoint edges whose tokens swap simultaneously.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Step(pub Vec<(Pt, Pt)>);

impl Step {
    pub fn new() -> Self {
        Step(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn swaps(&self) -> &[(Pt, Pt)] {
        &self.0
    }

    pub fn push(&mut self, a: Pt, b: Pt) {
        self.0.push((a, b));
    }

    /// Checks that every pair is an edge of `g` and pairs are disjoint.
    pub fn check(&self, g: &LatticeGraph) -> std::result::Result<(), String> {
        let mut used = HashSet::with_capacity(self.0.len() * 2);
        for &(a, b) in &self.0 {
            if !g.contains(a) || !g.contains(b) {
                return Err(format!("swap {a}-{b} leaves the graph"));
            }
            if !a.is_adjacent(b) {
                return Err(format!("{a} and {b} are not adjacent"));
            }
            if !used.insert(a) || !used.insert(b) {
                return Err(format!("swap {a}-{b} overlaps another swap"));
            }
        }
        Ok(())
    }

    /// Sorts swaps into a canonical order.
    pub fn normalize(&mut self) {
        for s in self.0.iter_mut() {
            if s.1 < s.0 {
                *s = (s.1, s.0);
            }
        }
        self.0.sort_unstable();
    }
}

/// An ordered list of steps together with the length bound certified by the
/// router that produced it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Schedule {
    pub steps: Vec<Step>,
    pub declared_bound: u64,
}

impl Schedule {
    pub fn empty(declared_bound: u64) -> Self {
        Schedule {
            steps: Vec::new(),
            declared_bound,
        }
    }

    pub fn from_steps(steps: Vec<Step>, declared_bound: u64) -> Self {
        Schedule {
            steps,
            declared_bound,
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn swap_count(&self) -> usize {
        self.steps.iter().map(Step::len).sum()
    }

    /// Steps in reverse order; every step is its own inverse.
    pub fn reverse(mut self) -> Self {
        self.steps.reverse();
        self
    }

    /// Appends `other`'s steps. The declared bound becomes the sum.
    pub fn then(mut self, other: Schedule) -> Self {
        self.steps.extend(other.steps);
        self.declared_bound += other.declared_bound;
        self
    }

    /// Drops empty steps.
    pub fn compact(mut self) -> Self {
        self.steps.retain(|s| !s.is_empty());
        self
    }

    pub fn with_bound(mut self, bound: u64) -> Self {
        self.declared_bound = bound;
        self
    }

    /// Maps every vertex through `t`.
    pub fn conjugate(&self, t: &IsoTransform) -> Schedule {
        Schedule {
            steps: self
                .steps
                .iter()
                .map(|s| Step(s.0.iter().map(|&(a, b)| (t.apply(a), t.apply(b))).collect()))
                .collect(),
            declared_bound: self.declared_bound,
        }
    }

    pub fn normalize(&mut self) {
        for s in &mut self.steps {
            s.normalize();
        }
    }
}

/// Zips schedules step by step, assuming they act on disjoint vertex sets.
/// Shorter inputs are padded with empty steps; the bound is the maximum.
pub fn zip_parallel(parts: impl IntoIterator<Item = Schedule>) -> Schedule {
    let mut out = Schedule::default();
    for s in parts {
        out.declared_bound = out.declared_bound.max(s.declared_bound);
        if out.steps.len() < s.steps.len() {
            out.steps.resize_with(s.steps.len(), Step::new);
        }
        for (dst, src) in out.steps.iter_mut().zip(s.steps) {
            if dst.0.is_empty() {
                *dst = src;
            } else {
                dst.0.extend(src.0);
            }
        }
    }
    out
}

/// Combines schedules on pairwise disjoint vertex sets into one schedule
/// whose i-th step is the union of the inputs' i-th steps.
pub fn merge_parallel(parts: Vec<(Vec<Pt>, Schedule)>) -> Result<Schedule> {
    let mut seen = HashSet::new();
    for (verts, s) in &parts {
        for &v in verts {
            if !seen.insert(v) {
                return Err(RouteError::precondition(format!(
                    "vertex sets of parallel schedules intersect at {v}"
                )));
            }
        }
        let own: HashSet<Pt> = verts.iter().copied().collect();
        for step in &s.steps {
            for &(a, b) in &step.0 {
                if !own.contains(&a) || !own.contains(&b) {
                    return Err(RouteError::precondition(format!(
                        "swap {a}-{b} leaves its sub-graph"
                    )));
                }
            }
        }
    }
    Ok(zip_parallel(parts.into_iter().map(|(_, s)| s)))
}

/// Applies one step after checking it.
pub fn apply<T: Token>(config: &Config<T>, step: &Step) -> Result<Config<T>> {
    step.check(config.graph())
        .map_err(|reason| RouteError::InvalidStep { index: 0, reason })?;
    let mut out = config.clone();
    apply_unchecked(&mut out, step);
    Ok(out)
}

pub(crate) fn apply_unchecked<T: Token>(config: &mut Config<T>, step: &Step) {
    for &(a, b) in &step.0 {
        config.swap_unchecked(a, b);
    }
}

/// Outcome of [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub ok: bool,
    /// Index of the first invalid step, if any step was invalid.
    pub failed_step: Option<usize>,
    pub message: String,
}

/// Replays `schedule` from `from` and compares the result with `to`.
pub fn validate<T: Token>(schedule: &Schedule, from: &Config<T>, to: &Config<T>) -> Validation {
    if !from.same_graph(to) {
        return Validation {
            ok: false,
            failed_step: None,
            message: "endpoint configurations live on different graphs".into(),
        };
    }
    let mut cur = from.clone();
    for (i, s) in schedule.steps.iter().enumerate() {
        if let Err(reason) = s.check(from.graph()) {
            return Validation {
                ok: false,
                failed_step: Some(i),
                message: format!("step {i}: {reason}"),
            };
        }
        apply_unchecked(&mut cur, s);
    }
    if cur.tokens() == to.tokens() {
        Validation {
            ok: true,
            failed_step: None,
            message: "ok".into(),
        }
    } else {
        let (p, _) = cur
            .iter()
            .zip(to.iter())
            .find(|((_, a), (_, b))| a != b)
            .map(|(a, _)| a)
            .unwrap();
        Validation {
            ok: false,
            failed_step: None,
            message: format!(
                "final configuration differs from the target at {p} after {} steps",
                schedule.len()
            ),
        }
    }
}

/// [`validate`] as a `Result`, used as the post-check of every router.
pub fn ensure_valid<T: Token>(
    router: &'static str,
    schedule: &Schedule,
    from: &Config<T>,
    to: &Config<T>,
) -> Result<()> {
    let v = validate(schedule, from, to);
    if v.ok {
        crate::error::check_bound(router, schedule.len(), schedule.declared_bound)
    } else {
        Err(RouteError::invariant(format!("{router} produced an invalid schedule: {}", v.message)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::routing::config::LabeledConfig;
    use std::sync::Arc;

    fn path(n: i32) -> Arc<LatticeGraph> {
        Arc::new(LatticeGraph::from_points((0..n).map(|x| Pt::new(x, 0))))
    }

    #[test]
    fn apply_is_involutive() {
        let g = path(4);
        let c = LabeledConfig::identity(g);
        let s = Step(vec![(Pt::new(0, 0), Pt::new(1, 0)), (Pt::new(2, 0), Pt::new(3, 0))]);
        let once = apply(&c, &s).unwrap();
        assert_eq!(once.tokens(), &[2, 1, 4, 3]);
        assert_eq!(apply(&once, &s).unwrap(), c);
        assert_eq!(apply(&c, &Step::new()).unwrap(), c);
    }

    #[test]
    fn apply_rejects_bad_steps() {
        let c = LabeledConfig::identity(path(3));
        let far = Step(vec![(Pt::new(0, 0), Pt::new(2, 0))]);
        assert!(apply(&c, &far).is_err());
        let overlap = Step(vec![(Pt::new(0, 0), Pt::new(1, 0)), (Pt::new(1, 0), Pt::new(2, 0))]);
        assert!(apply(&c, &overlap).is_err());
    }

    #[test]
    fn validate_endpoints() {
        let g = path(3);
        let a = LabeledConfig::identity(g.clone());
        let b = LabeledConfig::new(g, vec![2, 1, 3]).unwrap();
        assert!(validate(&Schedule::default(), &a, &a).ok);
        assert!(!validate(&Schedule::default(), &a, &b).ok);
        let s = Schedule::from_steps(vec![Step(vec![(Pt::new(0, 0), Pt::new(1, 0))])], 1);
        assert!(validate(&s, &a, &b).ok);
        assert!(validate(&s.clone().reverse(), &b, &a).ok);
    }

    #[test]
    fn merge_lengths_and_overlap() {
        let e = |x| Step(vec![(Pt::new(x, 0), Pt::new(x + 1, 0))]);
        let a = Schedule::from_steps(vec![e(0); 3], 3);
        let b = Schedule::from_steps(vec![e(2); 5], 5);
        let va = vec![Pt::new(0, 0), Pt::new(1, 0)];
        let vb = vec![Pt::new(2, 0), Pt::new(3, 0)];
        let m = merge_parallel(vec![(va.clone(), a.clone()), (vb, b)]).unwrap();
        assert_eq!(m.len(), 5);
        assert_eq!(m.steps[0].len(), 2);
        assert!(merge_parallel(vec![(va.clone(), a.clone()), (va, a)]).is_err());
    }

    #[test]
    fn conjugate_commutes_with_validation() {
        let g = path(3);
        let a = LabeledConfig::identity(g.clone());
        let b = LabeledConfig::new(g.clone(), vec![2, 1, 3]).unwrap();
        let s = Schedule::from_steps(vec![Step(vec![(Pt::new(0, 0), Pt::new(1, 0))])], 1);
        let t = IsoTransform::symmetries()[2];
        let tg = Arc::new(g.transform(&t));
        let move_cfg = |c: &LabeledConfig| {
            Config::from_fn(tg.clone(), |p| c.get(t.inverse().apply(p)).unwrap())
        };
        assert!(validate(&s.conjugate(&t), &move_cfg(&a), &move_cfg(&b)).ok);
    }
}
