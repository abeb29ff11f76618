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

//! Token configurations on lattice graphs.

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use crate::error::{Result, RouteError};
use crate::lattice::{LatticeGraph, Pt};

/// Token color for unlabeled routing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    White,
    Black,
}

impl Color {
    pub fn is_black(self) -> bool {
        self == Color::Black
    }

    pub fn from_bit(b: bool) -> Self {
        if b {
            Color::Black
        } else {
            Color::White
        }
    }
}

/// Anything that can sit on a vertex.
pub trait Token: Copy + Eq + Hash + Debug + Send + Sync + 'static {
    /// For each position of `from`, a position of `to` holding an equal
    /// token, forming a bijection. Equal tokens keep their relative order.
    fn destinations(from: &[Self], to: &[Self]) -> Result<Vec<usize>>;
}

impl Token for u32 {
    fn destinations(from: &[u32], to: &[u32]) -> Result<Vec<usize>> {
        let mut pos = std::collections::HashMap::with_capacity(to.len());
        for (i, &t) in to.iter().enumerate() {
            if pos.insert(t, i).is_some() {
                return Err(RouteError::ConfigMismatch(format!("token {t} appears twice")));
            }
        }
        let out = from
            .iter()
            .map(|t| {
                pos.get(t).copied().ok_or_else(|| {
                    RouteError::ConfigMismatch(format!("token {t} missing from the target"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if from.len() != to.len() {
            return Err(RouteError::ConfigMismatch("token counts differ".into()));
        }
        Ok(out)
    }
}

impl Token for Color {
    fn destinations(from: &[Color], to: &[Color]) -> Result<Vec<usize>> {
        if from.len() != to.len() {
            return Err(RouteError::ConfigMismatch("token counts differ".into()));
        }
        let blacks: Vec<usize> = (0..to.len()).filter(|&i| to[i].is_black()).collect();
        let whites: Vec<usize> = (0..to.len()).filter(|&i| !to[i].is_black()).collect();
        let (mut nb, mut nw) = (0, 0);
        let mut out = Vec::with_capacity(from.len());
        for c in from {
            let slot = if c.is_black() {
                nb += 1;
                blacks.get(nb - 1)
            } else {
                nw += 1;
                whites.get(nw - 1)
            };
            out.push(*slot.ok_or_else(|| {
                RouteError::ConfigMismatch("black counts differ".into())
            })?);
        }
        Ok(out)
    }
}

/// Assignment of one token to every vertex of a graph, indexed in the
/// graph's canonical vertex order.
#[derive(Clone, Debug)]
pub struct Config<T> {
    graph: Arc<LatticeGraph>,
    tokens: Vec<T>,
}

pub type LabeledConfig = Config<u32>;
pub type ColorConfig = Config<Color>;

impl<T: PartialEq> PartialEq for Config<T> {
    fn eq(&self, other: &Self) -> bool {
        self.tokens == other.tokens && *self.graph == *other.graph
    }
}

impl<T: Token> Config<T> {
    pub fn new(graph: Arc<LatticeGraph>, tokens: Vec<T>) -> Result<Self> {
        if tokens.len() != graph.len() {
            return Err(RouteError::ConfigMismatch(format!(
                "{} tokens for {} vertices",
                tokens.len(),
                graph.len()
            )));
        }
        Ok(Config { graph, tokens })
    }

    /// Builds a config by evaluating `f` at every vertex.
    pub fn from_fn(graph: Arc<LatticeGraph>, f: impl Fn(Pt) -> T) -> Self {
        let tokens = graph.points().iter().map(|&p| f(p)).collect();
        Config { graph, tokens }
    }

    pub fn graph(&self) -> &Arc<LatticeGraph> {
        &self.graph
    }

    pub fn tokens(&self) -> &[T] {
        &self.tokens
    }

    pub fn into_tokens(self) -> Vec<T> {
        self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn at(&self, i: usize) -> T {
        self.tokens[i]
    }

    pub fn get(&self, p: Pt) -> Option<T> {
        self.graph.index_of(p).map(|i| self.tokens[i])
    }

    pub fn set(&mut self, p: Pt, t: T) -> Result<()> {
        let i = self.graph.index_of(p).ok_or(RouteError::MissingVertex(p))?;
        self.tokens[i] = t;
        Ok(())
    }

    /// Token pairs keyed by vertex, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (Pt, T)> + '_ {
        self.graph.points().iter().copied().zip(self.tokens.iter().copied())
    }

    pub fn same_graph(&self, other: &Config<T>) -> bool {
        Arc::ptr_eq(&self.graph, &other.graph) || *self.graph == *other.graph
    }

    /// Swaps the tokens on `a` and `b` without checking adjacency.
    pub(crate) fn swap_unchecked(&mut self, a: Pt, b: Pt) {
        let i = self.graph.index_of(a).expect("vertex in graph");
        let j = self.graph.index_of(b).expect("vertex in graph");
        self.tokens.swap(i, j);
    }

    /// Restriction to a sub-graph (whose vertices must all be present).
    pub fn restrict(&self, sub: Arc<LatticeGraph>) -> Result<Self> {
        let tokens = sub
            .points()
            .iter()
            .map(|&p| self.get(p).ok_or(RouteError::MissingVertex(p)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Config { graph: sub, tokens })
    }

    /// Overwrites the entries of `part`'s vertices with `part`'s tokens.
    pub fn overlay(&mut self, part: &Config<T>) -> Result<()> {
        for (p, t) in part.iter() {
            self.set(p, t)?;
        }
        Ok(())
    }

    /// For each vertex index of `self`, the index of the vertex of `to`
    /// that its token should reach.
    pub fn destinations(&self, to: &Config<T>) -> Result<Vec<usize>> {
        if !self.same_graph(to) {
            return Err(RouteError::ConfigMismatch("configurations live on different graphs".into()));
        }
        T::destinations(&self.tokens, &to.tokens)
    }

    /// Maps tokens through `f`.
    pub fn map<U: Token>(&self, f: impl Fn(T) -> U) -> Config<U> {
        Config {
            graph: self.graph.clone(),
            tokens: self.tokens.iter().map(|&t| f(t)).collect(),
        }
    }
}

impl LabeledConfig {
    /// Token `i + 1` on the i-th vertex in canonical order.
    pub fn identity(graph: Arc<LatticeGraph>) -> Self {
        let tokens = (1..=graph.len() as u32).collect();
        Config { graph, tokens }
    }

    /// Whether both configs carry the same multiset of distinct tokens.
    pub fn same_tokens(&self, other: &LabeledConfig) -> bool {
        let mut a = self.tokens.clone();
        let mut b = other.tokens.clone();
        a.sort_unstable();
        b.sort_unstable();
        a == b && a.windows(2).all(|w| w[0] != w[1])
    }

}

impl ColorConfig {
    pub fn black_count(&self) -> usize {
        self.tokens.iter().filter(|c| c.is_black()).count()
    }

    /// Number of black tokens in row `y`.
    pub fn row_blacks(&self, y: i32) -> usize {
        self.iter().filter(|&(p, c)| p.y == y && c.is_black()).count()
    }

    /// Number of black tokens in column `x`.
    pub fn col_blacks(&self, x: i32) -> usize {
        self.iter().filter(|&(p, c)| p.x == x && c.is_black()).count()
    }
}
