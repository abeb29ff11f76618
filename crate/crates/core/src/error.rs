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

use thiserror::Error;

use crate::lattice::Pt;

pub type Result<T> = std::result::Result<T, RouteError>;

#[derive(Debug, Error)]
pub enum RouteError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not a path")]
    NotAPath,
    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),
    #[error("invalid step {index}: {reason}")]
    InvalidStep { index: usize, reason: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invariant failure: {0}")]
    Invariant(String),
    #[error("bound exceeded in {router}: length {length} > {bound}")]
    BoundExceeded {
        router: &'static str,
        length: usize,
        bound: u64,
    },
    #[error("resource guard exceeded: {what} ({size} > {limit})")]
    ResourceGuard {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("vertex {0:?} is not in the graph")]
    MissingVertex(Pt),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl RouteError {
    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        RouteError::Invariant(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        RouteError::Precondition(msg.into())
    }
}

/// Fails with [`RouteError::BoundExceeded`] when `length > bound`.
pub(crate) fn check_bound(router: &'static str, length: usize, bound: u64) -> Result<()> {
    if length as u64 > bound {
        Err(RouteError::BoundExceeded {
            router,
            length,
            bound,
        })
    } else {
        Ok(())
    }
}
