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

//! Token routing by matchings on convex pieces of the square grid.
//!
//! A routing step swaps the tokens across a set of disjoint edges. This crate
//! builds explicit step schedules between token configurations on lattice
//! graphs cut out by convex polygons, with lengths certified against
//! declared O(w + h) bounds, and an exhaustive oracle for small graphs.

pub mod bench;
pub mod bounds;
pub mod error;
pub mod geometry;
pub mod io;
pub mod lattice;
pub mod oracle;
pub(crate) mod par;
pub mod routing;

pub use error::{Result, RouteError};
