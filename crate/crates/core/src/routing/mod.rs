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

//! Configurations, schedules and the baseline path, tree and rectangle
//! routers.

pub mod composite;
pub mod config;
pub mod convex;
pub mod path;
pub mod ramp;
pub mod rect;
pub mod schedule;
pub mod tree;

pub use config::{Color, ColorConfig, Config, LabeledConfig, Token};
pub use path::route_path;
pub use composite::{route_burger_bun, route_burger_bun_colored, route_two_ramps};
pub use convex::{route_convex, route_convex_colored};
pub use ramp::{route_ramp_labeled, route_ramp_unlabeled};
pub use rect::{route_rect, route_rect_unlabeled};
pub use schedule::{apply, merge_parallel, validate, Schedule, Step, Validation};
pub use tree::route_tree;
