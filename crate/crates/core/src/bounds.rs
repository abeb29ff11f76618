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

//! Declared length constants. Every schedule header records
//! `constant * (w + h)` for the router that produced it, where `w` and `h`
//! are the width and height of the routed graph.

/// Unlabeled routing on a ramp: `2 * (push up, left, up, left + column
/// preparation + push up) <= 10m + 6n <= 20(w + h)` for `w, h >= 1`.
pub const RAMP_UNLABELED: u64 = 20;

/// Labeled routing on a ramp by quadrant recursion: `4 * RAMP_UNLABELED`.
pub const RAMP_LABELED: u64 = 4 * RAMP_UNLABELED;

/// Rounds of the mirror exchange between two ramps.
pub const TWO_RAMPS_ROUNDS: u64 = 20;

/// Rounds of the mirror exchange between two burger bun halves.
pub const BURGER_BUN_ROUNDS: u64 = 40;

/// Per-round cost of the row exchange (a path routing of each row).
pub const EXCHANGE: u64 = 2;

/// Hair size constant when a piece is too thin for the mirror exchange.
pub const HAIR_C1: u64 = 41;

/// Skin size constant for a single spine-adjacent line.
pub const HAIR_C2: u64 = 2;

/// Threshold on widths and spine length for the mirror exchange.
pub const MIRROR_THRESHOLD: u32 = 41;

/// Stretch of the row-wise embedding.
pub const STRETCH: u64 = 3;

/// Hair and skin constants of the convex pipeline.
pub const PIPELINE_C1: u64 = 6;
pub const PIPELINE_C2: u64 = 4;

/// Tree routing constant relative to `w + h` in the small case
/// (`3n` with `n <= 4(w + h)`).
pub const SMALL_TREE: u64 = 12;

/// `(6 c1 + 3 c2 + 2 c3)`.
pub const fn hair(c1: u64, c2: u64, c3: u64) -> u64 {
    6 * c1 + 3 * c2 + 2 * c3
}

/// Mirror loop: `rounds` rounds of two colored half routings plus the row
/// exchange, then one final half routing.
pub const fn mirror(rounds: u64, half_colored: u64, half_final: u64) -> u64 {
    rounds * (2 * half_colored + EXCHANGE) + half_final
}

pub const TWO_RAMPS_LABELED: u64 = mirror(TWO_RAMPS_ROUNDS, RAMP_UNLABELED, RAMP_LABELED);
pub const TWO_RAMPS_COLORED: u64 = mirror(TWO_RAMPS_ROUNDS, RAMP_UNLABELED, RAMP_UNLABELED);
pub const TWO_RAMPS_HAIR: u64 = hair(HAIR_C1, HAIR_C2, RAMP_LABELED);

/// Any half of a burger bun: one ramp, two ramps by mirror, or two ramps
/// with hair.
pub const HALF_LABELED: u64 = max(TWO_RAMPS_LABELED, TWO_RAMPS_HAIR);
pub const HALF_COLORED: u64 = max(TWO_RAMPS_COLORED, TWO_RAMPS_HAIR);

pub const BURGER_BUN_MIRROR: u64 = mirror(BURGER_BUN_ROUNDS, HALF_COLORED, HALF_LABELED);
pub const BURGER_BUN_HAIR: u64 = hair(HAIR_C1, HAIR_C2, HALF_LABELED);
pub const BURGER_BUN: u64 = max(BURGER_BUN_MIRROR, BURGER_BUN_HAIR);

/// Worst-case expansion of one simulated step at stretch `c`:
/// `(4c(2c+1)+1) * 2c(2c+1) * (c+1)`.
pub const fn simulation(c: u64) -> u64 {
    (4 * c * (2 * c + 1) + 1) * 2 * c * (2 * c + 1) * (c + 1)
}

/// Core constant of the pipeline: a burger bun schedule on a graph with
/// `w + h` at most twice the original, expanded by the simulation.
pub const PIPELINE_CORE: u64 = simulation(STRETCH) * BURGER_BUN * 2;

/// Top-level constant for convex polygons.
pub const CONVEX: u64 = max(hair(PIPELINE_C1, PIPELINE_C2, PIPELINE_CORE), SMALL_TREE);

const fn max(a: u64, b: u64) -> u64 {
    if a > b {
        a
    } else {
        b
    }
}

/// `constant * (w + h)`.
pub fn scaled(constant: u64, w: u32, h: u32) -> u64 {
    constant * (w as u64 + h as u64)
}
