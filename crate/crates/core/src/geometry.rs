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

//! Exact rational convex geometry.
//!
//! Every predicate here is decided with exact arithmetic: coordinates are
//! [`Rational`] values and no floating point is involved anywhere, so
//! boundary lattice points are classified exactly.

use std::fmt;

use num_integer::Roots;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Result, RouteError};
use crate::lattice::Pt;

pub type Rational = Ratio<i128>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n as i128)
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n as i128, d as i128)
}

fn floor_i64(r: &Rational) -> i64 {
    r.floor().to_integer() as i64
}

fn ceil_i64(r: &Rational) -> i64 {
    r.ceil().to_integer() as i64
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point::new(rat(x), rat(y))
    }

    pub fn is_lattice(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    pub fn to_lattice(&self) -> Option<Pt> {
        if self.is_lattice() {
            Some(Pt::new(
                self.x.to_integer() as i32,
                self.y.to_integer() as i32,
            ))
        } else {
            None
        }
    }
}

impl From<Pt> for Point {
    fn from(p: Pt) -> Self {
        Point::int(p.x as i64, p.y as i64)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Twice the signed area of triangle `o, a, b`; positive when counter-clockwise.
pub fn cross(o: &Point, a: &Point, b: &Point) -> Rational {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// A convex polygon with vertices in counter-clockwise order and no three
/// consecutive vertices collinear. One- and two-vertex polygons are the
/// degenerate point and segment cases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Builds a polygon from vertices already in strictly convex
    /// counter-clockwise position.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(RouteError::precondition("polygon needs at least one vertex"));
        }
        let n = vertices.len();
        if n >= 3 {
            for i in 0..n {
                let c = cross(&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]);
                if !c.is_positive() {
                    return Err(RouteError::precondition(format!(
                        "vertices {}, {}, {} are not in strictly convex counter-clockwise position",
                        vertices[i],
                        vertices[(i + 1) % n],
                        vertices[(i + 2) % n]
                    )));
                }
            }
        } else if n == 2 && vertices[0] == vertices[1] {
            return Err(RouteError::precondition("repeated vertex"));
        }
        Ok(Polygon { vertices })
    }

    /// Convex hull of arbitrary points; accepts any order and duplicates.
    pub fn from_points(points: &[Point]) -> Result<Self> {
        if points.is_empty() {
            return Err(RouteError::precondition("empty point set"));
        }
        Ok(hull(points))
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    pub fn min_x(&self) -> Rational {
        self.vertices.iter().map(|p| p.x).min().unwrap()
    }

    pub fn max_x(&self) -> Rational {
        self.vertices.iter().map(|p| p.x).max().unwrap()
    }

    pub fn min_y(&self) -> Rational {
        self.vertices.iter().map(|p| p.y).min().unwrap()
    }

    pub fn max_y(&self) -> Rational {
        self.vertices.iter().map(|p| p.y).max().unwrap()
    }

    pub fn width(&self) -> Rational {
        self.max_x() - self.min_x()
    }

    pub fn height(&self) -> Rational {
        self.max_y() - self.min_y()
    }

    /// Twice the enclosed area.
    pub fn double_area(&self) -> Rational {
        let n = self.vertices.len();
        if n < 3 {
            return Rational::zero();
        }
        let o = &self.vertices[0];
        (1..n - 1)
            .map(|i| cross(o, &self.vertices[i], &self.vertices[i + 1]))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Closed containment (interior or boundary).
    pub fn contains(&self, p: &Point) -> bool {
        match self.vertices.len() {
            1 => &self.vertices[0] == p,
            2 => on_segment(&self.vertices[0], &self.vertices[1], p),
            _ => self.edges().all(|(a, b)| !cross(a, b, p).is_negative()),
        }
    }

    /// Strict interior containment; always false for degenerate polygons.
    pub fn contains_strictly(&self, p: &Point) -> bool {
        !self.is_degenerate() && self.edges().all(|(a, b)| cross(a, b, p).is_positive())
    }

    /// Applies a map to every vertex and re-hulls.
    pub fn map(&self, f: impl Fn(&Point) -> Point) -> Polygon {
        let pts: Vec<Point> = self.vertices.iter().map(f).collect();
        hull(&pts)
    }

    /// Exact x-interval `[lo, hi]` of the horizontal cross-section at `y`.
    pub fn x_interval(&self, y: &Rational) -> Option<(Rational, Rational)> {
        if *y < self.min_y() || *y > self.max_y() {
            return None;
        }
        match self.vertices.len() {
            1 => Some((self.vertices[0].x, self.vertices[0].x)),
            2 => {
                let (a, b) = (&self.vertices[0], &self.vertices[1]);
                if a.y == b.y {
                    Some((a.x.min(b.x), a.x.max(b.x)))
                } else {
                    let x = a.x + (b.x - a.x) * (*y - a.y) / (b.y - a.y);
                    Some((x, x))
                }
            }
            _ => {
                let mut lo = self.min_x();
                let mut hi = self.max_x();
                for (a, b) in self.edges() {
                    let dy = b.y - a.y;
                    let dx = b.x - a.x;
                    // cross(a, b, (x, y)) = dx*(y - ay) - dy*(x - ax) >= 0
                    if dy.is_zero() {
                        if (dx * (*y - a.y)).is_negative() {
                            return None;
                        }
                        continue;
                    }
                    let bound = a.x + dx * (*y - a.y) / dy;
                    if dy.is_positive() {
                        hi = hi.min(bound);
                    } else {
                        lo = lo.max(bound);
                    }
                }
                (lo <= hi).then_some((lo, hi))
            }
        }
    }

    /// Keeps the part of the polygon satisfying `a*x + b*y <= c`.
    pub fn clip(&self, a: Rational, b: Rational, c: Rational) -> Option<Polygon> {
        let inside = |p: &Point| a * p.x + b * p.y <= c;
        let n = self.vertices.len();
        let mut out = Vec::new();
        for i in 0..n {
            let cur = &self.vertices[i];
            let next = &self.vertices[(i + 1) % n];
            if inside(cur) {
                out.push(cur.clone());
            }
            if n > 1 && inside(cur) != inside(next) {
                let fc = a * cur.x + b * cur.y - c;
                let fnx = a * next.x + b * next.y - c;
                let t = fc / (fc - fnx);
                out.push(Point::new(
                    cur.x + (next.x - cur.x) * t,
                    cur.y + (next.y - cur.y) * t,
                ));
            }
        }
        if out.is_empty() {
            None
        } else {
            Some(hull(&out))
        }
    }
}

fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    cross(a, b, p).is_zero()
        && p.x >= a.x.min(b.x)
        && p.x <= a.x.max(b.x)
        && p.y >= a.y.min(b.y)
        && p.y <= a.y.max(b.y)
}

/// Convex hull by the monotone chain; collinear points are dropped.
pub fn hull(points: &[Point]) -> Polygon {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return Polygon { vertices: pts };
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    Polygon { vertices: lower }
}

/// All integer points in or on the polygon, in canonical order (rows top to
/// bottom, left to right within a row).
pub fn lattice_points(poly: &Polygon) -> Vec<Pt> {
    let mut out = Vec::new();
    let y_lo = ceil_i64(&poly.min_y());
    let y_hi = floor_i64(&poly.max_y());
    for y in (y_lo..=y_hi).rev() {
        if let Some((lo, hi)) = poly.x_interval(&rat(y)) {
            for x in ceil_i64(&lo)..=floor_i64(&hi) {
                out.push(Pt::new(x as i32, y as i32));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpineOrientation {
    Vertical,
    Horizontal,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpineInfo {
    pub orientation: SpineOrientation,
    /// The shared x (vertical) or y (horizontal) coordinate.
    pub coordinate: Rational,
    pub endpoints: [Point; 2],
}

/// Closed interval of `key` values over the vertices attaining the extreme
/// of `extreme`.
fn face_interval(
    poly: &Polygon,
    extreme: impl Fn(&Point) -> Rational,
    key: impl Fn(&Point) -> Rational,
    want_max: bool,
) -> (Rational, Rational, Rational) {
    let vals: Vec<Rational> = poly.vertices.iter().map(&extreme).collect();
    let target = if want_max {
        *vals.iter().max().unwrap()
    } else {
        *vals.iter().min().unwrap()
    };
    let keys: Vec<Rational> = poly
        .vertices
        .iter()
        .zip(&vals)
        .filter(|(_, v)| **v == target)
        .map(|(p, _)| key(p))
        .collect();
    (
        target,
        *keys.iter().min().unwrap(),
        *keys.iter().max().unwrap(),
    )
}

/// Finds a vertical spine (top and bottom faces share an x) or else a
/// horizontal one. Ties pick the leftmost (resp. lowest) shared coordinate.
pub fn find_spine(poly: &Polygon) -> SpineInfo {
    let (top, tlo, thi) = face_interval(poly, |p| p.y, |p| p.x, true);
    let (bot, blo, bhi) = face_interval(poly, |p| p.y, |p| p.x, false);
    let lo = tlo.max(blo);
    if lo <= thi.min(bhi) {
        return SpineInfo {
            orientation: SpineOrientation::Vertical,
            coordinate: lo,
            endpoints: [Point::new(lo, bot), Point::new(lo, top)],
        };
    }
    let (left, llo, lhi) = face_interval(poly, |p| p.x, |p| p.y, false);
    let (right, rlo, rhi) = face_interval(poly, |p| p.x, |p| p.y, true);
    let lo = llo.max(rlo);
    if lo <= lhi.min(rhi) {
        return SpineInfo {
            orientation: SpineOrientation::Horizontal,
            coordinate: lo,
            endpoints: [Point::new(left, lo), Point::new(right, lo)],
        };
    }
    SpineInfo {
        orientation: SpineOrientation::None,
        coordinate: Rational::zero(),
        endpoints: [poly.vertices[0].clone(), poly.vertices[0].clone()],
    }
}

/// Horizontal shear `(x, y) -> (x + m*y, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShearMap {
    pub m: Rational,
}

impl ShearMap {
    pub fn apply(&self, p: &Point) -> Point {
        Point::new(p.x + self.m * p.y, p.y)
    }
}

/// Shears a polygon with `w <= h` so that its topmost and bottommost points
/// share an x-coordinate.
pub fn shear_to_burger_bun(poly: &Polygon) -> Result<(ShearMap, Polygon)> {
    let h = poly.height();
    if h.is_zero() {
        return Err(RouteError::precondition("polygon has zero height"));
    }
    if poly.width() > h {
        return Err(RouteError::precondition("shear requires width <= height"));
    }
    let (py, tlo, thi) = face_interval(poly, |p| p.y, |p| p.x, true);
    let (qy, blo, bhi) = face_interval(poly, |p| p.y, |p| p.x, false);
    // Pick p on the top face and q on the bottom face as close in x as possible.
    let (px, qx) = if tlo.max(blo) <= thi.min(bhi) {
        let x = tlo.max(blo);
        (x, x)
    } else if tlo > bhi {
        (tlo, bhi)
    } else {
        (thi, blo)
    };
    let m = (qx - px) / (py - qy);
    debug_assert!(m.abs() <= Rational::from_integer(1));
    let shear = ShearMap { m };
    Ok((shear, poly.map(|p| shear.apply(p))))
}

/// Reflection axis for a vertical spine at `spine_x` that maps lattice points
/// to lattice points.
pub fn mirror_axis(spine_x: Rational) -> Rational {
    if spine_x.is_integer() {
        spine_x
    } else {
        spine_x.floor() + Rational::new(1, 2)
    }
}

/// Scale used for the rational upper bound on square roots.
const SQRT_SCALE: i128 = 1_000_000;

/// Rational upper bound on `sqrt(v)` for nonnegative rational `v`.
fn sqrt_upper(v: Rational) -> Rational {
    // sqrt(n/d) = sqrt(n*d)/d <= ceil(sqrt(n*d*S^2)) / (d*S)
    let n = *v.numer();
    let d = *v.denom();
    let scaled = n * d * SQRT_SCALE * SQRT_SCALE;
    let mut r = scaled.sqrt();
    if r * r < scaled {
        r += 1;
    }
    Rational::new(r, d * SQRT_SCALE)
}

/// Lower bound on the number of lattice points strictly inside a triangle
/// with an axis-parallel side: `ceil(Area - 2*Perimeter + 1)`, with the
/// perimeter replaced by a rational over-approximation. Only meaningful when
/// the result is at least 1.
pub fn triangle_point_bound(tri: &Polygon) -> Result<i64> {
    if tri.vertices.len() != 3 {
        return Err(RouteError::precondition("input is not a triangle"));
    }
    let axis_parallel = tri.edges().any(|(a, b)| a.x == b.x || a.y == b.y);
    if !axis_parallel {
        return Err(RouteError::precondition("triangle has no axis-parallel side"));
    }
    let area = tri.double_area() / Rational::from_integer(2);
    let perimeter = tri
        .edges()
        .map(|(a, b)| {
            let dx = b.x - a.x;
            let dy = b.y - a.y;
            sqrt_upper(dx * dx + dy * dy)
        })
        .fold(Rational::zero(), |s, l| s + l);
    let v = area - Rational::from_integer(2) * perimeter + Rational::from_integer(1);
    Ok(ceil_i64(&v))
}

/// Approximate value for reporting only.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
