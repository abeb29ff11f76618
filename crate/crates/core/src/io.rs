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

//! File formats: polygons and configurations as JSON, schedules as JSON
//! lines (a header object followed by one array of swaps per step).

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Result, RouteError};
use crate::geometry::{Point, Polygon, Rational};
use crate::lattice::{LatticeGraph, Pt};
use crate::routing::{Color, ColorConfig, LabeledConfig, Schedule, Step};

fn parse_err(msg: impl Into<String>) -> RouteError {
    RouteError::Parse(msg.into())
}

fn json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))
}

/// Parses `7`, `"-3"`, `"5/2"` or `"1.25"`.
fn parse_coord(v: &Value) -> Result<Rational> {
    if let Some(n) = v.as_i64() {
        return Ok(Rational::from_integer(n as i128));
    }
    let s = v.as_str().ok_or_else(|| parse_err(format!("bad coordinate {v}")))?.trim();
    let bad = || parse_err(format!("bad coordinate {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let (n, d): (i128, i128) = (n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?);
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (neg, body) = s.strip_prefix('-').map_or((false, s), |b| (true, b));
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !(int.chars().chain(frac.chars())).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let n: i128 = digits.parse().map_err(|_| bad())?;
    let d = 10i128.checked_pow(frac.len() as u32).ok_or_else(bad)?;
    let r = Rational::new(n, d);
    Ok(if neg { -r } else { r })
}

/// Polygon file: `{"vertices": [[x, y], ...]}` where each coordinate is an
/// integer or a string holding an integer, fraction or decimal; a vertex may
/// also be `[x_num, x_den, y_num, y_den]`.
pub fn parse_polygon(text: &str) -> Result<Polygon> {
    let v = json(text)?;
    let verts = v
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("expected an object with a \"vertices\" array"))?;
    let mut pts = Vec::with_capacity(verts.len());
    for (i, p) in verts.iter().enumerate() {
        let a = p.as_array().ok_or_else(|| parse_err(format!("vertex {i} is not an array")))?;
        let pt = match a.len() {
            2 => Point::new(parse_coord(&a[0])?, parse_coord(&a[1])?),
            4 => {
                let n: Vec<i64> = a
                    .iter()
                    .map(|x| x.as_i64().ok_or_else(|| parse_err(format!("vertex {i}: expected integers"))))
                    .collect::<Result<_>>()?;
                if n[1] == 0 || n[3] == 0 {
                    return Err(parse_err(format!("vertex {i}: zero denominator")));
                }
                Point::new(Rational::new(n[0] as i128, n[1] as i128), Rational::new(n[2] as i128, n[3] as i128))
            }
            k => return Err(parse_err(format!("vertex {i} has {k} entries"))),
        };
        pts.push(pt);
    }
    Polygon::new(pts)
}

pub fn polygon_json(p: &Polygon) -> String {
    let vs: Vec<Value> = p
        .vertices()
        .iter()
        .map(|q| {
            let c = |r: &Rational| {
                if r.is_integer() {
                    Value::from(*r.numer() as i64)
                } else {
                    Value::from(format!("{}/{}", r.numer(), r.denom()))
                }
            };
            Value::Array(vec![c(&q.x), c(&q.y)])
        })
        .collect();
    serde_json::json!({ "vertices": vs }).to_string()
}

pub fn read_polygon(path: &Path) -> Result<Polygon> {
    parse_polygon(&std::fs::read_to_string(path)?)
}

fn token_array(text: &str, n: usize) -> Result<Vec<u64>> {
    let v: Vec<u64> = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    if v.len() != n {
        return Err(RouteError::ConfigMismatch(format!("{} tokens for {n} vertices", v.len())));
    }
    Ok(v)
}

/// Labeled configuration: a JSON array of token ids in canonical vertex order.
pub fn parse_labeled(text: &str, g: Arc<LatticeGraph>) -> Result<LabeledConfig> {
    let v = token_array(text, g.len())?;
    let t = v
        .into_iter()
        .map(|x| u32::try_from(x).map_err(|_| parse_err(format!("token {x} too large"))))
        .collect::<Result<_>>()?;
    LabeledConfig::new(g, t)
}

/// Colored configuration: a JSON array of 0 (white) and 1 (black).
pub fn parse_colored(text: &str, g: Arc<LatticeGraph>) -> Result<ColorConfig> {
    let v = token_array(text, g.len())?;
    let t = v
        .into_iter()
        .map(|x| match x {
            0 => Ok(Color::White),
            1 => Ok(Color::Black),
            _ => Err(parse_err(format!("colored token {x} is not 0 or 1"))),
        })
        .collect::<Result<_>>()?;
    ColorConfig::new(g, t)
}

pub fn labeled_json(c: &LabeledConfig) -> String {
    serde_json::to_string(c.tokens()).expect("serializable")
}

pub fn colored_json(c: &ColorConfig) -> String {
    let bits: Vec<u8> = c.tokens().iter().map(|t| t.is_black() as u8).collect();
    serde_json::to_string(&bits).expect("serializable")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleHeader {
    pub n_steps: usize,
    pub graph_w: u32,
    pub graph_h: u32,
    pub declared_bound: u64,
}

/// Header line plus one line per step, each step `[[[x1, y1], [x2, y2]], ...]`.
pub fn schedule_jsonl(s: &Schedule, g: &LatticeGraph) -> String {
    let header = ScheduleHeader {
        n_steps: s.len(),
        graph_w: g.width(),
        graph_h: g.height(),
        declared_bound: s.declared_bound,
    };
    let mut out = serde_json::to_string(&header).expect("serializable");
    out.push('\n');
    for step in &s.steps {
        out.push('[');
        for (k, (a, b)) in step.swaps().iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            let _ = write!(out, "[[{},{}],[{},{}]]", a.x, a.y, b.x, b.y);
        }
        out.push_str("]\n");
    }
    out
}

/// Parses a schedule file, rejecting truncated or padded files.
pub fn parse_schedule(text: &str) -> Result<(ScheduleHeader, Schedule)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or_else(|| parse_err("empty schedule file"))?;
    let header: ScheduleHeader =
        serde_json::from_str(first).map_err(|e| parse_err(format!("header: {e}")))?;
    let mut steps = Vec::with_capacity(header.n_steps);
    for (no, line) in lines {
        let swaps: Vec<[[i32; 2]; 2]> = serde_json::from_str(line)
            .map_err(|e| parse_err(format!("line {}: {e}", no + 1)))?;
        steps.push(Step(
            swaps.into_iter().map(|[a, b]| (Pt::new(a[0], a[1]), Pt::new(b[0], b[1]))).collect(),
        ));
    }
    if steps.len() != header.n_steps {
        return Err(parse_err(format!(
            "header announces {} steps but the file has {}",
            header.n_steps,
            steps.len()
        )));
    }
    Ok((header, Schedule::from_steps(steps, header.declared_bound)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ratio;

    #[test]
    fn coordinates() {
        let c = |s: &str| parse_coord(&Value::from(s)).unwrap();
        assert_eq!(c("5/2"), ratio(5, 2));
        assert_eq!(c("-1.25"), ratio(-5, 4));
        assert_eq!(c("7"), ratio(7, 1));
        assert_eq!(parse_coord(&Value::from(-3)).unwrap(), ratio(-3, 1));
        for bad in ["", "1/0", "x", "1.2.3", "."] {
            assert!(parse_coord(&Value::from(bad)).is_err(), "{bad}");
        }
    }

    #[test]
    fn polygon_round_trip() {
        let p = parse_polygon(r#"{"vertices": [[0, 0], ["5/2", 0], ["5/2", "1.5"], [0, 1, 3, 1]]}"#).unwrap();
        assert_eq!(parse_polygon(&polygon_json(&p)).unwrap(), p);
        let e = parse_polygon("{\"vertices\": [[0, 0],\n [1 2]]}").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
    }

    #[test]
    fn schedule_round_trip_and_truncation() {
        let g = LatticeGraph::from_points([Pt::new(0, 0), Pt::new(1, 0), Pt::new(2, 0)]);
        let s = Schedule::from_steps(
            vec![Step(vec![(Pt::new(0, 0), Pt::new(1, 0))]), Step(vec![(Pt::new(1, 0), Pt::new(2, 0))])],
            3,
        );
        let text = schedule_jsonl(&s, &g);
        let (h, back) = parse_schedule(&text).unwrap();
        assert_eq!((h.n_steps, h.graph_w, h.graph_h), (2, 2, 0));
        assert_eq!(back, s);
        let cut: String = text.lines().take(2).map(|l| format!("{l}\n")).collect();
        assert!(parse_schedule(&cut).is_err());
    }
}
