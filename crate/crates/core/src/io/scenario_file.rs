//! JSON scenario documents.
//!
//! ```json
//! {
//!   "grid": { "bounds": [[-1, 1], [-1, 1], [0, 6.283185307179586]],
//!             "counts": [81, 81, 50], "periodic": [false, false, true] },
//!   "obstacles": [{ "type": "rectangle", "lower": [-0.1, -0.5], "upper": [0.1, 0.0] }],
//!   "vehicles": [{ "v": 1, "omega_max": 1, "x0": [-0.5, 0, 0], "est": -2.5, "sta": 0,
//!                  "target": { "center": [0.7, 0.2], "radius": 0.1 }, "priority": 1 }],
//!   "danger_radius": 0.1,
//!   "numerics": { "cfl": 0.5, "order": 1, "slice_stride": 1, "horizon_cap": 3 },
//!   "options": { "post_arrival_obstacle": true }
//! }
//! ```
//!
//! Unknown keys are rejected. Errors carry a JSON pointer to the offending
//! value, or a line and column for syntax errors.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::error::Category;

use crate::dynamics::{model_from_name, ModelParams, MODEL_NAMES};
use crate::error::{Error, Result};
use crate::geom::{Axis, Grid, Shape};
use crate::numerics::{NumericsConfig, SchemeOrder};
use crate::planner::{PlanOptions, Scenario, TargetSpec, VehicleSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    pub bounds: Vec<[f64; 2]>,
    pub counts: Vec<usize>,
    pub periodic: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetDoc {
    pub center: Vec<f64>,
    pub radius: f64,
    /// Experimental heading restriction `[lo, hi]` in radians.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heading: Option<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VehicleDoc {
    #[serde(default = "default_model")]
    pub model: String,
    pub v: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_max: Option<f64>,
    pub x0: Vec<f64>,
    pub est: f64,
    pub sta: f64,
    pub target: TargetDoc,
    pub priority: usize,
}

fn default_model() -> String {
    "dubins".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsDoc {
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_order")]
    pub order: u8,
    #[serde(default = "default_stride")]
    pub slice_stride: usize,
    #[serde(default = "default_horizon")]
    pub horizon_cap: f64,
}

fn default_cfl() -> f64 {
    NumericsConfig::default().cfl_factor
}
fn default_order() -> u8 {
    1
}
fn default_stride() -> usize {
    1
}
fn default_horizon() -> f64 {
    NumericsConfig::default().horizon_cap
}

impl Default for NumericsDoc {
    fn default() -> Self {
        Self { cfl: default_cfl(), order: default_order(), slice_stride: default_stride(), horizon_cap: default_horizon() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsDoc {
    #[serde(default = "yes")]
    pub post_arrival_obstacle: bool,
}

fn yes() -> bool {
    true
}

impl Default for OptionsDoc {
    fn default() -> Self {
        Self { post_arrival_obstacle: true }
    }
}

/// The document as written on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub grid: GridDoc,
    #[serde(default)]
    pub obstacles: Vec<Shape>,
    pub vehicles: Vec<VehicleDoc>,
    pub danger_radius: f64,
    #[serde(default)]
    pub numerics: NumericsDoc,
    #[serde(default)]
    pub options: OptionsDoc,
    /// Free-form remarks copied into every safety report.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema { path: path.into(), message: message.into() }
}

/// JSON pointer for a serde path.
fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{key}")),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => {}
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        let doc: ScenarioFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let inner = e.inner();
            match inner.classify() {
                Category::Data => {
                    let msg = inner.to_string();
                    // serde_json appends " at line L column C"; the pointer replaces it
                    let msg = msg.split(" at line ").next().unwrap_or(&msg).to_string();
                    schema(pointer(e.path()), msg)
                }
                _ => Error::Parse { line: inner.line(), column: inner.column(), message: inner.to_string() },
            }
        })?;
        de.end().map_err(|e| Error::Parse { line: e.line(), column: e.column(), message: e.to_string() })?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario documents always serialize")
    }

    fn grid(&self) -> Result<Grid> {
        let g = &self.grid;
        let n = g.bounds.len();
        if g.counts.len() != n {
            return Err(schema("/grid/counts", format!("expected {n} entries to match /grid/bounds")));
        }
        if g.periodic.len() != n {
            return Err(schema("/grid/periodic", format!("expected {n} entries to match /grid/bounds")));
        }
        for d in 0..n {
            if g.counts[d] < 3 {
                return Err(schema(format!("/grid/counts/{d}"), "at least 3 nodes per dimension"));
            }
            let [lo, hi] = g.bounds[d];
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(schema(format!("/grid/bounds/{d}"), "upper bound must exceed lower bound"));
            }
        }
        Grid::new((0..n).map(|d| Axis::new(g.bounds[d][0], g.bounds[d][1], g.counts[d], g.periodic[d])).collect())
            .map_err(|e| schema("/grid", e.to_string()))
    }

    /// Validates the document and converts it into a [`Scenario`].
    pub fn into_scenario(&self) -> Result<Scenario> {
        let grid = Arc::new(self.grid()?);

        if !(self.danger_radius > 0.0 && self.danger_radius.is_finite()) {
            return Err(schema("/danger_radius", format!("must be positive, got {}", self.danger_radius)));
        }
        let nd = &self.numerics;
        if !(nd.cfl > 0.0 && nd.cfl <= 1.0) {
            return Err(schema("/numerics/cfl", "must lie in (0, 1]"));
        }
        let order = SchemeOrder::try_from(nd.order).map_err(|e| schema("/numerics/order", e.to_string()))?;
        if nd.slice_stride == 0 {
            return Err(schema("/numerics/slice_stride", "must be positive"));
        }
        if !(nd.horizon_cap > 0.0 && nd.horizon_cap.is_finite()) {
            return Err(schema("/numerics/horizon_cap", "must be positive"));
        }
        let numerics =
            NumericsConfig { cfl_factor: nd.cfl, scheme_order: order, slice_stride: nd.slice_stride, horizon_cap: nd.horizon_cap };

        for (i, o) in self.obstacles.iter().enumerate() {
            o.validate().map_err(|e| schema(format!("/obstacles/{i}"), e.to_string()))?;
            if o.dim() > grid.ndim() {
                return Err(schema(format!("/obstacles/{i}"), "more coordinates than the grid has dimensions"));
            }
        }

        if self.vehicles.is_empty() {
            return Err(schema("/vehicles", "at least one vehicle is required"));
        }
        let mut priorities: Vec<usize> = self.vehicles.iter().map(|v| v.priority).collect();
        priorities.sort_unstable();
        if priorities.iter().enumerate().any(|(i, p)| *p != i + 1) {
            let bad = self.vehicles.iter().position(|v| v.priority == 0 || v.priority > self.vehicles.len());
            let at = bad.map_or("/vehicles".to_string(), |i| format!("/vehicles/{i}/priority"));
            return Err(schema(at, "priorities must be exactly 1..N"));
        }

        let mut vehicles = Vec::with_capacity(self.vehicles.len());
        for (i, v) in self.vehicles.iter().enumerate() {
            let at = |k: &str| format!("/vehicles/{i}/{k}");
            if !MODEL_NAMES.contains(&v.model.as_str()) {
                return Err(schema(at("model"), format!("unknown model, expected one of {MODEL_NAMES:?}")));
            }
            let model = model_from_name(&v.model, ModelParams { speed: v.v, max_turn_rate: v.omega_max }).map_err(
                |e| {
                    let key = if v.model == "dubins" && !v.omega_max.is_some_and(|w| w > 0.0) { "omega_max" } else { "v" };
                    schema(at(key), e.to_string())
                },
            )?;
            if model.state_dim() != grid.ndim() {
                return Err(schema(
                    at("model"),
                    format!("{} has {} states; the grid has {} dimensions", v.model, model.state_dim(), grid.ndim()),
                ));
            }
            if v.x0.len() != model.state_dim() || v.x0.iter().any(|x| !x.is_finite()) {
                return Err(schema(at("x0"), format!("expected {} finite coordinates", model.state_dim())));
            }
            for (d, a) in grid.axes().iter().enumerate() {
                if !a.periodic && !(a.lower..=a.upper).contains(&v.x0[d]) {
                    return Err(schema(format!("/vehicles/{i}/x0/{d}"), "outside the grid bounds"));
                }
            }
            if !(v.est.is_finite() && v.sta.is_finite()) || v.est > v.sta {
                return Err(schema(at("est"), "earliest start must be finite and not after sta"));
            }
            let shape = Shape::Circle { center: v.target.center.clone(), radius: v.target.radius };
            shape.validate().map_err(|e| schema(at("target"), e.to_string()))?;
            if shape.dim() != model.position_dim() {
                return Err(schema(at("target/center"), format!("expected {} coordinates", model.position_dim())));
            }
            if v.target.heading.is_some() && grid.ndim() <= model.position_dim() {
                return Err(schema(at("target/heading"), "model has no heading coordinate"));
            }
            let k = model.position_dim();
            if self.obstacles.iter().any(|o| o.dim() == k && o.distance(&v.x0[..k]) <= 0.0) {
                return Err(schema(at("x0"), "starts inside a static obstacle"));
            }
            vehicles.push(VehicleSpec {
                model: v.model.clone(),
                speed: v.v,
                max_turn_rate: v.omega_max,
                x0: v.x0.clone(),
                earliest_start: v.est,
                scheduled_arrival: v.sta,
                target: TargetSpec { shape, heading: v.target.heading.map(|[a, b]| (a, b)) },
                priority: v.priority,
            });
        }

        Scenario::new(
            grid,
            self.obstacles.clone(),
            vehicles,
            self.danger_radius,
            numerics,
            PlanOptions { post_arrival_obstacle: self.options.post_arrival_obstacle },
        )
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    ScenarioFile::from_json(text)?.into_scenario()
}

/// Reads, parses and validates a scenario file. Returns the document too, so
/// callers can keep its notes.
pub fn load_scenario_file(path: impl AsRef<Path>) -> Result<(ScenarioFile, Scenario)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let doc = ScenarioFile::from_json(&text)?;
    let scenario = doc.into_scenario()?;
    Ok((doc, scenario))
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    load_scenario_file(path).map(|(_, s)| s)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    const FOUR: &str = include_str!("../../examples/four_dubins.json");

    fn edit(f: impl FnOnce(&mut serde_json::Value)) -> String {
        let mut v: serde_json::Value = serde_json::from_str(FOUR).unwrap();
        f(&mut v);
        v.to_string()
    }

    fn schema_path(text: &str) -> String {
        match parse_scenario(text) {
            Err(Error::Schema { path, .. }) => path,
            other => panic!("expected a schema error, got {other:?}"),
        }
    }

    #[test]
    fn bundled_scenario_values() {
        let s = parse_scenario(FOUR).unwrap();
        assert_eq!(s.vehicles.len(), 4);
        assert_eq!(s.vehicles[0].x0, vec![-0.5, 0.0, 0.0]);
        assert_eq!(s.vehicles[0].scheduled_arrival, 0.0);
        let v3 = &s.vehicles[2];
        assert_eq!(v3.x0[..2], [-0.6, 0.6]);
        assert!((v3.x0[2] - 7.0 * PI / 4.0).abs() < 1e-15);
        assert_eq!(v3.scheduled_arrival, 0.4);
        assert_eq!(s.grid.axes().iter().map(|a| a.count).collect::<Vec<_>>(), [81, 81, 50]);
        assert!(s.grid.axis(2).periodic);
        assert!(s.options.post_arrival_obstacle);
    }

    #[test]
    fn priorities_sorted_on_load() {
        let text = edit(|v| {
            let arr = v["vehicles"].as_array_mut().unwrap();
            arr.reverse();
        });
        let s = parse_scenario(&text).unwrap();
        assert_eq!(s.vehicles.iter().map(|v| v.priority).collect::<Vec<_>>(), [1, 2, 3, 4]);
        assert_eq!(s.vehicles[0].x0, vec![-0.5, 0.0, 0.0]);
    }

    #[test]
    fn negative_danger_radius_names_its_path() {
        assert_eq!(schema_path(&edit(|v| v["danger_radius"] = (-0.1).into())), "/danger_radius");
    }

    #[test]
    fn unknown_keys_rejected_with_path() {
        assert_eq!(schema_path(&edit(|v| v["colour"] = "red".into())), "/colour");
        assert_eq!(schema_path(&edit(|v| v["vehicles"][2]["mass"] = 1.0.into())), "/vehicles/2/mass");
        assert_eq!(schema_path(&edit(|v| v["grid"]["spacing"] = 1.0.into())), "/grid/spacing");
    }

    #[test]
    fn wrong_types_and_semantics_report_paths() {
        assert_eq!(schema_path(&edit(|v| v["vehicles"][1]["v"] = "fast".into())), "/vehicles/1/v");
        assert_eq!(schema_path(&edit(|v| v["vehicles"][0]["target"]["radius"] = 0.0.into())), "/vehicles/0/target");
        assert_eq!(schema_path(&edit(|v| v["vehicles"][3]["priority"] = 7.into())), "/vehicles/3/priority");
        assert_eq!(schema_path(&edit(|v| v["vehicles"][0]["x0"] = serde_json::json!([2.0, 0.0, 0.0]))), "/vehicles/0/x0/0");
        assert_eq!(schema_path(&edit(|v| v["grid"]["counts"] = serde_json::json!([81, 81]))), "/grid/counts");
        assert_eq!(schema_path(&edit(|v| v["numerics"]["order"] = 3.into())), "/numerics/order");
        assert_eq!(schema_path(&edit(|v| v["vehicles"][0]["model"] = "boat".into())), "/vehicles/0/model");
        assert_eq!(schema_path(&edit(|v| v["vehicles"][0]["est"] = 1.0.into())), "/vehicles/0/est");
        assert_eq!(schema_path(&edit(|v| v["obstacles"][0]["type"] = "hexagon".into())), "/obstacles/0/type");
        assert_eq!(
            schema_path(&edit(|v| v["vehicles"][0]["x0"] = serde_json::json!([0.0, 0.4, 0.0]))),
            "/vehicles/0/x0"
        );
    }

    #[test]
    fn syntax_errors_carry_line_and_column() {
        match parse_scenario("{\n  \"grid\": {\n    \"bounds\": [[1, 2] x\n") {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
        assert!(matches!(parse_scenario(&format!("{FOUR} extra")), Err(Error::Parse { .. })));
    }

    #[test]
    fn defaults_fill_optional_sections() {
        let text = edit(|v| {
            let o = v.as_object_mut().unwrap();
            o.remove("numerics");
            o.remove("options");
            o.remove("notes");
        });
        let s = parse_scenario(&text).unwrap();
        assert_eq!(s.numerics, NumericsConfig::default());
        assert!(s.options.post_arrival_obstacle);
    }

    #[test]
    fn document_round_trips_through_json() {
        let doc = ScenarioFile::from_json(FOUR).unwrap();
        assert_eq!(ScenarioFile::from_json(&doc.to_json()).unwrap(), doc);
    }

    #[test]
    fn missing_file_is_an_io_error() {
        assert!(matches!(load_scenario("/nonexistent/x.json"), Err(Error::Io { .. })));
    }
}
