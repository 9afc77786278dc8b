#![allow(dead_code)]

pub mod oracles;

use spp_core::io::ScenarioFile;
use spp_core::planner::Scenario;

pub const FOUR_DUBINS: &str = include_str!("../../examples/four_dubins.json");
pub const INTEGRATOR: &str = include_str!("../../examples/integrator_oracle.json");

pub fn four_dubins_doc() -> ScenarioFile {
    ScenarioFile::from_json(FOUR_DUBINS).unwrap()
}

/// The bundled four-vehicle scenario on a different grid resolution.
pub fn four_dubins_at(counts: [usize; 3]) -> ScenarioFile {
    let mut doc = four_dubins_doc();
    doc.grid.counts = counts.to_vec();
    doc
}

pub fn scenario(doc: &ScenarioFile) -> Scenario {
    doc.into_scenario().unwrap()
}

/// Keeps only the listed vehicles (by priority) and renumbers them 1..k in
/// the given order.
pub fn subset(doc: &ScenarioFile, priorities: &[usize]) -> ScenarioFile {
    let mut out = doc.clone();
    out.vehicles = priorities
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut v = doc.vehicles.iter().find(|v| v.priority == *p).unwrap().clone();
            v.priority = i + 1;
            v
        })
        .collect();
    out
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}
