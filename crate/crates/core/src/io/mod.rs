//! File formats: scenario documents, value slices and plan outputs.

mod scenario_file;
mod slice_file;
mod tables;

pub use scenario_file::{
    load_scenario, load_scenario_file, parse_scenario, GridDoc, NumericsDoc, OptionsDoc, ScenarioFile, TargetDoc,
    VehicleDoc,
};
pub use slice_file::{decode_slice, encode_slice, read_slice, write_slice, SLICE_MAGIC};
pub use tables::{
    fmt_f64, lst_summary_csv, parse_trajectory_csv, read_trajectory_csv, safety_report_json, trajectory_csv,
};
