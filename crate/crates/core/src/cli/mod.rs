//! Scenario-file front end shared by the `clairaut` binary and the FFI crate.

mod run;
mod scenario;

pub use run::{
    integrate_geodesic, list_presets, run_scenario, CheckRecord, GeodesicRun, ReportDocument,
    RunError, RunOptions, EXIT_FAIL, EXIT_INPUT, EXIT_PASS,
};
pub use scenario::{
    GeodesicsBlock, InitialCondition, InputError, LoadedScenario, ScenarioFile, BUNDLED,
};

/// Loads, validates and applies overrides in one go.
pub fn load_scenario(path: &str, opts: &RunOptions) -> Result<LoadedScenario, InputError> {
    let (name, file) = ScenarioFile::load(path)?;
    let mut loaded = file.build(&name)?;
    loaded.apply(opts)?;
    Ok(loaded)
}

/// Same as [`load_scenario`] for scenario text already in memory.
pub fn load_scenario_str(text: &str, name: &str, opts: &RunOptions) -> Result<LoadedScenario, InputError> {
    let mut loaded = ScenarioFile::from_toml(text)?.build(name)?;
    loaded.apply(opts)?;
    Ok(loaded)
}
