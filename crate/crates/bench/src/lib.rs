//! Shared fixtures for the kernel benchmarks.

use chemoblow_core::sim::ModelParams;
use chemoblow_core::{pipeline, ExponentSet, ProblemSpec, RadialGrid, RadialState, RunConfig};

/// Frozen blow-up configuration, embedded so benches run from any directory.
pub const BLOWUP_TOML: &str = include_str!("../../../configs/blowup.toml");

pub struct Fixture {
    pub cfg: RunConfig,
    pub spec: ProblemSpec,
    pub exps: ExponentSet,
    pub grid: RadialGrid,
    pub params: ModelParams,
    pub state: RadialState,
}

/// Blow-up configuration on `cells` cells, with the initial state prepared.
pub fn fixture(cells: usize) -> Fixture {
    let cfg = RunConfig::from_toml_str(BLOWUP_TOML).expect("frozen config parses");
    let (spec, exps) = pipeline::prepare_spec(&cfg).expect("frozen config is admissible");
    let grid = RadialGrid::new(&spec.geom, cells);
    let params = ModelParams::from(&spec);
    let state = RadialState::from_spec(&spec, &grid).expect("initial state");
    Fixture { cfg, spec, exps, grid, params, state }
}
