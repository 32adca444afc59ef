//! Build a sweep from a config value and print it as CSV.

use spinring::cli::config::{Spacing, SweepConfig, TemperatureGrid};
use spinring::cli::sweep::sweep;
use spinring::model::ModelSpec;

fn main() -> spinring::Result<()> {
    let mut cfg = SweepConfig::new(ModelSpec::xxx(4, 1.0));
    cfg.temperatures = Some(TemperatureGrid::range(0.1, 10.0, 8, Spacing::Log));
    cfg.outputs = ["U_per_site", "C_wootters", "C_energy", "bell_measure"].map(String::from).to_vec();
    print!("{}", sweep(&cfg)?.to_csv());
    Ok(())
}
