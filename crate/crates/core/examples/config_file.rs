//! Running from a TOML description and writing CSV.

use slitpaths::config::parse_config;
use slitpaths::run::scan_csv;
use slitpaths::sorkin::scan_positions;
use slitpaths::validate;

const CONFIG: &str = r#"
wavelength_m = 633e-9
slit_centers_m = [-150e-6, 0.0, 150e-6]
slit_width_m = 40e-6
slit_half_height_m = 2e-3
source_distance_m = 0.5
screen_distance_m = 0.5
include_z_factor = true
normalization = "interference-sum"

[scan]
y_min_m = -1e-3
y_max_m = 1e-3
n_points = 9
"#;

fn main() -> slitpaths::Result<()> {
    let config = parse_config(CONFIG)?;
    let setup = validate(config.setup.clone())?;
    let ys = config.scan.expect("config has a scan").positions();
    let scan = scan_positions(&setup, &ys, config.normalization, &config.quadrature)?;
    print!("{}", scan_csv(&scan));
    for failure in &scan.metadata.failures {
        eprintln!("point {} invalid: {}", failure.index, failure.message);
    }
    Ok(())
}
