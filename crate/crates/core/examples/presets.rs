//! κ at the central maximum for each shipped preset.

use slitpaths::error_budget::{error_budget, MaterialDefaults};
use slitpaths::sorkin::{kappa, Normalization};
use slitpaths::{validate, Preset};

fn main() -> slitpaths::Result<()> {
    for preset in Preset::ALL {
        let setup = validate(preset.setup())?;
        let k = kappa(&setup, 0.0, Normalization::CentralMax)?;
        let budget = error_budget(&setup, &MaterialDefaults::default())?;
        println!("{preset:>10}: kappa(0) = {k:.4e}  (leading error {:.1e}, {})", budget.kappa_rel_leading, budget.leading());
        for note in preset.assumptions().iter().copied().chain(setup.warnings().iter().map(String::as_str)) {
            println!("{:>12}{note}", "");
        }
    }
    Ok(())
}
