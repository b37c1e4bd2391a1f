//! Systematic error estimates for κ and how they move with the mask.

use slitpaths::error_budget::{error_budget, MaterialDefaults};
use slitpaths::{validate, Preset};

fn main() -> slitpaths::Result<()> {
    let photon = validate(Preset::Photon.setup())?;
    for thickness in [0.25e-6, 0.5e-6, 1e-6, 2e-6] {
        let b = error_budget(&photon, &MaterialDefaults { thickness_m: thickness, ..Default::default() })?;
        println!(
            "mask {:>4.2} um: metal {:.2e}  stationary {:.2e}  fraunhofer {:.2e}  leading {:.2e} ({})",
            thickness * 1e6,
            b.metal_transmission_rel,
            b.stationary_phase_rel,
            b.fraunhofer_rel,
            b.kappa_rel_leading,
            b.leading()
        );
    }
    Ok(())
}
