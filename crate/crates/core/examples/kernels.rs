//! Classical and looped kernels at one detector position.

use slitpaths::kernels::{k1, k2_pair, k_total, OrderedSlitPair, SlitSubset};
use slitpaths::{validate, Preset};

fn main() -> slitpaths::Result<()> {
    let setup = validate(Preset::Photon.setup())?;
    let y = 2e-4;
    for subset in SlitSubset::every(3) {
        let classical = k1(&setup, &subset, y)?;
        let total = k_total(&setup, &subset, y)?;
        println!(
            "{:>4}: K1 = {classical:.4e}   |K - K1|/|K1| = {:.3e}",
            subset.to_string(),
            (total - classical).norm() / classical.norm()
        );
    }
    for pair in SlitSubset::all(3).ordered_pairs() {
        println!("{:>6}: K2 = {:.4e}", pair.to_string(), k2_pair(&setup, pair, y)?);
    }
    let ab = OrderedSlitPair::new(0, 1)?;
    println!("|K2(A->B)| / |K1(A)| = {:.3e}", k2_pair(&setup, ab, y)?.norm() / k1(&setup, &SlitSubset::single(0)?, y)?.norm());
    Ok(())
}
