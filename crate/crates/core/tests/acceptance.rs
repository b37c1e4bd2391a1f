//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if a criterion fails that is not listed in `KNOWN_FAILURES`.

mod common;

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slitpaths::error_budget::{error_budget, MaterialDefaults};
use slitpaths::kernels::{self, huygens_compose, k1, k2_pair, k2_pair_direct, KernelBundle, OrderedSlitPair, SlitSubset};
use slitpaths::quadrature::{fresnel_segment, QuadratureSpec};
use slitpaths::sorkin::{self, Normalization};
use slitpaths::{validate, Preset, ValidatedSetup};

/// Criteria expected to fail with the shipped presets; see the README.
const KNOWN_FAILURES: &[&str] = &["2"];

/// Regression value of `κ(0)` for the electron preset.
const ELECTRON_KAPPA_0: f64 = -1.833948e-9;

struct Outcome {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn check(id: &'static str, body: impl FnOnce() -> Result<(bool, String), String>) -> Outcome {
    let start = Instant::now();
    let (pass, detail) = match body() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let outcome = Outcome { id, pass, detail };
    println!(
        "{} [{}] {} ({:.1} s)",
        if outcome.pass { "PASS" } else { "FAIL" },
        outcome.id,
        outcome.detail,
        start.elapsed().as_secs_f64()
    );
    outcome
}

fn setup(p: Preset) -> ValidatedSetup {
    validate(p.setup()).expect("presets validate")
}

fn s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn photon_anchor() -> Result<(bool, String), String> {
    let photon = setup(Preset::Photon);
    let t = Instant::now();
    let k0 = sorkin::kappa(&photon, 0.0, Normalization::CentralMax).map_err(s)?;
    let single = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let scan = sorkin::kappa_scan(&photon, -1.5e-3, 1.5e-3, 201, Normalization::CentralMax).map_err(s)?;
    let full = t.elapsed().as_secs_f64();
    let valid = scan.point_valid.iter().all(|&v| v);
    let pass = (1e-7..=1e-5).contains(&k0.abs()) && single < 30.0 && full < 600.0 && valid;
    Ok((
        pass,
        format!("photon |kappa(0)| = {:.3e} in [1e-7, 1e-5]; point {single:.2} s < 30 s; 201-point scan {full:.2} s < 600 s", k0.abs()),
    ))
}

fn microwave_anchor() -> Result<(bool, String), String> {
    let k0 = sorkin::kappa(&setup(Preset::Microwave), 0.0, Normalization::CentralMax).map_err(s)?;
    Ok((
        (1e-4..=1e-2).contains(&k0.abs()),
        format!("microwave |kappa(0)| = {:.3e} in [1e-4, 1e-2]", k0.abs()),
    ))
}

fn wavelength_monotonic() -> Result<(bool, String), String> {
    let photon = setup(Preset::Photon);
    let mut values = Vec::new();
    for lambda in [810e-9, 8.1e-6, 81e-6] {
        let s2 = photon.with_wavenumber(2.0 * PI / lambda).map_err(s)?;
        values.push(sorkin::kappa(&s2, 0.0, Normalization::CentralMax).map_err(s)?.abs());
    }
    Ok((
        values.windows(2).all(|w| w[1] > w[0]),
        format!("|kappa(0)| at 810 nm, 8.1 um, 81 um = {:.3e}, {:.3e}, {:.3e}", values[0], values[1], values[2]),
    ))
}

fn classical_cancellation() -> Result<(bool, String), String> {
    let classical = setup(Preset::Photon).with(|e| e.include_nonclassical = false).map_err(s)?;
    let spec = QuadratureSpec::default();
    let ys = sorkin::linspace(-1.5e-3, 1.5e-3, 201);
    let delta = sorkin::delta(&classical, Normalization::CentralMax, &[]).map_err(s)?;
    let mut worst: f64 = 0.0;
    for b in KernelBundle::evaluate_many(&classical, &ys, &spec).map_err(s)? {
        let b = b.map_err(s)?;
        worst = worst.max(b.epsilon_full().map_err(s)?.abs() / delta);
        worst = worst.max(b.epsilon_from_intensities().map_err(s)?.abs() / delta);
    }
    Ok((worst < 1e-10, format!("max |eps|/delta without loops = {worst:.2e} < 1e-10 over 201 points")))
}

fn linear_order() -> Result<(bool, String), String> {
    let photon = setup(Preset::Photon);
    let full = sorkin::epsilon_full(&photon, 0.0).map_err(s)?;
    let linear = sorkin::epsilon_linear(&photon, 0.0).map_err(s)?;
    let r = (full - linear).abs() / full.abs();
    Ok((r < 1e-3, format!("|eps_full - eps_linear|/|eps_full| at y = 0: {r:.2e} < 1e-3")))
}

fn k1_additivity() -> Result<(bool, String), String> {
    let photon = setup(Preset::Photon);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let subsets = SlitSubset::every(3);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for _ in 0..20 {
        let y = rng.gen_range(-1.5e-3..1.5e-3);
        for a in &subsets {
            for b in &subsets {
                if a.iter().any(|i| b.contains(i)) {
                    continue;
                }
                let union: Vec<usize> = a.iter().chain(b.iter()).collect();
                let ab = SlitSubset::new(&union).map_err(s)?;
                let ka = k1(&photon, a, y).map_err(s)?;
                let kb = k1(&photon, b, y).map_err(s)?;
                let kab = k1(&photon, &ab, y).map_err(s)?;
                worst = worst.max((kab - ka - kb).norm() / (ka.norm() + kb.norm()));
                cases += 1;
            }
        }
    }
    Ok((worst < 1e-13, format!("{cases} disjoint subset pairs at 20 positions: max relative defect {worst:.2e} < 1e-13")))
}

fn fresnel_vs_simpson() -> Result<(bool, String), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let p = rng.gen_range(-40.0..40.0);
        let q = rng.gen_range(-20.0..20.0);
        let a = rng.gen_range(-2.0..1.0);
        let b = a + rng.gen_range(0.1..2.0);
        let closed = fresnel_segment(p, q, a, b).map_err(s)?;
        worst = worst.max(common::rel(closed, common::fresnel_simpson(p, q, a, b)));
    }
    Ok((worst < 1e-8, format!("50 random segments: max relative difference {worst:.2e} < 1e-8")))
}

fn stationary_phase_validity() -> Result<(bool, String), String> {
    let photon = setup(Preset::Photon);
    let spec = QuadratureSpec::default();
    let pair = OrderedSlitPair::new(0, 1).map_err(s)?;
    let d = 100e-6;
    let mut errors = Vec::new();
    for kd in [200.0, 400.0] {
        let k = kd / d;
        let sp = k2_pair(&photon.with_wavenumber(k).map_err(s)?, pair, 0.0).map_err(s)?;
        let direct = k2_pair_direct(&photon, pair, 0.0, Some(k), &spec).map_err(s)?;
        errors.push(common::rel(sp, direct));
    }
    let bound = 5.0 / 200.0;
    Ok((
        errors[0] < bound && errors[1] < errors[0],
        format!(
            "A->B relative difference {:.2e} < {bound:.1e} at k*d = 200, {:.2e} at k*d = 400",
            errors[0], errors[1]
        ),
    ))
}

fn huygens() -> Result<(bool, String), String> {
    let k = 2.0 * PI / 1e-6;
    let spec = QuadratureSpec::default();
    let cases = [
        ([0.0, 0.0, 0.0], [0.2, 1e-4, -5e-5], 0.1, 30.0),
        ([0.0, 2e-5, 0.0], [0.3, -1e-5, 3e-5], 0.12, 30.0),
        ([0.0, 0.0, 0.0], [0.2, 0.0, 0.0], 0.05, 40.0),
    ];
    let mut worst: f64 = 0.0;
    for (r1, r3, x, zones) in cases {
        let p: f64 = 0.5 * k * (1.0 / x + 1.0 / (r3[0] - x));
        let half = (zones * PI / p).sqrt();
        let folded = huygens_compose(r1, r3, x, half, k, &spec).map_err(s)?;
        let direct = kernels::free_propagator(r1, r3, k).map_err(s)?;
        worst = worst.max(common::rel(folded, direct));
    }
    Ok((worst < 1e-2, format!("3 geometries with >= 30 Fresnel zones: max relative error {worst:.2e} < 1e-2")))
}

fn symmetry_and_invariance() -> Result<(bool, String), String> {
    let spec = QuadratureSpec::default();
    let mut mirror: f64 = 0.0;
    for (preset, half, n) in [(Preset::Photon, 1.5e-3, 201), (Preset::Microwave, 20.0, 41), (Preset::Electron, 1e-4, 5)] {
        let scan = sorkin::kappa_scan(&setup(preset), -half, half, n, Normalization::CentralMax).map_err(s)?;
        for i in 0..n / 2 {
            let (a, b) = (scan.kappa_full[i], scan.kappa_full[n - 1 - i]);
            if !(a.is_finite() && b.is_finite()) {
                return Err(format!("{preset}: invalid point at y = {}", scan.y_values[i]));
            }
            mirror = mirror.max((a - b).abs() / a.abs().max(b.abs()));
        }
    }

    let photon = setup(Preset::Photon);
    let y = 0.37e-3;
    let kappa = |v: &ValidatedSetup| sorkin::kappa(v, y, Normalization::CentralMax).map_err(s);
    let base = kappa(&photon)?;
    let finite = photon.with(|e| e.geometry.height_half = 1e-3).map_err(s)?;
    let finite_base = kappa(&finite)?;
    let variants = [
        (kappa(&photon.with(|e| e.include_z_factor = true).map_err(s)?)?, base),
        (kappa(&finite.with(|e| e.include_z_factor = true).map_err(s)?)?, finite_base),
        (kappa(&photon.with(|e| e.include_global_prefactor = true).map_err(s)?)?, base),
    ];
    let mut toggles: f64 = variants.iter().map(|(v, b)| ((v - b) / b).abs()).fold(0.0, f64::max);

    let factor = Complex64::from_polar(7.0, 0.3);
    let rescale = |mut b: KernelBundle| {
        b.k1.values_mut().for_each(|v| *v *= factor);
        b.k2_pairs.values_mut().for_each(|v| *v *= factor);
        b
    };
    let at = KernelBundle::evaluate(&photon, y, &spec).map_err(s)?;
    let centre = KernelBundle::evaluate(&photon, 0.0, &spec).map_err(s)?;
    let all = SlitSubset::all(3);
    let plain = at.epsilon_full().map_err(s)? / centre.intensity(&all);
    let scaled = rescale(at).epsilon_full().map_err(s)? / rescale(centre).intensity(&all);
    toggles = toggles.max(((scaled - plain) / plain).abs());

    Ok((
        mirror < 1e-9 && toggles < 1e-12,
        format!("mirror defect {mirror:.2e} < 1e-9 (photon, microwave, electron); toggle/rescale defect {toggles:.2e} < 1e-12"),
    ))
}

fn error_budget_numerics() -> Result<(bool, String), String> {
    let b = error_budget(&setup(Preset::Photon), &MaterialDefaults::default()).map_err(s)?;
    let lambda = 810e-9;
    let k = 2.0 * PI / lambda;
    let metal = (-2.0 * PI * 2.61 * (1e-6 / lambda)).exp();
    let stationary = 3.0 / (0.18 * k);
    let fraunhofer = 100e-6 / 0.18;
    let leading = metal.max(stationary).max(fraunhofer);
    let within = |x: f64, y: f64| x / y < 3.0 && y / x < 3.0;
    let pass = within(b.metal_transmission_rel, metal)
        && within(b.stationary_phase_rel, stationary)
        && within(b.stationary_phase_rel, 2.1e-6)
        && within(b.fraunhofer_rel, fraunhofer)
        && within(b.kappa_rel_leading, leading);
    Ok((
        pass,
        format!(
            "metal {:.2e} (hand {metal:.2e}), stationary {:.2e} (hand {stationary:.2e}), fraunhofer {:.2e} (hand d/L {fraunhofer:.2e}), leading {:.2e}",
            b.metal_transmission_rel, b.stationary_phase_rel, b.fraunhofer_rel, b.kappa_rel_leading
        ),
    ))
}

fn cli_determinism() -> Result<(bool, String), String> {
    let dir = tempfile::tempdir().map_err(s)?;
    let mut outputs = Vec::new();
    for (name, workers) in [("a.csv", "1"), ("b.csv", "4")] {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_slitpaths"))
            .args(["--preset", "photon", "--scan", "-1.5e-3", "1.5e-3", "201", "--out"])
            .arg(&out)
            .env("SLITPATHS_WORKERS", workers)
            .output()
            .map_err(s)?;
        if !status.status.success() {
            return Err(String::from_utf8_lossy(&status.stderr).into_owned());
        }
        outputs.push(std::fs::read(&out).map_err(s)?);
    }
    Ok((
        outputs[0] == outputs[1] && !outputs[0].is_empty(),
        format!("two photon scans ({} bytes, 1 and 4 workers) byte-identical", outputs[0].len()),
    ))
}

fn electron_snapshot() -> Result<(bool, String), String> {
    let k0 = sorkin::kappa(&setup(Preset::Electron), 0.0, Normalization::CentralMax).map_err(s)?;
    let r = (k0 / ELECTRON_KAPPA_0 - 1.0).abs();
    Ok((r < 1e-5, format!("electron kappa(0) = {k0:.6e}, snapshot {ELECTRON_KAPPA_0:.6e}, relative {r:.1e} < 1e-5")))
}

fn main() -> ExitCode {
    let outcomes = vec![
        check("1", photon_anchor),
        check("2", microwave_anchor),
        check("3", wavelength_monotonic),
        check("4", classical_cancellation),
        check("5", linear_order),
        check("6", k1_additivity),
        check("7", fresnel_vs_simpson),
        check("8", stationary_phase_validity),
        check("9", huygens),
        check("10", symmetry_and_invariance),
        check("11", error_budget_numerics),
        check("12", cli_determinism),
        check("electron-snapshot", electron_snapshot),
    ];
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    let unexpected: Vec<&str> = failed.iter().copied().filter(|id| !KNOWN_FAILURES.contains(id)).collect();
    for id in KNOWN_FAILURES {
        if !failed.contains(id) {
            println!("note: criterion {id} is listed as a known failure but passed");
        }
    }
    println!(
        "acceptance: {} passed, {} failed ({} known)",
        outcomes.len() - failed.len(),
        failed.len(),
        failed.len() - unexpected.len()
    );
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {}", unexpected.join(", "));
        ExitCode::FAILURE
    }
}
