//! Checks that the truncated scattering profile `f_ℓ` carries the
//! scattering length: `∫|∇f_ℓ|²` approaches `4πa` with an error of order
//! `a²/ℓ` as the cutoff length grows.
//!
//! ```text
//! cargo run --release --example scattering
//! ```

use std::f64::consts::PI;

use lhy_lab::estimates::{run_scattering_suite, scattering_normalisation};
use lhy_lab::kernels::{grad_f_norm_sq, JastrowPair};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = 1.0;
    let ells = [2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0];
    println!(
        "{:>6} {:>16} {:>14} {:>16}",
        "ℓ", "∫|∇f_ℓ|²", "− 4πa", "|·−4πa|·ℓ/a²"
    );
    for &ell in &ells {
        let e = grad_f_norm_sq(&JastrowPair::new(a, ell)?)?;
        println!(
            "{ell:>6} {e:>16.12} {:>14.6e} {:>16.10}",
            e - 4.0 * PI * a,
            scattering_normalisation(a, ell)?
        );
    }
    for r in run_scattering_suite(a, &ells) {
        println!(
            "{} {} (worst {:.4})",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.worst_ratio
        );
    }
    Ok(())
}
