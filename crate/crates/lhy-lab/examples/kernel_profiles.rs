//! Builds the correlation kernels at one gas parameter and tabulates them:
//! the Jastrow profile and the six position kernels on logarithmic radii,
//! and the momentum kernels on logarithmic wavenumbers.
//!
//! ```text
//! cargo run --release --example kernel_profiles
//! ```

use lhy_lab::estimates::log_samples;
use lhy_lab::kernels::{
    jastrow_f, solve_rho0, CorrelationSet, GridOptions, PhysicalParams, PositionKernel,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = 1e-7;
    let opts = GridOptions::default();
    let params = PhysicalParams::from_gas_parameter(x, 1.0, 0.1, 0.15)?;
    let params = params.with_rho0(solve_rho0(&params, &opts, 0.0)?.rho0)?;
    let cs = CorrelationSet::build(&params, &opts)?;
    println!(
        "x = {x:.0e}: ℓ = {:.4}, ℓ₀ = {:.4e}, ∫σ̃ = {:.4e}",
        params.ell, params.ell0, cs.sigma_tilde_integral
    );

    let radii = log_samples(params.a * 1.5, 4.0 * params.ell0, 2);
    let columns: Vec<Vec<f64>> = PositionKernel::ALL
        .iter()
        .map(|&k| cs.position_kernel(k, &radii).map(|(v, _)| v))
        .collect::<Result<_, _>>()?;
    print!("{:>11} {:>10}", "r", "f_ell");
    for k in PositionKernel::ALL {
        print!(" {:>19}", k.label());
    }
    println!();
    for (i, &r) in radii.iter().enumerate() {
        print!("{r:>11.4e} {:>10.6}", jastrow_f(r, params.a, params.ell).0);
        for c in &columns {
            print!(" {:>19.6e}", c[i]);
        }
        println!();
    }

    let ks = log_samples(1e-2 * (params.rho * params.a).sqrt(), 3e1 / params.a, 2);
    println!(
        "\n{:>11} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "k", "s_hat", "sigma_hat", "eta_hat", "gamma_hat", "g_hat"
    );
    for k in ks {
        let at = |p: &lhy_lab::lattice::RadialProfile| p.evaluate(k).unwrap_or(f64::NAN);
        println!(
            "{k:>11.4e} {:>12.5e} {:>12.5e} {:>12.5e} {:>12.8} {:>12.8}",
            at(&cs.s_hat),
            at(&cs.sigma_hat),
            at(&cs.eta_hat),
            at(&cs.gamma_hat),
            at(&cs.g_hat)
        );
    }
    let inv = cs.invariants();
    println!(
        "\nsupport violations of σ̃ outside [ℓ, 2ℓ₀]: {}",
        inv.support_violation
    );
    println!("gradient identity mismatch: {:.2e}", inv.gradient_identity);
    Ok(())
}
