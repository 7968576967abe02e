//! Solves the condensate density at one gas parameter and prints every term
//! of the trial-state energy next to its Bogoliubov reformulation and the
//! second-order reference.
//!
//! ```text
//! cargo run --release --example energy_breakdown -- 1e-7
//! ```

use lhy_lab::energy::{sweep_point, SweepSettings};
use lhy_lab::kernels::PhysicalParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x: f64 = match std::env::args().nth(1) {
        Some(arg) => arg.parse()?,
        None => 1e-7,
    };
    let base = PhysicalParams::from_gas_parameter(x, 1.0, 0.1, 0.15)?;
    let point = sweep_point(x, &base, &SweepSettings::default())?;
    let (p, b, row) = (&point.params, &point.breakdown, &point.row);
    let scale = 4.0 * std::f64::consts::PI * p.a * p.rho * p.rho;
    println!(
        "x = {x:.1e}: ρ = {:.6e}, ρ₀ = {:.10e}, ℓ = {:.4}, ℓ₀ = {:.4e}",
        p.rho, row.rho0, p.ell, p.ell0
    );
    println!(
        "ρ₀ solved in {} iterations, ‖σ‖² = {:.6e}",
        point.rho0_solution.iterations, point.rho0_solution.sigma_norm_sq
    );
    println!("{:>10} {:>16} {:>14}", "term", "value", "/ 4πaρ²");
    for (i, t) in b.terms().iter().enumerate() {
        println!(
            "{:>10} {:>16.8e} {:>14.6e}",
            format!("t{}", i + 1),
            t,
            t / scale
        );
    }
    println!(
        "{:>10} {:>16.8e} {:>14.10}",
        "E_rho",
        b.total,
        b.total / scale
    );
    let tt = &b.tilde_terms;
    for (name, v) in [
        ("‖∇θ‖²", tt.grad_theta),
        ("16πaρ₀‖s‖²", tt.s_norm),
        ("(g−1)*s", tt.g_s),
    ] {
        println!("{:>10} {:>16.8e} {:>14.6e}", name, v, v / scale);
    }
    println!(
        "{:>10} {:>16.8e} {:>14.10}",
        "Ẽ_rho",
        b.tilde_total,
        b.tilde_total / scale
    );
    println!(
        "{:>10} {:>16.8e} {:>14.10}",
        "LHY",
        b.lhy_ref,
        b.lhy_ref / scale
    );
    println!(
        "ĉ₂ = {:.5}, |E − Ẽ|/ρ^{{5/2}} = {:.4}",
        row.c2_hat,
        (b.total - b.tilde_total).abs() / p.rho.powf(2.5)
    );
    let inv = &point.invariants;
    println!(
        "invariants: hyperbolic {:.1e}, ν̂γ̂ = σ̂ {:.1e}, σ̂(0)/‖σ‖₁ {:.1e}, min ĝ {:.4}",
        inv.hyperbolic, inv.nu_gamma, inv.sigma_hat_zero, inv.g_min
    );
    Ok(())
}
