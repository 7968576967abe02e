//! Sweeps the gas parameter, printing the energies, the extracted
//! second-order coefficient and the exponent of `|E_ρ − Ẽ_ρ|`.

use lhy_lab::energy::{density_sweep, exponent_fit, SweepColumn, SweepSettings, LHY_COEFFICIENT};
use lhy_lab::kernels::PhysicalParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let xs = [1e-6, 3e-7, 1e-7, 3e-8, 1e-8];
    let base = PhysicalParams::from_gas_parameter(xs[0], 1.0, 0.1, 0.15)?;
    let points = density_sweep(&xs, &base, &SweepSettings::default())?;
    println!(
        "{:>8} {:>14} {:>14} {:>10} {:>12}",
        "x", "E_rho", "tilde_E_rho", "c2_hat", "gap/rho^2.5"
    );
    let mut rows = Vec::new();
    for point in points {
        let p = point?;
        let r = p.row;
        println!(
            "{:>8.1e} {:>14.6e} {:>14.6e} {:>10.5} {:>12.4}",
            r.x,
            r.e_rho,
            r.tilde_e_rho,
            r.c2_hat,
            (r.e_rho - r.tilde_e_rho) / r.rho.powf(2.5)
        );
        rows.push(r);
    }
    let fit = exponent_fit(&rows, (SweepColumn::Rho, SweepColumn::EnergyGap))?;
    println!("128/(15√π) = {LHY_COEFFICIENT:.7}");
    println!(
        "|E − Ẽ| ∝ ρ^{:.4} (log residual {:.2e})",
        fit.slope, fit.residual
    );
    Ok(())
}
