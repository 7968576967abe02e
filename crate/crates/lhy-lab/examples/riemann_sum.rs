//! Compares the lattice sum of the constant-coupling dispersion integrand on
//! `2πℤ³/L` with its integral over the Bogoliubov annulus, for a doubling
//! sequence of box sizes.

use lhy_lab::energy::{g_sum_vs_integral, riemann_comparison};
use lhy_lab::kernels::PhysicalParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = PhysicalParams::from_gas_parameter(1e-10, 1.0, 0.1, 0.15)?;
    let side = 1.3e5;
    println!(
        "{:>10} {:>9} {:>14} {:>14} {:>11}",
        "L", "modes", "sum", "integral", "rel. diff"
    );
    for i in 0..4 {
        let c = riemann_comparison(&params, side * 2f64.powi(i))?;
        println!(
            "{:>10.3e} {:>9} {:>14.6e} {:>14.6e} {:>11.3e}",
            c.side,
            c.modes,
            c.lattice_sum,
            c.integral,
            c.discrepancy / c.integral
        );
    }
    let report = g_sum_vs_integral(&params, side)?;
    for s in &report.samples {
        println!("d(L)/d(2L) at L = {:.3e}: {:.3}", s.x, s.ratio);
    }
    println!("O(1/L) decay: {}", if report.pass { "yes" } else { "no" });
    Ok(())
}
