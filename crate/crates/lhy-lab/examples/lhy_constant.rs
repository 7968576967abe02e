//! Evaluates the second-order coefficient from its defining integral and
//! compares it with the closed form `128/(15√π)`.
//!
//! ```text
//! cargo run --release --example lhy_constant
//! ```

use std::f64::consts::PI;

use lhy_lab::energy::{lhy_constant, lhy_integral, LHY_COEFFICIENT};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let integral = lhy_integral(0.5)?;
    let exact_integral = 8.0 * 2f64.sqrt() / 15.0;
    println!("∫ [t²(t√(t²+2) − t² − 1) + ½] dt     = {integral:.15}");
    println!(
        "8√2/15                            = {exact_integral:.15}  (diff {:.1e})",
        integral - exact_integral
    );
    let c = lhy_constant()?;
    let closed = 128.0 / (15.0 * PI.sqrt());
    println!("coefficient from the integral      = {c:.15}");
    println!(
        "128/(15√π)                         = {closed:.15}  (diff {:.1e})",
        c - closed
    );
    println!("library constant                   = {LHY_COEFFICIENT:.15}");
    // Without the counterterm the integrand tends to −½, so the integral
    // diverges linearly, which the dyadic tail test detects.
    match lhy_integral(0.0) {
        Ok(v) => println!("no counterterm: {v:.6e} (unexpectedly finite)"),
        Err(e) => println!("no counterterm: {e}"),
    }
    Ok(())
}
