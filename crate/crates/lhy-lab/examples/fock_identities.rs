//! Checks the operator identities behind the trial state on a 4-site ring
//! for the cutoffs 6, 8 and 10, and prints residuals against their
//! truncation budgets.
//!
//! ```text
//! cargo run --release --example fock_identities
//! ```

use lhy_lab::fock::{fock_sweep, FockCheckConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sweep = fock_sweep(&FockCheckConfig::default())?;
    for report in &sweep.reports {
        println!("nmax = {} (dimension {})", report.nmax, report.dimension);
        for r in &report.identities {
            println!(
                "  {} {:<24} residual {:.3e}  budget {:.3e}",
                if r.pass { "PASS" } else { "FAIL" },
                r.name,
                r.residual,
                r.tolerance
            );
        }
        let c = &report.coherent;
        println!(
            "  coherent ⟨N⟩ = {:.12} vs {:.3} (bound {:.2e}), TV {:.2e} (bound {:.2e})",
            c.n_expect, c.expected, c.n_bound, c.total_variation, c.tv_bound
        );
        let o = &report.observables;
        println!(
            "  trial ⟨N⟩ = {:.6}, ⟨K⟩ = {:.6}, excitations = {:.6}, pair prediction {:.6}",
            o.n_expect, o.k_expect, o.excitations, o.pair_prediction
        );
        for m in &report.squeezing {
            println!(
                "  mode {} |p| = {:.4}: occupation {:.10} vs sinh² η̂ = {:.10}, |γ̂² − σ̂² − 1| = {:.1e}",
                m.mode, m.momentum, m.occupation, m.expected, m.hyperbolic_residual
            );
        }
    }
    for m in &sweep.monotone {
        let r: Vec<String> = m.residuals.iter().map(|v| format!("{v:.2e}")).collect();
        let d: Vec<String> = m.defects.iter().map(|v| format!("{v:.2e}")).collect();
        println!(
            "{:<24} residuals [{}] {}  defects [{}] {}",
            m.name,
            r.join(", "),
            if m.residual_decreasing {
                "decreasing"
            } else {
                "NOT decreasing"
            },
            d.join(", "),
            if m.defect_decreasing {
                "decreasing"
            } else {
                "NOT decreasing"
            }
        );
    }
    println!("verdict: {}", if sweep.pass { "PASS" } else { "FAIL" });
    Ok(())
}
