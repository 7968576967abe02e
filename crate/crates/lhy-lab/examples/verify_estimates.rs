//! Runs every bound-verification suite on the default sweep of gas
//! parameters and prints one line per inequality.
//!
//! ```text
//! cargo run --release --example verify_estimates
//! ```

use lhy_lab::estimates::{verify_all, SweepSpec};

fn main() {
    let spec = SweepSpec::default();
    let outcome = verify_all(&spec);
    for r in &outcome.reports {
        let ratios: Vec<String> = r
            .samples
            .iter()
            .map(|s| format!("{:.3e}", s.ratio))
            .collect();
        println!(
            "{} worst={:.3e} trend={:+.3} [{}] {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.worst_ratio,
            r.trend,
            ratios.join(" "),
            r.name
        );
        for e in &r.errors {
            println!("     error: {e}");
        }
    }
    if !outcome.missing.is_empty() {
        println!("missing: {:?}", outcome.missing);
    }
    let failed = outcome.reports.iter().filter(|r| !r.pass).count();
    println!(
        "{} reports, {} failed, verdict: {}",
        outcome.reports.len(),
        failed,
        if outcome.pass { "PASS" } else { "FAIL" }
    );
}
