//! Checks on the truncated scattering solution `f_ℓ`.

use std::f64::consts::PI;

use crate::kernels::{grad_f_norm_sq, jastrow_f, JastrowPair, KernelError};
use crate::report::{BoundReport, Criterion, Sample};

use super::log_samples;

pub const SCATTERING_MANIFEST: &[&str] = &[
    "scattering-normalisation",
    "scattering-gradient-pointwise",
    "scattering-boundary",
    "scattering-range",
];

/// `|∫|∇f_ℓ|² − 4πa| · ℓ/a²`.
pub fn scattering_normalisation(a: f64, ell: f64) -> Result<f64, KernelError> {
    let pair = JastrowPair::new(a, ell)?;
    let e = grad_f_norm_sq(&pair)?;
    Ok((e - 4.0 * PI * a).abs() * ell / (a * a))
}

/// Runs the scattering checks for each cutoff length in `ells`. Samples are
/// tagged by `a/ℓ`, so "toward small abscissa" means growing `ℓ`.
pub fn run_scattering_suite(a: f64, ells: &[f64]) -> Vec<BoundReport> {
    let trend = Criterion::default();
    let exact = Criterion::Threshold { limit: 0.0 };
    if !(a > 0.0) || ells.is_empty() || ells.iter().any(|&l| !(l > a)) {
        let msg = format!("need a > 0 and every ℓ > a, got a = {a}, ℓ = {ells:?}");
        return SCATTERING_MANIFEST
            .iter()
            .map(|id| BoundReport::failed(*id, trend, msg.clone()))
            .collect();
    }

    let mut norm = Vec::new();
    let mut errors = Vec::new();
    for &ell in ells {
        match scattering_normalisation(a, ell) {
            Ok(r) => norm.push(Sample {
                x: a / ell,
                ratio: r,
            }),
            Err(e) => errors.push(format!("ℓ = {ell}: {e}")),
        }
    }
    let normalisation = BoundReport::new(
        "scattering-normalisation: |∫|∇f_ℓ|² − 4πa| ℓ/a²",
        trend,
        norm,
    )
    .with_errors(errors);

    // Pointwise gradient against the support indicator of χ(·/ℓ): zero
    // gradient beyond 4ℓ, and |∇f_ℓ| x²/a bounded inside.
    let pointwise = ells
        .iter()
        .map(|&ell| {
            let worst = log_samples(a * (1.0 + 1e-9), 8.0 * ell, 256)
                .into_iter()
                .map(|r| {
                    let d = jastrow_f(r, a, ell).1.abs();
                    if r < 4.0 * ell {
                        d * r * r / a
                    } else if d == 0.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                })
                .fold(0.0f64, f64::max);
            Sample {
                x: a / ell,
                ratio: worst,
            }
        })
        .collect();
    let pointwise = BoundReport::new(
        "scattering-gradient-pointwise: sup_{x>a} |∇f_ℓ(x)| x² / (a 1_{|x|≤4ℓ})",
        trend,
        pointwise,
    );

    let boundary = ells
        .iter()
        .map(|&ell| Sample {
            x: a / ell,
            ratio: jastrow_f(a, a, ell).0.abs(),
        })
        .collect();
    let boundary = BoundReport::new("scattering-boundary: |f_ℓ(a)| = 0", exact, boundary);

    let range = ells
        .iter()
        .map(|&ell| {
            let worst = log_samples(a / 100.0, 8.0 * ell, 256)
                .into_iter()
                .map(|r| {
                    let f = jastrow_f(r, a, ell).0;
                    (-f).max(f - 1.0).max(0.0)
                })
                .fold(0.0f64, f64::max);
            Sample {
                x: a / ell,
                ratio: worst,
            }
        })
        .collect();
    let range = BoundReport::new(
        "scattering-range: distance of f_ℓ and 1 − f_ℓ from [0, 1]",
        exact,
        range,
    );

    vec![normalisation, pointwise, boundary, range]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimates::coverage_gaps;

    #[test]
    fn suite_passes_for_the_standard_cutoffs() {
        let reports = run_scattering_suite(1.0, &[10.0, 100.0, 1000.0]);
        assert!(coverage_gaps(SCATTERING_MANIFEST, &reports).is_empty());
        for r in &reports {
            assert!(
                r.pass,
                "{}: worst {} trend {}",
                r.name, r.worst_ratio, r.trend
            );
        }
    }

    #[test]
    fn normalisation_ratio_is_scale_invariant() {
        let r1 = scattering_normalisation(1.0, 50.0).unwrap();
        let r2 = scattering_normalisation(2.0, 100.0).unwrap();
        assert!((r1 - r2).abs() < 1e-8 * r1);
    }

    #[test]
    fn invalid_cutoffs_fail_every_report() {
        let reports = run_scattering_suite(1.0, &[0.5]);
        assert_eq!(reports.len(), SCATTERING_MANIFEST.len());
        assert!(reports.iter().all(|r| !r.pass));
    }
}
