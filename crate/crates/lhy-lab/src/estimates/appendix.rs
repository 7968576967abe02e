//! Momentum-space decay of `ŝ` and its derivatives, and the bound relating
//! position-space weights `x_j^m` to discrete derivatives of Fourier
//! coefficients.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::kernels::{s_hat, s_hat_remainder, KernelError};
use crate::lattice::{discrete_derivative, ModeBlock};
use crate::report::{BoundReport, Criterion, Sample};

use super::{log_samples, SweepSpec};

pub const APPENDIX_MANIFEST: &[&str] = &[
    "s-hat-decay-phonon",
    "s-hat-decay-intermediate",
    "s-hat-decay-large-k",
    "s-hat-remainder-decay",
    "discrete-derivative-position",
];

/// Orders of differentiation checked for each envelope.
const ORDERS: [usize; 3] = [0, 1, 2];

/// `|∇^m f|` for a radial `f = F(|k|)`, with the derivatives of `F` taken
/// by central differences: `|F'|` for `m = 1` and the Frobenius norm
/// `√(F''² + 2(F'/k)²)` of the Hessian for `m = 2`.
fn radial_gradient_norm<F>(f: &F, k: f64, m: usize) -> Result<f64, KernelError>
where
    F: Fn(f64) -> Result<f64, KernelError>,
{
    match m {
        0 => Ok(f(k)?.abs()),
        1 => {
            let h = 1e-5 * k;
            Ok(((f(k + h)? - f(k - h)?) / (2.0 * h)).abs())
        }
        2 => {
            let h = 1e-3 * k;
            let (p, c, n) = (f(k + h)?, f(k)?, f(k - h)?);
            let d1 = (p - n) / (2.0 * h);
            let d2 = (p - 2.0 * c + n) / (h * h);
            Ok((d2 * d2 + 2.0 * (d1 / k).powi(2)).sqrt())
        }
        _ => Err(KernelError::InvalidParams(format!(
            "derivative order {m} not supported"
        ))),
    }
}

/// One decay envelope: wavenumber window and bound, both depending on `ρ`.
struct Envelope {
    id: &'static str,
    formula: &'static str,
    window: fn(f64) -> (f64, f64),
    bound: fn(f64, f64, usize) -> f64,
    remainder: bool,
}

const ENVELOPES: [Envelope; 4] = [
    Envelope {
        id: "s-hat-decay-phonon",
        formula: "sup_{k≤ρ^{1/2}} |∇^m ŝ(k)| / (ρ^{1/4} k^{-m-1/2})",
        window: |rho| (1e-3 * rho.sqrt(), rho.sqrt()),
        bound: |rho, k, m| rho.powf(0.25) * k.powf(-(m as f64) - 0.5),
        remainder: false,
    },
    Envelope {
        id: "s-hat-decay-intermediate",
        formula: "sup_{ρ^{1/2}≤k≤1} |∇^m ŝ(k)| / (ρ k^{-m-2})",
        window: |rho| (rho.sqrt(), 1.0),
        bound: |rho, k, m| rho * k.powf(-(m as f64) - 2.0),
        remainder: false,
    },
    Envelope {
        id: "s-hat-decay-large-k",
        formula: "sup_{k≥1} |∇^m ŝ(k)| / (ρ k^{-3})",
        window: |_| (1.0, 100.0),
        bound: |rho, k, _| rho * k.powi(-3),
        remainder: false,
    },
    Envelope {
        id: "s-hat-remainder-decay",
        formula: "sup_{k≥1} |∇^m (ŝ + ρ₀V̂/(2k²))| / (ρ² k^{-6})",
        window: |_| (1.0, 100.0),
        bound: |rho, k, _| rho * rho * k.powi(-6),
        remainder: true,
    },
];

/// Runs the decay envelopes on the sweep (with `ρ₀ = ρ`) and the
/// discrete-derivative bound on a test block.
pub fn run_appendix_fourier_suite(spec: &SweepSpec) -> Vec<BoundReport> {
    let trend = Criterion::default();
    let mut out = Vec::new();
    let a = spec.a;
    for env in &ENVELOPES {
        for m in ORDERS {
            let name = format!("{} [m={m}]: {}", env.id, env.formula);
            let results: Vec<Result<Sample, String>> = spec
                .xs
                .par_iter()
                .map(|&x| {
                    let rho = x / a.powi(3);
                    let f = |k: f64| {
                        if env.remainder {
                            s_hat_remainder(k, rho, a)
                        } else {
                            s_hat(k, rho, a)
                        }
                    };
                    let (lo, hi) = (env.window)(rho * a * a);
                    let mut worst = 0.0f64;
                    for k in log_samples(lo / a, hi / a, 64) {
                        let lhs = radial_gradient_norm(&f, k, m)
                            .map_err(|e| format!("x = {x:.3e}: {e}"))?;
                        let r = lhs / (env.bound)(rho, k, m);
                        if !r.is_finite() {
                            return Err(format!("x = {x:.3e}: non-finite ratio at k = {k:.3e}"));
                        }
                        worst = worst.max(r);
                    }
                    Ok(Sample { x, ratio: worst })
                })
                .collect();
            let (samples, errors): (Vec<_>, Vec<_>) = results.into_iter().partition(Result::is_ok);
            out.push(
                BoundReport::new(
                    name,
                    trend,
                    samples.into_iter().map(Result::unwrap).collect(),
                )
                .with_errors(errors.into_iter().map(|e| e.unwrap_err()).collect()),
            );
        }
    }
    out.push(discrete_derivative_report());
    out
}

/// Checks `|x_j^m f(x)| ≤ (π/2)^m |(δ_j^m f̂)ˇ(x)|` for `|x_j| < L/2` on a
/// Gaussian whose coefficients are negligible at the block boundary, for
/// every axis and `m ∈ {1, 2, 3}`. Samples are tagged by `m`; each ratio is
/// the worst left/right quotient over the sampled points.
fn discrete_derivative_report() -> BoundReport {
    let name = "discrete-derivative-position: |x_j^m f(x)| / ((π/2)^m |(δ_j^m f̂)ˇ(x)|) ≤ 1";
    let criterion = Criterion::Threshold { limit: 1.0 };
    let l: f64 = 1.0;
    let w = l / 8.0;
    let n = 14i64;
    let dims = [(2 * n + 1) as usize; 3];
    // f(x) = Σ over images of exp(−x²/(2w²)), with f̂(p) = (2π)^{3/2} w³ exp(−p²w²/2).
    let gauss = |p: [f64; 3]| {
        let p2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        (2.0 * PI).powf(1.5) * w.powi(3) * (-0.5 * p2 * w * w).exp()
    };
    let block = ModeBlock::from_fn(l, [-n; 3], dims, gauss);
    let points: Vec<f64> = (0..=24)
        .map(|i| l * (-0.49 + 0.98 * i as f64 / 24.0))
        .collect();
    let mut samples = Vec::new();
    for m in 1..=3usize {
        let mut worst = 0.0f64;
        for axis in 1..=3usize {
            let diff = match discrete_derivative(&block, axis, m) {
                Ok(d) => d,
                Err(e) => return BoundReport::failed(name, criterion, e.to_string()),
            };
            for &t in &points {
                let mut x = [0.13 * l, -0.07 * l, 0.05 * l];
                x[axis - 1] = t;
                let f = block.inverse_at(x).0;
                let (re, im) = diff.inverse_at(x);
                let rhs = (PI / 2.0).powi(m as i32) * re.hypot(im);
                let lhs = (t.powi(m as i32) * f).abs();
                worst = worst.max(lhs / rhs);
            }
        }
        samples.push(Sample {
            x: m as f64,
            ratio: worst,
        });
    }
    BoundReport::new(name, criterion, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimates::coverage_gaps;

    #[test]
    fn radial_hessian_of_a_quadratic() {
        // F(k) = k²: ∇²F = 2·I, Frobenius norm 2√3.
        let f = |k: f64| Ok(k * k);
        let h = radial_gradient_norm(&f, 0.7, 2).unwrap();
        assert!((h - 2.0 * 3f64.sqrt()).abs() < 1e-6);
        assert!((radial_gradient_norm(&f, 0.7, 1).unwrap() - 1.4).abs() < 1e-8);
    }

    #[test]
    fn discrete_derivative_bound_holds() {
        let r = discrete_derivative_report();
        assert!(r.pass, "worst {}", r.worst_ratio);
        // The bound is nearly sharp toward the cell edge.
        assert!(r.worst_ratio > 0.9);
    }

    #[test]
    fn suite_covers_its_manifest() {
        let reports = run_appendix_fourier_suite(&SweepSpec::default());
        assert!(coverage_gaps(APPENDIX_MANIFEST, &reports).is_empty());
        for r in &reports {
            assert!(
                r.pass,
                "{}: worst {} trend {} {:?}",
                r.name, r.worst_ratio, r.trend, r.errors
            );
        }
    }
}
