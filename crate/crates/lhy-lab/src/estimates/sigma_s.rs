//! How far the cut-off kernel `σ` is from the Bogoliubov kernel `s`.

use std::f64::consts::PI;

use crate::kernels::{phi_profile, PositionKernel};
use crate::report::{BoundReport, Criterion, Sample};

use super::{prepare_sweep, sweep_report, KernelSample, SweepSpec};

pub const SIGMA_S_MANIFEST: &[&str] = &[
    "sigma-s-l2",
    "sigma-s-norm-gap",
    "sigma-tilde-sigma-l2",
    "sigma-s-epsilon-monotone",
];

/// Gas parameter at which two cutoff exponents are compared.
const EPSILON_PROBE_X: f64 = 1e-6;
/// How much smaller the second cutoff exponent is.
const EPSILON_STEP: f64 = 0.03;

/// `‖σ − s‖₂`: grid integral plus the `|s|² ~ r⁻⁵` tail beyond the grid,
/// where `σ` vanishes.
fn sigma_minus_s(k: &KernelSample) -> Result<f64, String> {
    let s = &k.graded(PositionKernel::S).value;
    let sigma = &k.graded(PositionKernel::Sigma).value;
    let diff: Vec<f64> = sigma
        .values()
        .iter()
        .zip(s.values())
        .map(|(a, b)| (a - b).powi(2))
        .collect();
    let r_max = k.grid().r_max();
    let edge = s.evaluate(r_max).ok_or("s undefined at the grid edge")?;
    let tail = 2.0 * PI * edge * edge * r_max.powi(3);
    Ok((k.grid().volume_integral(&diff) + tail).sqrt())
}

/// Builds the kernels on the sweep and runs every comparison.
pub fn run_sigma_s_comparison(spec: &SweepSpec) -> Vec<BoundReport> {
    if let Err(e) = spec.validate() {
        return SIGMA_S_MANIFEST
            .iter()
            .map(|id| BoundReport::failed(*id, Criterion::default(), e.to_string()))
            .collect();
    }
    sigma_s_reports(spec, &prepare_sweep(spec))
}

/// All comparisons on prepared kernels; the cutoff-exponent check builds
/// its own two kernel sets.
pub fn sigma_s_reports(
    spec: &SweepSpec,
    samples: &[Result<KernelSample, (f64, String)>],
) -> Vec<BoundReport> {
    let trend = Criterion::default();
    let mut out = Vec::new();

    out.push(sweep_report(
        "sigma-s-l2: ‖σ − s‖₂ / ρ^{3/4+ε}",
        trend,
        samples,
        |k| Ok(sigma_minus_s(k)? / k.rho().powf(0.75 + k.params.epsilon)),
    ));

    out.push(sweep_report(
        "sigma-s-norm-gap: |‖σ‖₂² − ‖s‖₂²| / ρ^{3/2+ε}",
        trend,
        samples,
        |k| {
            let sigma = k.graded(PositionKernel::Sigma).value.l2_norm_sq();
            let s_hat = k.cs.s_hat.values();
            let s =
                k.cs.momentum_integral(&s_hat.iter().map(|v| v * v).collect::<Vec<_>>());
            Ok((sigma - s).abs() / k.rho().powf(1.5 + k.params.epsilon))
        },
    ));

    out.push(sweep_report(
        "sigma-tilde-sigma-l2: ‖σ̃ − σ‖₂ / (ℓ₀⁻³ ‖σ̃‖₁ ‖φ(·/ℓ₀)‖₂) ≤ 1",
        // Equality holds for sign-definite σ̃; the slack covers the two
        // different quadrature grids.
        Criterion::Threshold { limit: 1.0 + 1e-6 },
        samples,
        |k| {
            let tilde = &k.graded(PositionKernel::SigmaTilde).value;
            let sigma = &k.graded(PositionKernel::Sigma).value;
            let diff: Vec<f64> = tilde
                .values()
                .iter()
                .zip(sigma.values())
                .map(|(a, b)| (a - b).powi(2))
                .collect();
            let lhs = k.grid().volume_integral(&diff).sqrt();
            // The profile is φ(·/ℓ₀)/ℓ₀³, so its norm is the right-hand
            // side without ‖σ̃‖₁.
            let phi = phi_profile(k.params.ell0).map_err(|e| e.to_string())?;
            Ok(lhs / (tilde.l1_norm() * phi.l2_norm_sq().sqrt()))
        },
    ));

    out.push(epsilon_monotonicity(spec));
    out
}

/// At fixed density, a larger cutoff exponent (hence a larger `ℓ₀`) brings
/// `σ` closer to `s`: the report records
/// `‖σ − s‖₂(ε) / ‖σ − s‖₂(ε − 0.03)` and requires it to be below one.
fn epsilon_monotonicity(spec: &SweepSpec) -> BoundReport {
    let name = format!(
        "sigma-s-epsilon-monotone: ‖σ − s‖₂ at ε = {:.2} over ε = {:.2}, x = {EPSILON_PROBE_X:e}",
        spec.epsilon,
        spec.epsilon - EPSILON_STEP
    );
    let criterion = Criterion::Threshold { limit: 1.0 };
    let smaller = SweepSpec {
        epsilon: spec.epsilon - EPSILON_STEP,
        ..spec.clone()
    };
    let pair = rayon::join(
        || KernelSample::build(spec, EPSILON_PROBE_X),
        || KernelSample::build(&smaller, EPSILON_PROBE_X),
    );
    let (big, small) = match pair {
        (Ok(b), Ok(s)) => (b, s),
        (Err(e), _) | (_, Err(e)) => return BoundReport::failed(name, criterion, e.to_string()),
    };
    match (sigma_minus_s(&big), sigma_minus_s(&small)) {
        (Ok(b), Ok(s)) => BoundReport::new(
            name,
            criterion,
            vec![Sample {
                x: EPSILON_PROBE_X,
                ratio: b / s,
            }],
        ),
        (Err(e), _) | (_, Err(e)) => BoundReport::failed(name, criterion, e),
    }
}
