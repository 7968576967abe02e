//! The boundary kernel `z₁` produced by integrating `−Δω_{ℓ₀}` by parts.

use crate::lattice::{GridSpec, Oscillation};
use crate::report::{BoundReport, Criterion, Sample};
use std::f64::consts::PI;

use super::{chi, effective_potential_hat, KernelError, PhysicalParams};

/// `z₁(t) = 4a χ'(t)/t² − 2a(χ''(t) + 2χ'(t)/t)/t = −2aχ''(t)/t`, supported
/// in `2 ≤ t ≤ 4`.
pub fn z1_profile(t: f64, a: f64) -> f64 {
    if t <= 2.0 || t >= 4.0 {
        return 0.0;
    }
    -2.0 * a * chi(t).2 / t
}

/// Compares `2k²ω̂_{ℓ₀}(k) − V̂_eff(k)` with `ẑ₁(kℓ₀)` on a logarithmic
/// range of `kℓ₀ ∈ [10⁻², 10³]`. The left side is built from the transform
/// of `ω_{ℓ₀}(r) = min(1, a/r)χ(r/ℓ₀)`, the right side from `χ''`; each
/// sample records `|lhs − rhs|/(8πa)` and the report requires at most 1e-6.
pub fn z1_check(params: &PhysicalParams) -> Result<BoundReport, KernelError> {
    let (a, l0) = (params.a, params.ell0);
    let qs: Vec<f64> = (0..=50)
        .map(|i| 10f64.powf(-2.0 + 5.0 * i as f64 / 50.0))
        .collect();
    let ks: Vec<f64> = qs.iter().map(|q| q / l0).collect();

    // Left side: ω̂_{ℓ₀}(k) = (4π/k) ∫ r ω_{ℓ₀}(r) sin(kr) dr.
    let rgrid = GridSpec::log(a, 4.0 * l0, 4.0)
        .with_origin()
        .with_breakpoints([2.0 * l0, 3.0 * l0])
        .with_band(2.0 * l0, 4.0 * l0, 16)
        .with_max_width(0.25 * l0)
        .build()?;
    let r_omega: Vec<f64> = rgrid.sample(|r| r * (a / r).min(1.0) * chi(r / l0).0);
    let omega_sin = rgrid.oscillatory_integrals(&r_omega, &ks, Oscillation::Sin);

    // Right side: (4π/q) ∫₂⁴ t z₁(t) sin(qt) dt with t z₁(t) = −2aχ''(t).
    let tgrid = GridSpec::log(2.0, 4.0, 64.0)
        .with_max_width(1.0 / 32.0)
        .build()?;
    let tz: Vec<f64> = tgrid
        .nodes()
        .iter()
        .map(|&t| t * z1_profile(t, a))
        .collect();
    let sin_int = tgrid.oscillatory_integrals(&tz, &qs, Oscillation::Sin);

    let norm = 8.0 * PI * a;
    let samples = ks
        .iter()
        .zip(&omega_sin)
        .zip(qs.iter().zip(&sin_int))
        .map(|((&k, &os), (&q, &si))| {
            let lhs = 8.0 * PI * k * os - effective_potential_hat(k, a);
            let rhs = 4.0 * PI / q * si;
            Sample {
                x: q,
                ratio: (lhs - rhs).abs() / norm,
            }
        })
        .collect();
    Ok(BoundReport::new(
        "z1 boundary kernel: 2k²ω̂_ℓ₀ − V̂_eff = ẑ₁(kℓ₀)",
        Criterion::Threshold { limit: 1e-6 },
        samples,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_identity_holds() {
        let p = PhysicalParams::from_gas_parameter(1e-6, 1.0, 0.1, 0.15).unwrap();
        let r = z1_check(&p).unwrap();
        assert!(r.pass, "worst {}", r.worst_ratio);
    }

    #[test]
    fn small_q_limit_is_integral_of_z1() {
        // ∫z₁ = 4π∫t² z₁ dt = −8πa.
        let a = 1.7;
        let int = crate::lattice::adaptive_integrate(
            |t| 4.0 * PI * t * t * z1_profile(t, a),
            2.0,
            4.0,
            0.0,
            1e-13,
            2000,
        )
        .unwrap()
        .value;
        assert!((int + 8.0 * PI * a).abs() < 1e-10);
    }

    #[test]
    fn both_sides_scale_linearly_in_a() {
        let p1 = PhysicalParams::from_gas_parameter(1e-6, 1.0, 0.1, 0.15).unwrap();
        let p2 = PhysicalParams::from_gas_parameter(1e-6, 2.0, 0.1, 0.15).unwrap();
        let r1 = z1_check(&p1).unwrap();
        let r2 = z1_check(&p2).unwrap();
        assert!(r1.pass && r2.pass);
        for (a, b) in r1.samples.iter().zip(&r2.samples) {
            assert!((a.x - b.x).abs() <= 1e-12 * a.x);
        }
    }
}
