//! Bogoliubov dispersion integrands, the Lee–Huang–Yang constant and the
//! Riemann-sum comparison on a momentum lattice.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::kernels::{effective_potential_hat, PhysicalParams};
use crate::lattice::{adaptive_integrate, lattice_sum, MomentumLattice};
use crate::report::{BoundReport, Criterion, Sample};

use super::EnergyError;

/// `128/(15√π)`, the second-order coefficient of the energy density.
pub const LHY_COEFFICIENT: f64 = 4.814_417_779_607_521;

/// Which effective coupling the dispersion integrand uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DispersionKind {
    /// The momentum-dependent coupling `ρ₀V̂_eff(k)`.
    F,
    /// The constant coupling `8πaρ₀`.
    G,
}

/// Per-mode energy `√(k⁴ + 2k²B) − k² − B + B²/(2k²)` with `B` the
/// coupling selected by `kind`.
///
/// Evaluated as `B³(E + 3k²) / (2k²(E + k²)(E + k² + B))`, `E = √(k⁴+2k²B)`,
/// which is algebraically identical and free of cancellation at every `k`.
pub fn dispersion(
    k: f64,
    params: &PhysicalParams,
    kind: DispersionKind,
) -> Result<f64, EnergyError> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(EnergyError::InvalidInput(format!(
            "wavenumber must be positive, got {k}"
        )));
    }
    let rho0 = params.rho0_or_rho();
    let b = match kind {
        DispersionKind::F => rho0 * effective_potential_hat(k, params.a),
        DispersionKind::G => 8.0 * PI * params.a * rho0,
    };
    dispersion_with_coupling(k, b)
}

fn dispersion_with_coupling(k: f64, b: f64) -> Result<f64, EnergyError> {
    let k2 = k * k;
    let radicand = k2 + 2.0 * b;
    if !(radicand > 0.0) {
        return Err(EnergyError::Radicand { k });
    }
    let e = k * radicand.sqrt();
    Ok(b * b * b * (e + 3.0 * k2) / (2.0 * k2 * (e + k2) * (e + k2 + b)))
}

/// The dimensionless integral `∫₀^∞ t²[t√(t²+2) − t² − 1 + c/t²] dt` for
/// counterterm weight `c`.
///
/// The integral is split into `[0, 1]` and dyadic pieces `[2ʲ, 2ʲ⁺¹]`.
/// Convergent integrands have geometrically shrinking pieces, and the
/// remainder is closed with the geometric tail. Pieces that stop shrinking
/// are reported as [`EnergyError::Divergent`].
pub fn lhy_integral(counterterm: f64) -> Result<f64, EnergyError> {
    // t²(E − t² − 1) = −t²/(E + t² + 1) with E = t√(t²+2), and
    // t²/(E+t²+1) = ½ − (1 + 2t²/(E+t²))/(2(E+t²+1)).
    let integrand = move |t: f64| {
        let e = t * (t * t + 2.0).sqrt();
        (counterterm - 0.5) + (1.0 + 2.0 * t * t / (e + t * t)) / (2.0 * (e + t * t + 1.0))
    };
    let piece = |lo: f64, hi: f64| -> Result<f64, EnergyError> {
        adaptive_integrate(integrand, lo, hi, 1e-300, 1e-14, 200)
            .map(|q| q.value)
            .map_err(|e| EnergyError::Quadrature {
                term: "LHY integral".into(),
                message: e.to_string(),
            })
    };
    const MAX_PIECES: i32 = 80;
    let mut total = piece(0.0, 1.0)?;
    let mut prev = f64::NAN;
    let mut stalled = 0;
    for j in 0..MAX_PIECES {
        let lo = 2f64.powi(j);
        let p = piece(lo, 2.0 * lo)?;
        total += p;
        let ratio = (p / prev).abs();
        if j >= 3 && ratio >= 0.9 {
            stalled += 1;
            if stalled >= 3 {
                return Err(EnergyError::Divergent {
                    what: format!("LHY integral with counterterm weight {counterterm}"),
                    at: 2.0 * lo,
                    piece: p,
                });
            }
        } else {
            stalled = 0;
        }
        if j >= 3 && ratio < 0.9 && p.abs() <= 1e-17 * total.abs() {
            return Ok(total + p * ratio / (1.0 - ratio));
        }
        prev = p;
    }
    Err(EnergyError::Quadrature {
        term: "LHY integral".into(),
        message: format!("tail not resolved after {MAX_PIECES} dyadic pieces"),
    })
}

/// The second-order coefficient `(8π)^{5/2} I₀ / (2(2π)³)` with
/// `I₀ = lhy_integral(1/2) = 8√2/15`, which equals `128/(15√π)`.
pub fn lhy_constant() -> Result<f64, EnergyError> {
    let i0 = lhy_integral(0.5)?;
    Ok((8.0 * PI).powf(2.5) * i0 / (2.0 * (2.0 * PI).powi(3)))
}

/// `4πaρ²(1 + (128/(15√π))√(ρa³))`.
pub fn lhy_reference(rho: f64, a: f64) -> f64 {
    4.0 * PI * a * rho * rho * (1.0 + LHY_COEFFICIENT * (rho * a.powi(3)).sqrt())
}

/// The annulus `ρ₀^{1/2+ε} ≤ |k| ≤ ρ₀^{1/2−ε}` on which the constant-coupling
/// integrand is compared with its lattice sum.
pub fn lhy_annulus(params: &PhysicalParams) -> (f64, f64) {
    let rho0 = params.rho0_or_rho();
    (
        rho0.powf(0.5 + params.epsilon),
        rho0.powf(0.5 - params.epsilon),
    )
}

/// `(2π)⁻³ ∫_{k_in ≤ |k| ≤ k_out} G(k) dk`.
pub fn annulus_integral(
    params: &PhysicalParams,
    k_in: f64,
    k_out: f64,
) -> Result<f64, EnergyError> {
    let b = 8.0 * PI * params.a * params.rho0_or_rho();
    let integrand = |k: f64| 4.0 * PI * k * k * dispersion_with_coupling(k, b).unwrap_or(f64::NAN);
    let mut cuts = vec![k_in];
    if b.sqrt() > k_in && b.sqrt() < k_out {
        cuts.push(b.sqrt());
    }
    cuts.push(k_out);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += adaptive_integrate(integrand, w[0], w[1], 0.0, 1e-13, 2000)
            .map_err(|e| EnergyError::Quadrature {
                term: "annulus integral of G".into(),
                message: e.to_string(),
            })?
            .value;
    }
    Ok(total / (2.0 * PI).powi(3))
}

/// One box size of the lattice-versus-integral comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannComparison {
    pub side: f64,
    pub modes: usize,
    pub lattice_sum: f64,
    pub integral: f64,
    pub discrepancy: f64,
}

/// Minimum number of lattice modes inside the annulus.
pub const MIN_ANNULUS_MODES: usize = 1000;

/// Compares `|Λ|⁻¹ Σ G(k)` over lattice momenta `k ∈ 2πℤ³/L` in the annulus
/// with the corresponding integral.
pub fn riemann_comparison(
    params: &PhysicalParams,
    side: f64,
) -> Result<RiemannComparison, EnergyError> {
    let (k_in, k_out) = lhy_annulus(params);
    let lattice = MomentumLattice::new(side, k_out)?;
    let b = 8.0 * PI * params.a * params.rho0_or_rho();
    let modes = lattice
        .modes()
        .iter()
        .filter(|n| {
            let p = lattice.momentum(n);
            let k = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            k >= k_in && k <= k_out
        })
        .count();
    if modes < MIN_ANNULUS_MODES {
        return Err(EnergyError::TooFewModes {
            found: modes,
            required: MIN_ANNULUS_MODES,
            side,
        });
    }
    let sum = lattice_sum(
        |p| {
            let k = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            if k >= k_in && k <= k_out {
                dispersion_with_coupling(k, b).unwrap_or(f64::NAN)
            } else {
                0.0
            }
        },
        &lattice,
        true,
    )?;
    let integral = annulus_integral(params, k_in, k_out)?;
    Ok(RiemannComparison {
        side,
        modes,
        lattice_sum: sum,
        integral,
        discrepancy: sum - integral,
    })
}

/// Runs the comparison at `L, 2L, 4L, 8L` and checks that each doubling
/// halves the discrepancy to within ±20%: the samples are the successive
/// ratios `|d(L)/d(2L)|`, tagged by the smaller box side.
pub fn g_sum_vs_integral(params: &PhysicalParams, side: f64) -> Result<BoundReport, EnergyError> {
    let comparisons = (0..4)
        .map(|i| riemann_comparison(params, side * 2f64.powi(i)))
        .collect::<Result<Vec<_>, _>>()?;
    let samples = comparisons
        .windows(2)
        .map(|w| Sample {
            x: w[0].side,
            ratio: (w[0].discrepancy / w[1].discrepancy).abs(),
        })
        .collect();
    Ok(BoundReport::new(
        "lattice sum of G over the annulus: O(1/L) Riemann error",
        Criterion::Band { lo: 1.6, hi: 2.4 },
        samples,
    ))
}
