//! Trial-state kernels of the dilute hard-sphere gas: cutoffs, the
//! short-range Jastrow profile, the effective potential, the Bogoliubov
//! coefficients and the correlation family built on top of them.

mod correlation;
mod cutoff;
mod z1;

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{adaptive_integrate, GridSpec, LatticeError, RadialProfile, Space};

pub use correlation::{
    correlation_set, solve_rho0, theta_and_z, CorrelationSet, GradedProfile, Invariants,
    PositionKernel, Rho0Solution,
};
pub use cutoff::{chi, phi, phi_profile, phi_shell_weight, smooth_cutoff, smooth_step};
pub use z1::{z1_check, z1_profile};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("Bogoliubov radicand is not positive at k = {k:.6e}: the parameters leave the dilute regime")]
    Radicand { k: f64 },
    #[error("cutoff calibration failed: {0}")]
    Calibration(String),
    #[error("condensate density iteration did not converge after {iterations} steps (relative residual {residual:.3e})")]
    Rho0NonConvergence { iterations: usize, residual: f64 },
    #[error(
        "‖σ‖² = {sigma_sq:.6e} is not below ρ/2 = {half_rho:.6e}: the gas is not dilute enough"
    )]
    NotDilute { sigma_sq: f64, half_rho: f64 },
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Physical parameters and the derived length scales.
///
/// `ℓ = a·x^{−δ}` is the range of the Jastrow factor and
/// `ℓ₀ = (ρa)^{−1/2}·x^{−ε}` the range of the Bogoliubov correlations, with
/// `x = ρa³`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub a: f64,
    pub rho: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub ell: f64,
    pub ell0: f64,
    /// Condensate density, once solved.
    pub rho0: Option<f64>,
}

impl PhysicalParams {
    pub fn new(a: f64, rho: f64, delta: f64, epsilon: f64) -> Result<Self, KernelError> {
        if !(a > 0.0 && a.is_finite() && rho > 0.0 && rho.is_finite()) {
            return Err(KernelError::InvalidParams(format!(
                "need a > 0 and ρ > 0, got a = {a}, ρ = {rho}"
            )));
        }
        let x = rho * a.powi(3);
        if x >= 1.0 {
            return Err(KernelError::InvalidParams(format!(
                "gas parameter ρa³ = {x} must be below 1"
            )));
        }
        if !(delta > 0.0 && epsilon > 0.0 && delta < epsilon) {
            return Err(KernelError::InvalidParams(format!(
                "need 0 < δ < ε, got δ = {delta}, ε = {epsilon}"
            )));
        }
        let ell = a * x.powf(-delta);
        let ell0 = (rho * a).powf(-0.5) * x.powf(-epsilon);
        if !(a < ell && ell < ell0) {
            return Err(KernelError::InvalidParams(format!(
                "scale hierarchy a < ℓ < ℓ₀ violated: a = {a}, ℓ = {ell:.6e}, ℓ₀ = {ell0:.6e}"
            )));
        }
        Ok(Self {
            a,
            rho,
            delta,
            epsilon,
            ell,
            ell0,
            rho0: None,
        })
    }

    /// Parameters at gas parameter `x = ρa³`.
    pub fn from_gas_parameter(
        x: f64,
        a: f64,
        delta: f64,
        epsilon: f64,
    ) -> Result<Self, KernelError> {
        Self::new(a, x / a.powi(3), delta, epsilon)
    }

    pub fn gas_parameter(&self) -> f64 {
        self.rho * self.a.powi(3)
    }

    /// Copy with the condensate density set.
    pub fn with_rho0(mut self, rho0: f64) -> Result<Self, KernelError> {
        if !(rho0 > 0.0 && rho0 <= self.rho) {
            return Err(KernelError::InvalidParams(format!(
                "need 0 < ρ₀ ≤ ρ, got ρ₀ = {rho0}, ρ = {}",
                self.rho
            )));
        }
        self.rho0 = Some(rho0);
        Ok(self)
    }

    /// The condensate density if solved, the total density otherwise.
    pub fn rho0_or_rho(&self) -> f64 {
        self.rho0.unwrap_or(self.rho)
    }
}

/// Discretisation knobs for the kernel construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridOptions {
    /// Position-space nodes per decade.
    pub points_per_decade: f64,
    /// Momentum-space nodes per decade.
    pub k_points_per_decade: f64,
    /// Sub-panels per backbone panel inside cutoff transition bands.
    pub band_refinement: usize,
    /// Upper momentum cutoff in units of `1/a`.
    pub k_max_over_inv_a: f64,
    /// Lower momentum cutoff in units of `√ρ`.
    pub k_min_over_sqrt_rho: f64,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            points_per_decade: 64.0,
            k_points_per_decade: 192.0,
            band_refinement: 6,
            k_max_over_inv_a: 40.0,
            k_min_over_sqrt_rho: 1e-7,
        }
    }
}

/// Position grid on `[0, 8ℓ₀]` with every kink and cutoff edge as a panel
/// edge and refined transition bands.
pub(crate) fn position_grid(
    params: &PhysicalParams,
    opts: &GridOptions,
) -> Result<crate::lattice::RadialGrid, KernelError> {
    let (a, l, l0) = (params.a, params.ell, params.ell0);
    let per_panel = crate::lattice::DEFAULT_ORDER as f64;
    let m = opts.band_refinement;
    Ok(
        GridSpec::log(a / 100.0, 8.0 * l0, opts.points_per_decade / per_panel)
            .with_origin()
            .with_breakpoints([
                a,
                2.0 * a,
                l,
                2.0 * l,
                3.0 * l,
                4.0 * l,
                l0,
                1.5 * l0,
                2.0 * l0,
                3.0 * l0,
                4.0 * l0,
            ])
            .with_band(l, 2.0 * l, m)
            .with_band(2.0 * l, 4.0 * l, m)
            .with_band(l0, 2.0 * l0, m)
            .with_band(2.0 * l0, 4.0 * l0, m)
            .build()?,
    )
}

/// Momentum grid from `k_min·√ρ` to `k_max/a`, with the zeros `jπ/a` of
/// the effective potential as panel edges and panels no wider than `0.5/a`.
/// It depends on the total density only, so it stays fixed while the
/// condensate density is iterated.
pub(crate) fn momentum_grid(
    params: &PhysicalParams,
    opts: &GridOptions,
) -> Result<crate::lattice::RadialGrid, KernelError> {
    let a = params.a;
    let per_panel = crate::lattice::DEFAULT_ORDER as f64;
    Ok(GridSpec::log(
        opts.k_min_over_sqrt_rho * params.rho.sqrt(),
        opts.k_max_over_inv_a / a,
        opts.k_points_per_decade / per_panel,
    )
    .with_breakpoints((1..=12).map(|j| j as f64 * PI / a))
    .with_max_width(0.5 / a)
    .build()?)
}

/// The short-range Jastrow profile `f_ℓ = 1 − ω_ℓ` and its gradient.
#[derive(Debug, Clone)]
pub struct JastrowPair {
    pub a: f64,
    pub ell: f64,
    pub f_ell: RadialProfile,
    pub omega_ell: RadialProfile,
    pub grad_f_ell: RadialProfile,
}

impl JastrowPair {
    pub fn new(a: f64, ell: f64) -> Result<Self, KernelError> {
        if !(a > 0.0 && ell > a) {
            return Err(KernelError::InvalidParams(format!(
                "need 0 < a < ℓ, got a = {a}, ℓ = {ell}"
            )));
        }
        let grid = Arc::new(
            GridSpec::log(a / 100.0, 8.0 * ell, 4.0)
                .with_origin()
                .with_breakpoints([a, 2.0 * ell, 3.0 * ell, 4.0 * ell])
                .with_band(2.0 * ell, 4.0 * ell, 6)
                .build()?,
        );
        let f = |r| jastrow_f(r, a, ell);
        let f_ell = RadialProfile::from_fn(grid.clone(), Space::Position, |r| f(r).0)?;
        let omega_ell = RadialProfile::from_fn(grid.clone(), Space::Position, |r| 1.0 - f(r).0)?
            .with_support_radius(4.0 * ell)?;
        let grad_f_ell = RadialProfile::from_fn(grid, Space::Position, |r| f(r).1)?;
        Ok(Self {
            a,
            ell,
            f_ell,
            omega_ell,
            grad_f_ell,
        })
    }

    /// `f_ℓ(r)` and its radial derivative, analytically.
    pub fn f(&self, r: f64) -> (f64, f64) {
        jastrow_f(r, self.a, self.ell)
    }

    /// `ω_ℓ(r) = 1 − f_ℓ(r)`.
    pub fn omega(&self, r: f64) -> f64 {
        1.0 - self.f(r).0
    }
}

/// `f_ℓ(r) = 1 − (a/r)χ(r/ℓ)` for `r ≥ a`, zero inside the core; returns
/// the value and the radial derivative.
pub fn jastrow_f(r: f64, a: f64, ell: f64) -> (f64, f64) {
    if r < a {
        return (0.0, 0.0);
    }
    let (c, c1, _) = chi(r / ell);
    let w = a / r;
    (1.0 - w * c, w * c / r - w * c1 / ell)
}

/// The Jastrow pair for the given parameters.
pub fn jastrow_short(params: &PhysicalParams) -> Result<JastrowPair, KernelError> {
    JastrowPair::new(params.a, params.ell)
}

/// `∫|∇f_ℓ|² dx` by adaptive quadrature on `[a, 2ℓ] ∪ [2ℓ, 4ℓ]`.
pub fn grad_f_norm_sq(pair: &JastrowPair) -> Result<f64, KernelError> {
    let (a, ell) = (pair.a, pair.ell);
    let integrand = |r: f64| 4.0 * PI * r * r * jastrow_f(r, a, ell).1.powi(2);
    let mut total = 0.0;
    for (lo, hi) in [(a, 2.0 * ell), (2.0 * ell, 4.0 * ell)] {
        total += adaptive_integrate(integrand, lo, hi, 0.0, 1e-14, 4000)
            .map_err(|e| KernelError::Quadrature(format!("∫|∇f_ℓ|²: {e}")))?
            .value;
    }
    Ok(total)
}

/// Fourier transform of the effective potential, `8π sin(ka)/k`, with the
/// limit `8πa` at `k = 0`.
pub fn effective_potential_hat(k: f64, a: f64) -> f64 {
    let x = k * a;
    if x.abs() < 1e-4 {
        8.0 * PI * a * (1.0 - x * x / 6.0 + x.powi(4) / 120.0)
    } else {
        8.0 * PI * x.sin() / k
    }
}

/// Fourier transform of `min(1, a/r)`, i.e. `4π sin(ka)/k³`.
pub fn omega_hat(k: f64, a: f64) -> f64 {
    effective_potential_hat(k, a) / (2.0 * k * k)
}

/// Intermediate quantities of the Bogoliubov coefficient at `X = ρ₀V̂/k²`.
struct SHatParts {
    s: f64,
    remainder: f64,
}

fn s_hat_parts(x: f64, k: f64) -> Result<SHatParts, KernelError> {
    let disc = 1.0 + 2.0 * x;
    if !(disc > 0.0) {
        return Err(KernelError::Radicand { k });
    }
    let sq = disc.sqrt();
    let h = 1.0 / (1.0 + x + sq);
    let xh = x * h;
    let y = xh * xh;
    if !(y < 1.0) {
        return Err(KernelError::Radicand { k });
    }
    let root = (1.0 - y).sqrt();
    let s = -xh / root;
    let remainder =
        x * x * (1.0 + 2.0 / (1.0 + sq)) / (2.0 * (1.0 + x + sq)) - xh * y / (root * (1.0 + root));
    Ok(SHatParts { s, remainder })
}

/// Bogoliubov coefficient `ŝ(k)` at condensate density `rho0`, with
/// `ŝ(0) = 0`. Evaluated in a cancellation-free form valid for all `k`.
pub fn s_hat(k: f64, rho0: f64, a: f64) -> Result<f64, KernelError> {
    if k == 0.0 {
        return Ok(0.0);
    }
    let x = rho0 * effective_potential_hat(k, a) / (k * k);
    Ok(s_hat_parts(x, k)?.s)
}

/// `ŝ(k) + ρ₀V̂_eff(k)/(2k²)`, the Fourier transform of `s + ρ₀ min(1, a/r)`,
/// evaluated without cancellation.
pub fn s_hat_remainder(k: f64, rho0: f64, a: f64) -> Result<f64, KernelError> {
    let x = rho0 * effective_potential_hat(k, a) / (k * k);
    Ok(s_hat_parts(x, k)?.remainder)
}

/// `ŝ(k)` at the parameters' condensate density (total density if not yet
/// solved).
pub fn bogoliubov_s_hat(k: f64, params: &PhysicalParams) -> Result<f64, KernelError> {
    if k < 0.0 {
        return Err(KernelError::InvalidParams(format!(
            "wavenumber must be non-negative, got {k}"
        )));
    }
    s_hat(k, params.rho0_or_rho(), params.a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn direct_s_hat(k: f64, rho0: f64, a: f64) -> f64 {
        // The defining expression with the sign of the effective potential.
        let v = effective_potential_hat(k, a);
        let e = (k.powi(4) + 2.0 * k * k * rho0 * v).sqrt();
        let d = k * k + rho0 * v - e;
        -v.signum() * d / ((rho0 * v).powi(2) - d * d).sqrt()
    }

    #[test]
    fn params_derive_scales_and_validate() {
        let p = PhysicalParams::from_gas_parameter(1e-6, 1.0, 0.1, 0.15).unwrap();
        assert_relative_eq!(p.ell, 10f64.powf(0.6), max_relative = 1e-14);
        assert_relative_eq!(p.ell0, 1e3 * 10f64.powf(0.9), max_relative = 1e-14);
        assert_relative_eq!(p.gas_parameter(), 1e-6, max_relative = 1e-14);
        assert!(PhysicalParams::from_gas_parameter(2.0, 1.0, 0.1, 0.15).is_err());
        assert!(PhysicalParams::from_gas_parameter(1e-6, 1.0, 0.2, 0.15).is_err());
        assert!(p.with_rho0(2e-6).is_err());
        assert_eq!(p.with_rho0(5e-7).unwrap().rho0_or_rho(), 5e-7);
    }

    #[test]
    fn jastrow_profile_values() {
        let pair = JastrowPair::new(1.0, 10.0).unwrap();
        assert_eq!(pair.f(0.5).0, 0.0);
        assert_eq!(pair.f(1.0).0, 0.0);
        assert_relative_eq!(pair.f(2.0).0, 0.5, max_relative = 1e-15);
        assert_eq!(pair.f(50.0).0, 1.0);
        for (&f, &w) in pair.f_ell.values().iter().zip(pair.omega_ell.values()) {
            assert!((0.0..=1.0).contains(&f) && (0.0..=1.0).contains(&w));
        }
        let h = 1e-6;
        for &r in &[1.5, 19.0, 25.0, 31.0, 39.0] {
            let fd = (pair.f(r + h).0 - pair.f(r - h).0) / (2.0 * h);
            assert!((fd - pair.f(r).1).abs() < 1e-8, "r = {r}");
        }
    }

    #[test]
    fn grad_f_norm_approaches_scattering_length() {
        let one = grad_f_norm_sq(&JastrowPair::new(1.0, 10.0).unwrap()).unwrap();
        let c = (one / (4.0 * PI) - 1.0) * 10.0;
        assert!(c.abs() < 1.0, "{c}");
        let big = grad_f_norm_sq(&JastrowPair::new(1.0, 1e6).unwrap()).unwrap();
        assert_relative_eq!(big, 4.0 * PI, max_relative = 1e-5);
        let scaled = grad_f_norm_sq(&JastrowPair::new(2.5, 25.0).unwrap()).unwrap();
        assert_relative_eq!(scaled, 2.5 * one, max_relative = 1e-12);
    }

    #[test]
    fn effective_potential_values() {
        assert_relative_eq!(effective_potential_hat(0.0, 1.0), 8.0 * PI);
        assert!(effective_potential_hat(PI, 1.0).abs() < 1e-14);
        assert_relative_eq!(
            effective_potential_hat(1.0, 1.0),
            8.0 * PI * 1f64.sin(),
            max_relative = 1e-15
        );
        assert_relative_eq!(8.0 * PI * 1f64.sin(), 21.148_472_5, max_relative = 1e-5);
        for i in 0..1000 {
            let k = i as f64 * 0.037;
            assert!(effective_potential_hat(k, 1.0).abs() <= 8.0 * PI * (1.0 + 1e-15));
        }
    }

    #[test]
    fn s_hat_matches_direct_formula_and_limits() {
        let rho0 = 1e-6;
        assert_eq!(s_hat(0.0, rho0, 1.0).unwrap(), 0.0);
        for &k in &[1e-4, 1e-3, 3e-3, 1e-2, 0.1] {
            let s = s_hat(k, rho0, 1.0).unwrap();
            assert!(s < 0.0);
            assert_relative_eq!(s, direct_s_hat(k, rho0, 1.0), max_relative = 1e-8);
        }
        // Large k: ŝ ≈ −ρ₀V̂/(2k²).
        for &k in &[0.5, 2.0, 4.0, 20.0] {
            let lead = -rho0 * effective_potential_hat(k, 1.0) / (2.0 * k * k);
            let s = s_hat(k, rho0, 1.0).unwrap();
            assert!(((s - lead) / lead).abs() < 50.0 * rho0 / (k * k), "k = {k}");
            let rem = s_hat_remainder(k, rho0, 1.0).unwrap();
            assert_relative_eq!(rem, s - lead, max_relative = 1e-6);
        }
        // Sign follows −V̂ beyond the first zero of the potential.
        assert!(s_hat(4.0, rho0, 1.0).unwrap() > 0.0);
    }

    #[test]
    fn s_hat_small_k_asymptote() {
        // ŝ ~ −(B/8)^{1/4}/√k with B = 8πaρ₀.
        let rho0 = 1e-6;
        let b = 8.0 * PI * rho0;
        for &k in &[1e-11, 1e-12] {
            let s = s_hat(k, rho0, 1.0).unwrap();
            let asym = -(b / 8.0).powf(0.25) / k.sqrt();
            assert_relative_eq!(s, asym, max_relative = 1e-3);
        }
    }

    #[test]
    fn radicand_violation_is_reported() {
        let r = s_hat(1.0, -1.0, 1.0);
        assert!(matches!(r, Err(KernelError::Radicand { .. })));
    }
}
