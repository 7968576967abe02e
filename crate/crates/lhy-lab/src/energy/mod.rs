//! The variational energy density of the trial state, its Bogoliubov
//! reformulation, the Lee–Huang–Yang constant and density sweeps.

mod dispersion;
mod sweep;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernels::{
    grad_f_norm_sq, jastrow_f, jastrow_short, theta_and_z, CorrelationSet, KernelError,
    PhysicalParams,
};
use crate::lattice::LatticeError;

pub use dispersion::{
    annulus_integral, dispersion, g_sum_vs_integral, lhy_annulus, lhy_constant, lhy_integral,
    lhy_reference, riemann_comparison, DispersionKind, RiemannComparison, LHY_COEFFICIENT,
    MIN_ANNULUS_MODES,
};
pub use sweep::{
    density_sweep, dyson_reference, exponent_fit, fit_power_law, sweep_point, FitResult,
    SweepColumn, SweepPoint, SweepRow, SweepRowError, SweepSettings,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnergyError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dispersion radicand is not positive at k = {k:.6e}")]
    Radicand { k: f64 },
    #[error("quadrature for {term} failed: {message}")]
    Quadrature { term: String, message: String },
    #[error("{what} diverges: dyadic pieces stop shrinking near t = {at:.3e} (piece {piece:.3e})")]
    Divergent { what: String, at: f64, piece: f64 },
    #[error(
        "only {found} lattice modes in the annulus at L = {side:.4e}; need at least {required}"
    )]
    TooFewModes {
        found: usize,
        required: usize,
        side: f64,
    },
    #[error("column {column} has a non-positive value {value:.6e} in row {row}")]
    NonPositive {
        column: String,
        row: usize,
        value: f64,
    },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// The three terms of the Bogoliubov reformulation of the energy:
/// `‖∇θ‖²`, `16πaρ₀‖s‖²` and `8πaρ₀((g−1)*s)(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TildeTerms {
    pub grad_theta: f64,
    pub s_norm: f64,
    pub g_s: f64,
}

impl TildeTerms {
    pub fn total(&self) -> f64 {
        self.grad_theta + self.s_norm + self.g_s
    }
}

/// Term-by-term energy density of the trial state.
///
/// `t1 … t7` are, in order, `ρ₀²∫|∇f_ℓ|²`, `2ρ₀‖σ‖²∫|∇f_ℓ|²`,
/// `∫|∇f_ℓ|²σ²`, `2∫f_ℓ∇f_ℓ·σ∇σ`, `∫f_ℓ²|∇σ|²`,
/// `2ρ₀∫|∇f_ℓ|²[(γ*σ) + (σ*σ)]` and `2ρ₀∫f_ℓ∇f_ℓ·∇σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
    pub t5: f64,
    pub t6: f64,
    pub t7: f64,
    pub total: f64,
    pub tilde_terms: TildeTerms,
    pub tilde_total: f64,
    pub lhy_ref: f64,
}

impl EnergyBreakdown {
    pub fn terms(&self) -> [f64; 7] {
        [
            self.t1, self.t2, self.t3, self.t4, self.t5, self.t6, self.t7,
        ]
    }
}

fn finite(term: &str, v: f64) -> Result<f64, EnergyError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EnergyError::Quadrature {
            term: term.into(),
            message: format!("non-finite value {v}"),
        })
    }
}

/// Evaluates the energy density of the trial state built from `cs` and its
/// Bogoliubov reformulation.
///
/// Position-space terms are radial quadratures on the correlation grid; the
/// convolutions `(γ−1)*σ` and `σ*σ` are inverse transforms of `(γ̂−1)σ̂` and
/// `σ̂²`, evaluated only where `∇f_ℓ ≠ 0`. The last reformulated term is the
/// momentum integral `(2π)⁻³∫(ĝ−1)ŝ`.
pub fn energy_breakdown(
    params: &PhysicalParams,
    cs: &CorrelationSet,
) -> Result<EnergyBreakdown, EnergyError> {
    let rho0 = cs.rho0();
    let (a, ell) = (params.a, params.ell);
    let grad_f_sq = grad_f_norm_sq(&jastrow_short(params)?)?;
    let sigma_sq = cs.sigma.value.l2_norm_sq();

    let grid = &cs.rgrid;
    let nodes = grid.nodes();
    let sigma = cs.sigma.value.values();
    let dsigma = cs.sigma.gradient.values();
    let (f, df): (Vec<f64>, Vec<f64>) = nodes.iter().map(|&r| jastrow_f(r, a, ell)).unzip();

    // Convolutions where the Jastrow gradient lives.
    let inner: Vec<usize> = (0..nodes.len()).filter(|&i| df[i] != 0.0).collect();
    let inner_r: Vec<f64> = inner.iter().map(|&i| nodes[i]).collect();
    let sh = cs.sigma_hat.values();
    let gamma_sigma: Vec<f64> = cs
        .gamma_hat
        .values()
        .iter()
        .zip(sh)
        .map(|(g, s)| (g - 1.0) * s)
        .collect();
    let sigma_sigma: Vec<f64> = sh.iter().map(|s| s * s).collect();
    let (gs_conv, _) = cs.spectral_to_position(&gamma_sigma, &inner_r);
    let (ss_conv, _) = cs.spectral_to_position(&sigma_sigma, &inner_r);
    let mut conv = vec![0.0; nodes.len()];
    for (j, &i) in inner.iter().enumerate() {
        conv[i] = sigma[i] + gs_conv[j] + ss_conv[j];
    }

    let integral = |term: &str, g: &dyn Fn(usize) -> f64| -> Result<f64, EnergyError> {
        let values: Vec<f64> = (0..nodes.len()).map(g).collect();
        finite(term, grid.volume_integral(&values))
    };
    let t1 = finite("t1", rho0 * rho0 * grad_f_sq)?;
    let t2 = finite("t2", 2.0 * rho0 * sigma_sq * grad_f_sq)?;
    let t3 = integral("t3", &|i| df[i] * df[i] * sigma[i] * sigma[i])?;
    let t4 = 2.0 * integral("t4", &|i| f[i] * df[i] * sigma[i] * dsigma[i])?;
    let t5 = integral("t5", &|i| f[i] * f[i] * dsigma[i] * dsigma[i])?;
    let t6 = 2.0 * rho0 * integral("t6", &|i| df[i] * df[i] * conv[i])?;
    let t7 = 2.0 * rho0 * integral("t7", &|i| f[i] * df[i] * dsigma[i])?;
    let total = t1 + t2 + t3 + t4 + t5 + t6 + t7;

    let tilde_terms = tilde_terms(params, cs)?;
    Ok(EnergyBreakdown {
        t1,
        t2,
        t3,
        t4,
        t5,
        t6,
        t7,
        total,
        tilde_total: tilde_terms.total(),
        tilde_terms,
        lhy_ref: lhy_reference(params.rho, a),
    })
}

/// `‖∇θ‖²`, `16πaρ₀‖s‖²` and `8πaρ₀(2π)⁻³∫(ĝ−1)ŝ`.
pub fn tilde_terms(
    params: &PhysicalParams,
    cs: &CorrelationSet,
) -> Result<TildeTerms, EnergyError> {
    let rho0 = cs.rho0();
    let a = params.a;
    let (theta, _) = theta_and_z(params, cs)?;
    let grad_theta = finite("‖∇θ‖²", theta.gradient_norm_sq())?;
    let s = cs.s_hat.values();
    let s_sq: Vec<f64> = s.iter().map(|v| v * v).collect();
    let g_s: Vec<f64> = cs
        .g_hat
        .values()
        .iter()
        .zip(s)
        .map(|(g, s)| (g - 1.0) * s)
        .collect();
    Ok(TildeTerms {
        grad_theta,
        s_norm: finite("‖s‖²", 16.0 * PI * a * rho0 * cs.momentum_integral(&s_sq))?,
        g_s: finite(
            "((g−1)*s)(0)",
            8.0 * PI * a * rho0 * cs.momentum_integral(&g_s),
        )?,
    })
}
