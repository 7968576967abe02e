//! Density sweeps and log–log exponent fits.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernels::{
    grad_f_norm_sq, solve_rho0, CorrelationSet, GridOptions, Invariants, JastrowPair,
    PhysicalParams, Rho0Solution,
};

use super::{energy_breakdown, lhy_reference, EnergyBreakdown, EnergyError};

/// One density of a sweep. Serialized column names follow the sweep CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// Gas parameter `ρa³`.
    pub x: f64,
    pub rho: f64,
    pub rho0: f64,
    #[serde(rename = "E_rho")]
    pub e_rho: f64,
    #[serde(rename = "tilde_E_rho")]
    pub tilde_e_rho: f64,
    pub lhy_ref: f64,
    /// Jastrow-only energy at the Dyson range `ℓ = ρ^{−1/3}`.
    pub dyson_ref: f64,
    /// `(Ẽ/(4πaρ²) − 1)/√x`.
    pub c2_hat: f64,
}

impl SweepRow {
    /// `(E/(4πaρ²) − 1)/√x` for an arbitrary energy column.
    pub fn second_order_coefficient(energy: f64, rho: f64, a: f64) -> f64 {
        (energy / (4.0 * PI * a * rho * rho) - 1.0) / (rho * a.powi(3)).sqrt()
    }
}

/// Everything computed for one sweep density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub row: SweepRow,
    pub params: PhysicalParams,
    pub rho0_solution: Rho0Solution,
    pub breakdown: EnergyBreakdown,
    pub invariants: Invariants,
}

/// Numerical settings shared by all rows of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSettings {
    pub grid: GridOptions,
    /// Coefficient of the `ρ^{7/4−11ε−δ}` excess of `ρ₀ + ‖σ‖²` over `ρ`.
    pub rho0_margin: f64,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            grid: GridOptions::default(),
            rho0_margin: 0.0,
        }
    }
}

/// A failed sweep row, tagged by its gas parameter.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("sweep row at x = {x:.3e} failed: {source}")]
pub struct SweepRowError {
    pub x: f64,
    pub source: EnergyError,
}

/// `ρ²∫|∇f_ℓ|²` at `ℓ = ρ^{−1/3}`: the Jastrow-only energy density, which
/// behaves as `4πaρ²(1 + C(ρa³)^{1/3})`.
pub fn dyson_reference(rho: f64, a: f64) -> Result<f64, EnergyError> {
    let pair = JastrowPair::new(a, rho.powf(-1.0 / 3.0))?;
    Ok(rho * rho * grad_f_norm_sq(&pair)?)
}

/// Solves the condensate density at gas parameter `x`, builds the kernels
/// and evaluates the energies.
pub fn sweep_point(
    x: f64,
    base: &PhysicalParams,
    settings: &SweepSettings,
) -> Result<SweepPoint, EnergyError> {
    let params = PhysicalParams::from_gas_parameter(x, base.a, base.delta, base.epsilon)?;
    let solution = solve_rho0(&params, &settings.grid, settings.rho0_margin)?;
    let params = params.with_rho0(solution.rho0)?;
    let cs = CorrelationSet::build(&params, &settings.grid)?;
    let breakdown = energy_breakdown(&params, &cs)?;
    let (rho, a) = (params.rho, params.a);
    let row = SweepRow {
        x,
        rho,
        rho0: solution.rho0,
        e_rho: breakdown.total,
        tilde_e_rho: breakdown.tilde_total,
        lhy_ref: lhy_reference(rho, a),
        dyson_ref: dyson_reference(rho, a)?,
        c2_hat: SweepRow::second_order_coefficient(breakdown.tilde_total, rho, a),
    };
    Ok(SweepPoint {
        row,
        params,
        rho0_solution: solution,
        invariants: cs.invariants(),
        breakdown,
    })
}

/// Evaluates every gas parameter independently (in parallel). Rows that
/// fail are returned as errors in place; the others are unaffected.
///
/// The gas parameters must lie in `(0, 10⁻³]` and be strictly decreasing.
pub fn density_sweep(
    x_values: &[f64],
    base: &PhysicalParams,
    settings: &SweepSettings,
) -> Result<Vec<Result<SweepPoint, SweepRowError>>, EnergyError> {
    if x_values.is_empty() {
        return Err(EnergyError::InvalidInput(
            "sweep needs at least one gas parameter".into(),
        ));
    }
    if let Some(x) = x_values.iter().find(|&&x| !(x > 0.0 && x <= 1e-3)) {
        return Err(EnergyError::InvalidInput(format!(
            "gas parameter {x} outside (0, 1e-3]"
        )));
    }
    if x_values.windows(2).any(|w| w[1] >= w[0]) {
        return Err(EnergyError::InvalidInput(
            "gas parameters must be strictly decreasing".into(),
        ));
    }
    Ok(x_values
        .par_iter()
        .map(|&x| sweep_point(x, base, settings).map_err(|source| SweepRowError { x, source }))
        .collect())
}

/// Sweep quantities usable in an exponent fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepColumn {
    X,
    Rho,
    Rho0,
    ERho,
    TildeERho,
    LhyRef,
    DysonRef,
    C2Hat,
    /// `|E_ρ − Ẽ_ρ|`.
    EnergyGap,
}

impl SweepColumn {
    pub fn value(self, row: &SweepRow) -> f64 {
        match self {
            SweepColumn::X => row.x,
            SweepColumn::Rho => row.rho,
            SweepColumn::Rho0 => row.rho0,
            SweepColumn::ERho => row.e_rho,
            SweepColumn::TildeERho => row.tilde_e_rho,
            SweepColumn::LhyRef => row.lhy_ref,
            SweepColumn::DysonRef => row.dyson_ref,
            SweepColumn::C2Hat => row.c2_hat,
            SweepColumn::EnergyGap => (row.e_rho - row.tilde_e_rho).abs(),
        }
    }
}

/// Ordinary least squares of `log y` on `log x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in `log y`.
    pub residual: f64,
    pub points: usize,
}

/// Minimum number of points for an exponent fit.
pub const MIN_FIT_POINTS: usize = 4;

/// Fits `y = e^{intercept} x^{slope}`.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<FitResult, EnergyError> {
    if xs.len() != ys.len() {
        return Err(EnergyError::InvalidInput(
            "fit columns differ in length".into(),
        ));
    }
    if xs.len() < MIN_FIT_POINTS {
        return Err(EnergyError::InvalidInput(format!(
            "exponent fit needs at least {MIN_FIT_POINTS} points, got {}",
            xs.len()
        )));
    }
    for (column, values) in [("abscissa", xs), ("ordinate", ys)] {
        if let Some((row, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
        {
            return Err(EnergyError::NonPositive {
                column: column.into(),
                row,
                value,
            });
        }
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(EnergyError::InvalidInput("abscissae are all equal".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(FitResult {
        slope,
        intercept,
        residual,
        points: xs.len(),
    })
}

/// Fits one sweep column against another, e.g. `|E_ρ − Ẽ_ρ|` against `ρ`.
pub fn exponent_fit(
    rows: &[SweepRow],
    columns: (SweepColumn, SweepColumn),
) -> Result<FitResult, EnergyError> {
    let xs: Vec<f64> = rows.iter().map(|r| columns.0.value(r)).collect();
    let ys: Vec<f64> = rows.iter().map(|r| columns.1.value(r)).collect();
    fit_power_law(&xs, &ys).map_err(|e| match e {
        EnergyError::NonPositive { column, row, value } => EnergyError::NonPositive {
            column: format!(
                "{:?}",
                if column == "abscissa" {
                    columns.0
                } else {
                    columns.1
                }
            ),
            row,
            value,
        },
        other => other,
    })
}
