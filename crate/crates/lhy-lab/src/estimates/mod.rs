//! Automated checks of the kernel estimates: each inequality `A ≤ C·B` with
//! an unspecified constant becomes a [`BoundReport`] of the ratio `A/B`
//! along a sweep of gas parameters.

mod appendix;
mod lemma_eta;
mod scattering;
mod sigma_s;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::kernels::{
    solve_rho0, CorrelationSet, GradedProfile, GridOptions, KernelError, PhysicalParams,
    PositionKernel,
};
use crate::lattice::RadialGrid;
use crate::report::{BoundReport, Criterion, Sample};

pub use appendix::{run_appendix_fourier_suite, APPENDIX_MANIFEST};
pub use lemma_eta::{lemma_eta_reports, run_lemma_eta_suite, LEMMA_ETA_MANIFEST};
pub use scattering::{run_scattering_suite, scattering_normalisation, SCATTERING_MANIFEST};
pub use sigma_s::{run_sigma_s_comparison, sigma_s_reports, SIGMA_S_MANIFEST};

/// The gas parameters and numerical settings shared by the suites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    /// Gas parameters `ρa³`.
    pub xs: Vec<f64>,
    pub a: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub grid: GridOptions,
    pub rho0_margin: f64,
    /// Radii per decade for pointwise checks.
    pub samples_per_decade: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            xs: vec![1e-5, 1e-6, 1e-7, 1e-8],
            a: 1.0,
            delta: 0.1,
            epsilon: 0.15,
            grid: GridOptions::default(),
            rho0_margin: 0.0,
            samples_per_decade: 256,
        }
    }
}

impl SweepSpec {
    /// Checks that the sweep has at least four points spanning three decades.
    pub fn validate(&self) -> Result<(), KernelError> {
        if self.xs.len() < 4 {
            return Err(KernelError::InvalidParams(format!(
                "a sweep needs at least 4 gas parameters, got {}",
                self.xs.len()
            )));
        }
        let (lo, hi) = self
            .xs
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            });
        if !(lo > 0.0) || hi / lo < 999.999 {
            return Err(KernelError::InvalidParams(format!(
                "the sweep must span at least three decades, got [{lo:e}, {hi:e}]"
            )));
        }
        if self.samples_per_decade == 0 {
            return Err(KernelError::InvalidParams(
                "samples_per_decade must be positive".into(),
            ));
        }
        Ok(())
    }

    fn params(&self, x: f64) -> Result<PhysicalParams, KernelError> {
        PhysicalParams::from_gas_parameter(x, self.a, self.delta, self.epsilon)
    }
}

/// Kernels at one sweep point, with pointwise samples on a log-spaced set
/// of radii and graded profiles on the quadrature grid.
#[derive(Debug, Clone)]
pub struct KernelSample {
    pub x: f64,
    pub params: PhysicalParams,
    pub cs: CorrelationSet,
    /// Log-spaced radii for pointwise checks, from `a/100` to `8ℓ₀`.
    pub radii: Vec<f64>,
    /// Values and radial derivatives of each kernel at `radii`.
    pub pointwise: HashMap<PositionKernel, (Vec<f64>, Vec<f64>)>,
    /// Each kernel on the quadrature grid.
    pub on_grid: HashMap<PositionKernel, GradedProfile>,
}

/// Log-spaced radii with `per_decade` points per decade covering `[lo, hi]`.
pub fn log_samples(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = (decades * per_decade as f64).ceil().max(1.0) as usize;
    (0..=n)
        .map(|i| lo * (hi / lo).powf(i as f64 / n as f64))
        .collect()
}

impl KernelSample {
    /// Solves the condensate density at `x` and evaluates every kernel.
    pub fn build(spec: &SweepSpec, x: f64) -> Result<Self, KernelError> {
        let params = spec.params(x)?;
        let solution = solve_rho0(&params, &spec.grid, spec.rho0_margin)?;
        let params = params.with_rho0(solution.rho0)?;
        let cs = CorrelationSet::build(&params, &spec.grid)?;
        let radii = log_samples(params.a / 100.0, 8.0 * params.ell0, spec.samples_per_decade);
        let mut pointwise = HashMap::new();
        let mut on_grid = HashMap::new();
        for kind in PositionKernel::ALL {
            pointwise.insert(kind, cs.position_kernel(kind, &radii)?);
            on_grid.insert(kind, cs.position_kernel_on_grid(kind)?);
        }
        Ok(Self {
            x,
            params,
            cs,
            radii,
            pointwise,
            on_grid,
        })
    }

    pub fn rho(&self) -> f64 {
        self.params.rho
    }

    /// `|log ρ|`.
    pub fn log_rho(&self) -> f64 {
        self.params.rho.ln().abs()
    }

    fn grid(&self) -> &RadialGrid {
        &self.cs.rgrid
    }

    fn graded(&self, kind: PositionKernel) -> &GradedProfile {
        &self.on_grid[&kind]
    }

    fn samples(&self, kind: PositionKernel) -> (&[f64], &[f64]) {
        let (v, d) = &self.pointwise[&kind];
        (v, d)
    }

    /// `∫_{lo ≤ |x| < hi} g(r) dx` over grid nodes; exact when `lo` and `hi`
    /// are panel edges.
    fn shell_integral(&self, values: &[f64], lo: f64, hi: f64) -> f64 {
        let g = self.grid();
        4.0 * std::f64::consts::PI
            * g.nodes()
                .iter()
                .zip(g.weights())
                .zip(values)
                .filter(|((r, _), _)| **r >= lo && **r < hi)
                .map(|((_, w), v)| w * v)
                .sum::<f64>()
    }

    /// Momentum-space samples of a spectral kernel, when available.
    fn hat(&self, kind: PositionKernel) -> Option<Vec<f64>> {
        let cs = &self.cs;
        let g = cs.gamma_hat.values();
        match kind {
            PositionKernel::S => Some(cs.s_hat.values().to_vec()),
            PositionKernel::Sigma => Some(cs.sigma_hat.values().to_vec()),
            PositionKernel::GammaMinusOne => Some(g.iter().map(|g| g - 1.0).collect()),
            PositionKernel::OneMinusGammaInverse => Some(g.iter().map(|g| 1.0 - 1.0 / g).collect()),
            PositionKernel::Nu => Some(cs.nu_hat.values().to_vec()),
            PositionKernel::SigmaTilde => None,
        }
    }
}

/// Builds the kernels for every sweep point (in parallel). Failures are
/// kept per point so that reports can carry them.
pub fn prepare_sweep(spec: &SweepSpec) -> Vec<Result<KernelSample, (f64, String)>> {
    spec.xs
        .par_iter()
        .map(|&x| KernelSample::build(spec, x).map_err(|e| (x, e.to_string())))
        .collect()
}

/// Evaluates `ratio` at every sweep point, turning failures into report
/// errors.
pub(crate) fn sweep_report<F>(
    name: &str,
    criterion: Criterion,
    samples: &[Result<KernelSample, (f64, String)>],
    ratio: F,
) -> BoundReport
where
    F: Fn(&KernelSample) -> Result<f64, String>,
{
    let mut measured = Vec::new();
    let mut errors = Vec::new();
    for s in samples {
        match s {
            Ok(k) => match ratio(k) {
                Ok(r) => measured.push(Sample { x: k.x, ratio: r }),
                Err(e) => errors.push(format!("x = {:.3e}: {e}", k.x)),
            },
            Err((x, e)) => errors.push(format!("x = {x:.3e}: kernel construction failed: {e}")),
        }
    }
    BoundReport::new(name, criterion, measured).with_errors(errors)
}

/// Manifest identifiers missing from a set of reports (a report covers an
/// identifier when its name is the identifier or continues it with `:` or a
/// space).
pub fn coverage_gaps<'a>(manifest: &[&'a str], reports: &[BoundReport]) -> Vec<&'a str> {
    manifest
        .iter()
        .filter(|id| {
            !reports.iter().any(|r| match r.name.strip_prefix(**id) {
                Some(rest) => rest.is_empty() || rest.starts_with([':', ' ']),
                None => false,
            })
        })
        .copied()
        .collect()
}

/// Every suite on one sweep, with an aggregate verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub reports: Vec<BoundReport>,
    /// Manifest entries without a report.
    pub missing: Vec<String>,
    pub pass: bool,
}

/// Runs the scattering, kernel-estimate, σ–s and Fourier-decay suites.
pub fn verify_all(spec: &SweepSpec) -> VerifyOutcome {
    let samples = match spec.validate() {
        Ok(()) => prepare_sweep(spec),
        Err(e) => spec.xs.iter().map(|&x| Err((x, e.to_string()))).collect(),
    };
    let mut reports = run_scattering_suite(spec.a, &[10.0, 100.0, 1000.0]);
    reports.extend(lemma_eta_reports(&samples));
    reports.extend(sigma_s_reports(spec, &samples));
    reports.extend(run_appendix_fourier_suite(spec));
    let mut missing: Vec<String> = Vec::new();
    for manifest in [
        SCATTERING_MANIFEST,
        LEMMA_ETA_MANIFEST,
        SIGMA_S_MANIFEST,
        APPENDIX_MANIFEST,
    ] {
        missing.extend(
            coverage_gaps(manifest, &reports)
                .into_iter()
                .map(String::from),
        );
    }
    let pass = missing.is_empty() && reports.iter().all(|r| r.pass);
    VerifyOutcome {
        reports,
        missing,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_samples_cover_the_range() {
        let r = log_samples(1e-2, 1e3, 256);
        assert_eq!(r.len(), 5 * 256 + 1);
        assert!((r[0] - 1e-2).abs() < 1e-18);
        assert!((r[r.len() - 1] / 1e3 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_spec_validation() {
        assert!(SweepSpec::default().validate().is_ok());
        let short = SweepSpec {
            xs: vec![1e-5, 1e-6, 1e-7],
            ..SweepSpec::default()
        };
        assert!(short.validate().is_err());
        let narrow = SweepSpec {
            xs: vec![1e-5, 5e-6, 2e-6, 1e-6],
            ..SweepSpec::default()
        };
        assert!(narrow.validate().is_err());
    }

    #[test]
    fn coverage_detects_missing_entries() {
        let r = BoundReport::bounded("alpha [s]: something", vec![]);
        let q = BoundReport::bounded("gamma: other", vec![]);
        let p = BoundReport::bounded("betamax", vec![]);
        assert_eq!(
            coverage_gaps(&["alpha", "beta", "gamma"], &[r, q, p]),
            vec!["beta"]
        );
    }
}
