//! Configuration-driven runs: kernel dumps, single-point energies, density
//! sweeps, the estimate suites and the Fock checks, each writing
//! deterministic artifacts that embed the resolved configuration.

pub mod emit;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::energy::{
    density_sweep, exponent_fit, lhy_constant, riemann_comparison, sweep_point, FitResult,
    RiemannComparison, SweepColumn, SweepPoint, SweepRow, SweepSettings,
};
use crate::estimates::{verify_all, SweepSpec, VerifyOutcome};
use crate::fock::{fock_sweep, FockCheckConfig, FockSweep};
use crate::kernels::{
    jastrow_f, solve_rho0, theta_and_z, CorrelationSet, GridOptions, PhysicalParams, PositionKernel,
};

use emit::{to_csv, to_json, write_file};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read or write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid configuration: {0}")]
    Parse(String),
    #[error("invalid override `{assignment}`: {reason}")]
    Override { assignment: String, reason: String },
    #[error("{key}: {reason}")]
    Validation { key: String, reason: String },
    #[error("computation failed: {0}")]
    Computation(String),
    #[error("serialization failed: {0}")]
    Serialize(String),
}

/// The subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Dump every correlation kernel at one density as CSV.
    Kernels,
    /// Term-by-term energy density at one density.
    Energy,
    /// Energies along a density sweep plus exponent fits.
    Sweep,
    /// Every estimate suite, with an aggregate verdict.
    Verify,
    /// Operator identities on toy Fock spaces.
    Fock,
}

/// Physical parameters shared by every subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicsConfig {
    /// Scattering length.
    pub a: f64,
    /// Exponent of the Jastrow range `ℓ = a x^{−δ}`.
    pub delta: f64,
    /// Exponent of the Bogoliubov range `ℓ₀ = (ρa)^{−1/2} x^{−ε}`.
    pub epsilon: f64,
    /// Prescribed excess of `ρ₀ + ‖σ‖²` over `ρ`, in units of
    /// `ρ^{7/4−11ε−δ}`.
    pub rho0_margin: f64,
}

impl Default for PhysicsConfig {
    fn default() -> Self {
        Self {
            a: 1.0,
            delta: 0.1,
            epsilon: 0.15,
            rho0_margin: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelsConfig {
    /// Gas parameter `ρa³`.
    pub x: f64,
    /// Sample points per decade in radius and in wavenumber.
    pub points_per_decade: usize,
}

impl Default for KernelsConfig {
    fn default() -> Self {
        Self {
            x: 1e-7,
            points_per_decade: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnergyConfig {
    pub x: f64,
    /// Box side of an optional lattice-versus-integral comparison.
    pub lattice_side: Option<f64>,
}

impl Default for EnergyConfig {
    fn default() -> Self {
        Self {
            x: 1e-7,
            lattice_side: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Gas parameters, strictly decreasing.
    pub xs: Vec<f64>,
    /// Densities; when non-empty they replace `xs` (converted with `a`).
    pub rhos: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            xs: vec![1e-6, 3e-7, 1e-7, 3e-8, 1e-8],
            rhos: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Gas parameters; at least four spanning three decades.
    pub xs: Vec<f64>,
    /// Radii per decade for pointwise checks.
    pub samples_per_decade: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        let spec = SweepSpec::default();
        Self {
            xs: spec.xs,
            samples_per_decade: spec.samples_per_decade,
        }
    }
}

/// Everything a run needs; every field has a default and unknown keys are
/// rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub physics: PhysicsConfig,
    pub grid: GridOptions,
    pub kernels: KernelsConfig,
    pub energy: EnergyConfig,
    pub sweep: SweepConfig,
    pub verify: VerifyConfig,
    pub fock: FockCheckConfig,
}

fn invalid(key: &str, reason: impl Into<String>) -> CliError {
    CliError::Validation {
        key: key.into(),
        reason: reason.into(),
    }
}

fn check_x(key: &str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x <= 1e-3 {
        Ok(())
    } else {
        Err(invalid(key, format!("gas parameter {x} outside (0, 1e-3]")))
    }
}

impl RunConfig {
    /// Parses a JSON document and applies `key=value` overrides, where the
    /// key is a dotted path (e.g. `sweep.xs`) and the value is JSON
    /// (falling back to a plain string).
    pub fn from_json_with_overrides(text: &str, overrides: &[String]) -> Result<Self, CliError> {
        let base: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        let mut value =
            serde_json::to_value(&base).map_err(|e| CliError::Serialize(e.to_string()))?;
        for assignment in overrides {
            apply_override(&mut value, assignment)?;
        }
        serde_json::from_value(value).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_with_overrides(&text, overrides)
    }

    /// The sweep's gas parameters (from `sweep.rhos` when given).
    pub fn sweep_xs(&self) -> Vec<f64> {
        if self.sweep.rhos.is_empty() {
            self.sweep.xs.clone()
        } else {
            self.sweep
                .rhos
                .iter()
                .map(|r| r * self.physics.a.powi(3))
                .collect()
        }
    }

    pub fn validate(&self, command: Command) -> Result<(), CliError> {
        let p = &self.physics;
        if !(p.a > 0.0 && p.a.is_finite()) {
            return Err(invalid(
                "physics.a",
                format!("must be positive, got {}", p.a),
            ));
        }
        for (key, v) in [("physics.delta", p.delta), ("physics.epsilon", p.epsilon)] {
            if !(v > 0.0 && v < 0.5) {
                return Err(invalid(key, format!("must lie in (0, 1/2), got {v}")));
            }
        }
        match command {
            Command::Kernels => {
                check_x("kernels.x", self.kernels.x)?;
                if self.kernels.points_per_decade == 0 {
                    return Err(invalid("kernels.points_per_decade", "must be positive"));
                }
            }
            Command::Energy => {
                check_x("energy.x", self.energy.x)?;
                if let Some(l) = self.energy.lattice_side {
                    if !(l > 0.0 && l.is_finite()) {
                        return Err(invalid(
                            "energy.lattice_side",
                            format!("must be positive, got {l}"),
                        ));
                    }
                }
            }
            Command::Sweep => {
                let key = if self.sweep.rhos.is_empty() {
                    "sweep.xs"
                } else {
                    "sweep.rhos"
                };
                let xs = self.sweep_xs();
                if xs.is_empty() {
                    return Err(invalid(key, "must contain at least one value"));
                }
                for &x in &xs {
                    check_x(key, x)?;
                }
                if xs.windows(2).any(|w| w[1] >= w[0]) {
                    return Err(invalid(key, "values must be strictly decreasing"));
                }
            }
            Command::Verify => {
                if self.verify.xs.is_empty() {
                    return Err(invalid("verify.xs", "must contain at least one value"));
                }
                self.verify_spec()
                    .validate()
                    .map_err(|e| invalid("verify.xs", e.to_string()))?;
            }
            Command::Fock => self
                .fock
                .validate()
                .map_err(|e| invalid("fock", e.to_string()))?,
        }
        Ok(())
    }

    fn base_params(&self, x: f64) -> Result<PhysicalParams, CliError> {
        let p = &self.physics;
        PhysicalParams::from_gas_parameter(x, p.a, p.delta, p.epsilon)
            .map_err(|e| CliError::Computation(e.to_string()))
    }

    fn sweep_settings(&self) -> SweepSettings {
        SweepSettings {
            grid: self.grid,
            rho0_margin: self.physics.rho0_margin,
        }
    }

    pub fn verify_spec(&self) -> SweepSpec {
        SweepSpec {
            xs: self.verify.xs.clone(),
            a: self.physics.a,
            delta: self.physics.delta,
            epsilon: self.physics.epsilon,
            grid: self.grid,
            rho0_margin: self.physics.rho0_margin,
            samples_per_decade: self.verify.samples_per_decade,
        }
    }
}

/// Sets a dotted key in a JSON object tree; intermediate objects must
/// exist, so misspelt sections are reported rather than created.
fn apply_override(root: &mut Value, assignment: &str) -> Result<(), CliError> {
    let fail = |reason: String| CliError::Override {
        assignment: assignment.into(),
        reason,
    };
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| fail("expected key=value".into()))?;
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.into()));
    let parts: Vec<&str> = key.split('.').collect();
    let mut node = root;
    for (depth, part) in parts.iter().enumerate() {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| fail(format!("`{}` is not a section", parts[..depth].join("."))))?;
        if depth + 1 == parts.len() {
            if !obj.contains_key(*part) {
                return Err(fail(format!("unknown key `{key}`")));
            }
            obj.insert((*part).to_string(), value);
            return Ok(());
        }
        node = obj
            .get_mut(*part)
            .ok_or_else(|| fail(format!("unknown section `{}`", parts[..=depth].join("."))))?;
    }
    Err(fail("empty key".into()))
}

/// Files written by a run and whether its checks passed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    /// Only meaningful for `verify` (and informative for `fock`); always
    /// true for data-producing commands.
    pub pass: bool,
    /// One-line human summary.
    pub summary: String,
}

#[derive(Serialize)]
struct Artifact<'a, T: Serialize> {
    command: &'static str,
    config: &'a RunConfig,
    #[serde(flatten)]
    result: T,
}

/// Either a value or the error that prevented it.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
enum Outcome<T> {
    Ok(T),
    Error(String),
}

impl<T, E: std::fmt::Display> From<Result<T, E>> for Outcome<T> {
    fn from(r: Result<T, E>) -> Self {
        match r {
            Ok(v) => Outcome::Ok(v),
            Err(e) => Outcome::Error(e.to_string()),
        }
    }
}

/// Validates the configuration and runs one subcommand, writing its
/// artifacts to `out_dir` (created if missing).
pub fn run(command: Command, config: &RunConfig, out_dir: &Path) -> Result<RunOutcome, CliError> {
    config.validate(command)?;
    std::fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    match command {
        Command::Kernels => run_kernels(config, out_dir),
        Command::Energy => run_energy(config, out_dir),
        Command::Sweep => run_sweep(config, out_dir),
        Command::Verify => run_verify(config, out_dir),
        Command::Fock => run_fock(config, out_dir),
    }
}

fn log_points(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    crate::estimates::log_samples(lo, hi, per_decade)
}

fn run_kernels(config: &RunConfig, out: &Path) -> Result<RunOutcome, CliError> {
    let comp = |e: &dyn std::fmt::Display| CliError::Computation(e.to_string());
    let params = config.base_params(config.kernels.x)?;
    let solution =
        solve_rho0(&params, &config.grid, config.physics.rho0_margin).map_err(|e| comp(&e))?;
    let params = params.with_rho0(solution.rho0).map_err(|e| comp(&e))?;
    let cs = CorrelationSet::build(&params, &config.grid).map_err(|e| comp(&e))?;
    let per = config.kernels.points_per_decade;

    let radii = log_points(params.a / 100.0, 8.0 * params.ell0, per);
    let mut columns: Vec<Vec<f64>> = vec![radii.clone()];
    let mut header = vec!["r".to_string(), "f_ell".into(), "omega_ell".into()];
    columns.push(
        radii
            .iter()
            .map(|&r| jastrow_f(r, params.a, params.ell).0)
            .collect(),
    );
    columns.push(
        radii
            .iter()
            .map(|&r| 1.0 - jastrow_f(r, params.a, params.ell).0)
            .collect(),
    );
    for kind in PositionKernel::ALL {
        let (v, _) = cs.position_kernel(kind, &radii).map_err(|e| comp(&e))?;
        header.push(kind.label().into());
        columns.push(v);
    }
    let (theta, z) = theta_and_z(&params, &cs).map_err(|e| comp(&e))?;
    for (name, profile) in [("theta", &theta), ("z", &z)] {
        header.push(name.into());
        columns.push(
            radii
                .iter()
                .map(|&r| profile.value.evaluate(r).unwrap_or(f64::NAN))
                .collect(),
        );
    }
    let position = transpose(&columns);

    let ks = log_points(cs.kgrid.r_min(), cs.kgrid.r_max(), per);
    let spectral = [
        ("s_hat", &cs.s_hat),
        ("sigma_hat", &cs.sigma_hat),
        ("eta_hat", &cs.eta_hat),
        ("gamma_hat", &cs.gamma_hat),
        ("nu_hat", &cs.nu_hat),
        ("g_hat", &cs.g_hat),
    ];
    let mut kcols = vec![ks.clone()];
    let mut kheader = vec!["k"];
    for (name, profile) in spectral {
        kheader.push(name);
        kcols.push(
            ks.iter()
                .map(|&k| profile.evaluate(k).unwrap_or(f64::NAN))
                .collect(),
        );
    }
    let momentum = transpose(&kcols);

    let pos_path = out.join("kernels_position.csv");
    let mom_path = out.join("kernels_momentum.csv");
    let meta_path = out.join("kernels.json");
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    write_file(&pos_path, &to_csv(&header_refs, &position))?;
    write_file(&mom_path, &to_csv(&kheader, &momentum))?;

    #[derive(Serialize)]
    struct KernelMeta<'a> {
        params: PhysicalParams,
        rho0_iterations: usize,
        sigma_tilde_integral: f64,
        position_csv: &'a str,
        momentum_csv: &'a str,
    }
    let meta = Artifact {
        command: "kernels",
        config,
        result: KernelMeta {
            params,
            rho0_iterations: solution.iterations,
            sigma_tilde_integral: cs.sigma_tilde_integral,
            position_csv: "kernels_position.csv",
            momentum_csv: "kernels_momentum.csv",
        },
    };
    write_file(&meta_path, &to_json(&meta)?)?;
    Ok(RunOutcome {
        files: vec![pos_path, mom_path, meta_path],
        pass: true,
        summary: format!(
            "kernels at x = {:.3e}: {} radii, {} wavenumbers, rho0/rho = {:.9}",
            config.kernels.x,
            radii.len(),
            ks.len(),
            params.rho0_or_rho() / params.rho
        ),
    })
}

fn transpose(columns: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = columns.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect()
}

fn run_energy(config: &RunConfig, out: &Path) -> Result<RunOutcome, CliError> {
    let base = config.base_params(config.energy.x)?;
    let point = sweep_point(config.energy.x, &base, &config.sweep_settings())
        .map_err(|e| CliError::Computation(e.to_string()))?;
    let riemann: Option<Outcome<RiemannComparison>> = config
        .energy
        .lattice_side
        .map(|side| riemann_comparison(&point.params, side).into());

    #[derive(Serialize)]
    struct EnergyResult<'a> {
        point: &'a SweepPoint,
        #[serde(skip_serializing_if = "Option::is_none")]
        riemann: Option<Outcome<RiemannComparison>>,
    }
    let path = out.join("energy.json");
    let artifact = Artifact {
        command: "energy",
        config,
        result: EnergyResult {
            point: &point,
            riemann,
        },
    };
    write_file(&path, &to_json(&artifact)?)?;
    Ok(RunOutcome {
        files: vec![path],
        pass: true,
        summary: format!(
            "x = {:.3e}: E_rho = {:.11e}, tilde_E_rho = {:.11e}, c2_hat = {:.6}",
            point.row.x, point.row.e_rho, point.row.tilde_e_rho, point.row.c2_hat
        ),
    })
}

/// Header of the sweep table.
pub const SWEEP_HEADER: [&str; 7] = [
    "x",
    "rho",
    "rho0",
    "E_rho",
    "tilde_E_rho",
    "lhy_ref",
    "c2_hat",
];

fn sweep_cells(r: &SweepRow) -> Vec<f64> {
    vec![
        r.x,
        r.rho,
        r.rho0,
        r.e_rho,
        r.tilde_e_rho,
        r.lhy_ref,
        r.c2_hat,
    ]
}

fn run_sweep(config: &RunConfig, out: &Path) -> Result<RunOutcome, CliError> {
    let xs = config.sweep_xs();
    let base = config.base_params(xs[0])?;
    let points = density_sweep(&xs, &base, &config.sweep_settings())
        .map_err(|e| CliError::Computation(e.to_string()))?;

    #[derive(Serialize)]
    struct RowError {
        x: f64,
        error: String,
    }
    let mut rows = Vec::new();
    let mut table = Vec::new();
    let mut row_errors = Vec::new();
    for (point, &x) in points.iter().zip(&xs) {
        match point {
            Ok(p) => {
                table.push(sweep_cells(&p.row));
                rows.push(p.row);
            }
            Err(e) => {
                let mut cells = vec![f64::NAN; SWEEP_HEADER.len()];
                cells[0] = x;
                table.push(cells);
                row_errors.push(RowError {
                    x,
                    error: e.to_string(),
                });
            }
        }
    }
    let reference = lhy_constant().map_err(|e| CliError::Computation(e.to_string()))?;
    let c2_errors: Vec<f64> = rows.iter().map(|r| (r.c2_hat - reference).abs()).collect();

    #[derive(Serialize)]
    struct SweepFit {
        lhy_constant: f64,
        /// `|ĉ₂ − 128/(15√π)|` per successful row.
        c2_errors: Vec<f64>,
        c2_error_nonincreasing: bool,
        /// Power-law fit of `|E_ρ − Ẽ_ρ|` against `ρ`.
        energy_gap_fit: Outcome<FitResult>,
        row_errors: Vec<RowError>,
    }
    let fit = SweepFit {
        lhy_constant: reference,
        c2_error_nonincreasing: c2_errors.windows(2).all(|w| w[1] <= w[0]),
        c2_errors,
        energy_gap_fit: exponent_fit(&rows, (SweepColumn::Rho, SweepColumn::EnergyGap)).into(),
        row_errors,
    };
    let csv_path = out.join("sweep.csv");
    let fit_path = out.join("sweep_fit.json");
    write_file(&csv_path, &to_csv(&SWEEP_HEADER, &table))?;
    let summary = match &fit.energy_gap_fit {
        Outcome::Ok(f) => format!("{} rows, |E - tilde E| ~ rho^{:.4}", rows.len(), f.slope),
        Outcome::Error(e) => format!("{} rows, no exponent fit: {e}", rows.len()),
    };
    write_file(
        &fit_path,
        &to_json(&Artifact {
            command: "sweep",
            config,
            result: fit,
        })?,
    )?;
    Ok(RunOutcome {
        files: vec![csv_path, fit_path],
        pass: true,
        summary,
    })
}

fn run_verify(config: &RunConfig, out: &Path) -> Result<RunOutcome, CliError> {
    let outcome: VerifyOutcome = verify_all(&config.verify_spec());
    let path = out.join("verify.json");
    let failed = outcome.reports.iter().filter(|r| !r.pass).count();
    let summary = format!(
        "{} reports, {} failed, {} manifest entries missing: {}",
        outcome.reports.len(),
        failed,
        outcome.missing.len(),
        if outcome.pass { "PASS" } else { "FAIL" }
    );
    let pass = outcome.pass;
    write_file(
        &path,
        &to_json(&Artifact {
            command: "verify",
            config,
            result: outcome,
        })?,
    )?;
    Ok(RunOutcome {
        files: vec![path],
        pass,
        summary,
    })
}

fn run_fock(config: &RunConfig, out: &Path) -> Result<RunOutcome, CliError> {
    let sweep: FockSweep =
        fock_sweep(&config.fock).map_err(|e| CliError::Computation(e.to_string()))?;
    let path = out.join("fock.json");
    let summary = format!(
        "{} cutoffs, dimensions {:?}: {}",
        sweep.reports.len(),
        sweep
            .reports
            .iter()
            .map(|r| r.dimension)
            .collect::<Vec<_>>(),
        if sweep.pass { "PASS" } else { "FAIL" }
    );
    let pass = sweep.pass;
    write_file(
        &path,
        &to_json(&Artifact {
            command: "fock",
            config,
            result: sweep,
        })?,
    )?;
    Ok(RunOutcome {
        files: vec![path],
        pass,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_materialises_defaults() {
        let c = RunConfig::from_json_with_overrides("{}", &[]).unwrap();
        assert_eq!(c, RunConfig::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = RunConfig::from_json_with_overrides(r#"{"physics": {"b": 1}}"#, &[]).unwrap_err();
        assert!(err.to_string().contains("unknown field"), "{err}");
        let err = RunConfig::from_json_with_overrides("{}", &["physics.b=1".into()]).unwrap_err();
        assert!(matches!(err, CliError::Override { .. }));
        let err = RunConfig::from_json_with_overrides("{}", &["phys.a=1".into()]).unwrap_err();
        assert!(err.to_string().contains("phys"), "{err}");
    }

    #[test]
    fn overrides_parse_json_values() {
        let c = RunConfig::from_json_with_overrides(
            "{}",
            &[
                "sweep.xs=[1e-6,1e-7]".into(),
                "physics.delta=0.2".into(),
                "fock.nmax=[4,6]".into(),
            ],
        )
        .unwrap();
        assert_eq!(c.sweep.xs, vec![1e-6, 1e-7]);
        assert_eq!(c.physics.delta, 0.2);
        assert_eq!(c.fock.nmax, vec![4, 6]);
        assert!(RunConfig::from_json_with_overrides("{}", &["physics.delta".into()]).is_err());
        assert!(RunConfig::from_json_with_overrides("{}", &["physics.delta=abc".into()]).is_err());
    }

    #[test]
    fn empty_sweep_names_the_key() {
        let c = RunConfig::from_json_with_overrides("{}", &["sweep.xs=[]".into()]).unwrap();
        let err = c.validate(Command::Sweep).unwrap_err();
        assert!(err.to_string().starts_with("sweep.xs:"), "{err}");
        let err = RunConfig::from_json_with_overrides("{}", &["verify.xs=[]".into()])
            .unwrap()
            .validate(Command::Verify)
            .unwrap_err();
        assert!(err.to_string().starts_with("verify.xs:"), "{err}");
    }

    #[test]
    fn densities_replace_gas_parameters() {
        let c = RunConfig::from_json_with_overrides(
            "{}",
            &["sweep.rhos=[1e-6,1e-7]".into(), "physics.a=2".into()],
        )
        .unwrap();
        assert_eq!(c.sweep_xs(), vec![8e-6, 8e-7]);
        assert!(c.validate(Command::Sweep).is_ok());
    }

    #[test]
    fn validation_checks_physical_ranges() {
        let c = RunConfig::from_json_with_overrides("{}", &["physics.a=-1".into()]).unwrap();
        assert!(c
            .validate(Command::Energy)
            .unwrap_err()
            .to_string()
            .starts_with("physics.a"));
        let c = RunConfig::from_json_with_overrides("{}", &["energy.x=0.5".into()]).unwrap();
        assert!(c
            .validate(Command::Energy)
            .unwrap_err()
            .to_string()
            .starts_with("energy.x"));
        let c =
            RunConfig::from_json_with_overrides("{}", &["sweep.xs=[1e-7,1e-6]".into()]).unwrap();
        assert!(c.validate(Command::Sweep).is_err());
    }

    #[test]
    fn shipped_default_config_matches_the_defaults() {
        let text = include_str!("../../configs/default.json");
        assert_eq!(
            RunConfig::from_json_with_overrides(text, &[]).unwrap(),
            RunConfig::default()
        );
        assert_eq!(text, to_json(&RunConfig::default()).unwrap());
    }

    #[test]
    fn config_echo_round_trips() {
        let c = RunConfig::default();
        let text = to_json(&c).unwrap();
        let back = RunConfig::from_json_with_overrides(&text, &[]).unwrap();
        assert_eq!(back, c);
    }
}
