//! Identity checks, observables and truncation budgets for toy instances.
//!
//! Every transformation identity is compared against an error budget (the
//! truncation defect) derived from Duhamel's formula: for a generator `G`
//! truncated by the projection `P`,
//!
//! ```text
//! ‖ι e^{G_P} u − e^{G} u‖ ≤ ∫₀¹ ‖(1 − P) G ι e^{s G_P} u‖ ds,
//! ```
//!
//! and the integrand only involves the few shells just above the cutoff,
//! which an extended space at `nmax + 2` represents exactly. The integral is
//! bounded by the largest integrand over equally spaced nodes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernels::ToyKernels;
use super::operators::{
    bogoliubov_generator, jastrow, jastrow_at, kinetic, local_number, lowering, weyl_generator,
};
use super::sparse::{distance, dot, expm_apply, norm2, Csr};
use super::{FockError, FockSpace, DEFAULT_DIMENSION_CAP};

/// Parameters of a toy Fock computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FockCheckConfig {
    /// Sites per side of the torus.
    pub m_lin: usize,
    /// Dimension of the torus (1 or 3).
    pub dims: usize,
    /// Lattice spacing.
    pub h: f64,
    /// Condensate density of the Weyl operator.
    pub rho0: f64,
    /// Jastrow profile per offset site; synthetic profile when absent.
    pub f: Option<Vec<f64>>,
    /// Pairing kernel per mode; synthetic kernel when absent.
    pub eta_hat: Option<Vec<f64>>,
    /// Occupancy cutoffs, in increasing order.
    pub nmax: Vec<usize>,
    /// Test vectors are the basis states with at most this many particles.
    pub test_particles: usize,
    /// Nodes of the Duhamel integral bound.
    pub duhamel_nodes: usize,
    /// `(site, radius)` pairs for local particle numbers.
    pub local_regions: Vec<(usize, f64)>,
    /// Tolerance of the truncation-free identities.
    pub diagonal_tolerance: f64,
    /// Tolerance of the unitarity defects.
    pub unitarity_tolerance: f64,
    pub dimension_cap: usize,
}

impl Default for FockCheckConfig {
    fn default() -> Self {
        Self {
            m_lin: 4,
            dims: 1,
            h: 1.0,
            rho0: 0.125,
            f: None,
            eta_hat: None,
            nmax: vec![6, 8, 10],
            test_particles: 2,
            duhamel_nodes: 8,
            local_regions: vec![(0, 0.0), (0, 1.0)],
            diagonal_tolerance: 1e-13,
            unitarity_tolerance: 1e-10,
            dimension_cap: DEFAULT_DIMENSION_CAP,
        }
    }
}

impl FockCheckConfig {
    pub fn validate(&self) -> Result<(), FockError> {
        let invalid = |msg: String| Err(FockError::InvalidSpace(msg));
        if self.nmax.is_empty() {
            return invalid("nmax: at least one cutoff is required".into());
        }
        if self.nmax.windows(2).any(|w| w[0] >= w[1]) {
            return invalid(format!(
                "nmax: cutoffs must increase strictly, got {:?}",
                self.nmax
            ));
        }
        if self.test_particles + 2 > self.nmax[0] {
            return invalid(format!(
                "test_particles: {} leaves no room below the smallest cutoff {}",
                self.test_particles, self.nmax[0]
            ));
        }
        if self.duhamel_nodes == 0 {
            return invalid("duhamel_nodes: must be positive".into());
        }
        if !(self.rho0 >= 0.0 && self.rho0.is_finite()) {
            return invalid(format!("rho0: must be non-negative, got {}", self.rho0));
        }
        Ok(())
    }

    /// Kernels for a space built from this configuration.
    pub fn kernels(&self, space: &FockSpace) -> Result<ToyKernels, FockError> {
        let synthetic = ToyKernels::synthetic(space)?;
        let f = self.f.clone().unwrap_or(synthetic.f);
        let eta = self.eta_hat.clone().unwrap_or(synthetic.eta_hat);
        ToyKernels::new(space, f, eta)
    }

    /// The toy instance at one cutoff.
    pub fn instance(&self, nmax: usize) -> Result<ToyInstance, FockError> {
        let space =
            FockSpace::build_with_cap(self.m_lin, self.dims, self.h, nmax, self.dimension_cap)?;
        let kernels = self.kernels(&space)?;
        ToyInstance::new(space, kernels, self.rho0, self.duhamel_nodes)
    }
}

/// A truncated propagator together with the map that measures its leakage
/// above the cutoff.
#[derive(Debug, Clone)]
struct Propagator {
    generator: Csr,
    leak: Csr,
}

impl Propagator {
    fn new(
        space: &FockSpace,
        extended: &FockSpace,
        generator: Csr,
        extended_generator: &Csr,
    ) -> Self {
        let high: Vec<usize> = (0..extended.dimension())
            .filter(|&r| extended.total(r) > space.nmax)
            .collect();
        let mut row_of = vec![usize::MAX; extended.dimension()];
        for (k, &r) in high.iter().enumerate() {
            row_of[r] = k;
        }
        let t = extended_generator
            .triplets()
            .filter_map(|(r, c, v)| {
                let col = space.index_of(extended.occupation(c))?;
                (row_of[r] != usize::MAX).then(|| (row_of[r], col, v))
            })
            .collect();
        Self {
            leak: Csr::from_triplets(high.len(), space.dimension(), t),
            generator,
        }
    }

    /// `e^{G} u` on the truncated space and the Duhamel bound on its
    /// distance from the untruncated evolution.
    fn apply(&self, u: &[f64], nodes: usize) -> (Vec<f64>, f64) {
        let mut v = u.to_vec();
        let mut worst = norm2(&self.leak.matvec(&v));
        for _ in 0..nodes {
            v = expm_apply(&self.generator, 1.0 / nodes as f64, &v);
            worst = worst.max(norm2(&self.leak.matvec(&v)));
        }
        (v, worst)
    }

    fn inverse(&self, u: &[f64]) -> Vec<f64> {
        expm_apply(&self.generator, -1.0, u)
    }
}

/// Space, kernels and the operators every check needs, built once.
#[derive(Debug, Clone)]
pub struct ToyInstance {
    pub space: FockSpace,
    pub kernels: ToyKernels,
    pub rho0: f64,
    nodes: usize,
    lower: Vec<Csr>,
    raise: Vec<Csr>,
    weyl: Propagator,
    bogoliubov: Propagator,
    c_gamma: Vec<f64>,
    c_sigma: Vec<f64>,
    c_nu: Vec<f64>,
}

impl ToyInstance {
    /// Fails with a tail-budget error when the expected particle number
    /// `ρ₀|Λ| + Σ_p σ̂_p²` exceeds a quarter of the cutoff.
    pub fn new(
        space: FockSpace,
        kernels: ToyKernels,
        rho0: f64,
        duhamel_nodes: usize,
    ) -> Result<Self, FockError> {
        kernels.check_space(&space)?;
        let expected = rho0 * space.volume() + kernels.pair_excitations();
        if expected > space.nmax as f64 / 4.0 {
            return Err(FockError::TailBudget(format!(
                "expected particle number {expected:.4} exceeds nmax/4 = {}",
                space.nmax as f64 / 4.0
            )));
        }
        let extended = FockSpace::build_with_cap(
            space.m_lin,
            space.dims,
            space.h,
            space.nmax + 2,
            usize::MAX,
        )?;
        let weyl = Propagator::new(
            &space,
            &extended,
            weyl_generator(&space, rho0)?,
            &weyl_generator(&extended, rho0)?,
        );
        let bogoliubov = Propagator::new(
            &space,
            &extended,
            bogoliubov_generator(&space, &kernels)?,
            &bogoliubov_generator(&extended, &kernels)?,
        );
        let lower: Vec<Csr> = (0..space.sites()).map(|i| lowering(&space, i)).collect();
        let raise = lower.iter().map(Csr::transpose).collect();
        Ok(Self {
            c_gamma: space.convolution_coefficients(&kernels.gamma_hat()),
            c_sigma: space.convolution_coefficients(&kernels.sigma_hat()),
            c_nu: space.convolution_coefficients(&kernels.nu_hat()),
            nodes: duhamel_nodes.max(1),
            space,
            kernels,
            rho0,
            lower,
            raise,
            weyl,
            bogoliubov,
        })
    }

    fn inv_sqrt_v(&self) -> f64 {
        1.0 / self.space.cell_volume().sqrt()
    }

    /// `a_i u`.
    fn a(&self, i: usize, u: &[f64]) -> Vec<f64> {
        scaled(self.lower[i].matvec(u), self.inv_sqrt_v())
    }

    /// `a_i* u` (the part leaving the truncated space is dropped).
    fn a_star(&self, i: usize, u: &[f64]) -> Vec<f64> {
        scaled(self.raise[i].matvec(u), self.inv_sqrt_v())
    }

    /// `Σ_j C[i − j] a_j u + D[i − j] a_j* u`.
    fn smeared(&self, i: usize, c_lower: &[f64], c_raise: &[f64], u: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; u.len()];
        for j in 0..self.space.sites() {
            let off = self.space.offset(i, j);
            if c_lower[off] != 0.0 {
                axpy(&mut out, c_lower[off], &self.a(j, u));
            }
            if c_raise[off] != 0.0 {
                axpy(&mut out, c_raise[off], &self.a_star(j, u));
            }
        }
        out
    }

    /// Norm bound of a projected ladder operator on the shells up to two
    /// above the cutoff.
    fn ladder_bound(&self) -> f64 {
        ((self.space.nmax + 1) as f64 / self.space.cell_volume()).sqrt()
    }

    fn unit(&self, idx: usize) -> Vec<f64> {
        let mut v = vec![0.0; self.space.dimension()];
        v[idx] = 1.0;
        v
    }

    fn test_vectors(&self, particles: usize) -> Vec<usize> {
        (0..self.space.dimension())
            .filter(|&i| self.space.total(i) <= particles)
            .collect()
    }

    /// `W(ρ₀)u` with its truncation defect.
    pub fn weyl_apply(&self, u: &[f64]) -> (Vec<f64>, f64) {
        self.weyl.apply(u, self.nodes)
    }

    /// `Tu` with its truncation defect.
    pub fn bogoliubov_apply(&self, u: &[f64]) -> (Vec<f64>, f64) {
        self.bogoliubov.apply(u, self.nodes)
    }

    /// `T W u` with the combined defect.
    fn tw_apply(&self, u: &[f64]) -> (Vec<f64>, f64) {
        let (w, dw) = self.weyl_apply(u);
        let (tw, dt) = self.bogoliubov_apply(&w);
        (tw, dw + dt)
    }

    /// `W T u` with the combined defect.
    fn wt_apply(&self, u: &[f64]) -> (Vec<f64>, f64) {
        let (t, dt) = self.bogoliubov_apply(u);
        let (wt, dw) = self.weyl_apply(&t);
        (wt, dw + dt)
    }
}

fn scaled(mut v: Vec<f64>, s: f64) -> Vec<f64> {
    v.iter_mut().for_each(|x| *x *= s);
    v
}

fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    y.iter_mut().zip(x).for_each(|(y, x)| *y += alpha * x);
}

/// Operator-norm bound `√(‖A‖₁‖A‖_∞)`.
fn operator_norm_bound(m: &Csr) -> f64 {
    (m.norm_one() * m.transpose().norm_one()).sqrt()
}

/// A normalised state on the truncated space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FockState {
    pub amplitudes: Vec<f64>,
    /// Norm before normalisation.
    pub norm: f64,
    /// Probability carried by the top occupancy shell.
    pub truncation_weight: f64,
    /// Largest amplitude on configurations where two particles sit at an
    /// offset with vanishing Jastrow factor.
    pub core_amplitude: f64,
    /// Truncation defect of the unnormalised state.
    pub defect: f64,
}

impl FockState {
    fn from_vector(space: &FockSpace, kernels: &ToyKernels, v: Vec<f64>, defect: f64) -> Self {
        let norm = norm2(&v);
        let amplitudes = scaled(v, 1.0 / norm);
        let truncation_weight = (0..space.dimension())
            .filter(|&i| space.total(i) == space.nmax)
            .map(|i| amplitudes[i] * amplitudes[i])
            .sum();
        let core_amplitude = (0..space.dimension())
            .filter(|&idx| violates_core(space, kernels, space.occupation(idx)))
            .map(|idx| amplitudes[idx].abs())
            .fold(0.0, f64::max);
        Self {
            amplitudes,
            norm,
            truncation_weight,
            core_amplitude,
            defect,
        }
    }
}

fn violates_core(space: &FockSpace, kernels: &ToyKernels, n: &[u16]) -> bool {
    let m = space.sites();
    (0..m).any(|k| {
        n[k] > 0
            && ((n[k] > 1 && kernels.f[0] == 0.0)
                || ((k + 1)..m).any(|l| n[l] > 0 && kernels.f[space.offset(k, l)] == 0.0))
    })
}

/// `Ψ = Z⁻¹ J W(ρ₀) T Ω`.
pub fn trial_state(instance: &ToyInstance) -> Result<FockState, FockError> {
    let space = &instance.space;
    let (phi, defect) = instance.wt_apply(&instance.unit(space.vacuum()));
    let j = jastrow(space, &instance.kernels)?;
    let v: Vec<f64> = phi.iter().zip(&j).map(|(p, j)| p * j).collect();
    Ok(FockState::from_vector(space, &instance.kernels, v, defect))
}

/// Particle number in a ball around a site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalNumber {
    pub site: usize,
    pub radius: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    /// `⟨N⟩`.
    pub n_expect: f64,
    /// `⟨K⟩` with the discrete Laplacian.
    pub k_expect: f64,
    pub local_n: Vec<LocalNumber>,
    /// Site average of `⟨a_i⟩`.
    pub condensate_amplitude: f64,
    /// `h^d Σ_i ⟨b_i* b_i⟩` with `b_i = a_i − √ρ₀`.
    pub excitations: f64,
    /// `(ρ₀ + ‖σ‖₂²)|Λ| = ρ₀|Λ| + Σ_p σ̂_p²`.
    pub pair_prediction: f64,
    /// `⟨N⟩ − pair_prediction`.
    pub prediction_gap: f64,
}

/// Expectations in a state of the instance.
pub fn observables(
    instance: &ToyInstance,
    state: &FockState,
    regions: &[(usize, f64)],
) -> Result<Observables, FockError> {
    let space = &instance.space;
    let psi = &state.amplitudes;
    if psi.len() != space.dimension() {
        return Err(FockError::Shape(format!(
            "state has {} amplitudes, basis has {}",
            psi.len(),
            space.dimension()
        )));
    }
    let expect = |m: &Csr| dot(psi, &m.matvec(psi));
    let n_expect = (0..space.dimension())
        .map(|i| psi[i] * psi[i] * space.total(i) as f64)
        .sum::<f64>();
    let k_expect = expect(&kinetic(space)?);
    let local_n = regions
        .iter()
        .map(|&(site, radius)| {
            Ok(LocalNumber {
                site,
                radius,
                value: expect(&local_number(space, site, radius)?),
            })
        })
        .collect::<Result<Vec<_>, FockError>>()?;
    let sqrt_rho0 = instance.rho0.sqrt();
    let (mut amplitude, mut excitations) = (0.0, 0.0);
    for i in 0..space.sites() {
        let a_psi = instance.a(i, psi);
        amplitude += dot(psi, &a_psi);
        let b_psi: Vec<f64> = a_psi
            .iter()
            .zip(psi)
            .map(|(a, p)| a - sqrt_rho0 * p)
            .collect();
        excitations += space.cell_volume() * dot(&b_psi, &b_psi);
    }
    let pair_prediction = instance.rho0 * space.volume() + instance.kernels.pair_excitations();
    Ok(Observables {
        n_expect,
        k_expect,
        local_n,
        condensate_amplitude: amplitude / space.sites() as f64,
        excitations,
        pair_prediction,
        prediction_gap: n_expect - pair_prediction,
    })
}

/// How an identity is judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    /// Unaffected by the cutoff: residual at most a fixed tolerance.
    Exact,
    /// Residual at most the truncation defect.
    Transformation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub name: String,
    pub kind: IdentityKind,
    /// Largest residual norm over sites and test vectors.
    pub residual: f64,
    /// Largest truncation defect (zero for exact identities).
    pub defect: f64,
    /// Budget the residual is compared with.
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityResidual {
    fn exact(name: &str, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            kind: IdentityKind::Exact,
            residual,
            defect: 0.0,
            tolerance,
            pass: residual <= tolerance,
        }
    }

    /// Pass requires the residual to respect its own defect for every site
    /// and test vector, not only in the maximum.
    fn transformation(name: &str, pairs: &[(f64, f64)]) -> Self {
        let residual = pairs.iter().map(|p| p.0).fold(0.0, f64::max);
        let defect = pairs.iter().map(|p| p.1).fold(0.0, f64::max);
        Self {
            name: name.into(),
            kind: IdentityKind::Transformation,
            residual,
            defect,
            tolerance: defect,
            pass: pairs
                .iter()
                .all(|&(r, d)| r.is_finite() && r <= d + ROUNDOFF),
        }
    }
}

/// Floating-point slack added to every truncation budget.
const ROUNDOFF: f64 = 1e-13;

/// Squeezing of one real plane-wave mode `cos(p·x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSqueezing {
    pub mode: usize,
    pub momentum: f64,
    pub eta_hat: f64,
    /// `‖c_p TΩ‖²`.
    pub occupation: f64,
    /// `sinh² η̂_p`.
    pub expected: f64,
    /// `⟨Ω, T* c_p T c_p* Ω⟩`.
    pub gamma_hat: f64,
    /// `⟨c_p* Ω, T* c_p T Ω⟩`.
    pub sigma_hat: f64,
    /// `|γ̂² − σ̂² − 1|`.
    pub hyperbolic_residual: f64,
}

/// Statistics of the coherent state `W(ρ₀)Ω`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherentReport {
    /// `ρ₀|Λ|`.
    pub expected: f64,
    pub n_expect: f64,
    /// `2·nmax·D + Σ_{n > nmax} n p_n` with `D` the truncation defect.
    pub n_bound: f64,
    /// Total-variation distance of the occupation law from the Poisson law.
    pub total_variation: f64,
    /// `D + ½ Σ_{n > nmax} p_n`.
    pub tv_bound: f64,
    pub pass: bool,
}

fn poisson(mean: f64, n: usize) -> f64 {
    let ln = n as f64 * mean.ln() - mean - (1..=n).map(|k| (k as f64).ln()).sum::<f64>();
    if mean == 0.0 {
        if n == 0 {
            1.0
        } else {
            0.0
        }
    } else {
        ln.exp()
    }
}

/// Compares `W(ρ₀)Ω` with the Poisson law of mean `ρ₀|Λ|`.
pub fn coherent_state_report(instance: &ToyInstance) -> CoherentReport {
    let space = &instance.space;
    let mean = instance.rho0 * space.volume();
    let (u, defect) = instance.weyl_apply(&instance.unit(space.vacuum()));
    let mut shells = vec![0.0; space.nmax + 1];
    for (i, a) in u.iter().enumerate() {
        shells[space.total(i)] += a * a;
    }
    let n_expect: f64 = shells.iter().enumerate().map(|(n, q)| n as f64 * q).sum();
    let total_variation = 0.5
        * shells
            .iter()
            .enumerate()
            .map(|(n, q)| (q - poisson(mean, n)).abs())
            .sum::<f64>()
        + 0.5 * (1.0 - (0..=space.nmax).map(|n| poisson(mean, n)).sum::<f64>()).max(0.0);
    // Poisson tails, summed until negligible.
    let (mut tail, mut tail_n) = (0.0, 0.0);
    for n in (space.nmax + 1)..(space.nmax + 200) {
        let p = poisson(mean, n);
        tail += p;
        tail_n += n as f64 * p;
        if p < 1e-30 {
            break;
        }
    }
    let n_bound = 2.0 * space.nmax as f64 * defect + tail_n + ROUNDOFF;
    let tv_bound = defect + 0.5 * tail + ROUNDOFF;
    CoherentReport {
        expected: mean,
        n_expect,
        n_bound,
        total_variation,
        tv_bound,
        pass: (n_expect - mean).abs() <= n_bound && total_variation <= tv_bound,
    }
}

/// Squeezing of each real mode class `{p, −p}` by `T`.
pub fn mode_squeezing(instance: &ToyInstance) -> Vec<ModeSqueezing> {
    let space = &instance.space;
    let omega = instance.unit(space.vacuum());
    (0..space.sites())
        .filter(|&p| p <= space.negative_mode(p))
        .map(|p| {
            let k = space.momentum(p);
            let wave: Vec<f64> = (0..space.sites())
                .map(|i| {
                    let x = space.coords(i);
                    (0..space.dims)
                        .map(|a| k[a] * x[a] as f64 * space.h)
                        .sum::<f64>()
                        .cos()
                })
                .collect();
            let norm = norm2(&wave);
            let c = |u: &[f64]| {
                let mut out = vec![0.0; u.len()];
                for (i, w) in wave.iter().enumerate() {
                    axpy(&mut out, w / norm, &instance.lower[i].matvec(u));
                }
                out
            };
            let c_star = |u: &[f64]| {
                let mut out = vec![0.0; u.len()];
                for (i, w) in wave.iter().enumerate() {
                    axpy(&mut out, w / norm, &instance.raise[i].matvec(u));
                }
                out
            };
            let (t_omega, _) = instance.bogoliubov_apply(&omega);
            let ct = c(&t_omega);
            let occupation = dot(&ct, &ct);
            let sigma_hat = dot(&c_star(&omega), &instance.bogoliubov.inverse(&ct));
            let (t_one, _) = instance.bogoliubov_apply(&c_star(&omega));
            let gamma_hat = dot(&omega, &instance.bogoliubov.inverse(&c(&t_one)));
            let eta = instance.kernels.eta_hat[p];
            ModeSqueezing {
                mode: p,
                momentum: super::kernels::mode_magnitude(space, p),
                eta_hat: eta,
                occupation,
                expected: eta.sinh().powi(2),
                gamma_hat,
                sigma_hat,
                hyperbolic_residual: (gamma_hat * gamma_hat - sigma_hat * sigma_hat - 1.0).abs(),
            }
        })
        .collect()
}

/// All identity residuals and observables at one cutoff.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FockReport {
    pub dimension: usize,
    pub nmax: usize,
    pub identities: Vec<IdentityResidual>,
    pub squeezing: Vec<ModeSqueezing>,
    pub coherent: CoherentReport,
    pub trial: TrialSummary,
    pub observables: Observables,
    pub pass: bool,
}

/// Scalar summary of the trial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub norm: f64,
    pub truncation_weight: f64,
    pub core_amplitude: f64,
    pub defect: f64,
}

/// Largest hard-core amplitude accepted in the trial state.
pub const CORE_TOLERANCE: f64 = 1e-14;

/// Runs every identity on one toy instance.
pub fn identity_report(
    instance: &ToyInstance,
    config: &FockCheckConfig,
) -> Result<FockReport, FockError> {
    instance.kernels.require_decoupled_condensate()?;
    let space = &instance.space;
    let m = space.sites();
    let tests = instance.test_vectors(config.test_particles);
    let sqrt_rho0 = instance.rho0.sqrt();
    let alpha = instance.ladder_bound();
    let mut identities = Vec::new();

    // Truncation-free identities.
    identities.push(IdentityResidual::exact(
        "canonical-commutator",
        commutator_residual(instance),
        config.diagonal_tolerance,
    ));
    let (exchange, pull, bound) = jastrow_residuals(instance)?;
    identities.push(IdentityResidual::exact(
        "jastrow-exchange",
        exchange,
        config.diagonal_tolerance,
    ));
    identities.push(IdentityResidual::exact(
        "jastrow-pull-through",
        pull,
        config.diagonal_tolerance,
    ));
    identities.push(IdentityResidual::exact(
        "jastrow-bound",
        bound,
        config.diagonal_tolerance,
    ));

    // Unitarity on the truncated space.
    let mut w_unit: f64 = 0.0;
    let mut t_unit: f64 = 0.0;
    for &e in &tests {
        let u = instance.unit(e);
        w_unit = w_unit.max(distance(
            &instance.weyl.inverse(&instance.weyl_apply(&u).0),
            &u,
        ));
        t_unit = t_unit.max(distance(
            &instance
                .bogoliubov
                .inverse(&instance.bogoliubov_apply(&u).0),
            &u,
        ));
    }
    identities.push(IdentityResidual::exact(
        "weyl-unitarity",
        w_unit,
        config.unitarity_tolerance,
    ));
    identities.push(IdentityResidual::exact(
        "bogoliubov-unitarity",
        t_unit,
        config.unitarity_tolerance,
    ));

    // Transformation identities, per (site, test vector).
    let kappa_c = (instance.c_gamma.iter().map(|c| c.abs()).sum::<f64>()
        + instance.c_sigma.iter().map(|c| c.abs()).sum::<f64>())
        * alpha
        + sqrt_rho0;
    let neg_sigma: Vec<f64> = instance.c_sigma.iter().map(|c| -c).collect();
    let per_vector: Vec<[Vec<(f64, f64)>; 4]> = tests
        .par_iter()
        .map(|&e| {
            let u = instance.unit(e);
            let (we, d_we) = instance.weyl_apply(&u);
            let (te, d_te) = instance.bogoliubov_apply(&u);
            let (twe, d_twe) = instance.tw_apply(&u);
            let mut out: [Vec<(f64, f64)>; 4] = Default::default();
            for i in 0..m {
                // W* a_i W = a_i + √ρ₀.
                let mut shifted = instance.a(i, &u);
                axpy(&mut shifted, sqrt_rho0, &u);
                let (rhs, d) = instance.weyl_apply(&shifted);
                out[0].push((distance(&instance.a(i, &we), &rhs), alpha * d_we + d));

                // b_i* W = W a_i*.
                let mut lhs = instance.a_star(i, &we);
                axpy(&mut lhs, -sqrt_rho0, &we);
                let (rhs, d) = instance.weyl_apply(&instance.a_star(i, &u));
                out[1].push((distance(&lhs, &rhs), (alpha + sqrt_rho0) * d_we + d));

                // T* a_i T = a(γ_i) + a*(σ_i).
                let smeared = instance.smeared(i, &instance.c_gamma, &instance.c_sigma, &u);
                let (rhs, d) = instance.bogoliubov_apply(&smeared);
                out[2].push((distance(&instance.a(i, &te), &rhs), alpha * d_te + d));

                // c_i T W = T W a_i.
                let mut lhs = instance.smeared(i, &instance.c_gamma, &neg_sigma, &twe);
                axpy(&mut lhs, -sqrt_rho0, &twe);
                let (rhs, d) = instance.tw_apply(&instance.a(i, &u));
                out[3].push((distance(&lhs, &rhs), kappa_c * d_twe + d));
            }
            out
        })
        .collect();
    let names = [
        "weyl-shift",
        "excitation-field",
        "bogoliubov-action",
        "c-field",
    ];
    for (k, name) in names.iter().enumerate() {
        let pairs: Vec<(f64, f64)> = per_vector
            .iter()
            .flat_map(|v| v[k].iter().copied())
            .collect();
        identities.push(IdentityResidual::transformation(name, &pairs));
    }

    let trial = trial_state(instance)?;
    identities.push(IdentityResidual::transformation(
        "annihilation-identity",
        &annihilation_residuals(instance, &trial)?,
    ));

    let coherent = coherent_state_report(instance);
    let observables = observables(instance, &trial, &config.local_regions)?;
    let pass = identities.iter().all(|r| r.pass)
        && coherent.pass
        && trial.core_amplitude <= CORE_TOLERANCE;
    Ok(FockReport {
        dimension: space.dimension(),
        nmax: space.nmax,
        identities,
        squeezing: mode_squeezing(instance),
        coherent,
        trial: TrialSummary {
            norm: trial.norm,
            truncation_weight: trial.truncation_weight,
            core_amplitude: trial.core_amplitude,
            defect: trial.defect,
        },
        observables,
        pass,
    })
}

/// `max |[a_i, a_j*] − δ_ij/h^d|` on the columns below the cutoff shell.
fn commutator_residual(instance: &ToyInstance) -> f64 {
    let space = &instance.space;
    let m = space.sites();
    let inv_v = 1.0 / space.cell_volume();
    let mut worst: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            let ab = instance.lower[i]
                .matmul(&instance.raise[j])
                .expect("square operators");
            let ba = instance.raise[j]
                .matmul(&instance.lower[i])
                .expect("square operators");
            let comm = ab.combine(inv_v, &ba, -inv_v).expect("same shape");
            for (r, c, v) in comm.triplets() {
                if space.total(c) < space.nmax {
                    let target = if r == c && i == j { inv_v } else { 0.0 };
                    worst = worst.max((v - target).abs());
                }
            }
            if i == j {
                for c in (0..space.dimension()).filter(|&c| space.total(c) < space.nmax) {
                    if comm.get(c, c) == 0.0 {
                        worst = worst.max(inv_v);
                    }
                }
            }
        }
    }
    worst
}

/// Residuals of `a_iJ = J(i)Ja_i` (and its adjoint), of
/// `a_jJ(i) = f(i−j)J(i)a_j`, and the largest violation of
/// `0 ≤ 1 − J(i) ≤ h^d Σ_j ω(i−j) a_j*a_j`.
fn jastrow_residuals(instance: &ToyInstance) -> Result<(f64, f64, f64), FockError> {
    let space = &instance.space;
    let kernels = &instance.kernels;
    let m = space.sites();
    let j_all = Csr::diagonal(&jastrow(space, kernels)?);
    let j_at: Vec<Vec<f64>> = (0..m)
        .map(|i| jastrow_at(space, kernels, i))
        .collect::<Result<_, _>>()?;
    let omega = kernels.omega();
    let (mut exchange, mut pull, mut bound): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..m {
        let ji = Csr::diagonal(&j_at[i]);
        let jij = ji.matmul(&j_all)?;
        let lhs = instance.lower[i].matmul(&j_all)?;
        let rhs = jij.matmul(&instance.lower[i])?;
        exchange = exchange.max(operator_norm_bound(&lhs.combine(1.0, &rhs, -1.0)?));
        let lhs = j_all.matmul(&instance.raise[i])?;
        let rhs = instance.raise[i].matmul(&jij)?;
        exchange = exchange.max(operator_norm_bound(&lhs.combine(1.0, &rhs, -1.0)?));
        for j in 0..m {
            let f = kernels.f[space.offset(i, j)];
            let lhs = instance.lower[j].matmul(&ji)?;
            let rhs = ji.matmul(&instance.lower[j])?;
            pull = pull.max(operator_norm_bound(&lhs.combine(1.0, &rhs, -f)?));
        }
        for (idx, j) in j_at[i].iter().enumerate() {
            let n = space.occupation(idx);
            let gap = 1.0 - j;
            let dgamma: f64 = (0..m)
                .map(|y| omega[space.offset(i, y)] * n[y] as f64)
                .sum();
            bound = bound.max(-gap).max(gap - dgamma);
        }
    }
    let scale = 1.0 / space.cell_volume().sqrt();
    Ok((exchange * scale, pull * scale, bound))
}

/// Per-site residual of
/// `a_iΨ = √ρ₀J(i)Ψ + J(i) h^d Σ_j ν(i−j) a_j* J(j)Ψ`, with its budget.
fn annihilation_residuals(
    instance: &ToyInstance,
    trial: &FockState,
) -> Result<Vec<(f64, f64)>, FockError> {
    let space = &instance.space;
    let kernels = &instance.kernels;
    let m = space.sites();
    let psi = &trial.amplitudes;
    let j_at: Vec<Vec<f64>> = (0..m)
        .map(|i| jastrow_at(space, kernels, i))
        .collect::<Result<_, _>>()?;
    let sqrt_rho0 = instance.rho0.sqrt();
    let alpha = instance.ladder_bound();
    let kappa = alpha + sqrt_rho0 + instance.c_nu.iter().map(|c| c.abs()).sum::<f64>() * alpha;
    let budget = kappa * trial.defect / trial.norm;
    let jj_psi: Vec<Vec<f64>> = j_at
        .iter()
        .map(|j| j.iter().zip(psi).map(|(j, p)| j * p).collect())
        .collect();
    Ok((0..m)
        .map(|i| {
            let mut rhs: Vec<f64> = j_at[i]
                .iter()
                .zip(psi)
                .map(|(j, p)| sqrt_rho0 * j * p)
                .collect();
            let mut pair = vec![0.0; psi.len()];
            for (jdx, jpsi) in jj_psi.iter().enumerate() {
                let c = instance.c_nu[space.offset(i, jdx)];
                if c != 0.0 {
                    axpy(&mut pair, c, &instance.a_star(jdx, jpsi));
                }
            }
            rhs.iter_mut()
                .zip(pair.iter().zip(&j_at[i]))
                .for_each(|(r, (p, j))| *r += j * p);
            (distance(&instance.a(i, psi), &rhs), budget)
        })
        .collect())
}

/// Residual and defect of one identity across the cutoff sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneCheck {
    pub name: String,
    pub residuals: Vec<f64>,
    pub defects: Vec<f64>,
    pub residual_decreasing: bool,
    pub defect_decreasing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FockSweep {
    pub config: FockCheckConfig,
    pub reports: Vec<FockReport>,
    pub monotone: Vec<MonotoneCheck>,
    pub pass: bool,
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

/// Runs the identity report at every cutoff (in parallel) and checks that
/// the transformation residuals and defects shrink as the cutoff grows.
pub fn fock_sweep(config: &FockCheckConfig) -> Result<FockSweep, FockError> {
    config.validate()?;
    let reports = config
        .nmax
        .par_iter()
        .map(|&n| identity_report(&config.instance(n)?, config))
        .collect::<Result<Vec<_>, FockError>>()?;
    let monotone: Vec<MonotoneCheck> = reports[0]
        .identities
        .iter()
        .enumerate()
        .filter(|(_, r)| r.kind == IdentityKind::Transformation)
        .map(|(k, r)| {
            let residuals: Vec<f64> = reports
                .iter()
                .map(|rep| rep.identities[k].residual)
                .collect();
            let defects: Vec<f64> = reports.iter().map(|rep| rep.identities[k].defect).collect();
            MonotoneCheck {
                name: r.name.clone(),
                residual_decreasing: strictly_decreasing(&residuals),
                defect_decreasing: strictly_decreasing(&defects),
                residuals,
                defects,
            }
        })
        .collect();
    let pass = reports.iter().all(|r| r.pass)
        && monotone
            .iter()
            .all(|c| c.residual_decreasing && c.defect_decreasing);
    Ok(FockSweep {
        config: config.clone(),
        reports,
        monotone,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(nmax: usize) -> ToyInstance {
        FockCheckConfig::default().instance(nmax).unwrap()
    }

    #[test]
    fn vacuum_has_no_particles_and_no_energy() {
        let inst = small(4);
        let omega = FockState::from_vector(&inst.space, &inst.kernels, inst.unit(0), 0.0);
        let obs = observables(&inst, &omega, &[(0, 5.0)]).unwrap();
        assert_eq!(obs.n_expect, 0.0);
        assert_eq!(obs.k_expect, 0.0);
        assert_eq!(obs.local_n[0].value, 0.0);
    }

    #[test]
    fn trivial_dressings_leave_states_unchanged() {
        let space = FockSpace::build(3, 1, 1.0, 4).unwrap();
        let kernels = ToyKernels::new(&space, vec![1.0; 3], vec![0.0; 3]).unwrap();
        let inst = ToyInstance::new(space, kernels, 0.0, 4).unwrap();
        let u = inst.unit(7);
        assert_eq!(inst.weyl_apply(&u).0, u);
        assert_eq!(inst.bogoliubov_apply(&u).0, u);
        let psi = trial_state(&inst).unwrap();
        assert_eq!(psi.amplitudes, inst.unit(0));
    }

    #[test]
    fn trial_state_without_jastrow_or_pairing_is_coherent() {
        let cfg = FockCheckConfig {
            f: Some(vec![1.0; 4]),
            eta_hat: Some(vec![0.0; 4]),
            ..FockCheckConfig::default()
        };
        let inst = cfg.instance(8).unwrap();
        let psi = trial_state(&inst).unwrap();
        let (coherent, _) = inst.weyl_apply(&inst.unit(0));
        assert!(distance(&psi.amplitudes, &coherent) < 1e-13);
    }

    #[test]
    fn hard_core_configurations_vanish() {
        let inst = small(8);
        let psi = trial_state(&inst).unwrap();
        assert_eq!(psi.core_amplitude, 0.0);
        // An on-site core allows at most one particle per site, so the top
        // shell of an 8-particle cutoff on 4 sites carries nothing.
        assert_eq!(psi.truncation_weight, 0.0);
        assert!(psi.defect > 0.0);
    }

    #[test]
    fn squeezing_matches_the_two_mode_formula() {
        let (a, b) = (small(6), small(10));
        let (sa, sb) = (mode_squeezing(&a), mode_squeezing(&b));
        for (x, y) in sa.iter().zip(&sb) {
            let (ea, eb) = (
                (x.occupation - x.expected).abs(),
                (y.occupation - y.expected).abs(),
            );
            assert!(eb <= ea + 1e-15, "mode {}: {ea:.3e} → {eb:.3e}", x.mode);
            assert!(eb < 1e-8, "mode {}: occupation error {eb:.3e}", y.mode);
            // The one-particle input state reaches the cutoff sooner.
            assert!(y.hyperbolic_residual <= x.hyperbolic_residual + 1e-15);
            assert!(y.hyperbolic_residual < 1e-6, "{y:?}");
            assert!((y.sigma_hat - y.eta_hat.sinh()).abs() < 1e-6);
            assert!((y.gamma_hat - y.eta_hat.cosh()).abs() < 1e-6);
        }
    }

    #[test]
    fn coherent_state_is_poisson() {
        let r = coherent_state_report(&small(10));
        assert!(r.pass, "{r:?}");
        assert!((r.expected - 0.5).abs() < 1e-15);
    }

    #[test]
    fn pair_prediction_is_exact_without_jastrow() {
        let cfg = FockCheckConfig {
            f: Some(vec![1.0; 4]),
            ..FockCheckConfig::default()
        };
        let inst = cfg.instance(10).unwrap();
        let psi = trial_state(&inst).unwrap();
        let obs = observables(&inst, &psi, &[]).unwrap();
        assert!(
            obs.prediction_gap.abs() < 1e-5,
            "gap {:.3e}",
            obs.prediction_gap
        );
    }

    #[test]
    fn local_numbers_on_the_cube() {
        let cfg = FockCheckConfig {
            m_lin: 2,
            dims: 3,
            rho0: 0.05,
            nmax: vec![4],
            ..FockCheckConfig::default()
        };
        let inst = cfg.instance(4).unwrap();
        let psi = trial_state(&inst).unwrap();
        let regions: Vec<(usize, f64)> = (0..8).map(|w| (w, 0.0)).chain([(0, 2.0)]).collect();
        let obs = observables(&inst, &psi, &regions).unwrap();
        let sum: f64 = obs.local_n[..8].iter().map(|l| l.value).sum();
        assert!((sum - obs.n_expect).abs() < 1e-13);
        assert!((obs.local_n[8].value - obs.n_expect).abs() < 1e-13);
        assert!(obs.local_n.iter().all(|l| l.value >= 0.0));
        // Translation invariance.
        assert!(obs.local_n[..8]
            .iter()
            .all(|l| (l.value - obs.local_n[0].value).abs() < 1e-12));
    }

    #[test]
    fn tail_budget_is_enforced() {
        let cfg = FockCheckConfig {
            rho0: 1.0,
            ..FockCheckConfig::default()
        };
        assert!(matches!(cfg.instance(6), Err(FockError::TailBudget(_))));
    }

    #[test]
    fn condensate_coupling_stops_the_identity_report() {
        let cfg = FockCheckConfig {
            eta_hat: Some(vec![0.1, 0.0, 0.0, 0.0]),
            ..FockCheckConfig::default()
        };
        let inst = cfg.instance(6).unwrap();
        assert!(matches!(
            identity_report(&inst, &cfg),
            Err(FockError::CondensateCoupling(_))
        ));
    }

    #[test]
    fn config_validation_names_the_field() {
        let cfg = FockCheckConfig {
            nmax: vec![8, 6],
            ..FockCheckConfig::default()
        };
        assert!(cfg.validate().unwrap_err().to_string().contains("nmax"));
        let cfg = FockCheckConfig {
            nmax: vec![],
            ..FockCheckConfig::default()
        };
        assert!(cfg.validate().unwrap_err().to_string().contains("nmax"));
    }
}
