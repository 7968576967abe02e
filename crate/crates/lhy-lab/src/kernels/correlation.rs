//! The correlation family `s, σ̃, σ, σ̂, η̂, γ̂, ν̂, ĝ` and the condensate
//! density fixed point.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::lattice::{
    special::sine_cosine_integrals, Oscillation, RadialGrid, RadialProfile, Space,
};

use super::{
    chi, momentum_grid, phi, position_grid, s_hat, s_hat_remainder, GridOptions, KernelError,
    PhysicalParams,
};

/// A radial profile together with its radial derivative on the same grid.
#[derive(Debug, Clone)]
pub struct GradedProfile {
    pub value: RadialProfile,
    pub gradient: RadialProfile,
}

impl GradedProfile {
    fn new(
        grid: &Arc<RadialGrid>,
        value: Vec<f64>,
        gradient: Vec<f64>,
    ) -> Result<Self, KernelError> {
        Ok(Self {
            value: RadialProfile::new(grid.clone(), value, Space::Position)?,
            gradient: RadialProfile::new(grid.clone(), gradient, Space::Position)?,
        })
    }

    /// `∫|∇h|² dx`.
    pub fn gradient_norm_sq(&self) -> f64 {
        self.gradient.l2_norm_sq()
    }
}

/// Position-space kernels that can be evaluated at arbitrary radii.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PositionKernel {
    /// The Bogoliubov kernel `s`.
    S,
    /// `σ̃`, the cut-off version of `s`.
    SigmaTilde,
    /// `σ`, orthogonal to the condensate.
    Sigma,
    /// `γ − 1`, the distributional part of `cosh η` minus the identity.
    GammaMinusOne,
    /// `1 − γ⁻¹`.
    OneMinusGammaInverse,
    /// `ν = γ⁻¹ * σ`.
    Nu,
}

impl PositionKernel {
    pub const ALL: [PositionKernel; 6] = [
        PositionKernel::S,
        PositionKernel::SigmaTilde,
        PositionKernel::Sigma,
        PositionKernel::GammaMinusOne,
        PositionKernel::OneMinusGammaInverse,
        PositionKernel::Nu,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PositionKernel::S => "s",
            PositionKernel::SigmaTilde => "sigma_tilde",
            PositionKernel::Sigma => "sigma",
            PositionKernel::GammaMinusOne => "gamma_minus_1",
            PositionKernel::OneMinusGammaInverse => "one_minus_gamma_inv",
            PositionKernel::Nu => "nu",
        }
    }
}

/// The momentum-space machinery needed to evaluate `Z = s + ρ₀ min(1, a/r)`
/// at any radius.
#[derive(Debug, Clone)]
struct ZTransform {
    kgrid: Arc<RadialGrid>,
    /// `k·Ẑ(k)` and `k²·Ẑ(k)` at the k-nodes.
    k_z: Vec<f64>,
    k2_z: Vec<f64>,
    /// Lower end of the k-grid; below it `Ẑ ≈ 4πaρ₀/k²`.
    k_lo: f64,
    half_b: f64,
}

impl ZTransform {
    fn new(kgrid: Arc<RadialGrid>, rho0: f64, a: f64) -> Result<Self, KernelError> {
        let mut k_z = Vec::with_capacity(kgrid.len());
        let mut k2_z = Vec::with_capacity(kgrid.len());
        for &k in kgrid.nodes() {
            let z = s_hat_remainder(k, rho0, a)?;
            k_z.push(k * z);
            k2_z.push(k * k * z);
        }
        Ok(Self {
            k_lo: kgrid.r_min(),
            kgrid,
            k_z,
            k2_z,
            half_b: 4.0 * PI * a * rho0,
        })
    }

    /// `(Z(r), Z'(r))` at each radius.
    fn evaluate(&self, radii: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let sin_part = self
            .kgrid
            .oscillatory_integrals(&self.k_z, radii, Oscillation::Sin);
        let cos_part = self
            .kgrid
            .oscillatory_integrals(&self.k2_z, radii, Oscillation::Cos);
        let mut z = Vec::with_capacity(radii.len());
        let mut zp = Vec::with_capacity(radii.len());
        for ((&r, s), c) in radii.iter().zip(sin_part).zip(cos_part) {
            let x = self.k_lo * r;
            let si = if x < 1e-8 {
                x
            } else {
                sine_cosine_integrals(x).0
            };
            let sinc = if x < 1e-8 { self.k_lo } else { x.sin() / r };
            let zi = (s + self.half_b * si) / (2.0 * PI * PI * r);
            let zpi = -zi / r + (c + self.half_b * sinc) / (2.0 * PI * PI * r);
            z.push(zi);
            zp.push(zpi);
        }
        (z, zp)
    }
}

/// `min(1, a/r)` and its derivative.
fn omega_full(r: f64, a: f64) -> (f64, f64) {
    if r < a {
        (1.0, 0.0)
    } else {
        (a / r, -a / (r * r))
    }
}

/// `σ̃(r)` and its derivative from `Z(r)`, `Z'(r)`.
///
/// The cutoff product `χ_{ℓ₀}(2r)(1 − χ_ℓ(2r))` vanishes for `r ≤ ℓ`, where
/// `f_ℓ ≥ 1 − a/ℓ > 0`, so the division by `f_ℓ` only happens on its
/// support.
fn sigma_tilde_point(params: &PhysicalParams, rho0: f64, r: f64, z: f64, zp: f64) -> (f64, f64) {
    let (a, l, l0) = (params.a, params.ell, params.ell0);
    if r <= l || r >= 2.0 * l0 {
        return (0.0, 0.0);
    }
    let (c0, c0d, _) = chi(2.0 * r / l0);
    let (c1, c1d, _) = chi(2.0 * r / l);
    let cut = c0 * (1.0 - c1);
    let cut_d = 2.0 / l0 * c0d * (1.0 - c1) - c0 * 2.0 / l * c1d;
    if cut == 0.0 && cut_d == 0.0 {
        return (0.0, 0.0);
    }
    let (cl, cld, _) = chi(r / l);
    let cld = cld / l;
    let (w, wd) = omega_full(r, a);
    // ρ₀ω_ℓ + s = Z − ρ₀ω(1 − χ_ℓ).
    let q = z - rho0 * w * (1.0 - cl);
    let qd = zp - rho0 * (wd * (1.0 - cl) - w * cld);
    let f = 1.0 - w * cl;
    let fd = -(wd * cl + w * cld);
    assert!(
        f > 0.0,
        "Jastrow factor vanishes at r = {r} inside the cutoff support"
    );
    let v = cut * q / f;
    let d = (cut_d * q + cut * qd) / f - cut * q * fd / (f * f);
    (v, d)
}

struct PositionParts {
    z: Vec<f64>,
    zp: Vec<f64>,
    sigma_tilde: Vec<f64>,
    sigma_tilde_d: Vec<f64>,
    sigma: Vec<f64>,
    sigma_d: Vec<f64>,
    sigma_tilde_integral: f64,
}

fn position_parts(
    params: &PhysicalParams,
    rho0: f64,
    rgrid: &RadialGrid,
    zt: &ZTransform,
) -> Result<PositionParts, KernelError> {
    let (z, zp) = zt.evaluate(rgrid.nodes());
    let mut sigma_tilde = Vec::with_capacity(z.len());
    let mut sigma_tilde_d = Vec::with_capacity(z.len());
    for ((&r, &zi), &zpi) in rgrid.nodes().iter().zip(&z).zip(&zp) {
        let (v, d) = sigma_tilde_point(params, rho0, r, zi, zpi);
        sigma_tilde.push(v);
        sigma_tilde_d.push(d);
    }
    let integral = rgrid.volume_integral(&sigma_tilde);
    let l0 = params.ell0;
    let mut sigma = Vec::with_capacity(z.len());
    let mut sigma_d = Vec::with_capacity(z.len());
    for ((&r, &v), &d) in rgrid.nodes().iter().zip(&sigma_tilde).zip(&sigma_tilde_d) {
        let (p, pd) = phi(r / l0)?;
        sigma.push(v - integral * p / l0.powi(3));
        sigma_d.push(d - integral * pd / l0.powi(4));
    }
    Ok(PositionParts {
        z,
        zp,
        sigma_tilde,
        sigma_tilde_d,
        sigma,
        sigma_d,
        sigma_tilde_integral: integral,
    })
}

/// Outcome of the condensate-density fixed point.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Rho0Solution {
    pub rho0: f64,
    pub sigma_norm_sq: f64,
    pub iterations: usize,
    /// `|ρ₀ + ‖σ‖² − target| / ρ` at the returned `ρ₀`.
    pub residual: f64,
}

/// Solves `ρ₀ + ‖σ(ρ₀)‖₂² = ρ + margin·ρ^{7/4−11ε−δ}` by damped fixed-point
/// iteration `ρ₀ ← (1−λ)ρ₀ + λ(target − ‖σ(ρ₀)‖₂²)`.
pub fn solve_rho0(
    params: &PhysicalParams,
    opts: &GridOptions,
    margin: f64,
) -> Result<Rho0Solution, KernelError> {
    const MAX_ITER: usize = 60;
    const TOL: f64 = 1e-13;
    let damping = 1.0;
    let rho = params.rho;
    let target = rho + margin * rho.powf(1.75 - 11.0 * params.epsilon - params.delta);
    let rgrid = position_grid(params, opts)?;
    let kgrid = Arc::new(momentum_grid(params, opts)?);
    let sigma_sq = |rho0: f64| -> Result<f64, KernelError> {
        let zt = ZTransform::new(kgrid.clone(), rho0, params.a)?;
        let parts = position_parts(params, rho0, &rgrid, &zt)?;
        let sq: Vec<f64> = parts.sigma.iter().map(|v| v * v).collect();
        Ok(rgrid.volume_integral(&sq))
    };
    let first = sigma_sq(rho)?;
    if first >= rho / 2.0 {
        return Err(KernelError::NotDilute {
            sigma_sq: first,
            half_rho: rho / 2.0,
        });
    }
    let mut rho0 = rho;
    let mut norm = first;
    for it in 1..=MAX_ITER {
        let next = (1.0 - damping) * rho0 + damping * (target - norm);
        if !(next > 0.0) {
            return Err(KernelError::Rho0NonConvergence {
                iterations: it,
                residual: f64::NAN,
            });
        }
        rho0 = next;
        norm = sigma_sq(rho0)?;
        let residual = (rho0 + norm - target).abs() / rho;
        if residual <= TOL {
            return Ok(Rho0Solution {
                rho0,
                sigma_norm_sq: norm,
                iterations: it,
                residual,
            });
        }
    }
    Err(KernelError::Rho0NonConvergence {
        iterations: MAX_ITER,
        residual: (rho0 + norm - target).abs() / rho,
    })
}

/// The full correlation family at a fixed condensate density.
#[derive(Debug, Clone)]
pub struct CorrelationSet {
    pub params: PhysicalParams,
    pub options: GridOptions,
    pub rgrid: Arc<RadialGrid>,
    pub kgrid: Arc<RadialGrid>,
    pub s_hat: RadialProfile,
    pub sigma_hat: RadialProfile,
    pub eta_hat: RadialProfile,
    pub gamma_hat: RadialProfile,
    pub nu_hat: RadialProfile,
    pub g_hat: RadialProfile,
    /// `Z = s + ρ₀ min(1, a/r)`.
    pub z: GradedProfile,
    pub s: GradedProfile,
    pub sigma_tilde: GradedProfile,
    pub sigma: GradedProfile,
    /// `∫σ̃ dx`.
    pub sigma_tilde_integral: f64,
    zt: ZTransform,
}

/// Builds the correlation family at the parameters' condensate density
/// (the total density serves as initial guess when it has not been solved).
pub fn correlation_set(params: &PhysicalParams) -> Result<CorrelationSet, KernelError> {
    CorrelationSet::build(params, &GridOptions::default())
}

impl CorrelationSet {
    pub fn build(params: &PhysicalParams, opts: &GridOptions) -> Result<Self, KernelError> {
        let rho0 = params.rho0_or_rho();
        let mut params = *params;
        params.rho0 = Some(rho0);
        let rgrid = Arc::new(position_grid(&params, opts)?);
        let kgrid = Arc::new(momentum_grid(&params, opts)?);
        let zt = ZTransform::new(kgrid.clone(), rho0, params.a)?;
        let parts = position_parts(&params, rho0, &rgrid, &zt)?;

        let a = params.a;
        let (s_vals, s_grad): (Vec<f64>, Vec<f64>) = rgrid
            .nodes()
            .iter()
            .zip(parts.z.iter().zip(&parts.zp))
            .map(|(&r, (&z, &zp))| {
                let (w, wd) = omega_full(r, a);
                (z - rho0 * w, zp - rho0 * wd)
            })
            .unzip();
        let s_hat_vals = kgrid
            .nodes()
            .iter()
            .map(|&k| s_hat(k, rho0, a))
            .collect::<Result<Vec<_>, _>>()?;
        let s_hat = RadialProfile::new(kgrid.clone(), s_hat_vals, Space::Momentum)?;

        let sigma = GradedProfile::new(&rgrid, parts.sigma, parts.sigma_d)?;
        let sigma_hat = forward_on(&sigma.value, &kgrid)?;
        let mut set = Self {
            params,
            options: *opts,
            s_hat,
            eta_hat: sigma_hat.clone(),
            gamma_hat: sigma_hat.clone(),
            nu_hat: sigma_hat.clone(),
            g_hat: sigma_hat.clone(),
            sigma_hat,
            z: GradedProfile::new(&rgrid, parts.z, parts.zp)?,
            s: GradedProfile::new(&rgrid, s_vals, s_grad)?,
            sigma_tilde: GradedProfile::new(&rgrid, parts.sigma_tilde, parts.sigma_tilde_d)?,
            sigma,
            sigma_tilde_integral: parts.sigma_tilde_integral,
            rgrid,
            kgrid,
            zt,
        };
        set.sigma_tilde.value = set
            .sigma_tilde
            .value
            .clone()
            .with_support_radius(2.0 * params.ell0)?;
        set.refresh_spectral()?;
        Ok(set)
    }

    /// Recomputes `η̂, γ̂, ν̂, ĝ` from `σ̂` and `ŝ`.
    fn refresh_spectral(&mut self) -> Result<(), KernelError> {
        let sh = self.sigma_hat.values();
        let map = |f: &dyn Fn(f64) -> f64| -> Result<RadialProfile, KernelError> {
            Ok(RadialProfile::new(
                self.kgrid.clone(),
                sh.iter().map(|&v| f(v)).collect(),
                Space::Momentum,
            )?)
        };
        self.eta_hat = map(&|v| v.asinh())?;
        self.gamma_hat = map(&|v| v.hypot(1.0))?;
        self.nu_hat = map(&|v| v / v.hypot(1.0))?;
        self.g_hat = self.s_hat.map(|_, s| s.hypot(1.0))?;
        Ok(())
    }

    /// Copy with `σ̃`, `σ` and `σ̂` multiplied by `lambda` (and the derived
    /// spectral kernels recomputed). Used to probe parity properties.
    pub fn with_sigma_scaled(&self, lambda: f64) -> Result<Self, KernelError> {
        let mut out = self.clone();
        let scale = |p: &RadialProfile| p.map(|_, v| lambda * v);
        out.sigma_tilde = GradedProfile {
            value: scale(&self.sigma_tilde.value)?,
            gradient: scale(&self.sigma_tilde.gradient)?,
        };
        out.sigma = GradedProfile {
            value: scale(&self.sigma.value)?,
            gradient: scale(&self.sigma.gradient)?,
        };
        out.sigma_hat = scale(&self.sigma_hat)?;
        out.sigma_tilde_integral *= lambda;
        out.refresh_spectral()?;
        Ok(out)
    }

    pub fn rho0(&self) -> f64 {
        self.params.rho0_or_rho()
    }

    /// `(2π)⁻³ ∫ F(k) d³k` over the momentum grid, `F` given per node.
    pub fn momentum_integral(&self, values: &[f64]) -> f64 {
        self.kgrid.volume_integral(values) / (2.0 * PI).powi(3)
    }

    /// Inverse radial transform of momentum-space samples (on the k-grid),
    /// returning the position-space values and radial derivatives at the
    /// requested radii.
    pub fn spectral_to_position(&self, hat: &[f64], radii: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let kn = self.kgrid.nodes();
        let k1: Vec<f64> = kn.iter().zip(hat).map(|(k, v)| k * v).collect();
        let k2: Vec<f64> = kn.iter().zip(hat).map(|(k, v)| k * k * v).collect();
        let s = self
            .kgrid
            .oscillatory_integrals(&k1, radii, Oscillation::Sin);
        let c = self
            .kgrid
            .oscillatory_integrals(&k2, radii, Oscillation::Cos);
        radii
            .iter()
            .zip(s.iter().zip(&c))
            .map(|(&r, (&s, &c))| {
                let f = s / (2.0 * PI * PI * r);
                (f, -f / r + c / (2.0 * PI * PI * r))
            })
            .unzip()
    }

    /// Values and radial derivatives of a position-space kernel at arbitrary
    /// radii.
    pub fn position_kernel(
        &self,
        kind: PositionKernel,
        radii: &[f64],
    ) -> Result<(Vec<f64>, Vec<f64>), KernelError> {
        let rho0 = self.rho0();
        let p = &self.params;
        match kind {
            PositionKernel::S | PositionKernel::SigmaTilde | PositionKernel::Sigma => {
                let (z, zp) = self.zt.evaluate(radii);
                let mut v = Vec::with_capacity(radii.len());
                let mut d = Vec::with_capacity(radii.len());
                for ((&r, &zi), &zpi) in radii.iter().zip(&z).zip(&zp) {
                    let (a, b) = match kind {
                        PositionKernel::S => {
                            let (w, wd) = omega_full(r, p.a);
                            (zi - rho0 * w, zpi - rho0 * wd)
                        }
                        PositionKernel::SigmaTilde => sigma_tilde_point(p, rho0, r, zi, zpi),
                        _ => {
                            let (t, td) = sigma_tilde_point(p, rho0, r, zi, zpi);
                            let (f, fd) = phi(r / p.ell0)?;
                            let i = self.sigma_tilde_integral;
                            (t - i * f / p.ell0.powi(3), td - i * fd / p.ell0.powi(4))
                        }
                    };
                    v.push(a);
                    d.push(b);
                }
                Ok((v, d))
            }
            PositionKernel::GammaMinusOne => {
                let hat: Vec<f64> = self.gamma_hat.values().iter().map(|g| g - 1.0).collect();
                Ok(self.spectral_to_position(&hat, radii))
            }
            PositionKernel::OneMinusGammaInverse => {
                let hat: Vec<f64> = self
                    .gamma_hat
                    .values()
                    .iter()
                    .map(|g| 1.0 - 1.0 / g)
                    .collect();
                Ok(self.spectral_to_position(&hat, radii))
            }
            PositionKernel::Nu => Ok(self.spectral_to_position(self.nu_hat.values(), radii)),
        }
    }

    /// A position-space kernel on the position grid.
    pub fn position_kernel_on_grid(
        &self,
        kind: PositionKernel,
    ) -> Result<GradedProfile, KernelError> {
        match kind {
            PositionKernel::S => Ok(self.s.clone()),
            PositionKernel::SigmaTilde => Ok(self.sigma_tilde.clone()),
            PositionKernel::Sigma => Ok(self.sigma.clone()),
            _ => {
                let (v, d) = self.position_kernel(kind, self.rgrid.nodes())?;
                GradedProfile::new(&self.rgrid, v, d)
            }
        }
    }

    /// Checks the structural identities of the family, returning the worst
    /// deviation of each.
    pub fn invariants(&self) -> Invariants {
        let sh = self.sigma_hat.values();
        let gh = self.gamma_hat.values();
        let nh = self.nu_hat.values();
        let mut hyperbolic: f64 = 0.0;
        let mut nu_gamma: f64 = 0.0;
        for ((s, g), n) in sh.iter().zip(gh).zip(nh) {
            hyperbolic = hyperbolic.max((g * g - s * s - 1.0).abs());
            nu_gamma = nu_gamma.max((n * g - s).abs() / s.abs().max(f64::MIN_POSITIVE).max(1e-300));
        }
        let g_min = self
            .g_hat
            .values()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        let sigma_hat_zero = self.sigma.value.integral().abs() / self.sigma.value.l1_norm();
        let (l, l0) = (self.params.ell, self.params.ell0);
        let support_violation = self
            .sigma_tilde
            .value
            .nodes()
            .iter()
            .zip(self.sigma_tilde.value.values())
            .filter(|(r, v)| (**r < l || **r > 2.0 * l0) && **v != 0.0)
            .count();
        // ‖∇ν‖² + (∇ν*∇ν*σ*σ)(0) against ‖∇σ‖², all spectrally.
        let kn = self.kgrid.nodes();
        let lhs: Vec<f64> = kn
            .iter()
            .zip(nh.iter().zip(sh))
            .map(|(k, (n, s))| k * k * n * n * (1.0 + s * s))
            .collect();
        let rhs: Vec<f64> = kn.iter().zip(sh).map(|(k, s)| k * k * s * s).collect();
        let lhs = self.momentum_integral(&lhs);
        let rhs = self.momentum_integral(&rhs);
        Invariants {
            hyperbolic,
            nu_gamma,
            sigma_hat_zero,
            g_min,
            support_violation,
            gradient_identity: ((lhs - rhs) / rhs).abs(),
        }
    }
}

/// Worst deviations of the correlation-family identities.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Invariants {
    /// `max |γ̂² − σ̂² − 1|`.
    pub hyperbolic: f64,
    /// `max |ν̂γ̂ − σ̂| / |σ̂|`.
    pub nu_gamma: f64,
    /// `|σ̂(0)| / ‖σ‖₁`.
    pub sigma_hat_zero: f64,
    /// `min ĝ`.
    pub g_min: f64,
    /// Number of σ̃ samples outside `[ℓ, 2ℓ₀]` that are non-zero.
    pub support_violation: usize,
    /// Relative mismatch of `‖∇ν‖² + (∇ν*∇ν*σ*σ)(0) = ‖∇σ‖²`.
    pub gradient_identity: f64,
}

fn forward_on(h: &RadialProfile, kgrid: &Arc<RadialGrid>) -> Result<RadialProfile, KernelError> {
    Ok(crate::lattice::radial_transform_on(
        h,
        crate::lattice::Direction::Forward,
        kgrid.clone(),
        crate::lattice::TransformMethod::Filon,
    )?)
}

/// `θ = χ_{ℓ₀}(2x)[(1 − χ_ℓ(2x))Z − ρ₀ω]` (which equals
/// `−ρ₀ω_ℓχ_ℓ(2x) + χ_{ℓ₀}(2x)(1 − χ_ℓ(2x))s`) and `Z`, each with its
/// analytic radial derivative on the position grid.
pub fn theta_and_z(
    params: &PhysicalParams,
    cs: &CorrelationSet,
) -> Result<(GradedProfile, GradedProfile), KernelError> {
    let rho0 = cs.rho0();
    let (a, l, l0) = (params.a, params.ell, params.ell0);
    let mut theta = Vec::with_capacity(cs.rgrid.len());
    let mut theta_d = Vec::with_capacity(cs.rgrid.len());
    for ((&r, &z), &zp) in cs
        .rgrid
        .nodes()
        .iter()
        .zip(cs.z.value.values())
        .zip(cs.z.gradient.values())
    {
        let (c0, c0d, _) = chi(2.0 * r / l0);
        let c0d = 2.0 / l0 * c0d;
        let (c1, c1d, _) = chi(2.0 * r / l);
        let c1d = 2.0 / l * c1d;
        let (w, wd) = omega_full(r, a);
        let inner = (1.0 - c1) * z - rho0 * w;
        let inner_d = -c1d * z + (1.0 - c1) * zp - rho0 * wd;
        theta.push(c0 * inner);
        theta_d.push(c0d * inner + c0 * inner_d);
    }
    Ok((GradedProfile::new(&cs.rgrid, theta, theta_d)?, cs.z.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::jastrow_f;
    use std::sync::OnceLock;

    fn solved() -> &'static (PhysicalParams, CorrelationSet) {
        static SET: OnceLock<(PhysicalParams, CorrelationSet)> = OnceLock::new();
        SET.get_or_init(|| {
            let p = PhysicalParams::from_gas_parameter(1e-6, 1.0, 0.1, 0.15).unwrap();
            let sol = solve_rho0(&p, &GridOptions::default(), 0.0).unwrap();
            let p = p.with_rho0(sol.rho0).unwrap();
            let cs = correlation_set(&p).unwrap();
            (p, cs)
        })
    }

    #[test]
    fn rho0_solution_has_small_residual() {
        let (p, cs) = solved();
        let rho0 = cs.rho0();
        assert!(rho0 < p.rho);
        let residual = (rho0 + cs.sigma.value.l2_norm_sq() - p.rho).abs() / p.rho;
        assert!(residual <= 1e-10, "{residual}");
    }

    #[test]
    fn invariants_hold() {
        let (_, cs) = solved();
        let inv = cs.invariants();
        assert!(inv.hyperbolic <= 1e-12, "{inv:?}");
        assert!(inv.nu_gamma <= 1e-12, "{inv:?}");
        assert!(inv.sigma_hat_zero <= 1e-10, "{inv:?}");
        assert!(inv.g_min >= 1.0);
        assert_eq!(inv.support_violation, 0);
        assert!(inv.gradient_identity <= 1e-10, "{inv:?}");
    }

    #[test]
    fn sigma_tilde_equals_s_between_the_cutoffs() {
        let (p, cs) = solved();
        for ((&r, &st), &s) in cs
            .rgrid
            .nodes()
            .iter()
            .zip(cs.sigma_tilde.value.values())
            .zip(cs.s.value.values())
        {
            if r >= 4.0 * p.ell && r <= p.ell0 / 2.0 {
                assert!((st - s).abs() <= 1e-12 * s.abs(), "r = {r}");
            }
        }
    }

    #[test]
    fn theta_limits_and_identity() {
        let (p, cs) = solved();
        let rho0 = cs.rho0();
        let (theta, z) = theta_and_z(p, cs).unwrap();
        for (i, &r) in cs.rgrid.nodes().iter().enumerate() {
            let th = theta.value.values()[i];
            if r <= p.a {
                assert!((th + rho0).abs() <= 1e-15 * rho0);
            }
            if r >= 4.0 * p.ell0 {
                assert_eq!(th, 0.0);
            }
            if r >= 4.0 * p.ell && r <= p.ell0 / 2.0 {
                let s = cs.s.value.values()[i];
                assert!((th - s).abs() <= 1e-12 * s.abs());
            }
            // θ + ρ₀ωχ_{ℓ₀}(2x) = χ_{ℓ₀}(2x)(1−χ_ℓ(2x))(ρ₀ω + s).
            let omega = 1.0 - jastrow_f(r, p.a, p.ell).0;
            let c0 = chi(2.0 * r / p.ell0).0;
            let c1 = chi(2.0 * r / p.ell).0;
            let s = cs.s.value.values()[i];
            let lhs = th + rho0 * omega * c0;
            let rhs = c0 * (1.0 - c1) * (rho0 * omega + s);
            assert!((lhs - rhs).abs() <= 1e-12 * rho0, "r = {r}");
            assert_eq!(z.value.values()[i], cs.z.value.values()[i]);
        }
    }

    #[test]
    fn position_kernels_agree_with_grid_values() {
        let (_, cs) = solved();
        let idx: Vec<usize> = (0..cs.rgrid.len()).step_by(97).collect();
        let radii: Vec<f64> = idx.iter().map(|&i| cs.rgrid.nodes()[i]).collect();
        let (v, d) = cs.position_kernel(PositionKernel::Sigma, &radii).unwrap();
        for (j, &i) in idx.iter().enumerate() {
            assert_eq!(v[j], cs.sigma.value.values()[i]);
            assert_eq!(d[j], cs.sigma.gradient.values()[i]);
        }
        // The spectral route reproduces σ from σ̂.
        let (sv, _) = cs.spectral_to_position(cs.sigma_hat.values(), &radii);
        let scale = cs.sigma.value.sup_norm();
        for (a, b) in sv.iter().zip(&v) {
            assert!((a - b).abs() <= 1e-6 * scale, "{a} vs {b}");
        }
    }

    #[test]
    fn s_gradient_matches_finite_difference() {
        let (_, cs) = solved();
        let radii = [3.0, 40.0, 700.0, 5000.0];
        let h = 1e-4;
        let (_, d) = cs.position_kernel(PositionKernel::S, &radii).unwrap();
        for (i, &r) in radii.iter().enumerate() {
            let (v, _) = cs
                .position_kernel(PositionKernel::S, &[r - h * r, r + h * r])
                .unwrap();
            let fd = (v[1] - v[0]) / (2.0 * h * r);
            assert!(
                (fd - d[i]).abs() <= 1e-6 * d[i].abs(),
                "r = {r}: {fd} vs {}",
                d[i]
            );
        }
    }

    #[test]
    fn scaled_sigma_flips_sign() {
        let (_, cs) = solved();
        let m = cs.with_sigma_scaled(-1.0).unwrap();
        assert_eq!(m.sigma_hat.values()[10], -cs.sigma_hat.values()[10]);
        assert_eq!(m.gamma_hat.values(), cs.gamma_hat.values());
    }
}
