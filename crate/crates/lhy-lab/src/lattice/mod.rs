//! Radial and lattice Fourier machinery: three-dimensional radial transforms
//! on composite Gauss–Legendre grids, convolutions, momentum lattices
//! `Λ* = 2πZ³/L`, normalised lattice sums and discrete momentum derivatives.
//!
//! Conventions: `ĥ(k) = ∫ h(x) e^{-ik·x} dx`, which for radial functions is
//! `ĥ(k) = (4π/k) ∫₀^∞ r h(r) sin(kr) dr`, with inverse
//! `h(r) = (1/(2π²r)) ∫₀^∞ k ĥ(k) sin(kr) dk`.

mod grid;
pub mod special;

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

pub use grid::{GridSpec, Oscillation, RadialGrid, DEFAULT_ORDER};
pub use special::{adaptive_integrate, Quadrature};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid under-resolves the oscillation at k = {k:.6e} (panel width {width:.3e})")]
    GridResolution { k: f64, width: f64 },
    #[error("profile is sampled in {found:?} space, expected {expected:?} space")]
    SpaceMismatch { expected: Space, found: Space },
    #[error("sample count {values} does not match grid size {nodes}")]
    LengthMismatch { values: usize, nodes: usize },
    #[error("non-finite sample at r = {at:.6e}")]
    NonFinite { at: f64 },
    #[error("profile declared compact but is non-zero at r = {at:.6e}")]
    SupportViolation { at: f64 },
    #[error("quadrature did not converge ({what}): value {value:.6e}, error {error:.3e}")]
    QuadratureNonConvergence {
        what: String,
        value: f64,
        error: f64,
    },
    #[error("evaluator returned a non-finite value at mode {mode:?}")]
    NonFiniteMode { mode: [i64; 3] },
    #[error(
        "mode block of extent {extent} along axis {axis} is too small for derivative order {order}"
    )]
    InsufficientMargin {
        axis: usize,
        extent: usize,
        order: usize,
    },
    #[error("invalid momentum lattice: {0}")]
    InvalidLattice(String),
}

/// Which variable a radial profile is sampled in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Position,
    Momentum,
}

impl Space {
    pub fn dual(self) -> Self {
        match self {
            Space::Position => Space::Momentum,
            Space::Momentum => Space::Position,
        }
    }
}

/// A radially symmetric function sampled at the nodes of a [`RadialGrid`].
#[derive(Debug, Clone)]
pub struct RadialProfile {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
    space: Space,
    compact: bool,
    /// Grid of the profile this one was transformed from, used as the
    /// default target of the reverse transform.
    origin: Option<Arc<RadialGrid>>,
}

impl RadialProfile {
    /// Wraps samples; fails on length mismatch or non-finite samples.
    pub fn new(
        grid: Arc<RadialGrid>,
        values: Vec<f64>,
        space: Space,
    ) -> Result<Self, LatticeError> {
        if values.len() != grid.len() {
            return Err(LatticeError::LengthMismatch {
                values: values.len(),
                nodes: grid.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(LatticeError::NonFinite {
                at: grid.nodes()[i],
            });
        }
        Ok(Self {
            grid,
            values,
            space,
            compact: false,
            origin: None,
        })
    }

    /// Samples an analytic function at the grid nodes.
    pub fn from_fn<F: Fn(f64) -> f64>(
        grid: Arc<RadialGrid>,
        space: Space,
        f: F,
    ) -> Result<Self, LatticeError> {
        let values = grid.sample(f);
        Self::new(grid, values, space)
    }

    /// Declares the profile to vanish outside the grid span. The samples
    /// themselves are always confined to the span, so this only records the
    /// fact; [`RadialProfile::evaluate`] then returns zero outside.
    pub fn with_compact_support(mut self) -> Self {
        self.compact = true;
        self
    }

    /// Declares compact support inside `[0, radius]` and verifies that all
    /// samples beyond the radius vanish.
    pub fn with_support_radius(mut self, radius: f64) -> Result<Self, LatticeError> {
        for (r, v) in self.grid.nodes().iter().zip(&self.values) {
            if *r > radius && *v != 0.0 {
                return Err(LatticeError::SupportViolation { at: *r });
            }
        }
        self.compact = true;
        Ok(self)
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn nodes(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn is_compact(&self) -> bool {
        self.compact
    }

    /// Pointwise map preserving grid and space.
    pub fn map<F: Fn(f64, f64) -> f64>(&self, f: F) -> Result<Self, LatticeError> {
        let values = self
            .grid
            .nodes()
            .iter()
            .zip(&self.values)
            .map(|(&r, &v)| f(r, v))
            .collect();
        let mut out = Self::new(self.grid.clone(), values, self.space)?;
        out.compact = self.compact;
        out.origin = self.origin.clone();
        Ok(out)
    }

    /// Value at an arbitrary radius: interpolated inside the grid span, zero
    /// outside for compactly supported profiles, `None` otherwise.
    pub fn evaluate(&self, r: f64) -> Option<f64> {
        match self.grid.interpolate(&self.values, r) {
            Some(v) => Some(v),
            None if self.compact && r > self.grid.r_max() => Some(0.0),
            None => None,
        }
    }

    /// `∫ h(x) dx` over ℝ³ (restricted to the grid span).
    pub fn integral(&self) -> f64 {
        self.grid.volume_integral(&self.values)
    }

    /// `∫ |h(x)| dx`.
    pub fn l1_norm(&self) -> f64 {
        let abs: Vec<f64> = self.values.iter().map(|v| v.abs()).collect();
        self.grid.volume_integral(&abs)
    }

    /// `∫ |h(x)|² dx`.
    pub fn l2_norm_sq(&self) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        self.grid.volume_integral(&sq)
    }

    /// Largest absolute sample.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Direction of a radial Fourier transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Quadrature used for the oscillatory transform integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformMethod {
    /// Filon-type integration of the per-panel Legendre interpolant against
    /// `sin(kr)`; valid at any frequency.
    Filon,
    /// Plain Gauss–Legendre quadrature of the full integrand; requires the
    /// oscillation to be resolved by the panel nodes.
    GaussLegendre,
}

/// Transforms a profile onto an explicitly given target grid.
pub fn radial_transform_on(
    h: &RadialProfile,
    direction: Direction,
    target: Arc<RadialGrid>,
    method: TransformMethod,
) -> Result<RadialProfile, LatticeError> {
    let expected = match direction {
        Direction::Forward => Space::Position,
        Direction::Inverse => Space::Momentum,
    };
    if h.space != expected {
        return Err(LatticeError::SpaceMismatch {
            expected,
            found: h.space,
        });
    }
    let src = &h.grid;
    let weighted: Vec<f64> = src
        .nodes()
        .iter()
        .zip(&h.values)
        .map(|(r, v)| r * v)
        .collect();
    let omegas = target.nodes();
    let raw = match method {
        TransformMethod::Filon => src.oscillatory_integrals(&weighted, omegas, Oscillation::Sin),
        TransformMethod::GaussLegendre => {
            let width = src.max_panel_width();
            // At least eight nodes per oscillation period for a panel of the
            // default order.
            let limit = 4.0 * PI * src.order() as f64 / DEFAULT_ORDER as f64;
            if let Some(&k) = omegas.iter().find(|&&k| k * width > limit) {
                return Err(LatticeError::GridResolution { k, width });
            }
            omegas
                .par_iter()
                .map(|&k| {
                    src.nodes()
                        .iter()
                        .zip(src.line_weights())
                        .zip(&weighted)
                        .map(|((&r, &w), &g)| w * g * (k * r).sin())
                        .sum()
                })
                .collect()
        }
    };
    let prefactor = match direction {
        Direction::Forward => 4.0 * PI,
        Direction::Inverse => 1.0 / (2.0 * PI * PI),
    };
    let values = raw
        .iter()
        .zip(omegas)
        .map(|(v, k)| prefactor * v / k)
        .collect();
    let mut out = RadialProfile::new(target, values, expected.dual())?;
    out.origin = Some(src.clone());
    Ok(out)
}

/// Default dual grid for a profile: starts at the origin, covers
/// `k ≤ min(π/Δr_min, 128π/r_max)` with log panels at small argument and
/// panels no wider than `π/r_max` beyond, so the oscillation of the
/// transformed function at period `2π/r_max` is resolved.
pub fn default_dual_grid(grid: &RadialGrid) -> Result<RadialGrid, LatticeError> {
    let r_max = grid.r_max();
    let k_max = (PI / grid.min_spacing()).min(128.0 * PI / r_max);
    let k_min = 1e-3 / r_max;
    GridSpec::log(k_min, k_max, 8.0)
        .with_origin()
        .with_max_width(PI / r_max)
        .build()
}

/// Radial Fourier transform in the given direction using Filon quadrature.
///
/// The target grid is the grid the profile was itself transformed from, if
/// any (so that `inverse(forward(h))` lands on `h`'s grid), and otherwise the
/// [`default_dual_grid`].
pub fn radial_transform(
    h: &RadialProfile,
    direction: Direction,
) -> Result<RadialProfile, LatticeError> {
    let target = match &h.origin {
        Some(g) => g.clone(),
        None => Arc::new(default_dual_grid(&h.grid)?),
    };
    let mut out = radial_transform_on(h, direction, target, TransformMethod::Filon)?;
    // Transforming back onto the grid of a compactly supported profile
    // restores that profile, support included.
    out.compact = h.origin.is_some() && direction == Direction::Inverse;
    Ok(out)
}

/// Radial convolution `f * g`.
///
/// Momentum-space inputs are multiplied pointwise (`g` is interpolated onto
/// `f`'s grid where the grids differ). Position-space inputs are transformed
/// to a common momentum grid, multiplied and transformed back onto `f`'s
/// grid.
pub fn convolve(f: &RadialProfile, g: &RadialProfile) -> Result<RadialProfile, LatticeError> {
    if f.space != g.space {
        return Err(LatticeError::SpaceMismatch {
            expected: f.space,
            found: g.space,
        });
    }
    match f.space {
        Space::Momentum => multiply_momentum(f, g),
        Space::Position => {
            let span = f.grid.r_max().max(g.grid.r_max());
            let spacing = f.grid.min_spacing().min(g.grid.min_spacing());
            let k_max = (PI / spacing).min(256.0 * PI / span);
            let kgrid = Arc::new(
                GridSpec::log(1e-3 / span, k_max, 8.0)
                    .with_origin()
                    .with_max_width(PI / (2.0 * span))
                    .build()?,
            );
            let fh =
                radial_transform_on(f, Direction::Forward, kgrid.clone(), TransformMethod::Filon)?;
            let gh = radial_transform_on(g, Direction::Forward, kgrid, TransformMethod::Filon)?;
            let prod = multiply_momentum(&fh, &gh)?;
            radial_transform_on(
                &prod,
                Direction::Inverse,
                f.grid.clone(),
                TransformMethod::Filon,
            )
        }
    }
}

fn multiply_momentum(f: &RadialProfile, g: &RadialProfile) -> Result<RadialProfile, LatticeError> {
    let values: Vec<f64> = if Arc::ptr_eq(&f.grid, &g.grid) || f.grid.nodes() == g.grid.nodes() {
        f.values.iter().zip(&g.values).map(|(a, b)| a * b).collect()
    } else {
        f.grid
            .nodes()
            .iter()
            .zip(&f.values)
            .map(|(&k, &a)| {
                g.evaluate(k).map(|b| a * b).ok_or_else(|| {
                    LatticeError::InvalidGrid(format!("grids do not overlap at k = {k:.6e}"))
                })
            })
            .collect::<Result<_, _>>()?
    };
    let mut out = RadialProfile::new(f.grid.clone(), values, Space::Momentum)?;
    out.origin = f.origin.clone().or_else(|| g.origin.clone());
    Ok(out)
}

/// Momentum modes `p ∈ 2πZ³/L` with `|p| ≤ k_max`.
#[derive(Debug, Clone)]
pub struct MomentumLattice {
    l: f64,
    kmax: f64,
    modes: Vec<[i64; 3]>,
}

impl MomentumLattice {
    pub fn new(l: f64, kmax: f64) -> Result<Self, LatticeError> {
        if !(l > 0.0 && l.is_finite() && kmax >= 0.0 && kmax.is_finite()) {
            return Err(LatticeError::InvalidLattice(format!(
                "need L > 0 and k_max ≥ 0, got L = {l}, k_max = {kmax}"
            )));
        }
        let unit = 2.0 * PI / l;
        let n = (kmax / unit).floor() as i64;
        let bound = (kmax / unit).powi(2);
        let mut modes = Vec::new();
        for i in -n..=n {
            for j in -n..=n {
                for k in -n..=n {
                    if ((i * i + j * j + k * k) as f64) <= bound * (1.0 + 1e-14) {
                        modes.push([i, j, k]);
                    }
                }
            }
        }
        Ok(Self { l, kmax, modes })
    }

    pub fn side(&self) -> f64 {
        self.l
    }

    pub fn kmax(&self) -> f64 {
        self.kmax
    }

    pub fn volume(&self) -> f64 {
        self.l.powi(3)
    }

    /// Integer labels `n` of the modes `p = 2πn/L`.
    pub fn modes(&self) -> &[[i64; 3]] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Physical momentum of an integer label.
    pub fn momentum(&self, n: &[i64; 3]) -> [f64; 3] {
        let unit = 2.0 * PI / self.l;
        [unit * n[0] as f64, unit * n[1] as f64, unit * n[2] as f64]
    }

    /// Continuum estimate of the mode count, `L³ (4π/3) k_max³ / (2π)³`.
    pub fn ball_count(&self) -> f64 {
        self.volume() * 4.0 * PI / 3.0 * self.kmax.powi(3) / (2.0 * PI).powi(3)
    }
}

/// Normalised lattice sum `|Λ|⁻¹ Σ_p f̂(p)` over the modes of the lattice,
/// optionally skipping `p = 0`.
pub fn lattice_sum<F>(
    fhat: F,
    lattice: &MomentumLattice,
    exclude_zero: bool,
) -> Result<f64, LatticeError>
where
    F: Fn([f64; 3]) -> f64 + Sync,
{
    let total = lattice
        .modes
        .par_iter()
        .filter(|n| !(exclude_zero && **n == [0, 0, 0]))
        .map(|n| {
            let v = fhat(lattice.momentum(n));
            if v.is_finite() {
                Ok(v)
            } else {
                Err(LatticeError::NonFiniteMode { mode: *n })
            }
        })
        .try_reduce(|| 0.0, |a, b| Ok(a + b))?;
    Ok(total / lattice.volume())
}

/// Coefficients on a full rectangular block of modes `n ∈ lo + [0, dims)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeBlock {
    pub l: f64,
    pub lo: [i64; 3],
    pub dims: [usize; 3],
    pub values: Vec<f64>,
}

impl ModeBlock {
    /// Fills the block from an evaluator on physical momenta.
    pub fn from_fn<F: Fn([f64; 3]) -> f64 + Sync>(
        l: f64,
        lo: [i64; 3],
        dims: [usize; 3],
        f: F,
    ) -> Self {
        let unit = 2.0 * PI / l;
        let count = dims[0] * dims[1] * dims[2];
        let values = (0..count)
            .into_par_iter()
            .map(|idx| {
                let n = Self::label_of(lo, dims, idx);
                f([unit * n[0] as f64, unit * n[1] as f64, unit * n[2] as f64])
            })
            .collect();
        Self {
            l,
            lo,
            dims,
            values,
        }
    }

    fn label_of(lo: [i64; 3], dims: [usize; 3], idx: usize) -> [i64; 3] {
        let k = idx % dims[2];
        let j = (idx / dims[2]) % dims[1];
        let i = idx / (dims[1] * dims[2]);
        [lo[0] + i as i64, lo[1] + j as i64, lo[2] + k as i64]
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    /// Integer label of the entry at flat index `idx`.
    pub fn label(&self, idx: usize) -> [i64; 3] {
        Self::label_of(self.lo, self.dims, idx)
    }

    /// Coefficient at integer label `n`, if inside the block.
    pub fn get(&self, n: [i64; 3]) -> Option<f64> {
        let mut ix = [0usize; 3];
        for a in 0..3 {
            let off = n[a] - self.lo[a];
            if off < 0 || off as usize >= self.dims[a] {
                return None;
            }
            ix[a] = off as usize;
        }
        Some(self.values[self.index(ix[0], ix[1], ix[2])])
    }

    /// Inverse Fourier series `|Λ|⁻¹ Σ_n c_n e^{i p_n·x}` at a point. The real
    /// part is returned together with the imaginary part.
    pub fn inverse_at(&self, x: [f64; 3]) -> (f64, f64) {
        let unit = 2.0 * PI / self.l;
        let (re, im) = self
            .values
            .par_iter()
            .enumerate()
            .map(|(idx, c)| {
                let n = self.label(idx);
                let phase = unit * (n[0] as f64 * x[0] + n[1] as f64 * x[1] + n[2] as f64 * x[2]);
                let (s, co) = phase.sin_cos();
                (c * co, c * s)
            })
            .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        let vol = self.l.powi(3);
        (re / vol, im / vol)
    }
}

/// Iterated forward difference `(δ_j f̂)_k = (L/2π)(f̂_{k+2πe_j/L} − f̂_k)`
/// applied `order` times along `axis ∈ {1, 2, 3}`; the block shrinks by
/// `order` entries along that axis.
pub fn discrete_derivative(
    block: &ModeBlock,
    axis: usize,
    order: usize,
) -> Result<ModeBlock, LatticeError> {
    if !(1..=3).contains(&axis) {
        return Err(LatticeError::InvalidLattice(format!(
            "axis must be 1, 2 or 3, got {axis}"
        )));
    }
    let a = axis - 1;
    if block.dims[a] <= order {
        return Err(LatticeError::InsufficientMargin {
            axis,
            extent: block.dims[a],
            order,
        });
    }
    let scale = block.l / (2.0 * PI);
    let mut current = block.clone();
    for _ in 0..order {
        let mut dims = current.dims;
        dims[a] -= 1;
        let mut values = Vec::with_capacity(dims[0] * dims[1] * dims[2]);
        for i in 0..dims[0] {
            for j in 0..dims[1] {
                for k in 0..dims[2] {
                    let mut next = [i, j, k];
                    next[a] += 1;
                    let v1 = current.values[current.index(next[0], next[1], next[2])];
                    let v0 = current.values[current.index(i, j, k)];
                    values.push(scale * (v1 - v0));
                }
            }
        }
        current = ModeBlock {
            l: current.l,
            lo: current.lo,
            dims,
            values,
        };
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn gaussian_profile() -> RadialProfile {
        let grid = Arc::new(
            GridSpec::log(1e-3, 12.0, 8.0)
                .with_origin()
                .build()
                .unwrap(),
        );
        RadialProfile::from_fn(grid, Space::Position, |r| (-r * r / 2.0).exp()).unwrap()
    }

    #[test]
    fn gaussian_transform_matches_closed_form() {
        let h = gaussian_profile();
        let hat = radial_transform(&h, Direction::Forward).unwrap();
        assert_eq!(hat.space(), Space::Momentum);
        for (&k, &v) in hat.nodes().iter().zip(hat.values()) {
            let exact = (2.0 * PI).powf(1.5) * (-k * k / 2.0).exp();
            assert!((v - exact).abs() < 1e-10, "k = {k}: {v} vs {exact}");
        }
    }

    #[test]
    fn round_trip_restores_the_profile() {
        let h = gaussian_profile();
        let back = radial_transform(
            &radial_transform(&h, Direction::Forward).unwrap(),
            Direction::Inverse,
        )
        .unwrap();
        assert!(Arc::ptr_eq(back.grid(), h.grid()));
        let diff: Vec<f64> = back
            .values()
            .iter()
            .zip(h.values())
            .map(|(a, b)| (a - b).powi(2))
            .collect();
        let err = (h.grid().volume_integral(&diff) / h.l2_norm_sq()).sqrt();
        assert!(err < 1e-8, "round-trip error {err}");
    }

    #[test]
    fn delta_shell_surrogate_gives_effective_potential() {
        // 2δ(r−a)/a integrates against (4π/k) r sin(kr) to 8π sin(ka)/k.
        let a: f64 = 1.3;
        for &k in &[0.01f64, 0.7, 3.0, 25.0] {
            let exact = 8.0 * PI * (k * a).sin() / k;
            let shell = 4.0 * PI / k * a * (k * a).sin() * 2.0 / a;
            assert_relative_eq!(shell, exact, max_relative = 1e-14);
        }
    }

    #[test]
    fn zero_profile_transforms_to_zero() {
        let grid = Arc::new(GridSpec::log(0.1, 5.0, 4.0).build().unwrap());
        let h = RadialProfile::from_fn(grid, Space::Position, |_| 0.0).unwrap();
        let hat = radial_transform(&h, Direction::Forward).unwrap();
        assert!(hat.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn gauss_legendre_mode_reports_offending_frequency() {
        let grid = Arc::new(GridSpec::log(0.1, 5.0, 2.0).build().unwrap());
        let h = RadialProfile::from_fn(grid.clone(), Space::Position, |r| (-r).exp()).unwrap();
        let target = Arc::new(RadialGrid::from_edges(vec![0.0, 1.0, 500.0], 4).unwrap());
        match radial_transform_on(
            &h,
            Direction::Forward,
            target,
            TransformMethod::GaussLegendre,
        ) {
            Err(LatticeError::GridResolution { k, .. }) => assert!(k > 1.0),
            other => panic!("expected resolution error, got {other:?}"),
        }
        let low = Arc::new(RadialGrid::from_edges(vec![0.0, 1.0], 4).unwrap());
        let ok = radial_transform_on(
            &h,
            Direction::Forward,
            low.clone(),
            TransformMethod::GaussLegendre,
        )
        .unwrap();
        let filon =
            radial_transform_on(&h, Direction::Forward, low, TransformMethod::Filon).unwrap();
        for (a, b) in ok.values().iter().zip(filon.values()) {
            assert_relative_eq!(a, b, max_relative = 1e-9);
        }
    }

    #[test]
    fn transform_rejects_wrong_space() {
        let h = gaussian_profile();
        assert!(matches!(
            radial_transform(&h, Direction::Inverse),
            Err(LatticeError::SpaceMismatch { .. })
        ));
    }

    #[test]
    fn momentum_convolution_is_pointwise_and_commutes() {
        let grid = Arc::new(GridSpec::log(1e-3, 30.0, 8.0).build().unwrap());
        let f =
            RadialProfile::from_fn(grid.clone(), Space::Momentum, |k| 1.0 / (1.0 + k * k)).unwrap();
        let g = RadialProfile::from_fn(grid.clone(), Space::Momentum, |k| (-k).exp()).unwrap();
        let one = RadialProfile::from_fn(grid, Space::Momentum, |_| 1.0).unwrap();
        let fg = convolve(&f, &g).unwrap();
        let gf = convolve(&g, &f).unwrap();
        for (a, b) in fg.values().iter().zip(gf.values()) {
            assert!((a - b).abs() <= 1e-12 * a.abs());
        }
        assert_eq!(convolve(&f, &one).unwrap().values(), f.values());
    }

    #[test]
    fn position_convolution_of_gaussians_matches_closed_form() {
        // e^{-r²/(2s²)} * e^{-r²/(2t²)} = (2π s²t²/(s²+t²))^{3/2} e^{-r²/(2(s²+t²))}.
        let (s, t) = (0.3, 0.5);
        let grid = Arc::new(
            GridSpec::log(1e-3, 6.0, 16.0)
                .with_origin()
                .build()
                .unwrap(),
        );
        let f = RadialProfile::from_fn(grid.clone(), Space::Position, |r| {
            (-r * r / (2.0 * s * s)).exp()
        })
        .unwrap();
        let g = RadialProfile::from_fn(grid, Space::Position, |r| (-r * r / (2.0 * t * t)).exp())
            .unwrap();
        let c = convolve(&f, &g).unwrap();
        let v = s * s + t * t;
        let pref = (2.0 * PI * s * s * t * t / v).powf(1.5);
        for (&r, &val) in c.nodes().iter().zip(c.values()) {
            let exact = pref * (-r * r / (2.0 * v)).exp();
            assert!((val - exact).abs() <= 1e-6 * pref, "r = {r}");
        }
    }

    #[test]
    fn ball_overlap_at_origin_is_ball_volume() {
        let grid = Arc::new(GridSpec::log(1e-3, 1.0, 8.0).with_origin().build().unwrap());
        let ball = RadialProfile::from_fn(grid, Space::Position, |_| 1.0)
            .unwrap()
            .with_compact_support();
        let c = convolve(&ball, &ball).unwrap();
        let at0 = c.values()[0];
        assert!((at0 - 4.0 * PI / 3.0).abs() < 2e-2, "{at0}");
        // Tent profile: overlap volume π(4+r)(2−r)²/12 for r ≤ 2.
        let r = 0.8;
        let v = c.evaluate(r).unwrap();
        let exact = PI * (4.0 + r) * (2.0 - r).powi(2) / 12.0;
        assert!((v - exact).abs() < 2e-2, "{v} vs {exact}");
    }

    #[test]
    fn mode_count_matches_ball_volume() {
        let lat = MomentumLattice::new(40.0, 3.0).unwrap();
        let count = lat.len() as f64;
        assert!(((count - lat.ball_count()) / lat.ball_count()).abs() < 0.05);
        assert!(lat.modes().contains(&[0, 0, 0]));
        for n in lat.modes() {
            assert!(lat.modes().contains(&[-n[0], -n[1], -n[2]]));
        }
        let sum = lattice_sum(|_| 1.0, &lat, false).unwrap();
        assert_relative_eq!(sum, count / lat.volume(), max_relative = 1e-14);
        assert_eq!(lattice_sum(|_| 0.0, &lat, true).unwrap(), 0.0);
    }

    #[test]
    fn parseval_holds_for_a_gaussian() {
        let lat = MomentumLattice::new(40.0, 14.0).unwrap();
        let sum = lattice_sum(
            |p| {
                let k2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
                (2.0 * PI).powi(3) * (-k2).exp()
            },
            &lat,
            false,
        )
        .unwrap();
        let exact = PI.powf(1.5);
        assert!(((sum - exact) / exact).abs() < 1e-10);
    }

    #[test]
    fn lattice_sum_flags_non_finite_modes() {
        let lat = MomentumLattice::new(10.0, 2.0).unwrap();
        let r = lattice_sum(
            |p| 1.0 / (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]),
            &lat,
            false,
        );
        assert!(matches!(
            r,
            Err(LatticeError::NonFiniteMode { mode: [0, 0, 0] })
        ));
        assert!(lattice_sum(
            |p| 1.0 / (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]),
            &lat,
            true
        )
        .is_ok());
    }

    #[test]
    fn discrete_derivative_of_linear_and_constant_coefficients() {
        let l = 7.0;
        let block = ModeBlock::from_fn(l, [-3, -2, -1], [6, 5, 4], |p| 2.0 + p[1]);
        let d = discrete_derivative(&block, 2, 1).unwrap();
        assert_eq!(d.dims, [6, 4, 4]);
        assert!(d.values.iter().all(|v| (v - 1.0).abs() < 1e-12));
        let dd = discrete_derivative(&block, 2, 2).unwrap();
        assert!(dd.values.iter().all(|v| v.abs() < 1e-12));
        let c = discrete_derivative(&block, 1, 3).unwrap();
        assert!(c.values.iter().all(|v| v.abs() < 1e-12));
        assert!(matches!(
            discrete_derivative(&block, 3, 4),
            Err(LatticeError::InsufficientMargin { .. })
        ));
    }
}
