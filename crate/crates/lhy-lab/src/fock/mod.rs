//! Exact truncated-Fock-space simulations on a small discrete torus.
//!
//! Sites carry bosonic modes with `[a_i, a_j*] = δ_ij/v`, `v = h^d` the cell
//! volume; internally every operator is built from the standard ladder
//! operators `b_i = √v a_i`. The basis is every occupation tuple with total
//! particle number at most `nmax`, in lexicographic order.

mod checks;
mod kernels;
mod operators;
mod sparse;

use std::collections::HashMap;
use std::f64::consts::PI;

use thiserror::Error;

pub use checks::{
    coherent_state_report, fock_sweep, identity_report, mode_squeezing, observables, trial_state,
    CoherentReport, FockCheckConfig, FockReport, FockState, FockSweep, IdentityKind,
    IdentityResidual, LocalNumber, ModeSqueezing, MonotoneCheck, Observables, ToyInstance,
    TrialSummary, CORE_TOLERANCE,
};
pub use kernels::ToyKernels;
pub use operators::{
    bogoliubov_generator, jastrow, jastrow_at, kinetic, ladder, local_number, number,
    weyl_generator,
};
pub use sparse::{expm_apply, Csr};

use crate::kernels::KernelError;

/// Largest basis accepted unless a different cap is requested.
pub const DEFAULT_DIMENSION_CAP: usize = 2_000_000;

#[derive(Debug, Error)]
pub enum FockError {
    #[error("invalid Fock space: {0}")]
    InvalidSpace(String),
    #[error("basis dimension {dimension} exceeds the cap {cap}")]
    DimensionCap { dimension: u128, cap: usize },
    #[error("site {site} out of range (torus has {sites} sites)")]
    Site { site: usize, sites: usize },
    #[error("pairing kernel is not even: η̂ differs between modes {k} and {minus_k}")]
    AsymmetricEta { k: usize, minus_k: usize },
    #[error("pairing kernel couples to the condensate: η̂ at zero momentum is {0}, must vanish")]
    CondensateCoupling(f64),
    #[error("invalid toy kernel: {0}")]
    Kernel(String),
    #[error("kernel sampling failed: {0}")]
    KernelSampling(#[from] KernelError),
    #[error("truncation budget exceeded: {0}")]
    TailBudget(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// Sites of a `d`-dimensional discrete torus (`d ∈ {1, 3}`) with `m_lin`
/// points per side, and the occupation basis truncated at `nmax` particles.
#[derive(Debug, Clone)]
pub struct FockSpace {
    pub m_lin: usize,
    pub dims: usize,
    pub h: f64,
    pub nmax: usize,
    basis: Vec<Box<[u16]>>,
    index: HashMap<Box<[u16]>, usize>,
}

/// `C(n, k)` without overflow for the sizes of interest.
fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

impl FockSpace {
    pub fn build(m_lin: usize, dims: usize, h: f64, nmax: usize) -> Result<Self, FockError> {
        Self::build_with_cap(m_lin, dims, h, nmax, DEFAULT_DIMENSION_CAP)
    }

    pub fn build_with_cap(
        m_lin: usize,
        dims: usize,
        h: f64,
        nmax: usize,
        cap: usize,
    ) -> Result<Self, FockError> {
        if dims != 1 && dims != 3 {
            return Err(FockError::InvalidSpace(format!(
                "dims must be 1 or 3, got {dims}"
            )));
        }
        if m_lin == 0 || !(h > 0.0 && h.is_finite()) {
            return Err(FockError::InvalidSpace(format!(
                "need at least one site per side and a positive spacing, got m_lin = {m_lin}, h = {h}"
            )));
        }
        if nmax > u16::MAX as usize {
            return Err(FockError::InvalidSpace(format!(
                "nmax = {nmax} is too large"
            )));
        }
        let sites = m_lin.pow(dims as u32);
        let dimension = binomial((sites + nmax) as u128, nmax as u128);
        if dimension > cap as u128 {
            return Err(FockError::DimensionCap { dimension, cap });
        }
        let mut basis = Vec::with_capacity(dimension as usize);
        let mut current = vec![0u16; sites];
        enumerate(&mut current, 0, nmax, &mut basis);
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        Ok(Self {
            m_lin,
            dims,
            h,
            nmax,
            basis,
            index,
        })
    }

    /// Number of sites `M`.
    pub fn sites(&self) -> usize {
        self.m_lin.pow(self.dims as u32)
    }

    /// `h^d`.
    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.dims as i32)
    }

    /// `|Λ| = M h^d`.
    pub fn volume(&self) -> f64 {
        self.sites() as f64 * self.cell_volume()
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn occupation(&self, idx: usize) -> &[u16] {
        &self.basis[idx]
    }

    pub fn index_of(&self, occupation: &[u16]) -> Option<usize> {
        self.index.get(occupation).copied()
    }

    /// Total particle number of a basis state.
    pub fn total(&self, idx: usize) -> usize {
        self.basis[idx].iter().map(|&n| n as usize).sum()
    }

    /// Index of the vacuum.
    pub fn vacuum(&self) -> usize {
        0
    }

    pub(crate) fn check_site(&self, site: usize) -> Result<(), FockError> {
        if site < self.sites() {
            Ok(())
        } else {
            Err(FockError::Site {
                site,
                sites: self.sites(),
            })
        }
    }

    /// Integer coordinates of a site.
    pub fn coords(&self, site: usize) -> [usize; 3] {
        let mut c = [0usize; 3];
        let mut s = site;
        for c in c.iter_mut().take(self.dims) {
            *c = s % self.m_lin;
            s /= self.m_lin;
        }
        c
    }

    fn site_of(&self, c: [usize; 3]) -> usize {
        (0..self.dims)
            .rev()
            .fold(0, |acc, a| acc * self.m_lin + c[a])
    }

    /// Site index of the displacement `i − j` taken modulo the torus.
    pub fn offset(&self, i: usize, j: usize) -> usize {
        let (ci, cj) = (self.coords(i), self.coords(j));
        let mut c = [0usize; 3];
        for a in 0..self.dims {
            c[a] = (ci[a] + self.m_lin - cj[a]) % self.m_lin;
        }
        self.site_of(c)
    }

    /// Site reached from `site` by one step along `axis`.
    pub fn neighbour(&self, site: usize, axis: usize) -> usize {
        let mut c = self.coords(site);
        c[axis] = (c[axis] + 1) % self.m_lin;
        self.site_of(c)
    }

    /// Minimum-image displacement vector of an offset site.
    pub fn displacement(&self, offset: usize) -> [f64; 3] {
        let c = self.coords(offset);
        let mut d = [0.0; 3];
        for a in 0..self.dims {
            let k = c[a] as i64;
            let m = self.m_lin as i64;
            let wrapped = if 2 * k > m { k - m } else { k };
            d[a] = wrapped as f64 * self.h;
        }
        d
    }

    /// Minimum-image distance between two sites.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let d = self.displacement(self.offset(i, j));
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    }

    /// Momentum `2πk/(m_lin h)` of the mode with integer label given by a
    /// site index.
    pub fn momentum(&self, mode: usize) -> [f64; 3] {
        let c = self.coords(mode);
        let unit = 2.0 * PI / (self.m_lin as f64 * self.h);
        let mut p = [0.0; 3];
        for a in 0..self.dims {
            p[a] = unit * c[a] as f64;
        }
        p
    }

    /// Mode index of `−p`.
    pub fn negative_mode(&self, mode: usize) -> usize {
        self.offset(0, mode)
    }

    /// Inverse discrete transform `(1/M) Σ_p ĝ_p cos(p·x)` of an even
    /// momentum-space kernel, per offset site: the coefficient of `b_j` in
    /// `b(g_i)` for `j = i − offset`.
    pub fn convolution_coefficients(&self, hat: &[f64]) -> Vec<f64> {
        let m = self.sites();
        (0..m)
            .map(|off| {
                let x = self.coords(off);
                (0..m)
                    .map(|mode| {
                        let p = self.momentum(mode);
                        let phase: f64 = (0..self.dims).map(|a| p[a] * x[a] as f64 * self.h).sum();
                        hat[mode] * phase.cos()
                    })
                    .sum::<f64>()
                    / m as f64
            })
            .collect()
    }
}

fn enumerate(current: &mut Vec<u16>, pos: usize, remaining: usize, out: &mut Vec<Box<[u16]>>) {
    if pos == current.len() {
        out.push(current.clone().into_boxed_slice());
        return;
    }
    for n in 0..=remaining {
        current[pos] = n as u16;
        enumerate(current, pos + 1, remaining - n, out);
    }
    current[pos] = 0;
}
