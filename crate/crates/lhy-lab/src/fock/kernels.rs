//! Correlation kernels sampled on the sites and modes of a toy torus.

use std::f64::consts::PI;

use super::{FockError, FockSpace};
use crate::kernels::{jastrow_f, CorrelationSet};

/// Jastrow profile `f` per offset site and pairing kernel `η̂` per momentum
/// mode, both indexed like the sites of the torus.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyKernels {
    pub f: Vec<f64>,
    pub eta_hat: Vec<f64>,
}

/// Magnitude of the minimum-image momentum of a mode.
pub(crate) fn mode_magnitude(space: &FockSpace, mode: usize) -> f64 {
    let c = space.coords(mode);
    let unit = 2.0 * PI / (space.m_lin as f64 * space.h);
    (0..space.dims)
        .map(|a| {
            let k = c[a] as i64;
            let m = space.m_lin as i64;
            let wrapped = if 2 * k > m { k - m } else { k };
            (unit * wrapped as f64).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

impl ToyKernels {
    /// Validates lengths, finiteness, `0 ≤ f ≤ 1`, and evenness of both
    /// kernels under `x → −x`.
    pub fn new(space: &FockSpace, f: Vec<f64>, eta_hat: Vec<f64>) -> Result<Self, FockError> {
        let m = space.sites();
        if f.len() != m {
            return Err(FockError::Kernel(format!(
                "Jastrow profile has {} values but the torus has {m} site offsets",
                f.len()
            )));
        }
        if eta_hat.len() != m {
            return Err(FockError::Kernel(format!(
                "pairing kernel has {} values but the torus has {m} modes",
                eta_hat.len()
            )));
        }
        if let Some(v) = f.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(FockError::Kernel(format!(
                "Jastrow profile must lie in [0, 1], found {v}"
            )));
        }
        if let Some(v) = eta_hat.iter().find(|v| !v.is_finite()) {
            return Err(FockError::Kernel(format!(
                "pairing kernel must be finite, found {v}"
            )));
        }
        for k in 0..m {
            let minus_k = space.negative_mode(k);
            if f[k] != f[minus_k] {
                return Err(FockError::Kernel(format!(
                    "Jastrow profile differs between offsets {k} and {minus_k}"
                )));
            }
            if eta_hat[k] != eta_hat[minus_k] {
                return Err(FockError::AsymmetricEta { k, minus_k });
            }
        }
        Ok(Self { f, eta_hat })
    }

    /// Samples radial profiles: `f` at the minimum-image distance of every
    /// offset, `η̂` at the minimum-image momentum magnitude of every mode.
    pub fn from_functions(
        space: &FockSpace,
        f: impl Fn(f64) -> f64,
        eta_hat: impl Fn(f64) -> f64,
    ) -> Result<Self, FockError> {
        let m = space.sites();
        let fv = (0..m).map(|o| f(space.distance(o, 0))).collect();
        let ev = (0..m).map(|p| eta_hat(mode_magnitude(space, p))).collect();
        Self::new(space, fv, ev)
    }

    /// Short-range synthetic profiles: a hard core on site,
    /// `f(r) = 1 − 0.25·0.4^{r/h − 1}` off site, and
    /// `η̂(p) = 0.52u − 0.44u²` with `u = |p|h/π` (so `η̂₀ = 0`).
    pub fn synthetic(space: &FockSpace) -> Result<Self, FockError> {
        let h = space.h;
        Self::from_functions(
            space,
            |r| {
                if r == 0.0 {
                    0.0
                } else {
                    1.0 - 0.25 * 0.4f64.powf(r / h - 1.0)
                }
            },
            |p| {
                let u = p * h / PI;
                0.52 * u - 0.44 * u * u
            },
        )
    }

    /// Samples the physical kernels: the Jastrow profile `f_ℓ` and
    /// `η̂ = asinh σ̂` of a correlation family (zero beyond its momentum
    /// grid and at `p = 0`).
    pub fn from_correlation_set(space: &FockSpace, cs: &CorrelationSet) -> Result<Self, FockError> {
        let (a, ell) = (cs.params.a, cs.params.ell);
        Self::from_functions(
            space,
            |r| jastrow_f(r, a, ell).0,
            |p| {
                if p == 0.0 {
                    0.0
                } else {
                    cs.eta_hat.evaluate(p).unwrap_or(0.0)
                }
            },
        )
    }

    pub(crate) fn check_space(&self, space: &FockSpace) -> Result<(), FockError> {
        if self.f.len() == space.sites() && self.eta_hat.len() == space.sites() {
            Ok(())
        } else {
            Err(FockError::Kernel(format!(
                "kernels sampled for {} sites used on a torus with {}",
                self.f.len(),
                space.sites()
            )))
        }
    }

    pub fn sigma_hat(&self) -> Vec<f64> {
        self.eta_hat.iter().map(|e| e.sinh()).collect()
    }

    pub fn gamma_hat(&self) -> Vec<f64> {
        self.eta_hat.iter().map(|e| e.cosh()).collect()
    }

    /// `ν̂ = σ̂/γ̂ = tanh η̂`.
    pub fn nu_hat(&self) -> Vec<f64> {
        self.eta_hat.iter().map(|e| e.tanh()).collect()
    }

    /// `ω = 1 − f` per offset site.
    pub fn omega(&self) -> Vec<f64> {
        self.f.iter().map(|f| 1.0 - f).collect()
    }

    /// `Σ_p σ̂_p²`, the expected number of pair excitations.
    pub fn pair_excitations(&self) -> f64 {
        self.eta_hat.iter().map(|e| e.sinh().powi(2)).sum()
    }

    /// Rejects a pairing kernel that acts on the zero mode.
    pub(crate) fn require_decoupled_condensate(&self) -> Result<(), FockError> {
        match self.eta_hat.first() {
            Some(&e) if e != 0.0 => Err(FockError::CondensateCoupling(e)),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_profiles_on_the_default_torus() {
        let s = FockSpace::build(4, 1, 1.0, 1).unwrap();
        let k = ToyKernels::synthetic(&s).unwrap();
        let expected_f = [0.0, 0.75, 0.9, 0.75];
        let expected_eta = [0.0, 0.15, 0.08, 0.15];
        for i in 0..4 {
            assert!((k.f[i] - expected_f[i]).abs() < 1e-15);
            assert!((k.eta_hat[i] - expected_eta[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn asymmetric_pairing_is_rejected() {
        let s = FockSpace::build(4, 1, 1.0, 1).unwrap();
        let err = ToyKernels::new(&s, vec![1.0; 4], vec![0.0, 0.1, 0.0, 0.2]).unwrap_err();
        assert!(matches!(err, FockError::AsymmetricEta { k: 1, minus_k: 3 }));
        assert!(ToyKernels::new(&s, vec![1.0; 3], vec![0.0; 4]).is_err());
        assert!(ToyKernels::new(&s, vec![1.5; 4], vec![0.0; 4]).is_err());
    }

    #[test]
    fn condensate_coupling_is_flagged() {
        let s = FockSpace::build(2, 1, 1.0, 1).unwrap();
        let k = ToyKernels::new(&s, vec![1.0; 2], vec![0.1, 0.0]).unwrap();
        assert!(matches!(
            k.require_decoupled_condensate(),
            Err(FockError::CondensateCoupling(_))
        ));
    }

    #[test]
    fn spectral_kernels_satisfy_the_hyperbolic_identity() {
        let s = FockSpace::build(4, 1, 1.0, 1).unwrap();
        let k = ToyKernels::synthetic(&s).unwrap();
        for ((g, sg), nu) in k.gamma_hat().iter().zip(k.sigma_hat()).zip(k.nu_hat()) {
            assert!((g * g - sg * sg - 1.0).abs() < 1e-15);
            assert!((nu - sg / g).abs() < 1e-15);
        }
    }
}
