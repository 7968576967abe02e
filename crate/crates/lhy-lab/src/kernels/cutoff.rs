//! Smooth cutoff functions: the plateau cutoff `χ` and the condensate
//! compensator profile `φ`.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use crate::lattice::{adaptive_integrate, GridSpec, RadialProfile, Space};

use super::KernelError;

/// Value and first two derivatives of the smooth step
/// `S(u) = ψ(u)/(ψ(u)+ψ(1−u))`, `ψ(u) = e^{−1/u}` for `u > 0`.
///
/// `S` vanishes for `u ≤ 0`, equals one for `u ≥ 1` and is C∞.
pub fn smooth_step(u: f64) -> (f64, f64, f64) {
    if u <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    if u >= 1.0 {
        return (1.0, 0.0, 0.0);
    }
    let v = 1.0 - u;
    // S = 1/(1+e^g) with g = 1/u − 1/v.
    let g = 1.0 / u - 1.0 / v;
    let g1 = -1.0 / (u * u) - 1.0 / (v * v);
    let g2 = 2.0 / (u * u * u) - 2.0 / (v * v * v);
    let e = (-g.abs()).exp();
    let s = if g > 0.0 {
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + e)
    };
    // S(1−S) = e^{−|g|}/(1+e^{−|g|})², computed without overflow.
    let p = e / ((1.0 + e) * (1.0 + e));
    if p == 0.0 {
        return (s, 0.0, 0.0);
    }
    let d1 = -p * g1;
    let d2 = -d1 * (1.0 - 2.0 * s) * g1 - p * g2;
    (s, d1, d2)
}

/// The plateau cutoff `χ(t)`: one for `t ≤ 2`, zero for `t ≥ 4`,
/// `1 − S((t−2)/2)` in between. Returns `(χ, χ', χ'')`.
pub fn chi(t: f64) -> (f64, f64, f64) {
    let (s, d1, d2) = smooth_step((t - 2.0) / 2.0);
    (1.0 - s, -0.5 * d1, -0.25 * d2)
}

/// `χ(r/scale)`: the cutoff at length scale `scale`.
pub fn smooth_cutoff(r: f64, scale: f64) -> f64 {
    debug_assert!(scale > 0.0);
    chi(r / scale).0
}

/// Smooth plateau bump `B₁`: one on `[0, 1]`, zero beyond `1.5`.
fn plateau(t: f64) -> (f64, f64) {
    let (s, d1, _) = smooth_step((t - 1.0) / 0.5);
    (1.0 - s, -2.0 * d1)
}

/// Smooth bump `B₂` supported in `(1.5, 2)` with peak value one.
fn shell(t: f64) -> (f64, f64) {
    let u = (t - 1.5) / 0.5;
    if u <= 0.0 || u >= 1.0 {
        return (0.0, 0.0);
    }
    let v = 1.0 - u;
    let b = (4.0 - 1.0 / u - 1.0 / v).exp();
    (b, b * (1.0 / (u * u) - 1.0 / (v * v)) * 2.0)
}

/// Weight of the negative shell that makes `∫φ = 1`.
pub fn phi_shell_weight() -> Result<f64, KernelError> {
    static WEIGHT: OnceLock<Result<f64, KernelError>> = OnceLock::new();
    WEIGHT
        .get_or_init(|| {
            let tol = 1e-15;
            let plateau_edge = adaptive_integrate(
                |t| 4.0 * PI * t * t * plateau(t).0,
                1.0,
                1.5,
                0.0,
                tol,
                2000,
            )
            .map_err(|e| KernelError::Calibration(e.to_string()))?;
            let shell_int =
                adaptive_integrate(|t| 4.0 * PI * t * t * shell(t).0, 1.5, 2.0, 0.0, tol, 2000)
                    .map_err(|e| KernelError::Calibration(e.to_string()))?;
            let plateau_int = 4.0 * PI / 3.0 + plateau_edge.value;
            let c = (1.0 - 0.5 * plateau_int) / shell_int.value;
            if c.is_finite() {
                Ok(c)
            } else {
                Err(KernelError::Calibration("shell integral vanished".into()))
            }
        })
        .clone()
}

/// The compensator `φ(t)` and its derivative: `1/2` for `t ≤ 1`, zero for
/// `t ≥ 2`, smooth, with `∫_{ℝ³} φ = 1`. Because the plateau alone carries
/// more than unit mass, the shell contribution is negative.
pub fn phi(t: f64) -> Result<(f64, f64), KernelError> {
    let c = phi_shell_weight()?;
    let (b1, d1) = plateau(t);
    let (b2, d2) = shell(t);
    Ok((0.5 * b1 + c * b2, 0.5 * d1 + c * d2))
}

/// `x ↦ φ(x/ℓ₀)/ℓ₀³` sampled on a grid over `[0, 2ℓ₀]`.
pub fn phi_profile(ell0: f64) -> Result<RadialProfile, KernelError> {
    if !(ell0 > 0.0 && ell0.is_finite()) {
        return Err(KernelError::InvalidParams(format!(
            "ℓ₀ must be positive, got {ell0}"
        )));
    }
    let grid = GridSpec::log(1e-3 * ell0, 2.0 * ell0, 8.0)
        .with_origin()
        .with_breakpoints([ell0, 1.5 * ell0])
        .with_band(ell0, 2.0 * ell0, 8)
        .build()?;
    let values = grid
        .nodes()
        .iter()
        .map(|&r| phi(r / ell0).map(|p| p.0 / ell0.powi(3)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RadialProfile::new(Arc::new(grid), values, Space::Position)?.with_compact_support())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cutoff_plateau_support_and_midpoint() {
        assert_eq!(smooth_cutoff(1.0, 1.0), 1.0);
        assert_eq!(smooth_cutoff(2.0, 1.0), 1.0);
        assert_eq!(smooth_cutoff(5.0, 1.0), 0.0);
        assert_eq!(smooth_cutoff(4.0, 1.0), 0.0);
        assert_relative_eq!(smooth_cutoff(3.0, 1.0), 0.5, epsilon = 1e-15);
        assert_relative_eq!(smooth_cutoff(30.0, 10.0), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn cutoff_is_monotone_with_consistent_derivatives() {
        let mut prev = 1.0;
        for i in 0..=400 {
            let t = 2.0 + 2.0 * i as f64 / 400.0;
            let (v, d1, d2) = chi(t);
            assert!(v <= prev + 1e-15 && d1 <= 0.0);
            prev = v;
            let h = 1e-5;
            if t > 2.0 + h && t < 4.0 - h {
                let fd1 = (chi(t + h).0 - chi(t - h).0) / (2.0 * h);
                let fd2 = (chi(t + h).1 - chi(t - h).1) / (2.0 * h);
                assert!((fd1 - d1).abs() < 1e-7, "t = {t}");
                assert!((fd2 - d2).abs() < 1e-6, "t = {t}");
            }
        }
        // Derivatives vanish to all orders at the edges.
        assert_eq!(chi(2.0 + 1e-4).1, 0.0);
        assert_eq!(chi(4.0 - 1e-4).2, 0.0);
    }

    #[test]
    fn phi_plateau_support_and_normalisation() {
        let (v, d) = phi(0.5).unwrap();
        assert_eq!(v, 0.5);
        assert_eq!(d, 0.0);
        assert_eq!(phi(3.0).unwrap(), (0.0, 0.0));
        assert!(phi_shell_weight().unwrap() < 0.0);
        let ell0 = 37.0;
        let p = phi_profile(ell0).unwrap();
        assert_relative_eq!(p.integral(), 1.0, max_relative = 1e-9);
        assert_relative_eq!(
            p.evaluate(0.5 * ell0).unwrap(),
            0.5 / ell0.powi(3),
            max_relative = 1e-12
        );
        assert_eq!(p.evaluate(3.0 * ell0), Some(0.0));
    }

    #[test]
    fn phi_derivative_is_analytic() {
        for i in 1..200 {
            let t = 1.0 + i as f64 / 200.0;
            let h = 1e-6;
            let fd = (phi(t + h).unwrap().0 - phi(t - h).unwrap().0) / (2.0 * h);
            let d = phi(t).unwrap().1;
            assert!(
                (fd - d).abs() < 1e-5 * (1.0 + d.abs()),
                "t = {t}: {fd} vs {d}"
            );
        }
    }
}
