//! Operators on the truncated occupation basis.

use super::kernels::ToyKernels;
use super::sparse::Csr;
use super::{FockError, FockSpace};

/// Standard lowering operator `b_i|n⟩ = √n_i |n − e_i⟩`.
pub(crate) fn lowering(space: &FockSpace, site: usize) -> Csr {
    let d = space.dimension();
    let mut t = Vec::new();
    let mut target = vec![0u16; space.sites()];
    for col in 0..d {
        let n = space.occupation(col);
        if n[site] == 0 {
            continue;
        }
        target.copy_from_slice(n);
        target[site] -= 1;
        let row = space
            .index_of(&target)
            .expect("lowered state is in the basis");
        t.push((row, col, (n[site] as f64).sqrt()));
    }
    Csr::from_triplets(d, d, t)
}

/// `(a_i, a_i*)` with `[a_i, a_j*] = δ_ij/h^d` below the cutoff shell.
pub fn ladder(space: &FockSpace, site: usize) -> Result<(Csr, Csr), FockError> {
    space.check_site(site)?;
    let scale = 1.0 / space.cell_volume().sqrt();
    let b = lowering(space, site);
    let a = b.combine(scale, &b, 0.0)?;
    let a_star = a.transpose();
    Ok((a, a_star))
}

/// Total number operator `N = h^d Σ a_i* a_i` (diagonal).
pub fn number(space: &FockSpace) -> Csr {
    let v: Vec<f64> = (0..space.dimension())
        .map(|i| space.total(i) as f64)
        .collect();
    Csr::diagonal(&v)
}

/// `N_r(w)`: particles on sites within distance `r` of site `w`.
pub fn local_number(space: &FockSpace, w: usize, r: f64) -> Result<Csr, FockError> {
    space.check_site(w)?;
    let inside: Vec<usize> = (0..space.sites())
        .filter(|&y| space.distance(w, y) <= r)
        .collect();
    let v: Vec<f64> = (0..space.dimension())
        .map(|i| {
            let n = space.occupation(i);
            inside.iter().map(|&y| n[y] as f64).sum()
        })
        .collect();
    Ok(Csr::diagonal(&v))
}

/// Kinetic energy `h^d Σ_i Σ_axes |(a_{i+e} − a_i)/h|²` with forward
/// differences on the torus.
pub fn kinetic(space: &FockSpace) -> Result<Csr, FockError> {
    let d = space.dimension();
    let lowers: Vec<Csr> = (0..space.sites()).map(|i| lowering(space, i)).collect();
    let mut total = Csr::from_triplets(d, d, Vec::new());
    let inv_h2 = 1.0 / (space.h * space.h);
    for i in 0..space.sites() {
        for axis in 0..space.dims {
            let j = space.neighbour(i, axis);
            if j == i {
                continue;
            }
            let diff = lowers[j].combine(1.0, &lowers[i], -1.0)?;
            let term = diff.transpose().matmul(&diff)?;
            total = total.combine(1.0, &term, inv_h2)?;
        }
    }
    Ok(total)
}

/// Generator of the Weyl operator, `√(ρ₀ h^d) Σ_i (b_i* − b_i)`, so that
/// `W = exp(G)` shifts every `a_i` by `√ρ₀`.
pub fn weyl_generator(space: &FockSpace, rho0: f64) -> Result<Csr, FockError> {
    if !(rho0 >= 0.0 && rho0.is_finite()) {
        return Err(FockError::InvalidSpace(format!(
            "ρ₀ must be non-negative, got {rho0}"
        )));
    }
    let d = space.dimension();
    let c = (rho0 * space.cell_volume()).sqrt();
    let mut t = Vec::new();
    for i in 0..space.sites() {
        for (r, col, v) in lowering(space, i).triplets() {
            t.push((r, col, -c * v));
            t.push((col, r, c * v));
        }
    }
    Ok(Csr::from_triplets(d, d, t))
}

/// Generator `½ Σ_ij E_ij (b_i* b_j* − b_i b_j)` of the Bogoliubov
/// transformation, with `E` the position-space form of `η̂`.
pub fn bogoliubov_generator(space: &FockSpace, kernels: &ToyKernels) -> Result<Csr, FockError> {
    kernels.check_space(space)?;
    let d = space.dimension();
    let e = space.convolution_coefficients(&kernels.eta_hat);
    let lowers: Vec<Csr> = (0..space.sites()).map(|i| lowering(space, i)).collect();
    let mut t = Vec::new();
    for i in 0..space.sites() {
        for j in 0..space.sites() {
            let c = 0.5 * e[space.offset(i, j)];
            if c == 0.0 {
                continue;
            }
            let pair = lowers[i].matmul(&lowers[j])?;
            for (r, col, v) in pair.triplets() {
                t.push((r, col, -c * v));
                t.push((col, r, c * v));
            }
        }
    }
    Ok(Csr::from_triplets(d, d, t))
}

/// Diagonal of the Jastrow factor `J`: `∏_{pairs} f(x_p − x_q)` over the
/// particles of each basis state (particles sharing a site contribute
/// `f(0)`).
pub fn jastrow(space: &FockSpace, kernels: &ToyKernels) -> Result<Vec<f64>, FockError> {
    kernels.check_space(space)?;
    let m = space.sites();
    Ok((0..space.dimension())
        .map(|idx| {
            let n = space.occupation(idx);
            let mut prod = 1.0;
            for k in 0..m {
                if n[k] == 0 {
                    continue;
                }
                let nk = n[k] as i32;
                prod *= kernels.f[0].powi(nk * (nk - 1) / 2);
                for (l, &nl) in n.iter().enumerate().skip(k + 1) {
                    if nl > 0 {
                        prod *= kernels.f[space.offset(k, l)].powi(nk * nl as i32);
                    }
                }
            }
            prod
        })
        .collect())
}

/// Diagonal of `J(x_i) = ∏_p f(x_i − x_p)` over the particles.
pub fn jastrow_at(
    space: &FockSpace,
    kernels: &ToyKernels,
    site: usize,
) -> Result<Vec<f64>, FockError> {
    kernels.check_space(space)?;
    space.check_site(site)?;
    Ok((0..space.dimension())
        .map(|idx| {
            let n = space.occupation(idx);
            (0..space.sites())
                .filter(|&k| n[k] > 0)
                .map(|k| kernels.f[space.offset(site, k)].powi(n[k] as i32))
                .product()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::sparse::dot;

    fn unit(space: &FockSpace, occ: &[u16]) -> Vec<f64> {
        let mut v = vec![0.0; space.dimension()];
        v[space.index_of(occ).unwrap()] = 1.0;
        v
    }

    #[test]
    fn single_mode_ladder() {
        let s = FockSpace::build(1, 1, 0.5, 3).unwrap();
        let (_, a_star) = ladder(&s, 0).unwrap();
        let v = a_star.matvec(&unit(&s, &[1]));
        let expected = 2f64.sqrt() / 0.5f64.sqrt();
        assert!((v[s.index_of(&[2]).unwrap()] - expected).abs() < 1e-14);
    }

    #[test]
    fn canonical_commutators_below_the_cutoff() {
        let s = FockSpace::build(3, 1, 0.7, 4).unwrap();
        let v = s.cell_volume();
        let ops: Vec<_> = (0..3).map(|i| ladder(&s, i).unwrap()).collect();
        for (i, (ai, _)) in ops.iter().enumerate() {
            for (j, (_, aj_star)) in ops.iter().enumerate() {
                let c = ai
                    .matmul(aj_star)
                    .unwrap()
                    .combine(1.0, &aj_star.matmul(ai).unwrap(), -1.0)
                    .unwrap();
                for col in (0..s.dimension()).filter(|&c| s.total(c) < s.nmax) {
                    for row in 0..s.dimension() {
                        let expected = if row == col && i == j { 1.0 / v } else { 0.0 };
                        assert!((c.get(row, col) - expected).abs() < 1e-13);
                    }
                }
            }
        }
        // a_i Ω = 0.
        let omega = unit(&s, &[0, 0, 0]);
        assert!(ops[0].0.matvec(&omega).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn number_operator_matches_ladders() {
        let s = FockSpace::build(2, 1, 0.5, 3).unwrap();
        let n = number(&s);
        let mut sum = Csr::from_triplets(s.dimension(), s.dimension(), vec![]);
        for i in 0..2 {
            let (a, a_star) = ladder(&s, i).unwrap();
            sum = sum
                .combine(1.0, &a_star.matmul(&a).unwrap(), s.cell_volume())
                .unwrap();
        }
        assert!(n.combine(1.0, &sum, -1.0).unwrap().max_abs() < 1e-13);
        let spectrum: Vec<f64> = (0..s.dimension()).map(|i| n.get(i, i)).collect();
        assert!(spectrum.iter().all(|x| x.fract() == 0.0 && *x <= 3.0));
    }

    #[test]
    fn kinetic_energy_of_a_uniform_state_vanishes() {
        let s = FockSpace::build(4, 1, 1.0, 2).unwrap();
        let k = kinetic(&s).unwrap();
        // One particle in the zero-momentum mode: (1/2) Σ_i b_i* Ω.
        let mut psi = vec![0.0; s.dimension()];
        for i in 0..4 {
            let mut occ = [0u16; 4];
            occ[i] = 1;
            psi[s.index_of(&occ).unwrap()] = 0.5;
        }
        assert!(dot(&psi, &k.matvec(&psi)).abs() < 1e-14);
        // A particle on one site: ⟨K⟩ = 2/h² (two bonds).
        let single = unit(&s, &[1, 0, 0, 0]);
        assert!((dot(&single, &k.matvec(&single)) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn local_number_is_additive() {
        let s = FockSpace::build(2, 3, 1.0, 3).unwrap();
        let whole = local_number(&s, 0, 10.0).unwrap();
        assert!(whole.combine(1.0, &number(&s), -1.0).unwrap().max_abs() == 0.0);
        let own = local_number(&s, 5, 0.0).unwrap();
        let mut sum = Csr::from_triplets(s.dimension(), s.dimension(), vec![]);
        for w in 0..8 {
            sum = sum
                .combine(1.0, &local_number(&s, w, 0.0).unwrap(), 1.0)
                .unwrap();
        }
        assert!(sum.combine(1.0, &number(&s), -1.0).unwrap().max_abs() == 0.0);
        assert!(own.is_diagonal());
    }

    #[test]
    fn generators_are_antisymmetric() {
        let s = FockSpace::build(4, 1, 1.0, 4).unwrap();
        let k = ToyKernels::synthetic(&s).unwrap();
        for g in [
            weyl_generator(&s, 0.2).unwrap(),
            bogoliubov_generator(&s, &k).unwrap(),
        ] {
            assert!(g.combine(1.0, &g.transpose(), 1.0).unwrap().max_abs() < 1e-15);
        }
    }

    #[test]
    fn jastrow_of_two_particles() {
        let s = FockSpace::build(4, 1, 1.0, 2).unwrap();
        let k = ToyKernels::synthetic(&s).unwrap();
        let j = jastrow(&s, &k).unwrap();
        let idx = s.index_of(&[1, 1, 0, 0]).unwrap();
        assert_eq!(j[idx], k.f[1]);
        let ones = ToyKernels::new(&s, vec![1.0; 4], k.eta_hat.clone()).unwrap();
        assert!(jastrow(&s, &ones).unwrap().iter().all(|&x| x == 1.0));
    }
}
