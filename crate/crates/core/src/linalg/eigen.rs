//! Cyclic Jacobi diagonalization of complex Hermitian matrices.
//!
//! Each rotation zeroes one off-diagonal pair `(p, q)` with the 2×2 unitary
//! `J = diag(1, e^{-iφ}) · [[c, s], [-s, c]]`, where `a_pq = r·e^{iφ}` and
//! `(c, s)` is the real Jacobi rotation for `[[a_pp, r], [r, a_qq]]`.
//! The accumulated product of rotations holds the eigenvectors in its columns.

use num_complex::Complex64;

use super::{MatrixOperator, StateVector, ZERO};
use crate::config::Config;
use crate::error::{Error, Result};

/// Eigenvalues in descending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<StateVector>,
    /// Off-diagonal residual when the sweeps stopped.
    pub residual: f64,
    pub sweeps: usize,
}

impl SpectralDecomposition {
    /// `Σ λᵢ |vᵢ><vᵢ|`.
    pub fn reconstruct(&self) -> MatrixOperator {
        let dim = self.eigenvectors.first().map_or(0, |v| v.dim());
        let mut m = MatrixOperator::zeros(dim);
        for (&lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let a = v.amplitudes();
            for r in 0..dim {
                let ar = a[r] * lambda;
                for (c, ac) in a.iter().enumerate() {
                    m.add_at(r, c, ar * ac.conj());
                }
            }
        }
        m
    }

    /// `max |<vᵢ|vⱼ> - δᵢⱼ|`.
    pub fn orthonormality_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.eigenvectors.iter().enumerate() {
            for (j, b) in self.eigenvectors.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                let d = super::inner_unchecked(a.amplitudes(), b.amplitudes()) - target;
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// Groups eigenvalues closer than `tol` (consecutive in sorted order) and
    /// returns `(mean eigenvalue, indices)` per cluster, descending.
    pub fn clusters(&self, tol: f64) -> Vec<(f64, Vec<usize>)> {
        let mut out: Vec<(f64, Vec<usize>)> = Vec::new();
        for (i, &lambda) in self.eigenvalues.iter().enumerate() {
            match out.last_mut() {
                Some((_, idx)) if (self.eigenvalues[*idx.last().unwrap()] - lambda).abs() < tol => idx.push(i),
                _ => out.push((lambda, vec![i])),
            }
        }
        for (mean, idx) in &mut out {
            *mean = idx.iter().map(|&i| self.eigenvalues[i]).sum::<f64>() / idx.len() as f64;
        }
        out
    }
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[r * n + c].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Diagonalizes a Hermitian matrix.
///
/// Sweeps stop once the off-diagonal Frobenius norm drops below
/// `config.eig · max(1, ‖m‖_F)`; more than `config.max_sweeps` sweeps is an error.
/// The dimension must be a power of two (a qubit register), since the
/// eigenvectors are returned as [`StateVector`]s.
pub fn hermitian_eigen(m: &MatrixOperator, config: &Config) -> Result<SpectralDecomposition> {
    if m.dim() < 2 || !m.dim().is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "eigenvectors need a qubit register, dimension {} is not a power of two >= 2",
            m.dim()
        )));
    }
    let deviation = m.hermiticity_deviation();
    if deviation >= config.herm {
        return Err(Error::NonHermitian { deviation });
    }
    let n = m.dim();
    // Symmetrize so the working copy is exactly Hermitian.
    let mut a = vec![ZERO; n * n];
    for r in 0..n {
        for c in 0..n {
            a[r * n + c] = (m.get(r, c) + m.get(c, r).conj()) * 0.5;
        }
    }
    let mut v = vec![ZERO; n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }

    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    let threshold = config.eig * scale;
    let mut residual = off_diagonal_norm(&a, n);
    let mut sweeps = 0;
    while residual >= threshold {
        if sweeps == config.max_sweeps {
            return Err(Error::NoConvergence { sweeps, residual });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
        residual = off_diagonal_norm(&a, n);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].re.total_cmp(&a[i * n + i].re));
    let eigenvalues = order.iter().map(|&i| a[i * n + i].re).collect();
    let eigenvectors =
        order.iter().map(|&col| StateVector::from_raw_dim((0..n).map(|r| v[r * n + col]).collect())).collect();
    Ok(SpectralDecomposition { eigenvalues, eigenvectors, residual, sweeps })
}

fn rotate(a: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r < f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / r;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J = [[j00, j01], [j10, j11]] acting on the (p, q) plane.
    let j00 = Complex64::new(c, 0.0);
    let j01 = Complex64::new(s, 0.0);
    let j10 = -phase.conj() * s;
    let j11 = phase.conj() * c;

    // A <- A J
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * j00 + akq * j10;
        a[k * n + q] = akp * j01 + akq * j11;
    }
    // A <- J† A
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = j00.conj() * apk + j10.conj() * aqk;
        a[q * n + k] = j01.conj() * apk + j11.conj() * aqk;
    }
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;
    // V <- V J
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * j00 + vkq * j10;
        v[k * n + q] = vkp * j01 + vkq * j11;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(dim: usize, seed: u64) -> MatrixOperator {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..dim * dim).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let a = MatrixOperator::new(dim, data).unwrap();
        &a + &a.adjoint()
    }

    #[test]
    fn diagonal_input() {
        let d = hermitian_eigen(&MatrixOperator::diagonal(&[2.0, 3.0]), &Config::default()).unwrap();
        assert_eq!(d.eigenvalues, vec![3.0, 2.0]);
        assert_eq!(d.eigenvectors[0], StateVector::basis(1, 1).unwrap());
        assert_eq!(d.eigenvectors[1], StateVector::basis(1, 0).unwrap());
        assert_eq!(d.sweeps, 0);
    }

    #[test]
    fn pauli_x() {
        let d = hermitian_eigen(&pauli::x(), &Config::default()).unwrap();
        assert!((d.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!((d.eigenvalues[1] + 1.0).abs() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::from_real(&[s, s]).unwrap();
        let minus = StateVector::from_real(&[s, -s]).unwrap();
        assert!((d.eigenvectors[0].fidelity(&plus).unwrap() - 1.0).abs() < 1e-14);
        assert!((d.eigenvectors[1].fidelity(&minus).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_y_complex_eigenvectors() {
        let d = hermitian_eigen(&pauli::y(), &Config::default()).unwrap();
        assert!(d.reconstruct().max_abs_diff(&pauli::y()).unwrap() < 1e-14);
        assert!(d.orthonormality_deviation() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = MatrixOperator::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(hermitian_eigen(&m, &Config::default()), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn reports_non_convergence() {
        let config = Config { max_sweeps: 0, ..Config::default() };
        let err = hermitian_eigen(&random_hermitian(8, 1), &config).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { sweeps: 0, residual } if residual > 0.1));
    }

    #[test]
    fn random_reconstruction() {
        let config = Config::default();
        for seed in 0..20 {
            let dim = 2 << (seed as usize % 4);
            let m = random_hermitian(dim, seed);
            let d = hermitian_eigen(&m, &config).unwrap();
            assert!(d.reconstruct().max_abs_diff(&m).unwrap() < config.recon);
            assert!(d.orthonormality_deviation() < config.orth);
            assert!(d.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn clustering_degenerate_spectrum() {
        let d = hermitian_eigen(
            &MatrixOperator::diagonal(&[0.0, 1.0, 0.0, 1e-12, -1.0, 2.0, 2.0 + 1e-9, 5.0]),
            &Config::default(),
        )
        .unwrap();
        let clusters = d.clusters(1e-8);
        let sizes: Vec<usize> = clusters.iter().map(|(_, i)| i.len()).collect();
        assert_eq!(sizes, vec![1, 2, 1, 3, 1]);
        assert!(hermitian_eigen(&MatrixOperator::diagonal(&[1.0, 2.0, 3.0]), &Config::default()).is_err());
    }
}
