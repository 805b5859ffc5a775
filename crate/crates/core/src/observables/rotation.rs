//! Single-qubit rotations and invariance of observables under them.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::SpectralObservable;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::MatrixOperator;

/// A 2×2 unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct Su2(MatrixOperator);

impl Su2 {
    /// Rejects matrices with `max |U†U − I| >= config.herm`.
    pub fn new(m: MatrixOperator, config: &Config) -> Result<Self> {
        if m.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: m.dim() });
        }
        let deviation = m.unitarity_deviation();
        if deviation >= config.herm {
            return Err(Error::NonUnitary { deviation });
        }
        Ok(Su2(m))
    }

    /// Unit quaternion `(a, b, c, d)` ↦ `[[a+ib, c+id], [−c+id, a−ib]]`.
    pub fn from_quaternion(q: [f64; 4]) -> Self {
        let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        let [a, b, c, d] = q.map(|x| x / norm);
        Su2(MatrixOperator::from_rows(&[
            vec![Complex64::new(a, b), Complex64::new(c, d)],
            vec![Complex64::new(-c, d), Complex64::new(a, -b)],
        ])
        .expect("2x2"))
    }

    /// `(σ_x + σ_z)/√2`, which exchanges σ_z and σ_x under conjugation.
    pub fn hadamard() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Su2(MatrixOperator::from_real_rows(&[&[s, s], &[s, -s]]).expect("2x2"))
    }

    pub fn matrix(&self) -> &MatrixOperator {
        &self.0
    }

    /// `U ⊗ U ⊗ … ⊗ U` (`n` factors).
    pub fn tensor_power(&self, n: usize) -> MatrixOperator {
        (1..n).fold(self.0.clone(), |acc, _| acc.kron(&self.0))
    }
}

/// Haar-random element of SU(2): a normalized Gaussian quaternion, drawn
/// from a ChaCha stream seeded with `seed`.
pub fn random_su2(seed: u64) -> Su2 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = [0; 4].map(|_| StandardNormal.sample(&mut rng));
    Su2::from_quaternion(q)
}

#[derive(Debug, Clone)]
pub enum RotationPattern {
    EqualOnAll(Su2),
    /// One rotation per qubit, qubit 1 first.
    PerSite(Vec<Su2>),
}

impl RotationPattern {
    fn operator(&self, n_qubits: usize, config: &Config) -> Result<MatrixOperator> {
        let factors: Vec<&Su2> = match self {
            RotationPattern::EqualOnAll(u) => vec![u; n_qubits],
            RotationPattern::PerSite(us) => {
                if us.len() != n_qubits {
                    return Err(Error::WrongArity { expected: n_qubits, found: us.len() });
                }
                us.iter().collect()
            }
        };
        for u in &factors {
            let deviation = u.0.unitarity_deviation();
            if deviation >= config.herm {
                return Err(Error::NonUnitary { deviation });
            }
        }
        Ok(factors[1..].iter().fold(factors[0].0.clone(), |acc, u| acc.kron(&u.0)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub invariant: bool,
    pub max_deviation: f64,
    pub trials: usize,
    /// `max |V M V† − M|` for each trial, in order.
    pub deviations: Vec<f64>,
}

impl InvarianceReport {
    /// Trials whose deviation exceeds `threshold`.
    pub fn count_above(&self, threshold: f64) -> usize {
        self.deviations.iter().filter(|&&d| d > threshold).count()
    }
}

/// Conjugates the observable's matrix by the rotation and reports the
/// max-entry deviation.
pub fn check_invariance(
    obs: &SpectralObservable,
    pattern: &RotationPattern,
    config: &Config,
) -> Result<InvarianceReport> {
    check_invariance_trials(obs, std::slice::from_ref(pattern), config)
}

/// Max-reduction of [`check_invariance`] over several rotations.
pub fn check_invariance_trials(
    obs: &SpectralObservable,
    patterns: &[RotationPattern],
    config: &Config,
) -> Result<InvarianceReport> {
    if patterns.is_empty() {
        return Err(Error::InvalidArgument("at least one rotation is required".into()));
    }
    let m = obs.matrix();
    let deviations = patterns
        .iter()
        .map(|p| {
            let v = p.operator(obs.n_qubits(), config)?;
            let conj = &(&v * &m) * &v.adjoint();
            conj.max_abs_diff(&m)
        })
        .collect::<Result<Vec<f64>>>()?;
    let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
    Ok(InvarianceReport { invariant: max_deviation < config.inv, max_deviation, trials: deviations.len(), deviations })
}

/// `count` equal rotations drawn from seeds `seed, seed+1, …`.
pub fn equal_rotation_patterns(seed: u64, count: usize) -> Vec<RotationPattern> {
    (0..count as u64).map(|i| RotationPattern::EqualOnAll(random_su2(seed.wrapping_add(i)))).collect()
}

/// `count` tuples of independent per-site rotations. Trial `i`, qubit `k`
/// uses seed `seed + 1_000_003 + i·n_qubits + k`, disjoint from the equal stream
/// for fewer than a million trials.
pub fn per_site_patterns(seed: u64, count: usize, n_qubits: usize) -> Vec<RotationPattern> {
    (0..count as u64)
        .map(|i| {
            RotationPattern::PerSite(
                (0..n_qubits as u64)
                    .map(|k| random_su2(seed.wrapping_add(1_000_003 + i * n_qubits as u64 + k)))
                    .collect(),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::{observable_f, observable_g, pauli, PauliAxis};

    #[test]
    fn random_su2_is_deterministic_and_unitary() {
        assert_eq!(random_su2(42), random_su2(42));
        assert_ne!(random_su2(42), random_su2(43));
        for seed in 0..1000 {
            assert!(random_su2(seed).matrix().unitarity_deviation() < 1e-12);
        }
    }

    #[test]
    fn haar_marginal() {
        // |u00|² = a² + b² for a uniform point on S³ has mean 1/2.
        let draws = 100_000;
        let mean: f64 = (0..draws).map(|s| random_su2(s).matrix().get(0, 0).norm_sqr()).sum::<f64>() / draws as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn f_and_g_invariant_under_equal_rotations() {
        let config = Config::default();
        let patterns = equal_rotation_patterns(7, 100);
        for obs in [observable_f(), observable_g()] {
            let r = check_invariance_trials(&obs, &patterns, &config).unwrap();
            assert!(r.invariant, "max deviation {}", r.max_deviation);
            assert!(r.max_deviation < 1e-10);
            assert_eq!(r.trials, 100);
        }
    }

    #[test]
    fn f_not_invariant_under_per_site_rotations() {
        let config = Config::default();
        let r = check_invariance_trials(&observable_f(), &per_site_patterns(7, 100, 4), &config).unwrap();
        assert!(!r.invariant);
        assert!(r.count_above(1e-3) >= 95);
    }

    #[test]
    fn identity_is_always_invariant() {
        let config = Config::default();
        let id = SpectralObservable::identity(3).unwrap();
        let equal = RotationPattern::EqualOnAll(random_su2(1));
        assert!(check_invariance(&id, &equal, &config).unwrap().invariant);
        let per = per_site_patterns(3, 1, 3).pop().unwrap();
        assert!(check_invariance(&id, &per, &config).unwrap().invariant);
    }

    #[test]
    fn single_pauli_is_not_invariant() {
        let config = Config::default();
        let z1 = pauli(PauliAxis::Z, 1, 4).unwrap();
        let r = check_invariance(&z1, &RotationPattern::EqualOnAll(Su2::hadamard()), &config).unwrap();
        assert!(!r.invariant);
        // σ_z ↦ σ_x: entries change from ±1 on the diagonal to 1 off it.
        assert!((r.max_deviation - 1.0).abs() < 1e-12, "{}", r.max_deviation);
    }

    #[test]
    fn rejects_non_unitary_and_wrong_arity() {
        let config = Config::default();
        let m = MatrixOperator::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(Su2::new(m.clone(), &config), Err(Error::NonUnitary { .. })));
        let z = pauli(PauliAxis::Z, 1, 2).unwrap();
        let bad = RotationPattern::EqualOnAll(Su2(m));
        assert!(matches!(check_invariance(&z, &bad, &config), Err(Error::NonUnitary { .. })));
        let short = RotationPattern::PerSite(vec![random_su2(0)]);
        assert!(matches!(check_invariance(&z, &short, &config), Err(Error::WrongArity { .. })));
    }
}
