//! Named states: mixed z/x product kets, singlets, the two-dimensional
//! spin-zero subspace of four qubits, and the post-measurement state `η̃`.

use std::fmt;

use num_complex::Complex64;

use crate::config::DEFAULT_MAX_QUBITS;
use crate::error::{Error, Result};
use crate::linalg::{place, tensor, MatrixOperator, StateVector, ZERO};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    Z,
    X,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bit {
    Zero,
    One,
}

/// One factor of a product ket. On the X axis, `Zero` is the σ_x = +1
/// eigenstate `(|0> + |1>)/√2` and `One` is `(|0> - |1>)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AxisBit {
    pub axis: Axis,
    pub bit: Bit,
}

impl AxisBit {
    pub const Z0: AxisBit = AxisBit { axis: Axis::Z, bit: Bit::Zero };
    pub const Z1: AxisBit = AxisBit { axis: Axis::Z, bit: Bit::One };
    pub const X0: AxisBit = AxisBit { axis: Axis::X, bit: Bit::Zero };
    pub const X1: AxisBit = AxisBit { axis: Axis::X, bit: Bit::One };

    /// `0`/`1` for z kets, `+`/`-` for x kets.
    pub fn from_char(c: char) -> Option<AxisBit> {
        match c {
            '0' => Some(Self::Z0),
            '1' => Some(Self::Z1),
            '+' => Some(Self::X0),
            '-' => Some(Self::X1),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match (self.axis, self.bit) {
            (Axis::Z, Bit::Zero) => '0',
            (Axis::Z, Bit::One) => '1',
            (Axis::X, Bit::Zero) => '+',
            (Axis::X, Bit::One) => '-',
        }
    }

    /// The Pauli eigenvalue this factor carries: +1 for `Zero`, -1 for `One`.
    pub fn eigenvalue(self) -> f64 {
        match self.bit {
            Bit::Zero => 1.0,
            Bit::One => -1.0,
        }
    }

    fn amplitudes(self) -> [f64; 2] {
        match (self.axis, self.bit) {
            (Axis::Z, Bit::Zero) => [1.0, 0.0],
            (Axis::Z, Bit::One) => [0.0, 1.0],
            (Axis::X, Bit::Zero) => [FRAC_1_SQRT_2, FRAC_1_SQRT_2],
            (Axis::X, Bit::One) => [FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
        }
    }
}

impl fmt::Display for AxisBit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Parses a ket body such as `00++`.
pub fn parse_axis_bits(text: &str) -> Option<Vec<AxisBit>> {
    text.chars().map(AxisBit::from_char).collect()
}

/// Product ket over the given factors, qubit 1 first.
pub fn basis_ket(spec: &[AxisBit]) -> Result<StateVector> {
    if spec.is_empty() {
        return Err(Error::EmptySpec);
    }
    if spec.len() > DEFAULT_MAX_QUBITS {
        return Err(Error::Capacity { requested: spec.len(), max: DEFAULT_MAX_QUBITS });
    }
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    for factor in spec {
        let [a0, a1] = factor.amplitudes();
        amps = amps.iter().flat_map(|&x| [x * a0, x * a1]).collect();
    }
    StateVector::new(spec.len(), amps)
}

fn two_qubit_singlet() -> StateVector {
    StateVector::from_real(&[0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0]).expect("valid")
}

/// `pair_count` singlets on the pairs (1,2), (3,4), ...
pub fn singlet(pair_count: usize) -> Result<StateVector> {
    if pair_count == 0 {
        return Err(Error::InvalidArgument("pair count must be positive".into()));
    }
    if 2 * pair_count > DEFAULT_MAX_QUBITS {
        return Err(Error::Capacity { requested: 2 * pair_count, max: DEFAULT_MAX_QUBITS });
    }
    let s = two_qubit_singlet();
    (1..pair_count).try_fold(s.clone(), |acc, _| tensor(&acc, &s))
}

/// `(|01> - |10>)/√2` on sites `(i, j)` of an `n`-qubit register, with
/// `filler` occupying the other sites in increasing order. Without a filler,
/// `n` must be 2.
pub fn singlet_on(i: usize, j: usize, n: usize, filler: Option<&StateVector>) -> Result<StateVector> {
    place(&two_qubit_singlet(), &[i, j], filler, n)
}

/// Orthonormal basis `{φ₀, φ₁}` of the total-spin-zero subspace of four qubits.
#[derive(Debug, Clone)]
pub struct SpinZeroBasis {
    pub phi0: StateVector,
    pub phi1: StateVector,
}

/// `φ₀ = s₁₂ ⊗ s₃₄` and `φ₁ = (2·s₁₃ ⊗ s₂₄ − φ₀)/√3`, where `s_ij` is a
/// singlet on sites i, j. `<s₁₃ s₂₄|φ₀> = 1/2`, so φ₁ is the normalized
/// component of `s₁₃ s₂₄` orthogonal to φ₀.
pub fn spin_zero_basis() -> SpinZeroBasis {
    let phi0 = singlet(2).expect("4 qubits fit");
    let s24 = singlet_on(1, 2, 2, None).expect("valid sites");
    let s13_s24 = singlet_on(1, 3, 4, Some(&s24)).expect("valid sites");
    let phi1 = s13_s24
        .scale(Complex64::new(2.0, 0.0))
        .try_sub(&phi0)
        .expect("same dim")
        .scale(Complex64::new(1.0 / 3f64.sqrt(), 0.0));
    SpinZeroBasis { phi0, phi1 }
}

/// Bob's pair `{ψ₀, ψ₁}`: the same spin-zero construction on his four qubits.
pub fn bob_basis() -> SpinZeroBasis {
    spin_zero_basis()
}

/// The all-up Alice ket `|0 0 0̄ 0̄>` for the outcomes (σ_z1, σ_z2, σ_x3, σ_x4) = (+1, +1, +1, +1).
pub fn all_up_ket() -> StateVector {
    basis_ket(&[AxisBit::Z0, AxisBit::Z0, AxisBit::X0, AxisBit::X0]).expect("4 qubits")
}

/// `η̃ = 1/2 · |0 0 0̄ 0̄> ⊗ (ψ₀ + √3 ψ₁)` on eight qubits, Alice on 1–4 and Bob on 5–8.
pub fn eta_tilde() -> StateVector {
    tensor(&all_up_ket(), &bob_factor()).expect("8 qubits fit")
}

/// Bob's factor of [`eta_tilde`], `(ψ₀ + √3 ψ₁)/2`.
pub fn bob_factor() -> StateVector {
    let SpinZeroBasis { phi0: psi0, phi1: psi1 } = bob_basis();
    psi0.try_add(&psi1.scale(Complex64::new(3f64.sqrt(), 0.0))).expect("same dim").scale(Complex64::new(0.5, 0.0))
}

/// `S² = (Σᵢ σ⃗ᵢ/2)²` on `n` qubits.
///
/// Expanded as `3n/4 · I + 1/2 Σ_{i<j} (X_iX_j + Y_iY_j + Z_iZ_j)`; on a basis
/// state, `ZZ` contributes ±1 and `XX + YY` swaps differing bits with weight 2.
pub fn total_spin_squared(n: usize) -> Result<MatrixOperator> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one qubit".into()));
    }
    if n > DEFAULT_MAX_QUBITS {
        return Err(Error::Capacity { requested: n, max: DEFAULT_MAX_QUBITS });
    }
    let dim = 1usize << n;
    let mut m = MatrixOperator::zeros(dim);
    for idx in 0..dim {
        let mut diag = 0.75 * n as f64;
        for i in 0..n {
            for j in (i + 1)..n {
                let (bi, bj) = ((idx >> (n - 1 - i)) & 1, (idx >> (n - 1 - j)) & 1);
                if bi == bj {
                    diag += 0.5;
                } else {
                    diag -= 0.5;
                    let swapped = idx ^ (1 << (n - 1 - i)) ^ (1 << (n - 1 - j));
                    m.add_at(swapped, idx, Complex64::new(1.0, 0.0));
                }
            }
        }
        m.add_at(idx, idx, Complex64::new(diag, 0.0));
    }
    debug_assert!(m.entries().iter().all(|z| z.im == ZERO.im));
    Ok(m)
}
