//! Dense complex vectors and matrices over an n-qubit computational basis.
//!
//! Qubit 1 is the most significant bit of an amplitude index, so the ket
//! `|q1 q2 ... qn>` sits at index `q1·2^(n-1) + ... + qn`.

mod eigen;

pub use eigen::{hermitian_eigen, SpectralDecomposition};

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::config::{Config, DEFAULT_MAX_QUBITS};
use crate::error::{Error, Result};

pub type ComplexScalar = Complex64;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_finite(values: &[Complex64]) -> Result<()> {
    match values.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// Amplitudes of a pure state on `n_qubits` qubits.
#[derive(Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("a state needs at least one qubit".into()));
        }
        if n_qubits > DEFAULT_MAX_QUBITS {
            return Err(Error::Capacity { requested: n_qubits, max: DEFAULT_MAX_QUBITS });
        }
        let dim = 1usize << n_qubits;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: amps.len() });
        }
        check_finite(&amps)?;
        Ok(StateVector { n_qubits, amps })
    }

    /// Infers the qubit count from the amplitude count, which must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("amplitude count {len} is not a power of two >= 2")));
        }
        Self::new(len.trailing_zeros() as usize, amps)
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::from_amplitudes(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The computational basis vector `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let mut amps = vec![ZERO; 1usize.checked_shl(n_qubits as u32).unwrap_or(0)];
        if index >= amps.len() {
            return Err(Error::InvalidArgument(format!("basis index {index} out of range")));
        }
        amps[index] = ONE;
        Self::new(n_qubits, amps)
    }

    #[cfg(test)]
    pub(crate) fn zeros(n_qubits: usize) -> Self {
        StateVector { n_qubits, amps: vec![ZERO; 1 << n_qubits] }
    }

    pub(crate) fn from_raw_dim(amps: Vec<Complex64>) -> Self {
        debug_assert!(amps.len().is_power_of_two());
        StateVector { n_qubits: amps.len().trailing_zeros() as usize, amps }
    }

    pub(crate) fn from_raw(n_qubits: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n_qubits);
        StateVector { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, config: &Config) -> bool {
        (self.norm_sqr() - 1.0).abs() < config.norm
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::InvalidArgument("cannot normalize the zero vector".into()));
        }
        Ok(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        StateVector { n_qubits: self.n_qubits, amps: self.amps.iter().map(|a| a * c).collect() }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        Ok(StateVector {
            n_qubits: self.n_qubits,
            amps: self.amps.iter().zip(&other.amps).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    /// Largest entry-wise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        same_dim(self.dim(), other.dim())?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// `|<self|other>|²` for unit vectors: one when they agree up to a global phase.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(inner(self, other)?.norm_sqr())
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateVector({} qubits; ", self.n_qubits)?;
        let mut first = true;
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() > 1e-14 {
                if !first {
                    write!(f, ", ")?;
                }
                first = false;
                write!(f, "|{:0w$b}>: {}", i, a, w = self.n_qubits)?;
            }
        }
        write!(f, ")")
    }
}

fn same_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `a ⊗ b` with the default capacity.
pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    tensor_capped(a, b, DEFAULT_MAX_QUBITS)
}

pub fn tensor_capped(a: &StateVector, b: &StateVector, max_qubits: usize) -> Result<StateVector> {
    let n = a.n_qubits + b.n_qubits;
    if n > max_qubits.min(DEFAULT_MAX_QUBITS) {
        return Err(Error::Capacity { requested: n, max: max_qubits.min(DEFAULT_MAX_QUBITS) });
    }
    let mut amps = Vec::with_capacity(a.dim() * b.dim());
    for x in &a.amps {
        amps.extend(b.amps.iter().map(|y| x * y));
    }
    Ok(StateVector { n_qubits: n, amps })
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    same_dim(a.dim(), b.dim())?;
    Ok(inner_unchecked(&a.amps, &b.amps))
}

pub(crate) fn inner_unchecked(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Index in an `n`-qubit register of the basis state whose bits at the
/// 1-based `sites` spell `value` (most significant bit on `sites[0]`).
pub(crate) fn scatter_bits(value: usize, sites: &[usize], n: usize) -> usize {
    let k = sites.len();
    sites.iter().enumerate().fold(0, |idx, (pos, &site)| {
        let bit = (value >> (k - 1 - pos)) & 1;
        idx | (bit << (n - site))
    })
}

/// Places `on_sites` on the 1-based `sites` of an `n`-qubit register and
/// `rest` on the remaining sites in increasing order.
pub fn place(on_sites: &StateVector, sites: &[usize], rest: Option<&StateVector>, n: usize) -> Result<StateVector> {
    if n > DEFAULT_MAX_QUBITS {
        return Err(Error::Capacity { requested: n, max: DEFAULT_MAX_QUBITS });
    }
    check_sites(sites, n)?;
    same_dim(sites.len(), on_sites.n_qubits)?;
    let others: Vec<usize> = (1..=n).filter(|s| !sites.contains(s)).collect();
    let rest_amps: Vec<Complex64> = match rest {
        Some(r) => {
            same_dim(others.len(), r.n_qubits)?;
            r.amps.clone()
        }
        None if others.is_empty() => vec![ONE],
        None => {
            return Err(Error::InvalidArgument(format!(
                "{} sites left unassigned without a filler state",
                others.len()
            )))
        }
    };
    let mut amps = vec![ZERO; 1 << n];
    let inner_idx: Vec<usize> = (0..on_sites.dim()).map(|v| scatter_bits(v, sites, n)).collect();
    for (r, &b) in rest_amps.iter().enumerate() {
        if b == ZERO {
            continue;
        }
        let base = scatter_bits(r, &others, n);
        for (v, &a) in on_sites.amps.iter().enumerate() {
            amps[base | inner_idx[v]] = a * b;
        }
    }
    Ok(StateVector { n_qubits: n, amps })
}

/// Sites are 1-based, distinct and at most `n`.
pub(crate) fn check_sites(sites: &[usize], n: usize) -> Result<()> {
    for (i, &site) in sites.iter().enumerate() {
        if site == 0 || site > n {
            return Err(Error::SiteOutOfRange { site, n });
        }
        if sites[..i].contains(&site) {
            return Err(Error::SiteCollision { site });
        }
    }
    Ok(())
}

/// Modified Gram–Schmidt (two passes per vector). Inputs whose remainder has
/// norm below `threshold` are dropped, so the output spans the same space.
pub fn orthonormalize(vectors: &[StateVector], threshold: f64) -> Vec<StateVector> {
    let mut out: Vec<StateVector> = Vec::new();
    for v in vectors {
        if let Some(u) = orthogonal_remainder(&out, v, threshold) {
            out.push(u);
        }
    }
    out
}

fn orthogonal_remainder(basis: &[StateVector], v: &StateVector, threshold: f64) -> Option<StateVector> {
    let mut w = v.amps.clone();
    for _ in 0..2 {
        for b in basis {
            let c = inner_unchecked(&b.amps, &w);
            for (x, y) in w.iter_mut().zip(&b.amps) {
                *x -= c * y;
            }
        }
    }
    let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    (norm >= threshold).then(|| StateVector { n_qubits: v.n_qubits, amps: w.into_iter().map(|z| z / norm).collect() })
}

/// Extends an orthonormal set to a full basis by Gram–Schmidt over the
/// computational basis vectors in index order.
pub fn complete_basis(partial: &[StateVector], n_qubits: usize) -> Vec<StateVector> {
    let dim = 1usize << n_qubits;
    let mut all: Vec<StateVector> = partial.to_vec();
    for idx in 0..dim {
        if all.len() == dim {
            break;
        }
        let e = StateVector::basis(n_qubits, idx).expect("in range");
        if let Some(u) = orthogonal_remainder(&all, &e, 1e-6) {
            all.push(u);
        }
    }
    all.split_off(partial.len())
}

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct MatrixOperator {
    dim: usize,
    data: Vec<Complex64>,
}

impl MatrixOperator {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be positive".into()));
        }
        same_dim(dim * dim, data.len())?;
        check_finite(&data)?;
        Ok(MatrixOperator { dim, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            same_dim(dim, row.len())?;
            data.extend_from_slice(row);
        }
        Self::new(dim, data)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> =
            rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(dim: usize) -> Self {
        MatrixOperator { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.data[i * values.len() + i] = Complex64::new(v, 0.0);
        }
        m
    }

    /// `|a><b|`.
    pub fn outer(a: &StateVector, b: &StateVector) -> Result<Self> {
        same_dim(a.dim(), b.dim())?;
        let dim = a.dim();
        let mut data = Vec::with_capacity(dim * dim);
        for x in &a.amps {
            data.extend(b.amps.iter().map(|y| x * y.conj()));
        }
        Ok(MatrixOperator { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub(crate) fn add_at(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] += value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for r in 0..n {
            for c in 0..n {
                data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        MatrixOperator { dim: n, data }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        MatrixOperator { dim: self.dim, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim, other.dim)?;
        Ok(MatrixOperator { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim, other.dim)?;
        Ok(MatrixOperator { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim, other.dim)?;
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                for (out, b) in data[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *out += a * b;
                }
            }
        }
        Ok(MatrixOperator { dim: n, data })
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let dim = n * m;
        let mut data = vec![ZERO; dim * dim];
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        data[(i * m + k) * dim + j * m + l] = a * other.data[k * m + l];
                    }
                }
            }
        }
        MatrixOperator { dim, data }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        same_dim(self.dim, other.dim)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// `max |M - M†|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self.data[r * n + c] - self.data[c * n + r].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, config: &Config) -> bool {
        self.hermiticity_deviation() < config.herm
    }

    /// `max |M†M - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.adjoint().try_mul(self).expect("square");
        prod.max_abs_diff(&Self::identity(self.dim)).expect("same dim")
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }
}

impl fmt::Debug for MatrixOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixOperator({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|c| format!("{:.4}", self.data[r * self.dim + c])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Add for &MatrixOperator {
    type Output = MatrixOperator;
    fn add(self, rhs: Self) -> MatrixOperator {
        self.try_add(rhs).expect("matrix dimensions must agree")
    }
}

impl Sub for &MatrixOperator {
    type Output = MatrixOperator;
    fn sub(self, rhs: Self) -> MatrixOperator {
        self.try_sub(rhs).expect("matrix dimensions must agree")
    }
}

impl Mul for &MatrixOperator {
    type Output = MatrixOperator;
    fn mul(self, rhs: Self) -> MatrixOperator {
        self.try_mul(rhs).expect("matrix dimensions must agree")
    }
}

/// Matrix–vector product.
pub fn apply(m: &MatrixOperator, s: &StateVector) -> Result<StateVector> {
    same_dim(m.dim, s.dim())?;
    let n = m.dim;
    let amps = (0..n).map(|r| m.data[r * n..(r + 1) * n].iter().zip(&s.amps).map(|(a, b)| a * b).sum()).collect();
    Ok(StateVector { n_qubits: s.n_qubits, amps })
}

/// `ab - ba`.
pub fn commutator(a: &MatrixOperator, b: &MatrixOperator) -> Result<MatrixOperator> {
    let ab = a.try_mul(b)?;
    let ba = b.try_mul(a)?;
    ab.try_sub(&ba)
}

/// Pauli matrices and other small single-qubit operators.
pub mod pauli {
    use super::*;

    pub fn x() -> MatrixOperator {
        MatrixOperator::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    pub fn y() -> MatrixOperator {
        let i = Complex64::i();
        MatrixOperator::from_rows(&[vec![ZERO, -i], vec![i, ZERO]]).unwrap()
    }

    pub fn z() -> MatrixOperator {
        MatrixOperator::diagonal(&[1.0, -1.0])
    }

    /// `I ⊗ ... ⊗ op ⊗ ... ⊗ I` with `op` on 1-based `site` of `n` qubits.
    pub fn on_site(op: &MatrixOperator, site: usize, n: usize) -> Result<MatrixOperator> {
        if site == 0 || site > n {
            return Err(Error::SiteOutOfRange { site, n });
        }
        if n > DEFAULT_MAX_QUBITS {
            return Err(Error::Capacity { requested: n, max: DEFAULT_MAX_QUBITS });
        }
        let left = MatrixOperator::identity(1 << (site - 1));
        let right = MatrixOperator::identity(1 << (n - site));
        Ok(left.kron(op).kron(&right))
    }
}
