//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use luders::linalg::{orthonormalize, MatrixOperator, StateVector};
use luders::observables::SpectralObservable;
use luders::Config;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_state(rng: &mut ChaCha8Rng, n_qubits: usize) -> StateVector {
    let amps = (0..1usize << n_qubits).map(|_| gaussian(rng)).collect();
    StateVector::new(n_qubits, amps).unwrap().normalized().unwrap()
}

/// `(A + A†)/2` for a complex Gaussian `A`.
pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> MatrixOperator {
    let a = MatrixOperator::new(dim, (0..dim * dim).map(|_| gaussian(rng)).collect()).unwrap();
    (&a + &a.adjoint()).scale(Complex64::new(0.5, 0.0))
}

/// A Haar-like orthonormal basis of `n_qubits` qubits.
pub fn random_basis(rng: &mut ChaCha8Rng, n_qubits: usize) -> Vec<StateVector> {
    loop {
        let raw: Vec<StateVector> = (0..1usize << n_qubits).map(|_| random_state(rng, n_qubits)).collect();
        let basis = orthonormalize(&raw, 1e-6);
        if basis.len() == raw.len() {
            return basis;
        }
    }
}

/// Observable diagonal in `basis`, eigenvalues drawn from a small set so
/// that degenerate eigenspaces are common.
pub fn observable_in_basis(rng: &mut ChaCha8Rng, label: &str, basis: &[StateVector]) -> SpectralObservable {
    const VALUES: [f64; 4] = [-1.0, 0.0, 1.0, 2.0];
    let n = basis[0].n_qubits();
    let pairs = basis.iter().map(|v| (*VALUES.choose(rng).unwrap(), v.clone())).collect();
    SpectralObservable::from_eigenpairs(label, pairs, (1..=n).collect(), &Config::default()).unwrap()
}

const KET_CHARS: [char; 4] = ['0', '1', '+', '-'];
const COEFFS: [&str; 8] = ["2", "1/2", "sqrt(3)", "i", "i/2", "sqrt(2)/3", "3*sqrt(5)", "1*sqrt(3)"];

fn gen_ket(rng: &mut ChaCha8Rng, n: usize) -> String {
    let body: String = (0..n).map(|_| *KET_CHARS.choose(rng).unwrap()).collect();
    format!("|{body}>")
}

/// A state expression on exactly `n` qubits, possibly unnormalized.
pub fn gen_state_expr(rng: &mut ChaCha8Rng, n: usize, depth: u32) -> String {
    let pick = if depth == 0 { 0 } else { rng.gen_range(0..6) };
    match pick {
        1 if n == 4 => ["phi0", "phi1", "psi0", "psi1"].choose(rng).unwrap().to_string(),
        2 if n >= 2 => {
            let a = rng.gen_range(1..n);
            format!("({}) * ({})", gen_state_expr(rng, a, depth - 1), gen_state_expr(rng, n - a, depth - 1))
        }
        3 => {
            let terms = rng.gen_range(2..4);
            let mut s = String::new();
            for k in 0..terms {
                let op = if rng.gen_bool(0.5) { "+" } else { "-" };
                if k > 0 || op == "-" {
                    s.push_str(op);
                    s.push(' ');
                }
                let coeff = COEFFS.choose(rng).unwrap();
                s.push_str(&format!("{coeff} ({}) ", gen_state_expr(rng, n, depth - 1)));
            }
            s.trim_end().to_string()
        }
        4 if n == 2 => if rng.gen_bool(0.5) { "singlet(1, 2)" } else { "singlet(2, 1)" }.to_string(),
        4 if n > 2 => {
            let mut sites: Vec<usize> = (1..=n).collect();
            sites.shuffle(rng);
            format!("singlet({}, {}, {})", sites[0], sites[1], gen_state_expr(rng, n - 2, depth - 1))
        }
        5 => format!("normalize({})", gen_state_expr(rng, n, depth - 1)),
        _ => gen_ket(rng, n),
    }
}

/// A well-formed scenario text (possibly with runtime-impossible outcomes;
/// it is meant for parsing, not running).
pub fn gen_scenario(rng: &mut ChaCha8Rng) -> String {
    let n = rng.gen_range(4..=6);
    let mut lines = vec![format!("qubits {n}")];
    let states = rng.gen_range(1..4);
    for k in 0..states {
        lines.push(format!("state s{k} = normalize({})", gen_state_expr(rng, n, 3)));
    }
    let mut obs = Vec::new();
    for k in 0..rng.gen_range(1..4) {
        let expr = match rng.gen_range(0..3) {
            0 => format!("sigma {} {}", ['x', 'y', 'z'].choose(rng).unwrap(), rng.gen_range(1..=n)),
            1 => {
                let mut sites: Vec<usize> = (1..=n).collect();
                sites.shuffle(rng);
                let list: Vec<String> = sites[..4].iter().map(|s| s.to_string()).collect();
                format!("embed({}; {}; {n})", if rng.gen_bool(0.5) { "F" } else { "G" }, list.join(", "))
            }
            _ => format!("sigma_z {}", rng.gen_range(1..=n)),
        };
        lines.push(format!("obs o{k} = {expr}"));
        obs.push(format!("o{k}"));
    }
    for _ in 0..rng.gen_range(1..4) {
        let state = format!("s{}", rng.gen_range(0..states));
        let count = rng.gen_range(1..=obs.len());
        let chosen: Vec<String> = obs.choose_multiple(rng, count).cloned().collect();
        let signs: String = (0..count).map(|_| *['+', '-', '0'].choose(rng).unwrap()).collect();
        if rng.gen_bool(0.5) {
            lines.push(format!("measure {state}, {} outcomes {signs}", chosen.join(", ")));
        } else {
            let den = rng.gen_range(1..20);
            lines.push(format!(
                "assert_prob {state}, {} {signs} = {}/{den}",
                chosen.join(", "),
                rng.gen_range(0..=den)
            ));
        }
    }
    lines.push(format!("report {}", obs[0]));
    lines.join("\n") + "\n"
}
