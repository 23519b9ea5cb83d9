//! Dense-matrix reference implementations of the QAOA building blocks.
//! Slow and exponential in memory; only meant for a handful of qubits.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;

pub type Matrix = Vec<Vec<Complex64>>;

const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn zeros(dim: usize) -> Matrix {
    vec![vec![Complex64::new(0.0, 0.0); dim]; dim]
}

pub fn identity(dim: usize) -> Matrix {
    let mut m = zeros(dim);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let dim = a.len();
    let mut c = zeros(dim);
    for i in 0..dim {
        for k in 0..dim {
            if a[i][k] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..dim {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

pub fn apply(m: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, x)| a * x).sum()).collect()
}

pub fn scale(m: &Matrix, s: Complex64) -> Matrix {
    m.iter().map(|row| row.iter().map(|a| a * s).collect()).collect()
}

fn one_norm(m: &Matrix) -> f64 {
    (0..m.len())
        .map(|j| m.iter().map(|row| row[j].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(A)` by scaling and squaring around a truncated Taylor series.
pub fn expm(a: &Matrix) -> Matrix {
    let dim = a.len();
    let norm = one_norm(a);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = scale(a, Complex64::new(0.5f64.powi(squarings as i32), 0.0));
    let mut result = identity(dim);
    let mut term = identity(dim);
    for k in 1..30 {
        term = scale(&matmul(&term, &scaled), Complex64::new(1.0 / k as f64, 0.0));
        for i in 0..dim {
            for j in 0..dim {
                result[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        result = matmul(&result, &result);
    }
    result
}

/// Diagonal cost operator from the energy of each basis state.
pub fn cost_matrix(energies: &[u32]) -> Matrix {
    let mut m = zeros(energies.len());
    for (s, &e) in energies.iter().enumerate() {
        m[s][s] = Complex64::new(e as f64, 0.0);
    }
    m
}

/// `Σ_j X_j`, with qubit `j` flipping bit `j` of the basis index.
pub fn mixer_generator(n: usize) -> Matrix {
    let dim = 1usize << n;
    let mut m = zeros(dim);
    for s in 0..dim {
        for j in 0..n {
            m[s][s ^ (1 << j)] += Complex64::new(1.0, 0.0);
        }
    }
    m
}

/// `exp(-i t G)`.
pub fn evolution(generator: &Matrix, t: f64) -> Matrix {
    expm(&scale(generator, -I * t))
}

pub fn plus_state(n: usize) -> Vec<Complex64> {
    let dim = 1usize << n;
    vec![Complex64::new((dim as f64).sqrt().recip(), 0.0); dim]
}

pub fn random_state<R: Rng>(n: usize, rng: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..1usize << n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}

pub fn expectation(state: &[Complex64], op: &Matrix) -> f64 {
    let applied = apply(op, state);
    state.iter().zip(&applied).map(|(a, b)| (a.conj() * b).re).sum()
}

pub fn max_deviation(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// State after the depth-p circuit, built from dense unitaries.
pub fn qaoa_state(energies: &[u32], n: usize, gamma: &[f64], beta: &[f64]) -> Vec<Complex64> {
    let c = cost_matrix(energies);
    let b = mixer_generator(n);
    let mut psi = plus_state(n);
    for (&g, &bt) in gamma.iter().zip(beta) {
        psi = apply(&evolution(&c, g), &psi);
        psi = apply(&evolution(&b, bt), &psi);
    }
    psi
}

/// Exact gradient of `⟨ψ|C|ψ⟩`, ordered `[γ_1..γ_p, β_1..β_p]`.
///
/// For a parameter `θ` whose gate is `exp(-i θ G)`, inserting `-i G` right
/// after that gate gives `∂ψ`, and `∂E = 2 Re ⟨ψ|C|∂ψ⟩`.
pub fn qaoa_gradient(energies: &[u32], n: usize, gamma: &[f64], beta: &[f64]) -> Vec<f64> {
    let c = cost_matrix(energies);
    let b = mixer_generator(n);
    let p = gamma.len();
    let mut gates = Vec::with_capacity(2 * p);
    for layer in 0..p {
        gates.push((evolution(&c, gamma[layer]), &c));
        gates.push((evolution(&b, beta[layer]), &b));
    }
    let run = |from: usize, mut v: Vec<Complex64>| {
        for (u, _) in &gates[from..] {
            v = apply(u, &v);
        }
        v
    };
    let psi = run(0, plus_state(n));
    let c_psi = apply(&c, &psi);
    let mut grad = vec![0.0; 2 * p];
    let mut prefix = plus_state(n);
    for (g, (u, generator)) in gates.iter().enumerate() {
        prefix = apply(u, &prefix);
        let kicked: Vec<Complex64> = apply(generator, &prefix).into_iter().map(|a| -I * a).collect();
        let d_psi = run(g + 1, kicked);
        let value = 2.0 * c_psi.iter().zip(&d_psi).map(|(a, b)| (a.conj() * b).re).sum::<f64>();
        let slot = if g % 2 == 0 { g / 2 } else { p + g / 2 };
        grad[slot] = value;
    }
    grad
}
