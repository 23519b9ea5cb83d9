//! Statevector simulation of the depth-p QAOA ansatz on the MAX-SAT
//! Hamiltonian.
//!
//! The state starts in `|+⟩^⊗n`; layer `k` applies the phase separator
//! `exp(-i γ_k V)` followed by the transverse-field mixer
//! `exp(-i β_k Σ_j X_j)`. Qubit `j` carries variable `j`, so basis index `s`
//! is the bitstring of [`crate::sat::Assignment::from_index`].

pub mod nelder_mead;
mod optimize;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::DiagonalHamiltonian;

pub use optimize::{optimize_qaoa, optimize_qaoa_from, OptimizerBudget, QaoaOutcome, TracePoint};

/// Largest qubit count the simulator accepts (2^24 amplitudes).
pub const SIMULATOR_LIMIT: usize = 24;

/// Mixer Hamiltonian used by every layer.
pub const MIXER: &str = "transverse field, sum_j X_j";

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps `2^n` amplitudes. The caller is responsible for normalisation.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Domain(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        Ok(StateVector {
            n: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.amplitudes.iter().map(|a| a.norm_sqr())
    }

    fn reset_plus(&mut self) {
        let a = Complex64::new((self.amplitudes.len() as f64).sqrt().recip(), 0.0);
        self.amplitudes.iter_mut().for_each(|x| *x = a);
    }

    fn apply_phases(&mut self, energies: &[u32], phases: &[Complex64]) {
        for (amp, &e) in self.amplitudes.iter_mut().zip(energies) {
            *amp *= phases[e as usize];
        }
    }

    fn apply_mixer_in_place(&mut self, beta: f64) {
        let (s, c) = beta.sin_cos();
        let dim = self.amplitudes.len();
        for q in 0..self.n {
            let stride = 1usize << q;
            for block in (0..dim).step_by(2 * stride) {
                for i in block..block + stride {
                    let a = self.amplitudes[i];
                    let b = self.amplitudes[i + stride];
                    // (a, b) -> (a cos β - i b sin β, b cos β - i a sin β)
                    self.amplitudes[i] = Complex64::new(a.re * c + b.im * s, a.im * c - b.re * s);
                    self.amplitudes[i + stride] =
                        Complex64::new(b.re * c + a.im * s, b.im * c - a.re * s);
                }
            }
        }
    }

    fn expectation(&self, energies: &[u32]) -> f64 {
        self.amplitudes
            .iter()
            .zip(energies)
            .map(|(a, &e)| a.norm_sqr() * e as f64)
            .sum()
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("the simulator needs at least one qubit".into()));
    }
    if n > SIMULATOR_LIMIT {
        return Err(Error::limit("statevector simulation", n, SIMULATOR_LIMIT));
    }
    Ok(())
}

pub fn initial_plus_state(n: usize) -> Result<StateVector> {
    check_qubits(n)?;
    let mut s = StateVector {
        n,
        amplitudes: vec![Complex64::default(); 1 << n],
    };
    s.reset_plus();
    Ok(s)
}

fn energy_table(h: &DiagonalHamiltonian) -> Vec<u32> {
    match h.table() {
        Some(t) => t.to_vec(),
        None => (0..1u64 << h.n()).map(|s| h.energy(s)).collect(),
    }
}

fn phase_table(gamma: f64, max_energy: u32, out: &mut Vec<Complex64>) {
    out.clear();
    out.extend((0..=max_energy).map(|e| Complex64::from_polar(1.0, -gamma * e as f64)));
}

/// Multiplies the amplitude of `s` by `exp(-i γ energy(s))`.
pub fn apply_phase_separator(state: &mut StateVector, h: &DiagonalHamiltonian, gamma: f64) -> Result<()> {
    if state.n != h.n() {
        return Err(Error::Domain(format!(
            "state has {} qubits, Hamiltonian has {}",
            state.n,
            h.n()
        )));
    }
    let mut phases = Vec::new();
    phase_table(gamma, h.max_energy_bound(), &mut phases);
    match h.table() {
        Some(t) => state.apply_phases(t, &phases),
        None => state.apply_phases(&energy_table(h), &phases),
    }
    Ok(())
}

/// Applies `exp(-i β X)` to every qubit.
pub fn apply_mixer(state: &mut StateVector, beta: f64) {
    state.apply_mixer_in_place(beta);
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaParams {
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
}

impl QaoaParams {
    pub fn new(gamma: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if gamma.len() != beta.len() {
            return Err(Error::Domain(format!(
                "{} gamma angles but {} beta angles",
                gamma.len(),
                beta.len()
            )));
        }
        Ok(QaoaParams { gamma, beta })
    }

    pub fn zeros(p: usize) -> Self {
        QaoaParams {
            gamma: vec![0.0; p],
            beta: vec![0.0; p],
        }
    }

    pub fn depth(&self) -> usize {
        self.gamma.len()
    }

    /// `[γ_1..γ_p, β_1..β_p]`.
    pub fn to_flat(&self) -> Vec<f64> {
        self.gamma.iter().chain(&self.beta).copied().collect()
    }

    pub fn from_flat(x: &[f64]) -> Self {
        let p = x.len() / 2;
        QaoaParams {
            gamma: x[..p].to_vec(),
            beta: x[p..2 * p].to_vec(),
        }
    }

    /// Maps every `γ_k` into `[0, 2π)` and `β_k` into `[0, π)`. The
    /// expectation is invariant under both shifts for integer spectra.
    pub fn wrapped(&self) -> Self {
        use std::f64::consts::{PI, TAU};
        QaoaParams {
            gamma: self.gamma.iter().map(|g| g.rem_euclid(TAU)).collect(),
            beta: self.beta.iter().map(|b| b.rem_euclid(PI)).collect(),
        }
    }

    /// Same state at depth `p`: extra layers have zero angles.
    pub fn padded_to(&self, p: usize) -> Self {
        let mut out = self.clone();
        out.gamma.resize(p, 0.0);
        out.beta.resize(p, 0.0);
        out
    }
}

/// Reusable simulator for repeated expectation evaluations on one
/// Hamiltonian.
pub struct QaoaSimulator {
    energies: Vec<u32>,
    max_energy: u32,
    state: StateVector,
    phases: Vec<Complex64>,
}

impl QaoaSimulator {
    pub fn new(h: &DiagonalHamiltonian) -> Result<Self> {
        check_qubits(h.n())?;
        Ok(QaoaSimulator {
            energies: energy_table(h),
            max_energy: h.max_energy_bound(),
            state: initial_plus_state(h.n())?,
            phases: Vec::new(),
        })
    }

    /// Prepares `Π_k U(γ_k, β_k)|+⟩^⊗n` and returns it.
    pub fn prepare(&mut self, gamma: &[f64], beta: &[f64]) -> &StateVector {
        debug_assert_eq!(gamma.len(), beta.len());
        self.state.reset_plus();
        for (&g, &b) in gamma.iter().zip(beta) {
            phase_table(g, self.max_energy, &mut self.phases);
            self.state.apply_phases(&self.energies, &self.phases);
            self.state.apply_mixer_in_place(b);
        }
        &self.state
    }

    pub fn expectation(&mut self, gamma: &[f64], beta: &[f64]) -> f64 {
        self.prepare(gamma, beta);
        self.state.expectation(&self.energies)
    }

    /// Expectation from flat `[γ.., β..]` angles.
    pub fn expectation_flat(&mut self, x: &[f64]) -> f64 {
        let p = x.len() / 2;
        self.expectation(&x[..p], &x[p..])
    }
}

/// `⟨ψ(γ, β)| V |ψ(γ, β)⟩`.
pub fn qaoa_expectation(h: &DiagonalHamiltonian, params: &QaoaParams) -> Result<f64> {
    QaoaParams::new(params.gamma.clone(), params.beta.clone())?;
    Ok(QaoaSimulator::new(h)?.expectation(&params.gamma, &params.beta))
}

/// Central differences of the expectation in `[γ_1..γ_p, β_1..β_p]` order.
pub fn finite_difference_gradient(h: &DiagonalHamiltonian, params: &QaoaParams, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) {
        return Err(Error::Domain(format!("finite-difference step must be positive, got {step}")));
    }
    QaoaParams::new(params.gamma.clone(), params.beta.clone())?;
    let mut sim = QaoaSimulator::new(h)?;
    let x = params.to_flat();
    let mut grad = Vec::with_capacity(x.len());
    let mut probe = x.clone();
    for i in 0..x.len() {
        probe[i] = x[i] + step;
        let plus = sim.expectation_flat(&probe);
        probe[i] = x[i] - step;
        let minus = sim.expectation_flat(&probe);
        probe[i] = x[i];
        grad.push((plus - minus) / (2.0 * step));
    }
    Ok(grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_hamiltonian, ground_states};
    use crate::sat::{generate_random_ksat, CnfFormula};
    use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

    #[test]
    fn plus_state_amplitudes() {
        let s = initial_plus_state(1).unwrap();
        for a in s.amplitudes() {
            assert!((a - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        }
        let s = initial_plus_state(3).unwrap();
        for a in s.amplitudes() {
            assert!((a.re - 2f64.powf(-1.5)).abs() < 1e-15 && a.im == 0.0);
        }
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        assert!(initial_plus_state(0).is_err());
        assert!(matches!(
            initial_plus_state(SIMULATOR_LIMIT + 1),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn plus_state_expectation_is_m_over_2_to_k() {
        for (n, m, k) in [(5, 7, 3), (9, 20, 2), (12, 40, 4), (6, 0, 3)] {
            let f = generate_random_ksat(n, m, k, 1).unwrap();
            let h = build_hamiltonian(&f).unwrap();
            let e = qaoa_expectation(&h, &QaoaParams::zeros(0)).unwrap();
            assert!((e - m as f64 / (1 << k) as f64).abs() < 1e-10);
        }
    }

    #[test]
    fn phase_separator_identities() {
        let f = generate_random_ksat(4, 9, 3, 2).unwrap();
        let h = build_hamiltonian(&f).unwrap();
        let mut s = initial_plus_state(4).unwrap();
        apply_mixer(&mut s, 0.3);
        let before = s.clone();
        apply_phase_separator(&mut s, &h, 0.0).unwrap();
        assert_eq!(s, before);
        apply_phase_separator(&mut s, &h, TAU).unwrap();
        for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
            assert!((a - b).norm() < 1e-13);
        }
        let mut wrong = initial_plus_state(3).unwrap();
        assert!(apply_phase_separator(&mut wrong, &h, 1.0).is_err());
    }

    #[test]
    fn mixer_fixes_plus_state_up_to_phase() {
        let mut s = initial_plus_state(5).unwrap();
        let beta = 0.731;
        apply_mixer(&mut s, beta);
        let phase = Complex64::from_polar(1.0, -beta * 5.0);
        for a in s.amplitudes() {
            assert!((a - phase * 2f64.powf(-2.5)).norm() < 1e-14);
        }
        let before = s.clone();
        apply_mixer(&mut s, 0.0);
        assert_eq!(s, before);
    }

    #[test]
    fn zero_gamma_gives_plus_expectation() {
        let f = generate_random_ksat(7, 21, 3, 5).unwrap();
        let h = build_hamiltonian(&f).unwrap();
        let params = QaoaParams::new(vec![0.0; 3], vec![0.4, 1.1, -2.0]).unwrap();
        let e = qaoa_expectation(&h, &params).unwrap();
        assert!((e - 21.0 / 8.0).abs() < 1e-12);
    }

    #[test]
    fn norm_and_bounds_through_deep_circuits() {
        let f = generate_random_ksat(9, 30, 3, 12).unwrap();
        let h = build_hamiltonian(&f).unwrap();
        let (e0, _) = ground_states(&h).unwrap();
        let mut sim = QaoaSimulator::new(&h).unwrap();
        for t in 0..20 {
            let gamma: Vec<f64> = (0..10).map(|i| ((i * 7 + t) as f64 * 0.37).sin() * PI).collect();
            let beta: Vec<f64> = (0..10).map(|i| ((i * 3 + t) as f64 * 0.91).cos()).collect();
            let norm = sim.prepare(&gamma, &beta).norm_sqr();
            assert!((norm - 1.0).abs() < 1e-10);
            let e = sim.expectation(&gamma, &beta);
            assert!(e >= e0 as f64 - 1e-10 && e <= 30.0 + 1e-10);
        }
    }

    #[test]
    fn periodicity_in_angles() {
        let f = generate_random_ksat(6, 15, 3, 3).unwrap();
        let h = build_hamiltonian(&f).unwrap();
        let params = QaoaParams::new(vec![0.8, 2.1], vec![0.3, 1.4]).unwrap();
        let base = qaoa_expectation(&h, &params).unwrap();
        let mut shifted = params.clone();
        shifted.gamma[1] += TAU;
        shifted.beta[0] += PI;
        assert!((qaoa_expectation(&h, &shifted).unwrap() - base).abs() < 1e-8);
        let wrapped = QaoaParams::new(vec![-1.0, 9.0], vec![-0.5, 4.0]).unwrap();
        assert!(
            (qaoa_expectation(&h, &wrapped).unwrap()
                - qaoa_expectation(&h, &wrapped.wrapped()).unwrap())
            .abs()
                < 1e-8
        );
    }

    #[test]
    fn gradient_vanishes_at_origin() {
        let f = CnfFormula::from_dimacs_clauses(3, 2, &[&[1, 2], &[-2, 3], &[-1, -3]]).unwrap();
        let h = build_hamiltonian(&f).unwrap();
        let g = finite_difference_gradient(&h, &QaoaParams::zeros(2), 1e-4).unwrap();
        assert_eq!(g.len(), 4);
        assert!(g.iter().all(|x| x.abs() < 1e-10));
        assert!(finite_difference_gradient(&h, &QaoaParams::zeros(1), 0.0).is_err());
    }

    #[test]
    fn mismatched_params_are_rejected() {
        assert!(QaoaParams::new(vec![0.1], vec![]).is_err());
        let h = build_hamiltonian(&generate_random_ksat(3, 2, 2, 0).unwrap()).unwrap();
        let bad = QaoaParams {
            gamma: vec![0.1, 0.2],
            beta: vec![0.3],
        };
        assert!(qaoa_expectation(&h, &bad).is_err());
    }

    #[test]
    fn flat_round_trip_and_padding() {
        let p = QaoaParams::new(vec![1.0, 2.0], vec![3.0, 4.0]).unwrap();
        assert_eq!(p.to_flat(), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(QaoaParams::from_flat(&p.to_flat()), p);
        let padded = p.padded_to(3);
        assert_eq!(padded.gamma, vec![1.0, 2.0, 0.0]);
        let h = build_hamiltonian(&generate_random_ksat(5, 12, 3, 8).unwrap()).unwrap();
        assert_eq!(
            qaoa_expectation(&h, &p).unwrap(),
            qaoa_expectation(&h, &padded).unwrap()
        );
    }
}
