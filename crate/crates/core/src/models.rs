//! Built-in scenarios: two qubits under a controlled-NOT (optionally
//! followed by a swap), and a central spin exchanging excitations with a
//! bath of `N` spins.
//!
//! Qubit conventions: `|0⟩ = (1, 0)`, `|1⟩ = (0, 1)`, the first tensor factor
//! is the system. In the spin bath the central spin is factor 0 and bath spin
//! `k` (1-based) is factor `k`; `|+⟩ = |0⟩` and `|−⟩ = |1⟩` are the `σ_z`
//! eigenstates with `σ₊|−⟩ = |+⟩`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::dynamics::{Evolution, TimeGrid, DEFAULT_STEPS};
use crate::matrix::ComplexMatrix;
use crate::states::{BipartiteState, DensityMatrix};
use crate::{Error, Result, MAX_DIMENSION};

/// Tolerance on `|α|² + |β|² = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Largest bath that fits the dense dimension limit.
pub const MAX_BATH_SPINS: usize = 11;

const MARGINAL_TOL: f64 = 1e-12;

/// Two initial total states and the evolution that acts on both.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelPair {
    pub rho1: BipartiteState,
    pub rho2: BipartiteState,
    pub evolution: Evolution,
}

fn check_amplitudes(alpha: Complex64, beta: Complex64) -> Result<()> {
    let finite = |z: Complex64| z.re.is_finite() && z.im.is_finite();
    if !finite(alpha) || !finite(beta) {
        return Err(Error::InvalidAmplitudes("amplitudes must be finite"));
    }
    if (alpha.norm_sqr() + beta.norm_sqr() - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::InvalidAmplitudes("|alpha|^2 + |beta|^2 must equal 1"));
    }
    Ok(())
}

/// `|00⟩→|00⟩, |01⟩→|01⟩, |10⟩→|11⟩, |11⟩→|10⟩`, first qubit controls.
pub fn cnot_gate() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
    ])
    .expect("4x4")
}

pub fn swap_gate() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
    .expect("4x4")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnotScenario {
    alpha: Complex64,
    beta: Complex64,
    apply_swap: bool,
}

impl CnotScenario {
    /// Both amplitudes must be non-zero and normalized within 1e-12.
    pub fn new(alpha: Complex64, beta: Complex64, apply_swap: bool) -> Result<Self> {
        check_amplitudes(alpha, beta)?;
        if alpha.norm() == 0.0 || beta.norm() == 0.0 {
            return Err(Error::InvalidAmplitudes("alpha and beta must both be non-zero"));
        }
        Ok(Self { alpha, beta, apply_swap })
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn apply_swap(&self) -> bool {
        self.apply_swap
    }

    /// `|αβ|`.
    pub fn overlap(&self) -> f64 {
        (self.alpha * self.beta).norm()
    }

    /// `U_C`, or `U_swap · U_C` when the swap is requested.
    pub fn gate(&self) -> ComplexMatrix {
        if self.apply_swap {
            swap_gate().matmul(&cnot_gate()).expect("4x4")
        } else {
            cnot_gate()
        }
    }

    pub fn evolution(&self) -> Evolution {
        Evolution::gate(self.gate()).expect("permutation matrices are unitary")
    }

    /// `α|00⟩ + β|11⟩`.
    pub fn entangled_state(&self) -> BipartiteState {
        let z = Complex64::new(0.0, 0.0);
        BipartiteState::from_pure(&[self.alpha, z, z, self.beta], 2, 2).expect("normalized")
    }

    /// `|α|²|00⟩⟨00| + |β|²|11⟩⟨11|`.
    pub fn classical_state(&self) -> BipartiteState {
        let state = DensityMatrix::mixture(&[
            (self.alpha.norm_sqr(), &DensityMatrix::basis(4, 0).expect("in range")),
            (self.beta.norm_sqr(), &DensityMatrix::basis(4, 3).expect("in range")),
        ])
        .expect("weights sum to one");
        BipartiteState::new(state, 2, 2).expect("2x2")
    }

    /// `|α|²|0⟩⟨0| + |β|²|1⟩⟨1|`, every marginal of both states.
    pub fn marginal(&self) -> ComplexMatrix {
        ComplexMatrix::real_diag(&[self.alpha.norm_sqr(), self.beta.norm_sqr()])
    }
}

fn check_marginal(state: &DensityMatrix, expected: &ComplexMatrix) -> Result<()> {
    if state.matrix().max_abs_diff(expected)? > MARGINAL_TOL {
        return Err(Error::InvalidState("marginals of the scenario states disagree"));
    }
    Ok(())
}

/// The entangled state against the classically correlated state with the
/// same marginals.
pub fn cnot_pair(sc: &CnotScenario) -> Result<ModelPair> {
    let rho1 = sc.entangled_state();
    let rho2 = sc.classical_state();
    let marginal = sc.marginal();
    for rho in [&rho1, &rho2] {
        check_marginal(&rho.system_marginal(), &marginal)?;
        check_marginal(&rho.environment_marginal(), &marginal)?;
    }
    Ok(ModelPair { rho1, rho2, evolution: sc.evolution() })
}

/// The entangled state against the product of its marginals.
pub fn cnot_product_pair(sc: &CnotScenario) -> Result<ModelPair> {
    let rho1 = sc.entangled_state();
    let rho2 = rho1.product_of_marginals();
    Ok(ModelPair { rho1, rho2, evolution: sc.evolution() })
}

/// The classically correlated state against the product of its marginals.
pub fn cnot_classical_pair(sc: &CnotScenario) -> Result<ModelPair> {
    let rho1 = sc.classical_state();
    let rho2 = rho1.product_of_marginals();
    Ok(ModelPair { rho1, rho2, evolution: sc.evolution() })
}

/// Central spin coupled to `N` bath spins by
/// `H = A₀ Σ_k (σ₊σ₋⁽ᵏ⁾ + σ₋σ₊⁽ᵏ⁾)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinBathScenario {
    n_bath: usize,
    a0: f64,
    alpha: Complex64,
    beta: Complex64,
}

impl SpinBathScenario {
    pub fn new(n_bath: usize, a0: f64, alpha: Complex64, beta: Complex64) -> Result<Self> {
        if n_bath == 0 {
            return Err(Error::InvalidArgument("bath must contain at least one spin"));
        }
        if n_bath > MAX_BATH_SPINS {
            return Err(Error::DimensionTooLarge { dim: 2usize << n_bath.min(62), max: MAX_DIMENSION });
        }
        if !a0.is_finite() || a0 == 0.0 {
            return Err(Error::InvalidArgument("coupling must be finite and non-zero"));
        }
        check_amplitudes(alpha, beta)?;
        Ok(Self { n_bath, a0, alpha, beta })
    }

    pub fn n_bath(&self) -> usize {
        self.n_bath
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// Effective coupling `A = √N A₀`.
    pub fn coupling(&self) -> f64 {
        libm::sqrt(self.n_bath as f64) * self.a0
    }

    /// `π / |A|`, the period of the reduced trace distance.
    pub fn period(&self) -> f64 {
        PI / self.coupling().abs()
    }

    /// One period sampled with the default number of steps; the maximum at
    /// a quarter period falls on a grid point.
    pub fn default_grid(&self) -> TimeGrid {
        TimeGrid::new(0.0, self.period(), DEFAULT_STEPS).expect("positive period")
    }

    pub fn bath_dim(&self) -> usize {
        1 << self.n_bath
    }

    pub fn dim(&self) -> usize {
        2 * self.bath_dim()
    }

    /// Bath index of `|k⟩`: spin `k` (1-based) flipped from `|χ₊⟩`.
    fn flipped(&self, k: usize) -> usize {
        1 << (self.n_bath - k)
    }

    /// `|χ₊⟩ = |++…+⟩`.
    pub fn chi_plus(&self) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.bath_dim()];
        v[0] = Complex64::new(1.0, 0.0);
        v
    }

    /// `|χ₋⟩ = (i/√N) Σ_k |k⟩`, global phase kept.
    pub fn chi_minus(&self) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.bath_dim()];
        let amp = Complex64::new(0.0, 1.0 / libm::sqrt(self.n_bath as f64));
        for k in 1..=self.n_bath {
            v[self.flipped(k)] = amp;
        }
        v
    }

    pub fn hamiltonian(&self) -> ComplexMatrix {
        let dim = self.dim();
        let central_down = self.bath_dim();
        let mut h = ComplexMatrix::zeros(dim, dim);
        let coupling = Complex64::new(self.a0, 0.0);
        for b in 0..dim {
            if b & central_down == 0 {
                continue;
            }
            for k in 1..=self.n_bath {
                let bath_bit = self.flipped(k);
                if b & bath_bit == 0 {
                    // σ₊σ₋⁽ᵏ⁾ : |−⟩|…+…⟩ → |+⟩|…−…⟩, and its adjoint.
                    let target = b ^ central_down ^ bath_bit;
                    h[(target, b)] += coupling;
                    h[(b, target)] += coupling;
                }
            }
        }
        h
    }

    /// `|−⟩ ⊗ |χ₊⟩` and `|+⟩ ⊗ |χ₋⟩` in the full space.
    fn branches(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let plus = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let minus = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        (kron_vec(&minus, &self.chi_plus()), kron_vec(&plus, &self.chi_minus()))
    }
}

fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// `ρ¹ = |Ψ⟩⟨Ψ|` with `|Ψ⟩ = α|−⟩|χ₊⟩ + β|+⟩|χ₋⟩` against
/// `ρ² = |α|² |−χ₊⟩⟨−χ₊| + |β|² |+χ₋⟩⟨+χ₋|`; the two share both marginals.
pub fn spin_bath_pair(sc: &SpinBathScenario) -> Result<ModelPair> {
    let (down_up, up_minus) = sc.branches();
    let psi: Vec<Complex64> = down_up.iter().zip(&up_minus).map(|(a, b)| sc.alpha * a + sc.beta * b).collect();
    let rho1 = BipartiteState::from_pure(&psi, 2, sc.bath_dim())?;
    let mix = DensityMatrix::mixture(&[
        (sc.alpha.norm_sqr(), &DensityMatrix::from_pure(&down_up)?),
        (sc.beta.norm_sqr(), &DensityMatrix::from_pure(&up_minus)?),
    ])?;
    let rho2 = BipartiteState::new(mix, 2, sc.bath_dim())?;

    check_marginal(&rho1.system_marginal(), rho2.system_marginal().matrix())?;
    check_marginal(&rho1.environment_marginal(), rho2.environment_marginal().matrix())?;

    let evolution = Evolution::hamiltonian(sc.hamiltonian())?;
    Ok(ModelPair { rho1, rho2, evolution })
}

/// `|Re(α* β) sin(2 A t)|`.
pub fn spin_bath_analytic(sc: &SpinBathScenario, t: f64) -> f64 {
    ((sc.alpha.conj() * sc.beta).re * libm::sin(2.0 * sc.coupling() * t)).abs()
}

/// Time derivative of [`spin_bath_analytic`] away from its zeros.
pub fn spin_bath_analytic_rate(sc: &SpinBathScenario, t: f64) -> f64 {
    let c = (sc.alpha.conj() * sc.beta).re;
    let a = sc.coupling();
    let s = c * libm::sin(2.0 * a * t);
    let ds = 2.0 * a * c * libm::cos(2.0 * a * t);
    if s >= 0.0 {
        ds
    } else {
        -ds
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{distance_trajectory, reduced_state_at};
    use crate::states::trace_distance;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cnot_truth_table() {
        let u = cnot_gate();
        for (input, output) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            for row in 0..4 {
                let expected = if row == output { 1.0 } else { 0.0 };
                assert_eq!(u[(row, input)], c(expected, 0.0));
            }
        }
        assert_eq!(u.adjoint(), u);
        assert_eq!(u.matmul(&u).unwrap(), ComplexMatrix::identity(4));
    }

    #[test]
    fn cnot_scenario_validation() {
        assert!(CnotScenario::new(c(1.0, 0.0), c(0.0, 0.0), false).is_err());
        assert!(CnotScenario::new(c(0.9, 0.0), c(0.1, 0.0), false).is_err());
        assert!(CnotScenario::new(c(0.6, 0.0), c(0.0, 0.8), true).is_ok());
    }

    #[test]
    fn cnot_pair_at_equal_amplitudes() {
        let sc = CnotScenario::new(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0), false).unwrap();
        let pair = cnot_pair(&sc).unwrap();
        let d = trace_distance(pair.rho1.state(), pair.rho2.state()).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
        let half = ComplexMatrix::real_diag(&[0.5, 0.5]);
        assert!(pair.rho1.system_marginal().matrix().max_abs_diff(&half).unwrap() < 1e-15);
        assert!(pair.rho2.environment_marginal().matrix().max_abs_diff(&half).unwrap() < 1e-15);
    }

    #[test]
    fn spin_bath_validation() {
        let h = c(FRAC_1_SQRT_2, 0.0);
        assert!(matches!(SpinBathScenario::new(12, 1.0, h, h), Err(Error::DimensionTooLarge { .. })));
        assert!(SpinBathScenario::new(0, 1.0, h, h).is_err());
        assert!(SpinBathScenario::new(2, 0.0, h, h).is_err());
        assert!(SpinBathScenario::new(2, 1.0, h, c(0.5, 0.0)).is_err());
        let sc = SpinBathScenario::new(4, 1.0, h, h).unwrap();
        assert_eq!(sc.coupling(), 2.0);
        assert_eq!(sc.dim(), 32);
    }

    #[test]
    fn spin_bath_single_spin_marginals_agree() {
        let sc = SpinBathScenario::new(1, 0.7, c(0.6, 0.0), c(0.0, 0.8)).unwrap();
        let pair = spin_bath_pair(&sc).unwrap();
        assert_eq!(pair.rho1.dim(), 4);
        let ds = pair.rho1.system_marginal().matrix().max_abs_diff(pair.rho2.system_marginal().matrix()).unwrap();
        let de =
            pair.rho1.environment_marginal().matrix().max_abs_diff(pair.rho2.environment_marginal().matrix()).unwrap();
        assert!(ds < 1e-12 && de < 1e-12);
    }

    #[test]
    fn spin_bath_hamiltonian_structure() {
        let sc = SpinBathScenario::new(3, 0.5, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        let h = sc.hamiltonian();
        assert_eq!(h.hermitian_deviation().unwrap(), 0.0);
        // H |−χ₊⟩ = A |+⟩ ⊗ (1/√N) Σ_k |k⟩.
        let (down_up, up_minus) = sc.branches();
        let image = h.mat_vec(&down_up).unwrap();
        let expected: Vec<Complex64> = up_minus.iter().map(|z| z * c(0.0, -1.0) * sc.coupling()).collect();
        for (a, b) in image.iter().zip(&expected) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn spin_bath_reduced_state_matches_two_level_solution() {
        // In the span of |a⟩ = |−χ₊⟩ and |b⟩ = |+⟩(Σ_k|k⟩/√N) the Hamiltonian
        // is A(|a⟩⟨b| + |b⟩⟨a|), and |+χ₋⟩ = i|b⟩. Hence
        // Ψ(t) = (α cos At + β sin At)|a⟩ + i(β cos At − α sin At)|b⟩ and,
        // with orthogonal bath branches, ρ_S = diag(|β cos − α sin|², |α cos + β sin|²).
        let (alpha, beta) = (c(0.6, 0.0), c(0.0, 0.8));
        let sc = SpinBathScenario::new(2, 1.0, alpha, beta).unwrap();
        let t = PI / (4.0 * sc.coupling());
        let (ct, st) = (libm::cos(sc.coupling() * t), libm::sin(sc.coupling() * t));
        let x = alpha * ct + beta * st;
        let y = beta * ct - alpha * st;
        let expected = ComplexMatrix::real_diag(&[y.norm_sqr(), x.norm_sqr()]);

        let pair = spin_bath_pair(&sc).unwrap();
        let reduced = reduced_state_at(&pair.rho1, &pair.evolution, t).unwrap();
        assert!(reduced.matrix().max_abs_diff(&expected).unwrap() < 1e-12);
    }

    #[test]
    fn spin_bath_initial_distance_and_imaginary_overlap() {
        let h = FRAC_1_SQRT_2;
        let sc = SpinBathScenario::new(4, 1.0, c(h, 0.0), c(h, 0.0)).unwrap();
        let pair = spin_bath_pair(&sc).unwrap();
        let d = trace_distance(pair.rho1.state(), pair.rho2.state()).unwrap();
        assert!((d - 0.5).abs() < 1e-12);

        let sc = SpinBathScenario::new(4, 1.0, c(h, 0.0), c(0.0, h)).unwrap();
        let pair = spin_bath_pair(&sc).unwrap();
        let traj = distance_trajectory(&pair.rho1, &pair.rho2, &pair.evolution, &sc.default_grid()).unwrap();
        assert!(traj.d_values().iter().all(|&d| d < 1e-12));
    }

    #[test]
    fn analytic_formula_examples() {
        let h = FRAC_1_SQRT_2;
        let sc = SpinBathScenario::new(4, 1.0, c(h, 0.0), c(h, 0.0)).unwrap();
        assert_eq!(spin_bath_analytic(&sc, 0.0), 0.0);
        let peak = spin_bath_analytic(&sc, PI / (4.0 * sc.coupling()));
        assert!((peak - 0.5).abs() < 1e-14);
        // A = √4 · 1 = 2, so 2At = 0.8 at t = 0.2.
        let expected = 0.5 * libm::sin(0.8).abs();
        assert!((spin_bath_analytic(&sc, 0.2) - expected).abs() < 1e-14);

        // Full 2⁵-dimensional simulation at t = 0.2 as oracle.
        let pair = spin_bath_pair(&sc).unwrap();
        let a = reduced_state_at(&pair.rho1, &pair.evolution, 0.2).unwrap();
        let b = reduced_state_at(&pair.rho2, &pair.evolution, 0.2).unwrap();
        assert!((trace_distance(&a, &b).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn analytic_rate_matches_finite_difference() {
        let sc = SpinBathScenario::new(2, 0.8, c(0.6, 0.0), c(0.8, 0.0)).unwrap();
        for t in [0.1, 0.4, 0.9, 1.7] {
            let h = 1e-6;
            let fd = (spin_bath_analytic(&sc, t + h) - spin_bath_analytic(&sc, t - h)) / (2.0 * h);
            assert!((fd - spin_bath_analytic_rate(&sc, t)).abs() < 1e-6);
        }
    }
}
