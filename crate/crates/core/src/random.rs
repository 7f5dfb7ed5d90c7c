//! Seeded random states, Hermitian generators and unitaries for property
//! checks.
//!
//! All randomness flows through an explicitly constructed [`StateSampler`];
//! there is no global generator. The same seed always reproduces the same
//! sequence of draws.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::ComplexMatrix;
use crate::states::{BipartiteState, DensityMatrix};

#[derive(Debug, Clone)]
pub struct StateSampler {
    rng: ChaCha8Rng,
}

impl StateSampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn gaussian(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform draw from `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn complex_gaussian(&mut self) -> Complex64 {
        Complex64::new(self.gaussian(), self.gaussian())
    }

    /// Matrix of i.i.d. standard complex Gaussian entries.
    pub fn ginibre(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        let data = (0..rows * cols).map(|_| self.complex_gaussian()).collect();
        ComplexMatrix::from_vec(rows, cols, data).expect("finite gaussian entries")
    }

    /// Normalized complex Gaussian vector; its direction is Haar distributed.
    pub fn pure(&mut self, dim: usize) -> Vec<Complex64> {
        loop {
            let v: Vec<Complex64> = (0..dim).map(|_| self.complex_gaussian()).collect();
            let norm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum());
            if norm > 0.0 {
                return v.into_iter().map(|z| z / norm).collect();
            }
        }
    }

    /// `G G† / Tr(G G†)` for a square Ginibre matrix `G`.
    pub fn density(&mut self, dim: usize) -> DensityMatrix {
        let g = self.ginibre(dim, dim);
        let w = g.matmul(&g.adjoint()).expect("square");
        let tr = w.trace().expect("square").re;
        DensityMatrix::new(w.scale_real(1.0 / tr)).expect("Ginibre states are valid")
    }

    /// `(G + G†)/2` for a square Ginibre matrix `G`.
    pub fn hermitian(&mut self, dim: usize) -> ComplexMatrix {
        self.ginibre(dim, dim).hermitian_part().expect("square")
    }

    /// `exp(-i H)` for a random Hermitian `H`.
    pub fn unitary(&mut self, dim: usize) -> ComplexMatrix {
        let h = self.hermitian(dim);
        crate::eigen::expm_propagator(&h, 1.0, 1.0).expect("Hermitian generator")
    }

    /// Random bipartite state obtained by tracing an ancilla of dimension
    /// `ancilla` out of a random pure state on `S ⊗ E ⊗ A`. Generic states
    /// drawn this way are correlated.
    pub fn correlated(&mut self, dim_s: usize, dim_e: usize, ancilla: usize) -> BipartiteState {
        let dim = dim_s * dim_e;
        let psi = self.pure(dim * ancilla);
        let mut rho = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                rho[(i, j)] = (0..ancilla).map(|a| psi[i * ancilla + a] * psi[j * ancilla + a].conj()).sum();
            }
        }
        let state = DensityMatrix::new(rho).expect("marginal of a pure state");
        BipartiteState::new(state, dim_s, dim_e).expect("consistent dimensions")
    }
}

/// Ginibre random density matrix of dimension `dim` from a fresh generator.
pub fn random_density(dim: usize, seed: u64) -> DensityMatrix {
    StateSampler::new(seed).density(dim)
}

/// Haar random pure state of dimension `dim` from a fresh generator.
pub fn random_pure(dim: usize, seed: u64) -> Vec<Complex64> {
    StateSampler::new(seed).pure(dim)
}
