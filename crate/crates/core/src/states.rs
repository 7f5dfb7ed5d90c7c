//! Density matrices, bipartite system-environment states and the trace
//! distance.
//!
//! Composite indices are system-major: the product basis vector
//! `|s⟩ ⊗ |e⟩` sits at flat index `s * dim_e + e`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::eigen::hermitian_eig;
use crate::matrix::ComplexMatrix;
use crate::{Error, Result, MAX_DIMENSION};

/// Tolerance for Hermiticity, unit trace and negative eigenvalues of a
/// density matrix.
pub const STATE_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates and wraps `mat`. The stored matrix is the Hermitian part of
    /// the input.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::InvalidState("matrix is not square"));
        }
        if mat.rows() == 0 {
            return Err(Error::InvalidState("dimension must be positive"));
        }
        if mat.rows() > MAX_DIMENSION {
            return Err(Error::DimensionTooLarge { dim: mat.rows(), max: MAX_DIMENSION });
        }
        if !mat.is_finite() {
            return Err(Error::NonFinite);
        }
        if mat.hermitian_deviation()? > STATE_TOL {
            return Err(Error::InvalidState("matrix is not Hermitian"));
        }
        let mat = mat.hermitian_part()?;
        if (mat.trace()?.re - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState("trace differs from one"));
        }
        let spectrum = hermitian_eig(&mat)?;
        if spectrum.values().last().is_some_and(|&l| l < -STATE_TOL) {
            return Err(Error::InvalidState("matrix has a negative eigenvalue"));
        }
        Ok(Self { mat })
    }

    /// Wraps a matrix already known to be a valid state.
    pub(crate) fn new_unchecked(mat: ComplexMatrix) -> Self {
        debug_assert!(mat.is_square());
        Self { mat }
    }

    /// `|v⟩⟨v| / ⟨v|v⟩`.
    pub fn from_pure(v: &[Complex64]) -> Result<Self> {
        if v.len() > MAX_DIMENSION {
            return Err(Error::DimensionTooLarge { dim: v.len(), max: MAX_DIMENSION });
        }
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if v.is_empty() || norm2 == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self::new_unchecked(ComplexMatrix::outer(v, v).scale_real(1.0 / norm2)))
    }

    /// Computational basis projector `|k⟩⟨k|`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::IndexOutOfRange { index: k, len: dim });
        }
        let mut v = alloc::vec![Complex64::new(0.0, 0.0); dim];
        v[k] = Complex64::new(1.0, 0.0);
        Self::from_pure(&v)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidState("dimension must be positive"));
        }
        Ok(Self::new_unchecked(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64)))
    }

    /// Convex combination `Σ p_k ρ_k`; weights must be non-negative and sum
    /// to one.
    pub fn mixture(components: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let Some(((_, first), _)) = components.split_first() else {
            return Err(Error::InvalidArgument("empty mixture"));
        };
        let dim = first.dim();
        let mut total = 0.0;
        let mut mat = ComplexMatrix::zeros(dim, dim);
        for &(p, rho) in components {
            if p < 0.0 || !p.is_finite() {
                return Err(Error::InvalidArgument("mixture weights must be non-negative"));
            }
            mat = mat.add(&rho.mat.scale_real(p))?;
            total += p;
        }
        if (total - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidArgument("mixture weights must sum to one"));
        }
        Ok(Self::new_unchecked(mat))
    }

    /// Repairs a matrix degraded by round-off: symmetrizes, clips negative
    /// eigenvalues to zero and renormalizes the trace.
    pub fn normalize_and_clip(mat: &ComplexMatrix) -> Result<Self> {
        mat.require_square()?;
        let spectrum = hermitian_eig(&mat.hermitian_part()?)?;
        let total: f64 = spectrum.values().iter().map(|&l| l.max(0.0)).sum();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::InvalidState("no positive spectral weight"));
        }
        let repaired = spectrum.map(|l| Complex64::new(l.max(0.0) / total, 0.0));
        Ok(Self::new_unchecked(repaired.hermitian_part()?))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.mat.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `ρ ⊗ σ`.
    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        Self::new_unchecked(self.mat.kron(&other.mat))
    }
}

/// A total state on `S ⊗ E` together with the subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    state: DensityMatrix,
    dim_s: usize,
    dim_e: usize,
}

impl BipartiteState {
    pub fn new(state: DensityMatrix, dim_s: usize, dim_e: usize) -> Result<Self> {
        if dim_s == 0 || dim_e == 0 || dim_s.checked_mul(dim_e) != Some(state.dim()) {
            return Err(Error::DimensionMismatch { expected: (state.dim(), state.dim()), found: (dim_s, dim_e) });
        }
        Ok(Self { state, dim_s, dim_e })
    }

    pub fn from_pure(v: &[Complex64], dim_s: usize, dim_e: usize) -> Result<Self> {
        Self::new(DensityMatrix::from_pure(v)?, dim_s, dim_e)
    }

    /// `ρ_S ⊗ ρ_E`.
    pub fn product(system: &DensityMatrix, environment: &DensityMatrix) -> Result<Self> {
        let dim = system.dim() * environment.dim();
        if dim > MAX_DIMENSION {
            return Err(Error::DimensionTooLarge { dim, max: MAX_DIMENSION });
        }
        Self::new(system.kron(environment), system.dim(), environment.dim())
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.state.matrix()
    }

    pub fn dim(&self) -> usize {
        self.state.dim()
    }

    pub fn dim_s(&self) -> usize {
        self.dim_s
    }

    pub fn dim_e(&self) -> usize {
        self.dim_e
    }

    /// `Tr_E ρ`.
    pub fn system_marginal(&self) -> DensityMatrix {
        partial_trace_env(self)
    }

    /// `Tr_S ρ`.
    pub fn environment_marginal(&self) -> DensityMatrix {
        partial_trace_sys(self)
    }

    /// `Tr_E ρ ⊗ Tr_S ρ`, the uncorrelated state with the same marginals.
    pub fn product_of_marginals(&self) -> BipartiteState {
        let state = self.system_marginal().kron(&self.environment_marginal());
        Self { state, dim_s: self.dim_s, dim_e: self.dim_e }
    }

    pub(crate) fn with_matrix(&self, mat: ComplexMatrix) -> BipartiteState {
        Self { state: DensityMatrix::new_unchecked(mat), dim_s: self.dim_s, dim_e: self.dim_e }
    }
}

/// `(Tr_E ρ)[i, j] = Σ_k ρ[(i,k), (j,k)]`.
pub fn partial_trace_env(rho: &BipartiteState) -> DensityMatrix {
    DensityMatrix::new_unchecked(trace_out_environment(rho.matrix(), rho.dim_s, rho.dim_e))
}

/// `(Tr_S ρ)[i, j] = Σ_k ρ[(k,i), (k,j)]`.
pub fn partial_trace_sys(rho: &BipartiteState) -> DensityMatrix {
    let (ds, de) = (rho.dim_s, rho.dim_e);
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(de, de);
    for k in 0..ds {
        for i in 0..de {
            for j in 0..de {
                out[(i, j)] += m[(k * de + i, k * de + j)];
            }
        }
    }
    DensityMatrix::new_unchecked(out)
}

pub(crate) fn trace_out_environment(m: &ComplexMatrix, ds: usize, de: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(ds, ds);
    for i in 0..ds {
        for j in 0..ds {
            out[(i, j)] = (0..de).map(|k| m[(i * de + k, j * de + k)]).sum();
        }
    }
    out
}

/// `Tr_E |ψ⟩⟨ψ|` accumulated over an ensemble of unnormalized vectors.
pub(crate) fn reduced_from_vectors(vectors: &[Vec<Complex64>], ds: usize, de: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(ds, ds);
    for psi in vectors {
        for i in 0..ds {
            let bra_i = &psi[i * de..(i + 1) * de];
            for j in i..ds {
                let bra_j = &psi[j * de..(j + 1) * de];
                let z: Complex64 = bra_i.iter().zip(bra_j).map(|(a, b)| a * b.conj()).sum();
                out[(i, j)] += z;
                if j != i {
                    out[(j, i)] += z.conj();
                }
            }
        }
    }
    out
}

/// `½ Tr|a - b|`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    trace_distance_of(a.matrix(), b.matrix())
}

pub(crate) fn trace_distance_of(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let diff = a.sub(b)?.hermitian_part()?;
    let spectrum = hermitian_eig(&diff)?;
    let d = 0.5 * spectrum.values().iter().map(|l| l.abs()).sum::<f64>();
    Ok(d.clamp(0.0, 1.0))
}
