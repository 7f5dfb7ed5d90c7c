//! Unitary evolution of total states, reduced-state trajectories and the
//! information flux (rate of change of the reduced trace distance).
//!
//! For Hamiltonian evolution the generator is diagonalized once. Each
//! initial state is split into its eigen-ensemble `ρ = Σ p_k |v_k⟩⟨v_k|`, the
//! ensemble vectors are rotated into the energy basis, and every grid point
//! then costs one phase multiplication and one basis change per vector
//! instead of a full propagator product.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::eigen::{hermitian_eig, phase_factor, Spectrum};
use crate::matrix::ComplexMatrix;
use crate::states::{partial_trace_env, reduced_from_vectors, trace_distance_of, BipartiteState, DensityMatrix};
use crate::{Error, Result, HERMITIAN_TOL, UNITARY_TOL};

/// Grid size used when a caller does not pick one.
pub const DEFAULT_STEPS: usize = 200;

/// Ensemble weights at or below this are dropped before propagation.
const ENSEMBLE_CUTOFF: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub enum Evolution {
    /// Continuous evolution `exp(-i H t / ħ)`.
    Hamiltonian { h: ComplexMatrix, hbar: f64 },
    /// A single application of a fixed unitary; time is ignored.
    Gate(ComplexMatrix),
}

impl Evolution {
    pub fn hamiltonian(h: ComplexMatrix) -> Result<Self> {
        Self::hamiltonian_with_hbar(h, 1.0)
    }

    pub fn hamiltonian_with_hbar(h: ComplexMatrix, hbar: f64) -> Result<Self> {
        h.require_square()?;
        if !h.is_finite() {
            return Err(Error::NonFinite);
        }
        let deviation = h.hermitian_deviation()?;
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        if hbar <= 0.0 || !hbar.is_finite() {
            return Err(Error::InvalidArgument("hbar must be positive and finite"));
        }
        Ok(Self::Hamiltonian { h: h.hermitian_part()?, hbar })
    }

    pub fn gate(u: ComplexMatrix) -> Result<Self> {
        u.require_square()?;
        if !u.is_finite() {
            return Err(Error::NonFinite);
        }
        let deviation = u.unitary_deviation()?;
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self::Gate(u))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Hamiltonian { h, .. } => h.rows(),
            Self::Gate(u) => u.rows(),
        }
    }

    pub fn is_gate(&self) -> bool {
        matches!(self, Self::Gate(_))
    }

    /// The total-system unitary at time `t`.
    pub fn unitary(&self, t: f64) -> Result<ComplexMatrix> {
        match self {
            Self::Hamiltonian { h, hbar } => crate::eigen::expm_propagator(h, t, *hbar),
            Self::Gate(u) => Ok(u.clone()),
        }
    }
}

/// Cached eigendecomposition of a Hamiltonian.
#[derive(Debug, Clone)]
pub struct Propagator {
    spectrum: Spectrum,
    basis_adjoint: ComplexMatrix,
    hbar: f64,
}

impl Propagator {
    pub fn new(h: &ComplexMatrix, hbar: f64) -> Result<Self> {
        if hbar <= 0.0 || !hbar.is_finite() {
            return Err(Error::InvalidArgument("hbar must be positive and finite"));
        }
        let spectrum = hermitian_eig(h)?;
        let basis_adjoint = spectrum.vectors().adjoint();
        Ok(Self { spectrum, basis_adjoint, hbar })
    }

    pub fn dim(&self) -> usize {
        self.spectrum.dim()
    }

    pub fn energies(&self) -> &[f64] {
        self.spectrum.values()
    }

    /// `U(t) = V exp(-i Λ t / ħ) V†`.
    pub fn unitary(&self, t: f64) -> ComplexMatrix {
        self.spectrum.map(|l| phase_factor(l, t, self.hbar))
    }

    /// Coefficients of `v` in the energy eigenbasis.
    fn to_energy_basis(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.basis_adjoint.mat_vec(v).expect("dimension checked by caller")
    }

    /// `V exp(-i Λ t / ħ) c` for energy-basis coefficients `c`.
    fn evolve_coefficients(&self, coeffs: &[Complex64], t: f64) -> Vec<Complex64> {
        let rotated: Vec<Complex64> =
            coeffs.iter().zip(self.energies()).map(|(c, &l)| c * phase_factor(l, t, self.hbar)).collect();
        self.spectrum.vectors().mat_vec(&rotated).expect("square basis")
    }
}

/// Energy-basis ensemble of a bipartite state, each vector scaled by the
/// square root of its weight.
struct Ensemble {
    coeffs: Vec<Vec<Complex64>>,
    dim_s: usize,
    dim_e: usize,
}

impl Ensemble {
    fn new(rho: &BipartiteState, propagator: &Propagator) -> Result<Self> {
        let spectrum = hermitian_eig(rho.matrix())?;
        let coeffs = spectrum
            .values()
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > ENSEMBLE_CUTOFF)
            .map(|(k, &p)| {
                let v: Vec<Complex64> = spectrum.vector(k).iter().map(|z| z * libm::sqrt(p)).collect();
                propagator.to_energy_basis(&v)
            })
            .collect();
        Ok(Self { coeffs, dim_s: rho.dim_s(), dim_e: rho.dim_e() })
    }

    fn reduced_at(&self, propagator: &Propagator, t: f64) -> ComplexMatrix {
        let vectors: Vec<Vec<Complex64>> = self.coeffs.iter().map(|c| propagator.evolve_coefficients(c, t)).collect();
        reduced_from_vectors(&vectors, self.dim_s, self.dim_e)
    }
}

/// Uniform grid of `steps` intervals (`steps + 1` sample times) on
/// `[t_start, t_end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, steps: usize) -> Result<Self> {
        if !t_start.is_finite() || !t_end.is_finite() {
            return Err(Error::InvalidGrid("endpoints must be finite"));
        }
        if t_end <= t_start {
            return Err(Error::InvalidGrid("t_end must exceed t_start"));
        }
        if steps == 0 {
            return Err(Error::InvalidGrid("steps must be positive"));
        }
        Ok(Self { t_start, t_end, steps })
    }

    /// `[0, t_end]` with [`DEFAULT_STEPS`] intervals.
    pub fn up_to(t_end: f64) -> Result<Self> {
        Self::new(0.0, t_end, DEFAULT_STEPS)
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn spacing(&self) -> f64 {
        (self.t_end - self.t_start) / self.steps as f64
    }

    pub fn times(&self) -> Vec<f64> {
        let span = self.t_end - self.t_start;
        (0..=self.steps).map(|k| self.t_start + span * (k as f64 / self.steps as f64)).collect()
    }
}

/// Reduced trace distance sampled over time, with its finite-difference
/// rate.
///
/// For gate evolutions the trajectory has two samples (before and after the
/// gate, at nominal times 0 and 1) and no rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    d_values: Vec<f64>,
    sigma_values: Option<Vec<f64>>,
}

impl Trajectory {
    /// Builds a trajectory from samples on a uniform grid starting at
    /// `t_start` with spacing `dt`, computing the rate.
    pub fn uniform(t_start: f64, dt: f64, d_values: Vec<f64>) -> Result<Self> {
        if d_values.len() < 2 {
            return Err(Error::InvalidGrid("need at least two samples"));
        }
        if dt <= 0.0 || !dt.is_finite() {
            return Err(Error::InvalidGrid("spacing must be positive"));
        }
        let times = (0..d_values.len()).map(|k| t_start + dt * k as f64).collect();
        let sigma = finite_difference(&d_values, dt);
        Ok(Self { times, d_values, sigma_values: Some(sigma) })
    }

    fn on_grid(grid: &TimeGrid, d_values: Vec<f64>) -> Self {
        let sigma = finite_difference(&d_values, grid.spacing());
        Self { times: grid.times(), d_values, sigma_values: Some(sigma) }
    }

    fn gate(before: f64, after: f64) -> Self {
        Self { times: alloc::vec![0.0, 1.0], d_values: alloc::vec![before, after], sigma_values: None }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn d_values(&self) -> &[f64] {
        &self.d_values
    }

    /// `None` for gate evolutions. Entries 0 and `len - 1` are one-sided
    /// first-order differences; see [`Trajectory::interior`].
    pub fn sigma_values(&self) -> Option<&[f64]> {
        self.sigma_values.as_deref()
    }

    /// Indices whose rate uses the second-order central difference.
    pub fn interior(&self) -> core::ops::Range<usize> {
        match self.sigma_values {
            Some(_) if self.len() >= 3 => 1..self.len() - 1,
            _ => 0..0,
        }
    }

    pub fn is_gate(&self) -> bool {
        self.sigma_values.is_none()
    }

    pub fn initial(&self) -> f64 {
        self.d_values[0]
    }
}

fn finite_difference(d: &[f64], dt: f64) -> Vec<f64> {
    let n = d.len();
    (0..n)
        .map(|k| match k {
            0 => (d[1] - d[0]) / dt,
            k if k == n - 1 => (d[k] - d[k - 1]) / dt,
            k => (d[k + 1] - d[k - 1]) / (2.0 * dt),
        })
        .collect()
}

fn check_dims(rho: &BipartiteState, ev: &Evolution) -> Result<()> {
    if ev.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: (rho.dim(), rho.dim()), found: (ev.dim(), ev.dim()) });
    }
    Ok(())
}

fn check_pair(rho1: &BipartiteState, rho2: &BipartiteState) -> Result<()> {
    if (rho1.dim_s(), rho1.dim_e()) != (rho2.dim_s(), rho2.dim_e()) {
        return Err(Error::DimensionMismatch {
            expected: (rho1.dim_s(), rho1.dim_e()),
            found: (rho2.dim_s(), rho2.dim_e()),
        });
    }
    Ok(())
}

/// `U ρ U†`; `t` is ignored for gates.
pub fn evolve_total(rho: &BipartiteState, ev: &Evolution, t: f64) -> Result<BipartiteState> {
    check_dims(rho, ev)?;
    let u = ev.unitary(t)?;
    let evolved = u.matmul(rho.matrix())?.matmul(&u.adjoint())?;
    Ok(rho.with_matrix(evolved.hermitian_part()?))
}

/// `Tr_E[U ρ U†]`.
pub fn reduced_state_at(rho: &BipartiteState, ev: &Evolution, t: f64) -> Result<DensityMatrix> {
    Ok(partial_trace_env(&evolve_total(rho, ev, t)?))
}

/// Trace distance of the reduced states of `rho1` and `rho2` at every grid
/// time (or before/after a gate), with its rate of change.
pub fn distance_trajectory(
    rho1: &BipartiteState,
    rho2: &BipartiteState,
    ev: &Evolution,
    grid: &TimeGrid,
) -> Result<Trajectory> {
    check_pair(rho1, rho2)?;
    check_dims(rho1, ev)?;
    match ev {
        Evolution::Gate(_) => {
            let before = trace_distance_of(rho1.system_marginal().matrix(), rho2.system_marginal().matrix())?;
            let after = trace_distance_of(
                reduced_state_at(rho1, ev, 0.0)?.matrix(),
                reduced_state_at(rho2, ev, 0.0)?.matrix(),
            )?;
            Ok(Trajectory::gate(before, after))
        }
        Evolution::Hamiltonian { h, hbar } => {
            let propagator = Propagator::new(h, *hbar)?;
            let first = Ensemble::new(rho1, &propagator)?;
            let second = Ensemble::new(rho2, &propagator)?;
            let d_values = grid
                .times()
                .into_iter()
                .map(|t| trace_distance_of(&first.reduced_at(&propagator, t), &second.reduced_at(&propagator, t)))
                .collect::<Result<Vec<f64>>>()?;
            Ok(Trajectory::on_grid(grid, d_values))
        }
    }
}

/// Rate of change of the reduced trace distance at sample `index`: central
/// difference in the interior, one-sided at the ends.
pub fn sigma_rate(traj: &Trajectory, index: usize) -> Result<f64> {
    let sigma = traj.sigma_values().ok_or(Error::InvalidArgument("rate is undefined for gate evolutions"))?;
    sigma.get(index).copied().ok_or(Error::IndexOutOfRange { index, len: sigma.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::pauli;
    use crate::random::StateSampler;
    use crate::states::trace_distance;

    fn cnot() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn zero_time_is_identity() {
        let mut sampler = StateSampler::new(1);
        let rho = sampler.correlated(2, 3, 3);
        let ev = Evolution::hamiltonian(sampler.hermitian(6)).unwrap();
        let out = evolve_total(&rho, &ev, 0.0).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()).unwrap() < 1e-12);
        let reduced = reduced_state_at(&rho, &ev, 0.0).unwrap();
        assert!(reduced.matrix().max_abs_diff(rho.system_marginal().matrix()).unwrap() < 1e-12);
    }

    #[test]
    fn cnot_flips_target_when_control_set() {
        let ket10 = DensityMatrix::basis(4, 2).unwrap();
        let rho = BipartiteState::new(ket10, 2, 2).unwrap();
        let out = evolve_total(&rho, &Evolution::gate(cnot()).unwrap(), 123.0).unwrap();
        assert_eq!(out.matrix(), DensityMatrix::basis(4, 3).unwrap().matrix());
    }

    #[test]
    fn evolution_preserves_spectrum() {
        let mut sampler = StateSampler::new(2);
        let rho = sampler.correlated(2, 4, 8);
        let ev = Evolution::hamiltonian(sampler.hermitian(8)).unwrap();
        let out = evolve_total(&rho, &ev, 0.7).unwrap();
        let before = hermitian_eig(rho.matrix()).unwrap();
        let after = hermitian_eig(out.matrix()).unwrap();
        for (a, b) in before.values().iter().zip(after.values()) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!((out.matrix().trace().unwrap().re - 1.0).abs() < 1e-10);
        assert!(out.matrix().hermitian_deviation().unwrap() < 1e-12);
    }

    #[test]
    fn evolution_composes() {
        let mut sampler = StateSampler::new(3);
        let rho = sampler.correlated(3, 2, 2);
        let ev = Evolution::hamiltonian(sampler.hermitian(6)).unwrap();
        let direct = evolve_total(&rho, &ev, 1.3).unwrap();
        let stepped = evolve_total(&evolve_total(&rho, &ev, 0.4).unwrap(), &ev, 0.9).unwrap();
        assert!(direct.matrix().max_abs_diff(stepped.matrix()).unwrap() < 1e-9);
    }

    #[test]
    fn propagator_group_law() {
        let mut sampler = StateSampler::new(4);
        let p = Propagator::new(&sampler.hermitian(7), 1.0).unwrap();
        let (t1, t2) = (0.35, -1.1);
        let lhs = p.unitary(t1).matmul(&p.unitary(t2)).unwrap();
        assert!(lhs.max_abs_diff(&p.unitary(t1 + t2)).unwrap() < 1e-9);
        assert!(p.unitary(2.5).unitary_deviation().unwrap() < 1e-9);
    }

    #[test]
    fn trajectory_matches_full_propagation() {
        let mut sampler = StateSampler::new(5);
        let rho1 = sampler.correlated(2, 3, 2);
        let rho2 = sampler.correlated(2, 3, 6);
        let ev = Evolution::hamiltonian(sampler.hermitian(6)).unwrap();
        let grid = TimeGrid::new(0.0, 2.0, 10).unwrap();
        let traj = distance_trajectory(&rho1, &rho2, &ev, &grid).unwrap();
        for (t, d) in traj.times().iter().zip(traj.d_values()) {
            let a = reduced_state_at(&rho1, &ev, *t).unwrap();
            let b = reduced_state_at(&rho2, &ev, *t).unwrap();
            assert!((trace_distance(&a, &b).unwrap() - d).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_states_give_zero_trajectory() {
        let mut sampler = StateSampler::new(6);
        let rho = sampler.correlated(2, 2, 3);
        let ev = Evolution::hamiltonian(sampler.hermitian(4)).unwrap();
        let traj = distance_trajectory(&rho, &rho, &ev, &TimeGrid::up_to(3.0).unwrap()).unwrap();
        assert_eq!(traj.len(), DEFAULT_STEPS + 1);
        assert!(traj.d_values().iter().all(|&d| d < 1e-12));
    }

    #[test]
    fn gate_trajectory_has_two_points_and_no_rate() {
        let ev = Evolution::gate(cnot()).unwrap();
        let a = BipartiteState::new(DensityMatrix::basis(4, 2).unwrap(), 2, 2).unwrap();
        let b = BipartiteState::new(DensityMatrix::basis(4, 3).unwrap(), 2, 2).unwrap();
        let traj = distance_trajectory(&a, &b, &ev, &TimeGrid::up_to(1.0).unwrap()).unwrap();
        assert_eq!(traj.times(), &[0.0, 1.0]);
        assert!(traj.is_gate());
        assert!(sigma_rate(&traj, 0).is_err());
    }

    #[test]
    fn sigma_rate_contracts() {
        let traj = Trajectory::uniform(0.0, 0.1, alloc::vec![0.3; 6]).unwrap();
        assert!((0..6).all(|k| sigma_rate(&traj, k).unwrap() == 0.0));
        assert!(matches!(sigma_rate(&traj, 6), Err(Error::IndexOutOfRange { index: 6, len: 6 })));

        let decreasing: Vec<f64> = (0..8).map(|k| 1.0 / (1.0 + k as f64)).collect();
        let traj = Trajectory::uniform(0.0, 0.5, decreasing).unwrap();
        assert!(traj.interior().all(|k| sigma_rate(&traj, k).unwrap() < 0.0));
        assert_eq!(traj.interior(), 1..7);
    }

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(1.0, 1.0, 10).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 0).is_err());
        assert!(TimeGrid::new(0.0, f64::NAN, 3).is_err());
        let g = TimeGrid::new(-1.0, 1.0, 4).unwrap();
        assert_eq!(g.times(), &[-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn evolution_validation() {
        assert!(matches!(
            Evolution::hamiltonian(ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap()),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(Evolution::gate(ComplexMatrix::real_diag(&[1.0, 2.0])), Err(Error::NotUnitary { .. })));
        let ev = Evolution::hamiltonian(pauli::x()).unwrap();
        let rho = BipartiteState::new(DensityMatrix::basis(4, 0).unwrap(), 2, 2).unwrap();
        assert!(matches!(evolve_total(&rho, &ev, 1.0), Err(Error::DimensionMismatch { .. })));
    }
}
