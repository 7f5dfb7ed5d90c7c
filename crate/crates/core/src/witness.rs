//! Bounds on the growth of reduced-state distinguishability and the
//! correlation witness.
//!
//! For two total states `ρ¹`, `ρ²` with system marginals `ρ_S¹`, `ρ_S²` and
//! environment marginals `ρ_E¹`, `ρ_E²`, any later increase of
//! `D(ρ_S¹(t), ρ_S²(t))` over its initial value is bounded by
//!
//! * the inaccessible information `I = D(ρ¹, ρ²) - D(ρ_S¹, ρ_S²)`, and
//! * the looser `D(ρ¹, ρ_S¹⊗ρ_E¹) + D(ρ², ρ_S²⊗ρ_E²) + D(ρ_E¹, ρ_E²)`.
//!
//! With a shared environment marginal and uncorrelated initial states both
//! bounds vanish, so an observed increase certifies initial correlations.
//! The converse does not hold: correlated pairs may show no increase.

use crate::dynamics::{distance_trajectory, Evolution, TimeGrid, Trajectory};
use crate::states::{trace_distance, trace_distance_of, BipartiteState};
use crate::{Error, Result};

/// Absolute tolerance on a trace-distance increase before the witness fires.
pub const DEFAULT_WITNESS_TOL: f64 = 1e-9;

/// Multiple of the witness tolerance by which an increase may exceed the
/// inaccessible information before it is reported as a numerical fault.
const VIOLATION_FACTOR: f64 = 10.0;

/// Initial-time quantities that bound the later growth of the reduced trace
/// distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSet {
    /// `D(ρ_S¹, ρ_S²)`.
    pub d0: f64,
    /// `D(ρ¹, ρ²) - D(ρ_S¹, ρ_S²)`, clamped at zero.
    pub i_bound: f64,
    /// `corr1 + corr2 + env_dist`.
    pub triangle_bound: f64,
    /// `D(ρ¹, ρ_S¹ ⊗ ρ_E¹)`.
    pub corr1: f64,
    /// `D(ρ², ρ_S² ⊗ ρ_E²)`.
    pub corr2: f64,
    /// `D(ρ_E¹, ρ_E²)`.
    pub env_dist: f64,
}

impl BoundSet {
    pub fn compute(rho1: &BipartiteState, rho2: &BipartiteState) -> Result<Self> {
        check_pair(rho1, rho2)?;
        let d0 = trace_distance(&rho1.system_marginal(), &rho2.system_marginal())?;
        let total = trace_distance(rho1.state(), rho2.state())?;
        let corr1 = correlation_measure(rho1)?;
        let corr2 = correlation_measure(rho2)?;
        let env_dist = trace_distance(&rho1.environment_marginal(), &rho2.environment_marginal())?;
        Ok(Self {
            d0,
            i_bound: (total - d0).max(0.0),
            triangle_bound: corr1 + corr2 + env_dist,
            corr1,
            corr2,
            env_dist,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub bounds: BoundSet,
    pub trajectory: Trajectory,
    /// `max_t D(t) - D(0)`; never negative since `t = 0` is sampled.
    pub max_increase: f64,
    pub witness_fired: bool,
    pub first_firing_time: Option<f64>,
    /// Whether the maximal increase reaches the inaccessible information
    /// within the tolerance.
    pub bound_saturated: bool,
    pub tolerance: f64,
}

impl WitnessReport {
    /// Per-sample firing flags: `D(t) > D(0) + tol`.
    pub fn firing_flags(&self) -> impl Iterator<Item = bool> + '_ {
        let d0 = self.trajectory.initial();
        self.trajectory.d_values().iter().map(move |&d| d > d0 + self.tolerance)
    }
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

/// Distinguishability of the total states that is invisible to measurements
/// on the system alone: `D(ρ¹, ρ²) - D(ρ_S¹, ρ_S²)`, clamped at zero.
pub fn inaccessible_information(rho1: &BipartiteState, rho2: &BipartiteState) -> Result<f64> {
    check_pair(rho1, rho2)?;
    let total = trace_distance(rho1.state(), rho2.state())?;
    let reduced = trace_distance(&rho1.system_marginal(), &rho2.system_marginal())?;
    Ok((total - reduced).max(0.0))
}

/// `D(ρ, ρ_S ⊗ ρ_E)`: zero exactly for product states.
pub fn correlation_measure(rho: &BipartiteState) -> Result<f64> {
    trace_distance_of(rho.matrix(), rho.product_of_marginals().matrix())
}

/// `D(ρ¹, ρ_S¹⊗ρ_E¹) + D(ρ², ρ_S²⊗ρ_E²) + D(ρ_E¹, ρ_E²)`.
pub fn triangle_bound(rho1: &BipartiteState, rho2: &BipartiteState) -> Result<f64> {
    check_pair(rho1, rho2)?;
    let env = trace_distance(&rho1.environment_marginal(), &rho2.environment_marginal())?;
    Ok(correlation_measure(rho1)? + correlation_measure(rho2)? + env)
}

/// Evolves the pair, follows the reduced trace distance and decides whether
/// it ever rises above its initial value by more than `tol`.
///
/// Fails with [`Error::BoundViolation`] if an increase exceeds the
/// inaccessible information by more than `10 * tol`, which can only come from
/// a numerical fault.
pub fn analyze(
    rho1: &BipartiteState,
    rho2: &BipartiteState,
    ev: &Evolution,
    grid: &TimeGrid,
    tol: f64,
) -> Result<WitnessReport> {
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::InvalidArgument("witness tolerance must be positive"));
    }
    let bounds = BoundSet::compute(rho1, rho2)?;
    let trajectory = distance_trajectory(rho1, rho2, ev, grid)?;
    let d0 = trajectory.initial();

    let mut max_increase = 0.0f64;
    let mut first_firing_time = None;
    for (&t, &d) in trajectory.times().iter().zip(trajectory.d_values()) {
        let increase = d - d0;
        if increase > bounds.i_bound + VIOLATION_FACTOR * tol {
            return Err(Error::BoundViolation { time: t, increase, bound: bounds.i_bound });
        }
        if increase > tol && first_firing_time.is_none() {
            first_firing_time = Some(t);
        }
        max_increase = max_increase.max(increase);
    }

    Ok(WitnessReport {
        bounds,
        max_increase,
        witness_fired: first_firing_time.is_some(),
        first_firing_time,
        bound_saturated: (max_increase - bounds.i_bound).abs() < tol,
        tolerance: tol,
        trajectory,
    })
}
