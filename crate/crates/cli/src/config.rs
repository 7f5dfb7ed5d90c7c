//! JSON scenario configs and their validation into runnable scenarios.

use std::path::Path;

use corrwitness::models::{cnot_classical_pair, cnot_pair, spin_bath_pair, CnotScenario, ModelPair, SpinBathScenario};
use corrwitness::witness::DEFAULT_WITNESS_TOL;
use corrwitness::{BipartiteState, Complex64, ComplexMatrix, DensityMatrix, Evolution, TimeGrid};
use serde::Deserialize;

use crate::error::{CliError, FieldContext};

/// Configs are written by hand with ten or so digits, so amplitudes within
/// this distance of unit norm are renormalized instead of rejected.
pub const AMPLITUDE_NORM_TOL: f64 = 1e-8;

const DEFAULT_GRID_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Entangled against classically correlated state, CNOT gate.
    Cnot,
    /// Classically correlated state against its marginals, swap after CNOT.
    CnotSwap,
    /// Classically correlated state against its marginals, CNOT gate.
    CnotClassical,
    SpinBath,
    Custom,
}

impl ModelKind {
    fn name(self) -> &'static str {
        match self {
            Self::Cnot => "cnot",
            Self::CnotSwap => "cnot-swap",
            Self::CnotClassical => "cnot-classical",
            Self::SpinBath => "spin-bath",
            Self::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub model: ModelKind,
    pub alpha: Option<[f64; 2]>,
    pub beta: Option<[f64; 2]>,
    pub n_bath: Option<usize>,
    pub a0: Option<f64>,
    pub grid: Option<GridConfig>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    pub hbar: Option<f64>,
    pub custom: Option<CustomConfig>,
}

fn default_tolerance() -> f64 {
    DEFAULT_WITNESS_TOL
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub t_end: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
}

fn default_steps() -> usize {
    DEFAULT_GRID_STEPS
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomConfig {
    pub dim_s: usize,
    pub dim_e: usize,
    pub hamiltonian: Option<MatrixRows>,
    pub gate: Option<MatrixRows>,
    pub rho1: MatrixRows,
    pub rho2: MatrixRows,
}

/// A matrix entry: a bare real number or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Entry> for Complex64 {
    fn from(e: Entry) -> Self {
        match e {
            Entry::Real(re) => Complex64::new(re, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

pub type MatrixRows = Vec<Vec<Entry>>;

/// A validated scenario, ready to analyze.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub rho1: BipartiteState,
    pub rho2: BipartiteState,
    pub evolution: Evolution,
    pub grid: TimeGrid,
    pub tolerance: f64,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_owned(), source })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|err| {
            let field = err.path().to_string();
            CliError::config(field, err.into_inner().to_string())
        })
    }

    pub fn into_scenario(self) -> Result<Scenario, CliError> {
        if self.tolerance <= 0.0 || !self.tolerance.is_finite() {
            return Err(CliError::config("tolerance", "must be positive and finite"));
        }
        let model = self.model;
        let reject = |field: &str, present: bool| {
            if present {
                Err(CliError::config(field, format!("not used by model `{}`", model.name())))
            } else {
                Ok(())
            }
        };

        let (pair, grid) = match model {
            ModelKind::Cnot | ModelKind::CnotSwap | ModelKind::CnotClassical => {
                reject("n_bath", self.n_bath.is_some())?;
                reject("a0", self.a0.is_some())?;
                reject("grid", self.grid.is_some())?;
                reject("hbar", self.hbar.is_some())?;
                reject("custom", self.custom.is_some())?;
                let (alpha, beta) = amplitudes(self.alpha, self.beta)?;
                let sc = CnotScenario::new(alpha, beta, model == ModelKind::CnotSwap).field("alpha")?;
                let pair = match model {
                    ModelKind::Cnot => cnot_pair(&sc),
                    _ => cnot_classical_pair(&sc),
                }
                .field("model")?;
                // A gate acts once; the grid only labels the before and after samples.
                (pair, TimeGrid::up_to(1.0)?)
            }
            ModelKind::SpinBath => {
                reject("hbar", self.hbar.is_some())?;
                reject("custom", self.custom.is_some())?;
                let n_bath = self.n_bath.ok_or_else(|| CliError::config("n_bath", "required by model `spin-bath`"))?;
                let a0 = self.a0.ok_or_else(|| CliError::config("a0", "required by model `spin-bath`"))?;
                if !a0.is_finite() || a0 == 0.0 {
                    return Err(CliError::config("a0", "must be finite and non-zero"));
                }
                let (alpha, beta) = amplitudes(self.alpha, self.beta)?;
                let sc = SpinBathScenario::new(n_bath, a0, alpha, beta).field("n_bath")?;
                let grid = match self.grid {
                    Some(g) => grid(g)?,
                    None => sc.default_grid(),
                };
                (spin_bath_pair(&sc).field("model")?, grid)
            }
            ModelKind::Custom => {
                reject("alpha", self.alpha.is_some())?;
                reject("beta", self.beta.is_some())?;
                reject("n_bath", self.n_bath.is_some())?;
                reject("a0", self.a0.is_some())?;
                let custom = self.custom.ok_or_else(|| CliError::config("custom", "required by model `custom`"))?;
                custom_pair(custom, self.grid, self.hbar)?
            }
        };

        Ok(Scenario { rho1: pair.rho1, rho2: pair.rho2, evolution: pair.evolution, grid, tolerance: self.tolerance })
    }
}

fn amplitudes(alpha: Option<[f64; 2]>, beta: Option<[f64; 2]>) -> Result<(Complex64, Complex64), CliError> {
    let alpha = alpha.ok_or_else(|| CliError::config("alpha", "required by this model"))?;
    let beta = beta.ok_or_else(|| CliError::config("beta", "required by this model"))?;
    let (alpha, beta) = (Complex64::new(alpha[0], alpha[1]), Complex64::new(beta[0], beta[1]));
    if !(alpha.is_finite() && beta.is_finite()) {
        return Err(CliError::config("alpha", "amplitudes must be finite"));
    }
    let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
    if (norm_sqr - 1.0).abs() > AMPLITUDE_NORM_TOL {
        return Err(CliError::config(
            "alpha, beta",
            format!("amplitudes are not normalized: |alpha|^2 + |beta|^2 = {norm_sqr}"),
        ));
    }
    let norm = norm_sqr.sqrt();
    Ok((alpha / norm, beta / norm))
}

fn grid(g: GridConfig) -> Result<TimeGrid, CliError> {
    TimeGrid::new(0.0, g.t_end, g.steps).field("grid")
}

fn matrix(rows: &MatrixRows, field: &str) -> Result<ComplexMatrix, CliError> {
    let rows: Vec<Vec<Complex64>> = rows.iter().map(|r| r.iter().map(|&e| e.into()).collect()).collect();
    ComplexMatrix::from_rows(&rows).field(field)
}

fn state(rows: &MatrixRows, dim_s: usize, dim_e: usize, field: &str) -> Result<BipartiteState, CliError> {
    let rho = DensityMatrix::new(matrix(rows, field)?).field(field)?;
    BipartiteState::new(rho, dim_s, dim_e).field(field)
}

fn custom_pair(
    custom: CustomConfig,
    grid_config: Option<GridConfig>,
    hbar: Option<f64>,
) -> Result<(ModelPair, TimeGrid), CliError> {
    let (dim_s, dim_e) = (custom.dim_s, custom.dim_e);
    let dim = dim_s.saturating_mul(dim_e);
    if dim > corrwitness::MAX_DIMENSION {
        return Err(corrwitness::Error::DimensionTooLarge { dim, max: corrwitness::MAX_DIMENSION })
            .field("custom.dim_s");
    }
    let rho1 = state(&custom.rho1, dim_s, dim_e, "custom.rho1")?;
    let rho2 = state(&custom.rho2, dim_s, dim_e, "custom.rho2")?;

    let (evolution, grid, field) = match (&custom.hamiltonian, &custom.gate) {
        (Some(h), None) => {
            let g = grid_config.ok_or_else(|| CliError::config("grid", "required with a custom Hamiltonian"))?;
            let h = matrix(h, "custom.hamiltonian")?;
            let ev = Evolution::hamiltonian_with_hbar(h, hbar.unwrap_or(1.0)).field("custom.hamiltonian")?;
            (ev, grid(g)?, "custom.hamiltonian")
        }
        (None, Some(u)) => {
            if grid_config.is_some() {
                return Err(CliError::config("grid", "not used with a custom gate"));
            }
            if hbar.is_some() {
                return Err(CliError::config("hbar", "not used with a custom gate"));
            }
            let ev = Evolution::gate(matrix(u, "custom.gate")?).field("custom.gate")?;
            (ev, TimeGrid::up_to(1.0)?, "custom.gate")
        }
        _ => return Err(CliError::config("custom", "exactly one of `hamiltonian` and `gate` is required")),
    };
    if evolution.dim() != dim {
        return Err(CliError::config(field, format!("is {0}x{0} but the states are {dim}x{dim}", evolution.dim())));
    }
    Ok((ModelPair { rho1, rho2, evolution }, grid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::{EXIT_INVALID_INPUT, EXIT_NUMERICAL};

    fn scenario(json: &str) -> Result<Scenario, CliError> {
        ScenarioConfig::parse(json)?.into_scenario()
    }

    fn failing_field(json: &str) -> String {
        match scenario(json).unwrap_err() {
            CliError::Config { field, .. } | CliError::Model { field, .. } => field,
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn hand_written_amplitudes_are_renormalized() {
        let s = scenario(r#"{"model": "cnot", "alpha": [0.7071067812, 0], "beta": [0.7071067812, 0]}"#).unwrap();
        assert!(s.evolution.is_gate());
        assert_eq!(s.tolerance, DEFAULT_WITNESS_TOL);
    }

    #[test]
    fn unnormalized_amplitudes_are_rejected() {
        let err = scenario(r#"{"model": "cnot", "alpha": [0.9, 0], "beta": [0.3, 0]}"#).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_INVALID_INPUT);
        assert!(err.to_string().contains("normalized"), "{err}");
    }

    #[test]
    fn spin_bath_defaults_to_one_period() {
        let s =
            scenario(r#"{"model": "spin-bath", "n_bath": 4, "a0": 1, "alpha": [0.6, 0], "beta": [0, 0.8]}"#).unwrap();
        assert_eq!(s.grid.steps(), 200);
        assert!((s.grid.t_end() - std::f64::consts::PI / 2.0).abs() < 1e-15);
        assert_eq!(s.rho1.dim(), 32);
    }

    #[test]
    fn errors_name_the_offending_field() {
        assert_eq!(failing_field(r#"{"model": "cnot", "alpha": [1, 0]}"#), "beta");
        assert_eq!(failing_field(r#"{"model": "spin-bath", "alpha": [0.6, 0], "beta": [0.8, 0], "a0": 1}"#), "n_bath");
        assert_eq!(failing_field(r#"{"model": "cnot", "alpha": "x"}"#), "alpha");
        assert_eq!(failing_field(r#"{"model": "cnot", "alhpa": [1, 0]}"#), "alhpa");
        assert_eq!(failing_field(r#"{"model": "ising"}"#), "model");
        assert_eq!(
            failing_field(r#"{"model": "cnot", "alpha": [0.6, 0], "beta": [0.8, 0], "grid": {"t_end": 1}}"#),
            "grid"
        );
        assert_eq!(
            failing_field(r#"{"model": "cnot", "alpha": [0.6, 0], "beta": [0.8, 0], "tolerance": -1}"#),
            "tolerance"
        );
    }

    #[test]
    fn custom_hamiltonian_scenario() {
        let json = r#"{
            "model": "custom",
            "grid": {"t_end": 2.0, "steps": 10},
            "hbar": 2.0,
            "custom": {
                "dim_s": 2, "dim_e": 1,
                "hamiltonian": [[0, 1], [1, 0]],
                "rho1": [[1, 0], [0, 0]],
                "rho2": [[0.5, [0, -0.5]], [[0, 0.5], 0.5]]
            }
        }"#;
        let s = scenario(json).unwrap();
        assert_eq!(s.grid.steps(), 10);
        assert!(matches!(s.evolution, Evolution::Hamiltonian { hbar, .. } if hbar == 2.0));
    }

    #[test]
    fn custom_matrices_are_validated() {
        let base = |h: &str, rho1: &str| {
            format!(
                r#"{{"model": "custom", "grid": {{"t_end": 1}},
                    "custom": {{"dim_s": 2, "dim_e": 1, "hamiltonian": {h}, "rho1": {rho1}, "rho2": [[1, 0], [0, 0]]}}}}"#
            )
        };
        let err = scenario(&base("[[0, 1], [0, 0]]", "[[1, 0], [0, 0]]")).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_NUMERICAL);
        assert!(err.to_string().contains("custom.hamiltonian"));

        assert_eq!(failing_field(&base("[[0, 1], [1, 0]]", "[[1, 0], [0, 1]]")), "custom.rho1");
        assert_eq!(failing_field(&base("[[0, 1], [1]]", "[[1, 0], [0, 0]]")), "custom.hamiltonian");
        assert_eq!(failing_field(&base("[[1]]", "[[1, 0], [0, 0]]")), "custom.hamiltonian");
    }

    #[test]
    fn oversized_bath_is_a_numerical_failure() {
        let err = scenario(r#"{"model": "spin-bath", "n_bath": 12, "a0": 1, "alpha": [0.6, 0], "beta": [0.8, 0]}"#)
            .unwrap_err();
        assert_eq!(err.exit_code(), EXIT_NUMERICAL);
    }
}
