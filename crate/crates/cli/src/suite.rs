//! Seeded check suites with per-check verdicts.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use clap::ValueEnum;
use corrwitness::dynamics::reduced_state_at;
use corrwitness::models::{
    cnot_classical_pair, cnot_pair, cnot_product_pair, spin_bath_pair, CnotScenario, ModelPair, SpinBathScenario,
};
use corrwitness::random::StateSampler;
use corrwitness::states::{partial_trace_env, trace_distance};
use corrwitness::witness::{analyze, BoundSet};
use corrwitness::{BipartiteState, Complex64, DensityMatrix, Evolution, TimeGrid, WitnessReport};

/// Slack allowed on exact identities and inequalities of the trace distance.
const METRIC_SLACK: f64 = 1e-10;
/// Slack allowed on quantities computed through time evolution.
const DYNAMICS_SLACK: f64 = 1e-9;
/// Slack on closed-form values of the worked examples.
const EXAMPLE_SLACK: f64 = 1e-12;
const WITNESS_TOL: f64 = 1e-9;
const TIMES_PER_CASE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    Metric,
    Contraction,
    WitnessSoundness,
    PaperExamples,
}

impl SuiteName {
    pub fn default_cases(self) -> usize {
        match self {
            Self::Metric | Self::WitnessSoundness => 500,
            Self::Contraction => 200,
            Self::PaperExamples => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    /// Human-readable acceptance condition on `measured`.
    pub condition: String,
    pub passed: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self { name: name.into(), measured, condition: format!("<= {bound:e}"), passed: measured <= bound }
    }

    fn near(name: impl Into<String>, measured: f64, target: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            condition: format!("= {target} +/- {tol:e}"),
            passed: (measured - target).abs() <= tol,
        }
    }

    fn count(name: impl Into<String>, failures: usize, cases: usize) -> Self {
        Self {
            name: name.into(),
            measured: failures as f64,
            condition: format!("= 0 of {cases}"),
            passed: failures == 0,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: measured {:e}, required {}", self.name, self.measured, self.condition)
    }
}

pub fn run(name: SuiteName, seed: u64, cases: usize) -> corrwitness::Result<Vec<Check>> {
    let mut sampler = StateSampler::new(seed);
    match name {
        SuiteName::Metric => metric(&mut sampler, cases),
        SuiteName::Contraction => contraction(&mut sampler, cases),
        SuiteName::WitnessSoundness => witness_soundness(&mut sampler, cases),
        SuiteName::PaperExamples => worked_examples(),
    }
}

/// Bipartite dimensions with a system of at least two levels and a total
/// dimension of at most 16.
fn random_dims(sampler: &mut StateSampler) -> (usize, usize) {
    loop {
        let ds = 2 + sampler.uniform(0.0, 3.0) as usize;
        let de = 1 + sampler.uniform(0.0, 4.0) as usize;
        if ds * de <= 16 {
            return (ds, de);
        }
    }
}

/// Worst-case slack accumulated over many cases.
struct Worst {
    name: &'static str,
    value: f64,
}

fn metric(sampler: &mut StateSampler, cases: usize) -> corrwitness::Result<Vec<Check>> {
    let mut worst = [
        "range [0, 1]",
        "symmetry",
        "identity of indiscernibles",
        "triangle inequality",
        "unitary invariance",
        "partial-trace monotonicity",
        "tensor-factor invariance",
        "subadditivity",
    ]
    .map(|name| Worst { name, value: 0.0 });

    for _ in 0..cases {
        let n = 1 + sampler.uniform(0.0, 6.0) as usize;
        let (a, b, c) = (sampler.density(n), sampler.density(n), sampler.density(n));
        let ab = trace_distance(&a, &b)?;
        let ac = trace_distance(&a, &c)?;
        let bc = trace_distance(&b, &c)?;
        let u = sampler.unitary(n);
        let rotate = |rho: &DensityMatrix| -> corrwitness::Result<DensityMatrix> {
            DensityMatrix::new(u.matmul(rho.matrix())?.matmul(&u.adjoint())?)
        };
        let rotated = trace_distance(&rotate(&a)?, &rotate(&b)?)?;

        let (ds, de) = random_dims(sampler);
        let rho1 = sampler.correlated(ds, de, 3);
        let rho2 = sampler.correlated(ds, de, 2);
        let total = trace_distance(rho1.state(), rho2.state())?;
        let reduced = trace_distance(&partial_trace_env(&rho1), &partial_trace_env(&rho2))?;

        let (s1, s2) = (sampler.density(ds), sampler.density(ds));
        let (e1, e2) = (sampler.density(de), sampler.density(de));
        let ds12 = trace_distance(&s1, &s2)?;
        let shared1 = BipartiteState::product(&s1, &e1)?;
        let shared2 = BipartiteState::product(&s2, &e1)?;
        let other2 = BipartiteState::product(&s2, &e2)?;
        let tensored = trace_distance(shared1.state(), shared2.state())?;
        let split = trace_distance(shared1.state(), other2.state())?;

        let slacks = [
            (-ab).max(ab - 1.0).max(0.0),
            (ab - trace_distance(&b, &a)?).abs(),
            trace_distance(&a, &a)?,
            (ac - ab - bc).max(0.0),
            (rotated - ab).abs(),
            (reduced - total).max(0.0),
            (tensored - ds12).abs(),
            (split - ds12 - trace_distance(&e1, &e2)?).max(0.0),
        ];
        for (w, s) in worst.iter_mut().zip(slacks) {
            w.value = w.value.max(s);
        }
    }
    Ok(worst.iter().map(|w| Check::at_most(format!("{} ({cases} cases)", w.name), w.value, METRIC_SLACK)).collect())
}

fn shared_environment_pair(
    sampler: &mut StateSampler,
) -> corrwitness::Result<(BipartiteState, BipartiteState, Evolution)> {
    let (ds, de) = random_dims(sampler);
    let env = sampler.density(de);
    let rho1 = BipartiteState::product(&sampler.density(ds), &env)?;
    let rho2 = BipartiteState::product(&sampler.density(ds), &env)?;
    let ev = Evolution::hamiltonian(sampler.hermitian(ds * de))?;
    Ok((rho1, rho2, ev))
}

fn contraction(sampler: &mut StateSampler, cases: usize) -> corrwitness::Result<Vec<Check>> {
    let mut worst = f64::NEG_INFINITY;
    let mut violations = 0;
    for _ in 0..cases {
        let (rho1, rho2, ev) = shared_environment_pair(sampler)?;
        let d0 = trace_distance(&rho1.system_marginal(), &rho2.system_marginal())?;
        for _ in 0..TIMES_PER_CASE {
            let t = sampler.uniform(0.0, 20.0);
            let excess = trace_distance(&reduced_state_at(&rho1, &ev, t)?, &reduced_state_at(&rho2, &ev, t)?)? - d0;
            worst = worst.max(excess);
            violations += usize::from(excess > DYNAMICS_SLACK);
        }
    }
    let samples = cases * TIMES_PER_CASE;
    Ok(vec![
        Check::at_most(
            format!("max D(t) - D(0), product states with shared environment ({samples} samples)"),
            worst,
            DYNAMICS_SLACK,
        ),
        Check::count("samples with D(t) > D(0) + 1e-9", violations, samples),
    ])
}

fn witness_soundness(sampler: &mut StateSampler, cases: usize) -> corrwitness::Result<Vec<Check>> {
    let mut firings = 0;
    for _ in 0..cases {
        let (rho1, rho2, ev) = shared_environment_pair(sampler)?;
        let grid = TimeGrid::new(0.0, sampler.uniform(1.0, 20.0), 50)?;
        firings += usize::from(analyze(&rho1, &rho2, &ev, &grid, WITNESS_TOL)?.witness_fired);
    }

    let mut chain = f64::NEG_INFINITY;
    let mut growth = f64::NEG_INFINITY;
    for _ in 0..cases {
        let (ds, de) = random_dims(sampler);
        let ancilla = 1 + sampler.uniform(0.0, 4.0) as usize;
        let rho1 = sampler.correlated(ds, de, ancilla);
        let rho2 = sampler.correlated(ds, de, ancilla);
        let bounds = BoundSet::compute(&rho1, &rho2)?;
        chain = chain.max(bounds.i_bound - bounds.triangle_bound);
        let ev = Evolution::hamiltonian(sampler.hermitian(ds * de))?;
        let report = analyze(&rho1, &rho2, &ev, &TimeGrid::new(0.0, 10.0, 50)?, WITNESS_TOL)?;
        growth = growth.max(report.max_increase - bounds.i_bound);
    }

    Ok(vec![
        Check::count("witness firings on uncorrelated pairs with shared environment", firings, cases),
        Check::at_most(format!("max I - triangle bound ({cases} correlated pairs)"), chain, METRIC_SLACK),
        Check::at_most(format!("max growth - I ({cases} correlated pairs)"), growth, DYNAMICS_SLACK),
    ])
}

fn gate_report(pair: &ModelPair) -> corrwitness::Result<WitnessReport> {
    analyze(&pair.rho1, &pair.rho2, &pair.evolution, &TimeGrid::up_to(1.0)?, WITNESS_TOL)
}

/// The CNOT and spin-bath examples at `α = β = 1/√2`.
fn worked_examples() -> corrwitness::Result<Vec<Check>> {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let cnot = CnotScenario::new(h, h, false)?;
    let swap = CnotScenario::new(h, h, true)?;
    let mut checks = Vec::new();

    let r = gate_report(&cnot_pair(&cnot)?)?;
    checks.push(Check::near("entangled vs classical, CNOT: increase", r.max_increase, 0.5, EXAMPLE_SLACK));
    checks.push(Check::near("entangled vs classical, CNOT: I", r.bounds.i_bound, 0.5, EXAMPLE_SLACK));

    let r = gate_report(&cnot_product_pair(&cnot)?)?;
    checks.push(Check::near("entangled vs marginals, CNOT: increase", r.max_increase, 0.5, EXAMPLE_SLACK));
    checks.push(Check::near("entangled vs marginals, CNOT: I", r.bounds.i_bound, 0.75, EXAMPLE_SLACK));

    let r = gate_report(&cnot_classical_pair(&cnot)?)?;
    checks.push(Check::near("classical vs marginals, CNOT: increase", r.max_increase, 0.0, EXAMPLE_SLACK));
    checks.push(Check::near("classical vs marginals: correlation", r.bounds.corr1, 0.5, EXAMPLE_SLACK));
    let r = gate_report(&cnot_classical_pair(&swap)?)?;
    checks.push(Check::near("classical vs marginals, swap after CNOT: increase", r.max_increase, 0.5, EXAMPLE_SLACK));
    checks.push(Check::near("classical vs marginals, swap after CNOT: I", r.bounds.i_bound, 0.5, EXAMPLE_SLACK));

    let sc = SpinBathScenario::new(4, 1.0, h, h)?;
    let pair = spin_bath_pair(&sc)?;
    let r = analyze(&pair.rho1, &pair.rho2, &pair.evolution, &sc.default_grid(), WITNESS_TOL)?;
    checks.push(Check::near("spin bath N = 4: max increase over one period", r.max_increase, 0.5, DYNAMICS_SLACK));
    checks.push(Check::near("spin bath N = 4: I", r.bounds.i_bound, 0.5, DYNAMICS_SLACK));
    Ok(checks)
}
