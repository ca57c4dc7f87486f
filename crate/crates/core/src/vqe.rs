//! Variational loop over pUCCD angles.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::ansatz::{statevector_of, PuccdParameters};
use crate::error::{Error, Result};
use crate::estimator::{calibrate_shots, exact_expectation, sampled_energy, MeasurementPlan, MitigationMode, SamplingConfig, ShotAllocation};
use crate::optimize::{implicit_filtering, nelder_mead, Bounds, Evaluation, OptimizerOutcome, StopReason};
use crate::pauli::QubitHamiltonian;
use crate::simulator::ReadoutNoise;

pub const ANGLE_BOUNDS: Bounds = Bounds { lower: -PI, upper: PI };

/// Shots per setting in the pilot run that sizes a sampled objective.
pub const DEFAULT_PILOT_SHOTS: u64 = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Objective {
    Exact,
    Sampled { plan: MeasurementPlan, mitigation: MitigationMode, target_sigma: f64, noise: ReadoutNoise, pilot_shots: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Optimizer {
    ImplicitFiltering { initial_step: f64, min_step: f64 },
    NelderMead { initial_step: f64 },
}

impl Default for Optimizer {
    fn default() -> Self {
        Optimizer::ImplicitFiltering { initial_step: 0.05, min_step: 1e-5 }
    }
}

/// Simplex diameter at which Nelder-Mead stops.
pub const SIMPLEX_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqeConfig {
    pub objective: Objective,
    pub optimizer: Optimizer,
    pub max_evaluations: usize,
    pub trotter_steps: usize,
    pub seed: u64,
}

impl Default for VqeConfig {
    fn default() -> Self {
        Self { objective: Objective::Exact, optimizer: Optimizer::default(), max_evaluations: 5000, trotter_steps: 1, seed: 0 }
    }
}

impl VqeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_evaluations < 1 {
            return Err(Error::InvalidInput("max_evaluations must be at least 1".into()));
        }
        if self.trotter_steps < 1 {
            return Err(Error::InvalidInput("trotter_steps must be at least 1".into()));
        }
        if let Objective::Sampled { target_sigma, pilot_shots, .. } = self.objective {
            if target_sigma.is_nan() || target_sigma <= 0.0 {
                return Err(Error::InvalidInput(format!("target sigma must be positive, got {target_sigma}")));
            }
            if pilot_shots < 1 {
                return Err(Error::InvalidInput("pilot_shots must be at least 1".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub shots_cumulative: u64,
    pub evaluations: usize,
    pub energy_hartree: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VqeResult {
    /// Best objective value seen (a sampled estimate for sampled runs).
    pub best_energy: f64,
    /// Noise-free energy of `best_parameters`.
    pub exact_energy_at_best: f64,
    #[serde(serialize_with = "serialize_params")]
    pub best_parameters: PuccdParameters,
    pub trace: Vec<TracePoint>,
    pub converged: bool,
    pub stop_reason: StopReason,
    /// Shots spent sizing the sampled objective; already included in the
    /// trace's cumulative counts.
    pub calibration_shots: u64,
    pub shots_per_evaluation: u64,
}

fn serialize_params<S: serde::Serializer>(p: &PuccdParameters, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(p.len()))?;
    for ((i, j), v) in p.iter() {
        m.serialize_entry(&format!("({i},{j})"), &v)?;
    }
    m.end()
}

impl VqeResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result JSON serialization")
    }

    pub fn trace_csv(&self) -> String {
        let mut out = String::from("shots_cumulative,evaluations,energy_hartree\n");
        for t in &self.trace {
            writeln!(out, "{},{},{:.12}", t.shots_cumulative, t.evaluations, t.energy_hartree).unwrap();
        }
        out
    }
}

/// Energy of the pUCCD state for `params` under `h`, without sampling.
pub fn exact_energy(h: &QubitHamiltonian, params: &PuccdParameters, trotter_steps: usize) -> Result<f64> {
    exact_expectation(&statevector_of(params, trotter_steps)?, h)
}

/// Per-evaluation seed; splitmix64 of the run seed and evaluation index.
fn evaluation_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Optimizes the angles starting from `initial`.
///
/// A sampled objective is sized once, at the starting angles, by
/// [`calibrate_shots`]; every evaluation then uses that allocation with its
/// own seed. The pilot's shots open the cumulative shot count.
pub fn run_vqe(h: &QubitHamiltonian, initial: &PuccdParameters, config: &VqeConfig) -> Result<VqeResult> {
    config.validate()?;
    if initial.n_orbitals() != h.n_qubits() {
        return Err(Error::InvalidInput(format!("{} parameter orbitals for a {}-qubit hamiltonian", initial.n_orbitals(), h.n_qubits())));
    }
    let n = initial.n_orbitals();
    let n_e = initial.n_pairs();
    if initial.len() != (n - n_e) * n_e {
        return Err(Error::InvalidInput("parameter count differs from (N - n_e) n_e".into()));
    }
    let steps = config.trotter_steps;
    let params_of = |x: &[f64]| PuccdParameters::from_vec(n, n_e, x);

    let (allocation, sampling, calibration_shots) = match config.objective {
        Objective::Exact => (None, None, 0),
        Objective::Sampled { plan, mitigation, target_sigma, noise, pilot_shots } => {
            let sampling = SamplingConfig { plan, mitigation, noise, n_pairs: n_e };
            sampling.validate()?;
            let state = statevector_of(initial, steps)?;
            let alloc = calibrate_shots(&state, h, &sampling, target_sigma, pilot_shots, evaluation_seed(config.seed, u64::MAX))?;
            let n_settings = crate::estimator::measurement_settings(h, plan)?.len();
            let pilot_total = pilot_shots * n_settings as u64;
            log::info!("calibrated allocation {:?} ({} shots per evaluation)", alloc.0, alloc.total(n_settings));
            (Some((alloc, n_settings)), Some(sampling), pilot_total)
        }
    };
    let shots_per_evaluation = allocation.as_ref().map_or(0, |(a, k): &(ShotAllocation, usize)| a.total(*k));

    let objective = |x: &[f64], index: u64| -> Result<Evaluation> {
        let state = statevector_of(&params_of(x)?, steps)?;
        match (&allocation, &sampling) {
            (Some((alloc, _)), Some(cfg)) => {
                let est = sampled_energy(&state, h, cfg, alloc, evaluation_seed(config.seed, index))?;
                Ok(Evaluation { value: est.value, shots: est.total_shots() })
            }
            _ => Ok(exact_expectation(&state, h)?.into()),
        }
    };

    let x0 = initial.to_vec();
    let outcome: OptimizerOutcome = match config.optimizer {
        Optimizer::ImplicitFiltering { initial_step, min_step } => {
            implicit_filtering(&objective, &x0, initial_step, min_step, config.max_evaluations, ANGLE_BOUNDS)?
        }
        Optimizer::NelderMead { initial_step } => {
            nelder_mead(&objective, &x0, initial_step, SIMPLEX_TOLERANCE, config.max_evaluations, ANGLE_BOUNDS)?
        }
    };

    let mut shots = calibration_shots;
    let trace = outcome
        .history
        .iter()
        .enumerate()
        .map(|(k, e)| {
            shots += e.shots;
            TracePoint { shots_cumulative: shots, evaluations: k + 1, energy_hartree: e.value }
        })
        .collect();
    let best_parameters = params_of(&outcome.x)?;
    let exact_energy_at_best = exact_energy(h, &best_parameters, steps)?;
    Ok(VqeResult {
        best_energy: outcome.value,
        exact_energy_at_best,
        best_parameters,
        trace,
        converged: outcome.stop.converged(),
        stop_reason: outcome.stop,
        calibration_shots,
        shots_per_evaluation,
    })
}
