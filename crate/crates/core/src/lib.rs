//! Seniority-zero variational eigensolver: molecular integrals are mapped
//! to a hard-core boson qubit Hamiltonian, a pUCCD swap-network circuit is
//! simulated on a statevector, and its energy is estimated exactly or from
//! sampled bitstrings with post-selection readout mitigation.

pub mod ansatz;
pub mod error;
pub mod estimator;
pub mod experiments;
pub mod integrals;
pub mod optimize;
pub mod oracle;
pub mod pauli;
pub mod simulator;
pub mod vqe;

pub use ansatz::{build_puccd_circuit, statevector_of, Circuit, PuccdParameters};
pub use error::{Error, Result};
pub use estimator::{exact_expectation, sampled_energy, EnergyEstimate, MeasurementPlan, MitigationMode};
pub use integrals::{build_hcb_coefficients, load_integrals, IntegralSet, SeniorityZeroCoeffs};
pub use pauli::{group_terms, qubitize, QubitHamiltonian};
pub use simulator::{Gate, ReadoutNoise, StateVector};
pub use vqe::{run_vqe, VqeConfig, VqeResult};
