//! Paired-electron UCC doubles (pUCCD) circuit on a linear qubit chain.
//!
//! The register is prepared in the Hartree-Fock state (X on the first `n_e`
//! wires), then each Trotter step runs an odd-even transposition network of
//! Givens-SWAP tiles. The tiles move orbitals along the chain so that every
//! occupied orbital meets every virtual orbital on adjacent wires exactly
//! once per step; those meetings carry the excitation angle, all others are
//! plain SWAPs.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::simulator::{Gate, StateVector};

/// Recorded in run metadata.
pub const GATE_SCHEDULE: &str = "odd-even-transposition";

/// Excitation angles `t[(i, j)]` for virtual orbital `i` and occupied `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PuccdParameters {
    n_orbitals: usize,
    n_pairs: usize,
    values: BTreeMap<(usize, usize), f64>,
}

impl PuccdParameters {
    /// All-zero angles, i.e. the Hartree-Fock state.
    pub fn zeros(n_orbitals: usize, n_pairs: usize) -> Result<Self> {
        if n_pairs > n_orbitals {
            return Err(Error::InvalidInput(format!("{n_pairs} pairs exceed {n_orbitals} orbitals")));
        }
        let values = Self::keys_for(n_orbitals, n_pairs).map(|k| (k, 0.0)).collect();
        Ok(Self { n_orbitals, n_pairs, values })
    }

    fn keys_for(n_orbitals: usize, n_pairs: usize) -> impl Iterator<Item = (usize, usize)> {
        (n_pairs..n_orbitals).flat_map(move |i| (0..n_pairs).map(move |j| (i, j)))
    }

    pub fn from_map(n_orbitals: usize, n_pairs: usize, values: BTreeMap<(usize, usize), f64>) -> Result<Self> {
        let expected = Self::zeros(n_orbitals, n_pairs)?;
        if values.len() != expected.values.len() || values.keys().any(|k| !expected.values.contains_key(k)) {
            return Err(Error::InvalidInput(format!(
                "parameter keys do not cover the {} occupied-virtual pairs of N={n_orbitals}, n_e={n_pairs}",
                expected.values.len()
            )));
        }
        if values.values().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite excitation angle".into()));
        }
        Ok(Self { n_orbitals, n_pairs, values })
    }

    /// Values in canonical key order (virtual index major).
    pub fn from_vec(n_orbitals: usize, n_pairs: usize, values: &[f64]) -> Result<Self> {
        let keys: Vec<_> = Self::keys_for(n_orbitals, n_pairs).collect();
        if keys.len() != values.len() {
            return Err(Error::InvalidInput(format!("expected {} parameters, got {}", keys.len(), values.len())));
        }
        Self::from_map(n_orbitals, n_pairs, keys.into_iter().zip(values.iter().copied()).collect())
    }

    /// Reads `{"(i,j)": angle, ...}`.
    pub fn from_json(n_orbitals: usize, n_pairs: usize, text: &str) -> Result<Self> {
        let raw: BTreeMap<String, f64> = serde_json::from_str(text)?;
        let mut values = BTreeMap::new();
        for (key, v) in raw {
            let inner = key
                .trim()
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| Error::InvalidInput(format!("parameter key {key:?} is not of the form \"(i,j)\"")))?;
            let mut parts = inner.split(',').map(|s| s.trim().parse::<usize>());
            match (parts.next(), parts.next(), parts.next()) {
                (Some(Ok(i)), Some(Ok(j)), None) => {
                    values.insert((i, j), v);
                }
                _ => return Err(Error::InvalidInput(format!("parameter key {key:?} is not of the form \"(i,j)\""))),
            }
        }
        Self::from_map(n_orbitals, n_pairs, values)
    }

    pub fn to_json(&self) -> String {
        let map: BTreeMap<String, f64> = self.values.iter().map(|((i, j), v)| (format!("({i},{j})"), *v)).collect();
        serde_json::to_string_pretty(&map).expect("parameter JSON serialization")
    }

    pub fn n_orbitals(&self) -> usize {
        self.n_orbitals
    }

    pub fn n_pairs(&self) -> usize {
        self.n_pairs
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, virt: usize, occ: usize) -> Option<f64> {
        self.values.get(&(virt, occ)).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.values.iter().map(|(k, v)| (*k, *v))
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.values.values().copied().collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.values().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Where each logical orbital sits after the swap network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SwapNetworkLayout {
    /// Per layer, the disjoint adjacent wire pairs `(w, w+1)` that interact.
    pub layers: Vec<Vec<(usize, usize)>>,
    /// `wire_map[w]` is the logical orbital held by wire `w` at the end.
    pub wire_map: Vec<usize>,
}

impl SwapNetworkLayout {
    /// `N` layers of the odd-even transposition network; layer `l` pairs
    /// wires `(w, w+1)` with `w ≡ l (mod 2)`.
    pub fn odd_even(n: usize) -> Self {
        let layers = (0..n).map(|l| (l % 2..n.saturating_sub(1)).step_by(2).map(|w| (w, w + 1)).collect()).collect();
        let wire_map = (0..n).rev().collect();
        Self { layers, wire_map }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
    /// Logical orbital held by each wire after the last gate.
    pub wire_map: Vec<usize>,
    pub schedule: &'static str,
}

impl Circuit {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit JSON serialization")
    }

    pub fn parameterized_gate_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::GivensSwap { .. })).count()
    }
}

/// Builds the Hartree-Fock preparation followed by `trotter_steps` swap
/// network passes. A tile on wires holding virtual `i` and occupied `j` is
/// `GS(wire(i), wire(j), t[i,j] / trotter_steps)`, which realizes
/// `exp(θ (b†_i b_j − b†_j b_i))` before exchanging the wires.
pub fn build_puccd_circuit(params: &PuccdParameters, trotter_steps: usize) -> Result<Circuit> {
    if trotter_steps < 1 {
        return Err(Error::InvalidInput("at least one Trotter step is required".into()));
    }
    let n = params.n_orbitals;
    let n_e = params.n_pairs;
    let mut gates: Vec<Gate> = (0..n_e).map(Gate::X).collect();
    let mut wire_map: Vec<usize> = (0..n).collect();
    let layout = SwapNetworkLayout::odd_even(n);
    let scale = 1.0 / trotter_steps as f64;
    for _ in 0..trotter_steps {
        for layer in &layout.layers {
            for &(w, v) in layer {
                let (a, b) = (wire_map[w], wire_map[v]);
                let gate = match (a < n_e, b < n_e) {
                    (true, false) => Gate::GivensSwap { p: v, q: w, theta: params.values[&(b, a)] * scale },
                    (false, true) => Gate::GivensSwap { p: w, q: v, theta: params.values[&(a, b)] * scale },
                    _ => Gate::Swap { p: w, q: v },
                };
                gates.push(gate);
                wire_map.swap(w, v);
            }
        }
    }
    Ok(Circuit { n_qubits: n, gates, wire_map, schedule: GATE_SCHEDULE })
}

/// Runs the circuit and relabels the result so that qubit `k` is logical
/// orbital `k`.
pub fn statevector_of(params: &PuccdParameters, trotter_steps: usize) -> Result<StateVector> {
    let circuit = build_puccd_circuit(params, trotter_steps)?;
    let mut state = StateVector::zero(circuit.n_qubits);
    state.apply_all(&circuit.gates)?;
    Ok(state.permute_qubits(&circuit.wire_map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn parameter_count_is_occupied_times_virtual() {
        assert_eq!(PuccdParameters::zeros(6, 2).unwrap().len(), 8);
        assert_eq!(PuccdParameters::zeros(11, 2).unwrap().len(), 18);
        assert_eq!(PuccdParameters::zeros(3, 0).unwrap().len(), 0);
    }

    #[test]
    fn six_orbitals_have_eight_gs_tiles_per_step() {
        let p = PuccdParameters::zeros(6, 2).unwrap();
        assert_eq!(build_puccd_circuit(&p, 1).unwrap().parameterized_gate_count(), 8);
        assert_eq!(build_puccd_circuit(&p, 3).unwrap().parameterized_gate_count(), 24);
    }

    #[test]
    fn four_orbital_network_meets_every_occupied_virtual_pair_once() {
        let layout = SwapNetworkLayout::odd_even(4);
        assert_eq!(layout.layers, vec![vec![(0, 1), (2, 3)], vec![(1, 2)], vec![(0, 1), (2, 3)], vec![(1, 2)]]);
        let mut labels: Vec<usize> = (0..4).collect();
        let mut meetings = Vec::new();
        for layer in &layout.layers {
            for &(w, v) in layer {
                let (a, b) = (labels[w].min(labels[v]), labels[w].max(labels[v]));
                if a < 2 && b >= 2 {
                    meetings.push((a, b));
                }
                labels.swap(w, v);
            }
        }
        meetings.sort();
        assert_eq!(meetings, vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
    }

    #[test]
    fn network_audit_up_to_twelve_wires() {
        for n in 1..=12 {
            let layout = SwapNetworkLayout::odd_even(n);
            assert_eq!(layout.layers.len(), n);
            let mut labels: Vec<usize> = (0..n).collect();
            let mut met = HashSet::new();
            for layer in &layout.layers {
                let mut used = HashSet::new();
                for &(w, v) in layer {
                    assert_eq!(v, w + 1);
                    assert!(used.insert(w) && used.insert(v));
                    assert!(met.insert((labels[w].min(labels[v]), labels[w].max(labels[v]))));
                    labels.swap(w, v);
                }
            }
            assert_eq!(met.len(), n * (n - 1) / 2);
            assert_eq!(labels, layout.wire_map);
            assert_eq!(labels, (0..n).rev().collect::<Vec<_>>());
        }
    }

    #[test]
    fn zero_angles_give_hartree_fock() {
        let p = PuccdParameters::zeros(2, 1).unwrap();
        let s = statevector_of(&p, 1).unwrap();
        // logical "10": orbital 0 occupied
        assert!((s.amplitudes()[0b01].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn no_pairs_stays_in_vacuum() {
        let p = PuccdParameters::zeros(3, 0).unwrap();
        let s = statevector_of(&p, 2).unwrap();
        assert_eq!(s.amplitudes()[0].re, 1.0);
    }

    #[test]
    fn quarter_turn_transfers_the_pair() {
        let p = PuccdParameters::from_vec(2, 1, &[FRAC_PI_2]).unwrap();
        let s = statevector_of(&p, 1).unwrap();
        assert!((s.amplitudes()[0b10].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn multi_step_circuits_undo_the_reversal() {
        let p = PuccdParameters::zeros(5, 2).unwrap();
        assert_eq!(build_puccd_circuit(&p, 2).unwrap().wire_map, vec![0, 1, 2, 3, 4]);
        assert_eq!(build_puccd_circuit(&p, 1).unwrap().wire_map, vec![4, 3, 2, 1, 0]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = PuccdParameters::zeros(4, 2).unwrap();
        assert!(build_puccd_circuit(&p, 0).is_err());
        assert!(PuccdParameters::from_vec(4, 2, &[0.0; 3]).is_err());
        assert!(PuccdParameters::from_json(4, 2, r#"{"(2,0)": 0.1}"#).is_err());
        assert!(PuccdParameters::from_json(4, 2, r#"{"2,0": 0.1}"#).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = PuccdParameters::from_vec(4, 2, &[0.1, -0.2, 0.3, 0.05]).unwrap();
        assert_eq!(PuccdParameters::from_json(4, 2, &p.to_json()).unwrap(), p);
        assert_eq!(p.get(2, 1), Some(-0.2));
    }
}
