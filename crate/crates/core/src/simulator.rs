//! Dense statevector simulation with seeded Z-basis sampling and a
//! symmetric per-bit readout-error channel.
//!
//! Basis index bit `k` is qubit `k`. Bitstrings are printed with qubit 0 as
//! the leftmost character, matching Pauli term strings.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        assert!(n_qubits < usize::BITS as usize - 1, "too many qubits for a dense state");
        let mut amplitudes = vec![ZERO; 1 << n_qubits];
        amplitudes[index] = ONE;
        Self { n_qubits, amplitudes }
    }

    /// Wraps amplitudes; the length must be `2^n_qubits`.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::InvalidInput(format!("{} amplitudes do not describe {n_qubits} qubits", amplitudes.len())));
        }
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// Relabels qubits: qubit `k` of `self` becomes qubit `map[k]` of the result.
    pub fn permute_qubits(&self, map: &[usize]) -> StateVector {
        let mut out = vec![ZERO; self.amplitudes.len()];
        for (b, amp) in self.amplitudes.iter().enumerate() {
            let mut target = 0;
            for (k, &dest) in map.iter().enumerate() {
                if b >> k & 1 == 1 {
                    target |= 1 << dest;
                }
            }
            out[target] = *amp;
        }
        StateVector { n_qubits: self.n_qubits, amplitudes: out }
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        match *gate {
            Gate::X(q) => {
                let bit = 1 << q;
                for b in 0..self.amplitudes.len() {
                    if b & bit == 0 {
                        self.amplitudes.swap(b, b | bit);
                    }
                }
            }
            Gate::BasisX(q) | Gate::BasisY(q) => {
                let m = gate.single_qubit_matrix().expect("single-qubit gate");
                let bit = 1 << q;
                for b in 0..self.amplitudes.len() {
                    if b & bit == 0 {
                        let a0 = self.amplitudes[b];
                        let a1 = self.amplitudes[b | bit];
                        self.amplitudes[b] = m[0][0] * a0 + m[0][1] * a1;
                        self.amplitudes[b | bit] = m[1][0] * a0 + m[1][1] * a1;
                    }
                }
            }
            Gate::Givens { p, q, theta } | Gate::PairRot { p, q, theta } => self.rotate_pair(p, q, theta),
            Gate::Swap { p, q } => self.swap(p, q),
            Gate::GivensSwap { p, q, theta } => {
                self.rotate_pair(p, q, theta);
                self.swap(p, q);
            }
        }
        Ok(())
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a Gate>) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// Givens rotation on span{|01⟩, |10⟩} of qubits `(p, q)`, where `|01⟩`
    /// has `q` set: `|01⟩ → cos θ|01⟩ + sin θ|10⟩`.
    fn rotate_pair(&mut self, p: usize, q: usize, theta: f64) {
        let (s, c) = theta.sin_cos();
        let bp = 1 << p;
        let bq = 1 << q;
        for b in 0..self.amplitudes.len() {
            if b & bp == 0 && b & bq != 0 {
                let i01 = b;
                let i10 = b ^ bq ^ bp;
                let a01 = self.amplitudes[i01];
                let a10 = self.amplitudes[i10];
                self.amplitudes[i01] = a01 * c - a10 * s;
                self.amplitudes[i10] = a01 * s + a10 * c;
            }
        }
    }

    fn swap(&mut self, p: usize, q: usize) {
        let bp = 1 << p;
        let bq = 1 << q;
        for b in 0..self.amplitudes.len() {
            if b & bp == 0 && b & bq != 0 {
                self.amplitudes.swap(b, b ^ bq ^ bp);
            }
        }
    }
}

/// Circuit elements. Two-qubit gates act on `(p, q)` with the 4×4 matrix
/// basis `|00⟩, |01⟩, |10⟩, |11⟩`, the first character being qubit `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Gate {
    X(usize),
    Givens {
        p: usize,
        q: usize,
        theta: f64,
    },
    Swap {
        p: usize,
        q: usize,
    },
    /// Givens rotation followed by a full swap.
    #[serde(rename = "GS")]
    GivensSwap {
        p: usize,
        q: usize,
        theta: f64,
    },
    /// `Ry(−π/2)`: maps the X eigenbasis onto the Z eigenbasis.
    BasisX(usize),
    /// `Rx(π/2)`: maps the Y eigenbasis onto the Z eigenbasis.
    BasisY(usize),
    /// Givens rotation used to diagonalize `X_pX_q + Y_pY_q` before readout.
    PairRot {
        p: usize,
        q: usize,
        theta: f64,
    },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::X(q) | Gate::BasisX(q) | Gate::BasisY(q) => vec![q],
            Gate::Givens { p, q, .. } | Gate::Swap { p, q } | Gate::GivensSwap { p, q, .. } | Gate::PairRot { p, q, .. } => {
                vec![p, q]
            }
        }
    }

    fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Givens { theta, .. } | Gate::GivensSwap { theta, .. } | Gate::PairRot { theta, .. } => Some(theta),
            _ => None,
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        if let Some(&bad) = qs.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::IndexOutOfRange(format!("{self:?} addresses qubit {bad} of {n_qubits}")));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::InvalidInput(format!("{self:?} repeats a qubit")));
        }
        if self.angle().is_some_and(|t| !t.is_finite()) {
            return Err(Error::InvalidInput(format!("{self:?} has a non-finite angle")));
        }
        Ok(())
    }

    fn single_qubit_matrix(&self) -> Option<[[Complex64; 2]; 2]> {
        let h = FRAC_1_SQRT_2;
        match self {
            Gate::X(_) => Some([[ZERO, ONE], [ONE, ZERO]]),
            Gate::BasisX(_) => Some([[Complex64::new(h, 0.0), Complex64::new(h, 0.0)], [Complex64::new(-h, 0.0), Complex64::new(h, 0.0)]]),
            Gate::BasisY(_) => Some([[Complex64::new(h, 0.0), Complex64::new(0.0, -h)], [Complex64::new(0.0, -h), Complex64::new(h, 0.0)]]),
            _ => None,
        }
    }

    /// The gate's unitary on its own qubits: 2×2 for single-qubit gates,
    /// 4×4 in the `|pq⟩` basis for two-qubit gates.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        if let Some(m) = self.single_qubit_matrix() {
            return DMatrix::from_fn(2, 2, |r, c| m[r][c]);
        }
        let givens = |theta: f64| {
            let (s, c) = theta.sin_cos();
            let mut m = DMatrix::<Complex64>::identity(4, 4);
            m[(1, 1)] = c.into();
            m[(1, 2)] = (-s).into();
            m[(2, 1)] = s.into();
            m[(2, 2)] = c.into();
            m
        };
        let mut swap = DMatrix::<Complex64>::zeros(4, 4);
        for (r, c) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            swap[(r, c)] = ONE;
        }
        match *self {
            Gate::Givens { theta, .. } | Gate::PairRot { theta, .. } => givens(theta),
            Gate::Swap { .. } => swap,
            Gate::GivensSwap { theta, .. } => swap * givens(theta),
            _ => unreachable!("single-qubit gates handled above"),
        }
    }
}

/// Symmetric, independent bit-flip applied to every measured bit.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ReadoutNoise {
    flip_probability: f64,
}

impl ReadoutNoise {
    pub fn new(flip_probability: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&flip_probability) {
            return Err(Error::InvalidInput(format!("flip probability {flip_probability} outside [0, 1]")));
        }
        Ok(Self { flip_probability })
    }

    pub fn none() -> Self {
        Self::default()
    }

    pub fn flip_probability(&self) -> f64 {
        self.flip_probability
    }
}

/// Measurement outcomes keyed by basis index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Histogram {
    n_qubits: usize,
    counts: BTreeMap<usize, u64>,
}

impl Histogram {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, counts: BTreeMap::new() }
    }

    pub fn record(&mut self, outcome: usize, count: u64) {
        *self.counts.entry(outcome).or_insert(0) += count;
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().map(|(k, v)| (*k, *v))
    }

    pub fn count(&self, outcome: usize) -> u64 {
        self.counts.get(&outcome).copied().unwrap_or(0)
    }

    /// Parses bitstring-keyed counts such as `{"110000": 90}`.
    pub fn from_bitstrings<'a>(counts: impl IntoIterator<Item = (&'a str, u64)>) -> Result<Self> {
        let mut hist: Option<Histogram> = None;
        for (bits, count) in counts {
            let h = hist.get_or_insert_with(|| Histogram::new(bits.len()));
            if bits.len() != h.n_qubits {
                return Err(Error::InvalidInput(format!("bitstring {bits:?} has the wrong length")));
            }
            h.record(parse_bitstring(bits)?, count);
        }
        hist.ok_or_else(|| Error::InvalidInput("empty histogram".into()))
    }

    pub fn to_bitstrings(&self) -> BTreeMap<String, u64> {
        self.counts.iter().map(|(k, v)| (bitstring(*k, self.n_qubits), *v)).collect()
    }
}

pub fn bitstring(index: usize, n_qubits: usize) -> String {
    (0..n_qubits).map(|k| if index >> k & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn parse_bitstring(bits: &str) -> Result<usize> {
    bits.chars().enumerate().try_fold(0usize, |acc, (k, c)| match c {
        '0' => Ok(acc),
        '1' => Ok(acc | 1 << k),
        _ => Err(Error::InvalidInput(format!("bad bitstring {bits:?}"))),
    })
}

/// Applies `rotations` to a copy of `state`, samples `shots` outcomes by
/// inverse CDF and flips each bit independently with the noise probability.
/// Identical inputs and seed give identical histograms.
pub fn measure_counts(state: &StateVector, rotations: &[Gate], shots: u64, noise: ReadoutNoise, seed: u64) -> Result<Histogram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    measure_counts_with(state, rotations, shots, noise, &mut rng)
}

pub fn measure_counts_with<R: Rng>(state: &StateVector, rotations: &[Gate], shots: u64, noise: ReadoutNoise, rng: &mut R) -> Result<Histogram> {
    if shots == 0 {
        return Err(Error::InvalidInput("at least one shot is required".into()));
    }
    let mut rotated = state.clone();
    rotated.apply_all(rotations)?;
    let mut cdf = Vec::with_capacity(rotated.amplitudes.len());
    let mut acc = 0.0;
    for a in &rotated.amplitudes {
        acc += a.norm_sqr();
        cdf.push(acc);
    }
    let total = acc;
    let last_nonzero = cdf.iter().rposition(|&c| c < total).map_or(0, |i| i + 1);
    let n = state.n_qubits;
    let p = noise.flip_probability;
    let mut hist = Histogram::new(n);
    for _ in 0..shots {
        let u: f64 = rng.random::<f64>() * total;
        let mut outcome = cdf.partition_point(|&c| c <= u).min(last_nonzero);
        if p > 0.0 {
            for k in 0..n {
                if rng.random_bool(p) {
                    outcome ^= 1 << k;
                }
            }
        }
        hist.record(outcome, 1);
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn givens_quarter_turn_moves_the_excitation() {
        // |01⟩: qubit 1 set.
        let mut s = StateVector::basis(2, 0b10);
        s.apply(&Gate::Givens { p: 0, q: 1, theta: FRAC_PI_2 }).unwrap();
        assert!(close(s.amplitudes()[0b01], ONE));
        assert!(s.amplitudes()[0b10].norm() < 1e-15);
    }

    #[test]
    fn gs_at_zero_is_swap() {
        let gs = Gate::GivensSwap { p: 0, q: 1, theta: 0.0 }.matrix();
        let swap = Gate::Swap { p: 0, q: 1 }.matrix();
        assert_eq!(gs, swap);
    }

    #[test]
    fn x_flips_qubit_zero() {
        let mut s = StateVector::zero(3);
        s.apply(&Gate::X(0)).unwrap();
        assert_eq!(s.amplitudes()[1], ONE);
        assert_eq!(bitstring(1, 3), "100");
    }

    #[test]
    fn out_of_range_and_degenerate_gates() {
        let mut s = StateVector::zero(2);
        assert!(matches!(s.apply(&Gate::X(2)), Err(Error::IndexOutOfRange(_))));
        assert!(s.apply(&Gate::Swap { p: 1, q: 1 }).is_err());
        assert!(s.apply(&Gate::Givens { p: 0, q: 1, theta: f64::NAN }).is_err());
    }

    /// Embeds a gate matrix into the full register by brute force.
    fn embedded(gate: &Gate, n: usize) -> DMatrix<Complex64> {
        let m = gate.matrix();
        let qs = gate.qubits();
        let dim = 1 << n;
        let local = |b: usize| qs.iter().fold(0, |acc, &q| acc << 1 | (b >> q & 1));
        DMatrix::from_fn(dim, dim, |r, c| {
            let rest_mask = !qs.iter().fold(0, |acc, &q| acc | 1 << q);
            if r & rest_mask != c & rest_mask {
                ZERO
            } else {
                m[(local(r), local(c))]
            }
        })
    }

    #[test]
    fn in_place_application_matches_matrices() {
        let n = 3;
        let gates = [
            Gate::X(1),
            Gate::BasisX(2),
            Gate::BasisY(0),
            Gate::Givens { p: 2, q: 0, theta: 0.3 },
            Gate::PairRot { p: 0, q: 1, theta: -0.7 },
            Gate::Swap { p: 0, q: 2 },
            Gate::GivensSwap { p: 1, q: 2, theta: 1.1 },
        ];
        let amps: Vec<Complex64> = (0..8).map(|k| Complex64::new(0.1 * k as f64 + 0.05, 0.03 * (k * k) as f64)).collect();
        for g in gates {
            let mut s = StateVector::from_amplitudes(n, amps.clone()).unwrap();
            s.apply(&g).unwrap();
            let expected = embedded(&g, n) * nalgebra::DVector::from_vec(amps.clone());
            for (a, b) in s.amplitudes().iter().zip(expected.iter()) {
                assert!(close(*a, *b), "{g:?}");
            }
        }
    }

    #[test]
    fn basis_rotations_diagonalize_x_and_y() {
        let x = DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let i = Complex64::new(0.0, 1.0);
        let y = DMatrix::from_row_slice(2, 2, &[ZERO, -i, i, ZERO]);
        let z = DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]);
        for (gate, pauli) in [(Gate::BasisX(0), x), (Gate::BasisY(0), y)] {
            let u = gate.matrix();
            let back = u.adjoint() * &z * &u;
            assert!((back - pauli).iter().all(|d| d.norm() < 1e-12));
        }
    }

    #[test]
    fn deterministic_basis_state_readout() {
        let s = StateVector::basis(6, 0b11);
        let h = measure_counts(&s, &[], 500, ReadoutNoise::none(), 1).unwrap();
        assert_eq!(h.to_bitstrings().into_iter().collect::<Vec<_>>(), vec![("110000".to_string(), 500)]);
    }

    #[test]
    fn certain_flip() {
        let s = StateVector::basis(1, 1);
        let h = measure_counts(&s, &[], 100, ReadoutNoise::new(1.0).unwrap(), 3).unwrap();
        assert_eq!(h.count(0), 100);
    }

    #[test]
    fn fair_coin_statistics() {
        let amp = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let s = StateVector::from_amplitudes(1, vec![amp, amp]).unwrap();
        let shots = 100_000;
        let h = measure_counts(&s, &[], shots, ReadoutNoise::none(), 11).unwrap();
        let frac = h.count(1) as f64 / shots as f64;
        let sigma = (0.25 / shots as f64).sqrt();
        assert!((frac - 0.5).abs() < 5.0 * sigma, "fraction {frac}");
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let s = StateVector::from_amplitudes(2, vec![Complex64::new(0.5, 0.0); 4]).unwrap();
        let noise = ReadoutNoise::new(0.1).unwrap();
        let a = measure_counts(&s, &[Gate::BasisX(1)], 1000, noise, 42).unwrap();
        let b = measure_counts(&s, &[Gate::BasisX(1)], 1000, noise, 42).unwrap();
        assert_eq!(a, b);
        assert!(measure_counts(&s, &[], 0, noise, 42).is_err());
        assert!(ReadoutNoise::new(1.5).is_err());
    }

    #[test]
    fn bitstring_round_trip() {
        let h = Histogram::from_bitstrings([("110000", 90), ("100000", 10)]).unwrap();
        assert_eq!(h.count(0b11), 90);
        assert_eq!(h.count(0b1), 10);
        assert_eq!(h.to_bitstrings()["110000"], 90);
    }
}
