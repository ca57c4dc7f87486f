//! Energy estimation: exact contraction against the statevector, or
//! Hamiltonian averaging over sampled bitstrings with optional
//! particle-number post-selection.
//!
//! A measurement setting is a list of pre-readout rotations plus a list of
//! parity observables `w · (−1)^{popcount(bits & mask)}` read from the same
//! bitstrings. Both plans reduce to this form:
//!
//! * `Tpb3`: Z/ZZ terms in the computational basis, all `X_pX_q` after
//!   single-qubit X-basis rotations, all `Y_pY_q` after Y-basis rotations.
//! * `Paired`: Z/ZZ terms plus one setting per round of the pair schedule;
//!   each pair is rotated by `𝒰_{p,q}(π/4)†`, which turns `X_pX_q + Y_pY_q`
//!   into `Z_p − Z_q` and keeps the register in the particle basis.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{group_terms, paired_measurement_schedule, BasisLabel, PauliOps, QubitHamiltonian, QubitRotation, TermKind};
use crate::simulator::{measure_counts_with, Gate, Histogram, ReadoutNoise, StateVector};

/// Floor applied to every group by [`calibrate_shots`].
pub const MIN_SHOTS_PER_GROUP: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasurementPlan {
    Tpb3,
    Paired,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MitigationMode {
    None,
    DiagOnly,
    AllTerms,
}

impl MitigationMode {
    pub fn label(&self) -> &'static str {
        match self {
            MitigationMode::None => "none",
            MitigationMode::DiagOnly => "diag",
            MitigationMode::AllTerms => "all",
        }
    }
}

/// One readout configuration and the observables evaluated from it.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSetting {
    pub label: String,
    pub rotations: Vec<Gate>,
    /// True when the readout basis is the particle (occupation) basis, so
    /// Hamming-weight post-selection is meaningful.
    pub particle_basis: bool,
    /// True for the computational-basis Z/ZZ setting.
    pub diagonal: bool,
    /// `(mask, weight)` parity observables.
    pub observables: Vec<(usize, f64)>,
}

impl MeasurementSetting {
    fn value(&self, bits: usize) -> f64 {
        self.observables.iter().map(|&(mask, w)| if (bits & mask).count_ones().is_multiple_of(2) { w } else { -w }).sum()
    }
}

fn mask_of(qubits: &[usize]) -> usize {
    qubits.iter().fold(0, |m, q| m | 1 << q)
}

/// Builds the measurement settings of `plan` for `h`. Constant energy is
/// not part of any setting.
pub fn measurement_settings(h: &QubitHamiltonian, plan: MeasurementPlan) -> Result<Vec<MeasurementSetting>> {
    let groups = group_terms(h)?;
    let mut settings = Vec::new();
    for g in &groups {
        if plan == MeasurementPlan::Paired && g.basis != BasisLabel::Diagonal {
            continue;
        }
        let rotations = g
            .rotations
            .iter()
            .enumerate()
            .filter_map(|(q, r)| match r {
                QubitRotation::None => None,
                QubitRotation::XBasis => Some(Gate::BasisX(q)),
                QubitRotation::YBasis => Some(Gate::BasisY(q)),
            })
            .collect();
        let observables = g
            .members
            .iter()
            .map(|ops| {
                let qubits: Vec<usize> = ops.support().into_iter().map(|(q, _)| q).collect();
                (mask_of(&qubits), h.weight_of(ops))
            })
            .collect();
        settings.push(MeasurementSetting {
            label: g.basis.to_string(),
            rotations,
            particle_basis: g.basis == BasisLabel::Diagonal,
            diagonal: g.basis == BasisLabel::Diagonal,
            observables,
        });
    }
    if plan == MeasurementPlan::Paired {
        settings.extend(paired_settings(h)?);
    }
    Ok(settings)
}

fn paired_settings(h: &QubitHamiltonian) -> Result<Vec<MeasurementSetting>> {
    let n = h.n_qubits();
    let mut hop: BTreeMap<(usize, usize), (f64, f64)> = BTreeMap::new();
    for t in h.terms() {
        match t.kind()? {
            TermKind::XX(p, q) => hop.entry((p, q)).or_default().0 = t.weight,
            TermKind::YY(p, q) => hop.entry((p, q)).or_default().1 = t.weight,
            _ => {}
        }
    }
    if hop.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(((p, q), _)) = hop.iter().find(|(_, (x, y))| x != y) {
        return Err(Error::InvalidCombination(format!("paired plan needs equal XX and YY weights, pair ({p},{q}) differs")));
    }
    let mut settings = Vec::new();
    for (r, round) in paired_measurement_schedule(n)?.into_iter().enumerate() {
        let mut rotations = Vec::new();
        let mut observables = Vec::new();
        for (p, q) in round {
            let Some(&(w, _)) = hop.get(&(p.min(q), p.max(q))) else { continue };
            rotations.push(Gate::PairRot { p, q, theta: -FRAC_PI_4 });
            observables.push((1 << p, w));
            observables.push((1 << q, -w));
        }
        if !observables.is_empty() {
            settings.push(MeasurementSetting { label: format!("PAIRED[{r}]"), rotations, particle_basis: true, diagonal: false, observables });
        }
    }
    Ok(settings)
}

/// Per-setting statistics of a sampled estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupEstimate {
    pub label: String,
    pub shots: u64,
    pub retained: u64,
    pub mean: f64,
    /// Sample variance of the per-shot setting energy.
    pub variance: f64,
}

impl GroupEstimate {
    pub fn retention(&self) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.retained as f64 / self.shots as f64
        }
    }

    fn variance_of_mean(&self) -> f64 {
        self.variance / self.retained as f64
    }
}

/// Averages a setting's observables over a histogram. With `post_select`
/// only bitstrings of that Hamming weight are kept and the mean is taken
/// over the retained subset.
pub fn evaluate_setting(setting: &MeasurementSetting, hist: &Histogram, post_select: Option<usize>) -> Result<GroupEstimate> {
    let mut shots = 0u64;
    let mut retained = 0u64;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for (bits, count) in hist.iter() {
        shots += count;
        if post_select.is_some_and(|k| bits.count_ones() as usize != k) {
            continue;
        }
        retained += count;
        let v = setting.value(bits);
        sum += v * count as f64;
        sum_sq += v * v * count as f64;
    }
    if retained == 0 {
        return Err(Error::ZeroRetention { group: setting.label.clone() });
    }
    let n = retained as f64;
    let mean = sum / n;
    let variance = if retained > 1 { ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
    Ok(GroupEstimate { label: setting.label.clone(), shots, retained, mean, variance })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyEstimate {
    pub value: f64,
    pub std_error: f64,
    pub groups: Vec<GroupEstimate>,
}

impl EnergyEstimate {
    pub fn total_shots(&self) -> u64 {
        self.groups.iter().map(|g| g.shots).sum()
    }

    pub fn min_retention(&self) -> f64 {
        self.groups.iter().map(GroupEstimate::retention).fold(1.0, f64::min)
    }

    /// `{value, std_error, shots, retention_per_group}`.
    pub fn to_json_value(&self) -> serde_json::Value {
        let shots: BTreeMap<&str, u64> = self.groups.iter().map(|g| (g.label.as_str(), g.shots)).collect();
        let retention: BTreeMap<&str, f64> = self.groups.iter().map(|g| (g.label.as_str(), g.retention())).collect();
        serde_json::json!({
            "value": self.value,
            "std_error": self.std_error,
            "shots": shots,
            "retention_per_group": retention,
        })
    }
}

/// How the register is read out: plan, readout noise and post-selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    pub plan: MeasurementPlan,
    pub mitigation: MitigationMode,
    pub noise: ReadoutNoise,
    /// Expected Hamming weight of every particle-basis outcome.
    pub n_pairs: usize,
}

impl SamplingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.mitigation == MitigationMode::AllTerms && self.plan == MeasurementPlan::Tpb3 {
            return Err(Error::InvalidCombination(
                "post-selection on all terms needs the paired plan; X/Y-basis settings are not in the particle basis".into(),
            ));
        }
        Ok(())
    }

    fn post_select(&self, setting: &MeasurementSetting) -> Option<usize> {
        let keep = match self.mitigation {
            MitigationMode::None => false,
            MitigationMode::DiagOnly => setting.diagonal,
            MitigationMode::AllTerms => setting.particle_basis,
        };
        keep.then_some(self.n_pairs)
    }
}

/// Generator for setting `index` of an estimate seeded with `seed`.
fn setting_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Shot counts per setting; a single entry is used for every setting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotAllocation(pub Vec<u64>);

impl ShotAllocation {
    pub fn uniform(shots: u64) -> Self {
        Self(vec![shots])
    }

    pub fn for_setting(&self, index: usize) -> u64 {
        if self.0.len() == 1 {
            self.0[0]
        } else {
            self.0[index]
        }
    }

    pub fn total(&self, n_settings: usize) -> u64 {
        (0..n_settings).map(|i| self.for_setting(i)).sum()
    }
}

/// Hamiltonian averaging over sampled bitstrings. Settings are sampled
/// independently (and concurrently), each from a generator derived from
/// `(seed, setting index)`.
pub fn sampled_energy(
    state: &StateVector,
    h: &QubitHamiltonian,
    config: &SamplingConfig,
    shots: &ShotAllocation,
    seed: u64,
) -> Result<EnergyEstimate> {
    config.validate()?;
    if state.n_qubits() != h.n_qubits() {
        return Err(Error::InvalidInput(format!("state has {} qubits, hamiltonian {}", state.n_qubits(), h.n_qubits())));
    }
    let settings = measurement_settings(h, config.plan)?;
    if shots.0.len() != 1 && shots.0.len() != settings.len() {
        return Err(Error::InvalidInput(format!("{} shot counts for {} settings", shots.0.len(), settings.len())));
    }
    if (0..settings.len()).any(|i| shots.for_setting(i) == 0) {
        return Err(Error::InvalidInput("every setting needs at least one shot".into()));
    }
    let groups = settings
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let mut rng = setting_rng(seed, i);
            let hist = measure_counts_with(state, &s.rotations, shots.for_setting(i), config.noise, &mut rng)?;
            evaluate_setting(s, &hist, config.post_select(s))
        })
        .collect::<Result<Vec<_>>>()?;
    let value = h.constant + groups.iter().map(|g| g.mean).sum::<f64>();
    let std_error = groups.iter().map(GroupEstimate::variance_of_mean).sum::<f64>().sqrt();
    Ok(EnergyEstimate { value, std_error, groups })
}

/// `⟨ψ|H|ψ⟩` evaluated term by term.
pub fn exact_expectation(state: &StateVector, h: &QubitHamiltonian) -> Result<f64> {
    if state.n_qubits() != h.n_qubits() {
        return Err(Error::InvalidInput(format!("state has {} qubits, hamiltonian {}", state.n_qubits(), h.n_qubits())));
    }
    let amps = state.amplitudes();
    let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let mut total = num_complex::Complex64::new(h.constant * norm_sqr, 0.0);
    for t in h.terms() {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (b, a) in amps.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let (row, phase) = t.ops.act(b);
            acc += amps[row].conj() * phase * a;
        }
        total += acc * t.weight;
    }
    debug_assert!(total.im.abs() < 1e-10 * (1.0 + total.re.abs()), "non-real expectation {total}");
    Ok(total.re)
}

/// Exact expectation of a setting's observables, read from the rotated
/// state's probabilities instead of samples.
pub fn exact_setting_expectation(state: &StateVector, setting: &MeasurementSetting) -> Result<f64> {
    let mut rotated = state.clone();
    rotated.apply_all(&setting.rotations)?;
    Ok(rotated.probabilities().iter().enumerate().map(|(b, p)| p * setting.value(b)).sum())
}

/// How [`calibrate_shots_with`] spreads shots over settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AllocationRule {
    /// Proportional to each setting's per-shot standard deviation.
    Neyman,
    /// The same count for every setting.
    Uniform,
}

/// Chooses per-setting shot counts so that the predicted standard error
/// of the energy is at most `target_sigma`.
///
/// A pilot estimate with `pilot_shots` per setting gives each setting's
/// per-shot standard deviation `σ_g`; shots are then allocated in
/// proportion to `σ_g` (Neyman allocation), inflated by the pilot's
/// post-selection loss, with a floor of [`MIN_SHOTS_PER_GROUP`].
pub fn calibrate_shots(
    state: &StateVector,
    h: &QubitHamiltonian,
    config: &SamplingConfig,
    target_sigma: f64,
    pilot_shots: u64,
    seed: u64,
) -> Result<ShotAllocation> {
    calibrate_shots_with(state, h, config, target_sigma, pilot_shots, seed, AllocationRule::Neyman)
}

pub fn calibrate_shots_with(
    state: &StateVector,
    h: &QubitHamiltonian,
    config: &SamplingConfig,
    target_sigma: f64,
    pilot_shots: u64,
    seed: u64,
    rule: AllocationRule,
) -> Result<ShotAllocation> {
    if target_sigma.is_nan() || target_sigma <= 0.0 {
        return Err(Error::InvalidInput(format!("target sigma must be positive, got {target_sigma}")));
    }
    let pilot = sampled_energy(state, h, config, &ShotAllocation::uniform(pilot_shots), seed)?;
    let variances: Vec<f64> = pilot.groups.iter().map(|g| g.variance / g.retention()).collect();
    let target_var = target_sigma * target_sigma;
    let needed: Vec<f64> = match rule {
        AllocationRule::Neyman => {
            let spread: f64 = variances.iter().map(|v| v.sqrt()).sum();
            variances.iter().map(|v| v.sqrt() * spread / target_var).collect()
        }
        AllocationRule::Uniform => vec![variances.iter().sum::<f64>() / target_var; variances.len()],
    };
    Ok(ShotAllocation(needed.into_iter().map(|n| (n.ceil() as u64).max(MIN_SHOTS_PER_GROUP)).collect()))
}

/// Predicted standard error for an allocation given per-shot variances.
pub fn predicted_sigma(variances: &[f64], shots: &ShotAllocation) -> f64 {
    variances.iter().enumerate().map(|(i, v)| v / shots.for_setting(i) as f64).sum::<f64>().sqrt()
}

/// Looks up the weight of a Pauli string key such as `"XXII"`.
pub fn term_weight(h: &QubitHamiltonian, key: &str) -> Result<f64> {
    Ok(h.weight_of(&PauliOps::parse(key)?))
}
