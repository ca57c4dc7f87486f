//! Batch drivers: dissociation scans over a directory of integral files and
//! readout-noise sweeps at fixed angles.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::ansatz::{statevector_of, PuccdParameters};
use crate::error::{Error, Result};
use crate::estimator::{exact_expectation, sampled_energy, MeasurementPlan, MitigationMode, SamplingConfig, ShotAllocation};
use crate::integrals::{build_hcb_coefficients, load_integrals, SeniorityZeroCoeffs};
use crate::oracle::{doci_ground, rhf_energy, SeniorityZeroBasis};
use crate::pauli::{qubitize, QubitHamiltonian};
use crate::simulator::ReadoutNoise;
use crate::vqe::{run_vqe, VqeConfig, VqeResult};

/// 1 kcal/mol in Hartree.
pub const CHEMICAL_ACCURACY: f64 = 0.0016;

/// A molecule loaded from an integral file, with its classical references.
#[derive(Debug, Clone)]
pub struct Problem {
    pub label: String,
    pub coeffs: SeniorityZeroCoeffs,
    pub hamiltonian: QubitHamiltonian,
    pub n_pairs: usize,
    pub e_rhf: f64,
    pub e_doci: f64,
}

impl Problem {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let ints = load_integrals(path)?;
        let coeffs = build_hcb_coefficients(&ints);
        let n_pairs = ints.n_electron_pairs();
        let basis = SeniorityZeroBasis::new(ints.n_orbitals(), n_pairs)?;
        let (e_doci, _) = doci_ground(&coeffs, &basis)?;
        Ok(Self { label: distance_label(path), e_rhf: rhf_energy(&coeffs, n_pairs), hamiltonian: qubitize(&coeffs), coeffs, n_pairs, e_doci })
    }

    pub fn n_orbitals(&self) -> usize {
        self.coeffs.n_orbitals()
    }
}

/// `lih_1.595.fcidump` → `"1.595"`; names without `_` keep the whole stem.
pub fn distance_label(path: &Path) -> String {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
    stem.rsplit_once('_').map_or(stem, |(_, d)| d).to_string()
}

/// Starting angles stored next to an integral file as `<stem>.init.json`,
/// or zeros when there is none.
pub fn initial_parameters(integrals: &Path, n_orbitals: usize, n_pairs: usize) -> Result<PuccdParameters> {
    let sidecar = integrals.with_extension("init.json");
    if sidecar.is_file() {
        PuccdParameters::from_json(n_orbitals, n_pairs, &std::fs::read_to_string(sidecar)?)
    } else {
        PuccdParameters::zeros(n_orbitals, n_pairs)
    }
}

/// Integral files (`*.fcidump`, `*.json` other than sidecars) in `dir`,
/// sorted by name.
pub fn integral_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or_default();
            p.is_file() && (name.ends_with(".fcidump") || (name.ends_with(".json") && !name.ends_with(".init.json") && !name.ends_with(".ref.json")))
        })
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::InvalidInput(format!("no integral files in {}", dir.display())));
    }
    Ok(files)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub distance: String,
    pub e_hf: Option<f64>,
    pub e_doci: Option<f64>,
    pub e_puccd: Option<f64>,
    pub delta_e: Option<f64>,
    pub error: Option<String>,
}

fn scan_one(path: &Path, config: &VqeConfig) -> Result<(Problem, VqeResult)> {
    let problem = Problem::load(path)?;
    let init = initial_parameters(path, problem.n_orbitals(), problem.n_pairs)?;
    let result = run_vqe(&problem.hamiltonian, &init, config)?;
    Ok((problem, result))
}

/// One VQE per file, run concurrently on the current rayon pool. Failures
/// become rows with `error` set.
pub fn dissociation_scan(files: &[PathBuf], config: &VqeConfig) -> Vec<ScanRow> {
    files
        .par_iter()
        .map(|path| match scan_one(path, config) {
            Ok((p, r)) => ScanRow {
                distance: p.label,
                e_hf: Some(p.e_rhf),
                e_doci: Some(p.e_doci),
                e_puccd: Some(r.exact_energy_at_best),
                delta_e: Some((r.exact_energy_at_best - p.e_doci).abs()),
                error: None,
            },
            Err(e) => ScanRow { distance: distance_label(path), e_hf: None, e_doci: None, e_puccd: None, delta_e: None, error: Some(e.to_string()) },
        })
        .collect()
}

/// Measurement plan used for each mitigation mode in a sweep: the
/// unmitigated and diagonal-only modes read XX/YY terms from X/Y-basis
/// settings, full post-selection needs the paired plan.
pub fn plan_for(mode: MitigationMode) -> MeasurementPlan {
    match mode {
        MitigationMode::AllTerms => MeasurementPlan::Paired,
        _ => MeasurementPlan::Tpb3,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub error_rate: f64,
    pub mode: MitigationMode,
    pub repeats: usize,
    pub mean_abs_error: Option<f64>,
    pub ci95_low: Option<f64>,
    pub ci95_high: Option<f64>,
    pub mean_std_error: Option<f64>,
    pub min_retention: Option<f64>,
    pub error: Option<String>,
}

impl SweepRow {
    /// True when the two rows' 95% intervals do not overlap.
    pub fn separated_from(&self, other: &SweepRow) -> bool {
        match (self.ci95_low, self.ci95_high, other.ci95_low, other.ci95_high) {
            (Some(a0), Some(a1), Some(b0), Some(b1)) => a1 < b0 || b1 < a0,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub error_rates: Vec<f64>,
    pub modes: Vec<MitigationMode>,
    pub repeats: usize,
    pub shots_per_setting: u64,
    pub seed: u64,
}

#[allow(clippy::too_many_arguments)]
fn sweep_point(
    state: &crate::simulator::StateVector,
    h: &QubitHamiltonian,
    exact: f64,
    n_pairs: usize,
    rate: f64,
    mode: MitigationMode,
    cfg: &SweepConfig,
    point: usize,
) -> Result<SweepRow> {
    let sampling = SamplingConfig { plan: plan_for(mode), mitigation: mode, noise: ReadoutNoise::new(rate)?, n_pairs };
    let shots = ShotAllocation::uniform(cfg.shots_per_setting);
    let mut errors = Vec::with_capacity(cfg.repeats);
    let mut std_errors = 0.0;
    let mut min_retention = 1.0f64;
    for r in 0..cfg.repeats {
        let seed = cfg.seed.wrapping_add(((point as u64) << 32) + r as u64);
        let est = sampled_energy(state, h, &sampling, &shots, seed)?;
        errors.push((est.value - exact).abs());
        std_errors += est.std_error;
        min_retention = min_retention.min(est.min_retention());
    }
    let n = errors.len() as f64;
    let mean = errors.iter().sum::<f64>() / n;
    let sd = if errors.len() > 1 { (errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() } else { 0.0 };
    let half = 1.96 * sd / n.sqrt();
    Ok(SweepRow {
        error_rate: rate,
        mode,
        repeats: cfg.repeats,
        mean_abs_error: Some(mean),
        ci95_low: Some(mean - half),
        ci95_high: Some(mean + half),
        mean_std_error: Some(std_errors / n),
        min_retention: Some(min_retention),
        error: None,
    })
}

/// Mean |E_sampled − E_exact| with 95% intervals, per error rate and mode,
/// at fixed angles. Grid points run concurrently; a failing point (e.g.
/// nothing survives post-selection) becomes a row with `error` set.
pub fn noise_sweep(h: &QubitHamiltonian, params: &PuccdParameters, cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    if cfg.repeats < 1 || cfg.shots_per_setting < 1 {
        return Err(Error::InvalidInput("repeats and shots must be at least 1".into()));
    }
    let state = statevector_of(params, 1)?;
    let exact = exact_expectation(&state, h)?;
    let grid: Vec<(f64, MitigationMode)> = cfg.error_rates.iter().flat_map(|&p| cfg.modes.iter().map(move |&m| (p, m))).collect();
    Ok(grid
        .par_iter()
        .enumerate()
        .map(|(k, &(rate, mode))| {
            sweep_point(&state, h, exact, params.n_pairs(), rate, mode, cfg, k).unwrap_or_else(|e| SweepRow {
                error_rate: rate,
                mode,
                repeats: cfg.repeats,
                mean_abs_error: None,
                ci95_low: None,
                ci95_high: None,
                mean_std_error: None,
                min_retention: None,
                error: Some(e.to_string()),
            })
        })
        .collect())
}

/// Smallest error rate at which `mode`'s mean |ΔE| reaches `threshold`,
/// interpolating linearly between swept rates.
pub fn crossing_rate(rows: &[SweepRow], mode: MitigationMode, threshold: f64) -> Option<f64> {
    let mut pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.mode == mode).filter_map(|r| r.mean_abs_error.map(|e| (r.error_rate, e))).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    if pts.first()?.1 >= threshold {
        return Some(pts[0].0);
    }
    pts.windows(2).find(|w| w[1].1 >= threshold).map(|w| {
        let (p0, e0) = w[0];
        let (p1, e1) = w[1];
        p0 + (threshold - e0) * (p1 - p0) / (e1 - e0)
    })
}
