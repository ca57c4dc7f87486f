//! Command-line front end: Hamiltonian reports, VQE runs, dissociation
//! scans and readout-noise sweeps. Every command writes into an output
//! directory together with a `manifest.json` describing the run.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use szvqe::ansatz::{PuccdParameters, GATE_SCHEDULE};
use szvqe::estimator::{MeasurementPlan, MitigationMode};
use szvqe::experiments::{self, crossing_rate, initial_parameters, integral_files, Problem, SweepConfig, CHEMICAL_ACCURACY};
use szvqe::pauli::group_terms;
use szvqe::simulator::ReadoutNoise;
use szvqe::vqe::{run_vqe, Objective, Optimizer, VqeConfig, DEFAULT_PILOT_SHOTS};

/// Environment variable naming the default fixture directory.
pub const FIXTURES_ENV: &str = "SZVQE_FIXTURES";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "szvqe", version, about = "Paired-electron VQE simulator with a DOCI reference")]
pub struct Cli {
    /// Worker threads for concurrent geometries, grid points and settings.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Directory holding the bundled fixtures.
    #[arg(long, global = true, env = FIXTURES_ENV, default_value = "fixtures")]
    pub fixtures: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the qubit Hamiltonian and report its measurement structure.
    Ham(HamArgs),
    /// Optimize pUCCD angles for one molecule.
    Vqe(VqeArgs),
    /// Run one VQE per integral file in a directory.
    Scan(ScanArgs),
    /// Sampled-energy error versus readout error rate per mitigation mode.
    NoiseSweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct HamArgs {
    /// FCIDUMP or JSON integrals [default: <fixtures>/lih/lih_1.595.fcidump]
    #[arg(long)]
    pub integrals: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveArg {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MitigationArg {
    None,
    Diag,
    All,
}

impl From<MitigationArg> for MitigationMode {
    fn from(m: MitigationArg) -> Self {
        match m {
            MitigationArg::None => MitigationMode::None,
            MitigationArg::Diag => MitigationMode::DiagOnly,
            MitigationArg::All => MitigationMode::AllTerms,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanArg {
    Tpb3,
    Paired,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimizerArg {
    Imfil,
    NelderMead,
}

#[derive(Debug, Args, Serialize)]
pub struct VqeArgs {
    /// FCIDUMP or JSON integrals [default: <fixtures>/lih/lih_1.595.fcidump]
    #[arg(long)]
    pub integrals: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "exact")]
    pub objective: ObjectiveArg,
    #[arg(long, value_enum, default_value = "none")]
    pub mitigation: MitigationArg,
    /// Measurement plan; defaults to `paired` with `--mitigation all`,
    /// otherwise `tpb3`.
    #[arg(long, value_enum)]
    pub plan: Option<PlanArg>,
    /// Target standard deviation of each sampled energy, Hartree.
    #[arg(long, default_value_t = 0.0008)]
    pub sigma: f64,
    /// Readout bit-flip probability for sampled runs.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = DEFAULT_PILOT_SHOTS)]
    pub pilot_shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Starting angles as {"(i,j)": angle}; `zeros` starts from
    /// Hartree-Fock [default: <integrals stem>.init.json if present]
    #[arg(long)]
    pub init: Option<String>,
    #[arg(long, value_enum, default_value = "imfil")]
    pub optimizer: OptimizerArg,
    /// Initial stencil or simplex step, radians.
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    /// Implicit-filtering stop once the stencil is smaller than this.
    #[arg(long)]
    pub min_step: Option<f64>,
    #[arg(long, default_value_t = 5000)]
    pub max_evaluations: usize,
    #[arg(long, default_value_t = 1)]
    pub trotter_steps: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    /// Directory of per-geometry integral files [default: <fixtures>/lih]
    #[arg(long)]
    pub integrals_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "imfil")]
    pub optimizer: OptimizerArg,
    #[arg(long, default_value_t = 5000)]
    pub max_evaluations: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    /// FCIDUMP or JSON integrals [default: <fixtures>/lih/lih_1.595.fcidump]
    #[arg(long)]
    pub integrals: Option<PathBuf>,
    /// Angles as {"(i,j)": angle} or a `vqe` result.json; optimized with an
    /// exact VQE when omitted.
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "0,0.0025,0.005,0.0075,0.01,0.015,0.02")]
    pub error_rates: Vec<f64>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "none,diag,all")]
    pub modes: Vec<MitigationArg>,
    #[arg(long, default_value_t = 50)]
    pub repeats: usize,
    /// Shots per measurement setting for every estimate.
    #[arg(long, default_value_t = 200_000)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

/// Describes one invocation; written as `manifest.json` beside the outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub fixtures: Vec<PathBuf>,
    pub tool_version: String,
    pub gate_schedule: &'static str,
    pub started_unix_s: u64,
    pub wall_clock_s: f64,
    pub outputs: Vec<PathBuf>,
}

const MANIFEST: &str = "manifest.json";

struct Run {
    command: &'static str,
    config: serde_json::Value,
    seed: Option<u64>,
    fixtures: Vec<PathBuf>,
    out: PathBuf,
    outputs: Vec<PathBuf>,
    started: SystemTime,
    clock: Instant,
}

impl Run {
    fn new(command: &'static str, out: &Path, config: impl Serialize, seed: Option<u64>) -> anyhow::Result<Self> {
        fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
        Ok(Self {
            command,
            config: serde_json::to_value(config)?,
            seed,
            fixtures: Vec::new(),
            out: out.to_path_buf(),
            outputs: Vec::new(),
            started: SystemTime::now(),
            clock: Instant::now(),
        })
    }

    fn write(&mut self, name: &str, contents: &str) -> anyhow::Result<PathBuf> {
        let path = self.out.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.outputs.push(path.clone());
        Ok(path)
    }

    fn finish(self) -> anyhow::Result<()> {
        let manifest = RunManifest {
            command: self.command.to_string(),
            config: self.config,
            seed: self.seed,
            fixtures: self.fixtures,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            gate_schedule: GATE_SCHEDULE,
            started_unix_s: self.started.duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            wall_clock_s: self.clock.elapsed().as_secs_f64(),
            outputs: self.outputs,
        };
        fs::write(self.out.join(MANIFEST), serde_json::to_string_pretty(&manifest)? + "\n")?;
        Ok(())
    }
}

fn default_integrals(fixtures: &Path) -> PathBuf {
    fixtures.join("lih").join("lih_1.595.fcidump")
}

fn load_problem(path: &Path) -> anyhow::Result<Problem> {
    Problem::load(path).with_context(|| format!("reading integrals from {}", path.display()))
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> anyhow::Result<i32> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            bail!("--jobs must be at least 1");
        }
        // a second build in the same process (tests) keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match cli.command {
        Command::Ham(args) => cmd_ham(&cli.fixtures, args),
        Command::Vqe(args) => cmd_vqe(&cli.fixtures, args),
        Command::Scan(args) => cmd_scan(&cli.fixtures, args),
        Command::NoiseSweep(args) => cmd_noise_sweep(&cli.fixtures, args),
    }
}

#[derive(Serialize)]
struct HamReport<'a> {
    manifest: &'a str,
    n_qubits: usize,
    n_pairs: usize,
    parameters: usize,
    term_count: usize,
    groups: Vec<GroupReport>,
    e_rhf: f64,
    e_doci: f64,
    hamiltonian: serde_json::Value,
}

#[derive(Serialize)]
struct GroupReport {
    basis: String,
    size: usize,
}

pub fn cmd_ham(fixtures: &Path, args: HamArgs) -> anyhow::Result<i32> {
    let path = args.integrals.unwrap_or_else(|| default_integrals(fixtures));
    let p = load_problem(&path)?;
    let n = p.n_orbitals();
    let groups = group_terms(&p.hamiltonian)?;
    let parameters = (n - p.n_pairs) * p.n_pairs;
    println!("qubits: {n}, groups: {}, parameters: {parameters}", groups.len());
    println!("terms: {}", p.hamiltonian.terms().len());
    for g in &groups {
        println!("  {}: {} terms", g.basis, g.members.len());
    }
    println!("E_RHF = {:.10} Ha, E_DOCI = {:.10} Ha", p.e_rhf, p.e_doci);
    if let Some(out) = args.out {
        let mut run = Run::new("ham", &out, serde_json::json!({ "integrals": path }), None)?;
        run.fixtures.push(path.clone());
        let report = HamReport {
            manifest: MANIFEST,
            n_qubits: n,
            n_pairs: p.n_pairs,
            parameters,
            term_count: p.hamiltonian.terms().len(),
            groups: groups.iter().map(|g| GroupReport { basis: g.basis.to_string(), size: g.members.len() }).collect(),
            e_rhf: p.e_rhf,
            e_doci: p.e_doci,
            hamiltonian: serde_json::from_str(&p.hamiltonian.to_json())?,
        };
        run.write("hamiltonian.json", &(serde_json::to_string_pretty(&report)? + "\n"))?;
        run.finish()?;
    }
    Ok(EXIT_OK)
}

fn read_params(path: &Path, n: usize, n_e: usize) -> anyhow::Result<PuccdParameters> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let map = value.get("best_parameters").unwrap_or(&value);
    PuccdParameters::from_json(n, n_e, &map.to_string()).with_context(|| format!("angles in {}", path.display()))
}

fn starting_params(init: Option<&str>, integrals: &Path, p: &Problem) -> anyhow::Result<PuccdParameters> {
    Ok(match init {
        Some("zeros") => PuccdParameters::zeros(p.n_orbitals(), p.n_pairs)?,
        Some(file) => read_params(Path::new(file), p.n_orbitals(), p.n_pairs)?,
        None => initial_parameters(integrals, p.n_orbitals(), p.n_pairs)?,
    })
}

fn optimizer(kind: OptimizerArg, step: f64, min_step: Option<f64>, objective: ObjectiveArg) -> Optimizer {
    match kind {
        OptimizerArg::Imfil => Optimizer::ImplicitFiltering {
            initial_step: step,
            min_step: min_step.unwrap_or(match objective {
                ObjectiveArg::Exact => 1e-5,
                ObjectiveArg::Sampled => 1e-3,
            }),
        },
        OptimizerArg::NelderMead => Optimizer::NelderMead { initial_step: step },
    }
}

#[derive(Serialize)]
struct VqeReport<'a> {
    manifest: &'a str,
    label: &'a str,
    e_rhf: f64,
    e_doci: f64,
    delta_e_doci: f64,
    config: &'a VqeConfig,
    #[serde(flatten)]
    result: &'a szvqe::VqeResult,
}

pub fn cmd_vqe(fixtures: &Path, args: VqeArgs) -> anyhow::Result<i32> {
    let path = args.integrals.clone().unwrap_or_else(|| default_integrals(fixtures));
    let p = load_problem(&path)?;
    let init = starting_params(args.init.as_deref(), &path, &p)?;
    let mitigation: MitigationMode = args.mitigation.into();
    let plan = match args.plan {
        Some(PlanArg::Tpb3) => MeasurementPlan::Tpb3,
        Some(PlanArg::Paired) => MeasurementPlan::Paired,
        None => experiments::plan_for(mitigation),
    };
    let objective = match args.objective {
        ObjectiveArg::Exact => Objective::Exact,
        ObjectiveArg::Sampled => {
            Objective::Sampled { plan, mitigation, target_sigma: args.sigma, noise: ReadoutNoise::new(args.noise)?, pilot_shots: args.pilot_shots }
        }
    };
    let config = VqeConfig {
        objective,
        optimizer: optimizer(args.optimizer, args.step, args.min_step, args.objective),
        max_evaluations: args.max_evaluations,
        trotter_steps: args.trotter_steps,
        seed: args.seed,
    };
    let mut run = Run::new("vqe", &args.out, &args, Some(args.seed))?;
    run.fixtures.push(path.clone());
    let result = run_vqe(&p.hamiltonian, &init, &config)?;
    let delta = result.exact_energy_at_best - p.e_doci;
    let report =
        VqeReport { manifest: MANIFEST, label: &p.label, e_rhf: p.e_rhf, e_doci: p.e_doci, delta_e_doci: delta, config: &config, result: &result };
    run.write("result.json", &(serde_json::to_string_pretty(&report)? + "\n"))?;
    run.write("trace.csv", &result.trace_csv())?;
    run.finish()?;
    println!(
        "E = {:.10} Ha (exact at best {:.10}), E_DOCI = {:.10} Ha, dE = {delta:.3e} Ha, evaluations: {}, shots: {}, stop: {:?}",
        result.best_energy,
        result.exact_energy_at_best,
        p.e_doci,
        result.trace.len(),
        result.trace.last().map_or(0, |t| t.shots_cumulative),
        result.stop_reason
    );
    Ok(if result.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

#[derive(Serialize)]
struct ScanCsvRow<'a> {
    distance_angstrom: &'a str,
    e_hf_hartree: Option<f64>,
    e_doci_hartree: Option<f64>,
    e_puccd_hartree: Option<f64>,
    delta_e_hartree: Option<f64>,
    error: Option<&'a str>,
}

fn csv_string<T: Serialize>(rows: impl IntoIterator<Item = T>) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| anyhow!("{e}"))?)?)
}

pub fn cmd_scan(fixtures: &Path, args: ScanArgs) -> anyhow::Result<i32> {
    let dir = args.integrals_dir.clone().unwrap_or_else(|| fixtures.join("lih"));
    let files = integral_files(&dir).with_context(|| format!("scanning {}", dir.display()))?;
    let config = VqeConfig {
        optimizer: optimizer(args.optimizer, 0.05, None, ObjectiveArg::Exact),
        max_evaluations: args.max_evaluations,
        ..VqeConfig::default()
    };
    let mut run = Run::new("scan", &args.out, &args, None)?;
    run.fixtures = files.clone();
    let rows = experiments::dissociation_scan(&files, &config);
    let csv = csv_string(rows.iter().map(|r| ScanCsvRow {
        distance_angstrom: &r.distance,
        e_hf_hartree: r.e_hf,
        e_doci_hartree: r.e_doci,
        e_puccd_hartree: r.e_puccd,
        delta_e_hartree: r.delta_e,
        error: r.error.as_deref(),
    }))?;
    run.write("scan.csv", &csv)?;
    run.finish()?;
    for r in &rows {
        match (&r.error, r.delta_e) {
            (Some(e), _) => println!("{}: failed: {e}", r.distance),
            (None, Some(d)) => println!("{}: dE = {d:.3e} Ha", r.distance),
            _ => {}
        }
    }
    if rows.iter().all(|r| r.error.is_some()) {
        bail!("every geometry failed");
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SweepCsvRow<'a> {
    error_rate: f64,
    mode: &'a str,
    repeats: usize,
    mean_abs_error_hartree: Option<f64>,
    ci95_low_hartree: Option<f64>,
    ci95_high_hartree: Option<f64>,
    mean_std_error_hartree: Option<f64>,
    min_retention: Option<f64>,
    error: Option<&'a str>,
}

pub fn cmd_noise_sweep(fixtures: &Path, args: SweepArgs) -> anyhow::Result<i32> {
    let path = args.integrals.clone().unwrap_or_else(|| default_integrals(fixtures));
    let p = load_problem(&path)?;
    let mut run = Run::new("noise-sweep", &args.out, &args, Some(args.seed))?;
    run.fixtures.push(path.clone());
    let params = match &args.params {
        Some(file) => {
            run.fixtures.push(file.clone());
            read_params(file, p.n_orbitals(), p.n_pairs)?
        }
        None => {
            let init = initial_parameters(&path, p.n_orbitals(), p.n_pairs)?;
            run_vqe(&p.hamiltonian, &init, &VqeConfig::default())?.best_parameters
        }
    };
    let modes: Vec<MitigationMode> = args.modes.iter().map(|&m| m.into()).collect();
    let cfg = SweepConfig {
        error_rates: args.error_rates.clone(),
        modes: modes.clone(),
        repeats: args.repeats,
        shots_per_setting: args.shots,
        seed: args.seed,
    };
    let rows = experiments::noise_sweep(&p.hamiltonian, &params, &cfg)?;
    let csv = csv_string(rows.iter().map(|r| SweepCsvRow {
        error_rate: r.error_rate,
        mode: r.mode.label(),
        repeats: r.repeats,
        mean_abs_error_hartree: r.mean_abs_error,
        ci95_low_hartree: r.ci95_low,
        ci95_high_hartree: r.ci95_high,
        mean_std_error_hartree: r.mean_std_error,
        min_retention: r.min_retention,
        error: r.error.as_deref(),
    }))?;
    run.write("noise_sweep.csv", &csv)?;
    let crossings: serde_json::Map<String, serde_json::Value> =
        modes.iter().map(|m| (m.label().to_string(), serde_json::json!(crossing_rate(&rows, *m, CHEMICAL_ACCURACY)))).collect();
    let summary = serde_json::json!({ "manifest": MANIFEST, "threshold_hartree": CHEMICAL_ACCURACY, "crossing_error_rate": crossings });
    run.write("crossing.json", &(serde_json::to_string_pretty(&summary)? + "\n"))?;
    run.finish()?;
    for r in &rows {
        match (&r.error, r.mean_abs_error) {
            (Some(e), _) => println!("p={} {}: failed: {e}", r.error_rate, r.mode.label()),
            (None, Some(m)) => println!("p={} {}: mean |dE| = {m:.3e} Ha", r.error_rate, r.mode.label()),
            _ => {}
        }
    }
    if let (Some(d), Some(a)) =
        (crossing_rate(&rows, MitigationMode::DiagOnly, CHEMICAL_ACCURACY), crossing_rate(&rows, MitigationMode::AllTerms, CHEMICAL_ACCURACY))
    {
        println!("1 kcal/mol reached at p = {d:.4} (diag), {a:.4} (all): {:+.0}%", 100.0 * (a / d - 1.0));
    }
    Ok(EXIT_OK)
}
