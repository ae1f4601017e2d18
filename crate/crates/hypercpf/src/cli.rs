//! Config-file driven front end: single runs, Fig.-style efficiency sweeps
//! and a seeded self-verification suite, all with machine-readable output.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gatecircuit::{
    closed_form_applies, efficiency_closed_form, efficiency_pipeline, ideal_hyper_cpf,
    photon_part, run_hyper_cpf, Checkpoint, GateError, GateResult, OutcomePolicy,
};
use crate::hyperstate::{fidelity, InputPairs, StateError};
use crate::optics::{apply_feed_forward, measure_spins};
use crate::oracle::{compare_states, reference_checkpoint, run_dense_pipeline};
use crate::qdcavity::{emitter_coefficients, CavityError, CavityParams};
use crate::gatecircuit::checkpoint_state;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Cavity(#[from] CavityError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error("verification failed:\n{0}")]
    VerificationFailed(String),
}

/// Unit system of the cavity block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum UnitSystem {
    /// Values are ratios to the cavity linewidth (`kappa` itself usually 1).
    #[default]
    Kappa,
    /// Values in micro-electronvolts; everything is divided by `kappa`.
    MicroEv,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CavityConfig {
    #[serde(default)]
    pub units: UnitSystem,
    #[serde(default)]
    pub omega_photon: f64,
    #[serde(default)]
    pub omega_cavity: f64,
    #[serde(default)]
    pub omega_exciton: f64,
    pub g: f64,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default)]
    pub kappa_s: f64,
    pub gamma: f64,
    #[serde(default = "default_p")]
    pub p: f64,
}

fn default_kappa() -> f64 {
    1.0
}

fn default_p() -> f64 {
    1.0
}

impl CavityConfig {
    /// Resolves the block to validated parameters in units of `kappa`.
    pub fn resolve(&self) -> Result<CavityParams, CliError> {
        let params = CavityParams::new(
            self.omega_photon,
            self.omega_cavity,
            self.omega_exciton,
            self.g,
            self.kappa,
            self.kappa_s,
            self.gamma,
            self.p,
        )?;
        Ok(params.in_kappa_units())
    }
}

/// Complex pair serialized as `[[re, im], [re, im]]`.
type PairRepr = [[f64; 2]; 2];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InputConfig {
    pub alpha: PairRepr,
    pub beta: PairRepr,
    pub lambda: PairRepr,
    pub varpi: PairRepr,
}

fn pair_from_repr(repr: &PairRepr) -> (Complex64, Complex64) {
    (
        Complex64::new(repr[0][0], repr[0][1]),
        Complex64::new(repr[1][0], repr[1][1]),
    )
}

impl Default for InputConfig {
    /// Balanced superpositions on every encoding slot.
    fn default() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let pair = [[h, 0.0], [h, 0.0]];
        Self {
            alpha: pair,
            beta: pair,
            lambda: pair,
            varpi: pair,
        }
    }
}

impl InputConfig {
    pub fn pairs(&self) -> InputPairs {
        InputPairs {
            alpha: pair_from_repr(&self.alpha),
            beta: pair_from_repr(&self.beta),
            lambda: pair_from_repr(&self.lambda),
            varpi: pair_from_repr(&self.varpi),
        }
    }
}

/// Sweepable parameter axes, matching the plot parameterizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    GOverKappa,
    KappaSOverKappa,
    GammaOverKappa,
    P,
    PSquared,
    GOverSqrtKappaGamma,
}

impl SweepAxis {
    fn name(self) -> &'static str {
        match self {
            SweepAxis::GOverKappa => "g_over_kappa",
            SweepAxis::KappaSOverKappa => "kappa_s_over_kappa",
            SweepAxis::GammaOverKappa => "gamma_over_kappa",
            SweepAxis::P => "p",
            SweepAxis::PSquared => "p_squared",
            SweepAxis::GOverSqrtKappaGamma => "g_over_sqrt_kappa_gamma",
        }
    }

    /// Applies the axis value to a parameter set in `kappa` units.
    fn apply(self, params: &mut CavityParams, value: f64) -> Result<(), CliError> {
        match self {
            SweepAxis::GOverKappa => params.g = value,
            SweepAxis::KappaSOverKappa => params.kappa_s = value,
            SweepAxis::GammaOverKappa => params.gamma = value,
            SweepAxis::P => params.p = value,
            SweepAxis::PSquared => {
                if value <= 0.0 {
                    return Err(CliError::Config(
                        "sweep: p_squared axis requires values > 0".into(),
                    ));
                }
                params.p = value.sqrt();
            }
            SweepAxis::GOverSqrtKappaGamma => {
                params.g = value * params.gamma.sqrt();
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepAxisConfig {
    pub axis: SweepAxis,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl SweepAxisConfig {
    fn validate(&self) -> Result<(), CliError> {
        if self.count < 2 {
            return Err(CliError::Config(format!(
                "sweep axis {}: count must be >= 2 (got {})",
                self.axis.name(),
                self.count
            )));
        }
        if self.start >= self.stop {
            return Err(CliError::Config(format!(
                "sweep axis {}: start must be < stop (got {} .. {})",
                self.axis.name(),
                self.start,
                self.stop
            )));
        }
        Ok(())
    }

    fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| self.start + (self.stop - self.start) * (i as f64) / ((n - 1) as f64))
            .collect()
    }
}

/// One JSON document configuring a run or a sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub cavity: CavityConfig,
    #[serde(default)]
    pub input: InputConfig,
    #[serde(default)]
    pub sweep: Vec<SweepAxisConfig>,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)?;
        let config: RunConfig = serde_json::from_str(&text)?;
        Ok(config)
    }
}

/// Serialized single-run report: resolved parameters plus the gate result.
#[derive(Debug, Serialize)]
pub struct SimulateReport {
    pub parameters: ResolvedParameters,
    pub result: GateResult,
}

/// Parameter header carried by every output for reproducibility.
#[derive(Debug, Serialize)]
pub struct ResolvedParameters {
    pub omega_photon: f64,
    pub omega_cavity: f64,
    pub omega_exciton: f64,
    pub g: f64,
    pub kappa: f64,
    pub kappa_s: f64,
    pub gamma: f64,
    pub p: f64,
    /// Cold reflection as `[re, im]`.
    pub r0: [f64; 2],
    /// Hot reflection as `[re, im]`.
    pub rh: [f64; 2],
    /// Success coefficient as `[re, im]`.
    pub c: [f64; 2],
    /// Error coefficient as `[re, im]`.
    pub f: [f64; 2],
}

impl ResolvedParameters {
    fn new(params: &CavityParams) -> Result<Self, CavityError> {
        let coeffs = emitter_coefficients(params)?;
        Ok(Self {
            omega_photon: params.omega_photon,
            omega_cavity: params.omega_cavity,
            omega_exciton: params.omega_exciton,
            g: params.g,
            kappa: params.kappa,
            kappa_s: params.kappa_s,
            gamma: params.gamma,
            p: params.p,
            r0: [coeffs.r0.re, coeffs.r0.im],
            rh: [coeffs.rh.re, coeffs.rh.im],
            c: [coeffs.c.re, coeffs.c.im],
            f: [coeffs.f.re, coeffs.f.im],
        })
    }
}

/// Runs one gate invocation and serializes the full result as JSON.
pub fn cmd_simulate(config: &RunConfig) -> Result<String, CliError> {
    let params = config.cavity.resolve()?;
    let input = config.input.pairs().state()?;
    let result = run_hyper_cpf(&input, &params, OutcomePolicy::ReportAllBranches)?;
    let report = SimulateReport {
        parameters: ResolvedParameters::new(&params)?,
        result,
    };
    Ok(serde_json::to_string_pretty(&report)?)
}

/// One evaluated grid point of a sweep.
#[derive(Debug, Clone)]
struct SweepRow {
    axis1: f64,
    axis2: f64,
    eta_pipeline: f64,
    eta_closed_form: Option<f64>,
    fidelity: Option<f64>,
}

fn format_opt(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v:.17e}"),
        None => "nan".to_string(),
    }
}

/// Evaluates a two-axis sweep and renders the CSV table.
///
/// Columns: axis1, axis2, eta_pipeline, eta_closed_form, fidelity. The
/// closed-form column reads `nan` where its resonance preconditions fail,
/// and the fidelity column reads `nan` where the gate is inoperative.
/// Grid points are evaluated concurrently; `threads = 0` uses one worker
/// per processor. Output order follows the grid regardless of scheduling.
pub fn cmd_sweep(config: &RunConfig, threads: usize) -> Result<String, CliError> {
    if config.sweep.len() != 2 {
        return Err(CliError::Config(format!(
            "sweep requires exactly two axes (got {})",
            config.sweep.len()
        )));
    }
    for axis in &config.sweep {
        axis.validate()?;
    }
    let base = config.cavity.resolve()?;
    let pairs = config.input.pairs();
    // Validate the input pairs once up front.
    pairs.state()?;
    let (first, second) = (&config.sweep[0], &config.sweep[1]);
    let grid: Vec<(f64, f64)> = first
        .values()
        .iter()
        .flat_map(|&v1| second.values().iter().map(move |&v2| (v1, v2)).collect::<Vec<_>>())
        .collect();

    let evaluate = |&(v1, v2): &(f64, f64)| -> Result<SweepRow, CliError> {
        let mut params = base;
        first.axis.apply(&mut params, v1)?;
        second.axis.apply(&mut params, v2)?;
        let eta_pipeline = efficiency_pipeline(&params)?;
        let eta_closed_form = closed_form_applies(&params)
            .then(|| efficiency_closed_form(params.g, params.kappa_s, params.p));
        let fidelity = match run_hyper_cpf(&pairs.state()?, &params, OutcomePolicy::ReportAllBranches)
        {
            Ok(result) => Some(result.fidelity_vs_ideal),
            Err(GateError::Inoperative { .. }) => None,
            Err(other) => return Err(other.into()),
        };
        Ok(SweepRow {
            axis1: v1,
            axis2: v2,
            eta_pipeline,
            eta_closed_form,
            fidelity,
        })
    };

    let rows: Result<Vec<SweepRow>, CliError> = if threads == 1 {
        grid.iter().map(evaluate).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
        pool.install(|| grid.par_iter().map(evaluate).collect())
    };
    let rows = rows?;

    let mut out = String::new();
    let header = ResolvedParameters::new(&base)?;
    let _ = writeln!(out, "# hypercpf sweep");
    let _ = writeln!(
        out,
        "# base: omega_photon={} omega_cavity={} omega_exciton={} g={} kappa={} kappa_s={} gamma={} p={}",
        header.omega_photon,
        header.omega_cavity,
        header.omega_exciton,
        header.g,
        header.kappa,
        header.kappa_s,
        header.gamma,
        header.p
    );
    let _ = writeln!(out, "# axis1={} axis2={}", first.axis.name(), second.axis.name());
    let _ = writeln!(out, "axis1,axis2,eta_pipeline,eta_closed_form,fidelity");
    for row in rows {
        let _ = writeln!(
            out,
            "{:.17e},{:.17e},{:.17e},{},{}",
            row.axis1,
            row.axis2,
            row.eta_pipeline,
            format_opt(row.eta_closed_form),
            format_opt(row.fidelity)
        );
    }
    Ok(out)
}

/// Tolerances used by the verification suite.
const VERIFY_CHECKPOINT_TOL: f64 = 1e-12;
const VERIFY_ORACLE_TOL: f64 = 1e-12;
const VERIFY_FIDELITY_TOL: f64 = 1e-10;
const VERIFY_HERALD_TOL: f64 = 1e-12;
const VERIFY_CONSERVATION_TOL: f64 = 1e-12;

fn random_params(rng: &mut ChaCha8Rng) -> CavityParams {
    CavityParams::new(
        0.0,
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(0.2..5.0),
        1.0,
        rng.gen_range(0.0..2.0),
        rng.gen_range(0.05..0.5),
        rng.gen_range(0.3..1.0),
    )
    .expect("sampled parameters are valid")
}

fn describe_params(params: &CavityParams) -> String {
    format!(
        "omega_cavity={:.6} omega_exciton={:.6} g={:.6} kappa_s={:.6} gamma={:.6} p={:.6}",
        params.omega_cavity, params.omega_exciton, params.g, params.kappa_s, params.gamma, params.p
    )
}

fn describe_pairs(pairs: &InputPairs) -> String {
    let p = |x: (Complex64, Complex64)| {
        format!(
            "[[{:.6},{:.6}],[{:.6},{:.6}]]",
            x.0.re, x.0.im, x.1.re, x.1.im
        )
    };
    format!(
        "alpha={} beta={} lambda={} varpi={}",
        p(pairs.alpha),
        p(pairs.beta),
        p(pairs.lambda),
        p(pairs.varpi)
    )
}

/// Runs the full invariant suite on seeded random draws.
///
/// Per draw: the three checkpoint states are compared against their literal
/// reference term lists and against the dense matrix pipeline; the gate is
/// run end to end and every branch fidelity, the herald probabilities, the
/// success identity and probability conservation are checked. The report is
/// deterministic for a fixed seed. Returns the report text, or an error
/// carrying it if any draw fails.
pub fn cmd_verify(seed: u64, draws: usize) -> Result<String, CliError> {
    if draws == 0 {
        return Err(CliError::Config("verify: draws must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = String::new();
    let _ = writeln!(report, "hypercpf verify: seed={seed} draws={draws}");
    let mut failures = 0usize;
    for draw in 0..draws {
        let params = random_params(&mut rng);
        let pairs = InputPairs::random(&mut rng);
        let mut problems: Vec<String> = Vec::new();

        let input = pairs.state()?;
        let coeffs = emitter_coefficients(&params)?;

        // Checkpoint equality against the literal term lists.
        let mut checkpoint_ok = true;
        for stage in [
            Checkpoint::AfterStage1,
            Checkpoint::AfterStage2,
            Checkpoint::AfterTarget,
        ] {
            let simulated = checkpoint_state(stage, &input, &params)?;
            let reference = reference_checkpoint(stage, &pairs, &coeffs);
            let (dev, at) = simulated.max_deviation(&reference);
            if dev >= VERIFY_CHECKPOINT_TOL {
                checkpoint_ok = false;
                problems.push(format!("checkpoint {stage:?}: deviation {dev:.3e} at {at:?}"));
            }
        }

        // Dense-matrix cross-check at every stage.
        let mut oracle_ok = true;
        let trace = run_dense_pipeline(&input, &params)?;
        for (stage, dense) in [
            (Checkpoint::AfterStage1, &trace.after_stage1),
            (Checkpoint::AfterStage2, &trace.after_stage2),
            (Checkpoint::AfterTarget, &trace.after_target),
        ] {
            let sparse = checkpoint_state(stage, &input, &params)?;
            let cmp = compare_states(&sparse, dense, VERIFY_ORACLE_TOL)
                .expect("dense dimension is fixed");
            if !cmp.pass {
                oracle_ok = false;
                problems.push(format!(
                    "oracle {stage:?}: max diff {:.3e} at {:?}",
                    cmp.max_abs_diff, cmp.worst_label
                ));
            }
        }

        // End-to-end run: fidelity, heralds, conservation.
        let result = run_hyper_cpf(&input, &params, OutcomePolicy::ReportAllBranches)?;
        let mut fidelity_ok = true;
        let mut heralds_ok = true;
        for branch in &result.spin_branches {
            if (branch.fidelity - 1.0).abs() >= VERIFY_FIDELITY_TOL {
                fidelity_ok = false;
                problems.push(format!(
                    "fidelity {:?}: {:.12}",
                    branch.outcome, branch.fidelity
                ));
            }
            if (branch.probability - 0.25).abs() >= VERIFY_HERALD_TOL {
                heralds_ok = false;
                problems.push(format!(
                    "herald {:?}: probability {:.15}",
                    branch.outcome, branch.probability
                ));
            }
        }
        let eta = coeffs.c.norm().powi(8);
        if (result.success_probability - eta).abs() >= VERIFY_HERALD_TOL {
            heralds_ok = false;
            problems.push(format!(
                "success {:.15} vs |c|^8 {:.15}",
                result.success_probability, eta
            ));
        }
        let herald_total: f64 = result.heralded_failure.values().sum();
        let books = result.success_probability + herald_total + result.unheralded_loss;
        let conservation_ok = (books - 1.0).abs() < VERIFY_CONSERVATION_TOL;
        if !conservation_ok {
            problems.push(format!("conservation: total probability {books:.15}"));
        }

        let ok = |b: bool| if b { "OK" } else { "FAIL" };
        let _ = writeln!(
            report,
            "draw {draw:03}: checkpoints {}  oracle {}  fidelity {}  heralds {}  conservation {}",
            ok(checkpoint_ok),
            ok(oracle_ok),
            ok(fidelity_ok),
            ok(heralds_ok),
            ok(conservation_ok)
        );
        if !problems.is_empty() {
            failures += 1;
            let _ = writeln!(report, "  params: {}", describe_params(&params));
            let _ = writeln!(report, "  input:  {}", describe_pairs(&pairs));
            for p in problems {
                let _ = writeln!(report, "  {p}");
            }
        }
    }
    let _ = writeln!(
        report,
        "verify: {}/{} draws passed (seed {seed})",
        draws - failures,
        draws
    );
    if failures > 0 {
        return Err(CliError::VerificationFailed(report));
    }
    Ok(report)
}

/// Evaluates the resonant closed-form efficiency.
pub fn cmd_closed_form(g_over_kappa: f64, kappa_s_over_kappa: f64, p: f64) -> String {
    format!(
        "{:.17e}",
        efficiency_closed_form(g_over_kappa, kappa_s_over_kappa, p)
    )
}

/// Convenience used by tests and examples: branch fidelities of a corrupted
/// feed-forward (sign convention deliberately inverted), to show the
/// verification suite has teeth.
pub fn corrupted_feed_forward_fidelities(
    params: &CavityParams,
    pairs: &InputPairs,
) -> Result<Vec<f64>, CliError> {
    let input = pairs.state()?;
    let postselected = checkpoint_state(Checkpoint::AfterTarget, &input, params)?;
    let ideal = ideal_hyper_cpf(&photon_part(&input));
    let branches = measure_spins(&postselected).map_err(GateError::from)?;
    let mut fidelities = Vec::with_capacity(4);
    for branch in branches {
        // Swap the roles of the two spins in the correction table: a wrong
        // wiring a careless implementation could plausibly pick.
        let wrong = apply_feed_forward(&branch.state, (branch.outcome.1, branch.outcome.0));
        fidelities.push(fidelity(&wrong, &ideal).map_err(GateError::from)?);
    }
    Ok(fidelities)
}

/// Writes text to a path, creating parent directories as needed.
pub fn write_output(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, contents)?;
    Ok(())
}

/// Exit codes used by the binary.
pub mod exit_code {
    pub const OK: i32 = 0;
    pub const ERROR: i32 = 1;
    pub const GATE_INOPERATIVE: i32 = 2;
}

/// Maps an error to the binary's exit code.
pub fn exit_code_for(err: &CliError) -> i32 {
    match err {
        CliError::Gate(GateError::Inoperative { .. }) => exit_code::GATE_INOPERATIVE,
        _ => exit_code::ERROR,
    }
}
