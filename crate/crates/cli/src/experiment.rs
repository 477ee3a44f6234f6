//! Experiment specifications, Monte Carlo orchestration, and run manifests.
//!
//! An [`ExperimentSpec`] is a JSON-compatible document describing one run:
//! a replacement or arrival/departure simulation campaign, a bound sweep,
//! or an exact-vs-Monte-Carlo oracle check. [`run`] executes it, writes a
//! summary (and per-trial trajectory CSVs) into the output directory, and
//! returns a manifest with content digests — re-running the same spec with
//! the same seed reproduces every output byte for byte.

use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use omaslab::bounds::{
    self, default_large_n_epsilon, expected_n_limit, thm1_bound, thm2_bound, thm3_bound,
    ETermSource, FormulaTag,
};
use omaslab::graphon::ExpectedGraph;
use omaslab::openmas::{
    simulate_open, simulate_replacements, ArrivalDistribution, InitialStates, OpenSystemConfig,
    ReplacementConfig,
};
use omaslab::rng::{derive_seed, purpose, substream};
use omaslab::spectral::{exp_mu2_exact, exp_mu2_mc, sbm_mu2_analytic};
use omaslab::{BoundReport64, Real, Sbm64, Trajectory64};

use crate::graphon_spec::GraphonSpec;
use crate::output;

fn default_true() -> bool {
    true
}

fn default_burn_in() -> f64 {
    0.5
}

fn default_dump_trials() -> usize {
    1
}

fn default_eterm_trials() -> usize {
    10_000
}

fn default_inflation() -> f64 {
    3.0
}

fn default_oracle_trials() -> usize {
    100_000
}

/// Family of the arrival distribution (variance comes from `sigma2`).
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistFamily {
    #[default]
    Gaussian,
    Uniform,
}

impl DistFamily {
    pub fn build(self, sigma2: f64) -> Result<ArrivalDistribution<Real>> {
        Ok(match self {
            DistFamily::Gaussian => ArrivalDistribution::gaussian(sigma2)?,
            DistFamily::Uniform => ArrivalDistribution::uniform(sigma2)?,
        })
    }
}

/// How the `E[e^{-2 gamma mu2}]` input of a bound is obtained.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum ETermSpec {
    /// Exact enumeration (sizes up to 5).
    Exact,
    /// Monte Carlo estimate, inflated by `stderr_inflation` standard
    /// errors so the resulting bound stays conservative.
    MonteCarlo {
        #[serde(default = "default_eterm_trials")]
        trials: usize,
        #[serde(default = "default_inflation")]
        stderr_inflation: f64,
    },
    /// `e^{-2 gamma mu2}` of a fixed known connectivity (exact for kernels
    /// whose samples are almost surely complete, e.g. `constant(1)`).
    FixedMu2 { mu2: f64 },
    /// Analytic SBM `mu2_bar` pushed through the `thm3` spectral bound.
    Thm3,
    /// Given directly.
    Value { value: f64 },
}

impl Default for ETermSpec {
    fn default() -> Self {
        ETermSpec::MonteCarlo {
            trials: default_eterm_trials(),
            stderr_inflation: default_inflation(),
        }
    }
}

/// Resolved e-term with its provenance, echoed into summaries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ETermReport {
    /// The value fed into the bound (after any inflation, clamped to 1).
    pub value: f64,
    pub source: ETermSource,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr_inflation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmax_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thm3: Option<BoundReport64>,
}

impl ETermReport {
    fn from_value(value: f64, source: ETermSource) -> Self {
        ETermReport {
            value,
            source,
            estimate: None,
            stderr: None,
            stderr_inflation: None,
            trials: None,
            argmax_n: None,
            mu2: None,
            thm3: None,
        }
    }
}

/// Replacement campaign: `trials` independent runs of `events` replacements
/// at fixed size `n`, compared against the `thm1` bound.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReplacementExperiment {
    pub graphon: GraphonSpec,
    pub n: usize,
    pub gamma: f64,
    pub sigma2: f64,
    #[serde(default)]
    pub family: DistFamily,
    pub events: usize,
    pub trials: usize,
    #[serde(default = "default_burn_in")]
    pub burn_in: f64,
    pub seed: u64,
    #[serde(default = "default_true")]
    pub resample_topology: bool,
    #[serde(default)]
    pub e_term: ETermSpec,
    #[serde(default = "default_dump_trials")]
    pub dump_trials: usize,
}

/// Arrival/departure campaign with size bounded in `[n_min, n_max]`,
/// compared against the `thm2` bound.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OpenExperiment {
    pub graphon: GraphonSpec,
    pub n_min: usize,
    pub n_max: usize,
    /// Initial size; defaults to the midpoint.
    #[serde(default)]
    pub n0: Option<usize>,
    pub gamma: f64,
    pub sigma2: f64,
    #[serde(default)]
    pub family: DistFamily,
    pub events: usize,
    pub trials: usize,
    #[serde(default = "default_burn_in")]
    pub burn_in: f64,
    pub seed: u64,
    #[serde(default)]
    pub e_term: ETermSpec,
    #[serde(default = "default_dump_trials")]
    pub dump_trials: usize,
}

/// Exact-enumeration vs Monte Carlo check of `E[e^{-2 gamma mu2}]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleCheckExperiment {
    pub graphon: GraphonSpec,
    pub n: usize,
    pub gamma: f64,
    #[serde(default = "default_oracle_trials")]
    pub trials: usize,
    pub seed: u64,
}

/// Bound values on a `gamma` grid, for comparison tables and plots.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundSweepExperiment {
    pub formula: FormulaTag,
    #[serde(default)]
    pub graphon: Option<GraphonSpec>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub n_min: Option<usize>,
    #[serde(default)]
    pub n_max: Option<usize>,
    #[serde(default)]
    pub sigma2: Option<f64>,
    pub gammas: Vec<f64>,
    #[serde(default)]
    pub e_term: Option<ETermSpec>,
    /// Direct `mu2_bar` for `thm3` sweeps without a graphon.
    #[serde(default)]
    pub mu2_bar: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

/// One experiment document.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExperimentSpec {
    Replacements(ReplacementExperiment),
    Open(OpenExperiment),
    BoundSweep(BoundSweepExperiment),
    OracleCheck(OracleCheckExperiment),
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("cannot parse experiment spec")
    }

    /// Replaces the master seed (CLI `--seed` override).
    pub fn set_seed(&mut self, seed: u64) {
        match self {
            ExperimentSpec::Replacements(e) => e.seed = seed,
            ExperimentSpec::Open(e) => e.seed = seed,
            ExperimentSpec::BoundSweep(e) => e.seed = seed,
            ExperimentSpec::OracleCheck(e) => e.seed = seed,
        }
    }
}

/// Digest of one output file, relative to the run directory.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to reproduce and verify a run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub started_at: String,
    pub finished_at: String,
    pub seed: u64,
    pub spec: serde_json::Value,
    pub outputs: Vec<OutputDigest>,
}

/// Empirical steady state: mean of the post-event disagreement over the
/// post-burn-in tail, averaged across trials; stderr across trials.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EmpiricalSummary {
    pub mean_v_after: f64,
    pub stderr: f64,
}

/// Summary of a simulation campaign; the validity flags of the embedded
/// bound report are carried verbatim.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub kind: String,
    pub graphon: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_min: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    pub gamma: f64,
    pub sigma2: f64,
    pub trials: usize,
    pub events: usize,
    pub burn_in: f64,
    pub seed: u64,
    pub empirical: EmpiricalSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_n: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_n_limit: Option<f64>,
    pub e_term: ETermReport,
    pub bound: BoundReport64,
    /// `bound - empirical mean`.
    pub margin: f64,
    pub bound_satisfied: bool,
}

/// Summary of an oracle check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleCheckSummary {
    pub kind: String,
    pub graphon: String,
    pub n: usize,
    pub gamma: f64,
    pub seed: u64,
    pub exact: f64,
    pub enumerated_graphs: usize,
    pub mc_estimate: f64,
    pub mc_stderr: f64,
    pub mc_trials: usize,
    pub abs_diff: f64,
    pub within_three_stderr: bool,
}

/// One row of a bound sweep.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepRow {
    pub gamma: f64,
    pub e_term: f64,
    pub value: f64,
    pub valid: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepSummary {
    pub kind: String,
    pub formula: FormulaTag,
    pub graphon: Option<String>,
    pub rows: Vec<SweepRow>,
}

struct TrialOutput {
    mean_v: f64,
    mean_n: f64,
    trajectory: Option<Trajectory64>,
}

/// Runs one experiment, writing results into `out_dir`.
///
/// The exit is `Ok` whenever the run completed and its files were written;
/// whether the empirical mean respects the bound is recorded in the
/// summary, not in the status.
pub fn run(spec: &ExperimentSpec, out_dir: &Path) -> Result<RunManifest> {
    let started_at = chrono::Utc::now().to_rfc3339();
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create output directory {}", out_dir.display()))?;
    let spec_echo = serde_json::to_value(spec)?;
    let (seed, mut files) = match spec {
        ExperimentSpec::Replacements(e) => (e.seed, run_replacements(e, out_dir)?),
        ExperimentSpec::Open(e) => (e.seed, run_open(e, out_dir)?),
        ExperimentSpec::OracleCheck(e) => (e.seed, run_oracle_check(e, out_dir)?),
        ExperimentSpec::BoundSweep(e) => (e.seed, run_bound_sweep(e, out_dir)?),
    };
    files.sort();
    let outputs = files
        .iter()
        .map(|rel| {
            Ok(OutputDigest {
                path: rel.clone(),
                sha256: output::sha256_hex(&out_dir.join(rel))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let manifest = RunManifest {
        tool: "omaslab".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        started_at,
        finished_at: chrono::Utc::now().to_rfc3339(),
        seed,
        spec: spec_echo,
        outputs,
    };
    output::write_json(&out_dir.join("manifest.json"), &manifest)?;
    Ok(manifest)
}

/// Steady-state aggregation across trials: the per-trial tail means are
/// combined in trial order so the result does not depend on the parallel
/// schedule.
fn aggregate(values: &[f64]) -> EmpiricalSummary {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    EmpiricalSummary {
        mean_v_after: mean,
        stderr: (var / n).sqrt(),
    }
}

fn dump_trajectories(out_dir: &Path, outputs: &[TrialOutput]) -> Result<Vec<String>> {
    let mut files = Vec::new();
    if outputs.iter().any(|t| t.trajectory.is_some()) {
        std::fs::create_dir_all(out_dir.join("trials"))?;
    }
    for (idx, trial) in outputs.iter().enumerate() {
        if let Some(trajectory) = &trial.trajectory {
            let rel = format!("trials/trial_{idx:04}.csv");
            output::write_trajectory_csv(&out_dir.join(&rel), trajectory)?;
            files.push(rel);
        }
    }
    Ok(files)
}

fn clamp_e_term(value: f64) -> f64 {
    value.min(1.0)
}

/// Resolves the e-term for a single size `n`.
pub fn resolve_e_term(
    spec: &ETermSpec,
    graphon: &Sbm64,
    n: usize,
    gamma: f64,
    seed: u64,
) -> Result<ETermReport> {
    match spec {
        ETermSpec::Exact => {
            let expected = ExpectedGraph::new(graphon, n)?;
            let est = exp_mu2_exact(&expected, gamma)?;
            let mut report = ETermReport::from_value(est.estimate, ETermSource::ExactEnumeration);
            report.estimate = Some(est.estimate);
            report.trials = Some(est.trials);
            Ok(report)
        }
        ETermSpec::MonteCarlo {
            trials,
            stderr_inflation,
        } => {
            let expected = ExpectedGraph::new(graphon, n)?;
            let mut rng = substream(seed, &[purpose::ESTIMATE, n as u64]);
            let est = exp_mu2_mc(&expected, gamma, *trials, &mut rng)?;
            let value = clamp_e_term(est.estimate + stderr_inflation * est.stderr);
            let mut report = ETermReport::from_value(value, ETermSource::MonteCarlo);
            report.estimate = Some(est.estimate);
            report.stderr = Some(est.stderr);
            report.stderr_inflation = Some(*stderr_inflation);
            report.trials = Some(*trials);
            Ok(report)
        }
        ETermSpec::FixedMu2 { mu2 } => {
            if !(0.0..=1.0).contains(mu2) {
                bail!("fixed mu2 must lie in [0, 1]");
            }
            let mut report =
                ETermReport::from_value((-2.0 * gamma * mu2).exp(), ETermSource::FixedMu2);
            report.mu2 = Some(*mu2);
            Ok(report)
        }
        ETermSpec::Thm3 => {
            let mu2_bar = sbm_mu2_analytic(graphon, n)?;
            let large_n = bounds::large_enough_for(graphon, n, default_large_n_epsilon::<Real>())?;
            let thm3 = thm3_bound(mu2_bar, n, gamma)?.with_large_n(large_n.satisfied);
            let Some(value) = thm3.as_e_term() else {
                bail!(
                    "the spectral bound is {:.6} >= 1 at n = {n}, gamma = {gamma}; \
                     it cannot serve as an e-term (try Monte Carlo estimation)",
                    thm3.value
                );
            };
            let mut report = ETermReport::from_value(value, ETermSource::SpectralBound);
            report.mu2 = Some(mu2_bar);
            report.thm3 = Some(thm3);
            Ok(report)
        }
        ETermSpec::Value { value } => {
            if !(*value > 0.0 && *value <= 1.0) {
                bail!("a given e-term must lie in (0, 1]");
            }
            Ok(ETermReport::from_value(*value, ETermSource::Given))
        }
    }
}

/// Resolves the maximal e-term over `n in [n_min, n_max]` for the
/// arrival/departure bound.
pub fn resolve_e_term_max(
    spec: &ETermSpec,
    graphon: &Sbm64,
    n_min: usize,
    n_max: usize,
    gamma: f64,
    seed: u64,
) -> Result<ETermReport> {
    let mut best: Option<ETermReport> = None;
    for n in n_min..=n_max {
        let mut candidate = resolve_e_term(spec, graphon, n, gamma, seed)?;
        candidate.argmax_n = Some(n);
        best = Some(match best {
            None => candidate,
            Some(prev) if candidate.value > prev.value => candidate,
            Some(prev) => prev,
        });
    }
    Ok(best.expect("size range is nonempty"))
}

fn run_replacements(exp: &ReplacementExperiment, out_dir: &Path) -> Result<Vec<String>> {
    if exp.trials == 0 {
        bail!("at least one trial is required");
    }
    if !(0.0..1.0).contains(&exp.burn_in) {
        bail!("burn-in fraction must lie in [0, 1)");
    }
    let graphon = exp.graphon.build()?;
    let dist = exp.family.build(exp.sigma2)?;
    // Validate the configuration once before dispatching any work.
    let template = ReplacementConfig {
        n: exp.n,
        gamma: exp.gamma,
        dist,
        events: exp.events,
        initial: InitialStates::Arrivals,
        seed: exp.seed,
        resample_topology: exp.resample_topology,
    };
    template.validate()?;
    let e_term = resolve_e_term(&exp.e_term, &graphon, exp.n, exp.gamma, exp.seed)?;
    let bound = thm1_bound(exp.n, exp.sigma2, exp.gamma, e_term.value, e_term.source)?;

    let outputs: Vec<TrialOutput> = (0..exp.trials)
        .into_par_iter()
        .map(|trial| {
            let cfg = ReplacementConfig {
                seed: derive_seed(exp.seed, &[purpose::TRIAL, trial as u64]),
                ..template.clone()
            };
            let trajectory = simulate_replacements(&graphon, &cfg)?;
            Ok(TrialOutput {
                mean_v: trajectory.mean_v_after(exp.burn_in).expect("events >= 1"),
                mean_n: exp.n as f64,
                trajectory: (trial < exp.dump_trials).then_some(trajectory),
            })
        })
        .collect::<Result<_>>()?;

    let empirical = aggregate(&outputs.iter().map(|t| t.mean_v).collect::<Vec<_>>());
    let summary = SimulationSummary {
        kind: "replacements".into(),
        graphon: exp.graphon.label(),
        n: Some(exp.n),
        n_min: None,
        n_max: None,
        gamma: exp.gamma,
        sigma2: exp.sigma2,
        trials: exp.trials,
        events: exp.events,
        burn_in: exp.burn_in,
        seed: exp.seed,
        empirical,
        mean_n: None,
        expected_n_limit: None,
        margin: bound.value - empirical.mean_v_after,
        bound_satisfied: empirical.mean_v_after <= bound.value,
        e_term,
        bound,
    };
    let mut files = dump_trajectories(out_dir, &outputs)?;
    output::write_json(&out_dir.join("summary.json"), &summary)?;
    files.push("summary.json".into());
    Ok(files)
}

fn run_open(exp: &OpenExperiment, out_dir: &Path) -> Result<Vec<String>> {
    if exp.trials == 0 {
        bail!("at least one trial is required");
    }
    if !(0.0..1.0).contains(&exp.burn_in) {
        bail!("burn-in fraction must lie in [0, 1)");
    }
    let graphon = exp.graphon.build()?;
    let dist = exp.family.build(exp.sigma2)?;
    let n0 = exp.n0.unwrap_or((exp.n_min + exp.n_max) / 2);
    let template = OpenSystemConfig {
        n_min: exp.n_min,
        n_max: exp.n_max,
        n0,
        gamma: exp.gamma,
        dist,
        events: exp.events,
        initial: InitialStates::Arrivals,
        seed: exp.seed,
    };
    template.validate()?;
    let e_term = resolve_e_term_max(
        &exp.e_term,
        &graphon,
        exp.n_min,
        exp.n_max,
        exp.gamma,
        exp.seed,
    )?;
    let bound = thm2_bound(
        exp.n_min,
        exp.n_max,
        exp.sigma2,
        exp.gamma,
        e_term.value,
        e_term.source,
    )?;

    let outputs: Vec<TrialOutput> = (0..exp.trials)
        .into_par_iter()
        .map(|trial| {
            let cfg = OpenSystemConfig {
                seed: derive_seed(exp.seed, &[purpose::TRIAL, trial as u64]),
                ..template.clone()
            };
            let trajectory = simulate_open(&graphon, &cfg)?;
            Ok(TrialOutput {
                mean_v: trajectory.mean_v_after(exp.burn_in).expect("events >= 1"),
                mean_n: trajectory.mean_n_after(exp.burn_in).expect("events >= 1"),
                trajectory: (trial < exp.dump_trials).then_some(trajectory),
            })
        })
        .collect::<Result<_>>()?;

    let empirical = aggregate(&outputs.iter().map(|t| t.mean_v).collect::<Vec<_>>());
    let mean_n = outputs.iter().map(|t| t.mean_n).sum::<f64>() / exp.trials as f64;
    let summary = SimulationSummary {
        kind: "open".into(),
        graphon: exp.graphon.label(),
        n: None,
        n_min: Some(exp.n_min),
        n_max: Some(exp.n_max),
        gamma: exp.gamma,
        sigma2: exp.sigma2,
        trials: exp.trials,
        events: exp.events,
        burn_in: exp.burn_in,
        seed: exp.seed,
        empirical,
        mean_n: Some(mean_n),
        expected_n_limit: Some(expected_n_limit::<Real>(exp.n_min, exp.n_max)?),
        margin: bound.value - empirical.mean_v_after,
        bound_satisfied: empirical.mean_v_after <= bound.value,
        e_term,
        bound,
    };
    let mut files = dump_trajectories(out_dir, &outputs)?;
    output::write_json(&out_dir.join("summary.json"), &summary)?;
    files.push("summary.json".into());
    Ok(files)
}

fn run_oracle_check(exp: &OracleCheckExperiment, out_dir: &Path) -> Result<Vec<String>> {
    let graphon = exp.graphon.build()?;
    let expected = ExpectedGraph::new(&graphon, exp.n)?;
    let exact = exp_mu2_exact(&expected, exp.gamma)?;
    let mut rng = substream(exp.seed, &[purpose::ESTIMATE]);
    let mc = exp_mu2_mc(&expected, exp.gamma, exp.trials, &mut rng)?;
    let abs_diff = (mc.estimate - exact.estimate).abs();
    let summary = OracleCheckSummary {
        kind: "oracle-check".into(),
        graphon: exp.graphon.label(),
        n: exp.n,
        gamma: exp.gamma,
        seed: exp.seed,
        exact: exact.estimate,
        enumerated_graphs: exact.trials,
        mc_estimate: mc.estimate,
        mc_stderr: mc.stderr,
        mc_trials: mc.trials,
        abs_diff,
        within_three_stderr: abs_diff <= 3.0 * mc.stderr,
    };
    output::write_json(&out_dir.join("summary.json"), &summary)?;
    Ok(vec!["summary.json".into()])
}

fn run_bound_sweep(exp: &BoundSweepExperiment, out_dir: &Path) -> Result<Vec<String>> {
    if exp.gammas.is_empty() {
        bail!("a bound sweep needs at least one gamma");
    }
    let graphon = exp.graphon.as_ref().map(GraphonSpec::build).transpose()?;
    let sigma2 = exp.sigma2.unwrap_or(1.0);
    let mut rows = Vec::with_capacity(exp.gammas.len());
    for &gamma in &exp.gammas {
        let report = match exp.formula {
            FormulaTag::Thm1 => {
                let n = exp.n.context("thm1 sweep needs n")?;
                let g = graphon.as_ref().context("thm1 sweep needs a graphon")?;
                let spec = exp.e_term.clone().unwrap_or_default();
                let e_term = resolve_e_term(&spec, g, n, gamma, exp.seed)?;
                thm1_bound(n, sigma2, gamma, e_term.value, e_term.source)?
            }
            FormulaTag::Thm2 => {
                let n_min = exp.n_min.context("thm2 sweep needs n_min")?;
                let n_max = exp.n_max.context("thm2 sweep needs n_max")?;
                let g = graphon.as_ref().context("thm2 sweep needs a graphon")?;
                let spec = exp.e_term.clone().unwrap_or_default();
                let e_term = resolve_e_term_max(&spec, g, n_min, n_max, gamma, exp.seed)?;
                thm2_bound(n_min, n_max, sigma2, gamma, e_term.value, e_term.source)?
            }
            FormulaTag::Thm3 => {
                let n = exp.n.context("thm3 sweep needs n")?;
                let mu2_bar = match (exp.mu2_bar, graphon.as_ref()) {
                    (Some(value), _) => value,
                    (None, Some(g)) => sbm_mu2_analytic(g, n)?,
                    (None, None) => bail!("thm3 sweep needs mu2_bar or a graphon"),
                };
                thm3_bound(mu2_bar, n, gamma)?
            }
        };
        rows.push(SweepRow {
            gamma,
            e_term: report.inputs.e_term.unwrap_or(f64::NAN),
            value: report.value,
            valid: report.valid,
        });
    }
    let mut csv = String::from("gamma,e_term,value,valid\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            r.gamma, r.e_term, r.value, r.valid
        ));
    }
    std::fs::write(out_dir.join("sweep.csv"), csv)?;
    let summary = SweepSummary {
        kind: "bound-sweep".into(),
        formula: exp.formula,
        graphon: exp.graphon.as_ref().map(GraphonSpec::label),
        rows,
    };
    output::write_json(&out_dir.join("summary.json"), &summary)?;
    Ok(vec!["sweep.csv".into(), "summary.json".into()])
}

/// Loads an experiment spec document from disk.
pub fn load_spec(path: &Path) -> Result<ExperimentSpec> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read spec {}", path.display()))?;
    ExperimentSpec::from_json(&text)
}

