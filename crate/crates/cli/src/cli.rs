//! Command-line interface.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use omaslab::bounds::{self, default_large_n_epsilon, thm1_bound, thm2_bound, thm3_bound};
use omaslab::graphon::ExpectedGraph;
use omaslab::rng::substream;
use omaslab::spectral::{exp_mu2, exp_mu2_max, sbm_mu2_analytic, sbm_reduction, ExpMu2Method};
use omaslab::Real;

use crate::compare;
use crate::experiment::{
    self, DistFamily, ETermSpec, ExperimentSpec, OpenExperiment, OracleCheckExperiment,
    ReplacementExperiment,
};
use crate::graphon_spec::GraphonSpec;
use crate::output;

#[derive(Parser)]
#[command(
    name = "omaslab",
    version,
    about = "Open multi-agent consensus on graphon-sampled topologies: \
             sampling, spectra, simulation, and disagreement bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a simple graph and emit its edge list as CSV
    Sample {
        /// Graphon: constant:P, two-block:P,Q, or sbm:FILE.json
        #[arg(long)]
        graphon: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Laplacian spectrum of a sampled (or the expected) graph as CSV
    Spectrum {
        #[arg(long)]
        graphon: String,
        #[arg(long)]
        n: usize,
        /// Use the expected (weighted) graph instead of a sample
        #[arg(long)]
        expected: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Normalized algebraic connectivity of an SBM expected graph through
    /// the block-level reduction
    Mu2Sbm {
        #[arg(long)]
        graphon: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate E[e^(-2 gamma mu2)] exactly or by Monte Carlo
    ExpMu2 {
        #[arg(long)]
        graphon: String,
        #[arg(long)]
        gamma: f64,
        /// Single size (exclusive with --n-min/--n-max)
        #[arg(long)]
        n: Option<usize>,
        /// Maximize the estimate over n in [n-min, n-max]
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, value_enum, default_value_t = MethodArg::Mc)]
        method: MethodArg,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form bound reports (JSON)
    Bound {
        #[command(subcommand)]
        formula: BoundCmd,
    },
    /// Check the large-n preconditions of the spectral bound
    CheckLargeN {
        #[arg(long)]
        graphon: String,
        #[arg(long)]
        n: usize,
        /// Tolerance parameter in (0, e^-1); defaults to the midpoint
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a simulation campaign and compare against the matching bound
    Simulate {
        #[command(subcommand)]
        process: SimulateCmd,
    },
    /// Execute an experiment spec document (JSON)
    Run {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Override the document's master seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Tabulate empirical-vs-bound results across run summaries
    Compare {
        /// summary.json files produced by `simulate` / `run`
        summaries: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Exact,
    Mc,
    Thm3,
}

#[derive(Args, Clone)]
struct ETermArgs {
    /// e-term given directly (in (0, 1])
    #[arg(long)]
    e_term: Option<f64>,
    /// Fixed connectivity: e-term = exp(-2 gamma mu2)
    #[arg(long)]
    mu2: Option<f64>,
    /// Estimation method when no direct value is given
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[arg(long, default_value_t = 10_000)]
    e_term_trials: usize,
    /// Standard errors added to Monte Carlo e-term estimates
    #[arg(long, default_value_t = 3.0)]
    stderr_inflation: f64,
}

impl ETermArgs {
    fn to_spec(&self) -> ETermSpec {
        if let Some(value) = self.e_term {
            ETermSpec::Value { value }
        } else if let Some(mu2) = self.mu2 {
            ETermSpec::FixedMu2 { mu2 }
        } else {
            match self.method {
                Some(MethodArg::Exact) => ETermSpec::Exact,
                Some(MethodArg::Thm3) => ETermSpec::Thm3,
                _ => ETermSpec::MonteCarlo {
                    trials: self.e_term_trials,
                    stderr_inflation: self.stderr_inflation,
                },
            }
        }
    }
}

#[derive(Subcommand)]
enum BoundCmd {
    /// Replacement-system steady-state disagreement bound
    Thm1 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sigma2: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        graphon: Option<String>,
        #[command(flatten)]
        e_term: ETermArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Arrival/departure steady-state disagreement bound (needs n-max > 3)
    Thm2 {
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        sigma2: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        graphon: Option<String>,
        #[command(flatten)]
        e_term: ETermArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spectral bound on E[e^(-2 gamma mu2)] from the expected connectivity
    Thm3 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        gamma: f64,
        /// Expected normalized connectivity (computed from --graphon when omitted)
        #[arg(long)]
        mu2_bar: Option<f64>,
        #[arg(long)]
        graphon: Option<String>,
        /// Tolerance parameter for the large-n check (midpoint default)
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SimulateCmd {
    /// Replacement process at fixed size
    Replacements {
        #[arg(long)]
        graphon: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        sigma2: f64,
        /// Uniform arrival values instead of Gaussian
        #[arg(long)]
        uniform: bool,
        #[arg(long)]
        events: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        burn_in: f64,
        /// Keep the first sampled topology for the whole run
        #[arg(long)]
        no_resample: bool,
        /// Trajectory CSVs to write (first N trials)
        #[arg(long, default_value_t = 1)]
        dump_trials: usize,
        #[command(flatten)]
        e_term: ETermArgs,
    },
    /// Arrival/departure process with bounded size
    Open {
        #[arg(long)]
        graphon: String,
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        /// Initial size (midpoint default)
        #[arg(long)]
        n0: Option<usize>,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        sigma2: f64,
        #[arg(long)]
        uniform: bool,
        #[arg(long)]
        events: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        burn_in: f64,
        #[arg(long, default_value_t = 1)]
        dump_trials: usize,
        #[command(flatten)]
        e_term: ETermArgs,
    },
    /// Exact-enumeration vs Monte Carlo oracle check (n <= 5)
    OracleCheck {
        #[arg(long)]
        graphon: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_json(value: &impl Serialize, out: Option<&PathBuf>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(&text, out)
}

pub fn main_impl() -> Result<()> {
    let cli = Cli::parse();
    dispatch(cli.command)
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Sample {
            graphon,
            n,
            seed,
            out,
        } => {
            let g = GraphonSpec::parse(&graphon)?.build()?;
            let expected = ExpectedGraph::new(&g, n)?;
            let sample = expected.sample(&mut substream(seed, &[]));
            emit(&output::edges_csv(&sample), out.as_ref())
        }
        Command::Spectrum {
            graphon,
            n,
            expected,
            seed,
            out,
        } => {
            let g = GraphonSpec::parse(&graphon)?.build()?;
            let graph = ExpectedGraph::new(&g, n)?;
            let spectrum = if expected {
                graph.spectrum()
            } else {
                graph.sample(&mut substream(seed, &[])).spectrum()
            };
            emit(&output::spectrum_csv(&spectrum), out.as_ref())
        }
        Command::Mu2Sbm { graphon, n, out } => {
            let g = GraphonSpec::parse(&graphon)?.build()?;
            let reduction = sbm_reduction(&g, n)?;
            let lambda2 = (reduction.blocks() > 1).then(|| reduction.l_sbm_eigenvalues(&g, n)[1]);
            #[derive(Serialize)]
            struct Mu2Output {
                n: usize,
                blocks: usize,
                block_sizes: Vec<usize>,
                delta_min: f64,
                #[serde(skip_serializing_if = "Option::is_none")]
                lambda2_l_sbm: Option<f64>,
                mu2_bar: f64,
            }
            emit_json(
                &Mu2Output {
                    n,
                    blocks: reduction.blocks(),
                    block_sizes: reduction.block_sizes().to_vec(),
                    delta_min: reduction.delta_min(),
                    lambda2_l_sbm: lambda2,
                    mu2_bar: sbm_mu2_analytic(&g, n)?,
                },
                out.as_ref(),
            )
        }
        Command::ExpMu2 {
            graphon,
            gamma,
            n,
            n_min,
            n_max,
            method,
            trials,
            seed,
            out,
        } => {
            let g = GraphonSpec::parse(&graphon)?.build()?;
            let m = match method {
                MethodArg::Exact => ExpMu2Method::Exact,
                MethodArg::Mc => ExpMu2Method::MonteCarlo { trials },
                MethodArg::Thm3 => bail!("exp-mu2 estimates directly; use `bound thm3` instead"),
            };
            let mut rng = substream(seed, &[omaslab::rng::purpose::ESTIMATE]);
            let estimate = match (n, n_min, n_max) {
                (Some(n), None, None) => exp_mu2(&ExpectedGraph::new(&g, n)?, gamma, m, &mut rng)?,
                (None, Some(lo), Some(hi)) => exp_mu2_max(&g, gamma, lo, hi, m, &mut rng)?,
                _ => bail!("give either --n or both --n-min and --n-max"),
            };
            emit_json(&estimate, out.as_ref())
        }
        Command::Bound { formula } => run_bound(formula),
        Command::CheckLargeN {
            graphon,
            n,
            epsilon,
            out,
        } => {
            let spec = GraphonSpec::parse(&graphon)?;
            let g = spec.build()?;
            let epsilon = epsilon.unwrap_or_else(default_large_n_epsilon::<Real>);
            let report = bounds::large_enough_for(&g, n, epsilon)?;
            #[derive(Serialize)]
            struct LargeNOutput {
                graphon: String,
                n: usize,
                epsilon: f64,
                #[serde(flatten)]
                report: bounds::LargeEnoughReport,
            }
            emit_json(
                &LargeNOutput {
                    graphon: spec.label(),
                    n,
                    epsilon,
                    report,
                },
                out.as_ref(),
            )
        }
        Command::Simulate { process } => run_simulate(process),
        Command::Run { spec, out, seed } => {
            let mut spec = experiment::load_spec(&spec)?;
            if let Some(seed) = seed {
                spec.set_seed(seed);
            }
            let manifest = experiment::run(&spec, &out)?;
            println!(
                "run complete: {} output file(s) under {}",
                manifest.outputs.len(),
                out.display()
            );
            Ok(())
        }
        Command::Compare { summaries, out } => {
            let rows = compare::compare(&summaries)?;
            let (wide, long) = compare::write_comparison(&rows, &out)?;
            println!("wrote {} and {}", wide.display(), long.display());
            Ok(())
        }
    }
}

fn run_bound(formula: BoundCmd) -> Result<()> {
    match formula {
        BoundCmd::Thm1 {
            n,
            sigma2,
            gamma,
            graphon,
            e_term,
            seed,
            out,
        } => {
            let spec = e_term.to_spec();
            let report = match (&spec, graphon) {
                (ETermSpec::Value { value }, _) => {
                    thm1_bound(n, sigma2, gamma, *value, bounds::ETermSource::Given)?
                }
                (_, Some(graphon)) => {
                    let g = GraphonSpec::parse(&graphon)?.build()?;
                    let resolved = experiment::resolve_e_term(&spec, &g, n, gamma, seed)?;
                    thm1_bound(n, sigma2, gamma, resolved.value, resolved.source)?
                }
                (ETermSpec::FixedMu2 { mu2 }, None) => {
                    let value: f64 = (-2.0 * gamma * mu2).exp();
                    thm1_bound(n, sigma2, gamma, value, bounds::ETermSource::FixedMu2)?
                }
                _ => bail!("estimating the e-term needs --graphon (or give --e-term / --mu2)"),
            };
            emit_json(&report, out.as_ref())
        }
        BoundCmd::Thm2 {
            n_min,
            n_max,
            sigma2,
            gamma,
            graphon,
            e_term,
            seed,
            out,
        } => {
            let spec = e_term.to_spec();
            let report = match (&spec, graphon) {
                (ETermSpec::Value { value }, _) => thm2_bound(
                    n_min,
                    n_max,
                    sigma2,
                    gamma,
                    *value,
                    bounds::ETermSource::Given,
                )?,
                (_, Some(graphon)) => {
                    let g = GraphonSpec::parse(&graphon)?.build()?;
                    let resolved =
                        experiment::resolve_e_term_max(&spec, &g, n_min, n_max, gamma, seed)?;
                    thm2_bound(n_min, n_max, sigma2, gamma, resolved.value, resolved.source)?
                }
                (ETermSpec::FixedMu2 { mu2 }, None) => {
                    let value: f64 = (-2.0 * gamma * mu2).exp();
                    thm2_bound(
                        n_min,
                        n_max,
                        sigma2,
                        gamma,
                        value,
                        bounds::ETermSource::FixedMu2,
                    )?
                }
                _ => bail!("estimating the e-term needs --graphon (or give --e-term / --mu2)"),
            };
            emit_json(&report, out.as_ref())
        }
        BoundCmd::Thm3 {
            n,
            gamma,
            mu2_bar,
            graphon,
            epsilon,
            out,
        } => {
            let graphon = graphon
                .map(|g| GraphonSpec::parse(&g)?.build())
                .transpose()?;
            let mu2_bar = match (mu2_bar, graphon.as_ref()) {
                (Some(value), _) => value,
                (None, Some(g)) => sbm_mu2_analytic(g, n)?,
                (None, None) => bail!("give --mu2-bar or --graphon"),
            };
            let mut report = thm3_bound(mu2_bar, n, gamma)?;
            if let Some(g) = graphon.as_ref() {
                let epsilon = epsilon.unwrap_or_else(default_large_n_epsilon::<Real>);
                report = report.with_large_n(bounds::large_enough_for(g, n, epsilon)?.satisfied);
            }
            emit_json(&report, out.as_ref())
        }
    }
}

fn run_simulate(process: SimulateCmd) -> Result<()> {
    let (spec, out) = match process {
        SimulateCmd::Replacements {
            graphon,
            n,
            gamma,
            sigma2,
            uniform,
            events,
            trials,
            seed,
            out,
            burn_in,
            no_resample,
            dump_trials,
            e_term,
        } => (
            ExperimentSpec::Replacements(ReplacementExperiment {
                graphon: GraphonSpec::parse(&graphon)?,
                n,
                gamma,
                sigma2,
                family: if uniform {
                    DistFamily::Uniform
                } else {
                    DistFamily::Gaussian
                },
                events,
                trials,
                burn_in,
                seed,
                resample_topology: !no_resample,
                e_term: e_term.to_spec(),
                dump_trials,
            }),
            out,
        ),
        SimulateCmd::Open {
            graphon,
            n_min,
            n_max,
            n0,
            gamma,
            sigma2,
            uniform,
            events,
            trials,
            seed,
            out,
            burn_in,
            dump_trials,
            e_term,
        } => (
            ExperimentSpec::Open(OpenExperiment {
                graphon: GraphonSpec::parse(&graphon)?,
                n_min,
                n_max,
                n0,
                gamma,
                sigma2,
                family: if uniform {
                    DistFamily::Uniform
                } else {
                    DistFamily::Gaussian
                },
                events,
                trials,
                burn_in,
                seed,
                e_term: e_term.to_spec(),
                dump_trials,
            }),
            out,
        ),
        SimulateCmd::OracleCheck {
            graphon,
            n,
            gamma,
            trials,
            seed,
            out,
        } => (
            ExperimentSpec::OracleCheck(OracleCheckExperiment {
                graphon: GraphonSpec::parse(&graphon)?,
                n,
                gamma,
                trials,
                seed,
            }),
            out,
        ),
    };
    experiment::run(&spec, &out)?;
    let summary = std::fs::read_to_string(out.join("summary.json"))?;
    print!("{summary}");
    Ok(())
}
