//! Command-line definition and command execution.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cmc_core::criteria::select;
use cmc_core::{
    alpha_schedule, standardize, CandidateSet, Criterion, Dataset, EngineOptions, ModelSpace, Scenario, ScenarioKind,
    SelectionReport,
};

use crate::data::{load_candidates, load_csv, load_prostate, prostate_path, PROSTATE_RESPONSE};
use crate::error::{CliError, Result};
use crate::parallel::run_monte_carlo_parallel;
use crate::report::{self, SelectMeta};
use crate::tables::preset;

#[derive(Debug, Parser)]
#[command(name = "cmc", version, about = "Best subset selection with the constrained minimum criterion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Select a model for a dataset under one or more criteria.
    Select(SelectArgs),
    /// Estimate selection error rates for one simulated scenario.
    Simulate(SimulateArgs),
    /// Reproduce a preset grid of simulated error rates.
    Tables(TablesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    Weak,
    Correlated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Adjr2,
    #[value(alias = "aic", alias = "cp_aic")]
    Cp,
    Bic,
    Cmc,
}

#[derive(Debug, Args)]
pub struct CriteriaArgs {
    /// Criteria to evaluate; `cmc` expands to one entry per alpha.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "adjr2,cp,bic,cmc")]
    pub criteria: Vec<CriterionArg>,
    /// Significance levels for CMC.
    #[arg(long, value_delimiter = ',', default_value = "0.9,0.5,0.1")]
    pub alphas: Vec<f64>,
}

impl CriteriaArgs {
    fn resolve(&self, extra_alphas: &[f64]) -> Result<Vec<Criterion>> {
        for &a in self.alphas.iter().chain(extra_alphas) {
            if !(0.0..=1.0).contains(&a) {
                return Err(CliError::Config(format!("alpha {a} outside [0, 1]")));
            }
        }
        let mut out = Vec::new();
        for c in &self.criteria {
            match c {
                CriterionArg::Adjr2 => out.push(Criterion::AdjR2),
                CriterionArg::Cp => out.push(Criterion::Cp),
                CriterionArg::Bic => out.push(Criterion::Bic),
                CriterionArg::Cmc => out.extend(self.alphas.iter().chain(extra_alphas).map(|&a| Criterion::cmc(a))),
            }
        }
        out.dedup();
        if out.is_empty() {
            return Err(CliError::Config("no criteria requested".into()));
        }
        Ok(out)
    }
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    /// CSV file with a header row.
    #[arg(long, required_unless_present = "prostate", conflicts_with = "prostate")]
    pub data: Option<PathBuf>,
    /// Use the prostate cancer fixture (lpsa response).
    #[arg(long)]
    pub prostate: bool,
    /// Response column name.
    #[arg(long, default_value = "y")]
    pub response: String,
    #[command(flatten)]
    pub criteria: CriteriaArgs,
    /// Add CMC at the level alpha_n = P(F > n^delta) for each delta.
    #[arg(long, value_delimiter = ',')]
    pub alpha_delta: Vec<f64>,
    /// Scale predictors to mean 0 and standard deviation 1 before fitting.
    #[arg(long)]
    pub standardize: bool,
    /// Candidate models: all, best-per-size or list:<path>.
    #[arg(long, default_value = "all")]
    pub candidates: String,
    /// Largest p accepted by the exhaustive search.
    #[arg(long, default_value_t = cmc_core::subset::DEFAULT_SUBSET_LIMIT)]
    pub limit: usize,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Monte Carlo replications.
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value = "weak")]
    pub scenario: ScenarioArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: usize,
    /// Number of active predictors (the first p* columns).
    #[arg(long)]
    pub p_active: usize,
    /// Within-group correlation for the correlated design.
    #[arg(long, default_value_t = 0.5)]
    pub rho: f64,
    /// Size of each correlated group.
    #[arg(long, default_value_t = 5)]
    pub group_size: usize,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[command(flatten)]
    pub criteria: CriteriaArgs,
    /// Largest p accepted by the exhaustive search.
    #[arg(long, default_value_t = cmc_core::subset::DEFAULT_SUBSET_LIMIT)]
    pub limit: usize,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    /// Preset: 1 (weak correlation), 2 (consistency), 3 (correlated groups).
    #[arg(long)]
    pub table: u8,
    #[command(flatten)]
    pub run: RunArgs,
}

fn candidate_set(spec: &str, data: &Dataset) -> Result<CandidateSet> {
    match spec {
        "all" => Ok(CandidateSet::AllSubsets),
        "best-per-size" => Ok(CandidateSet::BestPerSize),
        other => match other.strip_prefix("list:") {
            Some(path) => Ok(CandidateSet::explicit(load_candidates(path.as_ref(), data)?)),
            None => Err(CliError::Config(format!("unknown candidate set {other:?}"))),
        },
    }
}

/// Fits every requested criterion on one dataset.
pub fn run_select(args: &SelectArgs) -> Result<(SelectMeta, Dataset, Vec<SelectionReport>)> {
    let (raw, source, response) = if args.prostate {
        let path = prostate_path();
        (load_prostate(&path)?, path.display().to_string(), PROSTATE_RESPONSE.to_owned())
    } else {
        let path = args.data.as_ref().expect("clap requires --data without --prostate");
        (load_csv(path, &args.response)?, path.display().to_string(), args.response.clone())
    };
    let data = if args.standardize { standardize(&raw)? } else { raw };
    let scheduled = args
        .alpha_delta
        .iter()
        .map(|&d| alpha_schedule(data.n(), d, data.q()))
        .collect::<cmc_core::Result<Vec<_>>>()?;
    let criteria = args.criteria.resolve(&scheduled)?;
    let cands = candidate_set(&args.candidates, &data)?;
    let opts = EngineOptions { limit: args.limit, ..EngineOptions::default() };
    let reports = match cands {
        // One search serves every criterion.
        CandidateSet::AllSubsets | CandidateSet::BestPerSize => {
            let space = ModelSpace::new(&data, &cands, &opts)?;
            criteria.iter().map(|&c| space.report(&data, c)).collect::<cmc_core::Result<Vec<_>>>()?
        }
        CandidateSet::ExplicitList(_) => {
            criteria.iter().map(|&c| select(&data, &cands, &opts, c)).collect::<cmc_core::Result<Vec<_>>>()?
        }
    };
    let meta = SelectMeta { source, response, standardized: args.standardize, candidates: cands.label().to_owned() };
    Ok((meta, data, reports))
}

pub fn scenario_from(args: &SimulateArgs) -> Scenario {
    let kind = match args.scenario {
        ScenarioArg::Weak => ScenarioKind::Weak,
        ScenarioArg::Correlated => ScenarioKind::Correlated { rho: args.rho, group_size: args.group_size },
    };
    Scenario { kind, sigma: args.sigma, ..Scenario::weak(args.n, args.p, args.p_active) }
}

fn check_reps(run: &RunArgs) -> Result<()> {
    if run.reps == 0 {
        return Err(CliError::Config("--reps must be at least 1".into()));
    }
    Ok(())
}

/// Executes a parsed command and returns what belongs on stdout.
pub fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Select(args) => {
            let (meta, data, reports) = run_select(args)?;
            match args.format {
                Format::Table => Ok(report::select_text(&meta, &data, &reports)),
                Format::Json => Ok(report::to_canonical_json(&report::select_json(&meta, &data, &reports))),
                Format::Csv => report::select_csv(&data, &reports),
            }
        }
        Command::Simulate(args) => {
            check_reps(&args.run)?;
            let scenario = scenario_from(args);
            if !scenario.is_reference_design() {
                log::warn!("correlated layout differs from the reference (p, p*, group) = (20, 10, 5)");
            }
            let criteria = args.criteria.resolve(&[])?;
            let opts = EngineOptions { limit: args.limit, ..EngineOptions::default() };
            let result =
                run_monte_carlo_parallel(&scenario, &criteria, args.run.reps, args.run.seed, &opts, args.run.threads)?;
            match args.run.format {
                Format::Table => Ok(report::simulate_text(&result)),
                Format::Json => Ok(report::to_canonical_json(&report::simulate_json(&result))),
                Format::Csv => report::simulate_csv(&result),
            }
        }
        Command::Tables(args) => {
            check_reps(&args.run)?;
            let preset = preset(args.table)?;
            let opts = EngineOptions { limit: preset.limit, ..EngineOptions::default() };
            let mut results = Vec::with_capacity(preset.rows.len());
            for row in &preset.rows {
                log::info!("table {} row {}", preset.table, row.label);
                results.push(run_monte_carlo_parallel(
                    &row.scenario,
                    &row.criteria,
                    args.run.reps,
                    args.run.seed,
                    &opts,
                    args.run.threads,
                )?);
            }
            let (reps, seed) = (args.run.reps, args.run.seed);
            match args.run.format {
                Format::Table => Ok(report::tables_text(&preset, &results, reps, seed)),
                Format::Json => Ok(report::to_canonical_json(&report::tables_json(&preset, &results, reps, seed))),
                Format::Csv => report::tables_csv(&preset, &results),
            }
        }
    }
}
