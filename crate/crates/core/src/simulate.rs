//! Monte Carlo error-rate experiments for the selection criteria.
//!
//! Data follow `y = beta0 + X b + sigma * eps` with the first `p_active`
//! coefficients equal to `active_value` and the rest zero. Each replication
//! draws from its own ChaCha20 stream keyed by `(seed, replication index)`,
//! so results do not depend on how replications are scheduled.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::criteria::{classify, Criterion, ModelSpace};
use crate::error::{Error, Result};
use crate::linalg::{Dataset, Matrix, SubsetMask};
use crate::subset::{CandidateSet, EngineOptions};

pub use crate::criteria::RatePair;

/// Design regenerations allowed per replication before giving up.
pub const MAX_REGENERATIONS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScenarioKind {
    /// i.i.d. standard normal predictors.
    Weak,
    /// The first `group_size` active and the first `group_size` inactive
    /// predictors each share a latent factor, giving pairwise correlation `rho`
    /// inside each group.
    Correlated { rho: f64, group_size: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub n: usize,
    pub p: usize,
    pub p_active: usize,
    pub sigma: f64,
    pub beta0: f64,
    pub active_value: f64,
}

impl Scenario {
    pub fn weak(n: usize, p: usize, p_active: usize) -> Self {
        Self { kind: ScenarioKind::Weak, n, p, p_active, sigma: 1.0, beta0: 1.0, active_value: 1.0 }
    }

    pub fn correlated(n: usize, p: usize, p_active: usize, rho: f64) -> Self {
        Self {
            kind: ScenarioKind::Correlated { rho, group_size: 5 },
            ..Self::weak(n, p, p_active)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.p == 0 {
            return Err(Error::InvalidScenario("n and p must be positive"));
        }
        if self.p_active > self.p {
            return Err(Error::InvalidScenario("p_active exceeds p"));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidScenario("sigma must be positive"));
        }
        if !(self.beta0.is_finite() && self.active_value.is_finite()) {
            return Err(Error::InvalidScenario("coefficients must be finite"));
        }
        if let ScenarioKind::Correlated { rho, group_size } = self.kind {
            if !(0.0..1.0).contains(&rho) {
                return Err(Error::InvalidScenario("rho must lie in [0, 1)"));
            }
            if group_size > self.p_active.min(self.p - self.p_active) {
                return Err(Error::InvalidScenario("group_size exceeds the active or inactive count"));
            }
        }
        Ok(())
    }

    /// Mask of the truly active predictors.
    pub fn truth(&self) -> SubsetMask {
        SubsetMask::new(1..=self.p_active)
    }

    /// False when a correlated scenario uses a shape other than the
    /// reference `(p, p_active, group_size) = (20, 10, 5)` layout.
    pub fn is_reference_design(&self) -> bool {
        match self.kind {
            ScenarioKind::Weak => true,
            ScenarioKind::Correlated { group_size, .. } => group_size == 5 && self.p == 20 && self.p_active == 10,
        }
    }
}

/// `n x p` matrix of i.i.d. standard normals, filled column by column.
pub fn gen_weak_design<R: Rng + ?Sized>(n: usize, p: usize, rng: &mut R) -> Matrix {
    let data = (0..n * p).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    Matrix::from_col_major(n, p, data).expect("n * p entries")
}

/// Mixing weight `w` with `w^2 / ((1 - w)^2 + w^2) = rho`.
pub fn rho_to_w(rho: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::Domain("rho must lie in [0, 1)"));
    }
    let r = libm::sqrt(rho / (1.0 - rho));
    Ok(r / (1.0 + r))
}

/// Design with two correlated groups: `x_i = (1 - w) z_i + w A` for the first
/// `group_size` active columns and the same with factor `B` for the first
/// `group_size` inactive columns. Columns keep variance `(1 - w)^2 + w^2`.
///
/// The independent part is drawn exactly as [`gen_weak_design`] draws it and
/// the factors afterwards, so `rho = 0` reproduces the weak design.
pub fn gen_correlated_design<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R) -> Result<Matrix> {
    scenario.validate()?;
    let ScenarioKind::Correlated { rho, group_size } = scenario.kind else {
        return Ok(gen_weak_design(scenario.n, scenario.p, rng));
    };
    let n = scenario.n;
    let mut x = gen_weak_design(n, scenario.p, rng);
    let factor_a: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let factor_b: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let w = rho_to_w(rho)?;
    let groups = [(0, &factor_a), (scenario.p_active, &factor_b)];
    for (start, factor) in groups {
        for j in start..start + group_size {
            for (v, f) in x.column_mut(j).iter_mut().zip(factor.iter()) {
                *v = (1.0 - w) * *v + w * f;
            }
        }
    }
    Ok(x)
}

pub fn gen_design<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R) -> Result<Matrix> {
    match scenario.kind {
        ScenarioKind::Weak => Ok(gen_weak_design(scenario.n, scenario.p, rng)),
        ScenarioKind::Correlated { .. } => gen_correlated_design(scenario, rng),
    }
}

pub fn gen_response<R: Rng + ?Sized>(x: &Matrix, scenario: &Scenario, rng: &mut R) -> Result<Vec<f64>> {
    if x.cols() < scenario.p_active {
        return Err(Error::DimensionMismatch("design has fewer columns than active predictors"));
    }
    let mut y = vec![scenario.beta0; x.rows()];
    for j in 0..scenario.p_active {
        for (yi, xi) in y.iter_mut().zip(x.column(j)) {
            *yi += scenario.active_value * xi;
        }
    }
    for yi in y.iter_mut() {
        *yi += scenario.sigma * rng.sample::<f64, _>(StandardNormal);
    }
    Ok(y)
}

/// Independent generator for replication `rep`.
pub fn replication_rng(seed: u64, rep: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}

/// Per-criterion rates of one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct Replication {
    pub rates: Vec<RatePair>,
    /// Designs thrown away because the full model was singular.
    pub regenerated: usize,
}

/// Generates one dataset and scores every criterion on it.
pub fn run_replication(
    scenario: &Scenario,
    criteria: &[Criterion],
    opts: &EngineOptions,
    seed: u64,
    rep: u64,
) -> Result<Replication> {
    let mut rng = replication_rng(seed, rep);
    let truth = scenario.truth();
    for attempt in 0..=MAX_REGENERATIONS {
        let x = gen_design(scenario, &mut rng)?;
        let y = gen_response(&x, scenario, &mut rng)?;
        let data = Dataset::with_default_names(x, y)?;
        let space = match ModelSpace::new(&data, &CandidateSet::AllSubsets, opts) {
            Ok(space) => space,
            Err(Error::RankDeficient | Error::DegenerateFit) => continue,
            Err(e) => return Err(e),
        };
        let rates = criteria
            .iter()
            .map(|&c| space.choose(c).map(|chosen| classify(chosen, &truth, scenario.p)))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Replication { rates, regenerated: attempt });
    }
    Err(Error::RetriesExhausted(MAX_REGENERATIONS + 1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionSummary {
    pub criterion: Criterion,
    /// Rates averaged over all replications.
    pub mean: RatePair,
    /// Share of replications that selected exactly the true model.
    pub zero_error_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloResult {
    pub scenario: Scenario,
    pub reps: usize,
    pub seed: u64,
    pub summaries: Vec<CriterionSummary>,
    pub regenerated: usize,
}

impl MonteCarloResult {
    /// Averages replication outcomes in index order.
    pub fn aggregate(scenario: Scenario, criteria: &[Criterion], seed: u64, outcomes: &[Replication]) -> Self {
        let reps = outcomes.len();
        let summaries = criteria
            .iter()
            .enumerate()
            .map(|(c, &criterion)| {
                let (mut fir, mut far, mut perfect) = (0.0, 0.0, 0usize);
                for o in outcomes {
                    let r = o.rates[c];
                    fir += r.fir;
                    far += r.far;
                    perfect += usize::from(r.is_perfect());
                }
                let denom = reps as f64;
                CriterionSummary {
                    criterion,
                    mean: RatePair { fir: fir / denom, far: far / denom },
                    zero_error_fraction: perfect as f64 / denom,
                }
            })
            .collect();
        let regenerated = outcomes.iter().map(|o| o.regenerated).sum();
        Self { scenario, reps, seed, summaries, regenerated }
    }

    pub fn summary(&self, criterion: Criterion) -> Option<&CriterionSummary> {
        self.summaries.iter().find(|s| s.criterion == criterion)
    }
}

pub(crate) fn check_run(scenario: &Scenario, reps: usize, opts: &EngineOptions) -> Result<()> {
    scenario.validate()?;
    if reps == 0 {
        return Err(Error::Domain("reps must be at least 1"));
    }
    if scenario.p > opts.limit {
        return Err(Error::LimitExceeded { p: scenario.p, limit: opts.limit });
    }
    Ok(())
}

/// Runs `reps` replications one after another. The multi-threaded driver in
/// the `cmc` crate produces bit-identical results.
pub fn run_monte_carlo(scenario: &Scenario, criteria: &[Criterion], reps: usize, seed: u64) -> Result<MonteCarloResult> {
    run_monte_carlo_with(scenario, criteria, reps, seed, &EngineOptions::default())
}

pub fn run_monte_carlo_with(
    scenario: &Scenario,
    criteria: &[Criterion],
    reps: usize,
    seed: u64,
    opts: &EngineOptions,
) -> Result<MonteCarloResult> {
    check_run(scenario, reps, opts)?;
    let outcomes = (0..reps as u64)
        .map(|r| run_replication(scenario, criteria, opts, seed, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(MonteCarloResult::aggregate(*scenario, criteria, seed, &outcomes))
}
