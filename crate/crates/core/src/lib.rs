//! Best-subset variable selection for Gaussian linear models under the
//! constrained minimum criterion (CMC): pick the sparsest model whose
//! likelihood-ratio statistic against the full model stays below
//! `q * F(1 - alpha; q, n - q)`.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the command line
//! and multi-threaded Monte Carlo live in the companion `cmc` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod criteria;
pub mod dist;
mod error;
pub mod linalg;
pub mod simulate;
pub mod subset;

pub use criteria::{
    adjr2_select, alpha_schedule, bic_select, classify, cmc_select, cp_select, kappa,
    lambda_stat, CmcConfig, Criterion, ModelSpace, SelectionReport,
};
pub use dist::{f_cdf, f_quantile, f_sf, reg_inc_beta, FParams};
pub use error::{Error, Result};
pub use linalg::{fit_subset, full_model_variance, standardize, Dataset, FitSummary, Matrix, SubsetMask};
pub use simulate::{run_monte_carlo, MonteCarloResult, RatePair, Scenario, ScenarioKind};
pub use subset::{best_per_size, enumerate_fits, CandidateSet, EngineOptions, PerSizeBest, SizeBest};
